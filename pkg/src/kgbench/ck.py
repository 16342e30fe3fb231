"""Exact symbolic *-algebra spanned by s_α s_β* over a finite k-graph.

Products of spanning terms expand through minimal common extensions::

    s_β* s_γ = Σ s_β' s_γ'*   over  ββ' = γγ',  d(ββ') = d(β) ∨ d(γ)

Equality is decided by expanding both sides to a common level L (every
term rewritten so its left path has degree L) and comparing coefficients.
This relies on the terms of a fixed degree pair being linearly independent.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .kgraph import (DegreeError, KGraph, KGraphError, Path, deg_join, deg_le, deg_sub,
                     zero)


class QQi:
    """Gaussian rational ``re + im*i`` with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> "QQi":
        if isinstance(x, QQi):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")

    @classmethod
    def parse(cls, text: str) -> "QQi":
        t = text.replace(" ", "").strip("()")
        try:
            if not t.endswith("i"):
                return cls(Fraction(t))
            body = t[:-1]
            cut = max(body.rfind("+"), body.rfind("-"))
            real, imag = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
            if imag in ("", "+", "-"):
                imag += "1"
            return cls(Fraction(real), Fraction(imag))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"bad scalar {text!r}") from None

    def __add__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = QQi.coerce(o)
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return QQi.coerce(o) - self

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __mul__(self, o):
        if not isinstance(o, (QQi, int, Fraction, str)):
            return NotImplemented
        o = QQi.coerce(o)
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = QQi.coerce(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero scalar")
        return self * QQi(o.re / n, -o.im / n)

    def conj(self) -> "QQi":
        return QQi(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        try:
            o = QQi.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im)) if self.im else hash(self.re)

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "i" if abs(self.im) == 1 else f"{abs(self.im)}i"
        if not self.re:
            return ("-" if self.im < 0 else "") + im
        return f"{self.re}{'-' if self.im < 0 else '+'}{im}"

    def __repr__(self):
        return f"QQi({self})"


ONE = QQi(1)


@dataclass(frozen=True)
class CKTerm:
    """The spanning element s_α s_β*; requires s(α) = s(β)."""
    alpha: Path
    beta: Path

    def __post_init__(self):
        if self.alpha.source != self.beta.source:
            raise ValueError(f"s({self.alpha}) != s({self.beta}): the product is zero")

    def star(self) -> "CKTerm":
        return CKTerm(self.beta, self.alpha)

    def key(self):
        return (self.alpha.degree, self.beta.degree, self.alpha.edges, self.beta.edges,
                self.alpha.range, self.beta.range)

    def __str__(self):
        return f"s[{self.alpha}]s[{self.beta}]*"


class PISetError(ValueError):
    pass


class SaturationError(KGraphError):
    def __init__(self, witness):
        super().__init__(f"morphism is not saturated: {witness} is missing")
        self.witness = witness


class CKAlgebra:
    """The spanning family of C*(Λ) for a finite row-finite k-graph without sources."""

    def __init__(self, graph: KGraph):
        self.graph = graph
        self._ext: dict = {}
        self._prod: dict = {}
        self._expand: dict = {}

    def __repr__(self):
        return f"<CKAlgebra {self.graph!r}>"

    # -- constructors ----------------------------------------------------
    def element(self, terms: dict | None = None) -> "CKElement":
        return CKElement(self, terms or {})

    def zero(self) -> "CKElement":
        return CKElement(self, {})

    def term(self, alpha: Path, beta: Path, coeff=ONE) -> "CKElement":
        return CKElement(self, {CKTerm(alpha, beta): QQi.coerce(coeff)})

    def s(self, lam: Path | str) -> "CKElement":
        if isinstance(lam, str):
            lam = self.graph.parse_path(lam)
        return self.term(lam, self.graph.vertex(lam.source))

    def p(self, v: str) -> "CKElement":
        w = self.graph.vertex(v)
        return self.term(w, w)

    def one(self) -> "CKElement":
        """Σ_v p_v, the unit of the (finite-vertex) algebra."""
        return CKElement(self, {CKTerm(self.graph.vertex(v), self.graph.vertex(v)): ONE
                                for v in self.graph.vertices})

    # -- product ---------------------------------------------------------
    def extensions(self, beta: Path, gamma: Path) -> list[tuple[Path, Path]]:
        """Pairs ``(β', γ')`` with ``ββ' = γγ'`` of degree ``d(β) ∨ d(γ)``."""
        key = (beta, gamma)
        hit = self._ext.get(key)
        if hit is not None:
            return hit
        g = self.graph
        out = []
        if beta.range == gamma.range:
            n = deg_join(beta.degree, gamma.degree)
            for b2 in g.paths_from(beta.source, deg_sub(n, beta.degree)):
                lam = g.compose(beta, b2)
                head, g2 = g.factorise(lam, gamma.degree)
                if head == gamma:
                    out.append((b2, g2))
        self._ext[key] = out
        return out

    def term_product(self, t1: CKTerm, t2: CKTerm) -> dict:
        key = (t1, t2)
        hit = self._prod.get(key)
        if hit is not None:
            return hit
        g = self.graph
        out: dict = {}
        for b2, g2 in self.extensions(t1.beta, t2.alpha):
            t = CKTerm(g.compose(t1.alpha, b2), g.compose(t2.beta, g2))
            out[t] = out.get(t, QQi(0)) + ONE
        self._prod[key] = out
        return out

    # -- normal form -----------------------------------------------------
    def expand_term(self, t: CKTerm, level) -> dict:
        """Rewrite s_α s_β* as Σ_λ s_αλ s_βλ* with d(αλ) = level."""
        key = (t, level)
        hit = self._expand.get(key)
        if hit is not None:
            return hit
        if not deg_le(t.alpha.degree, level):
            raise DegreeError(f"level {level} is below d({t.alpha})")
        g = self.graph
        out = {}
        for lam in g.paths_from(t.alpha.source, deg_sub(level, t.alpha.degree)):
            out[CKTerm(g.compose(t.alpha, lam), g.compose(t.beta, lam))] = ONE
        self._expand[key] = out
        return out

    def level_of(self, *elems: "CKElement"):
        lvl = zero(self.graph.rank)
        for e in elems:
            for t in e.terms:
                lvl = deg_join(lvl, t.alpha.degree)
        return lvl

    def normal_form(self, e: "CKElement", level=None) -> dict:
        level = self.level_of(e) if level is None else tuple(level)
        out: dict = {}
        for t, c in e.terms.items():
            for t2, c2 in self.expand_term(t, level).items():
                v = out.get(t2, QQi(0)) + c * c2
                if v:
                    out[t2] = v
                else:
                    out.pop(t2, None)
        return out

    def equal(self, a: "CKElement", b: "CKElement") -> bool:
        lvl = self.level_of(a, b)
        return self.normal_form(a, lvl) == self.normal_form(b, lvl)

    # -- term dump -------------------------------------------------------
    def dump(self, e: "CKElement") -> str:
        lines = []
        for t in sorted(e.terms, key=lambda t: t.key()):
            lines.append(f"{e.terms[t]} | {t.alpha} | {t.beta}")
        return "\n".join(lines)

    def load(self, text: str) -> "CKElement":
        terms = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split("|")]
            if len(parts) != 3:
                raise ValueError(f"bad term line {line!r}")
            c = QQi.parse(parts[0])
            t = CKTerm(self.graph.parse_path(parts[1]), self.graph.parse_path(parts[2]))
            terms[t] = terms.get(t, QQi(0)) + c
        return CKElement(self, terms)

    def parse(self, text: str) -> "CKElement":
        return _ExprParser(self, text).parse()


class CKElement:
    """A finite linear combination of spanning terms."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: CKAlgebra, terms: dict):
        self.alg = alg
        self.terms = {t: QQi.coerce(c) for t, c in terms.items() if c}

    def _lift(self, o) -> "CKElement":
        if isinstance(o, CKElement):
            if o.alg is not self.alg and o.alg.graph is not self.alg.graph:
                raise ValueError("elements live over different graphs")
            return o
        return self.alg.one() * QQi.coerce(o)

    def __add__(self, o):
        o = self._lift(o)
        out = dict(self.terms)
        for t, c in o.terms.items():
            out[t] = out.get(t, QQi(0)) + c
        return CKElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return CKElement(self.alg, {t: -c for t, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, CKElement):
            c = QQi.coerce(o)
            return CKElement(self.alg, {t: v * c for t, v in self.terms.items()})
        out: dict = {}
        for t1, c1 in self.terms.items():
            for t2, c2 in o.terms.items():
                for t, c in self.alg.term_product(t1, t2).items():
                    out[t] = out.get(t, QQi(0)) + c1 * c2 * c
        return CKElement(self.alg, out)

    def __rmul__(self, o):
        c = QQi.coerce(o)
        return CKElement(self.alg, {t: c * v for t, v in self.terms.items()})

    def star(self) -> "CKElement":
        return CKElement(self.alg, {t.star(): c.conj() for t, c in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.alg.normal_form(self)

    def normal_form(self, level=None) -> "CKElement":
        return CKElement(self.alg, self.alg.normal_form(self, level))

    def __eq__(self, o):
        if not isinstance(o, CKElement):
            try:
                o = self._lift(o)
            except TypeError:
                return NotImplemented
        return self.alg.equal(self, o)

    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{t}" for t, c in sorted(self.terms.items(), key=lambda kv: kv[0].key()))


# -- partial isometries of finite path sets --------------------------------

def piset_degree(V: Iterable[Path]):
    """Common degree of V; raises PISetError on mixed degrees or repeated sources."""
    V = list(V)
    if not V:
        return None
    m = V[0].degree
    seen = set()
    for mu in V:
        if mu.degree != m:
            raise PISetError(f"paths of degree {m} and {mu.degree} in one set")
        if mu.source in seen:
            raise PISetError(f"two paths with source {mu.source}")
        seen.add(mu.source)
    return m


def sum_pis(alg: CKAlgebra, V: Iterable[Path]) -> CKElement:
    V = list(V)
    piset_degree(V)
    out = alg.zero()
    for mu in V:
        out = out + alg.s(mu)
    return out


def sv_left_mult(alg: CKAlgebra, V: Iterable[Path], t: CKTerm) -> CKElement:
    """s_V s_α s_β* = s_μα s_β* when r(α) = s(μ) for some μ in V, else 0."""
    V = list(V)
    piset_degree(V)
    g = alg.graph
    for mu in V:
        if mu.source == t.alpha.range:
            return alg.term(g.compose(mu, t.alpha), t.beta)
    return alg.zero()


def sv_right_mult(alg: CKAlgebra, V: Iterable[Path], t: CKTerm) -> CKElement:
    """s_α s_β* s_V = s_α s_β'* when β = μβ' for some μ in V, else 0 (needs d(β) ≥ m)."""
    V = list(V)
    m = piset_degree(V)
    if m is None:
        return alg.zero()
    if not deg_le(m, t.beta.degree):
        raise DegreeError(f"d({t.beta}) = {t.beta.degree} is not >= {m}")
    head, rest = alg.graph.factorise(t.beta, m)
    if head in set(V):
        return alg.term(t.alpha, rest)
    return alg.zero()


def pis_compose(g: KGraph, V: Iterable[Path], W: Iterable[Path]) -> list[Path]:
    """VW = {μν : μ in V, ν in W, s(μ) = r(ν)}."""
    return [g.compose(mu, nu) for mu in V for nu in W if mu.source == nu.range]


def sv_product(alg: CKAlgebra, V, W) -> CKElement:
    return sum_pis(alg, pis_compose(alg.graph, V, W))


# -- morphisms ------------------------------------------------------------

class Morphism:
    """A degree-preserving k-graph morphism given on vertices and edges."""

    def __init__(self, src: KGraph, dst: KGraph, vmap: dict, emap: dict):
        self.src, self.dst = src, dst
        self.vmap, self.emap = dict(vmap), dict(emap)

    def check(self) -> list[str]:
        """Problems with the data as a morphism; empty when it is one."""
        errs = []
        for v in self.src.vertices:
            if self.vmap.get(v) not in self.dst._vertex_set():
                errs.append(f"vertex {v} has no image")
        for e, ed in self.src.edges.items():
            f = self.emap.get(e)
            if f not in self.dst.edges:
                errs.append(f"edge {e} has no image")
                continue
            fd = self.dst.edges[f]
            if (fd.color, fd.range, fd.source) != (ed.color, self.vmap.get(ed.range), self.vmap.get(ed.source)):
                errs.append(f"edge {e} is not mapped compatibly")
        for a, b, c, d in self.src.squares:
            try:
                if self.dst.swap(self.emap[a], self.emap[b]) != (self.emap[c], self.emap[d]):
                    errs.append(f"square {(a, b, c, d)} is not preserved")
            except (KGraphError, KeyError):
                errs.append(f"square {(a, b, c, d)} is not preserved")
        return errs

    @property
    def injective(self) -> bool:
        return (len(set(self.vmap.values())) == len(self.vmap)
                and len(set(self.emap.values())) == len(self.emap))

    def __call__(self, lam: Path) -> Path:
        if lam.is_vertex:
            return self.dst.vertex(self.vmap[lam.range])
        return self.dst.path([self.emap[e] for e in lam.edges])

    @classmethod
    def inclusion(cls, src: KGraph, dst: KGraph) -> "Morphism":
        return cls(src, dst, {v: v for v in src.vertices}, {e: e for e in src.edges})


def induced_hom(pi: Morphism, src_alg: CKAlgebra | None = None, dst_alg: CKAlgebra | None = None):
    """π_*: s_α s_β* ↦ s_π(α) s_π(β)*, for π injective and saturated."""
    from .actions import check_saturated

    errs = pi.check()
    if errs:
        raise KGraphError(errs[0])
    if not pi.injective:
        raise KGraphError("morphism is not injective")
    rec = check_saturated(pi.dst, pi.vmap.values(), pi.emap.values())
    if not rec.ok:
        raise SaturationError(rec.witness)
    src_alg = src_alg or CKAlgebra(pi.src)
    dst_alg = dst_alg or CKAlgebra(pi.dst)

    def hom(x: CKElement) -> CKElement:
        return CKElement(dst_alg, {CKTerm(pi(t.alpha), pi(t.beta)): c for t, c in x.terms.items()})

    hom.src_alg, hom.dst_alg = src_alg, dst_alg
    return hom


# -- element literals -------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(s\()|(\d+(?:/\d+)?i?|i)|([()*+\-]))")


class _ExprParser:
    """Grammar::

        expr   := ['-'] term (('+'|'-') term)*
        term   := [scalar] factor*
        factor := 's(' path ')' ['*'] | '(' expr ')' ['*']
    """

    def __init__(self, alg: CKAlgebra, text: str):
        self.alg, self.text, self.pos = alg, text, 0

    def error(self, msg):
        raise ValueError(f"{msg} at column {self.pos} in {self.text!r}")

    def peek(self):
        m = _TOKEN.match(self.text, self.pos)
        if not m:
            rest = self.text[self.pos:].strip()
            if rest:
                self.error("unexpected input")
            return None, None
        kind = "s" if m.group(1) else "num" if m.group(2) else m.group(3)
        return kind, m

    def take(self):
        kind, m = self.peek()
        if m:
            self.pos = m.end()
        return kind, m

    def parse(self) -> CKElement:
        out = self.expr()
        if self.peek()[0] is not None:
            self.error("trailing input")
        return out

    def expr(self):
        sign = 1
        if self.peek()[0] == "-":
            self.take()
            sign = -1
        out = self.term() * sign
        while self.peek()[0] in ("+", "-"):
            op, _ = self.take()
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        coeff = ONE
        kind, m = self.peek()
        if kind == "num":
            self.take()
            coeff = QQi.parse(m.group(2))
        factors = []
        while self.peek()[0] in ("s", "("):
            factors.append(self.factor())
        if not factors:
            if kind != "num":
                self.error("expected a term")
            return self.alg.one() * coeff
        out = factors[0]
        for f in factors[1:]:
            out = out * f
        return out * coeff

    def factor(self):
        kind, m = self.take()
        if kind == "s":
            close = self.text.find(")", self.pos)
            if close < 0:
                self.error("unclosed s(")
            body = self.text[self.pos:close]
            self.pos = close + 1
            try:
                el = self.alg.s(self.alg.graph.parse_path(body))
            except (KeyError, KGraphError) as exc:
                raise ValueError(f"bad path {body!r}: {exc}") from exc
        else:
            el = self.expr()
            if self.take()[0] != ")":
                self.error("expected ')'")
        if self.peek()[0] == "*":
            self.take()
            el = el.star()
        return el
