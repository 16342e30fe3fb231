"""Monoid actions on k-graphs: skew products, quotients, fundamental domains
and the Gross-Tucker identification of a free action with left translation.

Actions on windowed graphs are partial: a step that leaves the window
returns ``None``.  Preimage queries distinguish "no preimage" (``None``)
from "a preimage exists beyond the window" (:data:`OUTSIDE`).
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

from networkx.utils import UnionFind

from .kgraph import (Edge, KGraph, KGraphError, Path, WindowExhausted, deg_le,
                     deg_sub, degrees_upto)
from .monoid import FiniteGroup, FreeAbelian, IntegerLattice, Monoid
from .report import Record, Report, Status, Tally


class _Outside:
    def __repr__(self):
        return "OUTSIDE"


OUTSIDE = _Outside()


class ActionError(KGraphError):
    pass


class FreenessError(ActionError):
    pass


class FunctorError(ActionError):
    pass


class DomainError(ActionError):
    pass


class QuotientError(ActionError):
    pass


def natural_key(s: str):
    """Sort key reading embedded signed integers numerically."""
    parts = re.split(r"(-?\d+)", s)
    return tuple(int(p) if i % 2 else p for i, p in enumerate(parts))


class Action:
    """A left action of ``monoid`` on ``graph`` by k-graph morphisms.

    ``step(g, x)`` applies the generator ``g`` to a vertex or edge id.
    """

    def __init__(self, monoid: Monoid, graph: KGraph, step: Callable, preimage: Callable | None = None,
                 name: str = ""):
        self.monoid = monoid
        self.graph = graph
        self._step = step
        self._preimage = preimage
        self.name = name

    def __repr__(self):
        return f"<Action {self.name or ''} of {self.monoid!r} on {self.graph!r}>"

    @classmethod
    def from_maps(cls, monoid: Monoid, graph: KGraph, maps: dict, name: str = "") -> "Action":
        """Explicit action from one total id map per monoid generator."""
        ids = list(graph.vertices) + list(graph.edges)
        for g, mp in maps.items():
            missing = [x for x in ids if x not in mp]
            if missing:
                raise ActionError(f"generator {g} map is missing {missing[0]!r}")
        missing_gens = [g for g in monoid.generators if g not in maps]
        if missing_gens:
            raise ActionError(f"no map for generator {missing_gens[0]}")
        inverse = {g: {} for g in maps}
        for g, mp in maps.items():
            for x, y in mp.items():
                inverse[g].setdefault(y, x)
        maps = {g: dict(mp) for g, mp in maps.items()}

        def step(g, x):
            return maps[g][x]

        def pre(g, x):
            return inverse[g].get(x)

        act = cls(monoid, graph, step, pre, name)
        act.maps = maps
        return act

    @property
    def ids(self) -> list[str]:
        return list(self.graph.vertices) + list(self.graph.edges)

    def step(self, g, x):
        return self._step(g, x)

    def preimage(self, g, x):
        if self._preimage is None:
            raise ActionError("this action cannot answer preimage queries")
        return self._preimage(g, x)

    def apply(self, t, x):
        # t = g1 g2 ... gn acts as alpha_g1 o ... o alpha_gn
        for g in reversed(self.monoid.word(t)):
            x = self._step(g, x)
            if x is None:
                return None
        return x

    def apply_path(self, t, sigma: Path) -> Path | None:
        if sigma.is_vertex:
            v = self.apply(t, sigma.range)
            return None if v is None else self.graph.vertex(v)
        out = []
        for e in sigma.edges:
            y = self.apply(t, e)
            if y is None:
                return None
            out.append(y)
        return self.graph.path(out)


def check_action(a: Action, bound=None) -> Report:
    """Each generator is a k-graph morphism, and the generator maps respect the monoid law."""
    g_ = a.graph
    rep = Report(f"action {a.name}")
    morph = Tally("generators are morphisms")
    for g in a.monoid.generators:
        for v in g_.vertices:
            morph.record(a.step(g, v) is None or a.step(g, v) in g_._vertex_set(), (g, v))
        for e, ed in g_.edges.items():
            y = a.step(g, e)
            if y is None:
                continue
            yd = g_.edges[y]
            rv, sv = a.step(g, ed.range), a.step(g, ed.source)
            morph.record(yd.color == ed.color and yd.range == rv and yd.source == sv, (g, e))
        for sq in g_.squares:
            img = [a.step(g, x) for x in sq]
            if None in img:
                continue
            try:
                morph.record(g_.swap(img[0], img[1]) == (img[2], img[3]), (g, sq))
            except KGraphError:
                morph.fail((g, sq))
    morph.into(rep)

    law = Tally("monoid law")
    gens = a.monoid.generators
    if a.monoid.is_group and isinstance(a.monoid, FiniteGroup):
        for x in a.ids:
            law.record(a.apply(a.monoid.one, x) == x, ("identity", x))
            for t in a.monoid.elements():
                for g in gens:
                    lhs = a.step(g, a.apply(t, x))
                    rhs = a.apply(a.monoid.mul(g, t), x)
                    law.record(lhs == rhs, (g, t, x))
    else:
        for x in a.ids:
            for g in gens:
                for h in gens:
                    y1 = a.step(g, x)
                    y1 = None if y1 is None else a.step(h, y1)
                    y2 = a.step(h, x)
                    y2 = None if y2 is None else a.step(g, y2)
                    if y1 is None or y2 is None:
                        continue
                    law.record(y1 == y2, (g, h, x))
    law.into(rep)
    return rep


def _element_key(monoid: Monoid):
    if isinstance(monoid, IntegerLattice):
        return lambda x: (sum(abs(c) for c in x), tuple((c < 0, abs(c)) for c in x))
    if isinstance(monoid, FreeAbelian):
        return lambda x: (sum(x), x)
    return lambda x: (x != monoid.one, x)


def check_free(a: Action, bound=None, paths: bool = False) -> Record:
    """Freeness on vertices (and optionally on edges) over monoid elements in ``bound``.

    Failure witness: ``(x, t, u)`` with ``t != u`` and ``a_t(x) == a_u(x)``.
    """
    elements = sorted(a.monoid.elements(bound if bound is not None else 2), key=_element_key(a.monoid))
    targets = list(a.graph.vertices) + (list(a.graph.edges) if paths else [])
    for x in targets:
        seen = {}
        for t in elements:
            y = a.apply(t, x)
            if y is None:
                continue
            if y in seen:
                return Record("free", Status.FAIL, (x, seen[y], t))
            seen[y] = t
    return Record("free", Status.PASS, None,
                  "checked on vertices and edges" if paths else "checked on vertices")


# -- quotients -------------------------------------------------------------

@dataclass
class Quotient:
    action: Action
    graph: KGraph
    cls: dict  # Σ id -> quotient id

    def q(self, sigma: Path) -> Path:
        if sigma.is_vertex:
            return self.graph.vertex(self.cls[sigma.range])
        return self.graph.path([self.cls[e] for e in sigma.edges])

    def members(self, qid: str) -> list[str]:
        return sorted((x for x, c in self.cls.items() if c == qid), key=natural_key)


def orbit_classes(a: Action) -> dict:
    uf = UnionFind()
    for x in a.ids:
        uf[x]
        for g in a.monoid.generators:
            y = a.step(g, x)
            if y is not None:
                uf.union(x, y)
    cls = {}
    for block in uf.to_sets():
        rep = min(block, key=natural_key)
        for x in block:
            cls[x] = rep
    return cls


def quotient(a: Action, bound=None, name: str = "") -> Quotient:
    """Quotient k-graph by a free action, built from the orbits inside the window."""
    free = check_free(a, bound)
    if not free.ok:
        raise FreenessError(f"action is not free: witness {free.witness}")
    g = a.graph
    cls = orbit_classes(a)
    qverts = sorted({cls[v] for v in g.vertices}, key=natural_key)
    qedges = {}
    for e, ed in g.edges.items():
        c = cls[e]
        data = (ed.color, cls[ed.range], cls[ed.source])
        if c in qedges and qedges[c] != data:
            raise QuotientError(f"edge class {c} has inconsistent ends: {qedges[c]} vs {data}")
        qedges[c] = data
    squares = {}
    for sq in g.squares:
        a_, b_, c_, d_ = (cls[x] for x in sq)
        old = squares.get((a_, b_))
        if old is not None and old != (c_, d_):
            raise QuotientError(f"composition in the quotient depends on representatives at {(a_, b_)}")
        squares[(a_, b_)] = (c_, d_)
    incomplete = []
    for qv in qverts:
        members = [v for v in g.vertices if cls[v] == qv]
        for col in range(1, g.rank + 1):
            if all(not g.is_complete(v, col) for v in members):
                incomplete.append((qv, col))
    qg = KGraph(g.rank, qverts,
                [Edge(e, *qedges[e]) for e in sorted(qedges, key=natural_key)],
                [k + v for k, v in squares.items()], incomplete,
                name=name or f"quotient({g.name})")
    return Quotient(a, qg, cls)


# -- skew products -----------------------------------------------------------

def _fmt_id(x: str, monoid: Monoid, t) -> str:
    return f"{x}@{monoid.format(t)}"


@dataclass
class SkewProduct:
    base: KGraph
    monoid: Monoid
    functor: dict
    window: object
    graph: KGraph
    split: dict = field(repr=False)

    def vid(self, v: str, t) -> str:
        return _fmt_id(v, self.monoid, t)

    def eid(self, e: str, t) -> str:
        return _fmt_id(e, self.monoid, t)

    def eta(self, lam: Path):
        return self.monoid.prod(self.functor[e] for e in lam.edges)

    def lift(self, lam: Path, t) -> Path:
        """The path ``(lam, t)``; KeyError when it leaves the window."""
        if lam.is_vertex:
            return self.graph.vertex(self.vid(lam.range, t))
        out = []
        for e in lam.edges:
            out.append(self.eid(e, t))
            t = self.monoid.mul(t, self.functor[e])
        for x in out:
            if x not in self.graph.edges:
                raise KeyError(x)
        return self.graph.path(out)

    def project(self, sigma: Path):
        if sigma.is_vertex:
            v, t = self.split[sigma.range]
            return self.base.vertex(v), t
        first = self.split[sigma.edges[0]]
        return self.base.path([self.split[e][0] for e in sigma.edges]), first[1]


def check_functor(base: KGraph, functor: dict, monoid: Monoid) -> Record:
    for e in base.edges:
        if e not in functor:
            return Record("functor", Status.FAIL, {"edge without value": e})
        if not monoid.contains(functor[e]):
            return Record("functor", Status.FAIL, {"value outside monoid": (e, functor[e])})
    for a, b, c, d in base.squares:
        lhs = monoid.mul(functor[a], functor[b])
        rhs = monoid.mul(functor[c], functor[d])
        if lhs != rhs:
            return Record("functor", Status.FAIL, {"square": (a, b, c, d), "values": (lhs, rhs)})
    return Record("functor", Status.PASS)


def skew_product(base: KGraph, functor: dict, monoid: Monoid, window=None, name: str = "") -> SkewProduct:
    """``base ×_η monoid`` restricted to monoid elements in ``window``.

    ``r(λ,t) = (r(λ),t)`` and ``s(λ,t) = (s(λ), t η(λ))``.
    """
    rec = check_functor(base, functor, monoid)
    if not rec.ok:
        raise FunctorError(f"functor does not respect the squares: {rec.witness}")
    elements = monoid.elements(window)
    elset = set(elements)
    split = {}
    verts = []
    for t in elements:
        for v in base.vertices:
            x = _fmt_id(v, monoid, t)
            verts.append(x)
            split[x] = (v, t)
    edges = []
    for t in elements:
        for e, ed in base.edges.items():
            u = monoid.mul(t, functor[e])
            if u in elset:
                x = _fmt_id(e, monoid, t)
                split[x] = (e, t)
                edges.append(Edge(x, ed.color, _fmt_id(ed.range, monoid, t), _fmt_id(ed.source, monoid, u)))
    incomplete = []
    for t in elements:
        for v in base.vertices:
            for col in range(1, base.rank + 1):
                cut = not base.is_complete(v, col) or any(
                    monoid.mul(t, functor[e]) not in elset for e in base.edges_into(v, col, strict=False))
                if cut:
                    incomplete.append((_fmt_id(v, monoid, t), col))
    have = {e.id for e in edges}
    squares = []
    for t in elements:
        for a, b, c, d in base.squares:
            ids = (_fmt_id(a, monoid, t), _fmt_id(b, monoid, monoid.mul(t, functor[a])),
                   _fmt_id(c, monoid, t), _fmt_id(d, monoid, monoid.mul(t, functor[c])))
            if all(x in have for x in ids):
                squares.append(ids)
    g = KGraph(base.rank, verts, edges, squares, incomplete,
               name=name or f"{base.name}x{monoid!r}")
    return SkewProduct(base, monoid, dict(functor), window, g, split)


def left_translation(sk: SkewProduct) -> Action:
    """``lt_u(λ, t) = (λ, u t)`` on the skew product window."""
    m = sk.monoid
    g = sk.graph

    def exists(x):
        return x in g.edges or x in g._vertex_set()

    def step(u, x):
        b, t = sk.split[x]
        y = _fmt_id(b, m, m.mul(u, t))
        return y if exists(y) else None

    def pre(u, x):
        b, t = sk.split[x]
        if m.is_group:
            y = _fmt_id(b, m, m.mul(m.inv(u), t))
            return y if exists(y) else OUTSIDE
        if isinstance(m, FreeAbelian):
            s = m.sub(t, u)
            if not m.contains(s):
                return None
            y = _fmt_id(b, m, s)
            return y if exists(y) else OUTSIDE
        raise ActionError(f"no preimage rule for {m!r}")

    return Action(m, g, step, pre, name="lt")


# -- fundamental domains ----------------------------------------------------

@dataclass(frozen=True)
class FundamentalDomain:
    vertices: frozenset
    edges: frozenset

    def contains(self, sigma: Path) -> bool:
        if sigma.is_vertex:
            return sigma.range in self.vertices
        return sigma.edges[0] in self.edges

    def __contains__(self, x: str) -> bool:
        return x in self.vertices or x in self.edges


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Two distinct vertices ``n != p`` in one orbit and ``m = a_{t_n}(n) = a_{t_p}(p)``.

    ``premise`` records why any fundamental domain would need two such
    vertices: no vertex of the orbit is a root (each has a generator
    preimage), so a representative ``n`` forces a second one below it.
    """
    n: str
    p: str
    m: str
    t_n: object
    t_p: object
    premise: tuple

    def verify(self, a: Action) -> bool:
        return (self.n != self.p and self.t_n != self.t_p
                and a.apply(self.t_n, self.n) == self.m == a.apply(self.t_p, self.p))


@dataclass
class DomainSearch:
    status: str  # "found" | "infeasible" | "inconclusive"
    domain: FundamentalDomain | None = None
    certificate: object = None
    report: Report | None = None

    def record(self) -> Record:
        if self.status == "found":
            return Record("fundamental domain", Status.PASS, None,
                          f"{len(self.domain.vertices)} vertices, {len(self.domain.edges)} edges")
        if self.status == "infeasible":
            return Record("fundamental domain", Status.UNTESTED, self.certificate,
                          "no fundamental domain exists (certificate)")
        return Record("fundamental domain", Status.UNTESTED, self.certificate,
                      "window too small to decide")


def representations(a: Action, F: FundamentalDomain, x: str, bound=None):
    """All ``(mu, t)`` with ``mu`` in F and ``a_t(mu) = x``; plus an inconclusive flag."""
    m = a.monoid
    reps = set()
    inconclusive = False
    if m.is_group:
        for t in m.elements(bound if bound is not None else 2):
            y = a.apply(m.inv(t), x)
            if y is None:
                inconclusive = True
            elif y in F:
                reps.add((y, t))
        return reps, inconclusive
    # N^d: walk down through generator preimages
    frontier = deque([(x, m.one)])
    seen = {(x, m.one)}
    while frontier:
        y, t = frontier.popleft()
        if y in F:
            reps.add((y, t))
        for g in m.generators:
            p = a.preimage(g, y)
            if p is None:
                continue
            if p is OUTSIDE:
                inconclusive = True
                continue
            nxt = (p, m.mul(t, g))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return reps, inconclusive


def verify_fundamental_domain(a: Action, F: FundamentalDomain, bound=None) -> Report:
    rep = Report("fundamental domain")
    bad = next((e for e in sorted(F.edges) if a.graph.edges[e].range not in F.vertices), None)
    rep.add("range-closed", bad is None, bad)
    uniq = Tally("unique representative")
    for x in a.ids:
        reps, inc = representations(a, F, x, bound)
        if len(reps) > 1 or (not reps and not inc):
            uniq.fail({"element": x, "representations": sorted(reps, key=str)})
        elif inc:
            # a representative may hide beyond the window
            uniq.skip(x)
        else:
            uniq.ok()
    uniq.into(rep)
    return rep


def find_fundamental_domain(a: Action, bound=None) -> DomainSearch:
    """Search for a fundamental domain inside the window.

    A fundamental domain is determined by its vertices: a path lies in it
    exactly when its range does.  For groups any orbit transversal works;
    for N^d the domain is forced to be the set of roots (elements without a
    generator preimage).
    """
    g = a.graph
    m = a.monoid
    if m.is_group:
        cls = orbit_classes(a)
        fv = frozenset(cls[v] for v in g.vertices)
        fe = frozenset(e for e, ed in g.edges.items() if ed.range in fv)
        F = FundamentalDomain(fv, fe)
        rep = verify_fundamental_domain(a, F, bound)
        return DomainSearch("found" if rep.passed and not rep.untested else "inconclusive", F, None, rep)
    if not isinstance(m, FreeAbelian):
        raise ActionError(f"no fundamental-domain search for {m!r}")

    def status(x):
        pres = [a.preimage(gen, x) for gen in m.generators]
        if all(p is None for p in pres):
            return "root", None
        hit = next((gen, p) for gen, p in zip(m.generators, pres) if p is not None)
        return "covered", hit

    roots = set()
    covered = {}
    for x in a.ids:
        st, hit = status(x)
        if st == "root":
            roots.add(x)
        else:
            covered[x] = hit
    cls = orbit_classes(a)
    vclasses = {}
    for v in g.vertices:
        vclasses.setdefault(cls[v], []).append(v)
    for c, members in sorted(vclasses.items(), key=lambda kv: natural_key(kv[0])):
        if any(v in roots for v in members):
            continue
        cert = _two_vertex_certificate(a, sorted(members, key=natural_key), covered, bound)
        if cert is not None:
            return DomainSearch("infeasible", None, cert)
        return DomainSearch("inconclusive", None, {"rootless orbit": c})
    F = FundamentalDomain(frozenset(v for v in g.vertices if v in roots),
                          frozenset(e for e in g.edges if e in roots))
    rep = verify_fundamental_domain(a, F, bound)
    if not rep.passed:
        return DomainSearch("infeasible", None, rep.failures[0].witness, rep)
    if rep.untested:
        return DomainSearch("inconclusive", F, None, rep)
    return DomainSearch("found", F, None, rep)


def _two_vertex_certificate(a: Action, members, covered, bound):
    m = a.monoid
    elements = sorted(m.elements(bound if bound is not None else _default_bound(a)), key=_element_key(m))
    for n in members:
        gen, p = covered[n]
        if p is OUTSIDE or p not in a.graph._vertex_set():
            continue
        # n needs a representative; p = preimage of n needs a different one
        images_p = {}
        for t in elements:
            y = a.apply(t, p)
            if y is not None:
                images_p.setdefault(y, t)
        for t in elements:
            y = a.apply(t, n)
            if y is not None and y in images_p and images_p[y] != t:
                premise = ((n, gen, p), (p,) + tuple(covered.get(p, (None, None))))
                cert = InfeasibilityCertificate(n, p, y, t, images_p[y], premise)
                if cert.verify(a):
                    return cert
    return None


def _default_bound(a: Action):
    k = len(a.monoid.one) if isinstance(a.monoid.one, tuple) else 1
    return (2,) * k


# -- Gross-Tucker -----------------------------------------------------------

@dataclass
class GrossTuckerData:
    """q, c, η, ξ and φ for a free action with fundamental domain."""
    action: Action
    domain: FundamentalDomain
    quotient: Quotient
    c_vertex: dict  # quotient vertex -> vertex of F
    xi: dict        # Σ id -> monoid element
    eta: dict       # quotient edge -> monoid element

    @property
    def monoid(self) -> Monoid:
        return self.action.monoid

    def q(self, sigma: Path) -> Path:
        return self.quotient.q(sigma)

    def c(self, lam: Path) -> Path:
        """The unique path of F lying over ``lam``."""
        g = self.action.graph
        cur = self.c_vertex[lam.range]
        if lam.is_vertex:
            return g.vertex(cur)
        out = []
        for qe in lam.edges:
            col = self.quotient.graph.edges[qe].color
            hits = [e for e in g.edges_into(cur, col, strict=False) if self.quotient.cls[e] == qe]
            if not hits:
                raise WindowExhausted(cur, col)
            if len(hits) > 1:
                raise DomainError(f"{qe} has two lifts at {cur}: {hits}")
            out.append(hits[0])
            cur = g.edges[hits[0]].source
        return g.path(out)

    def xi_of(self, sigma: Path):
        return self.xi[sigma.range if sigma.is_vertex else sigma.edges[0]]

    def eta_of(self, lam: Path):
        return self.monoid.prod(self.eta[e] for e in lam.edges)

    def eta_def(self, lam: Path):
        """η read off its defining identity ``s(c(λ)) = α_η(λ)(c(s(λ)))``."""
        return self.xi[self.c(lam).source]

    def phi(self, sigma: Path):
        return self.q(sigma), self.xi_of(sigma)

    def phi_inv(self, lam: Path, t) -> Path | None:
        return self.action.apply_path(t, self.c(lam))


def gross_tucker(a: Action, F: FundamentalDomain, bound=None) -> GrossTuckerData:
    rep = verify_fundamental_domain(a, F, bound)
    if not rep.passed:
        raise DomainError(f"not a fundamental domain: {rep.failures[0].witness}")
    Q = quotient(a, bound)
    m = a.monoid
    c_vertex = {}
    for v in sorted(F.vertices, key=natural_key):
        qv = Q.cls[v]
        if qv in c_vertex:
            raise DomainError(f"F meets the orbit {qv} twice: {c_vertex[qv]}, {v}")
        c_vertex[qv] = v
    missing = [qv for qv in Q.graph.vertices if qv not in c_vertex]
    if missing:
        raise DomainError(f"F misses the orbit {missing[0]}")
    # ξ by forward search from F: ξ(α_g(x)) = g ξ(x)
    xi = {}
    queue = deque()
    for x in sorted(F.vertices | F.edges, key=natural_key):
        xi[x] = m.one
        queue.append(x)
    while queue:
        x = queue.popleft()
        for gen in m.generators:
            y = a.step(gen, x)
            if y is None:
                continue
            t = m.mul(gen, xi[x])
            if y in xi:
                if xi[y] != t:
                    raise FreenessError(f"{y} is reached as a_{xi[y]} and a_{t} of F")
                continue
            xi[y] = t
            queue.append(y)
    data = GrossTuckerData(a, F, Q, c_vertex, xi, {})
    for qe in Q.graph.edges:
        try:
            data.eta[qe] = data.eta_def(Q.graph.edge(qe))
        except (WindowExhausted, KeyError) as exc:
            raise DomainError(f"cannot determine η on {qe}: {exc}") from exc
    return data


def verify_iso(d: GrossTuckerData, bound=None) -> Report:
    """Exhaustive check of the Gross-Tucker identities on the window."""
    a = d.action
    g = a.graph
    m = d.monoid
    Qg = d.quotient.graph
    bound = bound or (1,) * g.rank
    sigmas = g.paths_upto(bound)
    lams = Qg.paths_upto(bound)
    rep = Report("gross-tucker")

    def safe(f, *args):
        try:
            return f(*args)
        except (WindowExhausted, KeyError):
            return None

    t1 = Tally("q(c(λ)) = λ")
    t2 = Tally("s(c(λ)) = α_η(λ)(c(s(λ)))")
    for lam in lams:
        cl = safe(d.c, lam)
        if cl is None:
            t1.skip(str(lam))
            continue
        t1.record(d.q(cl) == lam, str(lam))
        csl = safe(d.c, Qg.vertex(lam.source))
        img = None if csl is None else a.apply(d.eta_of(lam), csl.range)
        if img is None:
            t2.skip(str(lam))
        else:
            t2.record(img == cl.source, {"λ": str(lam), "η": d.eta_of(lam)})
    t1.into(rep)
    t2.into(rep)

    t3 = Tally("σ = α_ξ(σ)(c(q(σ)))")
    t4 = Tally("ξ(r(σ)) = ξ(σ)")
    t5 = Tally("ξ(s(σ)) = ξ(σ)η(q(σ))")
    t6 = Tally("φ preserves d, r, s")
    for s_ in sigmas:
        if s_.range not in d.xi or (s_.edges and s_.edges[0] not in d.xi) or s_.source not in d.xi:
            t3.skip(str(s_))
            continue
        x = d.xi_of(s_)
        qs = d.q(s_)
        back = safe(d.phi_inv, qs, x)
        if back is None:
            t3.skip(str(s_))
        else:
            t3.record(back == s_, {"σ": str(s_), "ξ": x})
        t4.record(d.xi[s_.range] == x, {"σ": str(s_), "ξ(r σ)": d.xi[s_.range], "ξ(σ)": x})
        t5.record(d.xi[s_.source] == m.mul(x, d.eta_of(qs)),
                  {"σ": str(s_), "ξ(s σ)": d.xi[s_.source], "ξ(σ)η(q σ)": m.mul(x, d.eta_of(qs))})
        r_ok = (Qg.vertex(qs.range), x) == d.phi(g.vertex(s_.range))
        s_ok = (Qg.vertex(qs.source), m.mul(x, d.eta_of(qs))) == d.phi(g.vertex(s_.source))
        t6.record(qs.degree == s_.degree and r_ok and s_ok, str(s_))
    for t in (t3, t4, t5, t6):
        t.into(rep)

    t7 = Tally("η is a functor")
    for lam in lams:
        # composites stay within the bound
        for n in degrees_upto(deg_sub(bound, lam.degree)):
            for mu in safe(Qg.paths_from, lam.source, n, False) or []:
                lm = Qg.compose(lam, mu)
                e1, e2, e12 = safe(d.eta_def, lam), safe(d.eta_def, mu), safe(d.eta_def, lm)
                if None in (e1, e2, e12):
                    t7.skip((str(lam), str(mu)))
                else:
                    t7.record(e12 == m.mul(e1, e2), (str(lam), str(mu)))
    t7.into(rep)

    t8 = Tally("φ injective")
    images = {}
    for s_ in sigmas:
        if s_.range not in d.xi or s_.source not in d.xi or (s_.edges and s_.edges[0] not in d.xi):
            continue
        key = d.phi(s_)
        if key in images and images[key] != s_:
            t8.fail((str(images[key]), str(s_)))
        else:
            images[key] = s_
            t8.ok()
    t8.into(rep)

    t9 = Tally("φ∘φ⁻¹ = id")
    ts = sorted({v for v in d.xi.values()}, key=_element_key(m))
    for lam in lams:
        for t in ts:
            s_ = safe(d.phi_inv, lam, t)
            if s_ is None:
                continue
            t9.record(d.phi(s_) == (lam, t), {"λ": str(lam), "t": t})
    t9.into(rep)

    t10 = Tally("φ preserves composition")
    small = [s_ for s_ in sigmas if sum(s_.degree) <= 1]
    for s_ in small:
        if s_.is_vertex:
            continue
        for n in degrees_upto(bound):
            for tau in safe(g.paths_from, s_.source, n, False) or []:
                st = g.compose(s_, tau)
                try:
                    ps, pt, pst = d.phi(s_), d.phi(tau), d.phi(st)
                except KeyError:
                    continue
                ok = (pt[1] == m.mul(ps[1], d.eta_of(ps[0]))
                      and pst == (Qg.compose(ps[0], pt[0]), ps[1]))
                t10.record(ok, (str(s_), str(tau)))
    t10.into(rep)

    t11 = Tally("φ∘α_t = lt_t∘φ")
    for s_ in sigmas:
        for gen in m.generators:
            img = a.apply_path(gen, s_)
            if img is None:
                continue
            try:
                lhs = d.phi(img)
                q0, x0 = d.phi(s_)
            except KeyError:
                t11.skip((gen, str(s_)))
                continue
            t11.record(lhs == (q0, m.mul(gen, x0)), {"t": gen, "σ": str(s_)})
    t11.into(rep)
    return rep


# -- saturation and dilation hypotheses --------------------------------------

def check_saturated(big: KGraph, vertices, edges) -> Record:
    """Every edge of ``big`` with range in the subgraph lies in the subgraph.

    Checking edges suffices: a path with range in the subgraph is a chain of
    edges whose ranges successively lie in it.
    """
    vertices, edges = set(vertices), set(edges)
    for e in edges:
        ed = big.edges[e]
        if ed.range not in vertices or ed.source not in vertices:
            raise ActionError(f"{e} is not inside the subgraph's vertex set")
    cut = []
    for v in sorted(vertices, key=natural_key):
        for col in range(1, big.rank + 1):
            for e in big.edges_into(v, col, strict=False):
                if e not in edges:
                    return Record("saturated", Status.FAIL, e)
            if not big.is_complete(v, col):
                cut.append((v, col))
    if cut:
        return Record("saturated", Status.PASS, None,
                      f"window edges only; {len(cut)} truncated slots")
    return Record("saturated", Status.PASS)


def check_dilation_hypotheses(big: KGraph, omega_vertices, omega_edges, beta: Action,
                              semigroup: Monoid, bound) -> Report:
    """Saturation, S-invariance and exhaustion of Ω ⊂ Λ under β on the window."""
    rep = Report("dilation hypotheses")
    omega = set(omega_vertices) | set(omega_edges)
    rep.records.append(check_saturated(big, omega_vertices, omega_edges))

    inv = Tally("β_u(Ω) ⊂ Ω")
    for u in semigroup.generators:
        for x in sorted(omega, key=natural_key):
            y = beta.apply(u, x)
            if y is None:
                inv.skip((u, x))
            else:
                inv.record(y in omega, {"u": u, "x": x, "β_u(x)": y})
    inv.into(rep)

    ex = Tally("⋃ β_u⁻¹(Ω) = Λ")
    elements = sorted(semigroup.elements(bound), key=_element_key(semigroup))
    witnesses = []
    for x in list(big.vertices) + list(big.edges):
        found = None
        left = False
        for u in elements:
            y = beta.apply(u, x)
            if y is None:
                left = True
            elif y in omega:
                found = u
                break
        if found is not None:
            ex.ok()
            witnesses.append((x, found))
        elif left:
            ex.skip(x)
        else:
            ex.fail(x)
    ex.into(rep)
    rep.exhaustion_witnesses = witnesses
    return rep
