"""Finite matrix models of l²(Γ) and truncated l²(N^d), tensored with the CK engine.

Operators are integer numpy matrices acting on column vectors indexed by
group elements (or window points).  A :class:`TensorElement` is a sparse
matrix whose entries are CK elements, so products combine the symbolic
term product with matrix multiplication.
"""
from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from .actions import GrossTuckerData, skew_product
from .ck import CKAlgebra, CKElement, sum_pis
from .kgraph import KGraph, Path, WindowExhausted, degrees_upto
from .monoid import FiniteGroup, FreeAbelian, GroupError
from .report import Report, Tally


def _unit(n, i, j):
    m = np.zeros((n, n), dtype=np.int64)
    m[i, j] = 1
    return m


class RegularOps:
    """λ_h e_x = e_hx, ρ_k e_x = e_xk⁻¹ and χ_g = projection onto e_g."""

    def __init__(self, group: FiniteGroup, check: bool = True):
        self.group = G = group
        n = G.order
        self.n = n
        self._lam = {}
        self._rho = {}
        for h in range(n):
            lam = np.zeros((n, n), dtype=np.int64)
            rho = np.zeros((n, n), dtype=np.int64)
            for x in range(n):
                lam[G.mul(h, x), x] = 1
                rho[G.mul(x, G.inv(h)), x] = 1
            self._lam[h], self._rho[h] = lam, rho
        self.identity = np.eye(n, dtype=np.int64)
        if check:
            rep = self.verify()
            if not rep.passed:
                raise GroupError(f"regular representation check failed: {rep.failures[0]}")

    def lam(self, h):
        return self._lam[h]

    def rho(self, k):
        return self._rho[k]

    def chi(self, g):
        return _unit(self.n, g, g)

    def E(self, g, h):
        return _unit(self.n, g, h)

    def verify(self) -> Report:
        G = self.group
        els = G.elements()
        rep = Report(f"regular representation of {G!r}")
        t = {k: Tally(k) for k in ("λ_hχ_g = χ_hgλ_h", "ρ_kχ_g = χ_gk⁻¹ρ_k", "λρ = ρλ",
                                   "λ, ρ homomorphisms", "unitary", "Σχ_g = 1")}
        for h, g in itertools.product(els, els):
            t["λ_hχ_g = χ_hgλ_h"].record(
                np.array_equal(self.lam(h) @ self.chi(g), self.chi(G.mul(h, g)) @ self.lam(h)), (h, g))
            t["ρ_kχ_g = χ_gk⁻¹ρ_k"].record(
                np.array_equal(self.rho(h) @ self.chi(g), self.chi(G.mul(g, G.inv(h))) @ self.rho(h)), (h, g))
            t["λρ = ρλ"].record(np.array_equal(self.lam(h) @ self.rho(g), self.rho(g) @ self.lam(h)), (h, g))
            t["λ, ρ homomorphisms"].record(
                np.array_equal(self.lam(h) @ self.lam(g), self.lam(G.mul(h, g)))
                and np.array_equal(self.rho(h) @ self.rho(g), self.rho(G.mul(h, g))), (h, g))
        for h in els:
            t["unitary"].record(np.array_equal(self.lam(h).T @ self.lam(h), self.identity)
                                and np.array_equal(self.rho(h).T @ self.rho(h), self.identity), h)
        t["Σχ_g = 1"].record(np.array_equal(sum(self.chi(g) for g in els), self.identity), None)
        for x in t.values():
            x.into(rep)
        return rep


def build_regular(group: FiniteGroup) -> RegularOps:
    return RegularOps(group)


class ToeplitzOps:
    """Truncation of l²(N^d) to the window [0, N]^d.

    ``chi_rho(t, eta)`` is computed from χ_t ρ_η on an l²(Z^d) box around the
    window and then compressed to the window.
    """

    def __init__(self, N):
        self.N = tuple(N)
        self.d = len(self.N)
        self.monoid = FreeAbelian(self.d)
        self.points = self.monoid.elements(self.N)
        self.index = {t: i for i, t in enumerate(self.points)}
        self.n = len(self.points)
        self._box = list(itertools.product(*(range(-b, 2 * b + 1) for b in self.N)))
        self._box_index = {t: i for i, t in enumerate(self._box)}
        self._win = np.array([self._box_index[t] for t in self.points])

    def contains(self, t) -> bool:
        return t in self.index

    def E(self, t, u):
        return _unit(self.n, self.index[t], self.index[u])

    def chi(self, t):
        return self.E(t, t)

    def lam(self, u):
        """λ^S_u e_x = e_{x+u}, dropping basis vectors that leave the window."""
        m = np.zeros((self.n, self.n), dtype=np.int64)
        for x, i in self.index.items():
            y = self.monoid.mul(x, u)
            if y in self.index:
                m[self.index[y], i] = 1
        return m

    def _box_chi_rho(self, t, eta):
        n = len(self._box)
        m = np.zeros((n, n), dtype=np.int64)
        # ρ_η e_x = e_{x-η}; then keep only e_t
        x = self.monoid.mul(t, eta)
        if x in self._box_index and t in self._box_index:
            m[self._box_index[t], self._box_index[x]] = 1
        return m

    def chi_rho(self, t, eta):
        """χ_t ρ_η restricted to the window's l²(S)."""
        full = self._box_chi_rho(t, eta)
        return full[np.ix_(self._win, self._win)]

    def verify(self) -> Report:
        rep = Report(f"Toeplitz window {self.N}")
        inv = Tally("χ_tρ_η leaves l²(S) invariant")
        unit = Tally("χ_tρ_η|l²(S) = E_{t,tη}")
        iso = Tally("λ^S_u isometric inside the window")
        outside = np.array([i for i in range(len(self._box)) if i not in set(self._win.tolist())])
        for t in self.points:
            for eta in self.points:
                full = self._box_chi_rho(t, eta)
                inv.record(not full[np.ix_(outside, self._win)].any(), (t, eta))
                expect = (self.E(t, self.monoid.mul(t, eta)) if self.contains(self.monoid.mul(t, eta))
                          else np.zeros((self.n, self.n), dtype=np.int64))
                unit.record(np.array_equal(self.chi_rho(t, eta), expect), (t, eta))
        for u in self.points:
            L = self.lam(u)
            for x, i in self.index.items():
                if self.contains(self.monoid.mul(x, u)):
                    col = L[:, i]
                    iso.record(col.sum() == 1 and np.array_equal(L.T @ col, np.eye(self.n, dtype=np.int64)[i]),
                               (u, x))
        for x in (inv, unit, iso):
            x.into(rep)
        return rep


class TensorElement:
    """Sparse matrix of CK elements: Σ a_ij ⊗ E_ij."""

    __slots__ = ("alg", "n", "entries")

    def __init__(self, alg: CKAlgebra, n: int, entries: dict):
        self.alg, self.n = alg, n
        self.entries = {ij: a for ij, a in entries.items() if a.terms}

    @classmethod
    def tensor(cls, a: CKElement, m: np.ndarray) -> "TensorElement":
        entries = {}
        for i, j in zip(*np.nonzero(m)):
            entries[(int(i), int(j))] = a * int(m[i, j])
        return cls(a.alg, m.shape[0], entries)

    @classmethod
    def scalar(cls, alg: CKAlgebra, m: np.ndarray) -> "TensorElement":
        """1 ⊗ m."""
        return cls.tensor(alg.one(), m)

    def __add__(self, o: "TensorElement"):
        out = dict(self.entries)
        for ij, a in o.entries.items():
            out[ij] = out[ij] + a if ij in out else a
        return TensorElement(self.alg, self.n, out)

    def __neg__(self):
        return TensorElement(self.alg, self.n, {ij: -a for ij, a in self.entries.items()})

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o):
        if not isinstance(o, TensorElement):
            return TensorElement(self.alg, self.n, {ij: a * o for ij, a in self.entries.items()})
        rows = {}
        for (j, l), b in o.entries.items():
            rows.setdefault(j, []).append((l, b))
        out = {}
        for (i, j), a in self.entries.items():
            for l, b in rows.get(j, ()):
                p = a * b
                out[(i, l)] = out[(i, l)] + p if (i, l) in out else p
        return TensorElement(self.alg, self.n, out)

    def star(self):
        return TensorElement(self.alg, self.n, {(j, i): a.star() for (i, j), a in self.entries.items()})

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.entries.values())

    def __eq__(self, o):
        if not isinstance(o, TensorElement):
            return NotImplemented
        keys = set(self.entries) | set(o.entries)
        z = self.alg.zero()
        return all(self.entries.get(k, z) == o.entries.get(k, z) for k in keys)

    __hash__ = None

    def __repr__(self):
        inner = ", ".join(f"{ij}: {a!r}" for ij, a in sorted(self.entries.items()))
        return f"TensorElement({{{inner}}})"


def tensor_sum(items, alg, n) -> TensorElement:
    out = TensorElement(alg, n, {})
    for x in items:
        out = out + x
    return out


# -- generic Cuntz-Krieger family check ------------------------------------

def check_ck_family(graph: KGraph, fn: Callable[[Path], TensorElement], bound=None, ck4_bound=None,
                    prefix: str = "") -> Report:
    """(CK1)-(CK4) for ``fn`` on the paths of ``graph``.

    CK2 is checked for composable pairs of degree ≤ ``bound``, CK3 on paths
    of degree ≤ ``bound``, CK4 for every vertex and n ≤ ``ck4_bound``.  On
    windowed graphs CK4 sums that would need paths beyond the window are
    reported untested.
    """
    k = graph.rank
    bound = bound or (1,) * k
    ck4_bound = ck4_bound or (2,) * k
    rep = Report(f"{prefix}CK family")
    V = list(graph.vertices)
    P = {v: fn(graph.vertex(v)) for v in V}

    ck1 = Tally(prefix + "CK1")
    for v in V:
        p = P[v]
        ck1.record(p.star() == p and p * p == p, v)
    if len(V) <= 40:
        pairs = itertools.combinations(V, 2)
    else:
        # adjacent pairs in the vertex order plus pairs sharing an edge
        pairs = set(zip(V, V[1:]))
        pairs |= {(e.range, e.source) for e in graph.edges.values() if e.range != e.source}
    for v, w in pairs:
        ck1.record((P[v] * P[w]).is_zero(), (v, w))
    ck1.into(rep)

    paths = graph.paths_upto(bound)
    images = {p: fn(p) for p in paths}

    def image(p):
        if p not in images:
            images[p] = fn(p)
        return images[p]

    ck2 = Tally(prefix + "CK2")
    for lam in paths:
        for n in degrees_upto(bound):
            for mu in graph.paths_from(lam.source, n, strict=False):
                ck2.record(image(lam) * image(mu) == image(graph.compose(lam, mu)), (str(lam), str(mu)))
    ck2.into(rep)

    ck3 = Tally(prefix + "CK3")
    for lam in paths:
        ck3.record(image(lam).star() * image(lam) == P[lam.source], str(lam))
    ck3.into(rep)

    ck4 = Tally(prefix + "CK4")
    for v in V:
        for n in degrees_upto(ck4_bound):
            try:
                lams = graph.paths_from(v, n, strict=True)
            except WindowExhausted:
                ck4.skip((v, n))
                continue
            tot = tensor_sum((image(l) * image(l).star() for l in lams), P[v].alg, P[v].n)
            ck4.record(tot == P[v], (v, n))
    ck4.into(rep)
    return rep


# -- the skew-product family S_(λ,g) = s_λ ⊗ χ_g ρ_η(λ) ------------------------

class SkewFamily:
    """Images of the generators of C*(Λ ×_η Γ) ⋊ Γ in C*(Λ) ⊗ K(l²(Γ))."""

    def __init__(self, base: KGraph, eta: dict, group: FiniteGroup, alg: CKAlgebra | None = None):
        self.base = base
        self.eta_edges = dict(eta)
        self.group = group
        self.ops = RegularOps(group)
        self.alg = alg or CKAlgebra(base)
        self.skew = skew_product(base, eta, group)
        self.n = group.order

    def eta(self, lam: Path):
        return self.group.prod(self.eta_edges[e] for e in lam.edges)

    def S(self, lam: Path, g) -> TensorElement:
        m = self.ops.chi(g) @ self.ops.rho(self.eta(lam))
        return TensorElement.tensor(self.alg.s(lam), m)

    def S_sigma(self, sigma: Path) -> TensorElement:
        lam, g = self.skew.project(sigma)
        return self.S(lam, g)

    def one(self, m) -> TensorElement:
        return TensorElement.scalar(self.alg, m)

    def U(self, h):
        return self.one(self.ops.lam(h))

    def W(self, k):
        return self.one(self.ops.rho(k))

    def Y(self, g):
        # p_Λ⁰ ⊗ χ_g with p the finite sum of vertex projections
        return TensorElement.tensor(sum_pis(self.alg, [self.base.vertex(v) for v in self.base.vertices]),
                                    self.ops.chi(g))

    def e(self, g, h):
        return self.U(g) * self.Y(self.group.one) * self.U(h).star()

    def T(self, lam: Path) -> TensorElement:
        big = tensor_sum((self.S(lam, g) for g in self.group.elements()), self.alg, self.n)
        return big * self.W(self.group.inv(self.eta(lam)))


def skew_ck_family(base: KGraph, eta: dict, group: FiniteGroup) -> SkewFamily:
    return SkewFamily(base, eta, group)


def check_skew_family(fam: SkewFamily, bound=None, ck4_bound=None) -> Report:
    return check_ck_family(fam.skew.graph, fam.S_sigma, bound, ck4_bound, prefix="S: ")


def check_covariance(fam: SkewFamily, bound=None, convention: str = "hg") -> Report:
    """(1 ⊗ λ_h) S_(λ,g) = S_(λ,hg) (1 ⊗ λ_h); ``convention='gh'`` is a negative control."""
    G = fam.group
    rep = Report("covariance")
    t = Tally("(1⊗λ_h)S(λ,g) = S(λ,hg)(1⊗λ_h)" if convention == "hg" else
              "(1⊗λ_h)S(λ,g) = S(λ,gh)(1⊗λ_h)")
    for lam in fam.base.paths_upto(bound or (1,) * fam.base.rank):
        for g, h in itertools.product(G.elements(), G.elements()):
            gh = G.mul(h, g) if convention == "hg" else G.mul(g, h)
            t.record(fam.U(h) * fam.S(lam, g) == fam.S(lam, gh) * fam.U(h),
                     {"λ": str(lam), "g": g, "h": h})
    t.into(rep)
    return rep


def check_matrix_units(fam: SkewFamily) -> Report:
    G = fam.group
    els = G.elements()
    rep = Report("matrix units")
    t_uy = Tally("u_hy_g = y_hgu_h")
    t_wy = Tally("w_ky_g = y_gk⁻¹w_k")
    t_wu = Tally("w_ku_h = u_hw_k")
    t_ee = Tally("e_gh e_g'h' = δ e_gh'")
    t_es = Tally("e_gh* = e_hg")
    for g, h in itertools.product(els, els):
        t_uy.record(fam.U(h) * fam.Y(g) == fam.Y(G.mul(h, g)) * fam.U(h), (h, g))
        t_wy.record(fam.W(h) * fam.Y(g) == fam.Y(G.mul(g, G.inv(h))) * fam.W(h), (h, g))
        t_wu.record(fam.W(h) * fam.U(g) == fam.U(g) * fam.W(h), (h, g))
        t_es.record(fam.e(g, h).star() == fam.e(h, g), (g, h))
    E = {(g, h): fam.e(g, h) for g in els for h in els}
    zero = TensorElement(fam.alg, fam.n, {})
    for (g, h), (g2, h2) in itertools.product(E, E):
        expect = E[(g, h2)] if h == g2 else zero
        t_ee.record(E[(g, h)] * E[(g2, h2)] == expect, ((g, h), (g2, h2)))
    for x in (t_uy, t_wy, t_wu, t_ee, t_es):
        x.into(rep)
    diag = tensor_sum((E[(g, g)] for g in els), fam.alg, fam.n)
    rep.add("Σ e_gg = 1⊗1", diag == fam.one(fam.ops.identity))
    return rep


def check_T_family(fam: SkewFamily, bound=None, ck4_bound=None) -> Report:
    """T_λ = s_{λ}×Γ w_η(λ)⁻¹: commutation, CK relations and the θ∘φ chain."""
    G = fam.group
    els = G.elements()
    g_ = fam.base
    bound = bound or (1,) * g_.rank
    rep = Report("T family")
    paths = g_.paths_upto(bound)

    t_form = Tally("T_λ = s_λ⊗1")
    t_comm = Tally("T_λ commutes with y_g, u_h, w_k")
    for lam in paths:
        T = fam.T(lam)
        t_form.record(T == TensorElement.tensor(fam.alg.s(lam), fam.ops.identity), str(lam))
        for x in els:
            for name, op in (("y", fam.Y(x)), ("u", fam.U(x)), ("w", fam.W(x))):
                t_comm.record(T * op == op * T, (str(lam), name, x))
    t_form.into(rep)
    t_comm.into(rep)

    t_sv = Tally("s*s over {λ}×Γ = s over {s(λ)}×Γ")
    sk = fam.skew
    for lam in paths:
        big = tensor_sum((fam.S(lam, g) for g in els), fam.alg, fam.n)
        src = tensor_sum((fam.S(g_.vertex(lam.source), g) for g in els), fam.alg, fam.n)
        t_sv.record(big.star() * big == src, str(lam))
    t_sv.into(rep)
    rep.extend(check_ck_family(g_, fam.T, bound, ck4_bound, prefix="T: "))

    # θ∘φ on the generators i(s_(λ,g)) i_Γ(h)
    chain = Tally("θ∘φ = id on generators")
    for lam in paths:
        eta = fam.eta(lam)
        for g, h in itertools.product(els, els):
            target = fam.S(lam, g) * fam.U(h)
            k = fam.ops.chi(g) @ fam.ops.rho(eta) @ fam.ops.lam(h)
            # (y×u)(k) via the matrix units e_ab = u_a y_1 u_b*
            yu = tensor_sum((fam.e(a, b) * int(k[a, b]) for a in els for b in els if k[a, b]),
                            fam.alg, fam.n)
            steps = [fam.T(lam) * yu]
            winv = fam.W(G.inv(eta))
            big = tensor_sum((fam.S(lam, x) for x in els), fam.alg, fam.n)
            steps.append(big * winv * fam.Y(g) * fam.W(eta) * fam.U(h))
            steps.append(big * fam.Y(G.mul(g, eta)) * winv * fam.W(eta) * fam.U(h))
            steps.append(big * fam.Y(G.mul(g, eta)) * fam.U(h))
            ok = yu == fam.Y(g) * fam.W(eta) * fam.U(h) and all(s == target for s in steps)
            chain.record(ok, {"λ": str(lam), "g": g, "h": h})
    chain.into(rep)
    return rep


# -- the main theorem's Ψ on a Toeplitz window -------------------------------

class MainFamily:
    """Ψ(σ) = s_q(σ) ⊗ E_{ξ(σ), ξ(σ)η(q(σ))} on the window [0, N]^d."""

    def __init__(self, data: GrossTuckerData, N):
        self.data = data
        self.ops = ToeplitzOps(N)
        self.alg = CKAlgebra(data.quotient.graph)
        self.monoid = data.monoid

    def psi(self, sigma: Path) -> TensorElement:
        d = self.data
        lam = d.q(sigma)
        t = d.xi_of(sigma)
        m = self.ops.chi_rho(t, d.eta_of(lam))
        return TensorElement.tensor(self.alg.s(lam), m)

    def lam(self, u) -> TensorElement:
        return TensorElement.scalar(self.alg, self.ops.lam(u))


def main_theorem_family(data: GrossTuckerData, N, bound=None, ck4_bound=None) -> tuple[MainFamily, Report]:
    fam = MainFamily(data, N)
    a = data.action
    g = a.graph
    rep = Report("main theorem")
    toe = fam.ops.verify()
    rep.extend(toe, "toeplitz: ")
    rep.extend(check_ck_family(g, fam.psi, bound, ck4_bound, prefix="Ψ: "))
    cov = Tally("Ψ(α_u σ)(1⊗λ_u) = (1⊗λ_u)Ψ(σ)")
    for sigma in g.paths_upto(bound or (1,) * g.rank):
        for u in fam.monoid.generators:
            img = a.apply_path(u, sigma)
            if img is None:
                cov.skip((str(sigma), u))
                continue
            L = fam.lam(u)
            cov.record(fam.psi(img) * L == L * fam.psi(sigma), {"σ": str(sigma), "u": u})
    cov.into(rep)
    return fam, rep
