import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgbench import actions as act
from kgbench.graphs import (C_FUNCTOR, delta_translation, delta_window, f2theta, swap_action, torus,
                            two_tori, twovertex)
from kgbench.kgraph import validate_kgraph
from kgbench.monoid import FiniteGroup, FreeAbelian, IntegerLattice, cyclic, symmetric3
from kgbench.report import Status
from kgbench.suites import gt_data_for_skew, skew_setup

N2 = FreeAbelian(2)
F2 = f2theta()

# twovertex with a functor into N: a_i, x carry 1; b_i, y carry 0
TV_FUNCTOR = {"a1": (1,), "a2": (1,), "x": (1,), "b1": (0,), "b2": (0,), "y": (0,)}


@pytest.fixture(scope="module")
def f2_skew():
    return skew_setup(F2, C_FUNCTOR, N2, (3, 3))


# -- freeness ----------------------------------------------------------------------

def test_lt_is_free(f2_skew):
    _, lt = f2_skew
    assert act.check_free(lt, (3, 3)).ok
    assert act.check_free(lt, (3, 3), paths=True).ok


def test_trivial_integer_action_not_free():
    g = torus()
    ident = {x: x for x in list(g.vertices) + list(g.edges)}
    a = act.Action.from_maps(IntegerLattice(1), g, {(1,): ident, (-1,): ident})
    rec = act.check_free(a, (1,))
    assert rec.status is Status.FAIL
    v, t, u = rec.witness
    assert v == "v" and t != u


def test_delta_translation_free():
    a = delta_translation(delta_window(2, 3))
    assert act.check_free(a, (6, 6)).ok
    assert act.check_action(a, (2, 2)).passed


# -- quotients ---------------------------------------------------------------------

def test_quotient_of_skew_is_base():
    sk, lt = skew_setup(twovertex(), TV_FUNCTOR, FreeAbelian(1), (3,))
    Q = act.quotient(lt, (3,))
    # oracle: brute-force orbits are the fibres of (λ, t) ↦ λ
    fibres = {}
    for x, (b, _) in sk.split.items():
        fibres.setdefault(b, set()).add(x)
    classes = {}
    for x, c in Q.cls.items():
        classes.setdefault(c, set()).add(x)
    assert sorted(map(sorted, fibres.values())) == sorted(map(sorted, classes.values()))
    # and the induced map on classes is a k-graph isomorphism onto the base
    base = sk.base
    name = {c: sk.split[c][0] for c in classes}
    for qe, ed in Q.graph.edges.items():
        be = base.edges[name[qe]]
        assert (ed.color, name[ed.range], name[ed.source]) == (be.color, be.range, be.source)
    assert {tuple(name[x] for x in s) for s in Q.graph.squares} == set(base.squares)
    assert validate_kgraph(Q.graph).passed


def test_quotient_of_delta2():
    g = delta_window(2, 3)
    Q = act.quotient(delta_translation(g), (6, 6))
    # oracle: vertices and same-colour edges differ by a translation, so one class each
    assert len(Q.graph.vertices) == 1
    assert sorted(ed.color for ed in Q.graph.edges.values()) == [1, 2]
    assert validate_kgraph(Q.graph).passed
    v = Q.graph.vertices[0]
    for n in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1)]:
        assert len(Q.graph.paths_from(v, n, strict=False)) == 1


def test_quotient_by_trivial_group():
    g = twovertex()
    triv = FiniteGroup([[0]], name="1", generators=())
    Q = act.quotient(act.Action.from_maps(triv, g, {}), None)
    assert set(Q.graph.vertices) == set(g.vertices) and set(Q.graph.edges) == set(g.edges)
    assert all(Q.cls[x] == x for x in Q.cls)
    assert sorted(Q.graph.squares) == sorted(g.squares)


def test_quotient_rejects_non_free():
    g = torus()
    ident = {x: x for x in list(g.vertices) + list(g.edges)}
    a = act.Action.from_maps(IntegerLattice(1), g, {(1,): ident, (-1,): ident})
    with pytest.raises(act.FreenessError):
        act.quotient(a, (1,))


# -- skew products ----------------------------------------------------------------

def test_skew_sources(f2_skew):
    sk, _ = f2_skew
    f3 = sk.graph.edge(sk.eid("f3", (0, 0)))
    assert f3.source == "v@1,0"
    g3 = sk.graph.edge(sk.eid("g3", (1, 1)))
    assert g3.source == "v@1,2"


def test_skew_with_trivial_functor():
    eta = {e: (0, 0) for e in F2.edges}
    sk = act.skew_product(F2, eta, N2, (1, 1))
    for e, ed in sk.graph.edges.items():
        b, t = sk.split[e]
        assert ed.source == sk.vid("v", t)


def test_skew_window_size_and_validity():
    sk = act.skew_product(F2, C_FUNCTOR, N2, (2, 2))
    assert len(sk.graph.vertices) == 9
    assert validate_kgraph(sk.graph).passed


def test_functor_must_respect_squares():
    bad = dict(C_FUNCTOR, f1=(1, 0))
    with pytest.raises(act.FunctorError):
        act.skew_product(F2, bad, N2, (2, 2))


def test_left_translation(f2_skew):
    sk, lt = f2_skew
    assert lt.apply((1, 0), "f3@0,0") == "f3@1,0"
    for x in lt.ids:
        assert lt.apply((0, 0), x) == x
    for x in ["v@0,0", "f1@0,1", "g3@1,0"]:
        for t in [(1, 0), (0, 1)]:
            for u in [(1, 1), (0, 1)]:
                assert lt.apply(u, lt.apply(t, x)) == lt.apply(N2.mul(u, t), x)


# -- fundamental domains -------------------------------------------------------------

def test_skew_domain_is_zero_slice(f2_skew):
    sk, lt = f2_skew
    search = act.find_fundamental_domain(lt, (3, 3))
    assert search.status == "found"
    expect = {x for x, (_, t) in sk.split.items() if t == (0, 0)}
    assert set(search.domain.vertices) | set(search.domain.edges) == expect


def test_delta2_certificate():
    a = delta_translation(delta_window(2, 3))
    search = act.find_fundamental_domain(a, (6, 6))
    assert search.status == "infeasible"
    cert = search.certificate
    assert isinstance(cert, act.InfeasibilityCertificate)
    assert cert.verify(a)
    assert cert.n != cert.p and cert.t_n != cert.t_p
    # the premise: n has a generator preimage p, so p needs its own representative
    (n, gen, p), _ = cert.premise
    assert (n, p) == (cert.n, cert.p)
    assert a.apply(gen, p) == n
    rec = search.record()
    assert rec.status is Status.UNTESTED


def test_tampered_certificate_does_not_verify():
    a = delta_translation(delta_window(2, 3))
    cert = act.find_fundamental_domain(a, (6, 6)).certificate
    bad = act.InfeasibilityCertificate(cert.n, cert.p, cert.m, cert.t_n, cert.t_n, cert.premise)
    assert not bad.verify(a)


def test_z2_swap_domain_matches_brute_force():
    a = swap_action()
    g = a.graph
    copies = []
    for c in ("1", "2"):
        copies.append(act.FundamentalDomain(frozenset({"v" + c}), frozenset({"f" + c, "g" + c})))
    # oracle: both transversals are fundamental domains, mixed ones are not range-closed
    for F in copies:
        assert act.verify_fundamental_domain(a, F).passed
    mixed = act.FundamentalDomain(frozenset({"v1"}), frozenset({"f2", "g1"}))
    assert not act.verify_fundamental_domain(a, mixed).passed
    found = act.find_fundamental_domain(a)
    assert found.status == "found" and found.domain in copies
    assert act.verify_fundamental_domain(a, found.domain).passed


def test_delta2_corner_is_window_limited():
    # the corner vertex covers the window exactly once, but every element has
    # preimages beyond the window, so uniqueness is only boundary-limited
    g = delta_window(2, 3)
    a = delta_translation(g)
    corner = "-3,-3"
    F = act.FundamentalDomain(frozenset({corner}),
                              frozenset(e for e, ed in g.edges.items() if ed.range == corner))
    rep = act.verify_fundamental_domain(a, F, (6, 6))
    assert rep.passed
    assert [r.check for r in rep.untested] == ["unique representative [boundary]"]
    data = act.gross_tucker(a, F, (6, 6))
    assert sorted(data.eta.values()) == [(0, 1), (1, 0)]
    assert act.verify_iso(data, (1, 1)).passed


# -- Gross-Tucker ---------------------------------------------------------------------

def test_gross_tucker_on_skew(f2_skew):
    sk, lt, data = gt_data_for_skew(F2, C_FUNCTOR, N2, (3, 3))
    for x, t in data.xi.items():
        assert sk.split[x][1] == t
    for qe, val in data.eta.items():
        assert C_FUNCTOR[sk.split[qe][0]] == val
    rep = act.verify_iso(data, (1, 1))
    assert rep.passed and not rep.untested
    assert len(rep.records) == 11
    # c∘q is the identity on F
    for x in data.domain.edges:
        sigma = sk.graph.edge(x)
        assert data.c(data.q(sigma)) == sigma


def test_gross_tucker_z2_swap_eta_trivial():
    a = swap_action()
    F = act.find_fundamental_domain(a).domain
    data = act.gross_tucker(a, F)
    # F is closed under s, so every η value is the identity
    assert set(data.eta.values()) == {0}
    assert act.verify_iso(data).passed


def test_corrupted_xi_breaks_equivariance():
    sk, lt, data = gt_data_for_skew(F2, C_FUNCTOR, N2, (3, 3))
    x = "f1@1,1"
    data.xi[x] = (2, 1)
    rep = act.verify_iso(data, (1, 1))
    fails = {r.check: r.witness for r in rep.failures}
    assert "φ∘α_t = lt_t∘φ" in fails
    assert fails["φ∘α_t = lt_t∘φ"] is not None


def test_gross_tucker_rejects_bad_domain():
    a = swap_action()
    both = act.FundamentalDomain(frozenset({"v1", "v2"}), frozenset({"f1", "g1", "f2", "g2"}))
    with pytest.raises(act.DomainError):
        act.gross_tucker(a, both)


# -- saturation and dilation ---------------------------------------------------------

def test_saturation_examples():
    assert act.check_saturated(F2, F2.vertices, F2.edges).ok
    g = two_tori()
    assert act.check_saturated(g, ["v1"], ["f1", "g1"]).ok
    rec = act.check_saturated(g, ["v1"], ["f1"])
    assert rec.status is Status.FAIL and rec.witness == "g1"


def _z_skew(radius=2):
    G = IntegerLattice(2)
    sk = act.skew_product(F2, C_FUNCTOR, G, (radius, radius))
    return sk, act.left_translation(sk)


def test_dilation_hypotheses_positive_part():
    sk, beta = _z_skew()
    om_v = [x for x in sk.graph.vertices if min(sk.split[x][1]) >= 0]
    om_e = [x for x in sk.graph.edges if min(sk.split[x][1]) >= 0]
    rep = act.check_dilation_hypotheses(sk.graph, om_v, om_e, beta, N2, (4, 4))
    assert rep.passed
    assert rep["saturated"].ok and rep["⋃ β_u⁻¹(Ω) = Λ"].status is Status.PASS


def test_dilation_whole_graph_trivial():
    sk, beta = _z_skew(1)
    rep = act.check_dilation_hypotheses(sk.graph, sk.graph.vertices, sk.graph.edges, beta, N2, (2, 2))
    assert rep.passed


def test_dilation_shifted_slice_witnesses():
    sk, beta = _z_skew()
    om_v = [x for x in sk.graph.vertices if sk.split[x][1][0] >= 1 and sk.split[x][1][1] >= 0]
    om_e = [x for x in sk.graph.edges if sk.split[x][1][0] >= 1 and sk.split[x][1][1] >= 0]
    rep = act.check_dilation_hypotheses(sk.graph, om_v, om_e, beta, N2, (4, 4))
    assert rep["β_u(Ω) ⊂ Ω"].status is Status.PASS
    assert rep["⋃ β_u⁻¹(Ω) = Λ"].status is Status.PASS
    # oracle: the witness u must lift the first coordinate to at least 1
    om = set(om_v) | set(om_e)
    for x, u in rep.exhaustion_witnesses:
        t = sk.split[x][1]
        assert t[0] + u[0] >= 1 and t[1] + u[1] >= 0
        assert beta.apply(u, x) in om


# -- properties -----------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_q_is_a_functor(seed):
    sk, lt, data = gt_data_for_skew(F2, C_FUNCTOR, N2, (2, 2))
    g = sk.graph
    rng = random.Random(seed)
    lam = rng.choice(g.paths_upto((1, 1)))
    nexts = [mu for mu in g.paths_upto((1, 1)) if mu.range == lam.source]
    if not nexts:
        return
    mu = rng.choice(nexts)
    Qg = data.quotient.graph
    assert data.q(g.compose(lam, mu)) == Qg.compose(data.q(lam), data.q(mu))
    # φ⁻¹∘φ = id
    assert data.phi_inv(*data.phi(lam)) == lam


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_ore_transitivity(seed):
    # λ = α_t(σ) and μ = α_u(σ) are equivalent; the Ore pair x t = y u joins them
    rng = random.Random(seed)
    sk, lt = skew_setup(F2, C_FUNCTOR, N2, (3, 3))
    base_ids = [x for x, (_, t) in sk.split.items() if t == (0, 0)]
    sigma = rng.choice(base_ids)
    t = (rng.randint(0, 1), rng.randint(0, 1))
    u = (rng.randint(0, 1), rng.randint(0, 1))
    x, y = N2.ore_pair(t, u)
    assert N2.mul(x, t) == N2.mul(y, u)
    lam, mu = lt.apply(t, sigma), lt.apply(u, sigma)
    assert lt.apply(x, lam) == lt.apply(y, mu)


@given(t=st.integers(0, 5), u=st.integers(0, 5))
def test_group_ore_pairs(t, u):
    G = symmetric3()
    x, y = G.ore_pair(t, u)
    assert G.mul(x, t) == G.mul(y, u)


def test_search_result_reverifies():
    for a in [swap_action(), skew_setup(twovertex(), TV_FUNCTOR, FreeAbelian(1), (3,))[1]]:
        s = act.find_fundamental_domain(a, (3,) if a.monoid == FreeAbelian(1) else None)
        assert s.status == "found"
        assert act.verify_fundamental_domain(a, s.domain, (3,) if a.monoid == FreeAbelian(1) else None).passed


def test_from_maps_checks_totality():
    g = two_tori()
    with pytest.raises(act.ActionError):
        act.Action.from_maps(cyclic(2), g, {1: {"v1": "v2"}})
