"""The nine acceptance criteria, each timed against its limit.

A one-line pass/fail summary per criterion is printed at the end of the run
(see conftest.py).
"""
import time

import pytest

from kgbench import actions as act
from kgbench.graphs import C_FUNCTOR, delta_translation, delta_window, f2theta, torus, twovertex
from kgbench.kgraph import validate_kgraph
from kgbench.monoid import FreeAbelian, cyclic
from kgbench.reps import check_skew_family, main_theorem_family, skew_ck_family
from kgbench.report import Status
from kgbench.suites import (aperiodicity_suite, ck_engine_suite, gross_tucker_suite, gt_data_for_skew,
                            lemma21_suite, main_suite, reduce_functor, skew_setup, thm51_suite)

N2 = FreeAbelian(2)
GRAPHS = [f2theta(), torus(), twovertex()]


class Clock:
    def __init__(self, request, limit):
        self.request = request
        self.limit = limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        self.request.node.user_properties.append(("elapsed", self.elapsed))
        self.request.node.user_properties.append(("limit", self.limit))
        return False

    def check(self):
        assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


@pytest.mark.criterion(1, "f2theta validation")
def test_c1_f2theta_validation(request):
    with Clock(request, 1) as clk:
        rep = validate_kgraph(f2theta())
    clk.check()
    assert rep.passed and not rep.untested
    assert len(rep.records) >= 3


@pytest.mark.criterion(2, "lemma21 suite: finite-set partial isometries")
def test_c2_lemma21(request):
    with Clock(request, 30) as clk:
        reps = [lemma21_suite(g, samples=100, seed=7) for g in GRAPHS]
    clk.check()
    for rep in reps:
        assert rep.passed and not rep.untested, rep.render()
        for check in ("s_V partial isometry", "s_V s_α s_β* formula", "s_α s_β* s_V formula",
                      "s_V s_W = s_VW"):
            assert rep[check].status is Status.PASS


@pytest.mark.criterion(3, "CK-engine consistency")
def test_c3_ck_engine(request):
    with Clock(request, 60) as clk:
        reps = [ck_engine_suite(g, triples=200, seed=11, ck4_bound=(2, 2)) for g in GRAPHS]
    clk.check()
    for rep in reps:
        assert rep.passed and not rep.untested, rep.render()
        assert rep["associativity"].detail == "200 instances"
        assert rep["CK4"].status is Status.PASS


@pytest.mark.criterion(4, "Gross-Tucker round trip")
def test_c4_gross_tucker(request):
    with Clock(request, 30) as clk:
        sk, lt = skew_setup(f2theta(), C_FUNCTOR, N2, (3, 3))
        rep = gross_tucker_suite(lt, (3, 3), (2, 2), skew=sk)
        search = act.find_fundamental_domain(lt, (3, 3))
    clk.check()
    assert rep.passed and not rep.untested, rep.render()
    zero_slice = {x for x, (_, t) in sk.split.items() if t == (0, 0)}
    assert set(search.domain.vertices) | set(search.domain.edges) == zero_slice
    for check in ("q(c(λ)) = λ", "s(c(λ)) = α_η(λ)(c(s(λ)))", "σ = α_ξ(σ)(c(q(σ)))",
                  "ξ(r(σ)) = ξ(σ)", "ξ(s(σ)) = ξ(σ)η(q(σ))", "φ∘α_t = lt_t∘φ"):
        assert rep[check].status is Status.PASS


@pytest.mark.criterion(5, "Delta_2 infeasibility")
def test_c5_delta2(request):
    with Clock(request, 10) as clk:
        a = delta_translation(delta_window(2, 3))
        search = act.find_fundamental_domain(a, (6, 6))
    clk.check()
    assert search.status == "infeasible"
    cert = search.certificate
    assert isinstance(cert, act.InfeasibilityCertificate) and cert.verify(a)
    # m lies above both candidates and is reached from each
    n = tuple(int(x) for x in cert.n.split(","))
    p = tuple(int(x) for x in cert.p.split(","))
    m = tuple(int(x) for x in cert.m.split(","))
    assert n != p and all(mi >= max(ni, pi) for mi, ni, pi in zip(m, n, p))
    assert a.apply(cert.t_n, cert.n) == cert.m == a.apply(cert.t_p, cert.p)


@pytest.mark.criterion(6, "thm51 suite: skew-product families over finite groups")
def test_c6_thm51(request):
    with Clock(request, 120) as clk:
        reps = {G.name: thm51_suite(f2theta(), reduce_functor(C_FUNCTOR, G), G, (1, 1))
                for G in (cyclic(2), cyclic(3))}
    clk.check()
    for name, rep in reps.items():
        assert rep.passed and not rep.untested, rep.render()
        for check in ("S: CK1", "S: CK4", "(1⊗λ_h)S(λ,g) = S(λ,hg)(1⊗λ_h)", "u_hy_g = y_hgu_h",
                      "w_ky_g = y_gk⁻¹w_k", "e_gh e_g'h' = δ e_gh'", "θ∘φ = id on generators"):
            assert rep[check].status is Status.PASS, (name, check)


@pytest.mark.criterion(7, "main-theorem suite")
def test_c7_main(request):
    with Clock(request, 120) as clk:
        # every window path of degree ≤ (2,2); the loop edges make the full path set infinite
        rep = main_suite(f2theta(), C_FUNCTOR, N2, (3, 3), (2, 2))
    clk.check()
    assert rep.passed, rep.render()
    for check in ("Ψ: CK1", "Ψ: CK2", "Ψ: CK3", "Ψ: CK4", "Ψ(α_u σ)(1⊗λ_u) = (1⊗λ_u)Ψ(σ)"):
        assert rep[check].status is Status.PASS
    assert rep.untested
    assert all(r.check.endswith("[boundary]") for r in rep.untested)


@pytest.mark.criterion(8, "aperiodicity evidence")
def test_c8_aperiodicity(request):
    with Clock(request, 30) as clk:
        rep = aperiodicity_suite(f2theta(), (2, 2), (2, 2))
    clk.check()
    periods = [r for r in rep.records if r.check.startswith("period")]
    assert len(periods) == 36
    assert all(r.status is Status.PASS and r.witness for r in periods)
    assert rep["witnesses re-verify"].status is Status.PASS


def _failed_with_witness(rep):
    return bool(rep.failures) and all(r.witness is not None for r in rep.failures)


@pytest.mark.criterion(9, "negative controls")
def test_c9_negative_controls(request):
    with Clock(request, 120) as clk:
        # deleted square
        broken = f2theta(drop=("f1", "g1"))
        r_val = validate_kgraph(broken)

        # perturbed η: a functor that no longer respects the squares
        bad = dict(C_FUNCTOR, f1=(1, 0))
        r_fun = act.check_functor(f2theta(), bad, N2)

        # perturbed η inside the skew family: S is built from a different η than the graph
        G = cyclic(2)
        fam = skew_ck_family(f2theta(), reduce_functor(C_FUNCTOR, G), G)
        fam.eta_edges["f3"] = 0
        r_skew = check_skew_family(fam, (1, 1))

        # perturbed η in Gross-Tucker data
        _, _, data = gt_data_for_skew(f2theta(), C_FUNCTOR, N2, (3, 3))
        qe = next(e for e, v in data.eta.items() if v == (1, 0))
        data.eta[qe] = (0, 0)
        r_gt_eta = act.verify_iso(data, (1, 1))
        _, r_main_eta = main_theorem_family(data, (3, 3))

        # wrong ξ
        _, _, data = gt_data_for_skew(f2theta(), C_FUNCTOR, N2, (3, 3))
        data.xi["f1@1,1"] = (2, 1)
        r_gt_xi = act.verify_iso(data, (1, 1))
        _, r_main_xi = main_theorem_family(data, (3, 3))
    clk.check()

    assert not r_val.passed
    assert any(tuple(r.witness) == ("f1", "g1") for r in r_val.failures if isinstance(r.witness, (tuple, list)))
    assert r_fun.status is Status.FAIL and "square" in r_fun.witness
    for rep in (r_val, r_skew, r_gt_eta, r_main_eta, r_gt_xi, r_main_xi):
        assert _failed_with_witness(rep), rep.render()
    assert "φ∘α_t = lt_t∘φ" in {r.check for r in r_gt_xi.failures}
