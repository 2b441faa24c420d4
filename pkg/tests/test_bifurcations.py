"""Bifurcation machinery: quartic, classification rules, both catalog
routes, the numeric solver, and the instability intervals."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from res112 import (AmbiguousClassificationError, BifurcationKind,
                    CasimirValues, ReducedParams, ValidationError, a0_root,
                    catalog_point, catalog_point_kappa0,
                    classify_multiple_root, f_quartic, instability_interval,
                    kappa_scaling, newton_triple_root,
                    solve_bifurcations_numeric)
from res112.bifurcations import (_family_prediction, a_quadruple,
                                 a_sub_boundary, a_sup_boundary,
                                 g_cubic_coeffs, residual_scale)

RNG = np.random.default_rng(31415926)


# ---------------------------------------------------------------------------
# the quartic itself
# ---------------------------------------------------------------------------

def test_quartic_expansion_example():
    q = f_quartic(0.0, ReducedParams(lam=0.0, kappa=1.0), CasimirValues(0, 0))
    # F(R) = R^4/4 - R^3
    assert q.coeffs == (0.0, 0.0, 0.0, -1.0, 0.25)
    assert q.value(2.0) == pytest.approx(4.0 - 8.0)


def test_quartic_matches_defining_expression():
    for _ in range(300):
        lam, kap, mu, ell, h = (float(v) for v in RNG.normal(0, 1.5, 5))
        q = f_quartic(h, ReducedParams(lam=lam, kappa=kap), CasimirValues(mu, ell))
        for R in RNG.uniform(-2, 4, 5):
            direct = (h - lam * R - 0.5 * kap * R * R) ** 2 \
                - (R * R - mu * mu) * (R - ell)
            scale = max(1.0, abs(direct))
            assert abs(q.value(R) - direct) <= 1e-13 * scale
        assert q.d4 == pytest.approx(6.0 * kap * kap)


def test_quartic_nonnegative_at_r_min():
    for _ in range(500):
        lam, mu, ell, h = (float(v) for v in RNG.normal(0, 1.5, 4))
        q = f_quartic(h, ReducedParams(lam=lam, kappa=1.0), CasimirValues(mu, ell))
        assert q.value(max(abs(mu), ell)) >= -1e-12


# ---------------------------------------------------------------------------
# classification rules
# ---------------------------------------------------------------------------

def test_classify_resonant_equilibrium():
    # the common point of the three subcritical curves: triple root at the
    # cuspidal tip with F'''(0) = -6
    cas = CasimirValues(0.0, 0.0)
    q = f_quartic(0.0, ReducedParams(lam=0.0, kappa=1.0), cas)
    assert q.d3(0.0) == pytest.approx(-6.0)
    assert classify_multiple_root(0.0, q, cas) is BifurcationKind.HOPF_SUB


def test_classify_supercritical_branch_point():
    cas = CasimirValues(0.0, -2.25)
    h = 0.0
    q = f_quartic(h, ReducedParams(lam=1.5, kappa=1.0), cas)
    assert q.d3(0.0) == pytest.approx(3.0)
    assert classify_multiple_root(0.0, q, cas) is BifurcationKind.HOPF_SUPER


def test_classify_quadruple_root_degenerate():
    cas = CasimirValues(0.0, -1.0)
    q = f_quartic(0.0, ReducedParams(lam=1.0, kappa=1.0), cas)
    # quadruple root at the tip: F = (R^4)/4 shape
    assert classify_multiple_root(0.0, q, cas) is BifurcationKind.HOPF_DEGENERATE


def test_classify_rejects_non_root():
    cas = CasimirValues(0.3, 0.1)
    q = f_quartic(1.0, ReducedParams(lam=0.2, kappa=1.0), cas)
    with pytest.raises(ValidationError):
        classify_multiple_root(1.0, q, cas)


def test_classify_flags_gray_zone():
    # a subcritical Hopf point an epsilon away from the degenerate one: the
    # root is at the tip and F''' sits in the gray band around zero, so no
    # confident sub/degenerate call is possible
    lam = 1.0 - 2e-8
    pt = catalog_point("HHsub3", lam=lam)
    cas = CasimirValues(pt.mu, pt.ell)
    q = f_quartic(pt.h, ReducedParams(lam=lam, kappa=1.0), cas)
    f3 = abs(q.d3(pt.a))
    tol_f3 = 1e-8 * 6.0 * (1.0 + abs(pt.a))
    assert tol_f3 < f3 <= 10 * tol_f3  # genuinely in the gray band
    with pytest.raises(AmbiguousClassificationError):
        classify_multiple_root(pt.a, q, cas)
    # while a clearly subcritical neighbour classifies fine
    pt2 = catalog_point("HHsub3", lam=0.9)
    q2 = f_quartic(pt2.h, ReducedParams(lam=0.9, kappa=1.0),
                   CasimirValues(pt2.mu, pt2.ell))
    assert classify_multiple_root(pt2.a, q2, CasimirValues(pt2.mu, pt2.ell)) \
        is BifurcationKind.HOPF_SUB


# ---------------------------------------------------------------------------
# catalog: spot values straight from the closed forms
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("family,kwargs,expected", [
    ("HHdeg1", {}, (0.5, 0.5, 0.5)),
    ("HHdeg2", {}, (0.5, -0.5, 0.5)),
    ("HHdeg3", {}, (1.0, 0.0, -1.0)),
    ("Cusp3", {"mu": 0.0}, (0.5, 0.0, 0.25)),
    ("HHsub3", {"lam": 0.3}, (0.3, 0.0, -0.09)),
    ("HHsup1", {"lam": 0.0}, (0.0, 2.0, 2.0)),
    ("HHsup2", {"lam": 0.0}, (0.0, -2.0, 2.0)),
])
def test_catalog_spot_values(family, kwargs, expected):
    pt = catalog_point(family, **kwargs)
    assert (pt.lam, pt.mu, pt.ell) == pytest.approx(expected, abs=1e-14)


def test_cusp12_closed_form():
    lam = 0.75
    root = math.sqrt(2 * lam - 1)
    p1 = catalog_point("Cusp1", lam=lam)
    p2 = catalog_point("Cusp2", lam=lam)
    assert p1.mu == pytest.approx(-(lam - root))
    assert p2.mu == pytest.approx(lam - root)
    assert p1.ell == p2.ell == pytest.approx(1 - lam - root)
    assert p1.a == p2.a == pytest.approx(1 - lam)
    assert p1.b == p1.a  # quadruple root


def test_catalog_points_are_verified_roots():
    # every family, sampled across its range:真 triple roots, right kind
    cases = []
    for lam in np.linspace(-1.7, 0.44, 9):
        lam = float(lam)
        hi = a_sub_boundary(lam, 1.0)
        cases += [("CS1", dict(lam=lam, a=0.5 * hi)),
                  ("CS2", dict(lam=lam, a=0.3 * hi)),
                  ("HHsub1", dict(lam=lam)), ("HHsub2", dict(lam=lam)),
                  ("HHsup1", dict(lam=lam)), ("HHsup2", dict(lam=lam)),
                  ("HHsub3", dict(lam=lam))]
        lo = a0_root(lam, 1.0)
        cases.append(("CS3", dict(lam=lam, a=lo + 0.5 * (hi - lo), sign=-1)))
    for lam in np.linspace(0.55, 0.95, 5):
        lam = float(lam)
        lo, hi = 1.0 - lam, a0_root(lam, 1.0)
        cases += [("CS4", dict(lam=lam, a=lo + 0.4 * (hi - lo), sign=1)),
                  ("Cusp1", dict(lam=lam)), ("Cusp2", dict(lam=lam)),
                  ("CS1", dict(lam=lam, a=0.6 * lo)),
                  ("HHsub3", dict(lam=lam))]
    cases += [("HHsup3", dict(lam=2.0)), ("Cusp3", dict(mu=0.3)),
              ("HHdeg1", {}), ("HHdeg2", {}), ("HHdeg3", {})]
    for family, kw in cases:
        pt = catalog_point(family, **kw)
        cas = CasimirValues(pt.mu, pt.ell)
        q = f_quartic(pt.h, ReducedParams(lam=pt.lam, kappa=1.0), cas)
        scale = residual_scale(pt.a, pt.h, cas, 1.0)
        assert max(abs(q.value(pt.a)), abs(q.d1(pt.a)), abs(q.d2(pt.a))) \
            <= 1e-9 * scale, (family, kw)
        assert classify_multiple_root(pt.a, q, cas) is pt.kind, (family, kw)
        # factorization: the leftover root b satisfies F(b) = 0
        if pt.b is not None:
            assert abs(q.value(pt.b)) <= 1e-9 * max(scale, pt.b ** 4)


def test_catalog_general_kappa():
    for kappa in (0.5, 2.0):
        pt = catalog_point("HHdeg3", kappa=kappa)
        assert (pt.lam, pt.mu, pt.ell) == pytest.approx(
            (1 / kappa, 0.0, -1 / kappa ** 2))
        pt = catalog_point("Cusp3", mu=0.0, kappa=kappa)
        assert (pt.lam, pt.ell) == pytest.approx(
            (0.5 / kappa, 0.25 / kappa ** 2))
        lam = 0.2 / kappa
        p = catalog_point("CS1", lam=lam, a=0.4 * a_sub_boundary(lam, kappa),
                          kappa=kappa)
        cas = CasimirValues(p.mu, p.ell)
        q = f_quartic(p.h, ReducedParams(lam=p.lam, kappa=kappa), cas)
        assert max(abs(q.value(p.a)), abs(q.d1(p.a)), abs(q.d2(p.a))) \
            <= 1e-9 * residual_scale(p.a, p.h, cas, kappa)


def test_catalog_range_enforcement():
    with pytest.raises(ValidationError):
        catalog_point("CS1", lam=0.3, a=a_sub_boundary(0.3, 1.0) + 0.1)
    with pytest.raises(ValidationError):
        catalog_point("CS3", lam=0.3, a=0.5 * a0_root(0.3, 1.0))
    with pytest.raises(ValidationError):
        catalog_point("Cusp1", lam=0.3)
    with pytest.raises(ValidationError):
        catalog_point("HHsup3", lam=0.5)
    with pytest.raises(ValidationError):
        catalog_point("Cusp3", mu=0.6)
    with pytest.raises(ValidationError):
        catalog_point("CS1", lam=0.0, a=0.1)


def test_catalog_boundary_lambda_half():
    # CS1/CS2 extended by continuity: flagged boundary points on the
    # factorised branch mu^2 = 2 a^3
    pt = catalog_point("CS1", lam=0.5, a=0.2)
    assert pt.boundary
    assert pt.mu == pytest.approx(-math.sqrt(2 * 0.2 ** 3))
    cas = CasimirValues(pt.mu, pt.ell)
    q = f_quartic(pt.h, ReducedParams(lam=0.5, kappa=1.0), cas)
    assert max(abs(q.value(pt.a)), abs(q.d1(pt.a)), abs(q.d2(pt.a))) <= 1e-12


# ---------------------------------------------------------------------------
# adjacency: family closures meet at the Hopf/cusp strata
# ---------------------------------------------------------------------------

def test_family_adjacency_limits():
    lam = 0.3
    hi = a_sub_boundary(lam, 1.0)
    for fam, target in (("CS2", "HHsub1"), ("CS1", "HHsub2")):
        pt = catalog_point(fam, lam=lam, a=hi * (1 - 1e-9))
        hp = catalog_point(target, lam=lam)
        assert math.hypot(pt.mu - hp.mu, pt.ell - hp.ell) < 1e-3
    # CS3 closure reaches both HHsub1 and HHsub2 through its two signs
    for sign, target in ((1, "HHsub1"), (-1, "HHsub2")):
        pt = catalog_point("CS3", lam=lam, a=hi * (1 - 1e-9), sign=sign)
        hp = catalog_point(target, lam=lam)
        assert math.hypot(pt.mu - hp.mu, pt.ell - hp.ell) < 1e-3
    # CS1/CS2 a -> 0 limits onto HHsub3
    for fam in ("CS1", "CS2"):
        pt = catalog_point(fam, lam=lam, a=1e-10)
        hp = catalog_point("HHsub3", lam=lam)
        assert math.hypot(pt.mu - hp.mu, pt.ell - hp.ell) < 1e-4
    # CS4 closure reaches the cusp edge
    lam = 0.75
    pt = catalog_point("CS4", lam=lam, a=(1 - lam) * (1 + 1e-10), sign=-1)
    cp = catalog_point("Cusp1", lam=lam)
    assert math.hypot(pt.mu - cp.mu, pt.ell - cp.ell) < 1e-4


# ---------------------------------------------------------------------------
# a0 root
# ---------------------------------------------------------------------------

def test_a0_root_bisection_oracle():
    for lam in (0.75, 0.6, 0.9, 0.3, -1.0, -0.2):
        coeffs = g_cubic_coeffs(lam, 1.0)
        a0 = a0_root(lam, 1.0)
        oracle = brentq(lambda a: np.polyval(coeffs, a), 1e-12, 10.0, xtol=1e-14)
        assert a0 == pytest.approx(oracle, abs=1e-10)
        # sole sign change on (0, inf): g < 0 below, > 0 above
        assert np.polyval(coeffs, 0.5 * a0) < 0.0
        assert np.polyval(coeffs, 2.0 * a0) > 0.0


def test_a0_root_window_behavior():
    # g(0) = 4 kappa^2 lam^2 (kappa lam - 1) < 0 inside the window
    for lam in (0.55, 0.75, 0.95):
        g0 = np.polyval(g_cubic_coeffs(lam, 1.0), 0.0)
        assert g0 == pytest.approx(4 * lam * lam * (lam - 1))
        assert g0 < 0.0
    # a0 -> 0 as lam approaches 1/kappa from below
    assert a0_root(1.0 - 1e-7, 1.0) < 1e-5
    with pytest.raises(ValidationError):
        a0_root(1.2, 1.0)  # g > 0 for all a > 0
    with pytest.raises(ValidationError):
        a0_root(0.0, 1.0)


# ---------------------------------------------------------------------------
# numeric solver
# ---------------------------------------------------------------------------

EXPECTED_FAMILIES = {
    -1.0: {"CS1", "CS2", "CS3", "HHsub1", "HHsub2", "HHsub3", "HHsup1", "HHsup2"},
    0.3: {"CS1", "CS2", "CS3", "HHsub1", "HHsub2", "HHsub3", "HHsup1", "HHsup2"},
    0.48: {"CS1", "CS2", "CS3", "HHsub1", "HHsub2", "HHsub3", "HHsup1", "HHsup2"},
    0.52: {"CS1", "CS2", "CS4", "Cusp1", "Cusp2", "HHsub3"},
    0.75: {"CS1", "CS2", "CS4", "Cusp1", "Cusp2", "HHsub3"},
    1.5: {"HHsup3"},
}


@pytest.mark.parametrize("lam", sorted(EXPECTED_FAMILIES))
def test_numeric_solver_recovers_catalog(lam):
    evs = solve_bifurcations_numeric(lam, 1.0, n_grid=401)
    assert {e.family for e in evs if e.family} == EXPECTED_FAMILIES[lam]
    assert all(e.family is not None for e in evs)
    for e in evs:
        if e.family.startswith("CS"):
            pred = _family_prediction(e.family, e.lam, e.a, 1.0,
                                      1 if e.mu >= 0 else -1)
            assert math.hypot(pred[0] - e.mu, pred[1] - e.ell) <= 1e-6
        # every event is a genuine multiple root with consistent kind
        cas = CasimirValues(e.mu, e.ell)
        q = f_quartic(e.h, ReducedParams(lam=e.lam, kappa=1.0), cas)
        assert classify_multiple_root(e.a, q, cas) is e.kind


def test_numeric_solver_lambda_zero_special_case():
    evs = solve_bifurcations_numeric(0.0, 1.0)
    coords = sorted((round(e.mu, 9), round(e.ell, 9)) for e in evs)
    assert coords == [(-2.0, 2.0), (0.0, 0.0), (2.0, 2.0)]
    kinds = {(round(e.mu, 9)): e.kind for e in evs}
    assert kinds[0.0] is BifurcationKind.HOPF_SUB
    assert kinds[2.0] is BifurcationKind.HOPF_SUPER
    assert kinds[-2.0] is BifurcationKind.HOPF_SUPER


def test_numeric_solver_lambda_half_special_case():
    evs = solve_bifurcations_numeric(0.5, 1.0, n_grid=801)
    kinds = {e.kind for e in evs}
    assert BifurcationKind.CUSP in kinds            # the Cusp3 line
    assert BifurcationKind.CENTRE_SADDLE in kinds   # mu^2 = 2 a^3 branch
    assert BifurcationKind.HOPF_DEGENERATE in kinds  # its two endpoints
    degs = sorted(round(e.mu, 9) for e in evs
                  if e.kind is BifurcationKind.HOPF_DEGENERATE)
    assert degs == [-0.5, 0.5]
    # the cusp line is ell = 1/4 + mu^2 exactly
    for e in evs:
        if e.kind is BifurcationKind.CUSP:
            assert e.ell == pytest.approx(0.25 + e.mu ** 2, abs=1e-12)
            assert e.a == pytest.approx(0.5)
    subs = [e for e in evs if e.kind is BifurcationKind.HOPF_SUB]
    assert any(abs(e.ell + 0.25) < 1e-9 for e in subs)  # HHsub3 at (1/2,0,-1/4)


def test_numeric_solver_kappa_scaling_covariance():
    evs2 = solve_bifurcations_numeric(0.15, 2.0, n_grid=401)
    assert {e.family for e in evs2 if e.family} == EXPECTED_FAMILIES[0.3]
    for e in evs2:
        s = kappa_scaling(2.0, lam=e.lam, mu=e.mu, ell=e.ell, R=e.a, h=e.h,
                          inverse=True)
        assert s.lam == pytest.approx(0.3)
        if e.family.startswith("CS"):
            pred = _family_prediction(e.family, s.lam, s.R, 1.0,
                                      1 if s.mu >= 0 else -1)
            assert math.hypot(pred[0] - s.mu, pred[1] - s.ell) <= 1e-8
        else:
            pt = catalog_point(e.family, lam=s.lam)
            assert math.hypot(pt.mu - s.mu, pt.ell - s.ell) <= 1e-8


def test_newton_cross_check():
    # damped Newton on (F, F', F'') from a perturbed seed lands back on the
    # catalog point
    for fam, kw in (("CS1", dict(lam=0.75, a=0.12)),
                    ("CS3", dict(lam=0.3, a=None)),
                    ("CS4", dict(lam=0.75, a=None))):
        lam = kw["lam"]
        if fam == "CS3":
            lo, hi = a0_root(lam, 1.0), a_sub_boundary(lam, 1.0)
            kw["a"] = 0.5 * (lo + hi)
        if fam == "CS4":
            lo, hi = 1.0 - lam, a0_root(lam, 1.0)
            kw["a"] = 0.5 * (lo + hi)
        pt = catalog_point(fam, **kw)
        sol = newton_triple_root(pt.lam, 1.0, pt.mu,
                                 pt.a * 1.001 + 1e-4, pt.h + 1e-3,
                                 pt.ell - 1e-3)
        assert sol is not None
        a, h, ell = sol
        assert a == pytest.approx(pt.a, abs=1e-9)
        assert h == pytest.approx(pt.h, abs=1e-9)
        assert ell == pytest.approx(pt.ell, abs=1e-9)


def test_degenerate_points_are_quadruple_roots():
    for fam in ("HHdeg1", "HHdeg2", "HHdeg3"):
        pt = catalog_point(fam)
        assert pt.b == pytest.approx(pt.a, abs=1e-14)
        assert pt.a == pytest.approx(1.0 - pt.lam, abs=1e-14)  # 1/k^2 - lam/k
        q = f_quartic(pt.h, ReducedParams(lam=pt.lam, kappa=1.0),
                      CasimirValues(pt.mu, pt.ell))
        assert q.d4 == 6.0
        assert abs(q.d3(pt.a)) <= 1e-12


# ---------------------------------------------------------------------------
# kappa = 0 catalog and sweeps
# ---------------------------------------------------------------------------

def test_kappa0_catalog_spot_values():
    pt = catalog_point_kappa0("HHsub1_k0", lam=1.0)
    assert (pt.lam, pt.mu, pt.ell) == pytest.approx((1.0, 0.5, 0.5))
    pt = catalog_point_kappa0("HHsub3_k0", lam=1.0)
    assert (pt.lam, pt.mu, pt.ell) == pytest.approx((1.0, 0.0, -1.0))


def test_kappa0_cs_limits_to_hopf():
    lam = 1.1
    hi = 0.5 * lam * lam
    pt = catalog_point_kappa0("CS2_k0", lam=lam, a=hi * (1 - 1e-10))
    hp = catalog_point_kappa0("HHsub1_k0", lam=lam)
    assert math.hypot(pt.mu - hp.mu, pt.ell - hp.ell) < 1e-4
    pt0 = catalog_point_kappa0("CS2_k0", lam=lam, a=1e-12)
    hp3 = catalog_point_kappa0("HHsub3_k0", lam=lam)
    assert math.hypot(pt0.mu - hp3.mu, pt0.ell - hp3.ell) < 1e-5


def test_kappa0_sweeps_have_no_cusp_or_supercritical():
    for lam in (-1.0, 0.8):
        evs = solve_bifurcations_numeric(lam, 0.0, n_grid=401)
        kinds = {e.kind for e in evs}
        assert BifurcationKind.CUSP not in kinds
        assert BifurcationKind.HOPF_SUPER not in kinds
        assert BifurcationKind.HOPF_DEGENERATE not in kinds
        assert all(e.family for e in evs)
        assert all(e.b is None for e in evs)


# ---------------------------------------------------------------------------
# instability intervals
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("mu,ell,lo,hi,klo,khi", [
    (0.0, -4.0, -2.0, 2.0, BifurcationKind.HOPF_SUB, BifurcationKind.HOPF_SUPER),
    (0.0, -0.25, -0.5, 0.5, BifurcationKind.HOPF_SUB, BifurcationKind.HOPF_SUB),
    (2.0, 2.0, -4.0, 0.0, BifurcationKind.HOPF_SUB, BifurcationKind.HOPF_SUPER),
    (0.25, 0.25, -math.sqrt(0.5) - 0.25, math.sqrt(0.5) - 0.25,
     BifurcationKind.HOPF_SUB, BifurcationKind.HOPF_SUB),
])
def test_instability_interval_closed_forms(mu, ell, lo, hi, klo, khi):
    iv = instability_interval(CasimirValues(mu, ell), kappa=1.0)
    assert iv.lam_lo == pytest.approx(lo, abs=1e-12)
    assert iv.lam_hi == pytest.approx(hi, abs=1e-12)
    assert iv.kind_lo is klo
    assert iv.kind_hi is khi


def test_instability_interval_matches_hopf_catalog():
    # interval endpoints are exactly where the Hopf families cross the strata
    iv = instability_interval(CasimirValues(0.0, -4.0))
    assert catalog_point("HHsup3", lam=iv.lam_hi).ell == pytest.approx(-4.0)
    assert catalog_point("HHsub3", lam=iv.lam_lo).ell == pytest.approx(-4.0)
    iv2 = instability_interval(CasimirValues(2.0, 2.0))
    assert catalog_point("HHsup1", lam=iv2.lam_hi).ell == pytest.approx(2.0)
    assert catalog_point("HHsub1", lam=iv2.lam_lo).ell == pytest.approx(2.0)


def test_instability_interval_smooth_tip_rejected():
    with pytest.raises(ValidationError):
        instability_interval(CasimirValues(0.5, 0.2))


def test_instability_interval_unstable_inside():
    # F''(r_min) < 0 strictly inside, > 0 outside
    cas = CasimirValues(0.0, -1.44)
    iv = instability_interval(cas)
    for lam, inside in ((0.0, True), (1.1, True), (-1.1, True),
                        (1.3, False), (-1.3, False)):
        h_c = 0.0
        q = f_quartic(h_c, ReducedParams(lam=lam, kappa=1.0), cas)
        assert (q.d2(0.0) < 0.0) == inside
        assert (iv.lam_lo < lam < iv.lam_hi) == inside
