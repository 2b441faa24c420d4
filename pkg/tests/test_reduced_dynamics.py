"""Reduced dynamics: equilibria against a scan oracle, stability counts,
minimal energy, orbit integration, internal frequencies."""

import math

import numpy as np
import pytest

from res112 import (CasimirValues, InvariantPoint, ModelParams, ReducedParams,
                    Stability, UnsupportedRegimeError, equilibria, h_min,
                    integrate_orbit, internal_frequencies, reduced_h,
                    r_min, vector_field)
from res112.bifurcations import f_quartic

RNG = np.random.default_rng(1618033)


def quintic_direct(R, cas, rp):
    """The tangency polynomial evaluated from its defining expression."""
    s = (rp.kappa * R + rp.lam) ** 2
    cubic = (R * R - cas.mu ** 2) * (R - cas.ell)
    slope = 3.0 * R * R - 2.0 * cas.ell * R - cas.mu ** 2
    return 4.0 * s * cubic - slope * slope


def oracle_roots(cas, rp, r_hi=None, n=20_000):
    """Independent root scan: dense sign changes plus bisection refinement."""
    lo = r_min(cas)
    if r_hi is None:
        r_hi = lo + 10.0 + 10.0 * (abs(rp.lam) + abs(cas.mu) + abs(cas.ell))
    grid = np.linspace(lo, r_hi, n)
    vals = quintic_direct(grid, cas, rp)
    roots = []
    for i in range(n - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(grid[i])
        elif a * b < 0.0:
            x0, x1 = grid[i], grid[i + 1]
            for _ in range(80):
                mid = 0.5 * (x0 + x1)
                if quintic_direct(np.array(mid), cas, rp) * quintic_direct(
                        np.array(x0), cas, rp) <= 0.0:
                    x1 = mid
                else:
                    x0 = mid
            roots.append(0.5 * (x0 + x1))
    return np.array(roots)


def test_equilibria_match_scan_oracle():
    for _ in range(60):
        cas = CasimirValues(float(RNG.normal(0, 1.2)), float(RNG.normal(0, 1.2)))
        rp = ReducedParams(lam=float(RNG.normal(0, 0.8)), kappa=1.0)
        expected = oracle_roots(cas, rp)
        got = np.array(sorted(e.R for e in equilibria(cas, rp)
                              if e.stability is not Stability.SINGULAR_TIP))
        # drop oracle roots that coincide with the tip of a singular space
        assert len(got) == len(expected), (cas, rp)
        if len(got):
            assert np.max(np.abs(got - expected)) < 1e-6


def test_equilibria_count_and_alternation():
    bad = 0
    for _ in range(2000):
        cas = CasimirValues(float(RNG.normal(0, 1.5)), float(RNG.normal(0, 1.5)))
        rp = ReducedParams(lam=float(RNG.normal(0, 1.0)), kappa=1.0)
        regs = [e for e in equilibria(cas, rp)
                if e.stability is not Stability.SINGULAR_TIP]
        rs = sorted(e.R for e in regs)
        if any(b - a < 1e-6 for a, b in zip(rs, rs[1:])):
            continue
        ne = sum(1 for e in regs if e.stability is Stability.ELLIPTIC)
        nh = sum(1 for e in regs if e.stability is Stability.HYPERBOLIC)
        if len(regs) not in (1, 3) or ne != nh + 1:
            bad += 1
    assert bad == 0


def test_largest_root_is_elliptic():
    for _ in range(500):
        cas = CasimirValues(float(RNG.normal(0, 1.5)), float(RNG.normal(0, 1.5)))
        rp = ReducedParams(lam=float(RNG.normal(0, 1.0)), kappa=1.0)
        regs = [e for e in equilibria(cas, rp)
                if e.stability is not Stability.SINGULAR_TIP]
        top = max(regs, key=lambda e: e.R)
        assert top.stability in (Stability.ELLIPTIC, Stability.DEGENERATE)


def test_equilibrium_points_satisfy_tangency():
    # X at each regular equilibrium lies on the surface and matches the
    # level-set slope there
    for _ in range(300):
        cas = CasimirValues(float(RNG.normal(0, 1.2)), float(RNG.normal(0, 1.2)))
        rp = ReducedParams(lam=float(RNG.normal(0, 0.8)), kappa=1.0)
        for e in equilibria(cas, rp):
            if e.stability is Stability.SINGULAR_TIP:
                continue
            res = e.X ** 2 - (e.R ** 2 - cas.mu ** 2) * (e.R - cas.ell)
            assert abs(res) <= 1e-7 * max(1.0, e.R ** 3)
            slope_lhs = 3 * e.R ** 2 - 2 * cas.ell * e.R - cas.mu ** 2
            slope_rhs = 2.0 * e.X * (-(rp.lam + rp.kappa * e.R))
            assert abs(slope_lhs - slope_rhs) <= 1e-6 * max(1.0, abs(slope_lhs))
            assert e.h == pytest.approx(reduced_h(e.point, rp), abs=1e-12)
            assert e.point.Y == 0.0


def test_vector_field_bracket_convention():
    # with H = X the radial rate is twice the height Y
    pt = InvariantPoint(1.2, 0.4, 0.7)
    f = vector_field(pt, CasimirValues(0.3, -0.2), ReducedParams(lam=0.0, kappa=0.0))
    assert f[0] == pytest.approx(2.0 * pt.Y)


def test_vector_field_is_tangent():
    for _ in range(300):
        pt = InvariantPoint(float(RNG.uniform(0, 3)), float(RNG.normal(0, 2)),
                            float(RNG.normal(0, 2)))
        cas = CasimirValues(float(RNG.normal(0, 1.5)), float(RNG.normal(0, 1.5)))
        rp = ReducedParams(lam=float(RNG.normal(0, 1.0)), kappa=1.0)
        f = vector_field(pt, cas, rp)
        gs = np.array([-(3 * pt.R ** 2 - 2 * cas.ell * pt.R - cas.mu ** 2),
                       2 * pt.X, 2 * pt.Y])
        gh = np.array([rp.lam + rp.kappa * pt.R, 1.0, 0.0])
        scale = 1.0 + float(np.max(np.abs(f)))
        assert abs(np.dot(f, gs)) <= 1e-12 * scale * (1 + np.linalg.norm(gs))
        assert abs(np.dot(f, gh)) <= 1e-12 * scale * (1 + np.linalg.norm(gh))


def test_vector_field_vanishes_at_equilibria():
    cas = CasimirValues(0.4, -0.3)
    rp = ReducedParams(lam=0.7, kappa=1.0)
    for e in equilibria(cas, rp):
        if e.stability is Stability.SINGULAR_TIP:
            continue
        f = vector_field(e.point, cas, rp)
        assert np.max(np.abs(f)) <= 1e-6


def _orbit_start(cas, rp, h):
    q = f_quartic(h, rp, cas)
    roots = np.sort(q.roots().real[np.abs(q.roots().imag) < 1e-9])
    roots = roots[roots >= r_min(cas) - 1e-12]
    mid = 0.5 * (roots[0] + roots[1])
    x = h - rp.lam * mid - 0.5 * rp.kappa * mid * mid
    y = math.sqrt(max(-float(q.value(mid)), 0.0))
    return InvariantPoint(R=float(mid), X=float(x), Y=y)


def test_integrate_orbit_conserves_and_finds_period():
    cas = CasimirValues(0.0, 0.0)
    rp = ReducedParams(lam=-1.0, kappa=1.0)
    start = _orbit_start(cas, rp, h=0.5)
    traj = integrate_orbit(start, cas, rp, t_end=100.0, tol=1e-10,
                           detect_period=True)
    assert traj.s_drift <= 1e-9
    assert traj.h_drift <= 1e-9
    assert traj.period is not None and traj.period > 0
    # the detected period is a genuine full return, not an R-return alias:
    # integrating for exactly one period lands back at the start
    traj2 = integrate_orbit(start, cas, rp, t_end=traj.period, tol=1e-11,
                            n_samples=3)
    assert np.linalg.norm(traj2.points[-1] - start.as_array()) <= 1e-6


def test_integrate_orbit_stationary_at_equilibrium():
    cas = CasimirValues(0.4, -0.3)
    rp = ReducedParams(lam=0.7, kappa=1.0)
    eq = [e for e in equilibria(cas, rp) if e.stability is Stability.ELLIPTIC][0]
    traj = integrate_orbit(eq.point, cas, rp, t_end=10.0, tol=1e-10)
    assert np.max(np.abs(traj.points - eq.point.as_array())) <= 1e-6


def test_integrate_orbit_rejects_off_surface_start():
    from res112 import ValidationError
    with pytest.raises(ValidationError):
        integrate_orbit(InvariantPoint(1.0, 5.0, 5.0), CasimirValues(0, 0),
                        ReducedParams(lam=0.0, kappa=1.0), t_end=1.0)


def test_h_min_examples_and_oracle():
    # tip attains the minimum at the resonant values
    assert h_min(CasimirValues(0, 0), ReducedParams(lam=1.0, kappa=1.0)) == \
        pytest.approx(0.0, abs=1e-12)

    def h_min_oracle(cas, rp, h_lo=-50.0, h_hi=50.0):
        # bisection on "the fiber is nonempty": min F < 0 on a dense grid
        lo = r_min(cas)
        grid = np.linspace(lo, lo + 30.0, 30_000)
        sec = (grid ** 2 - cas.mu ** 2) * (grid - cas.ell)

        def nonempty(h):
            x1 = h - rp.lam * grid - 0.5 * rp.kappa * grid ** 2
            return bool(np.any(x1 * x1 - sec < 0.0))

        for _ in range(60):
            mid = 0.5 * (h_lo + h_hi)
            if nonempty(mid):
                h_hi = mid
            else:
                h_lo = mid
        return 0.5 * (h_lo + h_hi)

    for (mu, ell, lam) in [(3.0, 0.0, 0.0), (0.3, 0.4, 0.0), (0.0, -1.0, -1.0),
                           (1.0, 1.0, 0.3), (0.2, -0.7, 0.52)]:
        cas = CasimirValues(mu, ell)
        rp = ReducedParams(lam=lam, kappa=1.0)
        assert h_min(cas, rp) == pytest.approx(h_min_oracle(cas, rp), abs=1e-5)


def test_h_min_requires_positive_kappa():
    with pytest.raises(UnsupportedRegimeError):
        h_min(CasimirValues(0, 0), ReducedParams(lam=0.0, kappa=0.0))
    with pytest.raises(UnsupportedRegimeError):
        h_min(CasimirValues(0, 0), ReducedParams(lam=0.0, kappa=-1.0))


def test_h_min_continuity_along_line():
    rp = ReducedParams(lam=0.3, kappa=1.0)
    ells = np.linspace(-2.0, 2.0, 81)
    vals = [h_min(CasimirValues(0.4, float(e)), rp) for e in ells]
    jumps = np.abs(np.diff(vals))
    assert np.max(jumps) < 0.2  # grid modulus: no discontinuities


def test_h_min_never_exceeds_tip_energy():
    for _ in range(300):
        cas = CasimirValues(float(RNG.normal(0, 1.5)), float(RNG.normal(0, 1.5)))
        rp = ReducedParams(lam=float(RNG.normal(0, 1.0)), kappa=1.0)
        tip_h = rp.lam * r_min(cas) + 0.5 * rp.kappa * r_min(cas) ** 2
        assert h_min(cas, rp) <= tip_h + 1e-10


def test_internal_frequencies_closed_form_and_fd():
    mp = ModelParams(alpha=1.0)
    assert internal_frequencies(0.7, CasimirValues(0.2, 0.4), mp) == (-1.0, 2.0)
    mp2 = ModelParams(alpha=0.8, beta=0.8)
    dn, _ = internal_frequencies(0.5, CasimirValues(0.0, 0.0), mp2)
    assert dn == 0.0  # beta = alpha cancels

    # finite differences of the full normal form in (N, J) at fixed point
    def h_full(n, j, R, X, mp):
        l = 2.0 * j - n
        return (mp.alpha * l + mp.beta * n + mp.delta * R + X
                + 0.5 * mp.kappa * R * R + (mp.lambda1 * n + mp.lambda2 * l) * R
                + 0.5 * mp.gamma1 * n * n + mp.gamma2 * n * l
                + 0.5 * mp.gamma3 * l * l)

    for _ in range(50):
        mp = ModelParams(*(float(v) for v in RNG.normal(0, 1.0, 9)))
        n0, j0, R0 = (float(v) for v in RNG.normal(0, 1.0, 3))
        cas = CasimirValues(n0, 2.0 * j0 - n0)
        dn, dj = internal_frequencies(R0, cas, mp)
        eps = 1e-6
        fd_n = (h_full(n0 + eps, j0, R0, 0.0, mp)
                - h_full(n0 - eps, j0, R0, 0.0, mp)) / (2 * eps)
        fd_j = (h_full(n0, j0 + eps, R0, 0.0, mp)
                - h_full(n0, j0 - eps, R0, 0.0, mp)) / (2 * eps)
        assert dn == pytest.approx(fd_n, abs=1e-8)
        assert dj == pytest.approx(fd_j, abs=1e-8)
