"""Reduced one-degree-of-freedom dynamics.

The reduced Hamiltonian X + lam*R + (kappa/2) R^2 cuts the reduced phase
space along its level sets; tangencies are equilibria.  This module locates
all equilibria through the degree-five tangency polynomial, classifies
their stability, computes the minimal energy, integrates orbits of the
reduced flow, and evaluates the internal frequencies of the reconstructed
2-tori.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from .errors import (NumericalError, RootFindingError,
                     SingularityProximityError, UnsupportedRegimeError,
                     ValidationError)
from .model import CasimirValues, InvariantPoint, ModelParams, detuning_lambda
from .reduced_space import r_min, section_sq, section_sq_deriv, tip_class

# Roots of the tangency quintic closer than this (times scale) are merged.
ROOT_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class ReducedParams:
    """Reduced-space parameters: detuning lam and quartic coefficient kappa."""

    lam: float
    kappa: float

    def __post_init__(self):
        if not (math.isfinite(self.lam) and math.isfinite(self.kappa)):
            raise ValidationError("ReducedParams must be finite")

    @classmethod
    def from_model(cls, params: ModelParams, cas: CasimirValues) -> "ReducedParams":
        return cls(lam=detuning_lambda(params, cas), kappa=params.kappa)


class Stability(Enum):
    ELLIPTIC = "Elliptic"
    HYPERBOLIC = "Hyperbolic"
    DEGENERATE = "Degenerate"
    SINGULAR_TIP = "SingularTip"


@dataclass(frozen=True)
class Equilibrium:
    """A tangency point (R, X, 0) with its energy and stability tag.

    Regular equilibria lie in the Y = 0 plane; ``quintic_deriv`` is the
    derivative of the tangency polynomial there (positive for centres,
    negative for saddles).
    """

    R: float
    X: float
    h: float
    stability: Stability
    quintic_deriv: float

    @property
    def point(self) -> InvariantPoint:
        return InvariantPoint(R=self.R, X=self.X, Y=0.0)


def reduced_h(point: InvariantPoint, rp: ReducedParams) -> float:
    """Reduced Hamiltonian X + lam*R + (kappa/2) R^2."""
    return point.X + rp.lam * point.R + 0.5 * rp.kappa * point.R * point.R


def reduced_h_gradient(point: InvariantPoint, rp: ReducedParams) -> np.ndarray:
    return np.array([rp.lam + rp.kappa * point.R, 1.0, 0.0])


def vector_field(point: InvariantPoint, cas: CasimirValues, rp: ReducedParams) -> np.ndarray:
    """Reduced flow (dR, dX, dY) = grad(H) x grad(S) at a point.

    The sign is fixed so the bracket table is reproduced: with H = X the
    field gives dR/dt = 2Y.  Both the syzygy and the energy are conserved
    along the flow (the field is a cross product of their gradients).
    """
    r, x, y = point.R, point.X, point.Y
    gp = rp.lam + rp.kappa * r
    c = 3.0 * r * r - 2.0 * cas.ell * r - cas.mu * cas.mu
    return np.array([2.0 * y, -2.0 * gp * y, 2.0 * gp * x + c])


def tangency_quintic_coeffs(cas: CasimirValues, rp: ReducedParams) -> np.ndarray:
    """Descending coefficients of S(R) = 4(kR+lam)^2 (R-ell)(R^2-mu^2) - (3R^2-2*ell*R-mu^2)^2.

    Degree five for kappa != 0; degenerates gracefully to degree four at
    kappa = 0 (the returned array always has length 6, leading entries may
    be zero).
    """
    k, lam = rp.kappa, rp.lam
    mu2 = cas.mu * cas.mu
    lin = np.array([k, lam])                      # kR + lam
    cubic = np.array([1.0, -cas.ell, -mu2, mu2 * cas.ell])  # (R^2-mu^2)(R-ell)
    slope = np.array([3.0, -2.0 * cas.ell, -mu2])           # section derivative
    left = 4.0 * np.polymul(np.polymul(lin, lin), cubic)
    right = np.polymul(slope, slope)
    return np.polysub(left, right)


def _real_roots(coeffs: np.ndarray, imag_tol: float) -> np.ndarray:
    """Real roots of a polynomial given by descending coefficients."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if coeffs.size <= 1:
        return np.array([])
    try:
        roots = np.roots(coeffs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - exotic failure
        raise RootFindingError(f"companion-matrix eigenvalue solve failed: {exc}")
    scale = 1.0 + np.max(np.abs(roots)) if roots.size else 1.0
    real = roots[np.abs(roots.imag) <= imag_tol * scale].real
    return np.sort(real)


def _polish_root(coeffs: np.ndarray, x: float, steps: int = 3) -> float:
    dcoeffs = np.polyder(coeffs)
    for _ in range(steps):
        d = np.polyval(dcoeffs, x)
        if d == 0.0:
            break
        step = np.polyval(coeffs, x) / d
        if not math.isfinite(step):
            break
        x -= step
    return x


def equilibria(cas: CasimirValues, rp: ReducedParams,
               merge_tol: float = ROOT_MERGE_TOL) -> list[Equilibrium]:
    """All equilibria of the reduced flow for the given Casimir values.

    Finds the real roots of the tangency quintic on [r_min, inf), recovers
    the X-branch from the slope condition, classifies each root by the sign
    of the quintic derivative, and appends the singular tip where the
    reduced space has one.  Raises RootFindingError if the companion-matrix
    solve fails; an empty regular list is *not* an error.
    """
    coeffs = tangency_quintic_coeffs(cas, rp)
    rmin = r_min(cas)
    tip = tip_class(cas)
    scale = 1.0 + abs(rmin)

    roots = _real_roots(coeffs, imag_tol=1e-8)
    roots = np.array([_polish_root(coeffs, r) for r in roots])
    roots = roots[roots >= rmin - merge_tol * scale]
    roots.sort()

    # Merge near-coincident roots; delegate genuine multiple-root analysis
    # to the bifurcation module, which works with exact conditions.
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= merge_tol * scale:
            merged[-1] = 0.5 * (merged[-1] + r)
        else:
            merged.append(float(r))

    dcoeffs = np.polyder(coeffs)
    out: list[Equilibrium] = []
    # at singular tips the quintic has a multiple root exactly at r_min whose
    # companion-matrix images scatter by ~sqrt(eps); exclude a band around
    # the tip wide enough to swallow that noise
    tip_band = 1e-7 * scale
    for r in merged:
        if tip.is_singular and abs(r - rmin) <= tip_band:
            continue  # the tip root of the quintic is reported separately
        r = max(r, rmin)
        out.append(_regular_equilibrium(r, cas, rp, dcoeffs))

    if tip.is_singular:
        h_tip = rp.lam * rmin + 0.5 * rp.kappa * rmin * rmin
        out.append(Equilibrium(R=rmin, X=0.0, h=h_tip,
                               stability=Stability.SINGULAR_TIP,
                               quintic_deriv=float(np.polyval(dcoeffs, rmin))))
    out.sort(key=lambda e: e.R)
    return out


def _regular_equilibrium(r: float, cas: CasimirValues, rp: ReducedParams,
                         dcoeffs: np.ndarray) -> Equilibrium:
    sq = max(section_sq(r, cas), 0.0)
    x_abs = math.sqrt(sq)
    slope = -(rp.lam + rp.kappa * r)
    c = section_sq_deriv(r, cas)
    # Pick the branch of X = +-sqrt(section) whose slope matches the level
    # set; the mismatch is linear in X so ties (X ~ 0) resolve cleanly.
    mis_plus = abs(c - 2.0 * x_abs * slope)
    mis_minus = abs(c + 2.0 * x_abs * slope)
    x = x_abs if mis_plus <= mis_minus else -x_abs
    h = x + rp.lam * r + 0.5 * rp.kappa * r * r
    sp = float(np.polyval(dcoeffs, r))
    deriv_scale = 1.0 + abs(np.polyval(np.polyder(dcoeffs), r)) * (1.0 + abs(r))
    if abs(sp) <= 1e-9 * deriv_scale:
        stab = Stability.DEGENERATE
    elif sp > 0.0:
        stab = Stability.ELLIPTIC
    else:
        stab = Stability.HYPERBOLIC
    return Equilibrium(R=r, X=x, h=h, stability=stab, quintic_deriv=sp)


def h_min(cas: CasimirValues, rp: ReducedParams) -> float:
    """Minimum of the reduced Hamiltonian on the reduced space (kappa > 0).

    For kappa > 0 the energy grows like R^2 on the unbounded surface, so
    the global minimum is attained at a tangency or at the singular tip,
    all of which appear in the equilibrium list.
    """
    if rp.kappa <= 0.0:
        raise UnsupportedRegimeError(
            f"h_min requires kappa > 0 (got kappa={rp.kappa}); "
            "for kappa <= 0 the reduced energy has no minimum in general")
    eqs = equilibria(cas, rp)
    if not eqs:
        raise NumericalError("no equilibria found; cannot evaluate h_min")
    return min(e.h for e in eqs)


@dataclass(frozen=True)
class Trajectory:
    """Output of integrate_orbit: samples plus conservation diagnostics."""

    t: np.ndarray
    points: np.ndarray           # shape (n, 3), columns (R, X, Y)
    s_drift: float               # max |syzygy residual - initial| along the run
    h_drift: float               # max |H - initial| along the run
    period: float | None = None


def integrate_orbit(start: InvariantPoint, cas: CasimirValues, rp: ReducedParams,
                    t_end: float, tol: float = 1e-10, detect_period: bool = False,
                    n_samples: int = 400) -> Trajectory:
    """Integrate the reduced flow with an adaptive high-order Runge-Kutta pair.

    The syzygy and energy invariants are monitored, never projected, so
    their drift is an honest integrator diagnostic.  With
    ``detect_period=True`` the first return to the start point (full
    (R, X, Y) match on a transversal section, not an R-return) is reported.
    """
    res0 = _syzygy_value(start, cas)
    scale = max(1.0, abs(start.R), abs(start.X), abs(start.Y))
    if abs(res0) > 1e-8 * max(1.0, start.R ** 3):
        raise ValidationError(
            f"start point is off the reduced surface (residual {res0:.3e})")

    mu2 = cas.mu * cas.mu
    ell = cas.ell
    lam, kap = rp.lam, rp.kappa

    def rhs(t, y):
        r, x, yy = y
        gp = lam + kap * r
        c = 3.0 * r * r - 2.0 * ell * r - mu2
        return (2.0 * yy, -2.0 * gp * yy, 2.0 * gp * x + c)

    y0 = np.array([start.R, start.X, start.Y])
    f0 = np.asarray(rhs(0.0, y0))
    h0 = reduced_h(start, rp)

    events = None
    stationary = bool(np.linalg.norm(f0) <= 1e-12 * scale)
    if detect_period and not stationary:
        def section(t, y):
            return float(np.dot(np.asarray(y) - y0, f0))

        section.terminal = False
        section.direction = 1.0
        events = [section]

    # the drift contract is ~10 tol over the whole run, so the per-step
    # solver tolerance must sit well below the requested one
    rtol_eff = max(1e-4 * tol, 2.3e-14)
    sol = solve_ivp(rhs, (0.0, t_end), y0, method="DOP853", rtol=rtol_eff,
                    atol=rtol_eff * scale, dense_output=detect_period,
                    t_eval=np.linspace(0.0, t_end, n_samples), events=events)
    if not sol.success:
        last = sol.y[:, -1] if sol.y.size else y0
        rmin = r_min(cas)
        tip_dist = float(np.linalg.norm(last - np.array([rmin, 0.0, 0.0])))
        if tip_dist < 0.05 * scale:
            raise SingularityProximityError(
                f"step size collapsed near the singular tip (distance {tip_dist:.3e})")
        raise NumericalError(f"integration failed: {sol.message}")

    pts = sol.y.T
    res = np.array([
        x * x + yy * yy - (r * r - mu2) * (r - ell) for r, x, yy in pts])
    hs = pts[:, 1] + lam * pts[:, 0] + 0.5 * kap * pts[:, 0] ** 2
    s_drift = float(np.max(np.abs(res - res0))) if len(res) else 0.0
    h_drift = float(np.max(np.abs(hs - h0))) if len(hs) else 0.0

    period = None
    if detect_period and not stationary:
        poincare_tol = max(1e-8, 100.0 * tol) * scale
        for te in sol.t_events[0]:
            if te <= 1e3 * tol:
                continue
            if np.linalg.norm(sol.sol(te) - y0) <= poincare_tol:
                period = float(te)
                break
    if detect_period and stationary:
        period = None

    return Trajectory(t=sol.t, points=pts, s_drift=s_drift, h_drift=h_drift,
                      period=period)


def _syzygy_value(point: InvariantPoint, cas: CasimirValues) -> float:
    return (point.X ** 2 + point.Y ** 2
            - (point.R ** 2 - cas.mu ** 2) * (point.R - cas.ell))


def internal_frequencies(R: float, cas: CasimirValues, mp: ModelParams) -> tuple[float, float]:
    """Internal frequencies (dH/dN, dH/dJ) of the 2-torus over a regular equilibrium.

    Evaluated from the full normal form with the second Casimir replaced by
    2J - N; the ratio decides periodicity of the reconstructed trajectories.
    """
    dn = (mp.beta - mp.alpha
          + (mp.gamma1 - mp.gamma2) * cas.mu
          + (mp.gamma2 - mp.gamma3) * cas.ell
          + (mp.lambda1 - mp.lambda2) * R)
    dj = 2.0 * (mp.alpha + mp.gamma2 * cas.mu + mp.gamma3 * cas.ell + mp.lambda2 * R)
    return dn, dj
