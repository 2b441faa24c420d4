"""Bifurcation detection, closed-form catalogs, and the numeric oracle.

Everything here revolves around the quartic

    F(R) = (h - lam*R - (kappa/2) R^2)^2 - (R^2 - mu^2)(R - ell)

whose multiple roots on [r_min, inf) enumerate the bifurcations of the
reduced system: triple roots away from the tip are centre-saddle events,
triple roots at the tip are Hamiltonian Hopf events (the sign of F''' at
the root separating super- from subcritical), and quadruple roots are cusp
or degenerate-Hopf events.

Two independent routes to the same set are maintained on purpose: the
closed-form catalog (families CS1..CS4, Cusp1..3, HHsub/HHsup/HHdeg 1..3
for kappa=1, their kappa=0 counterparts, and the general-kappa formulas
behind them) and a numeric solver that eliminates (b, ell, h) from the
coefficient-matching system of F = (kappa^2/4)(R-a)^3 (R-b) and chases the
real roots of the remaining quartic in mu.  The test suite diffs the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import (AmbiguousClassificationError, RootFindingError,
                     UnsupportedRegimeError, ValidationError)
from .model import CasimirValues
from .reduced_dynamics import ReducedParams
from .reduced_space import r_min, tip_class

# Tolerances, pinned once.  Residuals of F and its derivatives are judged
# against RESIDUAL_TOL * residual_scale (F grows quartically, hence the
# scale); |a - r_min| against TIP_TOL; family matching of numeric events
# against MATCH_RADIUS in the (mu, ell)-plane.
RESIDUAL_TOL = 1e-9
TIP_TOL = 1e-10
MATCH_RADIUS = 1e-4
_F3_REL_TOL = 1e-8

CATALOG_FAMILIES = ("CS1", "CS2", "CS3", "CS4",
                    "Cusp1", "Cusp2", "Cusp3",
                    "HHsub1", "HHsub2", "HHsub3",
                    "HHsup1", "HHsup2", "HHsup3",
                    "HHdeg1", "HHdeg2", "HHdeg3")

KAPPA0_FAMILIES = ("CS1_k0", "CS2_k0", "CS3_k0",
                   "HHsub1_k0", "HHsub2_k0", "HHsub3_k0")


class BifurcationKind(Enum):
    CENTRE_SADDLE = "CentreSaddle"
    CUSP = "Cusp"
    HOPF_SUB = "HopfSub"
    HOPF_SUPER = "HopfSuper"
    HOPF_DEGENERATE = "HopfDegenerate"


_FAMILY_KIND = {
    "CS": BifurcationKind.CENTRE_SADDLE,
    "Cusp": BifurcationKind.CUSP,
    "HHsub": BifurcationKind.HOPF_SUB,
    "HHsup": BifurcationKind.HOPF_SUPER,
    "HHdeg": BifurcationKind.HOPF_DEGENERATE,
}


def family_kind(family: str) -> BifurcationKind:
    for prefix, kind in _FAMILY_KIND.items():
        if family.startswith(prefix):
            return kind
    raise ValidationError(f"unknown family {family!r}")


@dataclass(frozen=True)
class Quartic:
    """F(R) with coefficients stored ascending; c4 = kappa^2/4 exactly."""

    coeffs: tuple  # (c0, c1, c2, c3, c4)
    kappa: float

    def value(self, R):
        return np.polynomial.polynomial.polyval(R, self.coeffs)

    def d1(self, R):
        c = np.polynomial.polynomial.polyder(self.coeffs)
        return np.polynomial.polynomial.polyval(R, c)

    def d2(self, R):
        c = np.polynomial.polynomial.polyder(self.coeffs, 2)
        return np.polynomial.polynomial.polyval(R, c)

    def d3(self, R):
        c = np.polynomial.polynomial.polyder(self.coeffs, 3)
        return np.polynomial.polynomial.polyval(R, c)

    @property
    def d4(self) -> float:
        """Fourth derivative, identically 6 kappa^2."""
        return 6.0 * self.kappa * self.kappa

    def roots(self) -> np.ndarray:
        desc = np.trim_zeros(np.asarray(self.coeffs[::-1], dtype=float), "f")
        if desc.size <= 1:
            return np.array([])
        return np.roots(desc)


def f_quartic(h: float, rp: ReducedParams, cas: CasimirValues) -> Quartic:
    """Exact coefficient expansion of F(R) for the given energy and parameters."""
    lam, k = rp.lam, rp.kappa
    mu2 = cas.mu * cas.mu
    c4 = 0.25 * k * k
    c3 = k * lam - 1.0
    c2 = lam * lam - k * h + cas.ell
    c1 = mu2 - 2.0 * h * lam
    c0 = h * h - mu2 * cas.ell
    return Quartic(coeffs=(c0, c1, c2, c3, c4), kappa=k)


def residual_scale(a: float, h: float, cas: CasimirValues, kappa: float) -> float:
    """Scale for judging |F|, |F'|, |F''| residuals at a putative root a."""
    return max(1.0, kappa * kappa * a ** 4, h * h,
               abs(cas.mu * cas.mu * cas.ell))


@dataclass(frozen=True)
class BifurcationEvent:
    """A detected multiple root of F with its classification.

    ``a`` is the multiple root, ``b`` the remaining simple root (None for
    kappa = 0 where F is cubic); ``family`` is the nearest catalog stratum
    or None when unmatched.
    """

    kind: BifurcationKind
    a: float
    b: float | None
    h: float
    lam: float
    mu: float
    ell: float
    kappa: float
    family: str | None = None


def classify_multiple_root(a: float, q: Quartic, cas: CasimirValues,
                           residual_tol: float = RESIDUAL_TOL,
                           tip_tol: float = TIP_TOL) -> BifurcationKind:
    """Classify a verified triple root of F per the tangency-order rules.

    A root at the tip is a Hamiltonian Hopf event, supercritical for
    F'''(a) > 0 and subcritical for F'''(a) < 0; away from the tip it is a
    centre-saddle event, turning into a cusp when F'''(a) = 0; a vanishing
    F''' at the tip is the degenerate Hopf case.  Raises
    AmbiguousClassificationError when both |F'''(a)| and |a - r_min| sit in
    the gray band around their thresholds, and ValidationError when the
    root residuals are too large to trust.
    """
    h = _h_of_quartic(q, cas)
    scale = residual_scale(a, h, cas, q.kappa)
    res = (abs(q.value(a)), abs(q.d1(a)), abs(q.d2(a)))
    if max(res) > residual_tol * scale:
        raise ValidationError(
            f"not a multiple root: residuals {res} exceed {residual_tol:.1e}*{scale:.3e}")

    rmin = r_min(cas)
    f3 = q.d3(a)
    f3_scale = 6.0 * max(1.0, q.kappa * q.kappa) * (1.0 + abs(a))
    tol_f3 = _F3_REL_TOL * f3_scale
    tol_a = tip_tol * (1.0 + abs(rmin))

    at_tip = abs(a - rmin) <= tol_a
    f3_zero = abs(f3) <= tol_f3
    gray_a = tol_a < abs(a - rmin) <= 10.0 * tol_a
    gray_f3 = tol_f3 < abs(f3) <= 10.0 * tol_f3
    if (gray_a and (f3_zero or gray_f3)) or (gray_f3 and at_tip):
        raise AmbiguousClassificationError(
            "classification sits between discrete outcomes",
            diagnostics={"a": a, "r_min": rmin, "f3": f3,
                         "tol_a": tol_a, "tol_f3": tol_f3})

    if f3_zero:
        return (BifurcationKind.HOPF_DEGENERATE if at_tip
                else BifurcationKind.CUSP)
    if at_tip:
        return (BifurcationKind.HOPF_SUPER if f3 > 0.0
                else BifurcationKind.HOPF_SUB)
    return BifurcationKind.CENTRE_SADDLE


def _h_of_quartic(q: Quartic, cas: CasimirValues) -> float:
    # c0 = h^2 - mu^2 ell; only |h| matters for the residual scale.
    h2 = q.coeffs[0] + cas.mu * cas.mu * cas.ell
    return math.sqrt(abs(h2))


# ---------------------------------------------------------------------------
# Closed-form parametrisations (general kappa > 0 unless stated otherwise)
# ---------------------------------------------------------------------------

def _b_of_a(a: float, lam: float, kappa: float) -> float:
    return 4.0 / kappa ** 2 - 3.0 * a - 4.0 * lam / kappa


def _discriminant_core(a: float, lam: float, kappa: float) -> float:
    """(kappa*a + lam)^2 - 2a; the branch radicand of the mu^2 roots."""
    return (kappa * a + lam) ** 2 - 2.0 * a


def _mu2_branches(a: float, lam: float, kappa: float) -> tuple[float, float]:
    """Closed-form roots (mu_minus^2, mu_plus^2) of the eliminated quartic.

    Requires lam not in {0, 1/(2 kappa)}; tiny negative radicands from
    roundoff at range endpoints are clipped to zero.
    """
    d = _discriminant_core(a, lam, kappa)
    if d < 0.0:
        if d < -1e-12 * (1.0 + a * a):
            raise ValidationError(f"branch radicand negative at a={a}: {d}")
        d = 0.0
    k, L = kappa, lam
    core = (2.0 * k ** 3 * a ** 3 * L - 2.0 * k ** 2 * a ** 3
            + 6.0 * k ** 2 * a ** 2 * L ** 2 - 6.0 * k * a ** 2 * L
            + 3.0 * a ** 2 + 6.0 * k * a * L ** 3 - 6.0 * a * L ** 2
            + 2.0 * L ** 4)
    den = 2.0 * k * L - 1.0
    rad = 2.0 * abs(L) * d ** 1.5
    return (core - rad) / den, (core + rad) / den


def _ell_from_mu2(a: float, mu2: float, lam: float, kappa: float) -> float:
    k, L = kappa, lam
    return (-2.0 * k ** 3 * a ** 3 - 6.0 * k ** 2 * a ** 2 * L
            + 3.0 * k * a ** 2 - 6.0 * k * a * L ** 2 + 6.0 * a * L
            - 2.0 * L ** 3 + k * mu2) / (2.0 * L)


def _h_from_mu2(a: float, mu2: float, lam: float, kappa: float) -> float:
    return (mu2 + 3.0 * a ** 2 - 2.0 * kappa ** 2 * a ** 3
            - 3.0 * kappa * a ** 2 * lam) / (2.0 * lam)


def a_sub_boundary(lam: float, kappa: float) -> float:
    """a-value where the mu-branches meet the subcritical Hopf curve."""
    return (1.0 - kappa * lam - math.sqrt(1.0 - 2.0 * kappa * lam)) / kappa ** 2


def a_sup_boundary(lam: float, kappa: float) -> float:
    """a-value of the supercritical Hopf curve."""
    return (1.0 - kappa * lam + math.sqrt(1.0 - 2.0 * kappa * lam)) / kappa ** 2


def a_quadruple(lam: float, kappa: float) -> float:
    """The unique a with b = a: quadruple roots live at a = 1/kappa^2 - lam/kappa."""
    return 1.0 / kappa ** 2 - lam / kappa


def g_cubic_coeffs(lam: float, kappa: float) -> np.ndarray:
    """Descending coefficients of the range cubic g(a)."""
    k, L = kappa, lam
    return np.array([
        4.0 * k ** 4,
        12.0 * k ** 3 * L - 12.0 * k ** 2,
        12.0 * k ** 2 * L ** 2 - 18.0 * k * L + 9.0,
        4.0 * k * L ** 3 - 4.0 * L ** 2,
    ])


def a0_root(lam: float, kappa: float = 1.0) -> float:
    """Unique non-negative root of the range cubic g(a).

    Defined for kappa > 0 and lam < 1/kappa with lam != 0 (then
    g(0) = 4 kappa^2 lam^2 (kappa lam - 1) < 0 and the positive root is
    unique); for lam >= 1/kappa the cubic is positive on a > 0 and there is
    nothing to find.
    """
    if kappa <= 0.0:
        raise UnsupportedRegimeError("a0_root requires kappa > 0")
    if lam == 0.0:
        raise ValidationError("a0_root is not defined at lam = 0")
    if kappa * lam >= 1.0:
        raise ValidationError(
            "no positive root: g(a) > 0 for all a > 0 when lam >= 1/kappa")
    coeffs = g_cubic_coeffs(lam, kappa)
    roots = np.roots(coeffs)
    real = roots[np.abs(roots.imag) <= 1e-9 * (1.0 + np.abs(roots))].real
    pos = np.sort(real[real > 0.0])
    if pos.size == 0:
        raise RootFindingError(f"g(a) has no positive root at lam={lam}")
    a0 = float(pos[0])
    # one Newton polish
    d = np.polyval(np.polyder(coeffs), a0)
    if d != 0.0:
        a0 -= np.polyval(coeffs, a0) / d
    gscale = max(1.0, float(np.max(np.abs(coeffs))) * max(1.0, a0) ** 3)
    if abs(np.polyval(coeffs, a0)) > 1e-10 * gscale:
        raise RootFindingError(f"a0 polish failed at lam={lam}")
    return a0


@dataclass(frozen=True)
class CatalogPoint:
    """A closed-form bifurcation point: parameters plus root data."""

    family: str
    kind: BifurcationKind
    lam: float
    mu: float
    ell: float
    a: float
    b: float | None
    h: float
    kappa: float
    boundary: bool = False  # lam = 1/(2 kappa) points of CS1/CS2, kept by continuity

    def as_event(self) -> BifurcationEvent:
        return BifurcationEvent(kind=self.kind, a=self.a, b=self.b, h=self.h,
                                lam=self.lam, mu=self.mu, ell=self.ell,
                                kappa=self.kappa, family=self.family)


def _hopf_point(family, lam, mu, ell, kappa, kind) -> CatalogPoint:
    a = max(abs(mu), ell)  # Hopf roots sit at the tip
    h = lam * a + 0.5 * kappa * a * a
    return CatalogPoint(family=family, kind=kind, lam=lam, mu=mu, ell=ell,
                        a=a, b=_b_of_a(a, lam, kappa), h=h, kappa=kappa)


def catalog_point(family: str, *, lam: float | None = None, a: float | None = None,
                  mu: float | None = None, sign: int = 1,
                  kappa: float = 1.0) -> CatalogPoint:
    """Closed-form catalog point of the kappa != 0 bifurcation set.

    Centre-saddle families take (lam, a) with the a-range of the catalog
    enforced; CS3/CS4 additionally take ``sign`` selecting the mu-branch.
    Cusp1/2 and the Hopf families take lam alone; Cusp3 takes mu; the three
    degenerate points take no parameter.  lam = 0 and lam = 1/(2 kappa) are
    handled by dedicated special-case formulas.
    """
    if kappa <= 0.0:
        raise UnsupportedRegimeError(
            "catalog_point covers kappa > 0; use kappa_scaling for kappa < 0 "
            "and catalog_point_kappa0 for kappa = 0")
    if family not in CATALOG_FAMILIES:
        raise ValidationError(f"unknown family {family!r}")
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    k = kappa

    if family.startswith("HHdeg"):
        if family == "HHdeg1":
            lam, mu, ell = 0.5 / k, 0.5 / k ** 2, 0.5 / k ** 2
        elif family == "HHdeg2":
            lam, mu, ell = 0.5 / k, -0.5 / k ** 2, 0.5 / k ** 2
        else:
            lam, mu, ell = 1.0 / k, 0.0, -1.0 / k ** 2
        a = a_quadruple(lam, k)
        h = lam * max(abs(mu), ell) + 0.5 * k * max(abs(mu), ell) ** 2
        return CatalogPoint(family=family, kind=BifurcationKind.HOPF_DEGENERATE,
                            lam=lam, mu=mu, ell=ell, a=a, b=a, h=h, kappa=k)

    if lam is None and family != "Cusp3":
        raise ValidationError(f"family {family} needs lam")

    if family in ("HHsub1", "HHsub2"):
        if not lam < 0.5 / k:
            raise ValidationError(f"{family} needs lam < 1/(2 kappa)")
        m = a_sub_boundary(lam, k)
        return _hopf_point(family, lam, m if family == "HHsub1" else -m, m, k,
                           BifurcationKind.HOPF_SUB)
    if family in ("HHsup1", "HHsup2"):
        if not lam < 0.5 / k:
            raise ValidationError(f"{family} needs lam < 1/(2 kappa)")
        m = a_sup_boundary(lam, k)
        return _hopf_point(family, lam, m if family == "HHsup1" else -m, m, k,
                           BifurcationKind.HOPF_SUPER)
    if family == "HHsub3":
        if not lam < 1.0 / k:
            raise ValidationError("HHsub3 needs lam < 1/kappa")
        return _hopf_point(family, lam, 0.0, -lam * lam, k, BifurcationKind.HOPF_SUB)
    if family == "HHsup3":
        if not lam > 1.0 / k:
            raise ValidationError("HHsup3 needs lam > 1/kappa")
        return _hopf_point(family, lam, 0.0, -lam * lam, k, BifurcationKind.HOPF_SUPER)

    if family in ("Cusp1", "Cusp2"):
        if not 0.5 / k < lam < 1.0 / k:
            raise ValidationError(f"{family} needs 1/(2 kappa) < lam < 1/kappa")
        root = math.sqrt(2.0 * k * lam - 1.0)
        mu_c = (k * lam - root) / k ** 2
        ell_c = (1.0 - k * lam - root) / k ** 2
        a = a_quadruple(lam, k)
        mu_val = -mu_c if family == "Cusp1" else mu_c
        h = _h_from_mu2(a, mu_c * mu_c, lam, k)
        return CatalogPoint(family=family, kind=BifurcationKind.CUSP, lam=lam,
                            mu=mu_val, ell=ell_c, a=a, b=a, h=h, kappa=k)

    if family == "Cusp3":
        if mu is None:
            raise ValidationError("Cusp3 is parametrised by mu")
        if not abs(mu) < 0.5 / k ** 2:
            raise ValidationError("Cusp3 needs |mu| < 1/(2 kappa^2)")
        lam = 0.5 / k
        a = 0.5 / k ** 2
        ell = 0.25 / k ** 2 + k ** 2 * mu * mu
        h = 0.125 / k ** 3 + k * mu * mu
        return CatalogPoint(family=family, kind=BifurcationKind.CUSP, lam=lam,
                            mu=mu, ell=ell, a=a, b=a, h=h, kappa=k)

    # centre-saddle families
    if a is None:
        raise ValidationError(f"family {family} needs the triple root a")
    if lam == 0.0:
        raise ValidationError(
            "no centre-saddle strata at lam = 0: only the resonant equilibrium "
            "and the two supercritical Hopf points exist there")

    if abs(lam - 0.5 / k) <= 1e-14 / k:
        return _cs_point_lambda_half(family, a, k)

    if family in ("CS1", "CS2"):
        if lam < 0.5 / k:
            hi = a_sub_boundary(lam, k)
        elif lam < 1.0 / k:
            hi = (1.0 - k * lam) / k ** 2
        else:
            raise ValidationError("CS1/CS2 need lam < 1/kappa")
        if not 0.0 < a < hi:
            raise ValidationError(f"{family} needs 0 < a < {hi}")
        m_minus, _ = _mu2_branches(a, lam, k)
        mu2 = max(m_minus, 0.0)
        mu_val = math.sqrt(mu2)
        if family == "CS1":
            mu_val = -mu_val
    elif family == "CS3":
        if not lam < 0.5 / k:
            raise ValidationError("CS3 needs lam < 1/(2 kappa)")
        lo, hi = a0_root(lam, k), a_sub_boundary(lam, k)
        if not lo < a < hi:
            raise ValidationError(f"CS3 needs {lo} < a < {hi}")
        _, m_plus = _mu2_branches(a, lam, k)
        mu_val = sign * math.sqrt(max(m_plus, 0.0))
        mu2 = max(m_plus, 0.0)
    else:  # CS4
        if not 0.5 / k < lam < 1.0 / k:
            raise ValidationError("CS4 needs 1/(2 kappa) < lam < 1/kappa")
        lo, hi = (1.0 - k * lam) / k ** 2, a0_root(lam, k)
        if not lo < a < hi:
            raise ValidationError(f"CS4 needs {lo} < a < {hi}")
        m_minus, _ = _mu2_branches(a, lam, k)
        mu2 = max(m_minus, 0.0)
        mu_val = sign * math.sqrt(mu2)

    ell = _ell_from_mu2(a, mu2, lam, k)
    h = _h_from_mu2(a, mu2, lam, k)
    return CatalogPoint(family=family, kind=BifurcationKind.CENTRE_SADDLE,
                        lam=lam, mu=mu_val, ell=ell, a=a,
                        b=_b_of_a(a, lam, k), h=h, kappa=k)


def _cs_point_lambda_half(family: str, a: float, k: float) -> CatalogPoint:
    # lam = 1/(2 kappa): the eliminated quartic factorises; the CS1/CS2
    # sheets continue onto mu^2 = 2 kappa^2 a^3, flagged as boundary points.
    if family not in ("CS1", "CS2"):
        raise ValidationError(f"{family} has no points at lam = 1/(2 kappa)")
    if not 0.0 < a < 0.5 / k ** 2:
        raise ValidationError("boundary CS points need 0 < a < 1/(2 kappa^2)")
    lam = 0.5 / k
    mu2 = 2.0 * k ** 2 * a ** 3
    mu_val = math.sqrt(mu2)
    if family == "CS1":
        mu_val = -mu_val
    ell = (6.0 * k ** 2 * a - 1.0) / (4.0 * k ** 2)
    h = 1.5 * k * a * a
    return CatalogPoint(family=family, kind=BifurcationKind.CENTRE_SADDLE,
                        lam=lam, mu=mu_val, ell=ell, a=a,
                        b=-3.0 * a + 2.0 / k ** 2, h=h, kappa=k,
                        boundary=True)


def catalog_point_kappa0(family: str, *, lam: float, a: float | None = None,
                         sign: int = 1) -> CatalogPoint:
    """Closed-form catalog point of the kappa = 0 bifurcation set.

    Families CS1/CS2/CS3 (suffix _k0) take (lam, a) with the ranges
    0 < a < lam^2/2 resp. 4 lam^2/9 < a < lam^2/2; the three subcritical
    Hopf families take lam alone.  lam must be nonzero.
    """
    if family not in KAPPA0_FAMILIES:
        raise ValidationError(f"unknown kappa=0 family {family!r}")
    if lam == 0.0:
        raise ValidationError("kappa = 0 families need lam != 0")
    L2 = lam * lam

    if family == "HHsub1_k0":
        mu, ell, a = 0.5 * L2, 0.5 * L2, 0.5 * L2
    elif family == "HHsub2_k0":
        mu, ell, a = -0.5 * L2, 0.5 * L2, 0.5 * L2
    elif family == "HHsub3_k0":
        mu, ell, a = 0.0, -L2, 0.0
    else:
        if a is None:
            raise ValidationError(f"family {family} needs the triple root a")
        lo = 4.0 * L2 / 9.0 if family == "CS3_k0" else 0.0
        if not lo < a < 0.5 * L2:
            raise ValidationError(f"{family} needs {lo} < a < {0.5 * L2}")
        rad = 2.0 * abs(lam) * (L2 - 2.0 * a) ** 1.5
        base = -3.0 * a * a + 6.0 * a * L2 - 2.0 * L2 * L2
        # mu_pm^2 = base -/+ rad: the plus-branch family takes the smaller root
        if family == "CS3_k0":
            mu2 = max(base - rad, 0.0)
            mu = sign * math.sqrt(mu2)
        else:
            mu2 = max(base + rad, 0.0)
            mu = math.sqrt(mu2)
            if family == "CS1_k0":
                mu = -mu
        ell = 3.0 * a - L2
        h = (mu2 + 3.0 * a * a) / (2.0 * lam)
        return CatalogPoint(family=family, kind=BifurcationKind.CENTRE_SADDLE,
                            lam=lam, mu=mu, ell=ell, a=a, b=None, h=h, kappa=0.0)

    h = (mu * mu + 3.0 * a * a) / (2.0 * lam)
    return CatalogPoint(family=family, kind=BifurcationKind.HOPF_SUB, lam=lam,
                        mu=mu, ell=ell, a=a, b=None, h=h, kappa=0.0)


# ---------------------------------------------------------------------------
# Numeric solver (the independent oracle)
# ---------------------------------------------------------------------------

def _q_quadratic_coeffs(a: float, lam: float, kappa: float) -> tuple[float, float, float]:
    """Coefficients (A, B, C) of the eliminated quadratic in m = mu^2."""
    k, L = kappa, lam
    A = 1.0 - 2.0 * k * L
    B = (4.0 * k ** 3 * a ** 3 * L - 4.0 * k ** 2 * a ** 3
         + 12.0 * k ** 2 * a ** 2 * L ** 2 - 12.0 * k * a ** 2 * L
         + 6.0 * a ** 2 + 12.0 * k * a * L ** 3 - 12.0 * a * L ** 2
         + 4.0 * L ** 4)
    C = (4.0 * k ** 4 * a ** 6 + 12.0 * k ** 3 * a ** 5 * L
         - 12.0 * k ** 2 * a ** 5 + 12.0 * k ** 2 * a ** 4 * L ** 2
         - 18.0 * k * a ** 4 * L + 9.0 * a ** 4
         + 4.0 * k * a ** 3 * L ** 3 - 4.0 * a ** 3 * L ** 2)
    return A, B, C


def _m_branches_numeric(a: float, lam: float, kappa: float) -> np.ndarray:
    """Real roots m >= 0 of the eliminated quadratic in m = mu^2.

    At branch junctions the discriminant crosses zero and roundoff can push
    it slightly negative; discriminants below the noise floor are clamped
    to zero so the double root survives.  Genuinely complex pairs are
    discarded.  Returns sorted values; tiny negatives are clipped to 0.
    """
    A, B, C = _q_quadratic_coeffs(a, lam, kappa)
    if A == 0.0:
        roots = np.array([-C / B]) if B != 0.0 else np.array([])
    else:
        disc = B * B - 4.0 * A * C
        noise = 1e-10 * (B * B + abs(4.0 * A * C) + 1e-300)
        if abs(disc) <= noise:
            disc = 0.0
        if disc < 0.0:
            roots = np.array([])
        else:
            sq = math.sqrt(disc)
            # stable quadratic: avoid cancellation in the small root
            q = -0.5 * (B + math.copysign(sq, B)) if B != 0.0 else 0.5 * sq
            r1 = q / A if q != 0.0 else 0.0
            r2 = C / q if q != 0.0 else 0.0
            roots = np.array([r1, r2])
    if roots.size == 0:
        return np.array([])
    scale = 1.0 + float(np.max(np.abs(roots)))
    m = np.sort(roots.real)
    m[(m < 0.0) & (m > -1e-11 * scale)] = 0.0
    return m


def _event_from_am(a: float, m: float, lam: float, kappa: float,
                   mu_sign: int) -> BifurcationEvent | None:
    """Assemble and validate one event candidate from (a, mu^2)."""
    mu = mu_sign * math.sqrt(m)
    if kappa == 0.0:
        ell = 3.0 * a - lam * lam
        h = (m + 3.0 * a * a) / (2.0 * lam)
        b = None
    else:
        ell = _ell_from_mu2(a, m, lam, kappa)
        h = _h_from_mu2(a, m, lam, kappa)
        b = _b_of_a(a, lam, kappa)
    rmin = max(abs(mu), ell)
    if a < rmin - TIP_TOL * (1.0 + abs(rmin)):
        return None
    cas = CasimirValues(mu=mu, ell=ell)
    q = f_quartic(h, ReducedParams(lam=lam, kappa=kappa), cas)
    try:
        kind = classify_multiple_root(a, q, cas)
    except AmbiguousClassificationError:
        return None
    return BifurcationEvent(kind=kind, a=a, b=b, h=h, lam=lam, mu=mu,
                            ell=ell, kappa=kappa)


def _default_a_max(lam: float, kappa: float) -> float:
    cands = [0.0]
    if kappa != 0.0:
        if 1.0 - 2.0 * kappa * lam >= 0.0:
            cands.append(a_sup_boundary(lam, kappa))
        cands.append(max(a_quadruple(lam, kappa), 0.0))
        cands.append(1.0 / kappa ** 2)
        if lam != 0.0 and kappa * lam < 1.0:
            try:
                cands.append(a0_root(lam, kappa))
            except (ValidationError, RootFindingError):
                pass
    else:
        cands.append(0.5 * lam * lam)
    return 1.2 * max(cands) + 0.5


def solve_bifurcations_numeric(lam: float, kappa: float = 1.0, *,
                               n_grid: int = 2001, a_max: float | None = None,
                               match_radius: float = MATCH_RADIUS,
                               tag: bool = True) -> list[BifurcationEvent]:
    """Numerically enumerate the bifurcation set at fixed lam.

    Works from the coefficient-matching system of the triple-root
    factorisation: after eliminating (b, ell, h), the remaining quadratic
    in mu^2 is solved by companion matrix on an a-grid; Hopf points are
    located by bisecting a - r_min along each root branch, and the
    quadruple-root value of a is probed explicitly.  Events are classified
    by the multiple-root rules and tagged with the nearest catalog stratum
    (within ``match_radius``); unmatched events keep family None and are
    never dropped.  kappa = 0 is supported through the cubic degeneration
    of F (no b root, no quadruple candidates).
    """
    if abs(lam) < 1e-12:
        return _events_lambda_zero(kappa, tag=tag)
    if kappa != 0.0 and abs(lam - 0.5 / kappa) < 1e-12:
        return _events_lambda_half(kappa, n_grid=n_grid, tag=tag)

    if a_max is None:
        a_max = _default_a_max(lam, kappa)
    grid = list(np.linspace(0.0, a_max, n_grid))
    # structural candidates: branch-junction points, the quadruple root,
    # and the a = 0 endpoint (already on the grid)
    if kappa != 0.0:
        disc = 1.0 - 2.0 * kappa * lam
        if disc >= 0.0:
            grid += [a_sub_boundary(lam, kappa), a_sup_boundary(lam, kappa)]
        aq = a_quadruple(lam, kappa)
        if 0.0 <= aq <= a_max:
            grid += [aq]
    else:
        grid += [0.5 * lam * lam]
    grid = sorted(set(g for g in grid if 0.0 <= g <= a_max + 1e-12))

    events: list[BifurcationEvent] = []
    seen: set = set()
    branch_data = []  # (a, [m values sorted]) for Hopf bisection
    for a in grid:
        ms = _m_branches_numeric(a, lam, kappa)
        branch_data.append((a, ms))
        for m in ms:
            if m < 0.0:
                continue
            signs = (1,) if m == 0.0 else (1, -1)
            for sgn in signs:
                ev = _event_from_am(a, float(m), lam, kappa, sgn)
                if ev is None:
                    continue
                key = (ev.kind, round(ev.a, 10), round(ev.mu, 10), round(ev.ell, 10))
                if key not in seen:
                    seen.add(key)
                    events.append(ev)

    events.extend(_hopf_by_bisection(branch_data, lam, kappa, seen))

    if tag:
        events = [replace(ev, family=_nearest_family(ev, match_radius))
                  for ev in events]
    events.sort(key=lambda e: (e.a, e.mu, e.kind.value))
    return events


def _branch_m(a: float, lam: float, kappa: float, which: int) -> float:
    ms = _m_branches_numeric(a, lam, kappa)
    if ms.size <= which:
        return math.nan
    return float(ms[which])


def _hopf_by_bisection(branch_data, lam, kappa, seen) -> list[BifurcationEvent]:
    """Locate a = r_min crossings along each m(a) branch by bisection."""
    out: list[BifurcationEvent] = []

    def psi(a: float, which: int) -> float:
        m = _branch_m(a, lam, kappa, which)
        if math.isnan(m) or m < 0.0:
            return math.nan
        if kappa == 0.0:
            ell = 3.0 * a - lam * lam
        else:
            ell = _ell_from_mu2(a, m, lam, kappa)
        return a - max(math.sqrt(m), ell)

    for which in (0, 1):
        prev = None
        for a, ms in branch_data:
            val = psi(a, which) if ms.size > which and ms[which] >= 0.0 else math.nan
            if prev is not None and not math.isnan(val) and not math.isnan(prev[1]):
                a0, v0 = prev
                if v0 == 0.0 or val == 0.0:
                    prev = (a, val)
                    continue
                if v0 * val < 0.0:
                    try:
                        a_star = brentq(lambda x: psi(x, which), a0, a,
                                        xtol=1e-13, rtol=1e-13)
                    except ValueError:
                        prev = (a, val)
                        continue
                    m = _branch_m(a_star, lam, kappa, which)
                    if not math.isnan(m) and m >= 0.0:
                        signs = (1,) if m <= 1e-14 else (1, -1)
                        for sgn in signs:
                            ev = _event_from_am(a_star, max(m, 0.0), lam, kappa, sgn)
                            if ev is None:
                                continue
                            key = (ev.kind, round(ev.a, 10), round(ev.mu, 10),
                                   round(ev.ell, 10))
                            if key not in seen:
                                seen.add(key)
                                out.append(ev)
            prev = (a, val)
    return out


def _events_lambda_zero(kappa: float, tag: bool = True) -> list[BifurcationEvent]:
    """Special case lam = 0: only the resonant equilibrium and, for
    kappa != 0, the two supercritical Hopf points at +-mu = ell = 2/kappa^2."""
    events = []
    cas0 = CasimirValues(mu=0.0, ell=0.0)
    q0 = f_quartic(0.0, ReducedParams(lam=0.0, kappa=kappa), cas0)
    kind0 = classify_multiple_root(0.0, q0, cas0)
    b0 = _b_of_a(0.0, 0.0, kappa) if kappa != 0.0 else None
    events.append(BifurcationEvent(kind=kind0, a=0.0, b=b0, h=0.0, lam=0.0,
                                   mu=0.0, ell=0.0, kappa=kappa))
    if kappa != 0.0:
        a = 2.0 / kappa ** 2
        h = 0.5 * kappa * a * a
        for sgn in (1, -1):
            cas = CasimirValues(mu=sgn * a, ell=a)
            q = f_quartic(h, ReducedParams(lam=0.0, kappa=kappa), cas)
            kind = classify_multiple_root(a, q, cas)
            events.append(BifurcationEvent(kind=kind, a=a, b=_b_of_a(a, 0.0, kappa),
                                           h=h, lam=0.0, mu=sgn * a, ell=a,
                                           kappa=kappa))
    if tag:
        events = [replace(ev, family=_nearest_family(ev, MATCH_RADIUS))
                  for ev in events]
    return events


def _events_lambda_half(kappa: float, n_grid: int = 2001,
                        tag: bool = True) -> list[BifurcationEvent]:
    """Special case lam = 1/(2 kappa): the eliminated quartic factorises as
    (2 kappa^2 a - 1)^3 (mu^2 - 2 kappa^2 a^3)."""
    lam = 0.5 / kappa
    events: list[BifurcationEvent] = []
    seen: set = set()

    def push(ev):
        if ev is None:
            return
        key = (ev.kind, round(ev.a, 10), round(ev.mu, 10), round(ev.ell, 10))
        if key not in seen:
            seen.add(key)
            events.append(ev)

    # cusp line: a fixed at 1/(2 kappa^2), mu free
    a_c = 0.5 / kappa ** 2
    for mu in np.linspace(-a_c, a_c, max(n_grid // 8, 33)):
        ell = 0.25 / kappa ** 2 + kappa ** 2 * mu * mu
        h = 0.125 / kappa ** 3 + kappa * mu * mu
        cas = CasimirValues(mu=float(mu), ell=ell)
        q = f_quartic(h, ReducedParams(lam=lam, kappa=kappa), cas)
        try:
            kind = classify_multiple_root(a_c, q, cas)
        except AmbiguousClassificationError:
            continue
        push(BifurcationEvent(kind=kind, a=a_c, b=a_c, h=h, lam=lam,
                              mu=float(mu), ell=ell, kappa=kappa))
    # centre-saddle branch mu^2 = 2 kappa^2 a^3 (plus its Hopf endpoint a=0)
    for a in np.linspace(0.0, a_c, max(n_grid // 8, 33)):
        m = 2.0 * kappa ** 2 * a ** 3
        ell = (6.0 * kappa ** 2 * a - 1.0) / (4.0 * kappa ** 2)
        h = 1.5 * kappa * a * a
        b = -3.0 * a + 2.0 / kappa ** 2
        for sgn in ((1,) if m == 0.0 else (1, -1)):
            mu = sgn * math.sqrt(m)
            cas = CasimirValues(mu=mu, ell=ell)
            q = f_quartic(h, ReducedParams(lam=lam, kappa=kappa), cas)
            try:
                kind = classify_multiple_root(float(a), q, cas)
            except AmbiguousClassificationError:
                continue
            push(BifurcationEvent(kind=kind, a=float(a), b=b, h=h, lam=lam,
                                  mu=mu, ell=ell, kappa=kappa))
    if tag:
        events = [replace(ev, family=_nearest_family(ev, MATCH_RADIUS))
                  for ev in events]
    events.sort(key=lambda e: (e.a, e.mu, e.kind.value))
    return events


def _family_prediction(family: str, lam: float, a: float, kappa: float,
                       mu_sign: int) -> tuple[float, float] | None:
    """(mu, ell) of a family at the same lam (and a, for CS families);
    None when the family does not exist there.  Ranges are NOT enforced:
    matching is against closures."""
    try:
        if family in ("CS1", "CS2", "CS3", "CS4"):
            if kappa != 0.0 and abs(lam - 0.5 / kappa) <= 1e-12:
                m2 = 2.0 * kappa ** 2 * a ** 3
                ell = (6.0 * kappa ** 2 * a - 1.0) / (4.0 * kappa ** 2)
                mu = math.sqrt(max(m2, 0.0))
                mu = {"CS1": -mu, "CS2": mu}.get(family, mu_sign * mu)
                return mu, ell
            m_minus, m_plus = _mu2_branches(a, lam, kappa)
            m2 = m_plus if family == "CS3" else m_minus
            if m2 < -1e-12 * (1.0 + a * a) ** 2:
                return None
            m2 = max(m2, 0.0)
            mu = math.sqrt(m2)
            mu = {"CS1": -mu, "CS2": mu}.get(family, mu_sign * mu)
            return mu, _ell_from_mu2(a, m2, lam, kappa)
        pt = catalog_point(family, lam=lam, kappa=kappa)
        return pt.mu, pt.ell
    except (ValidationError, UnsupportedRegimeError):
        return None


_KIND_FAMILIES = {
    BifurcationKind.CENTRE_SADDLE: ("CS1", "CS2", "CS3", "CS4"),
    BifurcationKind.CUSP: ("Cusp1", "Cusp2", "Cusp3"),
    BifurcationKind.HOPF_SUB: ("HHsub1", "HHsub2", "HHsub3"),
    BifurcationKind.HOPF_SUPER: ("HHsup1", "HHsup2", "HHsup3"),
    BifurcationKind.HOPF_DEGENERATE: ("HHdeg1", "HHdeg2", "HHdeg3"),
}

_KIND_FAMILIES_K0 = {
    BifurcationKind.CENTRE_SADDLE: ("CS1_k0", "CS2_k0", "CS3_k0"),
    BifurcationKind.HOPF_SUB: ("HHsub1_k0", "HHsub2_k0", "HHsub3_k0"),
}


def _nearest_family(ev: BifurcationEvent, radius: float) -> str | None:
    if ev.kappa == 0.0:
        families = _KIND_FAMILIES_K0.get(ev.kind, ())
        best, best_d = None, math.inf
        for fam in families:
            try:
                if fam.startswith("CS"):
                    pt = catalog_point_kappa0(fam, lam=ev.lam, a=min(
                        max(ev.a, 1e-12), 0.5 * ev.lam ** 2 * (1 - 1e-12)),
                        sign=1 if ev.mu >= 0 else -1)
                else:
                    pt = catalog_point_kappa0(fam, lam=ev.lam)
            except (ValidationError, UnsupportedRegimeError):
                continue
            d = math.hypot(pt.mu - ev.mu, pt.ell - ev.ell)
            if d < best_d:
                best, best_d = fam, d
        return best if best_d <= radius else None

    if ev.kind is BifurcationKind.CENTRE_SADDLE:
        return _nearest_cs_family(ev, radius)

    families = _KIND_FAMILIES.get(ev.kind, ())
    best, best_d = None, math.inf
    for fam in families:
        if fam == "Cusp3":
            if abs(ev.lam - 0.5 / ev.kappa) > radius:
                continue
            ell_pred = 0.25 / ev.kappa ** 2 + ev.kappa ** 2 * ev.mu ** 2
            d = abs(ell_pred - ev.ell)
        else:
            pred = _family_prediction(fam, ev.lam, ev.a, ev.kappa,
                                      1 if ev.mu >= 0.0 else -1)
            if pred is None:
                continue
            d = math.hypot(pred[0] - ev.mu, pred[1] - ev.ell)
        if d < best_d:
            best, best_d = fam, d
    return best if best_d <= radius else None


def _nearest_cs_family(ev: BifurcationEvent, radius: float) -> str | None:
    """Centre-saddle family of an event: the mu-branch decides CS3 versus
    the minus-branch families, the a-range splits the latter into CS1/CS2
    (below the quadruple root) and CS4 (above, both signs)."""
    k, lam, a = ev.kappa, ev.lam, ev.a
    sgn = 1 if ev.mu >= 0.0 else -1
    if abs(lam - 0.5 / k) <= 1e-12:
        pred = _family_prediction("CS1", lam, a, k, sgn)
        if pred is None:
            return None
        d = math.hypot(abs(pred[0]) - abs(ev.mu), pred[1] - ev.ell)
        return ("CS1" if ev.mu < 0.0 else "CS2") if d <= radius else None
    candidates: list[str] = []
    if lam < 0.5 / k:
        candidates = ["CS3", "CS1", "CS2"]
    elif lam < 1.0 / k:
        candidates = (["CS4"] if a >= a_quadruple(lam, k) - 1e-9
                      else ["CS1", "CS2"])
    best, best_d = None, math.inf
    for fam in candidates:
        if fam == "CS1" and ev.mu > 0.0:
            continue
        if fam == "CS2" and ev.mu < 0.0:
            continue
        pred = _family_prediction(fam, lam, a, k, sgn)
        if pred is None:
            continue
        d = math.hypot(pred[0] - ev.mu, pred[1] - ev.ell)
        if d < best_d:
            best, best_d = fam, d
    return best if best_d <= radius else None


# ---------------------------------------------------------------------------
# Damped-Newton cross-check mode
# ---------------------------------------------------------------------------

def newton_triple_root(lam: float, kappa: float, mu: float, a0: float,
                       h0: float, ell0: float, max_iter: int = 60,
                       tol: float = 1e-12) -> tuple[float, float, float] | None:
    """Solve F(a) = F'(a) = F''(a) = 0 for (a, h, ell) at fixed (lam, kappa, mu).

    Damped Newton with analytic Jacobian; returns None when it fails to
    converge.  Used as the independent cross-check on the elimination
    solver.
    """
    v = np.array([a0, h0, ell0], dtype=float)
    mu2 = mu * mu

    def system(v):
        a, h, ell = v
        cas = CasimirValues(mu=mu, ell=ell)
        q = f_quartic(h, ReducedParams(lam=lam, kappa=kappa), cas)
        F = np.array([q.value(a), q.d1(a), q.d2(a)])
        x1 = h - lam * a - 0.5 * kappa * a * a
        J = np.array([
            [q.d1(a), 2.0 * x1, a * a - mu2],
            [q.d2(a), 2.0 * (-lam - kappa * a), 2.0 * a],
            [q.d3(a), -2.0 * kappa, 2.0],
        ])
        return F, J

    scale = max(1.0, abs(a0), abs(h0), abs(ell0))
    for _ in range(max_iter):
        F, J = system(v)
        nrm = float(np.max(np.abs(F)))
        if nrm <= tol * max(1.0, scale ** 4):
            return tuple(v)
        try:
            step = np.linalg.solve(J, F)
        except np.linalg.LinAlgError:
            return None
        # damping: halve until the residual shrinks
        lamb = 1.0
        for _ in range(30):
            trial = v - lamb * step
            Ft, _ = system(trial)
            if float(np.max(np.abs(Ft))) < nrm:
                v = trial
                break
            lamb *= 0.5
        else:
            return None
    return None


# ---------------------------------------------------------------------------
# Instability intervals of singular tips
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InstabilityInterval:
    """lam-interval on which the singular tip is dynamically unstable."""

    lam_lo: float
    lam_hi: float
    kind_lo: BifurcationKind
    kind_hi: BifurcationKind


def instability_interval(cas: CasimirValues, kappa: float = 1.0) -> InstabilityInterval:
    """The unique lam-interval where the level set through a singular tip
    cuts into the reduced space (F''(r_min) < 0).

    Endpoints are the two roots of F''(r_min) in lam, classified as sub- or
    supercritical Hopf events by the sign of F''' there.  Raises
    ValidationError for smooth tips (no interval exists).
    """
    tip = tip_class(cas)
    if not tip.is_singular:
        raise ValidationError(
            f"tip of (mu={cas.mu}, ell={cas.ell}) is smooth: no instability interval")
    rmin = tip.r_min
    rad = 3.0 * rmin - cas.ell
    rad = max(rad, 0.0)
    lo = -math.sqrt(rad) - kappa * rmin
    hi = math.sqrt(rad) - kappa * rmin

    def endpoint_kind(lam):
        h_c = lam * rmin + 0.5 * kappa * rmin * rmin
        q = f_quartic(h_c, ReducedParams(lam=lam, kappa=kappa), cas)
        f3 = q.d3(rmin)
        f3_scale = 6.0 * max(1.0, kappa * kappa) * (1.0 + abs(rmin))
        if abs(f3) <= _F3_REL_TOL * f3_scale:
            return BifurcationKind.HOPF_DEGENERATE
        return (BifurcationKind.HOPF_SUPER if f3 > 0.0
                else BifurcationKind.HOPF_SUB)

    return InstabilityInterval(lam_lo=lo, lam_hi=hi,
                               kind_lo=endpoint_kind(lo),
                               kind_hi=endpoint_kind(hi))
