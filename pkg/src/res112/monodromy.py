"""Numerical Hamiltonian monodromy via rotation-number continuation.

For a regular fiber the reduced orbit closes after one period T_red; the
full-phase-space flow then misses its start by an element (s, t) of the
torus action, the rotation numbers.  Continuing (theta_N, theta_J) =
(s, t) around a closed loop of regular values and counting the integer
winding yields the monodromy vector of the loop.  The method is an
independent verification path: the reference results for the generator
loops come from isotropy-weight arguments, not from any computation
performed here.

Orientation conventions: threads are oriented from infinity toward the
origin and loops follow the right-hand rule around them; on the oriented
(J, H)-plane at fixed N < 0 this makes the loop around the normal 2-mode
thread counterclockwise.  The single global constant MONODROMY_SIGN pins
the numerical winding to that convention; it is calibrated once against
the (0, 1) result for that loop, after which the other generators are
genuine predictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import LoopError, NumericalError, ValidationError
from .model import CasimirValues, ModelParams
from .bifurcations import f_quartic
from .critical_values import FiberKind, classify_fiber
from .reduced_dynamics import ReducedParams, h_min

# Global orientation convention: multiplies the raw winding of both
# rotation numbers.  Calibrated once against the (0,1) generator.
MONODROMY_SIGN = 1

# Continuation refinement: per-step rotation change cap and point budget.
STEP_CAP = 0.25
MAX_LOOP_POINTS = 10_000
WINDING_INT_TOL = 0.05


@dataclass(frozen=True)
class RotationData:
    """Rotation numbers of a regular fiber component.

    theta_N and theta_J are the torus-action phases (mod 1) that close the
    reduced-period flow; T_red is the reduced period; closure_residual the
    full-phase-space mismatch after applying the correction.
    """

    theta_N: float
    theta_J: float
    T_red: float
    closure_residual: float
    r_interval: tuple[float, float]


@dataclass(frozen=True)
class MonodromyVector:
    m_N: int
    m_J: int

    def __add__(self, other: "MonodromyVector") -> "MonodromyVector":
        return MonodromyVector(self.m_N + other.m_N, self.m_J + other.m_J)

    def __neg__(self) -> "MonodromyVector":
        return MonodromyVector(-self.m_N, -self.m_J)


@dataclass(frozen=True)
class MonodromyMatrix:
    """Upper-unitriangular integer matrix with last column (m_N, m_J, 1)."""

    matrix: tuple

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=int)

    @property
    def vector(self) -> MonodromyVector:
        return MonodromyVector(int(self.matrix[0][2]), int(self.matrix[1][2]))


def to_matrix(v: MonodromyVector) -> MonodromyMatrix:
    return MonodromyMatrix(matrix=(
        (1, 0, v.m_N),
        (0, 1, v.m_J),
        (0, 0, 1),
    ))


def compose(a: MonodromyMatrix, b: MonodromyMatrix) -> MonodromyMatrix:
    """Matrix product; the image of the monodromy map is abelian, so the
    product must equal the matrix of the summed vectors."""
    prod = a.array @ b.array
    expected = to_matrix(a.vector + b.vector).array
    if not np.array_equal(prod, expected):
        raise NumericalError("monodromy matrices violated the additive law")
    return MonodromyMatrix(matrix=tuple(tuple(int(x) for x in row) for row in prod))


def inverse(a: MonodromyMatrix) -> MonodromyMatrix:
    return to_matrix(-a.vector)


# ---------------------------------------------------------------------------
# Rotation numbers on a single fiber
# ---------------------------------------------------------------------------

def _lambda_at(params: ModelParams, mu: float, ell: float) -> float:
    return params.delta + params.lambda1 * mu + params.lambda2 * ell


def rotation_numbers(value: tuple[float, float, float], params: ModelParams,
                     component: int = 0, rtol: float = 1e-11,
                     atol: float = 1e-12, t_max: float = 2000.0) -> RotationData:
    """Rotation numbers of the fiber over (mu, iota, h).

    Lifts a point of the selected torus component to full phase space,
    integrates the flow of the reduced Hamiltonian on R^6 for one reduced
    period, and solves the torus-action closure
    arg(z2(T)/z2(0)) = -2 pi s, arg(z3(T)/z3(0)) = -2 pi t, consistency
    checked on z1 whose phase must advance by 2 pi (s + t).
    """
    mu, iota, h = value
    ell = 2.0 * iota - mu
    lam = _lambda_at(params, mu, ell)
    kappa = params.kappa
    cas = CasimirValues(mu=mu, ell=ell)
    rp = ReducedParams(lam=lam, kappa=kappa)

    rep = classify_fiber(cas, rp, h)
    tori = [c for c in rep.components if c.kind is FiberKind.TORUS3]
    if rep.is_critical or not tori:
        raise ValidationError(
            f"value (mu={mu}, iota={iota}, h={h}) is not regular: "
            f"{rep.multiset() or 'empty fiber'}")
    if component >= len(tori):
        raise ValidationError(
            f"component {component} out of range ({len(tori)} torus components)")
    comp = tori[component]
    r2 = _polish_right_root(comp.r_interval[1], h, rp, cas)

    z0 = _lift(r2, cas, rp, h)
    zT, T_red = _integrate_period(z0, lam, kappa, rtol, atol, t_max)

    # torus-action closure
    s = (-_darg(zT[1], z0[1]) / (2.0 * math.pi)) % 1.0
    t = (-_darg(zT[2], z0[2]) / (2.0 * math.pi)) % 1.0
    cons = _wrap_unit(_darg(zT[0], z0[0]) / (2.0 * math.pi) - (s + t))
    if abs(cons) > 1e-6:
        raise NumericalError(
            f"phase consistency on z1 failed: {cons:.3e} cycles off")

    # full-phase-space closure after undoing the action
    ph = np.exp(-2j * math.pi * np.array([s + t, -s, -t]))
    resid = float(np.max(np.abs(ph * zT - z0)))
    scale = 1.0 + float(np.max(np.abs(z0)))
    if resid > 1e-8 * scale * 10.0:
        raise NumericalError(
            f"fiber closure residual {resid:.3e} too large; tighten tolerances")

    return RotationData(theta_N=s, theta_J=t, T_red=T_red,
                        closure_residual=resid, r_interval=comp.r_interval)


def _darg(zT: complex, z0: complex) -> float:
    if zT == 0 or z0 == 0:
        raise NumericalError("mode amplitude vanished at an endpoint")
    return math.atan2((zT / z0).imag, (zT / z0).real)


def _wrap_unit(x: float) -> float:
    return (x + 0.5) % 1.0 - 0.5


def _polish_right_root(r2: float, h: float, rp: ReducedParams,
                       cas: CasimirValues) -> float:
    q = f_quartic(h, rp, cas)
    x = r2
    for _ in range(4):
        d = q.d1(x)
        if d == 0.0:
            break
        x -= q.value(x) / d
    return x


def _lift(r: float, cas: CasimirValues, rp: ReducedParams, h: float) -> np.ndarray:
    """Lift the turning point (r, X1(r), 0) of the reduced orbit to C^3."""
    i1 = 0.5 * (r + cas.mu)
    i2 = 0.5 * (r - cas.mu)
    i3 = 0.5 * (r - cas.ell)
    if min(i1, i2, i3) <= 0.0:
        raise ValidationError(
            "orbit touches a vanished mode; fiber is not strictly regular")
    x0 = h - rp.lam * r - 0.5 * rp.kappa * r * r
    z = np.array([math.sqrt(2.0 * i1), math.sqrt(2.0 * i2),
                  math.sqrt(2.0 * i3)], dtype=complex)
    if x0 < 0.0:
        z[2] *= -1.0  # put the cubic invariant phase into mode 3
    return z


def _integrate_period(z0: np.ndarray, lam: float, kappa: float, rtol: float,
                      atol: float, t_max: float) -> tuple[np.ndarray, float]:
    """Flow of H = Re(z1 z2 z3) + lam R + (kappa/2) R^2 for one reduced period.

    Starting at a turning point (Y = 0), the orbit first crosses Y = 0 in
    the opposite direction at the half period and returns to the start at
    the full period.  Each leg terminates on the crossing direction the
    start of that leg cannot trigger, which keeps the t = 0 section hit
    from firing spuriously.
    """

    def rhs(t, z):
        gp = lam + 0.5 * kappa * (abs(z[0]) ** 2 + abs(z[1]) ** 2)
        w = np.conj(z)
        return np.array([
            1j * (w[1] * w[2] + gp * z[0]),
            1j * (w[0] * w[2] + gp * z[1]),
            1j * (w[0] * w[1]),
        ])

    def y_invariant(t, z):
        return (z[0] * z[1] * z[2]).imag

    f0 = rhs(0.0, z0)
    ydot0 = (f0[0] * z0[1] * z0[2] + z0[0] * f0[1] * z0[2]
             + z0[0] * z0[1] * f0[2]).imag
    if ydot0 == 0.0:
        raise NumericalError("degenerate start: reduced orbit stationary in Y")
    sigma = float(np.sign(ydot0))

    def run_leg(z_from, t_from, direction):
        ev = lambda t, z: y_invariant(t, z)  # noqa: E731 - scipy event attrs
        ev.terminal = True
        ev.direction = direction
        sol = solve_ivp(rhs, (t_from, t_from + t_max), z_from, method="DOP853",
                        rtol=rtol, atol=atol, events=[ev])
        if sol.status != 1 or len(sol.t_events[0]) == 0:
            raise NumericalError(
                f"no Y = 0 crossing (direction {direction:+.0f}) before t_max")
        return np.asarray(sol.y_events[0][0], dtype=complex), float(sol.t_events[0][0])

    z_half, t_half = run_leg(z0, 0.0, -sigma)
    zT, T = run_leg(z_half, t_half, sigma)
    return zT, T


def full_invariants(z: np.ndarray, lam: float, kappa: float) -> tuple[float, float, float]:
    """(N, J, H) of a full-phase-space point; used for drift diagnostics."""
    i1 = 0.5 * abs(z[0]) ** 2
    i2 = 0.5 * abs(z[1]) ** 2
    i3 = 0.5 * abs(z[2]) ** 2
    n = i1 - i2
    l = i1 + i2 - 2.0 * i3
    r = i1 + i2
    h = (z[0] * z[1] * z[2]).real + lam * r + 0.5 * kappa * r * r
    return n, 0.5 * (n + l), h


# ---------------------------------------------------------------------------
# Loop continuation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonodromyResult:
    vector: MonodromyVector
    winding: tuple[float, float]   # pre-rounding winding, convention applied
    n_points: int


def monodromy_vector(loop, params: ModelParams, component: int = 0,
                     rtol: float = 1e-11, atol: float = 1e-12) -> MonodromyResult:
    """Continue rotation numbers along a closed loop of regular values.

    ``loop`` is a sequence of (mu, iota, h) with first point equal to last
    (the closure is validated).  Mod-1 jumps are unwrapped by nearest-
    integer matching; segments where either rotation number moves by more
    than STEP_CAP, or where the component tracking cannot yet decide what
    happened between samples, are bisected adaptively (hard cap
    MAX_LOOP_POINTS).  The tracked torus family follows interval overlap;
    crossing a hyperbolic face (the tracked interval splitting at a saddle,
    or merging with a second substantial family) raises LoopError, while
    passing through an elliptic face on the surviving family is fine.
    """
    pts = [tuple(float(x) for x in p) for p in loop]
    if len(pts) < 4:
        raise ValidationError("loop needs at least 4 points")
    if not np.allclose(pts[0], pts[-1], rtol=0.0, atol=1e-13):
        raise ValidationError("loop must be closed (first point == last)")

    def eval_point(p, comp_hint):
        try:
            rd = rotation_numbers(p, params, component=comp_hint, rtol=rtol,
                                  atol=atol)
        except (ValidationError, NumericalError) as exc:
            raise LoopError(f"loop point {p} unusable: {exc}") from exc
        return rd

    tori0 = _fiber_tori(pts[0], params)
    if component >= len(tori0):
        raise ValidationError(
            f"component {component} out of range ({len(tori0)} torus components)")
    data0 = eval_point(pts[0], component)
    lift = np.array([data0.theta_N, data0.theta_J])
    prev = data0
    prev_tori, prev_idx = tori0, component
    n_eval = 1

    # stack entries: (a, b, depth); depth counts bisections of the original
    # segment so undecidable face crossings terminate
    stack = [(a, b, 0) for a, b in reversed(list(zip(pts[:-1], pts[1:])))]
    while stack:
        a, b, depth = stack.pop()
        tori_b = _fiber_tori(b, params)
        try:
            idx_b = _advance_component(prev_tori, prev_idx, tori_b)
        except _NeedRefinement as exc:
            if depth >= 14:
                raise LoopError(
                    f"component tracking undecidable near {b}: {exc}") from exc
            mid = tuple(0.5 * (np.asarray(a) + np.asarray(b)))
            stack.append((mid, b, depth + 1))
            stack.append((a, mid, depth + 1))
            continue
        rd = eval_point(b, idx_b)
        n_eval += 1
        if n_eval > MAX_LOOP_POINTS:
            raise LoopError(f"loop refinement exceeded {MAX_LOOP_POINTS} points")
        step = np.array([_wrap_unit(rd.theta_N - prev.theta_N),
                         _wrap_unit(rd.theta_J - prev.theta_J)])
        if np.max(np.abs(step)) > STEP_CAP:
            if depth >= 14:
                raise LoopError(f"rotation numbers jump by {step} near {b}")
            mid = tuple(0.5 * (np.asarray(a) + np.asarray(b)))
            stack.append((mid, b, depth + 1))
            stack.append((a, mid, depth + 1))
            continue
        lift = lift + step
        prev, prev_tori, prev_idx = rd, tori_b, idx_b

    raw = lift - np.array([data0.theta_N, data0.theta_J])
    winding = (MONODROMY_SIGN * float(raw[0]), MONODROMY_SIGN * float(raw[1]))
    m = MonodromyVector(int(round(winding[0])), int(round(winding[1])))
    err = max(abs(winding[0] - m.m_N), abs(winding[1] - m.m_J))
    if err > WINDING_INT_TOL:
        raise LoopError(f"winding {winding} is {err:.3f} away from integers")
    return MonodromyResult(vector=m, winding=winding, n_points=n_eval)


class _NeedRefinement(Exception):
    """Component bookkeeping between two samples is ambiguous; bisect."""


def _fiber_tori(value, params: ModelParams) -> list[tuple[float, float]]:
    """Sorted torus-component intervals of the fiber over ``value``."""
    mu, iota, h = value
    ell = 2.0 * iota - mu
    lam = _lambda_at(params, mu, ell)
    cas = CasimirValues(mu=mu, ell=ell)
    rep = classify_fiber(cas, ReducedParams(lam=lam, kappa=params.kappa), h)
    tori = [c.r_interval for c in rep.components if c.kind is FiberKind.TORUS3]
    if rep.is_critical or not tori:
        raise LoopError(f"loop value {value} is not regular: {rep.multiset()}")
    return sorted(tori)


def _advance_component(prev_tori, prev_idx, new_tori) -> int:
    """Carry the tracked component across one loop step.

    A hyperbolic face crossing shows up as the tracked interval splitting
    into two overlapping pieces, or as a second family of substantial size
    merging into the tracked one; both are rejected per the face rules.  An
    elliptic face crossing is benign: the dying family shrinks to a point,
    so near the face the partner's size vanishes.  When samples are too far
    apart to tell the difference, _NeedRefinement asks for bisection.
    """
    lo, hi = prev_tori[prev_idx]
    size_prev = hi - lo

    def overlap(c):
        return min(hi, c[1]) - max(lo, c[0])

    pos = [(i, overlap(c)) for i, c in enumerate(new_tori) if overlap(c) > 0.0]
    if not pos:
        raise _NeedRefinement(
            f"tracked interval ({lo}, {hi}) overlaps no new component "
            f"{new_tori}")
    if len(pos) >= 2:
        # the tracked interval covers two new components: a saddle opened up
        sizes = [new_tori[i][1] - new_tori[i][0] for i, _ in pos]
        if min(sizes) > 0.05 * size_prev:
            raise LoopError(
                "loop crossed a hyperbolic face: tracked component split "
                f"into {new_tori}")
        raise _NeedRefinement("tracked interval brushes a second component")
    idx = pos[0][0]
    new_c = new_tori[idx]
    size_new = new_c[1] - new_c[0]
    # merge detection: another previously substantial family landing in the
    # same new interval means the saddle was crossed outward
    for j, other in enumerate(prev_tori):
        if j == prev_idx:
            continue
        if min(other[1], new_c[1]) - max(other[0], new_c[0]) > 0.0:
            if other[1] - other[0] > 0.05 * max(size_prev, size_new):
                if len(new_tori) < len(prev_tori):
                    raise LoopError(
                        "loop crossed a hyperbolic face: components "
                        f"{prev_tori} merged into {new_c}")
                raise _NeedRefinement("families overlap ambiguously")
    return idx


# ---------------------------------------------------------------------------
# Named generator loops
# ---------------------------------------------------------------------------

def generator_loop(name: str, params: ModelParams, n_points: int = 48,
                   radius: float | None = None, plane: float | None = None):
    """Construct a named generator loop around one of the three threads.

    gamma1 circles the normal 1-mode thread in a plane mu = +c (clockwise
    in the oriented (J, H)-plane: the thread points toward -mu), gamma2 the
    normal 2-mode thread in mu = -c (counterclockwise in (J, H)), gamma3
    the normal 3-mode thread in iota = -c (clockwise in (N, H)).  Radii are
    shrunk automatically until every sample is a regular value.
    """
    if params.lambda1 != 0.0 or params.lambda2 != 0.0:
        raise ValidationError("named generator loops assume lambda1 = lambda2 = 0")
    lam = params.delta
    kappa = params.kappa
    if name not in ("gamma1", "gamma2", "gamma3"):
        raise ValidationError(f"unknown generator loop {name!r}")

    if name in ("gamma1", "gamma2"):
        c = plane if plane is not None else 0.5
        mu0 = c if name == "gamma1" else -c
        ell0 = abs(mu0)
        # thread pierces the plane at (iota, h) = ((mu0+ell0)/2, h_c)
        iota0 = 0.5 * (mu0 + ell0)
        h0 = lam * ell0 + 0.5 * kappa * ell0 * ell0
        ccw = name == "gamma2"

        def make(r):
            phi = 0.37 + np.linspace(0.0, 2.0 * math.pi, n_points + 1)
            sgn = 1.0 if ccw else -1.0
            iotas = iota0 + r * np.cos(phi)
            hs = h0 + sgn * r * np.sin(phi)
            return [(mu0, float(i), float(hh)) for i, hh in zip(iotas, hs)]
    else:
        c = plane if plane is not None else 0.75
        iota0 = -c
        h0 = 0.0  # normal 3-mode energy
        ell0 = 2.0 * iota0

        def make(r):
            phi = 0.37 + np.linspace(0.0, 2.0 * math.pi, n_points + 1)
            mus = r * np.cos(phi)
            hs = h0 - r * np.sin(phi)  # clockwise in (mu, h)
            return [(float(m), iota0, float(hh)) for m, hh in zip(mus, hs)]

    if radius is None:
        cas0 = CasimirValues(mu=0.0, ell=ell0) if name == "gamma3" else \
            CasimirValues(mu=mu0, ell=ell0)
        gap = h0 - h_min(cas0, ReducedParams(lam=lam, kappa=kappa))
        radius = 0.35 * gap if gap > 0.0 else 0.1

    for _ in range(8):
        loop = make(radius)
        if _loop_regular(loop, params):
            return loop
        radius *= 0.6
    raise LoopError(f"could not place a regular {name} loop")


def _loop_regular(loop, params: ModelParams) -> bool:
    for mu, iota, h in loop:
        ell = 2.0 * iota - mu
        lam = _lambda_at(params, mu, ell)
        try:
            rep = classify_fiber(CasimirValues(mu=mu, ell=ell),
                                 ReducedParams(lam=lam, kappa=params.kappa), h)
        except (ValidationError, NumericalError):
            return False
        tori = [c for c in rep.components if c.kind is FiberKind.TORUS3]
        if rep.is_critical or not tori:
            return False
    return True
