"""Command-line front end.

Commands: ``bifdiag`` (bifurcation-set slices and surface samples),
``critvals`` (critical values of the energy-momentum map over a grid),
``fiber`` (classify one fiber), ``monodromy`` (run a generator loop),
``scale`` (kappa-normalisation utility) and ``selfcheck`` (acceptance
suite).  Outputs are deterministic: fixed orderings, 17-significant-digit
floats, LF line endings.  Flags beat environment variables (prefix
``RES112_``) which beat defaults.  Exit codes: 0 success, 1 validation
error, 2 numerical failure, 3 I/O error.
"""

from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import click
import numpy as np
from scipy.optimize import brentq

from . import acceptance
from .bifurcations import (a0_root, a_quadruple, a_sub_boundary,
                           a_sup_boundary, catalog_point,
                           catalog_point_kappa0, solve_bifurcations_numeric,
                           _ell_from_mu2, _h_from_mu2, _m_branches_numeric)
from .critical_values import (classify_fiber, critical_slice,
                              minimum_crossing_loci, thread_segments,
                              _c12_detach)
from .errors import NumericalError, Res112Error, ValidationError
from .model import CasimirValues, ModelParams, kappa_scaling
from .monodromy import generator_loop, monodromy_vector, to_matrix
from .reduced_dynamics import ReducedParams

FMT = "%.17g"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return FMT % x
    return str(x)


def _write_rows(path, header, rows, fmt):
    """Write rows as CSV or JSON-lines with deterministic float formatting."""
    try:
        with open(path, "w", newline="\n") as fh:
            if fmt == "csv":
                fh.write(",".join(header) + "\n")
                for row in rows:
                    fh.write(",".join(_fmt(v) for v in row) + "\n")
            else:
                for row in rows:
                    obj = {k: (FMT % v if isinstance(v, float) else v)
                           for k, v in zip(header, row)}
                    fh.write(json.dumps(obj, sort_keys=True) + "\n")
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


class IOFailure(Exception):
    pass


@click.group()
def cli():
    """Bifurcations and monodromy of the axially symmetric 1:1:-2 resonance."""


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad float list {text!r}") from exc


# ---------------------------------------------------------------------------
# bifdiag
# ---------------------------------------------------------------------------

def _slice_families(lam: float, kappa: float) -> list[str]:
    fams = []
    if kappa == 0.0:
        if lam != 0.0:
            fams = ["CS1_k0", "CS2_k0", "CS3_k0"]
        return fams
    if lam != 0.0 and lam < 0.5 / kappa:
        fams += ["CS1", "CS2", "CS3"]
    if 0.5 / kappa < lam < 1.0 / kappa:
        fams += ["CS1", "CS2", "CS4"]
    return fams


def _family_a_range(family: str, lam: float, kappa: float):
    if kappa == 0.0:
        hi = 0.5 * lam * lam
        lo = 4.0 * lam * lam / 9.0 if family == "CS3_k0" else 0.0
        return lo, hi
    if family in ("CS1", "CS2"):
        hi = (a_sub_boundary(lam, kappa) if lam < 0.5 / kappa
              else (1.0 - kappa * lam) / kappa ** 2)
        return 0.0, hi
    if family == "CS3":
        return a0_root(lam, kappa), a_sub_boundary(lam, kappa)
    if family == "CS4":
        return (1.0 - kappa * lam) / kappa ** 2, a0_root(lam, kappa)
    raise ValidationError(family)


def _cs_mu_ell(family: str, lam: float, a: float, kappa: float, sign: int):
    if kappa == 0.0:
        pt = catalog_point_kappa0(family, lam=lam, a=a, sign=sign)
        return pt.mu, pt.ell, pt.h
    pt = catalog_point(family, lam=lam, a=a, sign=sign, kappa=kappa)
    return pt.mu, pt.ell, pt.h


def _slice_rows_catalog(lam: float, ell_target: float, kappa: float):
    """(family, lambda, mu, ell, a, h) points of the closed-form bifurcation
    curves on the plane ell = ell_target, at one lam."""
    rows = []
    for family in _slice_families(lam, kappa):
        try:
            lo, hi = _family_a_range(family, lam, kappa)
        except (ValidationError, Res112Error):
            continue
        if not (hi > lo):
            continue
        signs = (1, -1) if family in ("CS3", "CS4", "CS3_k0") else (1,)
        pad = 1e-9 * (hi - lo)
        grid = np.linspace(lo + pad, hi - pad, 65)
        for sign in signs:
            vals = []
            for a in grid:
                try:
                    _, ell, _ = _cs_mu_ell(family, lam, float(a), kappa, sign)
                except (ValidationError, Res112Error):
                    ell = math.nan
                vals.append(ell - ell_target)
            for i in range(len(grid) - 1):
                v0, v1 = vals[i], vals[i + 1]
                if math.isnan(v0) or math.isnan(v1) or v0 * v1 > 0.0:
                    continue
                a_star = brentq(
                    lambda a: _cs_mu_ell(family, lam, a, kappa, sign)[1] - ell_target,
                    grid[i], grid[i + 1], xtol=1e-13)
                mu, ell, h = _cs_mu_ell(family, lam, a_star, kappa, sign)
                rows.append((family, lam, mu, ell, a_star, h))
    return rows


def _hopf_cusp_slice_rows(ell_target: float, kappa: float, lam_lo, lam_hi):
    """Intersections of the one-parameter families with the plane
    ell = ell_target (closed forms solved for lam)."""
    rows = []

    def add(family, lam, mu=None):
        try:
            if kappa == 0.0:
                pt = catalog_point_kappa0(family, lam=lam)
            elif family == "Cusp3":
                pt = catalog_point(family, mu=mu, kappa=kappa)
            elif family.startswith("HHdeg"):
                pt = catalog_point(family, kappa=kappa)
            else:
                pt = catalog_point(family, lam=lam, kappa=kappa)
        except (ValidationError, Res112Error):
            return
        if abs(pt.ell - ell_target) <= 1e-9 * max(1.0, abs(ell_target)) and \
                lam_lo - 1e-12 <= pt.lam <= lam_hi + 1e-12:
            rows.append((pt.family, pt.lam, pt.mu, pt.ell, pt.a, pt.h))

    if kappa == 0.0:
        if ell_target > 0.0:
            L = math.sqrt(2.0 * ell_target)
            for lam in (L, -L):
                add("HHsub1_k0", lam)
                add("HHsub2_k0", lam)
        if ell_target < 0.0:
            L = math.sqrt(-ell_target)
            for lam in (L, -L):
                add("HHsub3_k0", lam)
        return rows

    k = kappa
    if ell_target > 0.0:
        # ell = (1 - k lam -+ sqrt(1 - 2 k lam)) / k^2  =>  lam = -+sqrt(2 ell) - k ell
        for lam in (math.sqrt(2.0 * ell_target) / k - k * ell_target,
                    -math.sqrt(2.0 * ell_target) / k - k * ell_target):
            for fam in ("HHsub1", "HHsub2", "HHsup1", "HHsup2"):
                add(fam, lam)
    if ell_target < 0.0:
        for lam in (math.sqrt(-ell_target), -math.sqrt(-ell_target)):
            add("HHsub3", lam)
            add("HHsup3", lam)
    # cusp curves: ell_c(lam) monotone on (1/(2k), 1/k)
    if kappa > 0.0:
        root = ell_target * k ** 2  # ell_c = (1 - k lam - sqrt(2 k lam - 1))/k^2
        # solve 1 - x - sqrt(2x - 1) = root k^2 with x = k lam in (1/2, 1)
        f = lambda x: 1.0 - x - math.sqrt(max(2.0 * x - 1.0, 0.0)) - root  # noqa: E731
        if f(0.5 + 1e-12) * f(1.0 - 1e-12) < 0.0:
            x = brentq(f, 0.5 + 1e-12, 1.0 - 1e-12, xtol=1e-14)
            add("Cusp1", x / k)
            add("Cusp2", x / k)
        if abs(ell_target - 0.25 / k ** 2) < 0.25 / k ** 2 + 1e-12:
            m2 = (ell_target - 0.25 / k ** 2) / k ** 2
            if m2 >= 0.0:
                for s in (1, -1):
                    add("Cusp3", 0.5 / k, mu=s * math.sqrt(m2))
        for fam in ("HHdeg1", "HHdeg2", "HHdeg3"):
            add(fam, None)
    return rows


def _slice_rows_numeric(lam: float, ell_target: float, kappa: float):
    """Numeric-oracle points on the slice: roots of ell(a) - ell_target
    chased along the eliminated branches, then classified from the quartic."""
    rows = []
    if abs(lam) < 1e-12 or (kappa != 0.0 and abs(lam - 0.5 / kappa) < 1e-12):
        for ev in solve_bifurcations_numeric(lam, kappa, n_grid=201):
            if abs(ev.ell - ell_target) <= 1e-6:
                rows.append(("numeric-oracle", ev.lam, ev.mu, ev.ell, ev.a, ev.h))
        return rows
    a_hi_candidates = [1.0]
    if kappa != 0.0:
        if 1.0 - 2.0 * kappa * lam >= 0.0:
            a_hi_candidates.append(a_sup_boundary(lam, kappa))
        a_hi_candidates.append(max(a_quadruple(lam, kappa), 0.0))
    else:
        a_hi_candidates.append(0.5 * lam * lam)
    a_hi = 1.05 * max(a_hi_candidates)
    grid = np.linspace(0.0, a_hi, 129)

    def branch_ell(a, which):
        ms = _m_branches_numeric(a, lam, kappa)
        if ms.size <= which or ms[which] < 0.0:
            return math.nan
        if kappa == 0.0:
            return 3.0 * a - lam * lam
        return _ell_from_mu2(a, float(ms[which]), lam, kappa)

    for which in (0, 1):
        vals = [branch_ell(float(a), which) - ell_target for a in grid]
        for i in range(len(grid) - 1):
            v0, v1 = vals[i], vals[i + 1]
            if math.isnan(v0) or math.isnan(v1) or v0 * v1 > 0.0:
                continue
            try:
                a_star = brentq(lambda a: branch_ell(a, which) - ell_target,
                                grid[i], grid[i + 1], xtol=1e-13)
            except ValueError:
                continue
            ms = _m_branches_numeric(a_star, lam, kappa)
            if ms.size <= which or ms[which] < 0.0:
                continue
            m = float(ms[which])
            if kappa == 0.0:
                ell = 3.0 * a_star - lam * lam
                h = (m + 3.0 * a_star ** 2) / (2.0 * lam)
            else:
                ell = _ell_from_mu2(a_star, m, lam, kappa)
                h = _h_from_mu2(a_star, m, lam, kappa)
            for sgn in ((1,) if m <= 1e-14 else (1, -1)):
                mu = sgn * math.sqrt(max(m, 0.0))
                if a_star < max(abs(mu), ell) - 1e-10:
                    continue
                rows.append(("numeric-oracle", lam, mu, ell, a_star, h))
    return rows


def _bifdiag_slice(args):
    lam, ell_target, kappa, oracle = args
    rows = _slice_rows_catalog(lam, ell_target, kappa)
    if oracle:
        rows += _slice_rows_numeric(lam, ell_target, kappa)
    return rows


@cli.command()
@click.option("--kappa", type=float, default=1.0, show_default=True)
@click.option("--ell", required=True, help="comma-separated ell slice values")
@click.option("--lambda-window", "lambda_window", default="-1.5,1.5",
              show_default=True, help="lam_lo,lam_hi")
@click.option("--grid", type=int, default=241, show_default=True,
              help="lambda grid points per slice")
@click.option("--oracle/--no-oracle", default=True, show_default=True,
              help="include numeric-oracle overlay rows")
@click.option("--surface/--no-surface", default=True, show_default=True,
              help="also emit (lambda, a) samples of the full surfaces")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--out", default="bifdiag", show_default=True,
              help="output path prefix")
@click.option("--workers", type=int, default=1, show_default=True)
def bifdiag(kappa, ell, lambda_window, grid, oracle, surface, fmt, out, workers):
    """Per-ell slices of the bifurcation set in the (lambda, mu)-plane."""
    ells = _parse_floats(ell)
    lo, hi = _parse_floats(lambda_window)
    if not ells or hi <= lo or grid < 2:
        raise ValidationError("need ell values and a nonempty lambda window")
    lam_grid = np.linspace(lo, hi, grid)

    header = ["provenance", "ell_slice", "lambda", "mu", "ell", "a", "h"]
    rows = []
    for ell_t in ells:
        tasks = [(float(lam), float(ell_t), kappa, oracle) for lam in lam_grid]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as ex:
                chunks = list(ex.map(_bifdiag_slice, tasks, chunksize=8))
        else:
            chunks = [_bifdiag_slice(t) for t in tasks]
        for chunk in chunks:
            for fam, lam, mu, l, a, h in chunk:
                rows.append((fam, float(ell_t), lam, mu, l, a, h))
        for fam, lam, mu, l, a, h in _hopf_cusp_slice_rows(float(ell_t), kappa, lo, hi):
            rows.append((fam, float(ell_t), lam, mu, l, a, h))
    rows.sort(key=lambda r: (r[1], r[0], r[2], r[3]))
    ext = "csv" if fmt == "csv" else "jsonl"
    _write_rows(f"{out}_slices.{ext}", header, rows, fmt)
    click.echo(f"wrote {len(rows)} slice rows to {out}_slices.{ext}")

    if surface:
        srows = _surface_samples(kappa, lo, hi, max(grid // 4, 33))
        _write_rows(f"{out}_surface.{ext}",
                    ["family", "lambda", "a", "mu", "ell", "h"], srows, fmt)
        click.echo(f"wrote {len(srows)} surface rows to {out}_surface.{ext}")


def _surface_samples(kappa, lam_lo, lam_hi, n):
    rows = []
    lam_grid = np.linspace(lam_lo, lam_hi, n)
    for lam in lam_grid:
        lam = float(lam)
        for family in _slice_families(lam, kappa):
            try:
                lo, hi = _family_a_range(family, lam, kappa)
            except (ValidationError, Res112Error):
                continue
            if not hi > lo:
                continue
            signs = (1, -1) if family in ("CS3", "CS4", "CS3_k0") else (1,)
            for a in np.linspace(lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo), 17):
                for sign in signs:
                    try:
                        mu, ell, h = _cs_mu_ell(family, lam, float(a), kappa, sign)
                    except (ValidationError, Res112Error):
                        continue
                    rows.append((family, lam, float(a), mu, ell, h))
        if kappa > 0.0:
            for family in ("HHsub1", "HHsub2", "HHsub3", "HHsup1", "HHsup2",
                           "HHsup3", "Cusp1", "Cusp2"):
                try:
                    pt = catalog_point(family, lam=lam, kappa=kappa)
                except (ValidationError, Res112Error):
                    continue
                rows.append((family, pt.lam, pt.a, pt.mu, pt.ell, pt.h))
        elif lam != 0.0:
            for family in ("HHsub1_k0", "HHsub2_k0", "HHsub3_k0"):
                pt = catalog_point_kappa0(family, lam=lam)
                rows.append((family, pt.lam, pt.a, pt.mu, pt.ell, pt.h))
    if kappa > 0.0:
        for mu in np.linspace(-0.49 / kappa ** 2, 0.49 / kappa ** 2, n):
            pt = catalog_point("Cusp3", mu=float(mu), kappa=kappa)
            rows.append(("Cusp3", pt.lam, pt.a, pt.mu, pt.ell, pt.h))
        for family in ("HHdeg1", "HHdeg2", "HHdeg3"):
            pt = catalog_point(family, kappa=kappa)
            rows.append((family, pt.lam, pt.a, pt.mu, pt.ell, pt.h))
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    return rows


# ---------------------------------------------------------------------------
# critvals
# ---------------------------------------------------------------------------

def _critvals_node(args):
    mu, ell, lam_params, kappa, validate = args
    delta, l1, l2 = lam_params
    lam = delta + l1 * mu + l2 * ell
    rp = ReducedParams(lam=lam, kappa=kappa)
    sl = critical_slice(rp, [mu], [ell], validate=validate)
    return sl.nodes[0]


@cli.command()
@click.option("--delta", type=float, required=True)
@click.option("--lambda1", type=float, default=0.0, show_default=True)
@click.option("--lambda2", type=float, default=0.0, show_default=True)
@click.option("--kappa", type=float, default=1.0, show_default=True)
@click.option("--mu-window", default="-3,3", show_default=True)
@click.option("--ell-window", default="-3,3", show_default=True)
@click.option("--grid", type=int, default=41, show_default=True)
@click.option("--validate/--no-validate", default=False, show_default=True,
              help="cross-check every height with the fiber classifier")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv", show_default=True)
@click.option("--out", default="critvals", show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
def critvals(delta, lambda1, lambda2, kappa, mu_window, ell_window, grid,
             validate, fmt, out, workers):
    """Critical values of the energy-momentum map over a (mu, ell)-grid."""
    if kappa <= 0.0:
        raise ValidationError("critvals requires kappa > 0")
    mu_lo, mu_hi = _parse_floats(mu_window)
    ell_lo, ell_hi = _parse_floats(ell_window)
    mus = np.linspace(mu_lo, mu_hi, grid)
    ells = np.linspace(ell_lo, ell_hi, grid)
    tasks = [(float(m), float(l), (delta, lambda1, lambda2), kappa, validate)
             for m in mus for l in ells]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            nodes = list(ex.map(_critvals_node, tasks, chunksize=16))
    else:
        nodes = [_critvals_node(t) for t in tasks]
    nodes.sort(key=lambda nd: (nd.mu, nd.ell))

    ext = "csv" if fmt == "csv" else "jsonl"
    surface_rows = [(nd.mu, nd.ell, nd.h_min, "B" if nd.error is None else "error",
                     nd.error or "") for nd in nodes]
    _write_rows(f"{out}_surface.{ext}", ["mu", "ell", "h_min", "tag", "error"],
                surface_rows, fmt)
    face_rows = []
    for nd in nodes:
        for ch in nd.heights:
            face_rows.append((nd.mu, nd.ell, ch.h, ch.tag,
                              json.dumps(ch.fiber, sort_keys=True) if ch.fiber else ""))
    _write_rows(f"{out}_faces.{ext}", ["mu", "ell", "h", "tag", "fiber"],
                face_rows, fmt)

    # threads with their instability and above-minimum spans (kappa=1 frame)
    thread_rows = []
    if lambda1 == 0.0 and lambda2 == 0.0 and abs(kappa - 1.0) <= 1e-12:
        for seg in thread_segments(ReducedParams(lam=delta, kappa=1.0),
                                   ell_floor=min(ell_lo, -abs(delta) ** 2 - 5.0)):
            lo_u, hi_u = seg.ell_unstable or (math.nan, math.nan)
            lo_p, hi_p = seg.ell_positive or (math.nan, math.nan)
            for ell in ells:
                e = float(ell)
                if seg.name == "C12" and e >= 0.0:
                    continue
                if seg.name != "C12" and e <= 0.0:
                    continue
                mu = seg.mu_of_ell * e
                thread_rows.append((seg.name, mu, e, seg.h_c(e, delta),
                                    int(lo_u < e < hi_u if seg.ell_unstable else 0),
                                    int(lo_p < e < hi_p if seg.ell_positive else 0)))
        _write_rows(f"{out}_threads.{ext}",
                    ["curve", "mu", "ell", "h_c", "unstable", "above_min"],
                    thread_rows, fmt)
        loci_rows = [("ell_star", 0.0, _c12_detach(delta), 0.0)]
        if 0.5 < delta < 1.0:
            root = math.sqrt(2.0 * delta - 1.0)
            ell_hi = 1.0 - delta - root  # cusp height: the topmost horns
            ell_grid = np.linspace(loci_rows[0][2], ell_hi, max(grid // 2, 9))
            rp0 = ReducedParams(lam=delta, kappa=1.0)
            for mu_l, ell_l, h_l in minimum_crossing_loci(rp0, ell_grid[1:-1]):
                loci_rows.append(("L+", mu_l, ell_l, h_l))
                loci_rows.append(("L-", -mu_l, ell_l, h_l))
        _write_rows(f"{out}_loci.{ext}", ["name", "mu", "ell", "h"],
                    loci_rows, fmt)
    click.echo(f"wrote {len(surface_rows)} surface rows, {len(face_rows)} face rows, "
               f"{len(thread_rows)} thread rows to {out}_*.{ext}")


# ---------------------------------------------------------------------------
# fiber / monodromy / scale / selfcheck
# ---------------------------------------------------------------------------

@cli.command()
@click.option("--delta", type=float, required=True)
@click.option("--lambda1", type=float, default=0.0, show_default=True)
@click.option("--lambda2", type=float, default=0.0, show_default=True)
@click.option("--kappa", type=float, default=1.0, show_default=True)
@click.option("--mu", type=float, required=True)
@click.option("--ell", type=float, default=None, help="value of L")
@click.option("--iota", type=float, default=None, help="value of J (alternative)")
@click.option("--h", type=float, required=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
def fiber(delta, lambda1, lambda2, kappa, mu, ell, iota, h, fmt):
    """Classify the fiber of the energy-momentum map over one value."""
    if (ell is None) == (iota is None):
        raise ValidationError("give exactly one of --ell / --iota")
    if ell is None:
        ell = 2.0 * iota - mu
    lam = delta + lambda1 * mu + lambda2 * ell
    rep = classify_fiber(CasimirValues(mu=mu, ell=ell),
                         ReducedParams(lam=lam, kappa=kappa), h)
    if fmt == "json":
        click.echo(json.dumps({
            "mu": mu, "ell": ell, "h": h, "lambda": lam,
            "components": rep.multiset(), "is_critical": rep.is_critical,
            "flags": list(rep.flags)}, sort_keys=True))
        return
    if rep.is_empty:
        click.echo("Empty")
    else:
        for kind, count in sorted(rep.multiset().items()):
            click.echo(f"{kind} x{count}")
    if rep.flags:
        click.echo("flags: " + "; ".join(rep.flags))


@cli.command("monodromy")
@click.option("--delta", type=float, required=True)
@click.option("--kappa", type=float, default=1.0, show_default=True)
@click.option("--loop", "loop_name",
              type=click.Choice(["gamma1", "gamma2", "gamma3"]), required=True)
@click.option("--points", type=int, default=32, show_default=True)
@click.option("--radius", type=float, default=None)
@click.option("--plane", type=float, default=None,
              help="|mu| of the loop plane (gamma1/2) or |iota| (gamma3)")
@click.option("--tol", type=float, default=1e-11, show_default=True,
              help="integration tolerance for the fiber flows")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
def monodromy_cmd(delta, kappa, loop_name, points, radius, plane, tol, fmt):
    """Compute the monodromy vector of a named generator loop."""
    params = ModelParams(delta=delta, kappa=kappa)
    loop = generator_loop(loop_name, params, n_points=points, radius=radius,
                          plane=plane)
    res = monodromy_vector(loop, params, rtol=tol, atol=0.1 * tol)
    mat = to_matrix(res.vector)
    if fmt == "json":
        click.echo(json.dumps({
            "loop": loop_name, "m_N": res.vector.m_N, "m_J": res.vector.m_J,
            "winding": [FMT % w for w in res.winding],
            "matrix": [list(row) for row in mat.matrix],
            "points": res.n_points}, sort_keys=True))
        return
    click.echo(f"monodromy vector ({res.vector.m_N}, {res.vector.m_J})  "
               f"[winding ({res.winding[0]:+.6f}, {res.winding[1]:+.6f}), "
               f"{res.n_points} fibers]")
    for row in mat.matrix:
        click.echo("  [ " + "  ".join(f"{v:2d}" for v in row) + " ]")


@cli.command()
@click.option("--kappa", type=float, required=True)
@click.option("--lam", type=float, default=None)
@click.option("--mu", type=float, default=None)
@click.option("--ell", type=float, default=None)
@click.option("--r", "r_", type=float, default=None)
@click.option("--x", "x_", type=float, default=None)
@click.option("--y", "y_", type=float, default=None)
@click.option("--h", type=float, default=None)
@click.option("--inverse/--forward", default=False, show_default=True,
              help="inverse normalises kappa-frame data to the kappa=1 frame")
def scale(kappa, lam, mu, ell, r_, x_, y_, h, inverse):
    """Apply the kappa-normalising scaling to the given quantities."""
    s = kappa_scaling(kappa, lam=lam, mu=mu, ell=ell, R=r_, X=x_, Y=y_, h=h,
                      inverse=inverse)
    for name in ("lam", "mu", "ell", "R", "X", "Y", "h"):
        v = getattr(s, name)
        if v is not None:
            click.echo(f"{name} = " + FMT % v)


@cli.command()
@click.option("--skip-slow", is_flag=True, default=False,
              help="skip the monodromy and CLI-determinism criteria")
def selfcheck(skip_slow):
    """Run the acceptance suite and print one pass/fail line per criterion."""
    results = acceptance.run_all(skip_slow=skip_slow)
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        click.echo(f"[{status}] {res.name} ({res.elapsed:.2f}s): {res.detail}")
        failed += not res.passed
    if failed:
        raise NumericalError(f"{failed} acceptance criteria failed")
    click.echo(f"all {len(results)} criteria passed")


def main():
    try:
        cli.main(standalone_mode=False, auto_envvar_prefix="RES112")
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        sys.exit(1)
    except ValidationError as exc:
        click.echo(f"validation error: {exc}", err=True)
        sys.exit(1)
    except IOFailure as exc:
        click.echo(f"io error: {exc}", err=True)
        sys.exit(3)
    except OSError as exc:
        click.echo(f"io error: {exc}", err=True)
        sys.exit(3)
    except Res112Error as exc:
        click.echo(f"numerical error: {exc}", err=True)
        sys.exit(2)
    sys.exit(0)


if __name__ == "__main__":
    main()
