"""Verification battery for the solution catalogue.

Every closed form is checked two independent ways: by substituting it and
its chain-rule second derivative into its own Duffing equation (residual
channel), and by comparing it against adaptive Runge-Kutta integration
launched from the catalogue initial conditions (agreement channel).  On
top of that the battery checks the special-function layer (constants,
base-case reductions, the s^2 + c^2 + s^2 c^2 = 1 identity), periods,
amplitude bounds, kink slopes, blow-up locations, damped variants, and a
sensitivity control that deliberately perturbs coefficients to prove the
residual tests can fail.

Checks are pure functions of their configuration: identical configs give
bit-identical reports.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from . import duffing, leaf
from .duffing import (
    ALL_IDS,
    DIVERGENT_IDS,
    KINKED_IDS,
    Damping,
    SolutionSpec,
    amplitude_bounds,
    initial_conditions,
    kink_points,
    ode_residual,
    period,
    solution_ode,
    solution_value,
    valid_mask,
)
from .leaf import LeafKind, get_basis
from .numerics import SecondOrderIVP, rk_integrate

__all__ = [
    "CheckReport",
    "VerifyConfig",
    "GridSpec",
    "verify_solution",
    "verify_identities",
    "verify_relations",
    "run_suite",
    "reports_to_jsonl",
    "summary_table",
]

# printed three-decimal reference values for the constants tables
CONSTANTS_TABLE = {
    1: (3.141, None, None),
    2: (2.622, 1.311, 1.854),
    3: (2.429, 0.701, 1.402),
}


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a single check.

    ``passed`` is true exactly when ``worst_residual <= tolerance``; for
    the sensitivity controls the quantities are normalized so the same
    rule applies (see the check's notes).
    """

    check_id: str
    passed: bool
    worst_residual: float
    worst_location: float
    tolerance: float
    notes: str = ""
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> str:
        payload = {
            "check_id": self.check_id,
            "status": self.status,
            "worst_residual": self.worst_residual,
            "worst_location": self.worst_location,
            "tolerance": self.tolerance,
            "notes": self.notes,
        }
        payload.update({k: v for k, v in self.details.items()
                        if isinstance(v, (int, float, str, bool))})
        return json.dumps(payload)


def _report(check_id, worst, location, tol, notes="", **details) -> CheckReport:
    worst = float(worst)
    return CheckReport(
        check_id=check_id,
        passed=bool(worst <= tol),
        worst_residual=worst,
        worst_location=float(location),
        tolerance=float(tol),
        notes=notes,
        details=details,
    )


@dataclass(frozen=True)
class GridSpec:
    """Sampling descriptor: uniform points on [t_min, t_max] minus guard
    bands around kinks and poles (and, for divergent ids, minus the region
    where |x| exceeds ``residual_cap``, where double precision can no
    longer resolve the x^3/x^5 terms to the residual tolerance)."""

    t_min: float
    t_max: float
    points: int = 500
    guard: float = 1e-3
    residual_cap: float = 10.0


@dataclass(frozen=True)
class VerifyConfig:
    """Configuration of the full battery (defaults are the published run)."""

    ids: tuple[int, ...] = ALL_IDS
    include_undamped: bool = True
    include_damped: bool = True
    A: float = 1.0
    omega: float = 1.0
    beta_poly: tuple[float, ...] = (0.5,)
    c: float = 0.0
    points_per_period: int = 500
    guard: float = 1e-3
    residual_cap: float = 10.0
    damped_window: float = 10.0
    residual_tol: float = 1e-7
    agreement_tol: float = 1e-6
    divergent_agreement_tol: float = 1e-5
    blowup_tol: float = 1e-6
    identity_tol: float = 1e-9
    base_case_tol: float = 1e-9
    period_tol: float = 1e-8
    bounds_tol: float = 1e-6
    kink_tol: float = 1e-5
    kink_h: float = 1e-6
    constants_tol: float = 5e-4
    circle_tol: float = 1e-9
    energy_tol: float = 1e-8
    envelope_tol: float = 1e-10
    rk_tol: float = 1e-10
    divergent_rk_tol: float = 1e-12
    perturbation: float = 0.03

    def damping(self) -> Damping:
        return Damping(beta_poly=self.beta_poly, c=self.c)


# --------------------------------------------------------------------------
# grids
# --------------------------------------------------------------------------

def default_grid(spec: SolutionSpec, config: VerifyConfig,
                 periods: float = 1.0) -> GridSpec:
    if spec.damping is not None:
        return GridSpec(0.0, config.damped_window,
                        points=int(config.points_per_period * periods),
                        guard=config.guard, residual_cap=config.residual_cap)
    p = period(spec.undamped)
    if p.periodic:
        t_max = periods * p.T
    else:
        t_max = periods * p.recurrence_unit
    return GridSpec(0.0, t_max, points=int(config.points_per_period * periods),
                    guard=config.guard, residual_cap=config.residual_cap)


def guarded_times(spec: SolutionSpec, grid: GridSpec) -> np.ndarray:
    """Expand a GridSpec into concrete sample times.

    Excludes guard bands around kinks and poles; for divergent ids also
    drops samples where |x| exceeds the residual cap.
    """
    t = np.linspace(grid.t_min, grid.t_max, grid.points)
    mask = valid_mask(spec, t, guard=grid.guard)
    ks = kink_points(spec.undamped)
    if ks is not None:
        m = np.round((t - ks.offset) / ks.spacing)
        mask &= np.abs(t - (ks.offset + m * ks.spacing)) > grid.guard
    t = t[mask]
    if spec.id in DIVERGENT_IDS and t.size:
        x = solution_value(spec.undamped, t)
        t = t[np.abs(x) <= grid.residual_cap]
    return t


# --------------------------------------------------------------------------
# residual and agreement channels
# --------------------------------------------------------------------------

def residual_check(spec: SolutionSpec, grid: GridSpec, tol: float,
                   coeffs=None, label: str | None = None) -> CheckReport:
    """Max |x'' + a1 x + a2 x^3 + a3 x^5 (+ beta x')| over the guarded grid."""
    t = guarded_times(spec, grid)
    if t.size == 0:
        return _report(label or f"residual:id={spec.id}", math.inf, math.nan, tol,
                       notes="empty grid after guard bands")
    res = np.abs(ode_residual(spec, t, coeffs=coeffs))
    j = int(np.argmax(res))
    kind = "damped" if spec.damping is not None else "undamped"
    return _report(
        label or f"residual:id={spec.id}",
        res[j], t[j], tol,
        notes=f"{kind} closed form vs its equation on {t.size} samples",
        samples=int(t.size),
    )


def agreement_check(spec: SolutionSpec, config: VerifyConfig) -> CheckReport:
    """Closed form vs adaptive integration from the catalogue ICs.

    Periodic ids: absolute sup over three periods.  Divergent ids: the
    trajectory is tracked until |x| = 1e3 and compared relative to the
    solution scale -- near a pole the map t -> x has condition dx/dt ~ x^2
    (id 7/8) or ~ x^3 (13/14), so an absolute comparison at |x| = 1e3
    would be limited by time rounding alone, not by either channel.
    Kinked forms are compared in magnitude: past each kink the integrated
    trajectory continues into the mirror branch (-x solves the same
    equation), so |numeric| retraces the closed form.
    """
    ic = initial_conditions(spec)
    accel = duffing.acceleration(spec)
    ivp = SecondOrderIVP(accel, x0=ic.x0, v0=ic.v0)
    divergent = spec.id in DIVERGENT_IDS
    folded = spec.id in KINKED_IDS
    label = f"agreement:id={spec.id}"

    if divergent:
        tol = config.divergent_agreement_tol
        wf = rk_integrate(ivp, 10.0 / abs(spec.omega),
                          tol=config.divergent_rk_tol, blowup_cap=1e3)
        ts = np.linspace(0.0, wf.t[-1], config.points_per_period)
        ts = ts[valid_mask(spec, ts, guard=leaf.POLE_GUARD)]
        exact = solution_value(spec, ts)
        num = wf.at(ts)
        dev = np.abs(np.abs(num) - np.abs(exact)) if folded \
            else np.abs(num - exact)
        dev = dev / np.maximum(1.0, np.abs(exact))
        note = ("relative agreement until |x| = 1e3 (blow-up tracked, "
                f"flag={wf.meta.blown_up})")
    else:
        tol = config.agreement_tol
        T = period(spec.undamped).T
        wf = rk_integrate(ivp, 3.0 * T, tol=config.rk_tol)
        ts = np.linspace(0.0, 3.0 * T, 3 * config.points_per_period)
        exact = solution_value(spec, ts)
        num = wf.at(ts)
        dev = np.abs(np.abs(num) - np.abs(exact)) if folded \
            else np.abs(num - exact)
        note = "absolute agreement over three periods"
        if folded:
            note += "; magnitudes compared (mirror branch past kinks)"
    j = int(np.argmax(dev))
    return _report(label, dev[j], ts[j], tol, notes=note,
                   rk_steps=int(wf.meta.steps))


def blowup_location_check(spec: SolutionSpec, config: VerifyConfig) -> CheckReport:
    """Integrated blow-up time vs the pole of cleafh_2 at eta_2/omega."""
    ic = initial_conditions(spec)
    cap = 1e8 if spec.id in (7, 8) else 1e6
    wf = rk_integrate(SecondOrderIVP(duffing.acceleration(spec), x0=ic.x0, v0=ic.v0),
                      10.0 / abs(spec.omega), tol=config.rk_tol, blowup_cap=cap)
    pole = get_basis(2).eta_n / abs(spec.omega)
    err = abs((wf.meta.blowup_time or math.inf) - pole)
    return _report(f"blowup_location:id={spec.id}", err, pole, config.blowup_tol,
                   notes=f"|x| cap {cap:g}; first pole expected at {pole:.9g}")


def verify_solution(spec: SolutionSpec, grid: GridSpec | None = None,
                    tol: float = 1e-6, residual_tol: float = 1e-7,
                    config: VerifyConfig | None = None) -> CheckReport:
    """Composite check of one spec: residual channel plus agreement channel.

    The report's ``worst_residual`` is normalized so that the pass rule
    ``worst_residual <= tolerance`` holds exactly when both channels pass
    their own tolerances; the raw numbers are in ``details``.
    """
    config = config or VerifyConfig(agreement_tol=tol, residual_tol=residual_tol)
    grid = grid or default_grid(spec, config)
    res = residual_check(spec, grid, residual_tol)
    agr = agreement_check(spec, config)
    worse = max(res.worst_residual / residual_tol,
                agr.worst_residual / agr.tolerance)
    loc = res.worst_location if res.worst_residual / residual_tol >= \
        agr.worst_residual / agr.tolerance else agr.worst_location
    return CheckReport(
        check_id=f"solution:id={spec.id}" + (":damped" if spec.damping else ""),
        passed=res.passed and agr.passed,
        worst_residual=worse * tol,
        worst_location=float(loc),
        tolerance=tol,
        notes="normalized composite of residual and agreement channels",
        details={
            "residual": res.worst_residual,
            "residual_tol": residual_tol,
            "residual_location": res.worst_location,
            "agreement": agr.worst_residual,
            "agreement_tol": agr.tolerance,
            "agreement_location": agr.worst_location,
            "agreement_notes": agr.notes,
        },
    )


# --------------------------------------------------------------------------
# identities, periods, bounds, kinks
# --------------------------------------------------------------------------

def verify_identities(basis, num_points: int = 1000, tol: float = 1e-9) -> CheckReport:
    """Base-case reductions (n=1) or the s,c interlocking identity (n=2)."""
    if basis.n == 1:
        t = np.linspace(0.0, 2.0 * math.pi, num_points)
        ds = np.abs(leaf.value(LeafKind.SLEAF, basis, t) - np.sin(t))
        dc = np.abs(leaf.value(LeafKind.CLEAF, basis, t) - np.cos(t))
        dev = np.maximum(ds, dc)
        j = int(np.argmax(dev))
        return _report("base_case:n=1", dev[j], t[j], tol,
                       notes="sup-norm against sin and cos")
    if basis.n == 2:
        t = np.linspace(0.0, 2.0 * basis.pi_n, num_points)
        s = leaf.value(LeafKind.SLEAF, basis, t)
        c = leaf.value(LeafKind.CLEAF, basis, t)
        dev = np.abs(s * s + c * c + s * s * c * c - 1.0)
        j = int(np.argmax(dev))
        return _report("identity:n=2", dev[j], t[j], tol,
                       notes="s^2 + c^2 + s^2 c^2 = 1 residual")
    raise ValueError("identity checks are defined for n = 1 and n = 2")


def _refine_extremum(fun, t_lo, t_hi):
    r = minimize_scalar(fun, bounds=(t_lo, t_hi), method="bounded",
                        options={"xatol": 1e-12})
    return float(r.fun), float(r.x)


def verify_relations(spec: SolutionSpec, tol: float = 1e-6,
                     config: VerifyConfig | None = None) -> CheckReport:
    """Period recurrence plus attained-extrema-vs-bounds for one spec."""
    config = config or VerifyConfig(bounds_tol=tol)
    if spec.damping is not None:
        raise ValueError("relations apply to undamped specs")
    rep_p = period_check(spec, config)
    rep_b = bounds_check(spec, config)
    worse = max(rep_p.worst_residual / rep_p.tolerance,
                rep_b.worst_residual / rep_b.tolerance)
    return CheckReport(
        check_id=f"relations:id={spec.id}",
        passed=rep_p.passed and rep_b.passed,
        worst_residual=worse * tol,
        worst_location=rep_b.worst_location,
        tolerance=tol,
        notes="normalized composite of period and bounds channels",
        details={"period": rep_p.worst_residual, "bounds": rep_b.worst_residual,
                 "extrema": rep_b.details.get("extrema", ""),
                 "bounds_notes": rep_b.notes},
    )


def period_check(spec: SolutionSpec, config: VerifyConfig) -> CheckReport:
    p = period(spec)
    if not p.periodic:
        # magnitude recurrence, skipping guard bands.  Ids 13/14 live only
        # on every other branch window, so their recurrence is observable
        # at two units; 7/8 recur every unit.
        unit = p.recurrence_unit
        shift = unit if spec.id in (7, 8) else 2.0 * unit
        t = np.linspace(0.0, unit, 200)
        ok = valid_mask(spec, t, guard=config.guard) \
            & valid_mask(spec, t + shift, guard=config.guard)
        t = t[ok]
        x0 = np.abs(solution_value(spec, t))
        keep = x0 <= config.residual_cap
        t, x0 = t[keep], x0[keep]
        x1 = np.abs(solution_value(spec, t + shift))
        dev = np.abs(x1 - x0)
        j = int(np.argmax(dev))
        return _report(f"period:id={spec.id}", dev[j], t[j],
                       config.period_tol,
                       notes=f"divergent: |x| recurs with unit {unit:.9g} "
                             f"(checked at shift {shift:.9g})")
    t = np.linspace(0.0, 2.0 * p.T, 200)
    dev = np.abs(solution_value(spec, t + p.T) - solution_value(spec, t))
    j = int(np.argmax(dev))
    return _report(f"period:id={spec.id}", dev[j], t[j], config.period_tol,
                   notes=f"T = {p.T:.9g}")


def bounds_check(spec: SolutionSpec, config: VerifyConfig) -> CheckReport:
    """Attained extrema (grid + bounded local refinement) vs the bounds."""
    lo, hi = amplitude_bounds(spec)
    p = period(spec)
    window = p.T if p.periodic else p.recurrence_unit
    t = np.linspace(0.0, window, config.points_per_period)
    t = t[valid_mask(spec, t, guard=leaf.POLE_GUARD)]
    x = solution_value(spec, t)

    def val(ts):
        return float(solution_value(spec, float(ts)))

    # refine only the finite sides; an infinite bound's grid extremum sits
    # next to a pole, and refining it would chase the pole into the guard
    dt = window / config.points_per_period
    jmin = int(np.argmin(x))
    if math.isfinite(lo):
        lo_att, lo_t = _refine_extremum(
            val, max(t[jmin] - dt, t[0]), min(t[jmin] + dt, t[-1]))
    else:
        lo_att, lo_t = float(x[jmin]), float(t[jmin])
    jmax = int(np.argmax(x))
    if math.isfinite(hi):
        hi_att, hi_t = _refine_extremum(
            lambda ts: -val(ts), max(t[jmax] - dt, t[0]), min(t[jmax] + dt, t[-1]))
        hi_att = -hi_att
    else:
        hi_att, hi_t = float(x[jmax]), float(t[jmax])
    # kinked extrema sit exactly on the kink lattice, where the bounded
    # minimizer cannot beat the closed-form zero
    ks = kink_points(spec)
    if ks is not None:
        for k in (ks.nearest(t[jmin]), ks.nearest(t[jmax])):
            if t[0] <= k <= t[-1] and valid_mask(spec, k).all():
                xk = float(solution_value(spec, k))
                if xk < lo_att:
                    lo_att, lo_t = xk, k
                if xk > hi_att:
                    hi_att, hi_t = xk, k

    errs = []
    notes = []
    if math.isfinite(lo):
        errs.append((abs(lo_att - lo), lo_t))
    else:
        notes.append("unbounded below")
    if math.isfinite(hi):
        errs.append((abs(hi_att - hi), hi_t))
    else:
        notes.append(f"unbounded above (max over window {hi_att:.6g})")
    if spec.id in (7, 13):
        att, side = (lo_att, "infimum") if spec.A > 0 else (hi_att, "supremum")
        notes.append(
            f"attained {side} {att:.9g} = sqrt(2)*A (tight); the looser "
            "published floor 1.0*|A| holds but is not tight and is not asserted")
    worst, loc = max(errs, key=lambda e: e[0]) if errs else (0.0, 0.0)
    return _report(
        f"bounds:id={spec.id}", worst, loc, config.bounds_tol,
        notes="; ".join(notes) if notes else "two-sided bounds attained",
        extrema=f"[{lo_att:.9g}, {hi_att:.9g}]",
        expected=f"[{lo:.9g}, {hi:.9g}]",
        attained_min=lo_att,
        attained_max=hi_att,
    )


def kink_check(spec: SolutionSpec, config: VerifyConfig) -> CheckReport:
    """One-sided finite-difference slopes at kinks vs the closed limits."""
    ks = kink_points(spec)
    if ks is None:
        raise ValueError(f"solution {spec.id} has no kinks")
    h = config.kink_h
    p = period(spec.undamped)
    window = 3.0 * (p.T if p.periodic else p.recurrence_unit)
    kinks = [k for k in ks.within(-window, window)
             if valid_mask(spec, k).all()][:6]
    worst, loc = 0.0, math.nan
    for k in kinks:
        right = (float(solution_value(spec, k + h)) - float(solution_value(spec, k))) / h
        left = (float(solution_value(spec, k)) - float(solution_value(spec, k - h))) / h
        for err in (abs(right - ks.right_slope), abs(left - ks.left_slope)):
            if err > worst:
                worst, loc = err, k
    return _report(f"kinks:id={spec.id}", worst, loc, config.kink_tol,
                   notes=f"{len(kinks)} kinks probed, one-sided h={h:g}",
                   expected_slopes=f"-+{ks.right_slope:.9g}")


def envelope_check(spec: SolutionSpec, config: VerifyConfig) -> CheckReport:
    """Damped wave == envelope * undamped wave, to rounding."""
    assert spec.damping is not None
    grid = default_grid(spec, config)
    t = guarded_times(spec, grid)
    y = solution_value(spec, t)
    x = solution_value(spec.undamped, t)
    env = duffing.damped_transform(spec.damping.beta_poly, spec.damping.c, t)
    dev = np.abs(y - env * x)
    j = int(np.argmax(dev))
    return _report(f"envelope:id={spec.id}", dev[j], t[j], config.envelope_tol,
                   notes="multiplicative damping envelope is exact")


def energy_check(n: int, config: VerifyConfig) -> CheckReport:
    """0.5 v^2 + 0.5 x^2n is conserved along the leaf trajectory."""
    basis = get_basis(n)
    ivp = SecondOrderIVP(lambda t, x, v: -n * x ** (2 * n - 1), x0=0.0, v0=1.0)
    wf = rk_integrate(ivp, 10.0 * 2.0 * basis.pi_n, tol=config.rk_tol)
    energy = 0.5 * wf.v ** 2 + 0.5 * wf.x ** (2 * n)
    dev = np.abs(energy - 0.5)
    j = int(np.argmax(dev))
    return _report(f"energy:n={n}", dev[j], wf.t[j], config.energy_tol,
                   notes=f"ten periods, {wf.meta.steps} steps")


def constants_check(config: VerifyConfig) -> list[CheckReport]:
    """Computed constants against the three printed decimals.

    The reference tables display truncated digits for some entries (the
    circle constant appears as 3.141...), so a value counts as agreeing
    when it is either within half a last-digit unit of the printed value
    or the printed value is its correct three-decimal truncation.  The
    reported number is the distance to that digit-correct window.
    """
    reports = []
    worst, loc = 0.0, 0
    raw = {}
    for n, (pi_ref, eta_ref, zeta_ref) in CONSTANTS_TABLE.items():
        b = get_basis(n)
        for name, got, ref in (("pi", b.pi_n, pi_ref), ("eta", b.eta_n, eta_ref),
                               ("zeta", b.zeta_n, zeta_ref)):
            if ref is None:
                continue
            raw[f"{name}_{n}"] = abs(got - ref)
            inside_round = abs(got - ref) <= config.constants_tol
            inside_trunc = ref <= got < ref + 1e-3
            err = 0.0 if (inside_round or inside_trunc) else \
                min(abs(got - ref), abs(got - (ref + 1e-3)))
            if err > worst:
                worst, loc = err, n
    reports.append(_report(
        "constants:table", worst, loc, config.constants_tol,
        notes="digit-correct vs the printed three decimals for n in {1, 2, 3}",
        **{f"raw_dev_{k}": v for k, v in raw.items()},
    ))
    reports.append(_report("constants:circle", abs(get_basis(1).pi_n - math.pi),
                           1, config.circle_tol,
                           notes="half period at n = 1 is the circle constant"))
    return reports


def negative_control_check(spec: SolutionSpec, config: VerifyConfig) -> CheckReport:
    """Perturbing any one coefficient by 3% must break the residual test.

    Reported in normalized units: worst_residual is the residual tolerance
    divided by the smallest perturbed residual, so <= 1 passes (every
    perturbation pushed the residual at least one tolerance up).
    """
    grid = default_grid(spec, config)
    base = solution_ode(spec)
    t = guarded_times(spec, grid)
    min_broken = math.inf
    which = ""
    for name in ("alpha1", "alpha2", "alpha3"):
        value = getattr(base, name)
        if value == 0.0:
            continue
        coeffs = replace(base, **{name: value * (1.0 + config.perturbation)})
        res = float(np.max(np.abs(ode_residual(spec, t, coeffs=coeffs))))
        if res < min_broken:
            min_broken, which = res, name
    ratio = config.residual_tol / min_broken if min_broken > 0 else math.inf
    return _report(
        f"negative_control:id={spec.id}", ratio, 0.0, 1.0,
        notes=(f"3% perturbation must push the residual above tolerance; "
               f"weakest coefficient {which} gave {min_broken:.3g}"),
        min_perturbed_residual=min_broken,
    )


# --------------------------------------------------------------------------
# the full battery
# --------------------------------------------------------------------------

def run_suite(config: VerifyConfig | None = None) -> list[CheckReport]:
    """Execute the whole battery in a fixed, deterministic order.

    With the default config this covers all 28 solution instances (14
    undamped + 14 damped), the identities, and the constants tables; a
    coverage assertion guards against silently skipped checks.
    """
    config = config or VerifyConfig()
    reports: list[CheckReport] = []

    reports.extend(constants_check(config))
    reports.append(verify_identities(get_basis(1), tol=config.base_case_tol))
    reports.append(verify_identities(get_basis(2), tol=config.identity_tol))

    damping = config.damping()
    for i in sorted(config.ids):
        spec = SolutionSpec(i, config.A, config.omega)
        if config.include_undamped:
            reports.append(residual_check(spec, default_grid(spec, config),
                                          config.residual_tol))
            reports.append(agreement_check(spec, config))
            if i in DIVERGENT_IDS:
                reports.append(blowup_location_check(spec, config))
            reports.append(period_check(spec, config))
            reports.append(bounds_check(spec, config))
            if i in KINKED_IDS:
                reports.append(kink_check(spec, config))
            reports.append(negative_control_check(spec, config))
        if config.include_damped:
            dspec = SolutionSpec(i, config.A, config.omega, damping=damping)
            reports.append(residual_check(
                dspec, default_grid(dspec, config), config.residual_tol,
                label=f"residual:id={i}:damped"))
            reports.append(envelope_check(dspec, config))

    for n in (1, 2, 3):
        reports.append(energy_check(n, config))

    _assert_coverage(reports, config)
    return reports


def _assert_coverage(reports: Iterable[CheckReport], config: VerifyConfig) -> None:
    have = {r.check_id for r in reports}
    expected = {"constants:table", "constants:circle", "base_case:n=1",
                "identity:n=2"}
    for i in sorted(config.ids):
        if config.include_undamped:
            expected |= {f"residual:id={i}", f"agreement:id={i}",
                         f"period:id={i}", f"bounds:id={i}",
                         f"negative_control:id={i}"}
            if i in DIVERGENT_IDS:
                expected.add(f"blowup_location:id={i}")
            if i in KINKED_IDS:
                expected.add(f"kinks:id={i}")
        if config.include_damped:
            expected |= {f"residual:id={i}:damped", f"envelope:id={i}"}
    expected |= {f"energy:n={n}" for n in (1, 2, 3)}
    missing = expected - have
    if missing:
        raise AssertionError(f"coverage hole: checks not run: {sorted(missing)}")


def reports_to_jsonl(reports: Iterable[CheckReport]) -> str:
    return "\n".join(r.to_json() for r in reports) + "\n"


def summary_table(reports: Iterable[CheckReport]) -> str:
    reports = list(reports)
    wide = max(len(r.check_id) for r in reports) + 2
    lines = [f"{'check':<{wide}}{'status':<8}{'worst':>12}  {'tol':>8}  notes"]
    for r in reports:
        lines.append(
            f"{r.check_id:<{wide}}{r.status:<8}{r.worst_residual:>12.3e}  "
            f"{r.tolerance:>8.1e}  {r.notes}"
        )
    n_fail = sum(not r.passed for r in reports)
    lines.append(f"{len(reports)} checks, {n_fail} failed")
    return "\n".join(lines)
