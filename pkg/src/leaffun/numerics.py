"""Numerical engines shared by the rest of the package.

Three independent tools live here:

* :func:`quad_singular` -- adaptive tanh-sinh (double-exponential)
  quadrature.  It tolerates integrable endpoint singularities up to
  inverse-square-root strength and accepts ``+inf`` as the upper limit.
* :func:`invert_monotone` -- safeguarded Newton/bisection inversion of a
  strictly monotone function on a bracket.
* :func:`rk_integrate` -- an adaptive embedded Runge-Kutta 5(4) pair
  (Dormand-Prince coefficients, PI step control, FSAL) for second-order
  initial value problems, with a blow-up stop rule and cubic Hermite
  dense output.

All engines are stateless: every call owns its workspace, so concurrent
independent calls are safe.
"""

from __future__ import annotations

import inspect
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

__all__ = [
    "QuadratureError",
    "BracketError",
    "StepSizeError",
    "quad_singular",
    "invert_monotone",
    "SecondOrderIVP",
    "Waveform",
    "WaveformMeta",
    "rk_integrate",
]


# --------------------------------------------------------------------------
# tanh-sinh quadrature
# --------------------------------------------------------------------------

class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Carries the best value obtained and its error estimate so callers can
    decide whether the partial result is still usable.
    """

    def __init__(self, message: str, best_value: float, err_est: float):
        super().__init__(message)
        self.best_value = best_value
        self.err_est = err_est


# Beyond |z| ~ 5.6 the weight underflows against any integrand the rule is
# rated for (at worst d**-0.5 endpoint growth), so nodes there are dropped.
_TS_ZMAX = 5.6


@lru_cache(maxsize=32)
def ts_nodes(level: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tanh-sinh node table at mesh spacing ``h = 2**-level`` on (0, 1).

    Returns ``(sigma, sigma_c, weight)`` where ``sigma`` is the node measured
    from the left endpoint, ``sigma_c = 1 - sigma`` measured from the right
    endpoint (both evaluated without cancellation), and ``weight`` already
    includes the mesh factor ``h``.  ``sum(w_k * f(a + (b-a)*sigma_k))``
    times ``(b - a)`` approximates the integral over ``[a, b]``.
    """
    h = 2.0 ** (-level)
    k = np.arange(-math.floor(_TS_ZMAX / h), math.floor(_TS_ZMAX / h) + 1)
    z = k * h
    q = math.pi * np.sinh(z)
    # sigma(z) = (1 + tanh(q/2)) / 2 = 1 / (1 + exp(-q)); complement by symmetry
    sigma = 1.0 / (1.0 + np.exp(-q))
    sigma_c = 1.0 / (1.0 + np.exp(q))
    weight = h * (math.pi / 4.0) * np.cosh(z) / np.cosh(q / 2.0) ** 2
    keep = (sigma > 5e-300) & (sigma_c > 5e-300) & (weight > 0.0)
    return sigma[keep], sigma_c[keep], weight[keep]


def _wants_distances(f: Callable) -> bool:
    """True when the integrand accepts (x, dist_left, dist_right)."""
    try:
        params = inspect.signature(f).parameters.values()
    except (TypeError, ValueError):
        return False
    count = 0
    for p in params:
        if p.kind in (p.POSITIONAL_ONLY, p.POSITIONAL_OR_KEYWORD):
            count += 1
        elif p.kind == p.VAR_POSITIONAL:
            return True
    return count >= 3


def quad_singular(
    f: Callable,
    a: float,
    b: float,
    tol: float = 1e-12,
    max_level: int = 11,
) -> tuple[float, float]:
    """Integrate ``f`` over ``[a, b]`` by adaptive tanh-sinh quadrature.

    Parameters
    ----------
    f : callable
        Integrand.  Either ``f(x)`` or ``f(x, dist_a, dist_b)``; the
        three-argument form receives the distances to the interval
        endpoints, computed without cancellation, which lets integrands
        with endpoint singularities stay accurate arbitrarily close to
        the endpoint (``dist_b = inf`` on semi-infinite intervals).
    a, b : float
        Limits.  ``b`` may be ``math.inf``; the interval is then mapped to
        [0, 1) by the rational substitution ``x = a + s/(1-s)``.
    tol : float
        Absolute tolerance.  Refinement stops once two consecutive levels
        agree to ``tol``.
    max_level : int
        Mesh is halved up to ``2**-max_level``.

    Returns
    -------
    (value, err_est) : tuple of float
        ``err_est`` is the last level-to-level difference, reported as-is.

    Raises
    ------
    QuadratureError
        If the level-to-level difference never drops below ``tol``; the
        exception carries the best value and its error estimate.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if b <= a:
        raise ValueError("require b > a")

    pass_dist = _wants_distances(f)

    if math.isinf(b):
        inner, inner_dist = f, pass_dist

        def g(s, ds_left, ds_right):
            # Rational map x = a + s/(1-s).  Nodes with 1-s below 1e-60
            # are dropped: for integrands decaying at least like x**-2
            # (the rating of this rule on semi-infinite intervals) the
            # dropped tail is ~1e-60, and the cap keeps x small enough
            # that naive integrands cannot overflow in x**4-style terms.
            if ds_right < 1e-60:
                return 0.0
            d = s / ds_right          # distance above a, exact near s = 0
            x = a + d
            jac = 1.0 / ds_right ** 2
            fx = inner(x, d, math.inf) if inner_dist else inner(x)
            return fx * jac

        return quad_singular(g, 0.0, 1.0, tol=tol, max_level=max_level)

    span = b - a
    value = math.nan
    err_est = math.inf
    prev = None
    prev_diff = math.inf
    for level in range(3, max_level + 1):
        sigma, sigma_c, w = ts_nodes(level)
        total = 0.0
        if pass_dist:
            for s, sc, wk in zip(sigma, sigma_c, w):
                da = span * s
                db = span * sc
                if da == 0.0 or db == 0.0:
                    continue  # distance underflowed; node is at the endpoint
                total += wk * f(a + da, da, db)
        else:
            for s, wk in zip(sigma, w):
                x = a + span * s
                if x <= a or x >= b:
                    # node rounded onto an endpoint; its weight has decayed
                    # double-exponentially, so dropping it is harmless
                    continue
                total += wk * f(x)
        total *= span
        if not math.isfinite(total):
            raise QuadratureError(
                "integrand produced a non-finite value", total, math.inf
            )
        if prev is not None:
            err_est = abs(total - prev)
            if err_est <= tol or err_est <= 4.0 * abs(total) * np.finfo(float).eps:
                return total, err_est
            if level >= 7 and err_est >= 0.25 * prev_diff and \
                    err_est <= 1e-8 * max(1.0, abs(total)):
                # refinement has hit the rounding floor: next to a
                # singular endpoint a one-argument integrand cannot beat
                # ~sqrt(eps) relative accuracy, so report that floor
                floor = math.sqrt(np.finfo(float).eps) * max(1.0, abs(total))
                return total, max(4.0 * err_est, floor)
            prev_diff = err_est
        prev = total
        value = total
    raise QuadratureError(
        f"tanh-sinh did not converge to tol={tol:g} within level {max_level} "
        f"(best error estimate {err_est:g})",
        value,
        err_est,
    )


# --------------------------------------------------------------------------
# monotone inversion
# --------------------------------------------------------------------------

class BracketError(ValueError):
    """The supplied interval does not bracket the target value."""


def invert_monotone(
    f: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    tol: float = 1e-12,
    fprime: Callable[[float], float] | None = None,
    max_iter: int = 200,
) -> float:
    """Solve ``f(x) = target`` for a strictly monotone ``f`` on ``[lo, hi]``.

    Newton steps (secant when ``fprime`` is not given) are safeguarded by a
    maintained sign-change bracket; any step that leaves the bracket, or a
    vanishing derivative, falls back to bisection.  Returns ``x`` with
    ``|f(x) - target| <= tol`` or, failing that, the midpoint of a bracket
    shrunk to rounding level.
    """
    if not hi > lo:
        raise BracketError("require hi > lo")
    flo = f(lo) - target
    fhi = f(hi) - target
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError(
            f"f({lo!r}) and f({hi!r}) do not bracket target {target!r}"
        )

    x, fx = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    x_prev, fx_prev = (hi, fhi) if x == lo else (lo, flo)
    for _ in range(max_iter):
        if abs(fx) <= tol:
            return x
        if fprime is not None:
            try:
                dfx = fprime(x)
            except (ValueError, ZeroDivisionError, OverflowError):
                dfx = math.nan  # degenerate derivative -> bisect
            step = -fx / dfx if dfx != 0.0 and math.isfinite(dfx) else math.nan
        else:
            denom = fx - fx_prev
            step = -fx * (x - x_prev) / denom if denom != 0.0 else math.nan
        x_new = x + step
        if not (lo < x_new < hi) or not math.isfinite(x_new):
            x_new = 0.5 * (lo + hi)
        f_new = f(x_new) - target
        x_prev, fx_prev = x, fx
        # shrink the bracket around the sign change
        if math.copysign(1.0, f_new) == math.copysign(1.0, flo):
            lo, flo = x_new, f_new
        else:
            hi, fhi = x_new, f_new
        x, fx = x_new, f_new
        if hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, abs(x)):
            return x
    return x


# --------------------------------------------------------------------------
# adaptive Runge-Kutta 5(4) for second-order IVPs
# --------------------------------------------------------------------------

class StepSizeError(RuntimeError):
    """Step size underflowed, typically at a finite-time singularity.

    ``location`` is the time at which progress stalled.
    """

    def __init__(self, message: str, location: float):
        super().__init__(message)
        self.location = location


@dataclass(frozen=True)
class SecondOrderIVP:
    """Initial value problem ``x'' = accel(t, x, v)``, ``x(t0)=x0``, ``x'(t0)=v0``."""

    accel: Callable[[float, float, float], float]
    x0: float
    v0: float
    t0: float = 0.0


@dataclass
class WaveformMeta:
    """Solver statistics for one integration run."""

    steps: int = 0
    rejected: int = 0
    max_err_est: float = 0.0
    blown_up: bool = False
    blowup_time: float | None = None
    reason: str = "reached t_end"


@dataclass
class Waveform:
    """Accepted-step samples ``(t, x, v)`` plus dense cubic Hermite output."""

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    meta: WaveformMeta = field(default_factory=WaveformMeta)

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.t.tolist(), self.x.tolist(), self.v.tolist()))

    def at(self, ts) -> np.ndarray:
        """Interpolate x at times ``ts`` (cubic Hermite between knots)."""
        return self._hermite(ts)[0]

    def velocity_at(self, ts) -> np.ndarray:
        return self._hermite(ts)[1]

    def _hermite(self, ts):
        ts = np.asarray(ts, dtype=float)
        if ts.ndim == 0:
            x, v = self._hermite(ts[None])
            return x[0], v[0]
        if np.any(ts < self.t[0]) or np.any(ts > self.t[-1]):
            raise ValueError("sample time outside the integrated window")
        idx = np.clip(np.searchsorted(self.t, ts, side="right") - 1, 0, len(self.t) - 2)
        t0, t1 = self.t[idx], self.t[idx + 1]
        h = t1 - t0
        s = np.where(h > 0, (ts - t0) / np.where(h > 0, h, 1.0), 0.0)
        x0, x1 = self.x[idx], self.x[idx + 1]
        v0, v1 = self.v[idx], self.v[idx + 1]
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        x = h00 * x0 + h10 * h * v0 + h01 * x1 + h11 * h * v1
        dh00 = 6 * s * (s - 1)
        dh10 = (1 - s) * (1 - 3 * s)
        dh01 = -dh00
        dh11 = s * (3 * s - 2)
        v = np.where(
            h > 0,
            (dh00 * x0 + dh01 * x1) / np.where(h > 0, h, 1.0) + dh10 * v0 + dh11 * v1,
            v0,
        )
        return x, v


# Dormand-Prince 5(4) tableau.  The 5th-order solution is propagated; the
# final row doubles as the first stage of the next step (FSAL).
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_E = (
    35 / 384 - 5179 / 57600,
    0.0,
    500 / 1113 - 7571 / 16695,
    125 / 192 - 393 / 640,
    -2187 / 6784 + 92097 / 339200,
    11 / 84 - 187 / 2100,
    -1 / 40,
)


def _initial_step(accel, t0, x0, v0, t_end, tol):
    """Cheap curvature-based guess, clipped to the window."""
    a0 = accel(t0, x0, v0)
    scale = max(abs(x0), abs(v0), 1.0)
    d1 = max(abs(v0), abs(a0)) / scale
    h = (tol ** 0.2) / max(d1, 1e-4)
    return min(h, 0.1 * (t_end - t0))


def rk_integrate(
    ivp: SecondOrderIVP,
    t_end: float,
    tol: float = 1e-10,
    blowup_cap: float = 1e6,
    max_steps: int = 10_000_000,
) -> Waveform:
    """Integrate a second-order IVP adaptively from ``ivp.t0`` to ``t_end``.

    Per-step local error is held at or below ``tol`` in a mixed
    absolute/relative norm; a PI controller sets the next step.  When
    ``|x|`` exceeds ``blowup_cap`` the run stops early with
    ``meta.blown_up`` set and ``meta.blowup_time`` holding the interpolated
    crossing time.

    Raises
    ------
    StepSizeError
        When the step size underflows before reaching ``t_end`` -- the
        signature of a finite-time pole in the solution.
    """
    if not t_end > ivp.t0:
        raise ValueError("require t_end > t0")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if not blowup_cap > 0.0:
        raise ValueError("blowup_cap must be positive")

    accel = ivp.accel
    t, x, v = ivp.t0, float(ivp.x0), float(ivp.v0)
    ts, xs, vs = [t], [x], [v]
    meta = WaveformMeta()

    n_stages = 7
    kx = [0.0] * n_stages  # stage derivatives of x (= velocities)
    kv = [0.0] * n_stages  # stage derivatives of v (= accelerations)
    kx[0] = v
    kv[0] = accel(t, x, v)

    h = _initial_step(accel, t, x, v, t_end, tol)
    err_prev = 1.0
    safety, min_fac, max_fac = 0.9, 0.2, 5.0
    alpha, beta_pi = 0.7 / 5.0, 0.4 / 5.0

    while t < t_end:
        h = min(h, t_end - t)
        if h <= 16.0 * np.finfo(float).eps * max(abs(t), 1.0):
            raise StepSizeError(
                f"step size underflow at t={t:.17g} (solution likely has a pole here)",
                t,
            )
        if meta.steps + meta.rejected > max_steps:
            raise StepSizeError(f"exceeded {max_steps} steps at t={t:.17g}", t)

        bad = False
        for i in range(1, n_stages):
            xi = x
            vi = v
            for j, aij in enumerate(_DP_A[i]):
                if aij != 0.0:
                    xi += h * aij * kx[j]
                    vi += h * aij * kv[j]
            kx[i] = vi
            kv[i] = accel(t + _DP_C[i] * h, xi, vi)
            if not (math.isfinite(kv[i]) and math.isfinite(xi)):
                bad = True
                break

        if not bad:
            x_new = xi  # stage 7 abscissa equals the 5th-order solution (FSAL)
            v_new = vi
            ex = h * math.fsum(e * k for e, k in zip(_DP_E, kx))
            ev = h * math.fsum(e * k for e, k in zip(_DP_E, kv))
            sx = tol + tol * max(abs(x), abs(x_new))
            sv = tol + tol * max(abs(v), abs(v_new))
            err = math.sqrt(0.5 * ((ex / sx) ** 2 + (ev / sv) ** 2))
        else:
            err = math.inf

        if err <= 1.0:
            t += h
            x, v = x_new, v_new
            kx[0], kv[0] = kx[6], kv[6]
            ts.append(t)
            xs.append(x)
            vs.append(v)
            meta.steps += 1
            meta.max_err_est = max(meta.max_err_est, err * tol)
            if abs(x) > blowup_cap:
                meta.blown_up = True
                meta.blowup_time = _cap_crossing(
                    ts[-2], xs[-2], vs[-2], t, x, v, blowup_cap
                )
                meta.reason = f"|x| exceeded {blowup_cap:g}"
                break
            fac = safety * err ** (-alpha) * err_prev ** beta_pi if err > 0 else max_fac
            err_prev = max(err, 1e-10)
        else:
            meta.rejected += 1
            fac = max(min_fac, safety * err ** (-0.2)) if math.isfinite(err) else min_fac
            fac = min(fac, 1.0)
        h *= min(max_fac, max(min_fac, fac))

    return Waveform(np.array(ts), np.array(xs), np.array(vs), meta)


def _cap_crossing(t0, x0, v0, t1, x1, v1, cap):
    """Time at which |x| first reaches ``cap`` on one Hermite segment."""
    seg = Waveform(np.array([t0, t1]), np.array([x0, x1]), np.array([v0, v1]))
    lo, hi = t0, t1
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if abs(float(seg.at(mid))) >= cap:
            hi = mid
        else:
            lo = mid
        if hi - lo <= np.finfo(float).eps * max(abs(hi), 1.0):
            break
    return 0.5 * (lo + hi)
