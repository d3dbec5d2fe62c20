"""Leaf functions and hyperbolic leaf functions of integer basis n.

The four families are defined implicitly:

* ``sleaf_n`` solves x'' = -n x^(2n-1) with x(0)=0, x'(0)=1 (odd, periodic
  with period 2*pi_n);
* ``cleaf_n`` solves the same equation with x(0)=1, x'(0)=0 (even);
* ``sleafh_n`` solves x'' = +n x^(2n-1) with x(0)=0, x'(0)=1 (odd,
  monotone; for n >= 2 it escapes to infinity at |t| = zeta_n);
* ``cleafh_n`` solves x'' = +n x^(2n-1) with x(0)=1, x'(0)=0 (even; for
  n >= 2 it has poles at odd multiples of eta_n).

Evaluation reduces the argument to a fundamental branch and then inverts
the defining integral (arcsleaf and friends) with safeguarded Newton
iteration on tanh-sinh quadrature values.  The half-period pi_n, the pole
spacing eta_n and the escape time zeta_n are computed once per basis by
singular-endpoint quadrature and cached on the immutable :class:`Basis`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .numerics import quad_singular, ts_nodes

__all__ = [
    "LeafKind",
    "Basis",
    "BranchInfo",
    "DomainError",
    "make_basis",
    "get_basis",
    "value",
    "value_and_gap",
    "derivative",
    "second_derivative",
    "branch_of",
    "inverse",
    "POLE_GUARD",
]

# Arguments closer than this (in t) to a cleafh pole are rejected rather
# than silently producing astronomically large values.
POLE_GUARD = 1e-8

# Mesh level of the fixed tanh-sinh table used inside the Newton inversion;
# 2**-5 resolves every integrand family here to ~1e-14 absolute in t
# (checked in tests against the adaptive engine).
_LEVEL = 5

_NEWTON_TOL = 1e-13
_MAX_NEWTON = 90


class LeafKind(Enum):
    SLEAF = "sleaf"
    CLEAF = "cleaf"
    SLEAFH = "sleafh"
    CLEAFH = "cleafh"


class DomainError(ValueError):
    """Argument outside a leaf function's domain.

    Attributes
    ----------
    location : float
        The nearest pole or domain boundary (in t).
    """

    def __init__(self, message: str, location: float):
        super().__init__(message)
        self.location = location


@dataclass(frozen=True)
class Basis:
    """Immutable bundle of a basis integer and its characteristic constants.

    ``eta_n`` (pole spacing of cleafh) and ``zeta_n`` (escape time of
    sleafh) are ``None`` exactly for n = 1, where the corresponding
    integrals diverge and the hyperbolic functions are entire.
    """

    n: int
    pi_n: float
    eta_n: float | None
    zeta_n: float | None
    tol: float

    @property
    def half_pi_n(self) -> float:
        return 0.5 * self.pi_n


@dataclass(frozen=True)
class BranchInfo:
    """Where an argument landed in the branch tables.

    ``m`` is the integer branch index, ``row`` the table row (1-4),
    ``sign`` the sign of dx/dt on that row, and ``local_t`` the offset of t
    from the row's starting point, so ``branch_start + local_t``
    reconstructs t exactly.
    """

    m: int
    row: int
    sign: int
    local_t: float
    branch_start: float


# --------------------------------------------------------------------------
# integrand families (all mapped to [0, 1]; distances supplied stably)
# --------------------------------------------------------------------------

def _ipow(v, k: int):
    """v**k for integer k by binary exponentiation (faster than np.power)."""
    if k == 0:
        return np.ones_like(v)
    if k < 0:
        return 1.0 / _ipow(v, -k)
    result = None
    base = v
    while k:
        if k & 1:
            result = base if result is None else result * base
        k >>= 1
        if k:
            base = base * base
    return result


def _one_minus_pow(v_from_right: np.ndarray, two_n: int) -> np.ndarray:
    """1 - (1-d)**two_n, accurate for d anywhere in [0, 1]."""
    d = np.asarray(v_from_right, dtype=float)
    out = np.empty_like(d)
    small = d < 0.5
    out[small] = -np.expm1(two_n * np.log1p(-d[small]))
    out[~small] = 1.0 - (1.0 - d[~small]) ** two_n
    return out


def _arc_head(n, x):
    """integral of (1-v^2n)^(-1/2) over [0, x], vectorized in x (x <= ~0.8)."""
    sigma, _, w = ts_nodes(_LEVEL)
    v = np.multiply.outer(x, sigma)
    f = 1.0 / np.sqrt(1.0 - _ipow(v, 2 * n))
    return np.asarray(x) * (f @ w)


def _arc_tail_g(n, g):
    """integral of (1-v^2n)^(-1/2) over [1-g, 1] (singular right endpoint).

    Parametrized by the gap g so the crest region keeps full relative
    precision; g may be arbitrarily small.
    """
    sigma, sigma_c, w = ts_nodes(_LEVEL)
    g = np.asarray(g)
    d = np.multiply.outer(g, sigma_c)  # distance below 1
    with np.errstate(divide="ignore", invalid="ignore"):
        f = 1.0 / np.sqrt(_one_minus_pow(d, 2 * n))
        f = np.where(np.isfinite(f), f, 0.0)
    return g * (f @ w)


def _arch_gamma(n, g):
    """integral of (v^2n-1)^(-1/2) over [1, 1+g] (singular left endpoint).

    The cleafh trough region in the gap variable g = x - 1.
    """
    sigma, _, w = ts_nodes(_LEVEL)
    g = np.asarray(g)
    da = np.multiply.outer(g, sigma)  # distance above 1
    with np.errstate(divide="ignore", invalid="ignore"):
        f = 1.0 / np.sqrt(np.expm1(2 * n * np.log1p(da)))
        f = np.where(np.isfinite(f), f, 0.0)
    return g * (f @ w)


def _arch_rec_minus(n, w_up):
    """integral of v^(n-2) (1-v^2n)^(-1/2) over [w_up, 1].

    Equals the inverse of cleafh through v = 1/x; singular at v = 1,
    and for n = 1 additionally steep near v = w_up (handled by the
    double-exponential clustering).  Node positions are taken from the
    nearer endpoint so neither the power factor nor the root loses digits.
    """
    sigma, sigma_c, w = ts_nodes(_LEVEL)
    w_up = np.asarray(w_up)
    span = 1.0 - w_up
    d = np.multiply.outer(span, sigma_c)            # exact distance below 1
    v = np.multiply.outer(span, sigma) + w_up[..., None]  # exact above w_up
    with np.errstate(divide="ignore", over="ignore"):
        f = _ipow(v, n - 2) / np.sqrt(_one_minus_pow(d, 2 * n))
        f = np.where(np.isfinite(f), f, 0.0)
    return span * (f @ w)


def _arch_head_plus(n, x):
    """integral of (1+v^2n)^(-1/2) over [0, x] (smooth)."""
    sigma, _, w = ts_nodes(_LEVEL)
    v = np.multiply.outer(x, sigma)
    f = 1.0 / np.sqrt(1.0 + _ipow(v, 2 * n))
    return np.asarray(x) * (f @ w)


def _arch_rec_plus(n, w_up):
    """integral of v^(n-2) (1+v^2n)^(-1/2) over [0, w_up] (n >= 2, smooth)."""
    sigma, _, w = ts_nodes(_LEVEL)
    v = np.multiply.outer(w_up, sigma)
    f = _ipow(v, n - 2) / np.sqrt(1.0 + _ipow(v, 2 * n))
    return np.asarray(w_up) * (f @ w)


def _arch_tail_plus_n1(x):
    """integral of (1+v^2)^(-1/2) over [1, x]; n = 1 tail (no finite limit)."""
    sigma, _, w = ts_nodes(_LEVEL)
    span = np.asarray(x) - 1.0
    v = 1.0 + np.multiply.outer(span, sigma)
    f = 1.0 / np.sqrt(1.0 + v ** 2)
    return span * (f @ w)


# --------------------------------------------------------------------------
# vectorized safeguarded Newton
# --------------------------------------------------------------------------

def _newton_vec(func, dfunc, target, lo, hi, seed):
    """Solve func(x) = target elementwise; func increasing on [lo, hi].

    Newton from ``seed`` with a maintained bisection bracket.  All inputs
    are broadcastable arrays; returns an array shaped like ``target``.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    x = np.clip(np.broadcast_to(np.asarray(seed, dtype=float), target.shape).copy(), lo, hi)
    active = np.ones(target.shape, dtype=bool)
    for _ in range(_MAX_NEWTON):
        resid = func(x[active]) - target[active]
        done = np.abs(resid) <= _NEWTON_TOL
        # tighten brackets with the fresh residuals
        ia = np.flatnonzero(active)
        xa = x[active]
        lo_a, hi_a = lo[active], hi[active]
        neg = resid < 0
        lo_a = np.where(neg, xa, lo_a)
        hi_a = np.where(~neg, xa, hi_a)
        lo[ia], hi[ia] = lo_a, hi_a
        if done.all():
            active[ia[done]] = False
            break
        step = resid / dfunc(xa)
        x_new = xa - step
        bad = ~np.isfinite(x_new) | (x_new <= lo_a) | (x_new >= hi_a)
        x_new = np.where(bad, 0.5 * (lo_a + hi_a), x_new)
        x_new = np.where(done, xa, x_new)
        x[ia] = x_new
        active[ia[done]] = False
        tiny = (hi - lo) <= 4.0 * np.finfo(float).eps * np.maximum(1.0, np.abs(x))
        active &= ~tiny
        if not active.any():
            break
    return x


# --------------------------------------------------------------------------
# principal-branch solvers
# --------------------------------------------------------------------------

def _leaf_quarter(basis: Basis, tau):
    """sleaf_n on the rising quarter branch: tau in [0, pi_n/2].

    Returns ``(x, gap)`` with gap = 1 - x solved to full relative
    precision near the crest (where x itself saturates in doubles).
    """
    n = basis.n
    tau = np.asarray(tau, dtype=float)
    quarter = basis.half_pi_n
    x = np.empty_like(tau)
    gap = np.empty_like(tau)

    head = tau <= 0.5 * quarter
    if head.any():
        th = tau[head]
        xh = _newton_vec(
            lambda xx: _arc_head(n, xx),
            lambda xx: 1.0 / np.sqrt(1.0 - xx ** (2 * n)),
            th,
            0.0,
            0.9,
            np.minimum(th, 0.85),
        )
        x[head] = xh
        gap[head] = 1.0 - xh
    if (~head).any():
        # solve the complementary integral in the gap; g ~ n*dt^2/2 at crest
        dt = quarter - tau[~head]
        seed = np.clip(0.5 * n * dt * dt, 0.0, 0.6)
        g = _newton_vec(
            lambda gg: _arc_tail_g(n, gg),
            lambda gg: 1.0 / np.sqrt(np.maximum(_one_minus_pow(gg, 2 * n), 1e-300)),
            dt,
            0.0,
            0.75,
            seed,
        )
        x[~head] = 1.0 - g
        gap[~head] = g
    return x, gap


def _cleafh_principal(basis: Basis, tau):
    """cleafh_n on its rising branch: tau in [0, eta_n) -> x >= 1.

    Returns ``(x, gap)`` with gap = x - 1.  Near the trough the inversion
    runs directly in the gap; further out it runs in the reciprocal
    w = 1/x, where it stays well conditioned all the way to the pole.
    """
    n = basis.n
    tau = np.asarray(tau, dtype=float)
    split = 0.8 if basis.eta_n is None else min(0.5 * basis.eta_n, 0.8)
    x = np.empty_like(tau)
    gap = np.empty_like(tau)

    near = tau <= split
    if near.any():
        tn = tau[near]
        g = _newton_vec(
            lambda gg: _arch_gamma(n, gg),
            lambda gg: 1.0 / np.sqrt(np.maximum(
                np.expm1(2 * n * np.log1p(gg)), 1e-300)),
            tn,
            0.0,
            3.0,
            np.clip(0.5 * n * tn * tn, 0.0, 2.0),
        )
        x[near] = 1.0 + g
        gap[near] = g
    if (~near).any():
        tf = tau[~near]
        if basis.eta_n is not None:
            # near the pole: tau -> eta_n, w ~ ((n-1)(eta_n - tau))^(1/(n-1))
            room = np.maximum(basis.eta_n - tf, 1e-300)
            seed = ((n - 1) * room) ** (1.0 / (n - 1)) if n > 1 \
                else np.full_like(tf, 0.5)
        else:
            seed = np.exp(-tf)  # n = 1: x = cosh, w ~ 2 e^-tau for large tau
        seed = np.clip(seed, 1e-300, 1.0)
        w = _newton_vec(
            lambda ww: -_arch_rec_minus(n, ww),
            lambda ww: ww ** (n - 2) / np.sqrt(np.maximum(1.0 - ww ** (2 * n), 1e-300)),
            -tf,
            np.minimum(seed * 1e-2, 1e-12),
            1.0,
            seed,
        )
        xf = 1.0 / w
        x[~near] = xf
        gap[~near] = xf - 1.0  # x >= ~1.5 here, no cancellation
    return x, gap


def _sleafh_principal(basis: Basis, tau):
    """sleafh_n for tau in [0, zeta_n) -> x >= 0."""
    n = basis.n
    tau = np.asarray(tau, dtype=float)
    t1 = float(_arch_head_plus(n, np.array(1.0)))
    x = np.empty_like(tau)
    head = tau <= t1
    if head.any():
        th = tau[head]
        x[head] = _newton_vec(
            lambda xx: _arch_head_plus(n, xx),
            lambda xx: 1.0 / np.sqrt(1.0 + xx ** (2 * n)),
            th,
            0.0,
            1.0,
            np.minimum(th * 1.2, 1.0),
        )
    if (~head).any():
        tt = tau[~head]
        if n == 1:
            # unbounded tail: widen the upper bracket past the target
            hi = np.maximum(2.0 * np.sinh(tt), 4.0)
            x[~head] = _newton_vec(
                lambda xx: _arch_tail_plus_n1(xx),
                lambda xx: 1.0 / np.sqrt(1.0 + xx ** 2),
                tt - t1,
                1.0,
                hi,
                np.sinh(tt),
            )
        else:
            # remaining tail in the reciprocal variable w = 1/x:
            # integral_0^w v^(n-2)(1+v^2n)^(-1/2) dv = zeta_n - tau
            gap = np.maximum(basis.zeta_n - tt, 1e-300)
            seed = np.clip(((n - 1) * gap) ** (1.0 / (n - 1)), 1e-300, 1.0)
            w = _newton_vec(
                lambda ww: _arch_rec_plus(n, ww),
                lambda ww: ww ** (n - 2) / np.sqrt(1.0 + ww ** (2 * n)),
                gap,
                np.minimum(seed * 1e-2, 1e-12),
                1.0,
                seed,
            )
            x[~head] = 1.0 / w
    return x


# --------------------------------------------------------------------------
# constants and basis construction
# --------------------------------------------------------------------------

def make_basis(n: int, tol: float = 1e-12) -> Basis:
    """Compute the constants pi_n, eta_n, zeta_n and freeze them in a Basis.

    ``pi_n = 2 * integral_0^1 (1-u^2n)^(-1/2) du`` is the half period of
    the periodic families; ``eta_n = integral_1^inf (u^2n-1)^(-1/2) du``
    the pole spacing of cleafh; ``zeta_n = integral_0^inf (1+u^2n)^(-1/2)
    du`` the escape time of sleafh.  The latter two diverge for n = 1 and
    are stored as ``None``.

    Raises ``ValueError`` for invalid n or tol and propagates
    ``QuadratureError`` (with the achieved error estimate) if the
    quadrature cannot reach ``tol``.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise ValueError(f"basis must be a positive integer, got {n!r}")
    if not 0.0 < tol <= 1e-6:
        raise ValueError(f"tol must be in (0, 1e-6], got {tol!r}")
    n = int(n)
    two_n = 2 * n

    def leaf_integrand(u, da, db):
        if db < 0.5:
            return 1.0 / math.sqrt(-math.expm1(two_n * math.log1p(-db)))
        return 1.0 / math.sqrt(1.0 - u ** two_n)

    pi_n, _ = quad_singular(leaf_integrand, 0.0, 1.0, tol=0.5 * tol)
    pi_n *= 2.0

    eta_n = zeta_n = None
    if n > 1:
        def pole_integrand(u, da, db):
            if da > 1e5:
                return u ** float(-n)  # asymptotic tail, exact to double precision
            return 1.0 / math.sqrt(math.expm1(two_n * math.log1p(da)))

        eta_n, _ = quad_singular(pole_integrand, 1.0, math.inf, tol=tol)

        def escape_integrand(u):
            if u > 1e5:
                return u ** (-n)
            return 1.0 / math.sqrt(1.0 + u ** two_n)

        zeta_n, _ = quad_singular(escape_integrand, 0.0, math.inf, tol=tol)

    return Basis(n=n, pi_n=pi_n, eta_n=eta_n, zeta_n=zeta_n, tol=tol)


@lru_cache(maxsize=None)
def get_basis(n: int) -> Basis:
    """Memoized ``make_basis(n)`` at the default tolerance."""
    return make_basis(n)


# --------------------------------------------------------------------------
# branch reduction
# --------------------------------------------------------------------------

def _check_domain(kind: LeafKind, basis: Basis, t) -> None:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if kind is LeafKind.SLEAFH and basis.zeta_n is not None:
        out = np.abs(t) >= basis.zeta_n
        if out.any():
            bad = float(t[out].flat[0])
            edge = math.copysign(basis.zeta_n, bad)
            raise DomainError(
                f"sleafh_{basis.n} is only defined on (-{basis.zeta_n:.12g}, "
                f"{basis.zeta_n:.12g}); got t={bad:.12g}",
                edge,
            )
    if kind is LeafKind.CLEAFH and basis.eta_n is not None:
        eta = basis.eta_n
        # poles sit at odd multiples of eta_n
        k = np.round((t - eta) / (2.0 * eta))
        pole = eta + 2.0 * eta * k
        near = np.abs(t - pole) <= POLE_GUARD
        if near.any():
            loc = float(pole[near].flat[0])
            raise DomainError(
                f"cleafh_{basis.n} has a pole at t={loc:.12g}; "
                f"argument is inside the {POLE_GUARD:g} guard band",
                loc,
            )


def _reduce_sleaf(basis: Basis, t):
    """Map t to (row, quarter-phase tau, sign of x, sign of dx/dt)."""
    two_pi = 2.0 * basis.pi_n
    tau = np.mod(t, two_pi)
    row = np.minimum((tau // basis.half_pi_n).astype(int), 3)
    quarter = np.choose(
        row,
        [
            tau,
            basis.pi_n - tau,
            tau - basis.pi_n,
            two_pi - tau,
        ],
    )
    xsign = np.where(row >= 2, -1, 1)
    dsign = np.where((row == 0) | (row == 3), 1, -1)
    return row, np.clip(quarter, 0.0, basis.half_pi_n), xsign, dsign


def _reduce_cleaf(basis: Basis, t):
    two_pi = 2.0 * basis.pi_n
    tau = np.mod(t, two_pi)
    row = np.minimum((tau // basis.half_pi_n).astype(int), 3)
    quarter = np.choose(
        row,
        [
            basis.half_pi_n - tau,
            tau - basis.half_pi_n,
            1.5 * basis.pi_n - tau,
            tau - 1.5 * basis.pi_n,
        ],
    )
    xsign = np.where((row == 1) | (row == 2), -1, 1)
    dsign = np.where(row <= 1, -1, 1)
    return row, np.clip(quarter, 0.0, basis.half_pi_n), xsign, dsign


def _reduce_cleafh(basis: Basis, t):
    """Map t to (cell, principal phase in [0, eta), sign of x, sign of dx/dt)."""
    if basis.eta_n is None:
        tau = np.abs(np.asarray(t, dtype=float))
        cell = np.zeros(tau.shape, dtype=int)
        return cell, tau, np.ones_like(cell), np.where(np.asarray(t) >= 0, 1, -1)
    eta = basis.eta_n
    tau4 = np.mod(t, 4.0 * eta)
    cell = np.minimum((tau4 // eta).astype(int), 3)
    principal = np.choose(
        cell,
        [
            tau4,
            2.0 * eta - tau4,
            tau4 - 2.0 * eta,
            4.0 * eta - tau4,
        ],
    )
    xsign = np.where((cell == 1) | (cell == 2), -1, 1)
    dsign = np.where((cell == 0) | (cell == 2), 1, -1) * xsign
    return cell, np.clip(principal, 0.0, eta), xsign, dsign


# --------------------------------------------------------------------------
# public evaluation API
# --------------------------------------------------------------------------

def _dispatch(kind: LeafKind, basis: Basis, t: np.ndarray):
    """Return (x, gap, dsign) arrays for in-domain t.

    gap is the exact distance of |x| from the reference level: 1 - |x| for
    the periodic kinds, |x| - 1 for cleafh, and None for sleafh (which has
    no crest).
    """
    if kind is LeafKind.SLEAF:
        _, quarter, xsign, dsign = _reduce_sleaf(basis, t)
        q, gap = _leaf_quarter(basis, quarter)
        return xsign * q, gap, dsign
    if kind is LeafKind.CLEAF:
        _, quarter, xsign, dsign = _reduce_cleaf(basis, t)
        q, gap = _leaf_quarter(basis, quarter)
        return xsign * q, gap, dsign
    if kind is LeafKind.CLEAFH:
        _, principal, xsign, dsign = _reduce_cleafh(basis, t)
        p, gap = _cleafh_principal(basis, principal)
        return xsign * p, gap, dsign
    if kind is LeafKind.SLEAFH:
        tau = np.abs(t)
        xsign = np.where(t >= 0, 1, -1)
        return xsign * _sleafh_principal(basis, tau), None, np.ones(t.shape, dtype=int)
    raise TypeError(f"unknown kind {kind!r}")


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, arr.ndim == 0


def value(kind: LeafKind, basis: Basis, t):
    """Evaluate the leaf function at ``t`` (scalar or array_like).

    Raises :class:`DomainError` outside sleafh's interval or inside a
    cleafh pole guard band; the exception names the offending location.
    """
    arr, scalar = _as_array(t)
    _check_domain(kind, basis, arr)
    x, _, _ = _dispatch(kind, basis, np.atleast_1d(arr))
    return float(x[0]) if scalar else x.reshape(arr.shape)


def value_and_gap(kind: LeafKind, basis: Basis, t):
    """Value plus the exact crest gap: (x, 1 - |x|) for the periodic kinds,
    (x, |x| - 1) for cleafh.

    The gap keeps full relative precision where |x| saturates against its
    extreme in double precision, which composite expressions such as
    sqrt(1 - x^2) need.  Not defined for sleafh (no crest).
    """
    if kind is LeafKind.SLEAFH:
        raise ValueError("sleafh has no crest; value_and_gap is undefined")
    arr, scalar = _as_array(t)
    _check_domain(kind, basis, arr)
    x, gap, _ = _dispatch(kind, basis, np.atleast_1d(arr))
    if scalar:
        return float(x[0]), float(gap[0])
    return x.reshape(arr.shape), gap.reshape(arr.shape)


def derivative(kind: LeafKind, basis: Basis, t):
    """dx/dt of the leaf function, sign taken from the branch tables.

    Periodic families: dx/dt = sign * sqrt(1 - x^2n).  Hyperbolic:
    sleafh has dx/dt = +sqrt(1 + x^2n); cleafh has
    dx/dt = sign * sqrt(x^2n - 1).
    """
    arr, scalar = _as_array(t)
    _check_domain(kind, basis, arr)
    x, gap, dsign = _dispatch(kind, basis, np.atleast_1d(arr))
    two_n = 2 * basis.n
    if kind in (LeafKind.SLEAF, LeafKind.CLEAF):
        d = dsign * np.sqrt(_one_minus_pow(gap, two_n))
    elif kind is LeafKind.SLEAFH:
        d = np.sqrt(1.0 + x ** two_n)
    else:
        d = dsign * np.sqrt(np.expm1(two_n * np.log1p(gap)))
    return float(d[0]) if scalar else d.reshape(arr.shape)


def second_derivative(kind: LeafKind, basis: Basis, t):
    """d2x/dt2 from the defining equation: -+ n x^(2n-1)."""
    x = value(kind, basis, t)
    sgn = -1.0 if kind in (LeafKind.SLEAF, LeafKind.CLEAF) else 1.0
    return sgn * basis.n * x ** (2 * basis.n - 1)


def branch_of(kind: LeafKind, basis: Basis, t: float) -> BranchInfo:
    """Locate a scalar argument in the branch tables of its kind."""
    arr, _ = _as_array(t)
    _check_domain(kind, basis, arr)
    tf = float(arr)
    if kind in (LeafKind.SLEAF, LeafKind.CLEAF):
        two_pi = 2.0 * basis.pi_n
        m = math.floor(tf / two_pi) + 1
        tau = tf - (m - 1) * two_pi
        row = min(int(tau // basis.half_pi_n), 3)
        start = (m - 1) * two_pi + row * basis.half_pi_n
        if kind is LeafKind.SLEAF:
            dsign = 1 if row in (0, 3) else -1
        else:
            dsign = -1 if row in (0, 1) else 1
        return BranchInfo(m=m, row=row + 1, sign=dsign, local_t=tf - start,
                          branch_start=start)
    if kind is LeafKind.SLEAFH:
        return BranchInfo(m=0, row=1, sign=1, local_t=tf, branch_start=0.0)
    # cleafh rows per the table: (2) [4m eta, (4m+1) eta), (3) ((4m+1) eta,
    # (4m+2) eta], (4) [(4m+2) eta, (4m+3) eta), (1) ((4m-1) eta, 4m eta]
    if basis.eta_n is None:
        row = 2 if tf >= 0 else 1
        return BranchInfo(m=0, row=row, sign=1 if tf >= 0 else -1,
                          local_t=tf, branch_start=0.0)
    eta = basis.eta_n
    q = math.floor(tf / eta)
    tau = tf - q * eta
    rem = q % 4
    if rem == 0:
        m, row, dsign = q // 4, 2, 1
    elif rem == 1:
        m, row, dsign = (q - 1) // 4, 3, 1
    elif rem == 2:
        m, row, dsign = (q - 2) // 4, 4, -1
    else:
        m, row, dsign = (q + 1) // 4, 1, -1
    start = q * eta
    return BranchInfo(m=m, row=row, sign=dsign, local_t=tf - start, branch_start=start)


_PRINCIPAL_RANGE = {
    LeafKind.SLEAF: "0 <= x <= 1",
    LeafKind.CLEAF: "0 <= x <= 1",
    LeafKind.SLEAFH: "x >= 0",
    LeafKind.CLEAFH: "x >= 1",
}


def inverse(kind: LeafKind, basis: Basis, x: float) -> float:
    """Principal inverse: the t in the fundamental branch with value x.

    Computed by direct quadrature of the defining integral.  Principal
    ranges: arcsleaf/arccleaf need 0 <= x <= 1 (t in [0, pi_n/2]);
    arcsleafh needs x >= 0; arccleafh needs x >= 1.
    """
    x = float(x)
    n = basis.n
    two_n = 2 * n
    tol = basis.tol

    def range_error():
        return ValueError(
            f"{kind.value}_{n}: inverse needs {_PRINCIPAL_RANGE[kind]}, got x={x!r}"
        )

    if kind in (LeafKind.SLEAF, LeafKind.CLEAF):
        if not 0.0 <= x <= 1.0:
            raise range_error()

        def f_to_one(u, da, db):
            # interval ends at the u = 1 singularity; db is exact there
            if db < 0.5:
                return 1.0 / math.sqrt(-math.expm1(two_n * math.log1p(-db)))
            return 1.0 / math.sqrt(1.0 - u ** two_n)

        if kind is LeafKind.SLEAF:
            if x == 0.0:
                return 0.0
            if x >= 0.7:
                tail = 0.0 if x == 1.0 else quad_singular(f_to_one, x, 1.0, tol=tol)[0]
                return basis.half_pi_n - tail
            return quad_singular(
                lambda u: 1.0 / math.sqrt(1.0 - u ** two_n), 0.0, x, tol=tol
            )[0]
        if x == 1.0:
            return 0.0
        val, _ = quad_singular(f_to_one, x, 1.0, tol=tol)
        return val

    if kind is LeafKind.SLEAFH:
        if x < 0.0:
            raise range_error()
        if x == 0.0:
            return 0.0

        def f(u):
            return 1.0 / math.sqrt(1.0 + u ** two_n)

        val, _ = quad_singular(f, 0.0, x, tol=tol)
        return val

    if x < 1.0:
        raise range_error()
    if x == 1.0:
        return 0.0

    def f(u, da, db):
        return 1.0 / math.sqrt(math.expm1(two_n * math.log1p(da)))

    val, _ = quad_singular(f, 1.0, x, tol=tol)
    return val
