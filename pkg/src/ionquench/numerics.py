"""Numerically stable special functions and summation primitives.

The laser-motion coupling for the n-th oscillator level of an m-quantum
transition is

    f_n^m = (i eta)^m sqrt(n!/(n+m)!) exp(-eta^2/2) L_n^m(eta^2),

with L_n^m the associated Laguerre polynomial.  Partition sums need this for
n up to several thousand, where the factorial ratio and the polynomial both
leave the double range, so the coupling is carried as a phase plus a signed
log magnitude (:class:`CouplingValue`).  The remaining helpers (log-cosh,
log-sinh, log-sum-exp, cancellation-safe sqrt difference) keep the partition
arithmetic exact in the shifted log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CouplingValue",
    "laguerre_assoc",
    "laguerre_logabs_sequence",
    "coupling_f",
    "coupling_logabs_sequence",
    "lncosh",
    "lnsinh",
    "log_sum_exp",
    "sqrt_shift",
    "sqrt_excess",
]

_LN2 = math.log(2.0)
_RESCALE_HI = 1e250
_RESCALE_LO = 1e-250


@dataclass(frozen=True)
class CouplingValue:
    """Coupling f_n^m as phase * sign * exp(log_mag).

    m_phase  power of i modulo 4 carried by (i eta)^m
    sign     sign of the real Laguerre factor (0 at an exact polynomial zero)
    log_mag  natural log of |f_n^m|; -inf iff the Laguerre factor is zero
    """

    m_phase: int
    sign: int
    log_mag: float

    @property
    def magnitude(self) -> float:
        return math.exp(self.log_mag) if self.sign != 0 else 0.0

    @property
    def phase_factor(self) -> complex:
        return 1j ** self.m_phase

    def as_complex(self) -> complex:
        return self.phase_factor * self.sign * self.magnitude


def laguerre_assoc(n: int, m: int, x: float) -> float:
    """Associated Laguerre polynomial L_n^m(x) by the three-term recurrence.

    L_{k+1}^m = ((2k + m + 1 - x) L_k^m - (k + m) L_{k-1}^m) / (k + 1),
    seeded with L_0^m = 1 and L_1^m = m + 1 - x.  Raises OverflowError if the
    value leaves the double range; callers needing large n use the log-domain
    coupling instead.
    """
    if n < 0 or m < 0:
        raise ValueError("Laguerre indices must be nonnegative")
    if x < 0:
        raise ValueError("Laguerre argument must be nonnegative")
    if n == 0:
        return 1.0
    prev = 1.0
    curr = m + 1.0 - x
    for k in range(1, n):
        prev, curr = curr, ((2.0 * k + m + 1.0 - x) * curr - (k + m) * prev) / (k + 1.0)
    if not math.isfinite(curr):
        raise OverflowError(f"L_{n}^{m}({x}) overflows double precision")
    return curr


def laguerre_logabs_sequence(n_max: int, m: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Signs and log magnitudes of L_n^m(x) for n = 0..n_max.

    Runs the recurrence on rescaled values with exponent tracking, so the
    sequence is valid far beyond the linear-space overflow threshold.
    """
    if n_max < 0 or m < 0:
        raise ValueError("Laguerre indices must be nonnegative")
    if x < 0:
        raise ValueError("Laguerre argument must be nonnegative")
    signs = np.zeros(n_max + 1, dtype=np.int8)
    logabs = np.full(n_max + 1, -np.inf)

    prev, curr = 1.0, m + 1.0 - x
    offset = 0.0  # natural-log scale factor shared by (prev, curr)
    signs[0], logabs[0] = 1, 0.0
    for k in range(1, n_max + 1):
        if k > 1:
            prev, curr = curr, ((2.0 * (k - 1) + m + 1.0 - x) * curr - (k - 1 + m) * prev) / k
        mag = max(abs(prev), abs(curr))
        if mag > _RESCALE_HI or (0.0 < mag < _RESCALE_LO):
            scale = mag
            prev /= scale
            curr /= scale
            offset += math.log(scale)
        if curr == 0.0:
            signs[k] = 0
        else:
            signs[k] = 1 if curr > 0 else -1
            logabs[k] = math.log(abs(curr)) + offset
    return signs, logabs


def _log_factorial_ratio(n: np.ndarray, m: int) -> np.ndarray:
    """log sqrt(n!/(n+m)!) = -1/2 sum_{k=1..m} log(n+k), computed exactly termwise."""
    if m == 0:
        return np.zeros_like(n, dtype=float)
    ks = np.arange(1, m + 1, dtype=float)
    return -0.5 * np.log(n[:, None] + ks[None, :]).sum(axis=1)


def coupling_logabs_sequence(n_max: int, m: int, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Signs and log magnitudes of f_n^m(eta) for n = 0..n_max."""
    if eta < 0:
        raise ValueError("Lamb-Dicke parameter must be nonnegative")
    if eta == 0.0:
        signs = np.ones(n_max + 1, dtype=np.int8)
        if m == 0:
            return signs, np.zeros(n_max + 1)
        return np.zeros(n_max + 1, dtype=np.int8), np.full(n_max + 1, -np.inf)
    x = eta * eta
    signs, logabs = laguerre_logabs_sequence(n_max, m, x)
    n = np.arange(n_max + 1, dtype=float)
    log_mags = m * math.log(eta) - 0.5 * x + _log_factorial_ratio(n, m) + logabs
    return signs, log_mags


def coupling_f(n: int, m: int, eta: float) -> CouplingValue:
    """Coupling f_n^m as a numerically safe phase + signed log magnitude."""
    if n < 0 or m < 0:
        raise ValueError("coupling indices must be nonnegative")
    signs, log_mags = coupling_logabs_sequence(n, m, eta)
    return CouplingValue(m_phase=m % 4, sign=int(signs[n]), log_mag=float(log_mags[n]))


def lncosh(x):
    """log cosh(x) = |x| - log 2 + log(1 + exp(-2|x|)), exact over the double range."""
    ax = np.abs(x)
    with np.errstate(over="ignore"):  # -2|x| may overflow to -inf; exp then gives 0
        out = ax - _LN2 + np.log1p(np.exp(-2.0 * ax))
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def lnsinh(x):
    """log sinh(x) for x >= 0; -inf at x = 0.

    Small arguments go through sinh directly (no loss down to the underflow
    floor); large ones use x - log 2 + log(1 - exp(-2x)).
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("lnsinh requires nonnegative arguments")
    small = x_arr < 20.0
    out = np.empty_like(x_arr)
    with np.errstate(divide="ignore"):
        out[small] = np.log(np.sinh(x_arr[small]))
    big = ~small
    out[big] = x_arr[big] - _LN2 + np.log1p(-np.exp(-2.0 * x_arr[big]))
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(out)
    return out


def log_sum_exp(terms) -> float:
    """log sum exp over a finite sequence, by max shift.

    Accepts -inf entries; returns -inf for an empty or all-(-inf) input.
    +inf entries raise ValueError.  The exponential sum runs in ascending
    index order (numpy pairwise), so the result is deterministic for a fixed
    input order.
    """
    arr = np.asarray(list(terms) if not isinstance(terms, np.ndarray) else terms, dtype=float)
    if arr.size == 0:
        return -math.inf
    if np.any(np.isposinf(arr)):
        raise ValueError("log_sum_exp received +inf")
    hi = float(np.max(arr))
    if hi == -math.inf:
        return -math.inf
    return hi + math.log(float(np.sum(np.exp(arr - hi))))


def sqrt_shift(w_l: float, u: float, w_0: float) -> float:
    """sqrt(w_l^2 + u^2) - w_0 without catastrophic cancellation.

    Evaluates (w_l - w_0) + u^2 / (sqrt(w_l^2 + u^2) + w_l), accurate even
    when u/w_l is far below the double epsilon.  Requires w_l >= 0 (callers
    with a negative laser frequency pass |w_l|; only the square enters).
    """
    if isinstance(w_l, float) and isinstance(u, float):
        if w_l < 0:
            raise ValueError("sqrt_shift requires w_l >= 0")
        if u < 0:
            raise ValueError("sqrt_shift requires u >= 0")
        if u == 0.0:
            return w_l - w_0
        return (w_l - w_0) + u * u / (math.hypot(w_l, u) + w_l)
    w_l_arr = np.asarray(w_l, dtype=float)
    u_arr = np.asarray(u, dtype=float)
    if np.any(w_l_arr < 0):
        raise ValueError("sqrt_shift requires w_l >= 0")
    if np.any(u_arr < 0):
        raise ValueError("sqrt_shift requires u >= 0")
    out = (w_l_arr - w_0) + sqrt_excess(w_l_arr, u_arr)
    if np.ndim(out) == 0:
        return float(out)
    return out


def sqrt_excess(w: float, u):
    """sqrt(w^2 + u^2) - w for w >= 0, elementwise and cancellation-free."""
    u_arr = np.asarray(u, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(u_arr == 0.0, 0.0, u_arr * u_arr / (np.hypot(w, u_arr) + w))
    return out


class StreamingLogSum:
    """Running log-sum-exp accumulator with deterministic left-to-right order."""

    def __init__(self) -> None:
        self._max = -math.inf
        self._sum = 0.0  # sum of exp(term - max) seen so far

    def add(self, term: float) -> None:
        if term == -math.inf:
            return
        if term > self._max:
            if self._max == -math.inf:
                self._sum = 1.0
            else:
                self._sum = self._sum * math.exp(self._max - term) + 1.0
            self._max = term
        else:
            self._sum += math.exp(term - self._max)

    @property
    def value(self) -> float:
        if self._max == -math.inf:
            return -math.inf
        return self._max + math.log(self._sum)
