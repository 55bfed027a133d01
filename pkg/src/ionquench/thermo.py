"""Partition functions, the nonequilibrium lag, and asymptotic classification.

Everything runs in the b_w0/2-shifted log domain (b_w0 = beta*hbar*omega0 is
~7e11 at experimental parameters, so the common exponential never
materializes).  Two algebraic facts carry the module:

* With the coupling switched off (u_n = omega_rabi*|f_n^m| -> 0) the
  post-quench partition function collapses exactly onto the initial one:

      2 (nbar+1) e^(-m b_nu/2) cosh(b_wl/2) + edge  =  2 (nbar+1) cosh(b_w0/2)

  for both branches, where edge = (nbar+1)(1 - e^(-m b_nu)) e^(+-b_w0/2) is
  the decoupled-edge contribution.

* Each summand of the post-quench partition function exceeds its u = 0
  baseline by 4 e^(-b_nu(n+m/2)) sinh(A_n) sinh(B_n) >= 0, with
  A_n = (X_n + |b_wl|/2)/2, B_n = (X_n - |b_wl|/2)/2 and
  X_n = sqrt(b_wl^2 + u_n^2)/2.

The default assembly therefore writes Z_final = Z_initial + excess, which
makes the lag log(Z_f/Z_i) = log1p(excess/Z_i) nonnegative by construction,
exact in every decoupling limit, and equipped with an analytic tail bound:
the geometric factor of the neglected excess tail cancels against the
(nbar+1) inside Z_initial, so convergence is certified even when b_nu is
tiny (nbar ~ 1e6) after a few hundred explicit terms.  The literal term-by-
term assembly is kept as assembly="direct" for cross-validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import coupling_logabs_sequence, lnsinh, sqrt_excess
from .params import Branch, QuenchSpec, ReducedParams, TrapIonConfig

__all__ = [
    "TruncationPolicy",
    "TruncationReport",
    "TruncationError",
    "LogPartition",
    "LagResult",
    "PhiValue",
    "DivergenceReport",
    "LowTemperatureLimit",
    "NuToZeroResult",
    "ln_partition_initial",
    "ln_partition_final",
    "nonequilibrium_lag",
    "phi",
    "phi_reduced",
    "divergence_predicate",
    "divergence_predicate_reduced",
    "low_temperature_limit",
    "small_eta_coupling_sq",
    "small_eta_coupling_sq_leading",
    "nu_to_zero_limit",
]

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class TruncationPolicy:
    """How partition sums are truncated.

    n_pinned fixes the number of explicit terms (figure presets pin their
    reference term counts); otherwise the sum grows adaptively until either 64
    consecutive terms each contribute relative mass below term_rel_tol, or
    the analytic tail bound certifies convergence, or n_cap is hit.  In
    adaptive mode a sum that ends non-converged raises TruncationError unless
    error_on_nonconverged is cleared; pinned sums never raise, they only
    report converged=False.
    """

    n_pinned: int | None = None
    n_cap: int = 200_000
    chunk: int = 512
    term_rel_tol: float = 1e-16
    consecutive_below: int = 64
    tail_rel_tol: float = 1e-12
    lag_abs_tol: float = 1e-12
    error_on_nonconverged: bool = True

    def __post_init__(self) -> None:
        if self.n_pinned is not None and self.n_pinned < 1:
            raise ValueError("n_pinned must be at least 1")
        if self.n_cap < 1 or self.chunk < 1:
            raise ValueError("n_cap and chunk must be positive")


@dataclass(frozen=True)
class TruncationReport:
    """n_used explicit terms; tail_bound_log = log(estimated tail / sum)."""

    n_used: int
    tail_bound_log: float
    converged: bool


class TruncationError(RuntimeError):
    """Raised when an adaptive partition sum cannot certify convergence."""

    def __init__(self, report: TruncationReport, message: str):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class LogPartition:
    """log Z carried relative to the b_w0/2 shift; the shift is never re-added."""

    shifted_log: float
    shift_reference: float
    truncation: TruncationReport


@dataclass(frozen=True)
class LagResult:
    """Nonequilibrium lag (nats) with truncation and regime metadata."""

    value: float
    truncation: TruncationReport
    regime_flags: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PhiValue:
    """Low-temperature exponent nu(2n+m) + omega0 - sqrt(omega_L^2 + u^2), rad/s."""

    n: int
    m: int
    branch: Branch
    phi: float


@dataclass(frozen=True)
class DivergenceReport:
    diverges: bool
    witnesses: list[int]
    n_scanned: int


@dataclass(frozen=True)
class LowTemperatureLimit:
    """Zero-temperature lag classification: finite iff no exponent is negative."""

    finite: bool
    limit_value: float | None
    zero_count: int
    negative_witnesses: list[int]


_EXACT_REPORT = TruncationReport(n_used=0, tail_bound_log=-math.inf, converged=True)


def ln_partition_initial(rp: ReducedParams) -> LogPartition:
    """Closed-form shifted log of the pre-quench partition function.

    log Z_i - b_w0/2 = log(nbar+1) + log(1 + e^(-b_w0)), exact for
    arbitrarily large b_w0.
    """
    shifted = rp.ln_nbar_plus_1 + math.log1p(math.exp(-rp.b_w0))
    return LogPartition(shifted_log=shifted, shift_reference=0.5 * rp.b_w0, truncation=_EXACT_REPORT)


# -- internal machinery -------------------------------------------------------

_COUPLING_CACHE: dict[tuple[int, float], tuple[np.ndarray, np.ndarray]] = {}


def _coupling_upto(m: int, eta: float, n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Cached (signs, log magnitudes) of f_n^m for n = 0..>=n_max."""
    key = (m, eta)
    cached = _COUPLING_CACHE.get(key)
    if cached is None or cached[0].size <= n_max:
        size = 512
        while size <= n_max:
            size *= 2
        if len(_COUPLING_CACHE) >= 512:
            _COUPLING_CACHE.clear()
        cached = coupling_logabs_sequence(size - 1, m, eta)
        _COUPLING_CACHE[key] = cached
    return cached


def _abs_bwl_minus_bw0(rp: ReducedParams) -> tuple[float, float]:
    """(|b_wl|, |b_wl| - b_w0) with the difference formed without cancellation."""
    delta = rp.branch.sideband_sign * rp.m * rp.b_nu  # b_wl - b_w0, exact
    if rp.b_wl >= 0:
        return rp.b_wl, delta
    return -rp.b_wl, -2.0 * rp.b_w0 - delta


def _coupling_u(rp: ReducedParams, n_lo: int, n_hi: int) -> np.ndarray:
    """b_om * |f_n^m| for n in [n_lo, n_hi)."""
    signs, log_mags = _coupling_upto(rp.m, rp.eta, n_hi - 1)
    with np.errstate(over="ignore"):
        return np.where(signs[n_lo:n_hi] == 0, 0.0, rp.b_om * np.exp(log_mags[n_lo:n_hi]))


def _excess_logs(rp: ReducedParams, n_lo: int, n_hi: int) -> np.ndarray:
    """Shifted log of the coupling-induced excess terms for n in [n_lo, n_hi)."""
    u = _coupling_u(rp, n_lo, n_hi)
    abs_bwl, d_aw = _abs_bwl_minus_bw0(rp)
    b_quarter = 0.25 * sqrt_excess(abs_bwl, u)  # (sqrt(b_wl^2+u^2) - |b_wl|)/4 >= 0
    a_shifted = 0.5 * d_aw + b_quarter
    a_full = a_shifted + 0.5 * rp.b_w0
    ns = np.arange(n_lo, n_hi, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (
            _LN2
            - rp.b_nu * (ns + 0.5 * rp.m)
            + a_shifted
            + np.log1p(-np.exp(-2.0 * a_full))
            + lnsinh(b_quarter)
        )
    return np.where(b_quarter == 0.0, -np.inf, out)


def _excess_tail_log(rp: ReducedParams, n_from: int) -> float:
    """Shifted-log bound on the excess terms with n >= n_from, minus log(nbar+1).

    Uses |f_n^m| <= 1 (unitary matrix element), so the coupling factor is
    bounded by its u = b_om envelope while the geometric factor sums exactly.
    The log(nbar+1) is left out because it cancels against Z_initial.
    """
    if rp.b_om == 0.0:
        return -math.inf
    abs_bwl, d_aw = _abs_bwl_minus_bw0(rp)
    b_quarter = 0.25 * float(sqrt_excess(abs_bwl, rp.b_om))
    if b_quarter == 0.0:
        return -math.inf
    a_shifted = 0.5 * d_aw + b_quarter
    a_full = a_shifted + 0.5 * rp.b_w0
    return (
        _LN2
        - rp.b_nu * (n_from + 0.5 * rp.m)
        + a_shifted
        + math.log1p(-math.exp(-2.0 * a_full))
        + float(lnsinh(b_quarter))
    )


@dataclass(frozen=True)
class _ExcessSum:
    log_sum: float  # shifted log of the total excess (log(nbar+1) included)
    report: TruncationReport


def _scan_excess(rp: ReducedParams, policy: TruncationPolicy) -> _ExcessSum:
    """Sum the excess terms under the truncation policy, in ascending n order.

    Terms are produced and merged chunk by chunk (fixed chunk size), so the
    result is deterministic for given inputs.  The quiet-terms counter
    compares each term against the running total at the start of its chunk,
    which only understates term significance never overstates it, so the
    stopping rule is conservative.
    """
    if rp.b_om == 0.0 or (rp.m > 0 and rp.eta == 0.0):
        # Dead coupling: the excess vanishes identically, no scan needed.
        return _ExcessSum(log_sum=-math.inf, report=_EXACT_REPORT)
    ln_zi_shifted = rp.ln_nbar_plus_1 + math.log1p(math.exp(-rp.b_w0))
    log_thresh = math.log(policy.term_rel_tol)

    running = -math.inf
    n_done = 0
    consec = 0
    target = policy.n_pinned if policy.n_pinned is not None else policy.n_cap
    stop_reason = "cap"

    def tail_rel_zi(n_from: int) -> float:
        # log of (excess tail bound / Z_i); the log(nbar+1) factors cancel.
        return _excess_tail_log(rp, n_from) - math.log1p(math.exp(-rp.b_w0))

    while n_done < target:
        n_hi = min(n_done + policy.chunk, target)
        xs = _excess_logs(rp, n_done, n_hi)
        finite = xs > -math.inf
        if finite.any():
            hi = float(np.max(xs))
            chunk_lse = hi + math.log(float(np.sum(np.exp(xs - hi))))
            val_before = running
            running = float(np.logaddexp(running, chunk_lse))
        else:
            val_before = running
        if val_before == -math.inf:
            below = ~finite
        else:
            below = (xs - val_before) < log_thresh
        if bool(below.all()):
            consec += xs.size
        else:
            consec = int(xs.size - 1 - np.max(np.nonzero(~below)[0]))
        n_done = n_hi
        if policy.n_pinned is None:
            if consec >= policy.consecutive_below:
                stop_reason = "quiet"
                break
            if tail_rel_zi(n_done) <= math.log(policy.lag_abs_tol):
                stop_reason = "bound"
                break
    else:
        stop_reason = "pinned" if policy.n_pinned is not None else stop_reason

    log_sum = running
    tail_log = _excess_tail_log(rp, n_done) + rp.ln_nbar_plus_1
    tail_over_zi = tail_rel_zi(n_done)
    lag_so_far = float(np.logaddexp(0.0, log_sum - ln_zi_shifted))
    ln_zf = ln_zi_shifted + lag_so_far
    tail_bound_log = tail_log - ln_zf
    converged = (tail_bound_log <= math.log(policy.tail_rel_tol)) or (
        tail_over_zi <= math.log(policy.lag_abs_tol)
    )
    report = TruncationReport(n_used=n_done, tail_bound_log=tail_bound_log, converged=converged)
    if not converged and policy.n_pinned is None and policy.error_on_nonconverged:
        raise TruncationError(report, f"partition sum not converged after {n_done} terms ({stop_reason})")
    return _ExcessSum(log_sum=log_sum, report=report)


def _edge_shifted_log(rp: ReducedParams) -> float:
    """Shifted log of the decoupled-edge contribution to the final partition sum."""
    if rp.m == 0:
        return -math.inf
    base = rp.ln_nbar_plus_1 + math.log(-math.expm1(-rp.m * rp.b_nu))
    if rp.branch is Branch.AJC:
        return base - rp.b_w0
    return base


def ln_partition_final(
    rp: ReducedParams,
    quench: QuenchSpec | None = None,
    policy: TruncationPolicy | None = None,
    assembly: str = "excess",
) -> LogPartition:
    """Shifted log of the post-quench partition function.

    assembly="excess" (default) adds the coupling-induced excess onto the
    closed-form baseline, which equals the initial partition function
    exactly; assembly="direct" sums the coupled-pair terms and the edge term
    literally, in fixed ascending order, and exists to cross-check the
    default path.
    """
    if quench is not None and (quench.m != rp.m or quench.branch is not rp.branch):
        raise ValueError("quench spec disagrees with the reduced parameters")
    policy = policy or TruncationPolicy()
    if assembly == "excess":
        ln_zi = ln_partition_initial(rp).shifted_log
        scan = _scan_excess(rp, policy)
        lag = float(np.logaddexp(0.0, scan.log_sum - ln_zi))
        return LogPartition(shifted_log=ln_zi + lag, shift_reference=0.5 * rp.b_w0, truncation=scan.report)
    if assembly == "direct":
        return _ln_partition_final_direct(rp, policy)
    raise ValueError("assembly must be 'excess' or 'direct'")


def _direct_term_logs(rp: ReducedParams, n_lo: int, n_hi: int) -> np.ndarray:
    """Shifted log of 2 e^(-b_nu(n+m/2)) cosh(X_n) for n in [n_lo, n_hi)."""
    u = _coupling_u(rp, n_lo, n_hi)
    abs_bwl, d_aw = _abs_bwl_minus_bw0(rp)
    half_ss = 0.5 * (d_aw + sqrt_excess(abs_bwl, u))  # X_n - b_w0/2
    x_full = half_ss + 0.5 * rp.b_w0
    ns = np.arange(n_lo, n_hi, dtype=float)
    return -rp.b_nu * (ns + 0.5 * rp.m) + half_ss + np.log1p(np.exp(-2.0 * x_full))


def _ln_partition_final_direct(rp: ReducedParams, policy: TruncationPolicy) -> LogPartition:
    log_thresh = math.log(policy.term_rel_tol)
    running = -math.inf
    n_done = 0
    consec = 0
    target = policy.n_pinned if policy.n_pinned is not None else policy.n_cap

    while n_done < target:
        n_hi = min(n_done + policy.chunk, target)
        xs = _direct_term_logs(rp, n_done, n_hi)
        hi = float(np.max(xs))
        chunk_lse = hi + math.log(float(np.sum(np.exp(xs - hi))))
        val_before = running
        running = float(np.logaddexp(running, chunk_lse))
        below = (xs - val_before) < log_thresh if val_before > -math.inf else np.zeros(xs.size, dtype=bool)
        if bool(below.all()):
            consec += xs.size
        else:
            consec = int(xs.size - 1 - np.max(np.nonzero(~below)[0]))
        n_done = n_hi
        if policy.n_pinned is None and consec >= policy.consecutive_below:
            break

    total = float(np.logaddexp(running, _edge_shifted_log(rp)))
    # Tail of the direct sum: each term is at most 2 e^(-b_nu(n+m/2)) e^(X_max)
    # with the splitting at the u = b_om envelope of the coupling.
    abs_bwl, d_aw = _abs_bwl_minus_bw0(rp)
    env = 0.5 * (d_aw + float(sqrt_excess(abs_bwl, rp.b_om)))
    tail_log = _LN2 + env - rp.b_nu * (n_done + 0.5 * rp.m) + rp.ln_nbar_plus_1
    tail_bound_log = tail_log - total
    converged = tail_bound_log <= math.log(policy.tail_rel_tol)
    report = TruncationReport(n_used=n_done, tail_bound_log=tail_bound_log, converged=converged)
    if not converged and policy.n_pinned is None and policy.error_on_nonconverged:
        raise TruncationError(report, f"direct partition sum not converged after {n_done} terms")
    return LogPartition(shifted_log=total, shift_reference=0.5 * rp.b_w0, truncation=report)


def nonequilibrium_lag(
    rp: ReducedParams,
    quench: QuenchSpec | None = None,
    policy: TruncationPolicy | None = None,
) -> LagResult:
    """Lag log(Z_final / Z_initial) >= 0 for the sudden sideband quench.

    The shifts cancel exactly; the value is log1p(excess / Z_initial), so the
    decoupled limits (omega_rabi -> 0, eta -> infinity, JC sideband with
    eta -> 0) return exactly zero.
    """
    if quench is not None and (quench.m != rp.m or quench.branch is not rp.branch):
        raise ValueError("quench spec disagrees with the reduced parameters")
    policy = policy or TruncationPolicy()
    ln_zi = ln_partition_initial(rp).shifted_log
    scan = _scan_excess(rp, policy)
    value = float(np.logaddexp(0.0, scan.log_sum - ln_zi))
    predicate = divergence_predicate_reduced(rp)
    return LagResult(
        value=value,
        truncation=scan.report,
        regime_flags={"divergence_predicted": predicate.diverges},
    )


# -- low-temperature classification -------------------------------------------


def _phi_reduced_array(
    m: int, branch: Branch, r_w0: float, r_om: float, eta: float, n_max: int
) -> np.ndarray:
    """Phi_n^m / nu for n = 0..n_max, assembled without cancellation.

    Phi/nu = (2n+m) - (|r_wl| - r_w0) - (sqrt(r_wl^2 + u_n^2) - |r_wl|), so
    the sign is reliable even when the result is ~1e-11 of omega0/nu.
    """
    signs, log_mags = _coupling_upto(m, eta, n_max)
    with np.errstate(over="ignore"):
        u = np.where(signs[: n_max + 1] == 0, 0.0, r_om * np.exp(log_mags[: n_max + 1]))
    sign = branch.sideband_sign if m > 0 else 0
    r_wl = r_w0 + sign * m
    abs_rwl = abs(r_wl)
    d_aw = float(sign * m) if r_wl >= 0 else -2.0 * r_w0 - sign * m
    ns = np.arange(n_max + 1, dtype=float)
    return (2.0 * ns + m) - d_aw - sqrt_excess(abs_rwl, u)


def phi_reduced(n: int, m: int, branch: Branch, r_w0: float, r_om: float, eta: float) -> float:
    """Low-temperature exponent in trap-frequency units (Phi / nu)."""
    return float(_phi_reduced_array(m, branch, r_w0, r_om, eta, n)[n])


def phi(
    n: int,
    m: int,
    branch: Branch,
    nu: float,
    omega0: float,
    omega_rabi: float,
    eta: float,
) -> PhiValue:
    """Low-temperature exponent Phi_n^m in rad/s."""
    value = nu * phi_reduced(n, m, branch, omega0 / nu, omega_rabi / nu, eta)
    return PhiValue(n=n, m=m, branch=branch, phi=value)


_PHI_ZERO_TOL = 1e-9


def _phi_scan(
    m: int,
    branch: Branch,
    r_w0: float,
    r_om: float,
    eta: float,
    n_scan_max: int,
) -> tuple[list[int], list[int]]:
    """(strictly negative witnesses, zero crossings) of Phi_n^m for n <= n_scan_max.

    A value counts as zero when it is below 1e-9 of the two quantities whose
    difference it is (the level ladder nu(2n+m) -+ m nu and the dressed-
    splitting excess); measuring against omega0 instead would swallow every
    trap-scale value once omega0/nu is large.
    """
    signs, log_mags = _coupling_upto(m, eta, n_scan_max)
    with np.errstate(over="ignore"):
        u = np.where(signs[: n_scan_max + 1] == 0, 0.0, r_om * np.exp(log_mags[: n_scan_max + 1]))
    sign = branch.sideband_sign if m > 0 else 0
    r_wl = r_w0 + sign * m
    abs_rwl = abs(r_wl)
    d_aw = float(sign * m) if r_wl >= 0 else -2.0 * r_w0 - sign * m
    ns = np.arange(n_scan_max + 1, dtype=float)
    ladder = (2.0 * ns + m) - d_aw
    excess = sqrt_excess(abs_rwl, u)
    values = ladder - excess
    is_zero = np.abs(values) <= _PHI_ZERO_TOL * (np.abs(ladder) + np.abs(excess))
    is_neg = (values < 0) & ~is_zero
    return np.nonzero(is_neg)[0].tolist(), np.nonzero(is_zero)[0].tolist()


def default_scan_bound(m: int) -> int:
    """Witnesses beyond this are impossible: |f_n^m| decays in n while the
    divergence threshold grows like sqrt(n)."""
    return 10 * m + 100


def _coupling_alive(m: int, branch: Branch, r_om: float, eta: float) -> bool:
    """Whether any f_n^m is nonzero: carrier always couples, sidebands need eta > 0."""
    if r_om <= 0:
        return False
    return m == 0 or eta > 0


def divergence_predicate_reduced(rp: ReducedParams, n_scan_max: int | None = None) -> DivergenceReport:
    return _divergence_core(rp.m, rp.branch, rp.r_w0, rp.r_om, rp.eta, n_scan_max)


def divergence_predicate(
    m: int,
    branch: Branch,
    cfg: TrapIonConfig,
    eta: float,
    n_scan_max: int | None = None,
) -> DivergenceReport:
    """Does the lag diverge as the temperature goes to zero?

    AJC and carrier quenches with live coupling always do (the lowest
    exponent is strictly negative); a JC quench diverges iff some exponent
    Phi_n^m turns negative, equivalently
    |f_n^m| > (2/omega_rabi) sqrt(nu (omega0 + n nu)(n+m)) for some n.
    """
    return _divergence_core(m, branch, cfg.omega0 / cfg.nu, cfg.omega_rabi / cfg.nu, eta, n_scan_max)


def _divergence_core(
    m: int,
    branch: Branch,
    r_w0: float,
    r_om: float,
    eta: float,
    n_scan_max: int | None,
) -> DivergenceReport:
    bound = n_scan_max if n_scan_max is not None else default_scan_bound(m)
    if bound < 1:
        raise ValueError("n_scan_max must be at least 1")
    if not _coupling_alive(m, branch, r_om, eta):
        return DivergenceReport(diverges=False, witnesses=[], n_scanned=bound)
    negative, _ = _phi_scan(m, branch, r_w0, r_om, eta, bound)
    if branch is Branch.JC and m > 0:
        return DivergenceReport(diverges=bool(negative), witnesses=negative, n_scanned=bound)
    # AJC and carrier: Phi_0 < 0 whenever the coupling is live.
    return DivergenceReport(diverges=True, witnesses=negative, n_scanned=bound)


def low_temperature_limit(
    m: int,
    branch: Branch,
    cfg: TrapIonConfig,
    eta: float,
    n_scan_max: int | None = None,
) -> LowTemperatureLimit:
    """Zero-temperature limit of the lag: log(1 + k) when finite.

    k counts the exponents Phi_n^m within the documented zero tolerance.
    AJC and carrier quenches with live coupling never stay finite.
    """
    bound = n_scan_max if n_scan_max is not None else default_scan_bound(m)
    r_w0, r_om = cfg.omega0 / cfg.nu, cfg.omega_rabi / cfg.nu
    if not _coupling_alive(m, branch, r_om, eta):
        return LowTemperatureLimit(finite=True, limit_value=0.0, zero_count=0, negative_witnesses=[])
    if branch is not Branch.JC or m == 0:
        return LowTemperatureLimit(finite=False, limit_value=None, zero_count=0, negative_witnesses=[0])
    negative, zeros = _phi_scan(m, branch, r_w0, r_om, eta, bound)
    if negative:
        return LowTemperatureLimit(finite=False, limit_value=None, zero_count=len(zeros), negative_witnesses=negative)
    return LowTemperatureLimit(
        finite=True,
        limit_value=math.log1p(len(zeros)),
        zero_count=len(zeros),
        negative_witnesses=[],
    )


# -- small-eta and small-nu asymptotics ----------------------------------------


def small_eta_coupling_sq(n: int, m: int, eta: float) -> float:
    """|f_n^m|^2 to second order in eta beyond the leading power:

    ((n+m)! / (n! m!^2)) [1 - eta^2 (2n+m+1)/(m+1)] eta^(2m),
    valid for eta well below 0.3.
    """
    if n < 0 or m < 0:
        raise ValueError("indices must be nonnegative")
    lead = math.comb(n + m, m) / math.factorial(m)
    return lead * (1.0 - eta * eta * (2.0 * n + m + 1.0) / (m + 1.0)) * eta ** (2 * m)


def small_eta_coupling_sq_leading(n: int, m: int, eta: float) -> float:
    """Truncation of the expansion to order eta^2: nonzero only for m in {0, 1}."""
    if m == 0:
        return 1.0 - (2.0 * n + 1.0) * eta * eta
    if m == 1:
        return (n + 1.0) * eta * eta
    return 0.0


@dataclass(frozen=True)
class NuToZeroResult:
    """Per-mode regularized limit of log(Z_final/Z_initial) as nu -> 0 at fixed eta."""

    value: float
    truncation: TruncationReport


def nu_to_zero_limit(
    rp: ReducedParams,
    quench: QuenchSpec | None = None,
    policy: TruncationPolicy | None = None,
) -> NuToZeroResult:
    """Vanishing-trap-frequency limit of the lag at fixed eta, b_w0 and b_om.

    With the motional spacing gone, every mode contributes
    sech(b_w0/2) cosh(sqrt(b_w0^2 + b_om^2 |f_n^m|^2)/2) >= 1, so the raw
    mode sum grows with the cutoff and only the per-mode average is finite:

        value = log( (1/N) sum_n sech(b_w0/2) cosh(X_n) ).

    For eta = 0 (all couplings equal) the average is exact, N-independent,
    and coincides with the carrier closed form (b_w0/2-level shift of the
    dressed splitting); the generic lag approaches it as nu shrinks at fixed
    beta.  Inputs with omega_rabi |f| identically zero are rejected: every
    mode then contributes exactly 1 and the unnormalized sum diverges with no
    finite limit content.
    """
    if quench is not None and (quench.m != rp.m or quench.branch is not rp.branch):
        raise ValueError("quench spec disagrees with the reduced parameters")
    policy = policy or TruncationPolicy()
    n_terms = policy.n_pinned if policy.n_pinned is not None else 512
    if not _coupling_alive(rp.m, rp.branch, rp.r_om, rp.eta):
        raise ValueError(
            "omega_rabi * |f_n^m| vanishes identically; the small-nu limit needs decaying coupling terms"
        )
    u = _coupling_u(rp, 0, n_terms)
    excess = sqrt_excess(rp.b_w0, u)
    x_full = 0.5 * excess + 0.5 * rp.b_w0
    terms = 0.5 * excess + np.log1p(np.exp(-2.0 * x_full)) - math.log1p(math.exp(-rp.b_w0))

    hi = float(np.max(terms))
    cumulative = np.cumsum(np.exp(terms - hi))
    value = hi + math.log(float(cumulative[-1])) - math.log(n_terms)
    if n_terms > 1:
        prev = hi + math.log(float(cumulative[-2])) - math.log(n_terms - 1)
        drift = abs(value - prev)
    else:
        drift = 0.0
    scale = max(abs(value), 1e-300)
    tail_bound_log = math.log(max(drift / scale, 1e-300))
    converged = drift <= max(0.05 * abs(value), policy.lag_abs_tol)
    report = TruncationReport(n_used=n_terms, tail_bound_log=tail_bound_log, converged=converged)
    return NuToZeroResult(value=value, truncation=report)
