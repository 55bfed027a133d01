"""Parameter sweeps over grids of lag evaluations, with plot-ready rows.

Rows come out in a fixed order (grid-major, then branch, then sideband
index) regardless of how many worker threads evaluate them: points are
index-tagged and collected in submission order, so parallel output is
byte-identical to a serial run.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Mapping

from .params import Branch, QuenchSpec, ThermalSpec, TrapIonConfig, reduce
from .thermo import TruncationPolicy, divergence_predicate_reduced, nonequilibrium_lag
from .workstats import moments_analytic

__all__ = ["SweepSpec", "ResultRow", "RESULT_COLUMNS", "MOMENT_COLUMNS", "sweep_points", "run_sweep", "evaluate_point"]

SWEEP_AXES = ("eta", "omega_rabi", "nbar", "nu", "m")

RESULT_COLUMNS = (
    "nu",
    "omega0",
    "omega_rabi",
    "mass",
    "phi_angle",
    "eta",
    "nbar",
    "b_nu",
    "b_w0",
    "b_om",
    "b_wl",
    "m",
    "branch",
    "lag",
    "n_used",
    "tail_bound_log",
    "converged",
    "divergence_predicted",
)
MOMENT_COLUMNS = ("w_mean", "w_second", "w_third", "w_skewness")


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: an axis, its grid, and the held-fixed parameter block.

    fixed holds raw SI parameters (nu, omega0, omega_rabi, mass, optional
    phi_angle) plus exactly one of nbar/beta, plus eta when the Lamb-Dicke
    parameter is pinned rather than derived from the geometry.  m_values is
    ignored when the axis itself is "m".
    """

    axis: str
    grid: tuple
    fixed: Mapping[str, float]
    branches: tuple[Branch, ...]
    m_values: tuple[int, ...]
    n_pinned: int | None = None

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}")
        if len(self.grid) == 0:
            raise ValueError("sweep grid must be nonempty")
        diffs = [b - a for a, b in zip(self.grid, self.grid[1:])]
        if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise ValueError("sweep grid must be strictly monotone")
        if not self.branches:
            raise ValueError("at least one branch is required")
        if self.axis != "m" and not self.m_values:
            raise ValueError("at least one sideband index is required")

    def points(self) -> Iterator[dict]:
        """Parameter points in grid-major, then branch, then m order."""
        for value in self.grid:
            for branch in self.branches:
                ms = (int(value),) if self.axis == "m" else self.m_values
                for m in ms:
                    point = dict(self.fixed)
                    if self.axis != "m":
                        point[self.axis] = float(value)
                    point["m"] = m
                    point["branch"] = branch
                    if self.n_pinned is not None:
                        point["n_pinned"] = self.n_pinned
                    yield point


@dataclass(frozen=True)
class ResultRow:
    """One evaluated grid point; column set is fixed and documented."""

    nu: float
    omega0: float
    omega_rabi: float
    mass: float
    phi_angle: float
    eta: float
    nbar: float
    b_nu: float
    b_w0: float
    b_om: float
    b_wl: float
    m: int
    branch: str
    lag: float
    n_used: int
    tail_bound_log: float
    converged: bool
    divergence_predicted: bool
    w_mean: float | None = None
    w_second: float | None = None
    w_third: float | None = None
    w_skewness: float | None = None

    def as_dict(self, with_moments: bool = False) -> dict:
        cols = RESULT_COLUMNS + (MOMENT_COLUMNS if with_moments else ())
        return {c: getattr(self, c) for c in cols}


def evaluate_point(point: Mapping, policy: TruncationPolicy | None = None, with_moments: bool = False) -> ResultRow:
    """Evaluate the lag (and optionally the closed-form moments) at one point."""
    policy = policy or TruncationPolicy()
    cfg = TrapIonConfig(
        mass=float(point["mass"]),
        nu=float(point["nu"]),
        omega0=float(point["omega0"]),
        omega_rabi=float(point["omega_rabi"]),
        phi_angle=float(point.get("phi_angle", 0.0)),
    )
    if "nbar" in point and point["nbar"] is not None:
        thermal = ThermalSpec(nbar=float(point["nbar"]))
    else:
        thermal = ThermalSpec(beta=float(point["beta"]))
    quench = QuenchSpec(int(point["m"]), point["branch"])
    eta = point.get("eta")
    rp = reduce(cfg, quench, thermal, eta_override=None if eta is None else float(eta))
    if point.get("n_pinned") is not None:
        policy = replace(policy, n_pinned=int(point["n_pinned"]))
    result = nonequilibrium_lag(rp, policy=policy)
    predicate = divergence_predicate_reduced(rp)
    moments = moments_analytic(rp) if with_moments else None
    return ResultRow(
        nu=cfg.nu,
        omega0=cfg.omega0,
        omega_rabi=cfg.omega_rabi,
        mass=cfg.mass,
        phi_angle=cfg.phi_angle if eta is None else float("nan"),
        eta=rp.eta,
        nbar=rp.nbar,
        b_nu=rp.b_nu,
        b_w0=rp.b_w0,
        b_om=rp.b_om,
        b_wl=rp.b_wl,
        m=rp.m,
        branch=rp.branch.value,
        lag=result.value,
        n_used=result.truncation.n_used,
        tail_bound_log=result.truncation.tail_bound_log,
        converged=result.truncation.converged,
        divergence_predicted=predicate.diverges,
        w_mean=moments.mean if moments else None,
        w_second=moments.second if moments else None,
        w_third=moments.third if moments else None,
        w_skewness=moments.skewness if moments else None,
    )


def sweep_points(spec: SweepSpec) -> list[dict]:
    return list(spec.points())


def run_sweep(
    spec: SweepSpec,
    policy: TruncationPolicy | None = None,
    threads: int = 1,
    with_moments: bool = False,
) -> list[ResultRow]:
    """Evaluate every point of the sweep; output order matches spec.points()."""
    points = sweep_points(spec)
    if threads <= 1:
        return [evaluate_point(p, policy, with_moments) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda p: evaluate_point(p, policy, with_moments), points))


def run_specs(
    specs: Iterable[SweepSpec],
    policy: TruncationPolicy | None = None,
    threads: int = 1,
    with_moments: bool = False,
) -> list[ResultRow]:
    rows: list[ResultRow] = []
    for spec in specs:
        rows.extend(run_sweep(spec, policy, threads, with_moments))
    return rows
