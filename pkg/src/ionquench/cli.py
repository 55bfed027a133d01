"""Command-line front end: figure presets, sweeps, spectra, and verification.

Subcommands: lag, moments, sweep, spectrum, verify.  Output is CSV
(RFC-4180 quoting, '.' decimal, %.17g floats) or JSON lines via --format;
the effective configuration is echoed into CSV header comments.  Config
precedence is flags > config file > preset > defaults.

Exit codes: 0 ok, 1 verification failure, 2 usage or config error,
3 non-converged rows present without --allow-nonconverged.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .params import Branch, QuenchSpec, ThermalSpec, TrapIonConfig, reduce
from .presets import FIG1_CONFIG, desk_scale_point, figure_presets
from .spectra import spectrum_table
from .sweep import MOMENT_COLUMNS, RESULT_COLUMNS, ResultRow, SweepSpec, run_specs
from .thermo import TruncationPolicy
from .verify import run_checks
from .workstats import moments_analytic, moments_numeric

_EXIT_OK = 0
_EXIT_VERIFY_FAIL = 1
_EXIT_CONFIG = 2
_EXIT_NONCONVERGED = 3

_PARAM_KEYS = ("nu", "omega0", "omega_rabi", "mass", "phi_angle", "nbar", "beta", "eta")


class ConfigError(Exception):
    pass


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def _parse_branches(text: str) -> tuple[Branch, ...]:
    out = []
    for tok in text.split(","):
        tok = tok.strip().lower()
        try:
            out.append(Branch(tok))
        except ValueError as exc:
            raise ConfigError(f"unknown branch {tok!r} (expected jc, ajc, carrier)") from exc
    return tuple(out)


def _parse_ms(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"bad sideband list {text!r}") from exc


def _read_config_file(path: str) -> dict[str, str]:
    """Flat key = value file; '#' starts a comment; keys mirror flag names."""
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line without '=': {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


_FLOAT_KEYS = {"nu", "omega0", "omega", "omega_rabi", "mass", "phi", "phi_angle", "nbar", "beta", "eta", "tol"}
_INT_KEYS = {"nmax", "threads", "seed"}
_BOOL_KEYS = {"allow_nonconverged", "desk_scale", "numeric_oracle"}


def _coerce(key: str, value: str):
    if key in _FLOAT_KEYS:
        return float(value)
    if key in _INT_KEYS:
        return int(value)
    if key in _BOOL_KEYS:
        return value.strip().lower() in ("1", "true", "yes", "on")
    return value


_FLAG_ALIASES = {"omega": "omega_rabi", "phi": "phi_angle"}


def _effective_params(args: argparse.Namespace) -> dict:
    """Merge defaults < preset fixed block < config file < explicit flags."""
    params: dict = dict(FIG1_CONFIG)
    if getattr(args, "desk_scale", False):
        params = desk_scale_point()
    preset_name = getattr(args, "preset", None)
    if preset_name:
        presets = figure_presets()
        if preset_name not in presets:
            raise ConfigError(f"unknown preset {preset_name!r}")
        fixed = presets[preset_name].specs[0].fixed
        if "beta" in fixed:
            params.pop("nbar", None)
        if "nbar" in fixed:
            params.pop("beta", None)
        params.update(fixed)
    if getattr(args, "config", None):
        for key, raw in _read_config_file(args.config).items():
            key = _FLAG_ALIASES.get(key, key)
            if key in _PARAM_KEYS:
                params[key] = _coerce(key, raw)
    for flag in ("nu", "omega0", "omega", "mass", "phi", "nbar", "beta", "eta"):
        value = getattr(args, flag, None)
        if value is not None:
            params[_FLAG_ALIASES.get(flag, flag)] = value
    if params.get("nbar") is not None and getattr(args, "beta", None) is not None:
        params.pop("nbar", None)
        params["beta"] = args.beta
    if "nbar" in params and "beta" in params:
        raise ConfigError("give only one of nbar and beta")
    if "nbar" not in params and "beta" not in params:
        raise ConfigError("one of nbar or beta is required")
    return params


def _policy_from_args(args: argparse.Namespace) -> TruncationPolicy:
    policy = TruncationPolicy(error_on_nonconverged=False)
    if getattr(args, "nmax", None) is not None:
        policy = replace(policy, n_pinned=args.nmax)
    if getattr(args, "tol", None) is not None:
        policy = replace(policy, tail_rel_tol=args.tol, lag_abs_tol=args.tol)
    return policy


class _Writer:
    """CSV or JSON-lines row sink with a stable column order."""

    def __init__(self, fmt: str, out_path: str | None, columns: tuple[str, ...], header_meta: dict):
        self.fmt = fmt
        self.columns = columns
        self.header_meta = header_meta
        self._fh = open(out_path, "w", newline="") if out_path else sys.stdout
        self._owns = out_path is not None
        self._csv = None
        if fmt == "csv":
            for key in sorted(header_meta):
                self._fh.write(f"# {key} = {_fmt(header_meta[key])}\n")
            self._csv = csv.writer(self._fh, lineterminator="\n")
            self._csv.writerow(columns)

    def write_row(self, values: dict) -> None:
        if self.fmt == "csv":
            self._csv.writerow([_fmt(values[c]) for c in self.columns])
        else:
            self._fh.write(json.dumps({c: values[c] for c in self.columns}) + "\n")

    def close(self) -> None:
        if self._owns:
            self._fh.close()


def _add_shared_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=tuple(f"fig{i}" for i in range(1, 7)), help="figure preset")
    p.add_argument("--branch", type=str, help="comma list of jc,ajc,carrier")
    p.add_argument("--m", dest="m", type=str, help="comma list of sideband indices")
    p.add_argument("--eta", type=float, help="Lamb-Dicke parameter (overrides geometry)")
    p.add_argument("--phi", type=float, help="laser angle in rad (geometry route)")
    p.add_argument("--omega", type=float, help="Rabi angular frequency, rad/s")
    p.add_argument("--omega0", type=float, help="transition angular frequency, rad/s")
    p.add_argument("--nu", type=float, help="trap angular frequency, rad/s")
    p.add_argument("--mass", type=float, help="ion mass, kg")
    p.add_argument("--nbar", type=float, help="initial thermal occupation")
    p.add_argument("--beta", type=float, help="inverse temperature, 1/J")
    p.add_argument("--nmax", type=int, help="pin the number of partition-sum terms")
    p.add_argument("--tol", type=float, help="truncation tail tolerance")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--out", type=str, help="output path (default stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--allow-nonconverged", action="store_true", dest="allow_nonconverged")
    p.add_argument("--desk-scale", action="store_true", dest="desk_scale", help="use moderate frequency ratios")
    p.add_argument("--config", type=str, help="flat key = value config file")


def _meta_for(args: argparse.Namespace, command: str, params: dict, extra: dict | None = None) -> dict:
    meta = {"command": command, **{f"param.{k}": v for k, v in sorted(params.items())}}
    if getattr(args, "preset", None):
        meta["preset"] = args.preset
    if getattr(args, "nmax", None) is not None:
        meta["nmax"] = args.nmax
    if getattr(args, "tol", None) is not None:
        meta["tol"] = args.tol
    if extra:
        meta.update(extra)
    return meta


def _flag_given(args: argparse.Namespace, key: str) -> bool:
    flag = {"omega_rabi": "omega", "phi_angle": "phi"}.get(key, key)
    return getattr(args, flag, None) is not None


def _explicit_overrides(args: argparse.Namespace, params: dict) -> dict:
    """Parameter values the user pinned via flags or the config file."""
    overrides = {key: params[key] for key in _PARAM_KEYS if _flag_given(args, key) and key in params}
    if getattr(args, "config", None):
        for key, raw in _read_config_file(args.config).items():
            key = _FLAG_ALIASES.get(key, key)
            if key in _PARAM_KEYS and key not in overrides:
                overrides[key] = _coerce(key, raw)
    return overrides


def _specs_for_point_command(args: argparse.Namespace, params: dict) -> list[SweepSpec]:
    """Sweep specs for `lag`: the preset's grids, or one single-point spec."""
    if args.preset:
        preset = figure_presets()[args.preset]
        overrides = _explicit_overrides(args, params)
        specs = []
        for spec in preset.specs:
            fixed = dict(spec.fixed)
            for key, val in overrides.items():
                if key == spec.axis:
                    continue
                if key in ("nbar", "beta"):
                    fixed.pop("nbar", None)
                    fixed.pop("beta", None)
                fixed[key] = val
            branches = _parse_branches(args.branch) if args.branch else spec.branches
            m_values = _parse_ms(args.m) if args.m else spec.m_values
            n_pinned = args.nmax if args.nmax is not None else spec.n_pinned
            specs.append(replace(spec, fixed=fixed, branches=branches, m_values=m_values, n_pinned=n_pinned))
        return specs
    branches = _parse_branches(args.branch) if args.branch else (Branch.CARRIER,)
    m_values = _parse_ms(args.m) if args.m else (0,)
    eta = params.get("eta")
    grid = (float(eta) if eta is not None else 0.0,)
    fixed = {k: v for k, v in params.items() if k != "eta"}
    return [
        SweepSpec(axis="eta", grid=grid, fixed=fixed, branches=branches, m_values=m_values, n_pinned=args.nmax)
    ]


def _emit_rows(args: argparse.Namespace, command: str, params: dict, rows: list[ResultRow], with_moments: bool) -> int:
    columns = RESULT_COLUMNS + (MOMENT_COLUMNS if with_moments else ())
    writer = _Writer(args.format, args.out, columns, _meta_for(args, command, params))
    try:
        for row in rows:
            writer.write_row(row.as_dict(with_moments=with_moments))
    finally:
        writer.close()
    if any(not row.converged for row in rows) and not args.allow_nonconverged:
        return _EXIT_NONCONVERGED
    return _EXIT_OK


def _cmd_lag(args: argparse.Namespace) -> int:
    params = _effective_params(args)
    specs = _specs_for_point_command(args, params)
    rows = run_specs(specs, policy=_policy_from_args(args), threads=args.threads)
    return _emit_rows(args, "lag", params, rows, with_moments=False)


def _cmd_sweep(args: argparse.Namespace) -> int:
    params = _effective_params(args)
    if args.axis is None:
        raise ConfigError("sweep requires --axis")
    if args.values:
        try:
            grid = tuple(int(v) if args.axis == "m" else float(v) for v in args.values.split(","))
        except ValueError as exc:
            raise ConfigError(f"bad --values list {args.values!r}") from exc
    elif args.grid:
        parts = args.grid.split(":")
        if len(parts) != 4 or parts[3] not in ("linear", "log"):
            raise ConfigError("--grid must be min:max:count:linear|log")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        vals = np.linspace(lo, hi, count) if parts[3] == "linear" else np.geomspace(lo, hi, count)
        grid = tuple(int(round(v)) for v in vals) if args.axis == "m" else tuple(vals.tolist())
    else:
        raise ConfigError("sweep requires --grid or --values")
    branches = _parse_branches(args.branch) if args.branch else (Branch.CARRIER,)
    m_values = _parse_ms(args.m) if args.m else ((0,) if args.axis != "m" else ())
    fixed = {k: v for k, v in params.items() if k != args.axis}
    spec = SweepSpec(axis=args.axis, grid=grid, fixed=fixed, branches=branches, m_values=m_values, n_pinned=args.nmax)
    rows = run_specs([spec], policy=_policy_from_args(args), threads=args.threads)
    return _emit_rows(args, "sweep", params, rows, with_moments=False)


_MOMENT_ROW_COLUMNS = (
    "nu",
    "omega0",
    "omega_rabi",
    "mass",
    "eta",
    "nbar",
    "w_mean",
    "w_second",
    "w_third",
    "w_skewness",
)
_ORACLE_COLUMNS = (
    "w_mean_numeric",
    "w_second_numeric",
    "w_third_numeric",
    "w_second_rel_dev",
    "w_third_rel_dev",
)


def _cmd_moments(args: argparse.Namespace) -> int:
    params = _effective_params(args)
    etas: tuple[float, ...]
    if args.eta is not None or "eta" in params:
        etas = (float(args.eta if args.eta is not None else params["eta"]),)
    elif args.preset:
        spec = figure_presets()[args.preset].specs[0]
        etas = tuple(float(v) for v in spec.grid) if spec.axis == "eta" else (0.5,)
    else:
        etas = (0.0,)

    use_oracle = bool(args.numeric_oracle)
    if use_oracle and params["omega0"] / params["nu"] > 1e3:
        raise ConfigError("--numeric-oracle needs desk-scale frequency ratios; add --desk-scale")

    columns = _MOMENT_ROW_COLUMNS + (_ORACLE_COLUMNS if use_oracle else ())
    writer = _Writer(args.format, args.out, columns, _meta_for(args, "moments", params, {"numeric_oracle": use_oracle}))
    try:
        for eta in etas:
            cfg = TrapIonConfig(
                mass=params["mass"],
                nu=params["nu"],
                omega0=params["omega0"],
                omega_rabi=params["omega_rabi"],
                phi_angle=params.get("phi_angle", 0.0),
            )
            thermal = ThermalSpec(nbar=params.get("nbar"), beta=params.get("beta"))
            quench = QuenchSpec(0, Branch.CARRIER)
            rp = reduce(cfg, quench, thermal, eta_override=eta)
            moments = moments_analytic(rp)
            row = {
                "nu": cfg.nu,
                "omega0": cfg.omega0,
                "omega_rabi": cfg.omega_rabi,
                "mass": cfg.mass,
                "eta": eta,
                "nbar": rp.nbar,
                "w_mean": moments.mean,
                "w_second": moments.second,
                "w_third": moments.third,
                "w_skewness": moments.skewness,
            }
            if use_oracle:
                n_trunc = args.nmax if args.nmax is not None else 80
                m1 = moments_numeric(rp, quench, n_trunc, 1).value
                m2 = moments_numeric(rp, quench, n_trunc, 2).value
                m3 = moments_numeric(rp, quench, n_trunc, 3).value
                row.update(
                    {
                        "w_mean_numeric": m1,
                        "w_second_numeric": m2,
                        "w_third_numeric": m3,
                        "w_second_rel_dev": abs(m2 - moments.second) / moments.second,
                        "w_third_rel_dev": abs(m3 - moments.third) / moments.third,
                    }
                )
            writer.write_row(row)
    finally:
        writer.close()
    return _EXIT_OK


def _cmd_spectrum(args: argparse.Namespace) -> int:
    params = _effective_params(args)
    branches = _parse_branches(args.branch) if args.branch else (Branch.CARRIER,)
    m_values = _parse_ms(args.m) if args.m else (0,)
    n_max = args.nmax if args.nmax is not None else 40
    columns = ("branch", "m", "kind", "n", "mu", "gamma")
    writer = _Writer(args.format, args.out, columns, _meta_for(args, "spectrum", params))
    try:
        for branch in branches:
            for m in m_values:
                quench = QuenchSpec(m, branch)
                cfg = TrapIonConfig(
                    mass=params["mass"],
                    nu=params["nu"],
                    omega0=params["omega0"],
                    omega_rabi=params["omega_rabi"],
                    phi_angle=params.get("phi_angle", 0.0),
                )
                thermal = ThermalSpec(nbar=params.get("nbar"), beta=params.get("beta"))
                rp = reduce(cfg, quench, thermal, eta_override=params.get("eta"))
                table = spectrum_table(quench.m, quench.branch, rp, n_max)
                for n, zeta in enumerate(table.edge):
                    writer.write_row(
                        {"branch": quench.branch.value, "m": quench.m, "kind": "edge", "n": n, "mu": float(zeta), "gamma": float("nan")}
                    )
                for n, (mu, gamma) in enumerate(table.pairs):
                    writer.write_row(
                        {"branch": quench.branch.value, "m": quench.m, "kind": "pair", "n": n, "mu": mu, "gamma": gamma}
                    )
    finally:
        writer.close()
    return _EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    results = run_checks(args.level, seed=args.seed)
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}")
    payload = {
        "level": args.level,
        "seed": args.seed,
        "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
        "all_passed": all(r.passed for r in results),
    }
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    else:
        print(json.dumps(payload))
    return _EXIT_OK if payload["all_passed"] else _EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ionquench", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_lag = sub.add_parser("lag", help="nonequilibrium lag rows (single point or preset grids)")
    _add_shared_flags(p_lag)
    p_lag.set_defaults(func=_cmd_lag)

    p_moments = sub.add_parser("moments", help="closed-form work moments, optional numeric oracle")
    _add_shared_flags(p_moments)
    p_moments.add_argument("--numeric-oracle", action="store_true", dest="numeric_oracle")
    p_moments.set_defaults(func=_cmd_moments)

    p_sweep = sub.add_parser("sweep", help="sweep one axis over an explicit grid")
    _add_shared_flags(p_sweep)
    p_sweep.add_argument("--axis", choices=("eta", "omega_rabi", "nbar", "nu", "m"))
    p_sweep.add_argument("--grid", type=str, help="min:max:count:linear|log")
    p_sweep.add_argument("--values", type=str, help="explicit comma list")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_spectrum = sub.add_parser("spectrum", help="dump the analytic spectrum table")
    _add_shared_flags(p_spectrum)
    p_spectrum.set_defaults(func=_cmd_spectrum)

    p_verify = sub.add_parser("verify", help="run the invariant suites")
    p_verify.add_argument("level", choices=("fast", "full"))
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--out", type=str, help="write the JSON report here")
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
