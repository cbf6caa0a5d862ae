"""Command-line driver: single runs, parameter sweeps, convergence studies,
and the first-order oracle comparison, with deterministic CSV/JSON outputs.

Exit codes: 0 success, 2 configuration error, 3 numerical divergence,
4 input/output error.  Failures print a one-line JSON error record to
stderr.  All files are written atomically (temp file + rename), so a failed
run never leaves a partial summary behind.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import config as cfgmod
from .analysis import (
    evolve_state,
    is_stationary,
    occupation_series,
    positivity_monitor,
    propagator_spectrum,
)
from .diagrams import BareTermConfig, compare_first_order
from .errors import ConfigError, DivergenceError, GridError, ParseError, SolverError
from .hybridization import FlatBandParams, flat_band_greater, flat_band_lesser
from .nca import solve_dyson


def _fmt(x):
    return repr(float(x))


def _atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(path.parent), prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_csv(path, header, rows):
    lines = [header]
    lines.extend(",".join(row) for row in rows)
    _atomic_write(path, "\n".join(lines) + "\n")


def _write_json(path, payload):
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


@dataclass
class RunResult:
    config: cfgmod.RunConfig
    times: np.ndarray
    occupation: np.ndarray
    trace_err: np.ndarray
    spectrum: object
    states: np.ndarray
    min_state_eigenvalue: float
    runtime_seconds: float

    @property
    def n_final(self):
        return float(self.occupation[-1])

    @property
    def stationary(self):
        return is_stationary(self.occupation)


def execute_run(cfg):
    """Solve one configuration and collect every analysis the outputs need."""
    start = time.perf_counter()
    prob, d = cfgmod.problem_from_config(cfg)
    hist = solve_dyson(prob)
    rho0 = cfgmod.initial_state_matrix(cfg)
    states = evolve_state(hist, rho0)
    times, nvals = occupation_series(hist, rho0, d)
    trace_err = np.abs(np.trace(states, axis1=1, axis2=2) - 1.0)
    spectrum = propagator_spectrum(hist)
    min_eig = float(positivity_monitor(states).min())
    runtime = time.perf_counter() - start
    return RunResult(
        config=cfg,
        times=times,
        occupation=nvals,
        trace_err=trace_err,
        spectrum=spectrum,
        states=states,
        min_state_eigenvalue=min_eig,
        runtime_seconds=runtime,
    )


def write_run_outputs(result, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    if cfg.outputs.occupation:
        rows = [
            (_fmt(t), _fmt(n), _fmt(e))
            for t, n, e in zip(result.times, result.occupation, result.trace_err)
        ]
        _write_csv(out / "occupation.csv", "t,n,trace_err", rows)
    if cfg.outputs.spectrum:
        n_eig = result.spectrum.eigenvalues.shape[1]
        header = "t," + ",".join(f"abs_lambda_{i}" for i in range(n_eig)) + ",unit_eig_err"
        rows = []
        for j, t in enumerate(result.times):
            mags = np.abs(result.spectrum.eigenvalues[j])
            rows.append(
                (_fmt(t), *(_fmt(m) for m in mags), _fmt(result.spectrum.unit_eigenvalue_error[j]))
            )
        _write_csv(out / "spectrum.csv", header, rows)
    if cfg.outputs.states:
        n = result.states.shape[1]
        cols = [f"{p}_rho_{a}{b}" for a in range(n) for b in range(n) for p in ("re", "im")]
        rows = []
        for j, t in enumerate(result.times):
            flat = result.states[j].reshape(-1)
            vals = []
            for z in flat:
                vals.extend((_fmt(z.real), _fmt(z.imag)))
            rows.append((_fmt(t), *vals))
        _write_csv(out / "states.csv", "t," + ",".join(cols), rows)
    summary = {
        "config_echo": cfgmod.config_to_dict(cfg),
        "max_trace_err": float(result.trace_err.max()),
        "max_unit_eig_err": float(result.spectrum.unit_eigenvalue_error.max()),
        "min_state_eigenvalue": result.min_state_eigenvalue,
        "n_final": result.n_final,
        "runtime_seconds": result.runtime_seconds,
        "solver_steps": int(len(result.times) - 1),
    }
    _write_json(out / "summary.json", summary)


def _load_config(args):
    if args.preset:
        spec = cfgmod.preset(args.preset)
        cfg, spec_param, spec_values = spec.config, spec.sweep_param, spec.sweep_values
    else:
        cfg, spec_param, spec_values = cfgmod.load_run_config(args.config), None, ()
    if getattr(args, "out_dir", None):
        cfg = replace(cfg, outputs=replace(cfg.outputs, out_dir=args.out_dir))
    return cfg, spec_param, spec_values


def cmd_run(args):
    cfg, _, _ = _load_config(args)
    result = execute_run(cfg)
    write_run_outputs(result, cfg.outputs.out_dir)
    print(f"run complete: {len(result.times) - 1} steps, n_final = {result.n_final:.6f}")
    return 0


_SWEEPABLE = ("eta", "w", "gamma_d", "eps0")


def _apply_sweep_value(cfg, param, value):
    if param in ("eta", "w"):
        if cfg.bath.kind != "flat_band":
            raise ConfigError("param", f"sweep over {param} needs a flat_band bath")
        return replace(cfg, bath=replace(cfg.bath, **{param: float(value)}))
    return replace(cfg, model=replace(cfg.model, **{param: float(value)}))


def cmd_sweep(args):
    cfg, spec_param, spec_values = _load_config(args)
    param = args.param or spec_param
    if param is None:
        raise ConfigError("param", "no sweep parameter given (and the preset has none)")
    if param not in _SWEEPABLE:
        raise ConfigError("param", f"unknown sweep parameter {param!r}, expected one of {_SWEEPABLE}")
    if args.values is not None:
        values = _parse_float_list(args.values, "values")
    elif param == spec_param:
        values = list(spec_values)
    else:
        raise ConfigError("values", f"no values given for sweep parameter {param!r}")
    values = sorted(float(v) for v in values)

    def one(value):
        return execute_run(_apply_sweep_value(cfg, param, value))

    if args.jobs > 1 and len(values) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(one, values))
    else:
        results = [one(v) for v in values]

    out = Path(cfg.outputs.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [
        (_fmt(v), _fmt(r.n_final), "true" if r.stationary else "false")
        for v, r in zip(values, results)
    ]
    _write_csv(out / f"sweep_{param}.csv", f"{param},n_final,stationary_flag", rows)
    if args.keep_runs:
        for v, r in zip(values, results):
            sub = out / "runs" / f"{param}_{_fmt(v)}"
            write_run_outputs(r, sub)
    print(f"sweep over {param}: {len(values)} runs")
    return 0


def _parse_float_list(text, field):
    items = [p for p in (s.strip() for s in text.split(",")) if p]
    try:
        return [float(p) for p in items]
    except ValueError as exc:
        raise ConfigError(field, f"expected comma-separated numbers: {exc}") from None


def cmd_converge(args):
    cfg, _, _ = _load_config(args)
    dts = _parse_float_list(args.dts, "dts")
    if len(dts) < 3:
        raise ConfigError("dts", "need at least three step sizes")
    for a, b in zip(dts, dts[1:]):
        if b > a:
            raise ConfigError("dts", "step sizes must be non-increasing")
        ratio = a / b
        if abs(ratio - 1.0) > 1e-9 and abs(ratio - 2.0) > 1e-9:
            raise ConfigError("dts", f"incompatible grids: ratio {ratio} is neither 1 nor 2")

    series = []
    for dt in dts:
        run_cfg = replace(cfg, grid=replace(cfg.grid, dt=float(dt)))
        result = execute_run(run_cfg)
        series.append((float(dt), result.occupation))

    coarse_dt = series[0][0]
    diffs = []
    for (dt_a, n_a), (dt_b, n_b) in zip(series, series[1:]):
        stride_a = int(round(coarse_dt / dt_a))
        stride_b = int(round(coarse_dt / dt_b))
        m = min((len(n_a) - 1) // stride_a, (len(n_b) - 1) // stride_b)
        sub_a = n_a[: m * stride_a + 1 : stride_a]
        sub_b = n_b[: m * stride_b + 1 : stride_b]
        diffs.append(float(np.abs(sub_a - sub_b).max()))

    orders = []
    for d_a, d_b in zip(diffs, diffs[1:]):
        if d_a > 0 and d_b > 0:
            orders.append(math.log2(d_a / d_b))
    order_defined = bool(orders) and all(d > 0 for d in diffs)
    report = {
        "dts": [float(d) for d in dts],
        "max_abs_differences": diffs,
        "pairwise_orders": orders,
        "order": (sum(orders) / len(orders)) if order_defined else None,
        "order_defined": order_defined,
    }
    out = Path(cfg.outputs.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(out / "converge.json", report)
    if order_defined:
        print(f"convergence order: {report['order']:.3f}")
    else:
        print("convergence order undefined (zero differences); flagged in report")
    return 0


def _bath_evaluators(cfg):
    if cfg.bath.kind == "flat_band":
        params = FlatBandParams(cfg.bath.eta, cfg.bath.w)
        return (lambda t: flat_band_lesser(t, params)), (lambda t: flat_band_greater(t, params))
    raise ConfigError("bath.kind", "the oracle comparison needs closed forms (flat_band)")


def cmd_oracle(args):
    cfg, _, _ = _load_config(args)
    if args.t > cfg.grid.t_max:
        raise ConfigError("t", f"comparison time {args.t} exceeds t_max = {cfg.grid.t_max}")
    prob, _ = cfgmod.problem_from_config(cfg)
    lesser, greater = _bath_evaluators(cfg)
    bare_cfg = BareTermConfig(prob=prob, quad_dt=args.quad_dt, lesser=lesser, greater=greater)
    _, _, deviation = compare_first_order(args.t, bare_cfg)
    passed = bool(deviation < 1e-3)
    out = Path(cfg.outputs.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _write_json(
        out / "oracle.json",
        {
            "t": float(args.t),
            "quad_dt": float(args.quad_dt),
            "max_rel_deviation": float(deviation),
            "pass": passed,
        },
    )
    print(f"{'PASS' if passed else 'FAIL'}: max relative deviation {deviation:.3e}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ncasolver",
        description="Dressed-propagator solver for an impurity with Markovian "
        "and non-Markovian dissipation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="path to a JSON run configuration")
        src.add_argument("--preset", choices=cfgmod.PRESET_NAMES, help="built-in parameter set")
        p.add_argument("--out-dir", help="override the output directory")

    p_run = sub.add_parser("run", help="solve one configuration and write its outputs")
    add_common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="one run per parameter value, aggregated CSV")
    add_common(p_sweep)
    p_sweep.add_argument("--param", choices=_SWEEPABLE, help="parameter to sweep")
    p_sweep.add_argument("--values", help="comma-separated values (preset default otherwise)")
    p_sweep.add_argument("--jobs", type=int, default=1, help="max concurrent runs")
    p_sweep.add_argument("--keep-runs", action="store_true", help="retain per-run outputs")
    p_sweep.set_defaults(func=cmd_sweep)

    p_conv = sub.add_parser("converge", help="self-convergence study over step sizes")
    add_common(p_conv)
    p_conv.add_argument("--dts", required=True, help="comma-separated step sizes, halving")
    p_conv.set_defaults(func=cmd_converge)

    p_oracle = sub.add_parser("oracle", help="first-order quadrature vs kernel iterate")
    add_common(p_oracle)
    p_oracle.add_argument("--t", type=float, required=True, help="comparison time")
    p_oracle.add_argument("--quad-dt", type=float, required=True, help="quadrature step")
    p_oracle.set_defaults(func=cmd_oracle)
    return parser


def _error_record(exc):
    record = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("field", "reason", "step", "path", "line"):
        value = getattr(exc, attr, None)
        if value is not None:
            record[attr] = value
    return record


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(json.dumps(_error_record(exc)), file=sys.stderr)
        return 2
    except DivergenceError as exc:
        print(json.dumps(_error_record(exc)), file=sys.stderr)
        return 3
    except (ParseError, GridError, OSError) as exc:
        print(json.dumps(_error_record(exc)), file=sys.stderr)
        return 4
    except SolverError as exc:
        print(json.dumps(_error_record(exc)), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
