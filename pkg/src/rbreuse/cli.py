"""Command-line surface: optimization queries, simulation sweeps, cost
calibration, decay fitting, and the verification suite.

Commands
--------
optimize    closed-form reuse-count optima from (Y, Z) and a cost model
simulate    run a config file: moment sweeps or full decay simulations
calibrate   fit the ladder cost model to a runtime CSV
rb-fit      fit a decay CSV and report the quality parameter and fidelity
verify      run the verification checks and exit nonzero on failure

Global flags: ``--seed`` (overrides the config seed), ``--format {csv,json}``
for machine-readable output, ``--out DIR`` for output files, ``--threads K``
(worker threads; never changes numerical output).

Exit codes: 0 ok, 2 usage or config error, 3 degenerate statistics,
4 numerical violation, 5 verification failure.

Config files are JSON with a ``schema_version`` field; unknown keys are
rejected.  The ``noise`` entry uses the textual channel grammar (see
:mod:`rbreuse.noise`); a sweep replaces the ``$name`` placeholder in the
noise string with each grid value, reusing the same random substreams across
grid points (common random numbers).  Example::

    {
      "schema_version": 1,
      "noise": "compose(amplitude_damping(0.999), phase_damping($p2))",
      "protocol": {"n_qubits": 1, "lengths": [10], "n_sequences": 50000,
                   "reuse": 100, "rho": "zeros", "effect": "zeros", "seed": 7},
      "cost": {"model": "constant", "alpha": 4.0, "beta": 1.0},
      "sweep": {"parameter": "p2", "grid": [0.98, 0.985, 0.99, 0.995, 0.999]},
      "output": {"directory": "out", "formats": ["csv", "svg"]}
    }

Without a ``sweep`` section the protocol runs as a decay simulation and
writes ``decay.csv`` plus ``records.csv``; with one it writes ``sweep.csv``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import optimize as opt
from . import tables, verification
from .calibrate import CalibrationError, fit_ladder, ladder_bounds
from .liouville import EffectVec, ProbabilityBoundError, StateVec, zeros_effect, zeros_state
from .noise import parse_noise
from .protocol import DecayFitError, RBConfig, estimate_AB, fit_decay, run_rb

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_NUMERICAL = 4
EXIT_VERIFY = 5


class ConfigError(ValueError):
    """Config file contents rejected by schema validation."""


# ---------------------------------------------------------------------------
# config loading
# ---------------------------------------------------------------------------

_PROTOCOL_KEYS = {
    "n_qubits": True, "lengths": True, "n_sequences": True, "reuse": False,
    "rho": False, "effect": False, "seed": True,
}
_COST_KEYS_BY_MODEL = {
    "constant": {"model", "alpha", "beta"},
    "ladder": {"model", "c1", "c2", "rc"},
    "bounded": {"model", "alpha_l", "beta_l", "alpha_u", "beta_u"},
}
_TOP_KEYS = {"schema_version": True, "noise": True, "protocol": True,
             "cost": False, "sweep": False, "output": False}
_SWEEP_KEYS = {"parameter": True, "grid": True}
_OUTPUT_KEYS = {"directory": False, "formats": False}


def _check_keys(section: dict, allowed: dict[str, bool], where: str) -> None:
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")
    missing = {k for k, required in allowed.items() if required} - set(section)
    if missing:
        raise ConfigError(f"missing keys in {where}: {sorted(missing)}")


def _load_config(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    _check_keys(raw, _TOP_KEYS, "config")
    if raw["schema_version"] != 1:
        raise ConfigError(f"unsupported schema_version {raw['schema_version']!r}")
    _check_keys(raw["protocol"], _PROTOCOL_KEYS, "protocol")
    if "cost" in raw:
        model = raw["cost"].get("model")
        if model not in _COST_KEYS_BY_MODEL:
            raise ConfigError(f"unknown cost model {model!r}")
        unknown = set(raw["cost"]) - _COST_KEYS_BY_MODEL[model]
        missing = _COST_KEYS_BY_MODEL[model] - set(raw["cost"])
        if unknown or missing:
            raise ConfigError(
                f"cost section keys: unknown {sorted(unknown)}, missing {sorted(missing)}"
            )
    if "sweep" in raw:
        _check_keys(raw["sweep"], _SWEEP_KEYS, "sweep")
    if "output" in raw:
        _check_keys(raw["output"], _OUTPUT_KEYS, "output")
    return raw


def _state_from_config(value, n_qubits: int) -> StateVec:
    if value in (None, "zeros"):
        return zeros_state(n_qubits)
    return StateVec(n_qubits, np.asarray(value, dtype=float))


def _effect_from_config(value, n_qubits: int) -> EffectVec:
    if value in (None, "zeros"):
        return zeros_effect(n_qubits)
    return EffectVec(n_qubits, np.asarray(value, dtype=float))


def _cost_from_config(section: dict):
    model = section["model"]
    if model == "constant":
        return opt.ConstantCost(section["alpha"], section["beta"])
    if model == "ladder":
        return opt.LadderCost(section["c1"], section["c2"], section["rc"])
    return opt.BoundedCost(
        section["alpha_l"], section["beta_l"], section["alpha_u"], section["beta_u"]
    )


# ---------------------------------------------------------------------------
# optimize
# ---------------------------------------------------------------------------


def _optimize_report(args) -> tuple[dict, bool]:
    y, z = args.Y, args.Z
    if y < 0 or z < 0:
        raise ValueError("Y and Z must be nonnegative")
    out: dict = {"Y": y, "Z": z}
    degenerate = False
    if args.constant:
        alpha, beta = args.constant
        report = opt.optimal_R_constant(y, z, alpha, beta)
        out["cost_model"] = f"constant(alpha={alpha:g}, beta={beta:g})"
    elif args.ladder:
        c1, c2, rc = args.ladder
        report = opt.optimal_R_ladder(y, z, c1, c2, int(rc))
        out["cost_model"] = f"ladder(c1={c1:g}, c2={c2:g}, rc={int(rc)})"
    else:
        al, bl, au, bu = args.bounded
        cost = opt.BoundedCost(al, bl, au, bu)
        r0, factor = opt.near_optimal(cost)
        out["cost_model"] = (
            f"bounded(alpha_l={al:g}, beta_l={bl:g}, alpha_u={au:g}, beta_u={bu:g})"
        )
        out.update(
            {"r_star_real": "", "r_star": "", "variance_at_optimum": "",
             "r0": r0, "guarantee_factor": factor, "speedup_vs_one": ""}
        )
        if y > 0 and z > 0:
            lo, hi = opt.optimal_interval_bounded(y, z, cost)
            out["interval_lo"], out["interval_hi"] = lo, hi
        else:
            out["interval_lo"] = out["interval_hi"] = ""
            degenerate = True
        return out, degenerate

    if report.degenerate:
        r_star_text = "degenerate"
        degenerate = True
    elif report.unbounded:
        r_star_text = "unbounded"
        degenerate = True
    else:
        r_star_text = report.r_star
        if report.r_star_real == 0.0:
            degenerate = True  # Y = 0: raw optimum 0, clamped to 1
    out.update(
        {
            "r_star_real": report.r_star_real,
            "r_star": r_star_text,
            "variance_at_optimum": report.variance_at_optimum,
            "r0": report.r0,
            "guarantee_factor": report.guarantee_factor,
            "speedup_vs_one": report.speedup_vs_one,
            "interval_lo": "",
            "interval_hi": "",
        }
    )
    if args.T0:
        out["T0"] = args.T0
        if not (report.degenerate or report.unbounded):
            out["variance_absolute"] = report.variance_at_optimum / args.T0
    return out, degenerate


def cmd_optimize(args) -> int:
    try:
        out, degenerate = _optimize_report(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        print(json.dumps(out, indent=2))
    elif args.format == "csv":
        keys = list(out)
        print(",".join(keys))
        print(",".join(str(out[k]) for k in keys))
    else:
        for key, value in out.items():
            print(f"{key:22s} {value}")
    if degenerate:
        print("marker: degenerate statistics (Y or Z vanishes)", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def _emit_svg(path: Path, xs, series: dict[str, list], xlabel: str, ylabel: str,
              logy: bool = False) -> None:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "rbreuse"
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, ys in series.items():
        ax.plot(xs, ys, marker="o", label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if logy:
        ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _run_sweep(config: dict, out_dir: Path, seed: int, threads: int,
               formats: list[str]) -> None:
    proto = config["protocol"]
    n = proto["n_qubits"]
    rho = _state_from_config(proto.get("rho"), n)
    effect = _effect_from_config(proto.get("effect"), n)
    if "cost" not in config:
        raise ConfigError("sweep mode needs a cost section")
    cost = _cost_from_config(config["cost"])
    if isinstance(cost, opt.BoundedCost):
        raise ConfigError("sweep mode needs a concrete cost model (constant or ladder)")
    name = config["sweep"]["parameter"]
    placeholder = f"${name}"
    if placeholder not in config["noise"]:
        raise ConfigError(f"noise string does not contain the placeholder {placeholder}")
    rows = []
    for value in config["sweep"]["grid"]:
        spec = parse_noise(config["noise"].replace(placeholder, repr(float(value))))
        for m in proto["lengths"]:
            pair = estimate_AB(spec, int(m), rho, effect, proto["n_sequences"],
                               seed, threads=threads)
            y, z = pair.snapped_yz()
            if isinstance(cost, opt.ConstantCost):
                report = opt.optimal_R_constant(y, z, cost.alpha, cost.beta)
            else:
                report = opt.optimal_R_ladder(y, z, cost.c1, cost.c2, cost.rc)
            rows.append(
                {
                    "param": name, "value": float(value), "m": int(m),
                    "A": pair.a, "B": pair.b, "Y": pair.y, "Z": pair.z,
                    "stderr_A": pair.stderr_a, "stderr_B": pair.stderr_b,
                    "R_star": report.r_star,
                    "V_at_1": opt.unit_variance(y, z, cost, 1),
                    "V_at_R0": opt.unit_variance(y, z, cost, report.r0),
                    "V_at_Rstar": report.variance_at_optimum,
                }
            )
    (out_dir / "sweep.csv").write_text(tables.write_sweep_csv(rows))
    if "svg" in formats:
        xs = [r["value"] for r in rows]
        _emit_svg(
            out_dir / "sweep.svg", xs,
            {
                "V at R=1": [r["V_at_1"] for r in rows],
                "V at R0": [r["V_at_R0"] for r in rows],
                "V at R*": [r["V_at_Rstar"] for r in rows],
            },
            xlabel=name, ylabel="unit-budget variance", logy=True,
        )


def _run_decay(config: dict, out_dir: Path, seed: int, threads: int,
               formats: list[str]) -> None:
    proto = config["protocol"]
    n = proto["n_qubits"]
    if "reuse" not in proto:
        raise ConfigError("decay mode needs protocol.reuse")
    rb_config = RBConfig(
        n_qubits=n,
        noise=parse_noise(config["noise"]),
        lengths=tuple(proto["lengths"]),
        n_sequences=proto["n_sequences"],
        reuse=proto["reuse"],
        rho=_state_from_config(proto.get("rho"), n),
        effect=_effect_from_config(proto.get("effect"), n),
        seed=seed,
    )
    result = run_rb(rb_config, threads=threads)
    (out_dir / "decay.csv").write_text(tables.write_decay_csv(result.rows))
    (out_dir / "records.csv").write_text(tables.write_records_csv(result.records))
    if "svg" in formats:
        m, mean, _ = result.decay_points()
        _emit_svg(out_dir / "decay.svg", list(m), {"mean survival": list(mean)},
                  xlabel="sequence length m", ylabel="mean survival")


def cmd_simulate(args) -> int:
    try:
        config = _load_config(args.config)
        seed = args.seed if args.seed is not None else config["protocol"]["seed"]
        output = config.get("output", {})
        out_dir = Path(args.out or output.get("directory", "."))
        out_dir.mkdir(parents=True, exist_ok=True)
        formats = output.get("formats", ["csv"])
        if "sweep" in config:
            _run_sweep(config, out_dir, seed, args.threads, formats)
        else:
            _run_decay(config, out_dir, seed, args.threads, formats)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ProbabilityBoundError as exc:
        print(f"numerical violation: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


# ---------------------------------------------------------------------------
# calibrate
# ---------------------------------------------------------------------------


def cmd_calibrate(args) -> int:
    try:
        records = tables.read_runtime_csv(Path(args.csv).read_text())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    candidates = [int(x) for x in args.rc_candidates.split(",")]
    try:
        fit = fit_ladder(records, candidates)
    except CalibrationError as exc:
        print(f"calibration failure: {exc}", file=sys.stderr)
        for rc, note in getattr(exc, "diagnostics", {}).items():
            print(f"  rc={rc}: {note}", file=sys.stderr)
        return EXIT_DEGENERATE
    report_rows = [
        {
            "R": r.reuse, "N": r.n_sequences, "T": r.seconds, "T0_pred": pred,
            "ratio": pred / r.seconds,
        }
        for r, pred in zip(records, fit.predicted)
    ]
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "calibration_report.csv").write_text(tables.write_report_csv(report_rows))
    bounds = ladder_bounds(fit)
    r0, factor = opt.near_optimal(bounds)
    summary = {
        "c1": fit.c1, "c2": fit.c2, "rc": fit.rc, "residual": fit.residual,
        "r0": r0, "guarantee_factor": factor,
    }
    if args.format == "json":
        print(json.dumps(summary, indent=2))
    elif args.format == "csv":
        print(",".join(summary))
        print(",".join(str(v) for v in summary.values()))
    else:
        print(f"c1 = {fit.c1:.6f} s/batch")
        print(f"c2 = {fit.c2:.6f} s/circuit")
        print(f"rc = {fit.rc}")
        print(f"relative RMS residual = {fit.residual:.5f}")
        print(f"near-optimal reuse count R0 = {r0} (factor {factor:.4f})")
    return EXIT_OK


# ---------------------------------------------------------------------------
# rb-fit
# ---------------------------------------------------------------------------


def cmd_rb_fit(args) -> int:
    try:
        rows = tables.read_decay_csv(Path(args.csv).read_text())
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    m = np.array([r.length for r in rows], dtype=float)
    mean = np.array([r.mean for r in rows])
    var = np.array([r.variance for r in rows])
    counts = np.array([r.n_sequences for r in rows], dtype=float)
    d = 2.0**args.n_qubits
    baseline = args.baseline if args.baseline is not None else 1.0 / d
    weights = None
    if np.all(np.isfinite(var)) and np.all(var > 0):
        weights = counts / var  # inverse variance of the mean
    warning = ""
    try:
        fit = fit_decay(m, mean, weights=weights, baseline_guess=baseline)
        a, f, b = fit.a, fit.f, fit.b
        stderr_f = fit.stderr[1]
    except DecayFitError as exc:
        spread = float(mean.max() - mean.min())
        if spread <= 1e-9:
            # flat data: no decay is observable, report the boundary value
            a, f, b = float(mean[0]) - baseline, 1.0, baseline
            stderr_f = float("nan")
            warning = "no decay observed; reporting f at the boundary value 1"
        else:
            print(f"fit error: {exc}", file=sys.stderr)
            return EXIT_DEGENERATE
    f_avg = f + (1.0 - f) / d
    out = {"a": a, "f": f, "b": b, "stderr_f": stderr_f, "F_avg": f_avg}
    if args.format == "json":
        out["warning"] = warning
        print(json.dumps(out, indent=2))
    elif args.format == "csv":
        print(",".join(out))
        print(",".join(str(v) for v in out.values()))
    else:
        for key, value in out.items():
            print(f"{key:10s} {value}")
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    only = args.only.split(",") if args.only else None
    results = verification.run_checks(quick=args.quick, only=only)
    if not results:
        print("error: no checks selected", file=sys.stderr)
        return EXIT_USAGE
    failed = 0
    for result in results:
        print(result.line())
        failed += not result.passed
    total = sum(r.elapsed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed in {total:.1f}s")
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rbreuse",
        description="randomized benchmarking with circuit reusing: simulation, "
        "variance-optimal reuse counts, and cost calibration",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="override the configuration seed")
    parser.add_argument("--format", choices=("text", "csv", "json"), default="text",
                        help="stdout format for reports")
    parser.add_argument("--out", default=None, help="output directory for files")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads (does not change numerical output)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="closed-form optimal reuse counts")
    p_opt.add_argument("--Y", type=float, required=True,
                       help="mean within-circuit shot variance")
    p_opt.add_argument("--Z", type=float, required=True,
                       help="between-circuit variance of expectations")
    p_opt.add_argument("--T0", type=float, default=None, help="total budget (optional)")
    group = p_opt.add_mutually_exclusive_group(required=True)
    group.add_argument("--constant", nargs=2, type=float, metavar=("ALPHA", "BETA"),
                       help="t(R) = alpha + beta R")
    group.add_argument("--ladder", nargs=3, type=float, metavar=("C1", "C2", "RC"),
                       help="t(R) = c1 ceil(R/rc) + c2")
    group.add_argument("--bounded", nargs=4, type=float,
                       metavar=("ALPHA_L", "BETA_L", "ALPHA_U", "BETA_U"),
                       help="only bounds on t(R) are known")
    p_opt.set_defaults(func=cmd_optimize)

    p_sim = sub.add_parser("simulate", help="run a simulation config (sweep or decay)")
    p_sim.add_argument("config", help="path to a JSON config file")
    p_sim.set_defaults(func=cmd_simulate)

    p_cal = sub.add_parser("calibrate", help="fit the ladder cost model to runtimes")
    p_cal.add_argument("csv", help="runtime table (header R,N,T_seconds)")
    p_cal.add_argument("--rc-candidates", default="1,10,50,100,200,500",
                       help="comma-separated batch-size candidates")
    p_cal.set_defaults(func=cmd_calibrate)

    p_fit = sub.add_parser("rb-fit", help="fit a decay table")
    p_fit.add_argument("csv", help="decay table (header m,mean,variance,N,R)")
    p_fit.add_argument("--n-qubits", type=int, default=1)
    p_fit.add_argument("--baseline", type=float, default=None,
                       help="asymptote initializer (default Tr(Q)/d = 1/d)")
    p_fit.set_defaults(func=cmd_rb_fit)

    p_ver = sub.add_parser("verify", help="run the verification suite")
    p_ver.add_argument("--quick", action="store_true",
                       help="smaller sampled sizes (smoke test)")
    p_ver.add_argument("--only", default=None,
                       help="comma-separated check names to run")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
