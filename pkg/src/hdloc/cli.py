"""Command-line interface.

Subcommands:
    test      run one location test on a CSV data file
    simulate  reproduce a study table (T1-T4) or run a single config cell
    are       estimate the efficiency ratios
    check     run the fast self-check suite (oracle equality, moment
              identities, null calibration)

Exit codes signal operational failures only; a statistical rejection never
changes the exit code.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

TABLE_CHOICES = ("T1", "T2", "T3", "T4")
TEST_CHOICES = ("sr", "ss", "cq", "tsr")

CONFIG_KEYS = {
    "scenario": str, "rho": float, "n": int, "p": int, "allocation": str,
    "signal": float, "tests": str, "alpha": float, "reps": int,
    "master_seed": int, "size_corrected": bool, "null_reps": int,
    "trace_mode": str, "share_calibrated": bool,
}


def _default_seed(value):
    if value is not None:
        return value
    env = os.environ.get("HDLOC_SEED")
    return int(env) if env else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hdloc",
                                     description="High-dimensional one-sample location tests")
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run a test on a CSV file (rows = observations)")
    p_test.add_argument("data", help="numeric CSV, n rows x p columns")
    p_test.add_argument("--test", dest="test_name", choices=TEST_CHOICES, default="sr")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument("--trace-mode", choices=("full", "reduced"), default="reduced")
    p_test.add_argument("--skip-header", action="store_true",
                        help="skip one header row before parsing")

    p_sim = sub.add_parser("simulate", help="reproduce a table or run one config cell")
    p_sim.add_argument("--table", choices=TABLE_CHOICES)
    p_sim.add_argument("--config", help="key = value config file for a single cell")
    p_sim.add_argument("--reps", type=int)
    p_sim.add_argument("--null-reps", type=int, dest="null_reps")
    p_sim.add_argument("--alpha", type=float, default=0.05)
    p_sim.add_argument("--seed", type=int)
    p_sim.add_argument("--threads", default="1", help='worker count or "auto"')
    p_sim.add_argument("--trace-mode", choices=("full", "reduced"), default="reduced")
    p_sim.add_argument("--out-dir", default="results")
    p_sim.add_argument("--format", choices=("csv", "md"), default="md",
                       help="console rendering (files are always written in both formats)")

    p_are = sub.add_parser("are", help="estimate asymptotic relative efficiencies")
    p_are.add_argument("--p", type=int, default=2000)
    p_are.add_argument("--reps", type=int, default=10000)
    p_are.add_argument("--seed", type=int)
    p_are.add_argument("--out-dir", default="results")
    p_are.add_argument("--format", choices=("csv", "md"), default="md")

    p_check = sub.add_parser("check", help="run the fast self-check suite")
    p_check.add_argument("--seed", type=int)

    return parser


# ---------------------------------------------------------------------------
# test
# ---------------------------------------------------------------------------

def _read_csv_matrix(path: str, skip_header: bool) -> np.ndarray:
    rows = []
    try:
        fh = open(path, newline="")
    except OSError as exc:
        raise SystemExit(f"error: cannot open {path}: {exc}")
    with fh:
        reader = csv.reader(fh)
        width = None
        for lineno, row in enumerate(reader, start=1):
            if skip_header and lineno == 1:
                continue
            if not row:
                continue
            data_row = len(rows) + 1
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise SystemExit(
                    f"error: {path}: row {data_row} has {len(row)} columns, expected {width}")
            values = []
            for col, cell in enumerate(row, start=1):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise SystemExit(
                        f"error: {path}: row {data_row}, column {col}: "
                        f"could not parse {cell.strip()!r} as a number")
            rows.append(values)
    if not rows:
        raise SystemExit(f"error: {path}: no data rows")
    return np.asarray(rows, dtype=np.float64)


def _cmd_test(args) -> int:
    from . import stats

    X = _read_csv_matrix(args.data, args.skip_header)
    n, p = X.shape
    print(f"data: {args.data}  (n={n}, p={p})")
    try:
        if args.test_name == "tsr":
            raw = stats.tsr_statistic(X)
            print("test: tsr")
            print(f"statistic: {raw:.6g}")
            print("p_value: n/a (calibrate with `hdloc simulate` critical values)")
            return 0
        if args.test_name == "sr":
            res = stats.sr_test(X, alpha=args.alpha, trace_mode=args.trace_mode)
        elif args.test_name == "ss":
            res = stats.ss_test(X, alpha=args.alpha)
        else:
            res = stats.cq_test(X, alpha=args.alpha)
    except ValueError as exc:
        raise SystemExit(f"error: {exc}")
    print(f"test: {res.test}")
    print(f"statistic: {res.raw:.6g}")
    if res.trace_hat is not None:
        print(f"trace_hat: {res.trace_hat:.6g}")
    print(f"sigma_hat: {res.sigma_hat:.6g}")
    print(f"z: {res.z:.6g}")
    print(f"p_value: {res.p_value:.6g}")
    print(f"reject at alpha={res.alpha:g}: {res.reject}")
    return 0


# ---------------------------------------------------------------------------
# simulate / are
# ---------------------------------------------------------------------------

def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _read_config(path: str) -> dict:
    values = {}
    try:
        fh = open(path)
    except OSError as exc:
        raise SystemExit(f"error: cannot open {path}: {exc}")
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"error: {path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in CONFIG_KEYS:
                raise SystemExit(f"error: {path}:{lineno}: unknown key {key!r}")
            caster = CONFIG_KEYS[key]
            try:
                values[key] = _parse_bool(value) if caster is bool else caster(value)
            except ValueError as exc:
                raise SystemExit(f"error: {path}:{lineno}: {exc}")
    return values


def _config_from_file(path: str, args) -> "ExperimentConfig":
    from .core_math import ScatterSpec
    from .samplers import ScenarioSpec
    from .simharness import ExperimentConfig

    values = _read_config(path)
    for required in ("scenario", "n", "p", "allocation"):
        if required not in values:
            raise SystemExit(f"error: {path}: missing required key {required!r}")
    p = values["p"]
    scatter = ScatterSpec.toeplitz(values.get("rho", 0.5), p)
    scenario = ScenarioSpec.from_label(values["scenario"], scatter)
    tests = tuple(t.strip() for t in values.get("tests", "cq,ss,sr").split(","))
    try:
        return ExperimentConfig(
            scenario=scenario, n=values["n"], p=p, allocation=values["allocation"],
            signal=values.get("signal", 0.05), tests=tests,
            alpha=values.get("alpha", args.alpha),
            reps=args.reps if args.reps is not None else values.get("reps", 2500),
            master_seed=_default_seed(args.seed if args.seed is not None
                                      else values.get("master_seed")),
            size_corrected=values.get("size_corrected", False),
            null_reps=(args.null_reps if args.null_reps is not None
                       else values.get("null_reps", 2500)),
            trace_mode=values.get("trace_mode", args.trace_mode),
            share_calibrated=values.get("share_calibrated", False),
        )
    except ValueError as exc:
        raise SystemExit(f"error: {path}: {exc}")


def _write_artifact(art, out_dir: str, console_format: str) -> None:
    from .report import artifact_to_csv, artifact_to_markdown

    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, f"table_{art.table_id}")
    csv_text = artifact_to_csv(art)
    md_text = artifact_to_markdown(art)
    with open(base + ".csv", "w") as fh:
        fh.write(csv_text)
    with open(base + ".md", "w") as fh:
        fh.write(md_text)
    print(md_text if console_format == "md" else csv_text)
    print(f"wrote {base}.csv and {base}.md  (wall {art.meta.get('wall_time')}s)")


def _cmd_simulate(args) -> int:
    from .simharness import run_experiment
    from .tables import run_table

    threads = args.threads if args.threads == "auto" else int(args.threads)
    if (args.table is None) == (args.config is None):
        raise SystemExit("error: simulate needs exactly one of --table or --config")
    if args.table:
        art = run_table(args.table, reps=args.reps, null_reps=args.null_reps,
                        master_seed=_default_seed(args.seed), alpha=args.alpha,
                        threads=threads, results_dir=args.out_dir,
                        trace_mode=args.trace_mode, are_reps=args.reps)
        _write_artifact(art, args.out_dir, args.format)
        return 0
    config = _config_from_file(args.config, args)
    table = run_experiment(config, results_dir=args.out_dir, threads=threads)
    print(f"cell {table.key}  scenario {config.scenario.label} n={config.n} p={config.p} "
          f"allocation={config.allocation}")
    for row in table.rows:
        print(f"  {row.test}: rejection_rate={100 * row.rejection_rate:.2f}% "
              f"(+-{100 * row.mc_stderr:.2f}), reps={row.reps}")
    return 0


def _cmd_are(args) -> int:
    from .tables import run_table

    art = run_table("T1", master_seed=_default_seed(args.seed),
                    are_p=args.p, are_reps=args.reps)
    _write_artifact(art, args.out_dir, args.format)
    return 0


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

def _cmd_check(args) -> int:
    from .selfcheck import run_self_checks

    results = run_self_checks(master_seed=_default_seed(args.seed))
    failed = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        failed += 0 if res.passed else 1
        print(f"[{status}] {res.name}: {res.detail}")
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "test":
        return _cmd_test(args)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "are":
        return _cmd_are(args)
    return _cmd_check(args)


if __name__ == "__main__":
    sys.exit(main())
