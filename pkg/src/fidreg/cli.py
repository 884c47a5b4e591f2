"""Command-line interface: ``fidreg fit | inspect | simulate``."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from .core import Dataset, EmptyClass
from .inference import DEFAULT_LEVELS, MIN_DRAWS
from .pipeline import fiducial_fit, scored_class
from .simharness import CSV_HEADER, SimConfig, csv_rows, run_experiment

log = logging.getLogger("fidreg")

EXIT_OK, EXIT_INPUT, EXIT_EMPTY = 0, 2, 3


class InputError(ValueError):
    pass


def read_numeric_csv(path) -> tuple[np.ndarray, list[str] | None]:
    """Numeric CSV with an optional header row; rejects blanks, NaN and inf."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if not rows:
        raise InputError(f"{path}: no data")
    header = None
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        header = [c.strip() for c in rows[0]]
        rows = rows[1:]
    if not rows:
        raise InputError(f"{path}: header but no data rows")
    width = len(rows[0])
    out = np.empty((len(rows), width))
    for i, r in enumerate(rows, start=1):
        if len(r) != width:
            raise InputError(f"{path}: data row {i} has {len(r)} columns, expected {width}")
        for j, cell in enumerate(r, start=1):
            try:
                v = float(cell)
            except ValueError:
                raise InputError(f"{path}: data row {i}, column {j}: not a number: {cell!r}") from None
            if not math.isfinite(v):
                raise InputError(f"{path}: data row {i}, column {j}: non-finite value {cell.strip()}")
            out[i - 1, j - 1] = v
    if header is not None and len(header) != width:
        raise InputError(f"{path}: header has {len(header)} names but rows have {width} columns")
    return out, header


def load_dataset(args) -> tuple[Dataset, list[str]]:
    x, xnames = read_numeric_csv(args.x)
    y, _ = read_numeric_csv(args.y)
    if y.shape[1] != 1:
        raise InputError(f"{args.y}: expected a single column, got {y.shape[1]}")
    if x.shape[0] != y.shape[0]:
        raise InputError(f"row count mismatch: x has {x.shape[0]} rows, y has {y.shape[0]}")
    names = xnames or [f"x{j}" for j in range(x.shape[1])]
    if args.add_intercept:
        x = np.column_stack([np.ones(x.shape[0]), x])
        names = ["(intercept)"] + names
    try:
        return Dataset(x, y[:, 0]), names
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _parse_levels(text: str) -> tuple[float, ...]:
    try:
        levels = tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad levels: {text!r}") from None
    if not levels or not all(0 < lv < 1 for lv in levels):
        raise argparse.ArgumentTypeError("levels must lie in (0, 1)")
    return levels


def _json_safe(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    return obj


def dump_json(obj, path) -> None:
    # json writes floats with repr(), i.e. shortest round-trip (<= 17 digits)
    text = json.dumps(_json_safe(obj), indent=2, allow_nan=False)
    Path(path).write_text(text + "\n")


def cmd_fit(args) -> int:
    if args.samples < MIN_DRAWS:
        raise InputError(f"--samples must be at least {MIN_DRAWS}, got {args.samples}")
    d, names = load_dataset(args)
    res = fiducial_fit(d.x, d.y, gamma=args.gamma, samples=args.samples, seed=args.seed,
                       keep=args.keep, size_cap=args.size_cap, levels=args.levels,
                       column_names=names)
    report = res.report.to_dict(top_models=args.top_models)
    report["seed"] = args.seed
    report["candidates"] = len(res.scored)
    report["dropped_candidates"] = res.scored.dropped
    if args.out:
        dump_json(report, args.out)
    else:
        sys.stdout.write(json.dumps(_json_safe(report), indent=2) + "\n")
    top = res.report.model_probs[0]
    log.info("top model %s with probability %.4f", [names[j] for j in top[0]], top[1])
    return EXIT_OK


def cmd_inspect(args) -> int:
    d, names = load_dataset(args)
    sc = scored_class(d, args.gamma, args.keep, args.size_cap)
    out = sys.stdout
    out.write(f"{'support':<40} {'size':>4} {'rss':>16} {'log_score':>16} {'probability':>11}\n")
    order = sorted(range(len(sc)), key=lambda i: (-sc.probs[i], sc.models[i].support))
    for i in order:
        m = sc.models[i]
        label = "{" + ",".join(names[j] for j in m) + "}"
        out.write(f"{label:<40} {len(m):>4} {sc.fits[i].rss:>16.8g} "
                  f"{sc.log_scores[i]:>16.8f} {sc.probs[i]:>11.6f}\n")
    return EXIT_OK


def load_configs(path) -> list[SimConfig]:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    items = raw if isinstance(raw, list) else [raw]
    if not items:
        raise InputError(f"{path}: empty config list")
    try:
        return [SimConfig.from_dict(it) for it in items]
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_simulate(args) -> int:
    configs = load_configs(args.config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results = []
    with open(out_dir / "results.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for cfg in configs:
            res = run_experiment(cfg, threads=args.threads)
            w.writerows(csv_rows(res))
            results.append(res.to_dict())
            s2 = res.get("proposed", "sigma2", cfg.levels[-1])
            print(f"{cfg.config_hash()} n={cfg.n} p={cfg.p} d={cfg.d} b={cfg.b:.4g} rho={cfg.rho:g} "
                  f"reps={cfg.reps} excluded={res.excluded_reps} "
                  f"sigma2_bias={s2['bias']:.5f} "
                  f"sigma2_cov@{cfg.levels[-1]:g}={s2['coverage']:.3f}")
    dump_json(results, out_dir / "results.json")
    return EXIT_OK


def _add_data_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--x", required=True, help="CSV of predictors (n rows x p columns)")
    p.add_argument("--y", required=True, help="CSV with a single response column")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--keep", type=int, default=None, help="predictors kept by screening")
    p.add_argument("--size-cap", type=int, default=None, help="largest candidate model size")
    p.add_argument("--add-intercept", action="store_true", help="prepend a constant column")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fidreg", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fiducial inference on a dataset")
    _add_data_args(p)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", type=_parse_levels, default=DEFAULT_LEVELS)
    p.add_argument("--top-models", type=int, default=10)
    p.add_argument("--out", default=None, help="report JSON path (default: stdout)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("inspect", help="print the scored candidate class")
    _add_data_args(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("simulate", help="run coverage/bias simulations")
    p.add_argument("--config", required=True, help="JSON config or list of configs")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EmptyClass as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY


if __name__ == "__main__":
    sys.exit(main())
