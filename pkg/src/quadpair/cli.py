"""Command-line entry point.

    quadpair <subcommand> --config <path> [--out <path>] [--json <path>]
                          [--seed N] [--threads N]

Subcommands mirror the experiment names; most take their grids from the
config file, and a few accept direct flags for one-off evaluations.  Exit
codes: 0 pass, 1 assertion failure, 2 invalid input or config,
3 inconclusive (budget exhausted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import CSV_COLUMNS, ExperimentConfig, write_csv, write_json
from .errors import QuadpairError
from .forms import CANONICAL_PAIR, FormPair
from .harness import CHARSUM_COLUMNS, RUNNERS


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadpair", description=__doc__)
    sub = parser.add_subparsers(dest="experiment", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file")
    common.add_argument("--out", help="CSV output path")
    common.add_argument("--json", dest="json_out", help="JSON report path")
    common.add_argument("--seed", type=int, help="seed override")
    common.add_argument("--threads", type=int, help="worker threads")
    common.add_argument("--pair", help="JSON pair override, e.g. '[[1,2,-3,-5],[1,1,1,1]]'")
    for name in RUNNERS:
        p = sub.add_parser(name, parents=[common])
        if name == "charsum":
            p.add_argument("--q", type=int)
            p.add_argument("--c", type=int)
            p.add_argument("--w", help="JSON 4-vector, e.g. '[1,0,2,5]'")
        if name == "delta-check":
            p.add_argument("--Q-list", dest="Q_list", help="JSON list of Q values")
            p.add_argument("--n-max", dest="n_max", type=int)
        if name in ("count", "tq-bound", "sieve-assembly", "lemma41-check"):
            p.add_argument("--B-grid", dest="B_grid", help="JSON list of box sizes")
            p.add_argument("--q-list", dest="q_list", help="JSON list of moduli")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threads is not None:
        overrides["threads"] = args.threads
    elif os.environ.get("QUADPAIR_THREADS"):
        overrides["threads"] = int(os.environ["QUADPAIR_THREADS"])
    if args.config:
        cfg = ExperimentConfig.from_file(args.config, overrides)
        cfg.experiment = args.experiment
    else:
        pair = CANONICAL_PAIR
        if args.pair:
            a, b = json.loads(args.pair)
            pair = FormPair(tuple(a), tuple(b))
        cfg = ExperimentConfig(pair=pair, experiment=args.experiment, **overrides)
    for attr in ("B_grid", "q_list", "Q_list"):
        val = getattr(args, attr, None)
        if val is not None:
            setattr(cfg, attr, json.loads(val) if isinstance(val, str) else val)
    if getattr(args, "n_max", None) is not None:
        cfg.n_max = args.n_max
    if getattr(args, "q", None) is not None:
        cfg.q_list = [args.q]
    if getattr(args, "c", None) is not None:
        cfg.c_list = [args.c]
    if getattr(args, "w", None) is not None:
        cfg.w = tuple(json.loads(args.w))
    return cfg


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        report = RUNNERS[cfg.experiment](cfg)
    except QuadpairError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    out = args.out or cfg.output_path
    columns = CHARSUM_COLUMNS if cfg.experiment == "charsum" else CSV_COLUMNS
    if out:
        blank = () if cfg.experiment == "charsum" else ("seconds",)
        write_csv(report, out, columns=columns, blank_columns=blank)
        print(f"wrote {out}")
    if args.json_out:
        write_json(report, args.json_out)
        print(f"wrote {args.json_out}")
    for key in sorted(report.summary):
        print(f"{key} = {report.summary[key]}")
    if report.failures:
        for f in report.failures:
            print(f"FAIL {f}")
    print("PASS" if report.passed and not report.inconclusive else
          ("INCONCLUSIVE" if report.inconclusive else "FAIL"))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
