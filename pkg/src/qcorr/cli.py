"""Command line front end: ``qcorr sweep|verify|fixture|inflect``."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .errors import CapabilityError, ConfigError
from .optim import OptimizerConfig, seed_from_env
from .states import werner_fixture_matrix
from .sweep import (
    FAMILIES,
    SweepConfig,
    detect_inflections,
    from_csv,
    run_sweep,
    to_csv,
    verification_failed,
    verify_all,
)


def _optimizer_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--restarts", type=int, default=None, help="oracle restarts (default: per-oracle)")
    p.add_argument("--max-iters", type=int, default=None, help="iteration cap per restart")
    p.add_argument("--tol", type=float, default=None, help="oracle convergence tolerance")
    p.add_argument("--seed", type=int, default=None, help="base seed (overrides $QCORR_SEED; default 42)")


def _optimizer(args) -> OptimizerConfig:
    seed = args.seed if args.seed is not None else seed_from_env()
    return OptimizerConfig(args.restarts, args.max_iters, args.tol, seed)


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcorr",
        description="Fully entangled fraction and discord of d x d^2 Werner/isotropic complements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="evaluate measures on a parameter grid and emit CSV")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--from", dest="start", type=float, default=None)
    p.add_argument("--to", dest="stop", type=float, default=None)
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("--measures", default="fef_closed,discord_closed", help="comma-separated list")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    _optimizer_args(p)

    p = sub.add_parser("verify", help="compare closed forms with the numerical oracles (JSON report)")
    p.add_argument("--d", default="2,3", help="comma-separated dimensions from {2,3}; empty for none")
    p.add_argument("--out", default=None)
    _optimizer_args(p)

    p = sub.add_parser("fixture", help="print the d=2 Werner complement matrix for a given x")
    p.add_argument("--x", type=float, required=True)

    p = sub.add_parser("inflect", help="detect inflection points in a sweep CSV")
    p.add_argument("csv", help="CSV file written by 'sweep'")
    p.add_argument("--measure", default="discord_closed")
    p.add_argument("--threshold", type=float, default=1e-3, help="relative second-difference threshold")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (ConfigError, CapabilityError) as exc:
        print(f"qcorr: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "sweep":
        lo, hi = (-1.0, 1.0) if args.family == "werner-complement" else (0.0, 1.0)
        cfg = SweepConfig(
            family=args.family,
            d=args.d,
            start=lo if args.start is None else args.start,
            stop=hi if args.stop is None else args.stop,
            steps=args.steps,
            measures=tuple(m.strip() for m in args.measures.split(",") if m.strip()),
            optimizer=_optimizer(args),
        )
        points = run_sweep(cfg, workers=args.workers)
        _write(to_csv(points, cfg.measures), args.out)
        return 0

    if args.command == "verify":
        d_list = [int(t) for t in args.d.split(",") if t.strip()]
        records = verify_all(d_list, _optimizer(args))
        _write(json.dumps(records, indent=2) + "\n", args.out)
        return 1 if verification_failed(records) else 0

    if args.command == "fixture":
        m = werner_fixture_matrix(args.x).real
        with np.printoptions(precision=6, suppress=True, linewidth=120):
            print(m)
        return 0

    if args.command == "inflect":
        with open(args.csv) as fh:
            points, _ = from_csv(fh.read())
        rep = detect_inflections(points, args.measure, args.threshold)
        print(json.dumps({"measure": args.measure, "locations": rep.locations, "step": rep.step, "threshold": rep.threshold}))
        return 0
    return 2  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
