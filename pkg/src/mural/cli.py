"""Command line front end: detect, simulate, synth, serve.

Configuration precedence, lowest to highest: built-in defaults, named
preset (--preset), config file (--config), explicit flags.  Exit codes:
0 success, 1 runtime failure (bad data, unreadable file), 2 usage
errors (argparse).
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
from pathlib import Path

import numpy as np

from .active import run_simulated
from .config import PRESETS, Config, load_config
from .io import LabelSet, load_csv, load_labels, save_csv, save_labels
from .pipeline import run_unsupervised
from .synth import SynthSpec, generate

__all__ = ["main"]

# curve CSV header, fixed so downstream plotting scripts can rely on it
CURVE_COLUMNS = ("query", "mean_f1", "std_f1", "mean_prec", "std_prec", "mean_rec", "std_rec")


def _config_flags(parser: argparse.ArgumentParser, session: bool) -> None:
    parser.add_argument("--preset", choices=sorted(PRESETS), help="named configuration")
    parser.add_argument("--config", help="key=value config file")
    parser.add_argument("--levels", type=int, help="decomposition depth")
    parser.add_argument("--window", type=int, help="discrepancy window half-size, samples")
    parser.add_argument("--eta", type=int, help="match tolerance, samples")
    parser.add_argument("--seed", type=int, help="base random seed")
    parser.add_argument(
        "--init-threshold", choices=("elbow", "max"), help="threshold initializer"
    )
    parser.add_argument(
        "--normalize", choices=("per-sequence", "global"), help="standardization scope"
    )
    if session:
        parser.add_argument("--budget", type=int, help="total query budget")
        parser.add_argument("--warmup", type=int, help="queries before first optimization")
        parser.add_argument("--cadence", type=int, help="queries between optimizations")
        parser.add_argument(
            "--queries-per-round", type=int, choices=(1, 2), help="queries per round"
        )


def build_config(args: argparse.Namespace) -> Config:
    cfg = PRESETS[args.preset] if args.preset else Config()
    if args.config:
        cfg = load_config(args.config, base=cfg)
    overrides = {}
    for flag, field in (
        ("levels", "levels"),
        ("window", "window"),
        ("eta", "eta"),
        ("seed", "seed"),
        ("init_threshold", "init_threshold"),
        ("normalize", "normalize"),
        ("budget", "budget"),
        ("warmup", "warmup"),
        ("cadence", "cadence"),
        ("queries_per_round", "queries_per_round"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    return dataclasses.replace(cfg, **overrides)


def _cmd_detect(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    x = load_csv(args.input, has_header=args.has_header)
    result = run_unsupervised(x, cfg)
    lines = [str(i) for i in result.detections.indices]
    body = "\n".join(lines) + ("\n" if lines else "")
    if args.out:
        Path(args.out).write_text(body)
    else:
        sys.stdout.write(body)
    print(
        f"{len(result.detections.indices)} change points "
        f"(threshold {result.params.threshold:.6g})",
        file=sys.stderr,
    )
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = build_config(args)
    x = load_csv(args.input, has_header=args.has_header)
    truth = load_labels(args.labels, n=x.n)
    curves = []
    for rep in range(args.seeds):
        rep_cfg = dataclasses.replace(cfg, seed=cfg.seed + rep)
        result = run_simulated(x, truth, rep_cfg)
        curves.append(result.curve)
    length = min(len(c) for c in curves)
    f1 = np.array([[v.f1 for v in c[:length]] for c in curves])
    prec = np.array([[v.precision for v in c[:length]] for c in curves])
    rec = np.array([[v.recall for v in c[:length]] for c in curves])
    rows = [
        (
            q,
            f1[:, q].mean(),
            f1[:, q].std(),
            prec[:, q].mean(),
            prec[:, q].std(),
            rec[:, q].mean(),
            rec[:, q].std(),
        )
        for q in range(length)
    ]
    out = Path(args.out) if args.out else None
    fh = out.open("w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(fh)
        writer.writerow(CURVE_COLUMNS)
        for row in rows:
            writer.writerow([row[0]] + [f"{v:.6f}" for v in row[1:]])
    finally:
        if out:
            fh.close()
    print(
        f"{args.seeds} runs, final mean F1 {f1[:, length - 1].mean():.3f}",
        file=sys.stderr,
    )
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    kinds = tuple(args.kinds.split(",")) if "," in args.kinds else args.kinds
    spec = SynthSpec(
        n=args.n,
        d=args.d,
        segments=args.segments,
        kinds=kinds,
        magnitude=args.magnitude,
        noise=args.noise,
        seed=args.seed if args.seed is not None else 0,
    )
    x, labels = generate(spec)
    save_csv(x, args.out)
    save_labels(labels, args.labels)
    print(
        f"wrote {args.out} ({x.d}x{x.n}) and {args.labels} "
        f"({len(labels)} change points)",
        file=sys.stderr,
    )
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    cfg = build_config(args)
    port = int(os.environ.get("MURAL_PORT", args.port))
    app = create_app(args.data_dir, cfg)
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mural",
        description="Multiresolution change-point detection with human-in-the-loop refinement",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="unsupervised change-point detection")
    p_detect.add_argument("input", help="series CSV, one row per sample")
    p_detect.add_argument("--has-header", action="store_true")
    p_detect.add_argument("--out", help="write indices here instead of stdout")
    _config_flags(p_detect, session=False)
    p_detect.set_defaults(func=_cmd_detect)

    p_sim = sub.add_parser("simulate", help="oracle-annotated session learning curves")
    p_sim.add_argument("input", help="series CSV")
    p_sim.add_argument("labels", help="ground-truth change-point file")
    p_sim.add_argument("--has-header", action="store_true")
    p_sim.add_argument("--seeds", type=int, default=1, help="number of repetitions")
    p_sim.add_argument("--out", help="curve CSV path (default stdout)")
    _config_flags(p_sim, session=True)
    p_sim.set_defaults(func=_cmd_simulate)

    p_synth = sub.add_parser("synth", help="write a synthetic series + labels pair")
    p_synth.add_argument("--n", type=int, required=True)
    p_synth.add_argument("--d", type=int, default=1)
    p_synth.add_argument("--segments", type=int, default=2)
    p_synth.add_argument(
        "--kinds", default="mean", help="change kind, or comma list per boundary"
    )
    p_synth.add_argument("--magnitude", type=float, default=3.0)
    p_synth.add_argument("--noise", type=float, default=1.0)
    p_synth.add_argument("--seed", type=int)
    p_synth.add_argument("--out", required=True, help="series CSV path")
    p_synth.add_argument("--labels", required=True, help="labels path")
    p_synth.set_defaults(func=_cmd_synth)

    p_serve = sub.add_parser("serve", help="run the annotation HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument(
        "--port", type=int, default=8000, help="bind port (MURAL_PORT overrides)"
    )
    p_serve.add_argument(
        "--data-dir", default="mural-sessions", help="transcript and upload directory"
    )
    _config_flags(p_serve, session=True)
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
