"""Command-line entry points: make-data, train, sample, stats, invariance.

Every command is a pure function of its config file, flags and input
files; outputs are reproducible bit-for-bit. Exit codes: 0 success,
2 configuration/input errors, 3 training divergence.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .config import load_experiment_config
from .data import load_field_file, make_grf_dataset, make_mixture_dataset, write_field_file
from .errors import GanoError, TrainingDivergedError
from .grf import sample_grf
from .grid import Grid2D, wrap_phase
from .invariance import (
    RefinementLadder,
    empirical_risk,
    multiresolution_stats,
    penalty_scaling_check,
    refined_inputs,
)
from .models import field_function
from .rng import SeededRng
from .stats import circular_skewness, circular_variance, histogram_w1, pointwise_histogram, radial_autocorrelation
from .training import build_models, config_from_dict, load_checkpoint, restore_state, train


def _load_trained(path):
    payload = load_checkpoint(path)
    config = config_from_dict(payload["config"])
    state = restore_state(config, payload)
    return config, state


def cmd_make_data(args) -> int:
    cfg = load_experiment_config(args.config)
    data = cfg.train.data
    if data.kind == "grf":
        make_grf_dataset(data.grf, data.count, data.grid, data.seed, args.out)
    elif data.kind == "mixture":
        make_mixture_dataset(data.count, data.grid, data.seed, args.out,
                             mean_a=data.mean_a, mean_b=data.mean_b,
                             tau=data.grf.tau, alpha=data.grf.alpha, sigma=data.grf.sigma)
    else:
        raise GanoError(f"make-data cannot generate kind {data.kind!r}")
    print(args.out)
    return 0


def cmd_train(args) -> int:
    cfg = load_experiment_config(args.config)
    state = train(cfg.train, resume=args.resume)
    out_dir = cfg.train.out_dir or "."
    print(os.path.join(out_dir, "losses.csv"))
    return 0


def cmd_sample(args) -> int:
    config, state = _load_trained(args.checkpoint)
    grid = Grid2D(args.resolution, args.resolution)
    inputs = sample_grf(config.input_grf, grid, args.count, SeededRng(args.seed).child("sample"))
    gen_fn = field_function(state.generator)
    out = gen_fn(inputs)
    write_field_file(args.out, out.values)
    print(args.out)
    return 0


def _export_curves(batch, name: str, out_dir, n_bins: int, value_range) -> tuple:
    from gano.errors import DegenerateInputError

    hist = pointwise_histogram(batch, n_bins, value_range)
    try:
        curve = radial_autocorrelation(batch, batch.grid.m1 // 2)
    except DegenerateInputError as ex:
        print(f"warning: autocorrelation skipped: {ex}", file=sys.stderr)
        curve = None
    hpath = os.path.join(out_dir, f"{name}_histogram.csv")
    with open(hpath, "w", encoding="utf-8", newline="") as fh:
        fh.write("bin_left,bin_right,mass\n")
        for left, right, mass in zip(hist.edges[:-1], hist.edges[1:], hist.masses):
            fh.write(f"{left!r},{right!r},{mass!r}\n")
    apath = os.path.join(out_dir, f"{name}_autocorrelation.csv")
    with open(apath, "w", encoding="utf-8", newline="") as fh:
        fh.write("r,rho\n")
        if curve is not None:
            for r, rho in zip(curve.r, curve.rho):
                fh.write(f"{r!r},{rho!r}\n")
    return hist, curve


def _comparison_plot(path, hists, curves, labels):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    for hist, label in zip(hists, labels):
        centers = 0.5 * (hist.edges[:-1] + hist.edges[1:])
        ax1.step(centers, hist.masses, where="mid", label=label)
    ax1.set_xlabel("value")
    ax1.set_ylabel("mass")
    ax1.set_title("pointwise histogram")
    ax1.legend()
    for curve, label in zip(curves, labels):
        if curve is not None:
            ax2.plot(curve.r, curve.rho, label=label)
    ax2.set_xlabel("r")
    ax2.set_ylabel("rho")
    ax2.set_title("radial autocorrelation")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_stats(args) -> int:
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    batch = load_field_file(args.field_file, wrap=args.circular)
    batches = [batch]
    labels = [os.path.basename(args.field_file)]
    if args.against:
        batches.append(load_field_file(args.against, wrap=args.circular))
        labels.append(os.path.basename(args.against))
    lo = min(float(b.values.min()) for b in batches)
    hi = max(float(b.values.max()) for b in batches)
    if hi <= lo:
        hi = lo + 1.0
    names = ["primary", "against"]
    hists, curves = [], []
    for b, name in zip(batches, names):
        h, c = _export_curves(b, name, out_dir, args.bins, (lo, hi))
        hists.append(h)
        curves.append(c)
    if args.circular:
        angles = wrap_phase(batch).values.ravel()
        var = circular_variance(angles)
        try:
            skew = circular_skewness(angles)
            print(f"circular_variance {var!r} circular_skewness {skew!r}")
        except GanoError:
            print(f"circular_variance {var!r} circular_skewness undefined", file=sys.stderr)
            print(f"circular_variance {var!r}")
    if len(batches) == 2:
        print(f"histogram_w1 {histogram_w1(hists[0], hists[1])!r}")
    else:
        print(f"histogram_w1 {histogram_w1(hists[0], hists[0])!r}")
    _comparison_plot(os.path.join(out_dir, "comparison.png"), hists, curves, labels)
    return 0


def cmd_invariance(args) -> int:
    config, state = _load_trained(args.checkpoint)
    sizes = [int(s) for s in args.ladder.split(",")]
    ladder = RefinementLadder.from_sizes(sizes)
    seed = args.seed
    # --identity swaps in the identity operator: a debugging baseline whose
    # empirical risk is exactly zero at every rung
    gen_fn = (lambda batch: batch) if args.identity else field_function(state.generator)
    inputs = refined_inputs(config.input_grf, ladder, args.samples, SeededRng(seed).child("risk"))
    report = multiresolution_stats(gen_fn, config.input_grf, ladder, args.samples, seed)
    report.risk = empirical_risk(gen_fn, ladder, inputs) if len(ladder) >= 2 else None
    table, _ = penalty_scaling_check(state.discriminator, ladder, inputs)
    report.penalty_scale = table.tolist()
    report.save(args.out)
    print(args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gano", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("make-data", help="generate a synthetic dataset file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_make_data)

    p = sub.add_parser("train", help="run adversarial training")
    p.add_argument("--config", required=True)
    p.add_argument("--resume", default=None, help="checkpoint to continue from")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sample", help="draw generator samples from a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--resolution", type=int, required=True)
    p.add_argument("--count", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("stats", help="histograms, autocorrelation, circular stats")
    p.add_argument("field_file")
    p.add_argument("--against", default=None)
    p.add_argument("--circular", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--bins", type=int, default=64)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("invariance", help="multi-resolution report for a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--ladder", required=True, help="comma-separated sizes, e.g. 16,32,64")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--identity", action="store_true", help="evaluate the identity map instead (debug)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_invariance)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TrainingDivergedError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 3
    except GanoError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
