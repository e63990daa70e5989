"""Command-line harness: recovery runs, verification experiments, 2D imaging.

Subcommands: recover, phase-transition, geometry, concentration,
init-energy, verify-expectation, image2d. All flags are long-form. Every
CSV carries a header row and a trailing metadata comment line
(#version/#seed/#params); outputs are deterministic for a fixed --seed
(the phase-transition runtime column is wall-clock and therefore exempt).
Worker count for trial fan-out comes from --jobs, else SPR_JOBS, else the
logical core count.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algorithm import SprConfig, run_spr
from .analysis import (
    ambiguity_match_score,
    concentration_experiment,
    geometry_experiment,
    init_energy_experiment,
    mc_envelope_scores,
    phase_transition,
)
from .core import seed_list
from .fileio import read_pgm, read_signal_csv, write_pgm, write_signal_csv
from .sampling import (
    Fourier2DOperator,
    gen_gaussian_operator,
    gen_sparse_signal,
    observe,
    observe_fourier2d,
)
from .spectral import expected_score


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_csv(path, header, rows, seed, params) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    meta = json.dumps(params, sort_keys=True, separators=(",", ":"))
    lines.append(f"# version={__version__} seed={seed} params={meta}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _positive(parser, name, value, minimum=1):
    if value is None or value < minimum:
        parser.error(f"{name} must be >= {minimum}")
    return value


def cmd_recover(parser, args) -> int:
    _positive(parser, "--k", args.k)
    _positive(parser, "--m", args.m)
    if args.signal is not None:
        try:
            x = read_signal_csv(args.signal)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        n = x.size
        matrix_seed = args.matrix_seed if args.matrix_seed is not None else args.seed
    else:
        if args.n is None:
            parser.error("--n is required unless --signal is given")
        _positive(parser, "--n", args.n)
        n = args.n
        x = gen_sparse_signal(n, args.k, args.flavor, seed=seed_list(args.seed) + [0])
        matrix_seed = args.seed
    if args.k > n:
        parser.error("--k cannot exceed the signal length")
    op = gen_gaussian_operator(args.m, n, seed_list(matrix_seed) + [1])
    y = observe(op, x)
    config = SprConfig(k=args.k, t_max=args.t_max)
    report = run_spr(op, y, config, x_truth=x, seed=seed_list(args.seed) + [2])
    record = {
        "n": int(n),
        "k": int(args.k),
        "m": int(args.m),
        "seed": int(args.seed),
        "nmse": report.nmse,
        "dist": report.dist,
        "iterations": report.iterations,
        "success": report.success,
        "loss_trace": report.loss_trace,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(record) + "\n")
    diagnostics = getattr(report, "diagnostics", None)
    if diagnostics:
        print(f"numeric failure: {diagnostics}", file=sys.stderr)
        return 1
    print(
        f"recover n={n} k={args.k} m={args.m} seed={args.seed}: "
        f"success={report.success} nmse={report.nmse:.3e} "
        f"iterations={report.iterations} runtime={report.runtime_s:.2f}s"
    )
    return 0


def cmd_phase_transition(parser, args) -> int:
    for name in ("--n", "--k", "--m-start", "--m-end", "--m-step", "--trials"):
        _positive(parser, name, getattr(args, name.lstrip("-").replace("-", "_")))
    if args.m_end < args.m_start:
        parser.error("empty m range")
    m_values = list(range(args.m_start, args.m_end + 1, args.m_step))
    rows = phase_transition(args.n, args.k, m_values, args.trials, args.seed, jobs=args.jobs)
    _write_csv(
        args.out,
        ["m", "trials", "successes", "frequency", "mean_nmse", "mean_runtime_ms"],
        [(r.m, r.trials, r.successes, r.frequency, r.mean_nmse, r.mean_runtime_ms) for r in rows],
        args.seed,
        {"n": args.n, "k": args.k, "m_start": args.m_start, "m_end": args.m_end,
         "m_step": args.m_step, "trials": args.trials},
    )
    print(f"phase transition written to {args.out} ({len(rows)} rows)")
    return 0


def cmd_geometry(parser, args) -> int:
    for name in ("--n", "--k", "--m", "--overlap", "--trials"):
        _positive(parser, name, getattr(args, name.lstrip("-").replace("-", "_")))
    try:
        distances = geometry_experiment(args.n, args.m, args.k, args.overlap, args.trials, args.seed)
    except ValueError as exc:
        parser.error(str(exc))
    _write_csv(
        args.out,
        ["trial", "normalized_distance"],
        list(enumerate(distances)),
        args.seed,
        {"n": args.n, "k": args.k, "m": args.m, "overlap": args.overlap, "trials": args.trials},
    )
    print(f"geometry: median normalized distance {np.median(distances):.3e} -> {args.out}")
    return 0


def cmd_concentration(parser, args) -> int:
    for name in ("--n", "--k", "--m", "--trials"):
        _positive(parser, name, getattr(args, name.lstrip("-").replace("-", "_")))
    result = concentration_experiment(args.n, args.k, args.m, args.trials, args.seed)
    _write_csv(
        args.out,
        ["trial", "normalized_deviation", "bound"],
        [(i, d, result.bound) for i, d in enumerate(result.normalized_deviations)],
        args.seed,
        {"n": args.n, "k": args.k, "m": args.m, "trials": args.trials},
    )
    within = np.mean([d < result.bound for d in result.normalized_deviations])
    print(f"concentration: {within:.0%} of trials within bound {result.bound} -> {args.out}")
    return 0


def cmd_init_energy(parser, args) -> int:
    for name in ("--n", "--k", "--trials"):
        _positive(parser, name, getattr(args, name.lstrip("-").replace("-", "_")))
    if not args.m:
        parser.error("give at least one --m")
    rows = init_energy_experiment(args.n, args.k, args.m, args.trials, args.seed, flavor=args.flavor)
    _write_csv(
        args.out,
        ["m", "trials", "captures", "frequency"],
        [(r.m, r.trials, r.captures, r.frequency) for r in rows],
        args.seed,
        {"n": args.n, "k": args.k, "m_list": args.m, "trials": args.trials, "flavor": args.flavor},
    )
    print(f"init-energy written to {args.out} ({len(rows)} rows)")
    return 0


def cmd_verify_expectation(parser, args) -> int:
    for name in ("--n", "--k", "--m"):
        _positive(parser, name, getattr(args, name.lstrip("-").replace("-", "_")))
    if args.k > args.n:
        parser.error("--k cannot exceed --n")
    x = gen_sparse_signal(args.n, args.k, "gaussian", seed=seed_list(args.seed) + [0])
    mc = mc_envelope_scores(x, args.m, seed_list(args.seed) + [1])
    rows = []
    worst = 0.0
    for j in range(args.n):
        expected = expected_score(x, j)
        gap = abs(mc[j] - expected) / expected
        worst = max(worst, gap)
        rows.append((j, abs(x[j]), mc[j], expected, gap))
    _write_csv(
        args.out,
        ["j", "signal_modulus", "monte_carlo", "expected", "rel_gap"],
        rows,
        args.seed,
        {"n": args.n, "k": args.k, "m": args.m},
    )
    print(f"verify-expectation: max relative gap {worst:.3e} -> {args.out}")
    return 0


def _is_pow2(v: int) -> bool:
    return v >= 1 and (v & (v - 1)) == 0


def cmd_image2d(parser, args) -> int:
    _positive(parser, "--k", args.k)
    if (args.image is None) == (not args.synthetic):
        parser.error("give exactly one of --image or --synthetic")
    if args.image is not None:
        try:
            truth = read_pgm(args.image)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
    else:
        _positive(parser, "--size", args.size)
        rng = np.random.default_rng(seed_list(args.seed) + [0])
        flat = np.zeros(args.size * args.size)
        spots = rng.choice(flat.size, size=args.k, replace=False)
        flat[spots] = 0.25 + 0.75 * rng.random(args.k)
        truth = flat.reshape(args.size, args.size)
    height, width = truth.shape
    if not (_is_pow2(height) and _is_pow2(width)) and not args.naive_dft:
        parser.error("image dimensions are not powers of two; pass --naive-dft to proceed")
    if args.k > height * width:
        parser.error("--k cannot exceed the pixel count")

    op = Fourier2DOperator(height, width)
    y = observe_fourier2d(op, truth)
    config = SprConfig(k=args.k, t_max=args.t_max)
    report = run_spr(op, y, config, seed=seed_list(args.seed) + [2])
    estimate = report.estimate.reshape(height, width)
    residual = min(report.loss_trace)
    match = ambiguity_match_score(estimate, truth.astype(np.complex128))

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    magnitude = np.abs(estimate)
    peak = magnitude.max()
    write_pgm(out_dir / "recovered.pgm", magnitude / peak if peak > 0 else magnitude)
    write_signal_csv(out_dir / "recovered.csv", estimate.ravel())
    record = {
        "height": height,
        "width": width,
        "k": int(args.k),
        "seed": int(args.seed),
        "residual_loss": residual,
        "match_score": match,
        "iterations": report.iterations,
    }
    (out_dir / "report.jsonl").write_text(json.dumps(record) + "\n", encoding="utf-8")
    diagnostics = getattr(report, "diagnostics", None)
    if diagnostics:
        print(f"numeric failure: {diagnostics}", file=sys.stderr)
        return 1
    print(
        f"image2d {height}x{width} k={args.k}: residual={residual:.3e} "
        f"match={match:.3e} -> {out_dir}"
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spr",
        description="Sparse phase retrieval from magnitude-only samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("recover", help="recover one synthetic or file-based signal")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flavor", choices=["gaussian", "flat", "unit"], default="gaussian")
    p.add_argument("--signal", help="read the true signal from a re,im CSV file")
    p.add_argument("--matrix-seed", type=int, help="seed for the sampling matrix (with --signal)")
    p.add_argument("--t-max", type=int, default=50)
    p.add_argument("--out", default="recover.jsonl")
    p.set_defaults(handler=cmd_recover)

    p = sub.add_parser(
        "phase-transition",
        help="success frequency vs number of samples",
        description="CSV columns: m, trials, successes, frequency, mean_nmse, mean_runtime_ms.",
    )
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--m-start", type=int, default=100)
    p.add_argument("--m-end", type=int, default=400)
    p.add_argument("--m-step", type=int, default=10)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", default="phase_transition.csv")
    p.set_defaults(handler=cmd_phase_transition)

    p = sub.add_parser(
        "geometry",
        help="clustering of subspace minimizers around the expected optimum",
        description="CSV columns: trial, normalized_distance.",
    )
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--m", type=int, default=4000)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--overlap", type=int, default=5)
    p.add_argument("--trials", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="geometry.csv")
    p.set_defaults(handler=cmd_geometry)

    p = sub.add_parser(
        "concentration",
        help="elementwise gap between empirical and expected gradients",
        description="CSV columns: trial, normalized_deviation, bound.",
    )
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--m", type=int, default=8000)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="concentration.csv")
    p.set_defaults(handler=cmd_concentration)

    p = sub.add_parser(
        "init-energy",
        help="energy captured by the spectral initialization",
        description="CSV columns: m, trials, captures, frequency.",
    )
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--m", type=int, action="append", help="sample count (repeatable)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--flavor", choices=["gaussian", "flat", "unit"], default="gaussian")
    p.add_argument("--out", default="init_energy.csv")
    p.set_defaults(handler=cmd_init_energy)

    p = sub.add_parser(
        "verify-expectation",
        help="Monte-Carlo check of the expected spectral score",
        description="CSV columns: j, signal_modulus, monte_carlo, expected, rel_gap.",
    )
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--m", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="verify_expectation.csv")
    p.set_defaults(handler=cmd_verify_expectation)

    p = sub.add_parser(
        "image2d",
        help="recover a sparse image from 2D Fourier magnitudes",
        description="Writes recovered.pgm, recovered.csv, report.jsonl into --out-dir.",
    )
    p.add_argument("--image", help="input binary PGM (P5, 8-bit), power-of-two dimensions")
    p.add_argument("--synthetic", action="store_true", help="use a random sparse test image")
    p.add_argument("--size", type=int, default=32, help="synthetic image side length")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-max", type=int, default=50)
    p.add_argument("--naive-dft", action="store_true",
                   help="allow non-power-of-two dimensions (direct transform)")
    p.add_argument("--out-dir", default="image2d_out")
    p.set_defaults(handler=cmd_image2d)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.handler(parser, args)


if __name__ == "__main__":
    sys.exit(main())
