"""Command-line front end.

Subcommands: fef (witness one serialized state), icps-sweep and random-sweep
(sensitivity tables), grid (alpha-v sensitivity grids), analytic (exact
thresholds and detection fractions), collective-verify (cross-method identity
check).  Every output file starts with comment lines recording the version,
the full parameter set and the seed; re-running with the same seed produces
byte-identical files for any worker count.

Exit codes: 0 success, 2 usage error, 3 parse/validation error, 4 numeric
failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .detection import CombinedSelection, DetectionConfig, Mode
from .linalg import ginibre
from .montecarlo import (COMBINED_KEY, DEFAULT_SAMPLES, GridSpec, IcpsGroundTruth,
                         estimate_icps_sensitivity, estimate_quasi_pure_sensitivity,
                         sweep_icps_grid)
from .collective import fef_from_collective, pi_matrix
from .oracles import analytic_sensitivity, icps_thresholds, icps_entanglement_threshold
from .rng import substream
from .states import DensityMatrix, IcpsParams, InvalidParamsError, InvalidStateError
from .serialize import ParseError, load_density
from .transforms import LutKind, LutStrategy, ZeroProbabilityError
from .witness import fef_witness

STRATEGY_CHOICES = [k.value for k in LutKind]


def _default_workers() -> int:
    env = os.environ.get("QUDITWITNESS_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return value


def _write_table(out: str | None, command: str, params: dict, columns: list[str],
                 rows: list[list]) -> None:
    lines = [f"# quditwitness {__version__}",
             f"# command: {command}",
             "# params: " + " ".join(f"{k}={v}" for k, v in params.items()),
             ",".join(columns)]
    for row in rows:
        lines.append(",".join("" if cell is None else
                              (repr(cell) if isinstance(cell, float) else str(cell))
                              for cell in row))
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _config(strategies: list[str], mode: str, combined: str) -> DetectionConfig:
    return DetectionConfig(strategies=tuple(LutStrategy(LutKind(s)) for s in strategies),
                           mode=Mode(mode),
                           combined_selection=CombinedSelection(combined))


def cmd_fef(args) -> int:
    rho = load_density(args.state_file)
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise InvalidStateError(f"fef expects a two-qubit state, got {rho.dim_a}x{rho.dim_b}")
    out = fef_witness(rho)
    print(f"score={out.score:.6f} fef_w={out.fef_w:.6f} detected={str(out.detected).lower()}")
    return 0


COLUMNS = ["d", "r", "alpha", "v", "strategy", "mode", "samples", "entangled",
           "detected", "sensitivity", "ci95", "seed"]


def cmd_icps_sweep(args) -> int:
    cfg = _config(args.strategies, "single", args.combined_selection)
    modes = [args.mode] if args.mode != "both" else ["single", "parallel"]
    rows = []
    for mode in modes:
        cfg_m = DetectionConfig(strategies=cfg.strategies, mode=Mode(mode),
                                combined_selection=cfg.combined_selection)
        est = estimate_icps_sensitivity(args.d, args.r, cfg=cfg_m, n_samples=args.samples,
                                        seed=args.seed, workers=args.workers,
                                        ground_truth=IcpsGroundTruth(args.ground_truth))
        for label, e in est.items():
            rows.append([args.d, args.r, None, None, label, mode, e.sampled,
                         e.entangled, e.detected, e.value, e.ci95, args.seed])
    params = dict(d=args.d, r=args.r, mode=args.mode, strategies="+".join(args.strategies),
                  combined_selection=args.combined_selection, ground_truth=args.ground_truth,
                  samples=args.samples, seed=args.seed)
    _write_table(args.out, "icps-sweep", params, COLUMNS, rows)
    return 0


def cmd_random_sweep(args) -> int:
    rows = []
    modes = [args.mode] if args.mode != "both" else ["single", "parallel"]
    for noise in args.noise:
        if not 0.0 <= noise <= 1.0:
            raise InvalidParamsError(f"noise level must be in [0, 1], got {noise}")
        for mode in modes:
            e = estimate_quasi_pure_sensitivity(args.d, noise, mode=Mode(mode),
                                                n_samples=args.samples, seed=args.seed,
                                                workers=args.workers)
            rows.append([args.d, None, None, 1.0 - noise, LutKind.IDENTITY.value, mode,
                         e.sampled, e.entangled, e.detected, e.value, e.ci95, args.seed])
    params = dict(d=args.d, noise="+".join(repr(x) for x in args.noise), mode=args.mode,
                  samples=args.samples, seed=args.seed)
    _write_table(args.out, "random-sweep", params, COLUMNS, rows)
    return 0


def cmd_grid(args) -> int:
    strategies = STRATEGY_CHOICES[:3] if args.strategy == "all" else [args.strategy]
    cfg = _config(strategies, args.mode, args.combined_selection)
    cells = sweep_icps_grid(args.d, args.r, GridSpec(args.alpha_steps, args.v_steps, args.trials),
                            cfg=cfg, seed=args.seed, workers=args.workers)
    rows = []
    for cell in cells:
        for label, e in cell.estimates.items():
            if args.strategy != "all" and label == COMBINED_KEY:
                continue  # combined duplicates the single requested strategy
            rows.append([args.d, args.r, cell.alpha, cell.v, label, args.mode, e.sampled,
                         e.entangled, e.detected, e.value, e.ci95, args.seed,
                         str(cell.separable).lower()])
    params = dict(d=args.d, r=args.r, alpha_steps=args.alpha_steps, v_steps=args.v_steps,
                  trials=args.trials, strategy=args.strategy, mode=args.mode, seed=args.seed)
    _write_table(args.out, "grid", params, COLUMNS + ["separable"], rows)
    return 0


def cmd_analytic(args) -> int:
    sens = analytic_sensitivity(args.d, args.r)
    print(f"d={args.d} r={args.r} selection_classes={sens.total_classes}")
    for name, frac in [("scenario_i", sens.scenario_i),
                       ("scenario_ii", sens.scenario_ii),
                       ("scenario_ii_unordered", sens.scenario_ii_unordered),
                       ("combined", sens.combined)]:
        print(f"{name} = {frac} = {float(frac):.10f}")
    if args.alpha is not None:
        p = IcpsParams(args.d, args.r, args.alpha, 1.0)
        v_a, v_b = icps_thresholds(p)
        print(f"alpha={args.alpha!r} v_a={v_a!r} v_b={v_b!r} "
              f"entanglement_threshold={icps_entanglement_threshold(p)!r}")
    return 0


def cmd_collective_verify(args) -> int:
    rng = substream(args.seed, 99)
    worst = 0.0
    for _ in range(args.n):
        g = ginibre(4, rng)
        mat = g @ g.conj().T
        rho = DensityMatrix(2, 2, mat / mat.trace())
        direct = fef_witness(rho).score
        collective = fef_from_collective(rho).score
        worst = max(worst, abs(direct - collective))
    settings = pi_matrix(DensityMatrix(2, 2, np.eye(4, dtype=complex) / 4)).settings_count
    print(f"states={args.n} settings={settings} max|score_collective - score_direct|={worst:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quditwitness",
                                     description="Entanglement detection in two-qudit states "
                                                 "via random two-qubit reductions")
    parser.add_argument("--version", action="version", version=f"quditwitness {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fef", help="evaluate the witness on a serialized two-qubit state")
    p.add_argument("state_file")
    p.set_defaults(func=cmd_fef)

    def common(p, samples_default=DEFAULT_SAMPLES):
        p.add_argument("--samples", type=_positive_int, default=samples_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=_positive_int, default=_default_workers())
        p.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    p = sub.add_parser("icps-sweep", help="sensitivity table over the Schmidt-form ensemble")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--mode", choices=["single", "parallel", "both"], default="both")
    p.add_argument("--strategies", nargs="+", choices=STRATEGY_CHOICES,
                   default=STRATEGY_CHOICES[:3])
    p.add_argument("--combined-selection", choices=[c.value for c in CombinedSelection],
                   default=CombinedSelection.FRESH.value)
    p.add_argument("--ground-truth", choices=[g.value for g in IcpsGroundTruth],
                   default=IcpsGroundTruth.RANK2.value)
    common(p)
    p.set_defaults(func=cmd_icps_sweep)

    p = sub.add_parser("random-sweep", help="sensitivity on Haar-random noisy pure states")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--noise", type=float, nargs="+", required=True)
    p.add_argument("--mode", choices=["single", "parallel", "both"], default="both")
    common(p)
    p.set_defaults(func=cmd_random_sweep)

    p = sub.add_parser("grid", help="alpha-v sensitivity grid for fixed (d, r)")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--alpha-steps", type=_positive_int, default=50)
    p.add_argument("--v-steps", type=_positive_int, default=50)
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--strategy", choices=STRATEGY_CHOICES + ["all"], default="all")
    p.add_argument("--mode", choices=["single", "parallel"], default="single")
    p.add_argument("--combined-selection", choices=[c.value for c in CombinedSelection],
                   default=CombinedSelection.FRESH.value)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive_int, default=_default_workers())
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("analytic", help="exact thresholds and detection fractions")
    p.add_argument("--d", type=_positive_int, required=True)
    p.add_argument("--r", type=_positive_int, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("collective-verify",
                       help="check the 10-setting collective witness against direct evaluation")
    p.add_argument("--n", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_collective_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InvalidStateError, InvalidParamsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (np.linalg.LinAlgError, ZeroProbabilityError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4


def cli_entry() -> None:
    sys.exit(main())
