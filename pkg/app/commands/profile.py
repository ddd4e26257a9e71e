"""
profile: performance profiles with bootstrap bands, plus the readouts
derived from them.
"""

import argparse
from itertools import combinations

import numpy as np

from common import config
from common.exceptions import UsageError
from common.logger import get_logger
from common.models import ProfileKind, ReportDocument
from core.aggregates import optimality_gap_curve
from core.profiles import (
    average_score_distribution,
    default_tau_grid,
    dominance,
    profile_area,
    profile_variance,
    profile_with_bands,
    readout_median,
    rescaled_tau_axis,
    run_score_distribution,
)
from core.report_writer import write_report
from core.svg_plot import profile_plot

from app.commands import options

logger = get_logger(__name__)

DEFAULT_GAMMAS = "0.25,0.5,0.75,1.0,1.25,1.5,1.75,2.0"


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "profile",
        parents=parents + [options.input_parser()],
        help="performance profiles (score distributions)",
    )
    parser.add_argument("--kind", choices=[k.value for k in ProfileKind], default=ProfileKind.RUN_SCORES.value)
    parser.add_argument("--grid", nargs=3, type=float, metavar=("START", "STOP", "COUNT"), help="evenly spaced thresholds instead of every observed score")
    parser.add_argument("--bands", action=argparse.BooleanOptionalAction, default=True, help="bootstrap bands (run-score profiles only)")
    parser.add_argument("--rescale-axis", action="store_true", help="non-linear tau axis")
    parser.add_argument("--coverage", type=float, default=config.coverage)
    parser.add_argument("--replicates", type=int, default=None, help="band replicates")
    parser.add_argument("--gammas", default=DEFAULT_GAMMAS, help="comma-separated optimality gap targets")
    parser.set_defaults(handler=run)


def _grid(args: argparse.Namespace, sets) -> np.ndarray:
    if args.grid is None:
        return default_tau_grid(list(sets.values()))
    start, stop, count = args.grid
    if count < 2 or count != int(count) or stop <= start:
        raise UsageError("--grid needs START < STOP and an integer COUNT >= 2")
    return np.linspace(start, stop, int(count))


def _gammas(value: str) -> list[float]:
    try:
        gammas = [float(g) for g in value.split(",") if g.strip()]
    except ValueError:
        raise UsageError(f"--gammas expects numbers, got {value!r}") from None
    if not gammas or any(g <= 0 for g in gammas) or any(b <= a for a, b in zip(gammas, gammas[1:])):
        raise UsageError("--gammas must be positive and strictly ascending")
    return gammas


def run(args: argparse.Namespace) -> int:
    coverage = options.coverage_from(args)
    replicates = options.replicates_from(args, config.band_replicates)
    seed = options.seed_from(args)
    kind = ProfileKind(args.kind)
    gammas = _gammas(args.gammas)

    sets, inputs = options.load_inputs(args)
    grid = _grid(args, sets)
    bands = args.bands and kind == ProfileKind.RUN_SCORES
    if args.bands and not bands:
        logger.warning("Bands are only computed for run-score profiles, skipping")

    curves = []
    for scores in sets.values():
        if bands:
            curves.append(profile_with_bands(scores, grid, coverage, replicates, seed))
        elif kind == ProfileKind.RUN_SCORES:
            curves.append(run_score_distribution(scores, grid))
        else:
            curves.append(average_score_distribution(scores, grid))
    rescale = rescaled_tau_axis(curves) if args.rescale_axis else None

    doc = ReportDocument(command="profile", inputs=inputs)
    doc.settings = {
        "seed": seed,
        "kind": kind.value,
        "bands": bands,
        "replicates": replicates if bands else None,
        "coverage": coverage if bands else None,
        "rescale_axis": bool(args.rescale_axis),
        "gammas": gammas,
    }

    readouts = {}
    for curve in curves:
        scores = sets[curve.algorithm_id]
        median = readout_median(curve)
        readout = {
            "median": median,
            "area_from_zero": profile_area(curve),
            "optimality_gap_curve": [
                {"gamma": g, "normalized_gap": gap} for g, gap in optimality_gap_curve(scores, gammas)
            ],
        }
        if median is not None:
            runs_var, means_var = profile_variance(scores, median, config.variance_resamples, seed)
            readout["variance_at_median"] = {"run_scores": runs_var, "task_means": means_var}
        readouts[curve.algorithm_id] = readout

    doc.profiles = {
        "curves": {curve.algorithm_id: curve.to_records() for curve in curves},
        "readouts": readouts,
        "dominance": [
            {"a": a.algorithm_id, "b": b.algorithm_id, "relation": dominance(a, b)}
            for a, b in combinations(curves, 2)
        ],
    }
    if rescale is not None:
        doc.profiles["rescaled_axis"] = [{"tau": t, "position": p} for t, p in rescale.items()]

    artifact = profile_plot(curves, rescale)
    write_report(doc, options.out_dir(args), args.format, artifacts=[artifact])
    return 0
