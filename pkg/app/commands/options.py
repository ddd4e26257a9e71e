"""
Options and helpers shared by every subcommand.
"""

import argparse
import math
from pathlib import Path
from typing import Any

from common import config
from common.config import CI_METHODS
from common.exceptions import ScoreDataError, UsageError
from common.logger import get_logger
from common.models import CiMethod, ResampleKind, ResampleStrategy, ScoreSet
from core.report_writer import OUTPUT_FORMATS, input_record
from core.score_data import detect_format, load_normalization, load_scores, normalize

logger = get_logger(__name__)

AUTO_SUBSAMPLE = "auto"


def common_parser() -> argparse.ArgumentParser:
    """Parent parser with the output, seed and parallelism options."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--seed", type=int, default=None, help="random seed (falls back to PRECIPICE_SEED, then settings)")
    parser.add_argument("--out", default="out", help="output directory (default: out)")
    parser.add_argument("--format", nargs="+", choices=OUTPUT_FORMATS, default=list(OUTPUT_FORMATS), help="output formats")
    parser.add_argument("--workers", type=int, default=None, help="worker threads; outputs do not depend on it")
    return parser


def input_parser() -> argparse.ArgumentParser:
    """Parent parser for commands that read score files."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--input", nargs="+", action="extend", required=True, metavar="PATH", help="score files (JSON or CSV)")
    parser.add_argument("--normalize", metavar="PATH", help="per-task reference points (JSON)")
    return parser


def bootstrap_parser() -> argparse.ArgumentParser:
    """Parent parser for the interval options."""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--ci-method", choices=CI_METHODS, default=config.ci_method)
    parser.add_argument("--coverage", type=float, default=config.coverage, help="nominal coverage in (0, 1)")
    parser.add_argument("--replicates", type=int, default=None, help="bootstrap replicates")
    parser.add_argument("--strategy", choices=[k.value for k in ResampleKind], default=ResampleKind.RUNS_WITHIN_TASKS.value)
    parser.add_argument(
        "--subsample",
        nargs="?",
        const=AUTO_SUBSAMPLE,
        default=None,
        help="m/n bootstrap: runs drawn per task (no value: half the smallest run count)",
    )
    return parser


def load_inputs(args: argparse.Namespace) -> tuple[dict[str, ScoreSet], list[dict[str, str]]]:
    """
    Read every input file into one algorithm -> ScoreSet mapping, normalized
    when --normalize is given.

    Returns:
        (score sets in input order, input records with sha256 digests)
    """
    sets: dict[str, ScoreSet] = {}
    records = []
    for path in args.input:
        with open(path, "rb") as f:
            loaded = load_scores(f, detect_format(path))
        for algorithm, scores in loaded.items():
            if algorithm in sets:
                raise ScoreDataError(f"Algorithm {algorithm!r} appears in more than one input", location=str(path))
            sets[algorithm] = scores
        records.append(input_record(path))
        logger.info(f"Loaded {len(loaded)} algorithm(s) from {path}")

    if args.normalize:
        with open(args.normalize, "rb") as f:
            spec = load_normalization(f)
        sets = {algorithm: normalize(scores, spec) for algorithm, scores in sets.items()}
        records.append(input_record(args.normalize))
    return sets, records


def seed_from(args: argparse.Namespace) -> int:
    return config.resolve_seed(args.seed)


def replicates_from(args: argparse.Namespace, default: int, minimum: int = 1) -> int:
    replicates = args.replicates if args.replicates is not None else default
    if replicates < minimum:
        raise UsageError(f"--replicates must be >= {minimum}, got {replicates}")
    return replicates


def coverage_from(args: argparse.Namespace) -> float:
    if not 0 < args.coverage < 1:
        raise UsageError(f"--coverage must lie in (0, 1), got {args.coverage}")
    return args.coverage


def strategy_from(args: argparse.Namespace, sets: dict[str, ScoreSet]) -> ResampleStrategy:
    kind = ResampleKind(args.strategy)
    if args.subsample is None:
        return ResampleStrategy(kind)
    smallest = min(int(s.run_counts.min()) for s in sets.values())
    if args.subsample == AUTO_SUBSAMPLE:
        return ResampleStrategy(kind, math.ceil(smallest / 2))
    try:
        size = int(args.subsample)
    except ValueError:
        raise UsageError(f"--subsample expects an integer, got {args.subsample!r}") from None
    if not 1 <= size <= smallest:
        raise UsageError(f"--subsample must lie in [1, {smallest}], got {size}")
    return ResampleStrategy(kind, size)


def interval_settings(args: argparse.Namespace, strategy: ResampleStrategy, replicates: int, seed: int) -> dict[str, Any]:
    return {
        "seed": seed,
        "replicates": replicates,
        "ci_method": CiMethod(args.ci_method).value,
        "coverage": args.coverage,
        "strategy": strategy.kind.value,
        "subsample": strategy.subsample_size,
    }


def require_algorithms(sets: dict[str, ScoreSet], minimum: int, command: str) -> None:
    if len(sets) < minimum:
        raise UsageError(f"{command} needs at least {minimum} algorithms, got {len(sets)}")


def out_dir(args: argparse.Namespace) -> Path:
    return Path(args.out)
