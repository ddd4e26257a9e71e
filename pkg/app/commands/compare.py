"""
compare: average probability of improvement between algorithms.
"""

import argparse
from itertools import combinations

from common import config
from common.logger import get_logger
from common.models import CiMethod, ReportDocument
from core.aggregates import probability_of_improvement
from core.bootstrap import MIN_REPLICATES, paired_confidence_interval
from core.report_writer import write_report

from app.commands import options

logger = get_logger(__name__)

# P(X > Y) upper bound above this counts as a meaningful improvement
MEANINGFUL_THRESHOLD = 0.75


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "compare",
        parents=parents + [options.input_parser(), options.bootstrap_parser()],
        help="probability of improvement for every pair of algorithms",
    )
    parser.set_defaults(handler=run)


def comparison_record(x: str, y: str, estimate) -> dict:
    """
    Flat record for one pair; P(Y > X) is the complement of P(X > Y)
    since ties count one half for both.
    """
    return {
        "x": x,
        "y": y,
        "p_x_over_y": estimate.point,
        "lower": estimate.lower,
        "upper": estimate.upper,
        "p_y_over_x": 1.0 - estimate.point,
        "p_y_over_x_lower": 1.0 - estimate.upper,
        "p_y_over_x_upper": 1.0 - estimate.lower,
        "statistically_significant": bool(estimate.lower > 0.5),
        "statistically_meaningful": bool(estimate.upper > MEANINGFUL_THRESHOLD),
        "method": estimate.method.value,
        "nominal_coverage": estimate.nominal_coverage,
        "replicates": estimate.replicates,
        "seed": estimate.seed,
    }


def run(args: argparse.Namespace) -> int:
    coverage = options.coverage_from(args)
    replicates = options.replicates_from(args, config.compare_replicates, MIN_REPLICATES)
    seed = options.seed_from(args)

    sets, inputs = options.load_inputs(args)
    options.require_algorithms(sets, 2, "compare")
    strategy = options.strategy_from(args, sets)
    method = CiMethod(args.ci_method)

    doc = ReportDocument(command="compare", inputs=inputs)
    doc.settings = options.interval_settings(args, strategy, replicates, seed)
    for x, y in combinations(sets, 2):
        estimate = paired_confidence_interval(
            sets[x], sets[y], probability_of_improvement, method, coverage, replicates, strategy, seed
        )
        record = comparison_record(x, y, estimate)
        doc.comparisons.append(record)
        logger.info(
            f"P({x} > {y}) = {estimate.point:.4f} [{estimate.lower:.4f}, {estimate.upper:.4f}]"
            f", significant={record['statistically_significant']}"
        )

    write_report(doc, options.out_dir(args), args.format)
    return 0
