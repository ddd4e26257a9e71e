"""
metrics: aggregate metrics with stratified bootstrap interval estimates.
"""

import argparse

from common import config
from common.exceptions import EstimationError, UsageError
from common.logger import get_logger
from common.models import CiMethod, ReportDocument
from core.aggregates import DEFAULT_METRICS, parse_metric_kind, statistic_by_name
from core.bootstrap import MIN_REPLICATES, confidence_interval
from core.report_writer import write_report

from app.commands import options

logger = get_logger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "metrics",
        parents=parents + [options.input_parser(), options.bootstrap_parser()],
        help="aggregate metrics with confidence intervals",
    )
    parser.add_argument("--metrics", default=",".join(DEFAULT_METRICS), help="comma-separated metric names")
    parser.add_argument("--gamma", type=float, default=1.0, help="optimality gap target / superhuman threshold")
    parser.add_argument("--trim", type=float, default=0.25, help="IQM trim fraction / difficulty progress fraction")
    parser.set_defaults(handler=run)


def metric_names(value: str) -> list[str]:
    """Split and check a --metrics list before any input is read."""
    names = [name.strip() for name in value.split(",") if name.strip()]
    for name in names:
        parse_metric_kind(name)
    return names


def run(args: argparse.Namespace) -> int:
    names = metric_names(args.metrics)
    try:
        statistics = {name: statistic_by_name(name, args.trim, args.gamma) for name in names}
    except ValueError as e:
        raise UsageError(str(e)) from e
    coverage = options.coverage_from(args)
    replicates = options.replicates_from(args, config.replicates, MIN_REPLICATES)
    seed = options.seed_from(args)

    sets, inputs = options.load_inputs(args)
    strategy = options.strategy_from(args, sets)
    method = CiMethod(args.ci_method)

    doc = ReportDocument(command="metrics", inputs=inputs)
    doc.settings = {
        **options.interval_settings(args, strategy, replicates, seed),
        "metrics": names,
        "gamma": args.gamma,
        "trim": args.trim,
    }
    for algorithm, scores in sets.items():
        single = [task for task, count in zip(scores.tasks, scores.run_counts) if count == 1]
        if single:
            logger.warning_algorithm(algorithm, message=f"Single-run tasks do not vary under resampling: {single}")
        doc.metrics[algorithm] = {}
        for name, statistic in statistics.items():
            try:
                estimate = confidence_interval(scores, statistic, method, coverage, replicates, strategy, seed)
            except EstimationError as e:
                logger.error_algorithm(algorithm, metric=name, message=str(e))
                raise
            doc.metrics[algorithm][name] = estimate.to_dict()
            logger.info_algorithm(
                algorithm,
                metric=name,
                message=f"{estimate.point:.4f} [{estimate.lower:.4f}, {estimate.upper:.4f}]",
            )

    write_report(doc, options.out_dir(args), args.format)
    return 0
