"""
validate: run Monte Carlo experiments that check the estimators.
"""

import argparse
from pathlib import Path

from common.logger import get_logger
from common.models import ReportDocument
from core.harness import load_experiment_config, run_experiment
from core.report_writer import input_record, write_report

from app.commands import options

logger = get_logger(__name__)


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "validate",
        parents=parents,
        help="run harness experiments from a config file",
    )
    parser.add_argument("config", help="experiment config (JSON or YAML)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    seed = options.seed_from(args)
    experiments = load_experiment_config(args.config)
    base_dir = Path(args.config).parent

    reports = [run_experiment(experiment, seed, base_dir) for experiment in experiments]
    for report in reports:
        if report.is_error:
            logger.error(str(report))
        elif not report.is_pass:
            logger.warning(f"{report}: failed checks {[k for k, ok in report.checks.items() if not ok]}")

    doc = ReportDocument(command="validate", inputs=[input_record(args.config)])
    doc.settings = {"seed": seed}
    doc.experiments = [report.to_dict() for report in reports]
    write_report(doc, options.out_dir(args), args.format, experiments=reports)
    return 1 if any(report.is_error for report in reports) else 0
