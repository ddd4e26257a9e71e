"""
ranks: bootstrap rank distributions per task.
"""

import argparse

from common import config
from common.models import ReportDocument
from core.profiles import rank_distribution
from core.report_writer import write_report
from core.svg_plot import rank_plot

from app.commands import options


def register(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "ranks",
        parents=parents + [options.input_parser()],
        help="rank distributions with stacked-bar plot",
    )
    parser.add_argument("--replicates", type=int, default=None, help="bootstrap replicates")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    replicates = options.replicates_from(args, config.rank_replicates)
    seed = options.seed_from(args)

    sets, inputs = options.load_inputs(args)
    options.require_algorithms(sets, 2, "ranks")
    distribution = rank_distribution(list(sets.values()), replicates, seed)

    doc = ReportDocument(command="ranks", inputs=inputs)
    doc.settings = {"seed": seed, "replicates": replicates}
    doc.ranks = {
        "algorithms": list(distribution.algorithms),
        "mean": distribution.mean_matrix.tolist(),
        "per_task": {task: matrix.tolist() for task, matrix in distribution.per_task.items()},
    }

    write_report(doc, options.out_dir(args), args.format, artifacts=[rank_plot(distribution)])
    return 0
