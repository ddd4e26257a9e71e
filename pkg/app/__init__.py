"""
Command-line application for scorecard.
"""

import argparse

from common import TOOL_VERSION


def create_app() -> argparse.ArgumentParser:
    """
    Create the argument parser with every subcommand registered.
    """
    parser = argparse.ArgumentParser(
        prog="scorecard",
        description="Statistically rigorous evaluation of benchmark runs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {TOOL_VERSION}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    # Register subcommands
    from app.commands import compare, metrics, profile, ranks, validate
    from app.commands.options import common_parser

    parents = [common_parser()]
    for command in (metrics, compare, profile, ranks, validate):
        command.register(subparsers, parents)

    return parser
