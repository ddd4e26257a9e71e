"""
Subcommands of the scorecard CLI.

Each module exposes ``register(subparsers, parents)``, which adds its parser
and sets ``handler`` to a function of the parsed arguments returning the
exit code.
"""
