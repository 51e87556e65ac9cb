"""
Command-line entry point with the fixed exit-code contract:
0 success, 1 partial, 2 validation, 3 resource limit, 64 usage.
"""

import logging
import os
import sys

from django.core.management import load_command_class
from django.core.management.base import CommandError

from core.exceptions import UsageError, exit_code_for

logger = logging.getLogger(__name__)

LAB_COMMANDS = (
    "descents",
    "aps",
    "conditional",
    "continuous",
    "identities",
    "stein",
    "metrics",
    "scan",
    "verify",
)


def usage() -> str:
    return (
        "usage: limitlab <subcommand> [action] [flags]\n\n"
        f"subcommands: {', '.join(LAB_COMMANDS)}\n"
        "run 'limitlab <subcommand> --help' for flags\n"
    )


def run(argv=None, stdout=None, stderr=None) -> int:
    """
    Parse argv (without the program name), run the subcommand and return
    its exit code. Errors are reported on stderr, never raised.
    """
    import django

    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "limitlab.settings")
    django.setup()

    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    if not argv:
        stderr.write(usage())
        return UsageError.returncode
    if argv[0] in ("-h", "--help", "help"):
        stdout.write(usage())
        return 0

    name, rest = argv[0], argv[1:]
    if name not in LAB_COMMANDS:
        stderr.write(f"Unknown subcommand '{name}'\n{usage()}")
        return UsageError.returncode

    command = load_command_class("cli", name)
    command.argv = argv
    parser = command.create_parser("limitlab", name)
    try:
        options = parser.parse_args(rest)
    except CommandError as e:
        stderr.write(f"{e}\n")
        return exit_code_for(e)
    except SystemExit as e:
        # --help exits through argparse
        return e.code if isinstance(e.code, int) else 0

    cmd_options = vars(options)
    args = cmd_options.pop("args", ())
    try:
        command.execute(*args, stdout=stdout, stderr=stderr, **cmd_options)
    except Exception as e:
        code = exit_code_for(e)
        stderr.write(f"Error: {getattr(e, 'detail', e)}\n")
        logger.warning(f"'{name}' exited with code {code}: {getattr(e, 'detail', e)}")
        return code
    return 0


def main():
    sys.exit(run())
