#!/usr/bin/env python
"""Command-line utility: harness subcommands plus Django's own commands."""

import os
import sys


def main():
    """Run harness subcommands through the exit-code runner, anything else through Django."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "limitlab.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc

    from cli.runner import LAB_COMMANDS, run

    if len(sys.argv) > 1 and sys.argv[1] in LAB_COMMANDS:
        sys.exit(run(sys.argv[1:]))
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
