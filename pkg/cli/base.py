"""
Shared base for the harness subcommands.
"""

from fractions import Fraction
from typing import Optional, Tuple
import logging
import shlex
import time

from django.core.management.base import BaseCommand

from cli.output import LabResult, default_path, write_data_files, write_manifests
from core.config import Config
from core.exceptions import UsageError

logger = logging.getLogger(__name__)


class LabCommand(BaseCommand):
    """
    A subcommand with positional action and the common flags.

    Subclasses list their actions and implement action_<name>(options)
    returning a LabResult; handle() writes the data files and manifests.
    """

    requires_system_checks = []
    actions: Tuple[str, ...] = ()
    argv = None

    def add_arguments(self, parser):
        if self.actions:
            parser.add_argument("action", choices=self.actions, help="Action to run")
        self.add_lab_arguments(parser)
        parser.add_argument(
            "--seed", type=int, default=Config.SEED, help="Root seed (default LIMITLAB_SEED)"
        )
        parser.add_argument(
            "--workers", type=int, default=None, help="Process cap (default: available cores)"
        )
        parser.add_argument("--out", default=None, help="Data file path")
        parser.add_argument("--format", choices=("csv", "json"), default="csv")
        parser.add_argument(
            "--allow-composite",
            action="store_true",
            help="Evaluate prime-only formulas at odd composite n (formula-unsafe)",
        )

    def add_lab_arguments(self, parser):
        pass

    @staticmethod
    def add_size_arguments(parser, k=False, p=False, samples=None):
        parser.add_argument("--n", type=int, default=None, help="Size (modulus or permutation length)")
        if k:
            parser.add_argument("--k", type=int, default=None, help="Subset size")
            parser.add_argument("--k-all", action="store_true", help="Every k in 0..n")
        if p:
            parser.add_argument(
                "--p", type=Fraction, default=Fraction(1, 2), help="Inclusion probability, e.g. 0.5 or 1/4"
            )
        if samples is not None:
            parser.add_argument("--samples", type=int, default=samples, help="Monte Carlo sample size")
            parser.add_argument("--stream", type=int, default=0, help="Stream id within the seed")

    @staticmethod
    def require(options: dict, name: str):
        value = options.get(name)
        if value is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this action")
        return value

    def k_values(self, options: dict, n: int):
        if options.get("k_all"):
            return list(range(n + 1))
        return [self.require(options, "k")]

    def command_line(self, options: dict) -> str:
        if self.argv is not None:
            return shlex.join(["limitlab", *self.argv])
        return f"limitlab {self.name} {options.get('action') or ''}".strip()

    @property
    def name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]

    def handle(self, *args, **options):
        started = time.perf_counter()
        action = options.get("action")
        handler = getattr(self, f"action_{action}" if action else "action")
        result = handler(options)
        self.emit(result, options, started)

    def emit(self, result: LabResult, options: dict, started: float, stem: Optional[str] = None):
        """Write result and its manifests; returns the data file paths."""
        action = options.get("action") or stem
        fmt = options["format"]
        path = options.get("out") or default_path(self.name, action, fmt)
        written = write_data_files(result, path, fmt)
        write_manifests(
            written,
            self.command_line(options),
            self.name,
            options.get("action"),
            options,
            result,
            time.perf_counter() - started,
        )
        for data_path, _ in written:
            self.stdout.write(self.style.SUCCESS(f"Wrote {data_path}"))
        return [p for p, _ in written]
