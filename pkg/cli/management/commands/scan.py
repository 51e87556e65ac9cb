"""
Scaling scans: a metric over several n with a log-log slope fit.
"""

from fractions import Fraction
import time

from cli.base import LabCommand
from cli.output import LabResult, Table
from core.exceptions import DomainError, PartialResultError, UsageError
from limitmetrics.serializers import ScanResultSchema
from limitmetrics.services import METRICS, MONTE_CARLO_METRICS, scaling_scan


class Command(LabCommand):
    help = "Evaluate a metric over --n-list and fit log(metric) against log(n)"

    def add_lab_arguments(self, parser):
        parser.add_argument("--metric", choices=sorted(METRICS), required=True)
        parser.add_argument("--n-list", type=int, nargs="+", required=True, help="At least 3 sizes")
        parser.add_argument("--p", type=Fraction, default=Fraction(1, 2))
        parser.add_argument("--samples", type=int, default=10000)

    @staticmethod
    def result_for(scan) -> LabResult:
        rows = list(scan.rows())
        return LabResult(
            table=Table(("n", "metric", "noise_floor"), rows),
            report=ScanResultSchema.from_result(scan),
            stream_ids=tuple(scan.n_values) if scan.metric in MONTE_CARLO_METRICS else (),
            companion=True,
        )

    def action(self, options):
        started = time.perf_counter()
        if len(options["n_list"]) < 3:
            raise UsageError(f"--n-list needs at least 3 values, got {len(options['n_list'])}")
        config = {"p": options["p"], "samples": options["samples"], "seed": options["seed"]}
        try:
            scan = scaling_scan(options["metric"], options["n_list"], config, options["workers"])
        except PartialResultError as e:
            self.emit(self.result_for(e.partial), options, started, stem=options["metric"])
            raise
        except DomainError as e:
            raise UsageError(str(e.detail)) from e
        return self.result_for(scan)

    def handle(self, *args, **options):
        started = time.perf_counter()
        self.emit(self.action(options), options, started, stem=options["metric"])
