"""
Run the exhaustive-oracle suites at pinned sizes.
"""

from collections import Counter
import time

from cli.base import LabCommand
from cli.output import LabResult, Table
from cli.serializers import CheckSchema, VerifyReportSchema
from cli.suites import SUITES, SuiteContext, run_suite
from core.exceptions import OracleMismatchError, ResourceLimitError


class Command(LabCommand):
    help = "Cross-module oracle checks; exits nonzero on any exact-equality failure"

    def add_lab_arguments(self, parser):
        parser.add_argument("--suite", choices=(*SUITES, "all"), required=True)

    def handle(self, *args, **options):
        started = time.perf_counter()
        suite = options["suite"]
        outcomes = run_suite(suite, SuiteContext(seed=options["seed"], workers=options["workers"]))
        tally = Counter(outcome.status for outcome in outcomes)
        report = VerifyReportSchema(
            suite=suite,
            passed=tally["pass"],
            failed=tally["fail"],
            resource_limited=tally["resource_limit"],
            checks=[CheckSchema(**vars(outcome)) for outcome in outcomes],
        )
        rows = [(o.suite, o.check, o.status, o.detail) for o in outcomes]
        result = LabResult(table=Table(("suite", "check", "status", "detail"), rows), report=report)
        self.emit(result, options, started, stem=suite)

        if tally["fail"]:
            failed = [f"{o.suite}.{o.check}" for o in outcomes if o.status == "fail"]
            raise OracleMismatchError(f"Failed checks: {', '.join(failed)}", checks=failed)
        if tally["resource_limit"]:
            limited = [f"{o.suite}.{o.check}" for o in outcomes if o.status == "resource_limit"]
            raise ResourceLimitError(f"Checks over resource limits: {', '.join(limited)}", checks=limited)
        self.stdout.write(self.style.SUCCESS(f"Suite '{suite}': {tally['pass']} checks passed"))
