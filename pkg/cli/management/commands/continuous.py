"""
Weighted progression count with i.i.d. uniform weights.
"""

from combinatorics.serializers import ContinuousVarianceSchema
from combinatorics.services import ap_moments_continuous
from distributions.services import Statistic, mc_histogram
from cli.base import LabCommand
from cli.output import LabResult, histogram_result, run_config_hash
from samplers.domain import RngStream


class Command(LabCommand):
    help = "Binned Monte Carlo histogram and variance discrepancy report of the continuous count"
    actions = ("sample", "moments")

    def add_lab_arguments(self, parser):
        self.add_size_arguments(parser, samples=100000)
        parser.add_argument("--bin-width", type=float, default=1.0, help="Histogram bin width")

    def action_sample(self, options):
        rng = RngStream(seed=options["seed"], stream_id=options["stream"])
        statistic = Statistic(
            kind="aps_continuous_binned",
            n=self.require(options, "n"),
            bin_width=options["bin_width"],
        )
        hist = mc_histogram(statistic, options["samples"], rng, options["workers"], run_hash=run_config_hash(options))
        return histogram_result(hist)

    def action_moments(self, options):
        report = ap_moments_continuous(self.require(options, "n"), options["allow_composite"])
        return LabResult(report=ContinuousVarianceSchema.model_validate(report))
