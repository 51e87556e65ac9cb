"""
Progression counts of uniform k-subsets of Z/nZ.
"""

from combinatorics.services import ap_moments_conditional
from core.utils import to_float
from distributions.services import Statistic, exhaustive_conditional_pmf, mc_histogram
from cli.base import LabCommand
from cli.output import LabResult, Table, histogram_table, pmf_result, run_config_hash
from samplers.domain import RngStream


class Command(LabCommand):
    help = "Exact pmf, per-k Monte Carlo histograms and closed-form moments for fixed subset size"
    actions = ("exact", "sample", "moments")

    def add_lab_arguments(self, parser):
        self.add_size_arguments(parser, k=True, samples=10000)

    def action_exact(self, options):
        pmf = exhaustive_conditional_pmf(
            self.require(options, "n"),
            self.require(options, "k"),
            options["allow_composite"],
            options["workers"],
        )
        return pmf_result(pmf)

    def action_sample(self, options):
        n = self.require(options, "n")
        rows = []
        streams = []
        # Each k draws from its own stream, so a single-k run reproduces its k-all slice
        for k in self.k_values(options, n):
            stream_id = options["stream"] + k
            rng = RngStream(seed=options["seed"], stream_id=stream_id)
            hist = mc_histogram(
                Statistic(kind="aps_fixed_k", n=n, k=k),
                options["samples"],
                rng,
                options["workers"],
                run_hash=run_config_hash(options),
            )
            rows.extend(histogram_table(hist, prefix=(k,)))
            streams.append(stream_id)
        return LabResult(
            table=Table(("k", "value", "count", "frequency"), rows),
            stream_ids=tuple(streams),
        )

    def action_moments(self, options):
        n = self.require(options, "n")
        rows = []
        for k in self.k_values(options, n):
            summary = ap_moments_conditional(n, k, options["allow_composite"])
            rows.append(
                (
                    k,
                    summary.mean.numerator,
                    summary.mean.denominator,
                    summary.variance.numerator,
                    summary.variance.denominator,
                    to_float(summary.mean),
                    to_float(summary.variance),
                    to_float(summary.extras["leading_variance"]),
                )
            )
        header = (
            "k",
            "mean_num",
            "mean_den",
            "variance_num",
            "variance_den",
            "mean_float",
            "variance_float",
            "leading_variance_float",
        )
        return LabResult(table=Table(header, rows))
