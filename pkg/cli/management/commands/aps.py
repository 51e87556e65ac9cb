"""
3-term progression counts of p-random subsets of Z/nZ.
"""

from combinatorics.serializers import FourierSpectrumSchema, MomentSummarySchema
from combinatorics.services import ap_fourier_spectrum, ap_moments_unconditional, brute_force_fourier
from core.utils import to_float
from distributions.services import Statistic, exhaustive_ap_pmf, mc_histogram
from cli.base import LabCommand
from cli.output import LabResult, Table, histogram_result, pmf_result, run_config_hash
from samplers.domain import RngStream


class Command(LabCommand):
    help = "Exact pmf, Monte Carlo histogram, moments and Fourier levels of the progression count"
    actions = ("exact", "sample", "moments", "fourier")

    def add_lab_arguments(self, parser):
        self.add_size_arguments(parser, p=True, samples=100000)
        parser.add_argument(
            "--brute-force",
            action="store_true",
            help="Add numeric level energies over all 2^n points (n <= 9)",
        )

    def action_exact(self, options):
        n = self.require(options, "n")
        pmf = exhaustive_ap_pmf(n, options["p"], options["allow_composite"], options["workers"])
        return pmf_result(pmf)

    def action_sample(self, options):
        rng = RngStream(seed=options["seed"], stream_id=options["stream"])
        statistic = Statistic(kind="aps", n=self.require(options, "n"), p=options["p"])
        hist = mc_histogram(statistic, options["samples"], rng, options["workers"], run_hash=run_config_hash(options))
        return histogram_result(hist)

    def action_moments(self, options):
        summary = ap_moments_unconditional(self.require(options, "n"), options["p"], options["allow_composite"])
        return LabResult(report=MomentSummarySchema.from_summary(summary))

    def action_fourier(self, options):
        n = self.require(options, "n")
        spectrum = ap_fourier_spectrum(n, options["p"], options["allow_composite"])
        header = ["level", "set_size", "count", "squared_num", "squared_den", "energy_float"]
        numeric = None
        if options["brute_force"]:
            numeric = brute_force_fourier(n, options["p"])["level_energy"]
            header.append("brute_force_energy")

        rows = []
        for level in spectrum.levels:
            row = [
                level.name,
                level.set_size,
                level.count,
                level.squared_coefficient.numerator,
                level.squared_coefficient.denominator,
                to_float(level.energy),
            ]
            if numeric is not None:
                row.append(numeric.get(level.set_size, 0.0))
            rows.append(row)
        return LabResult(
            table=Table(tuple(header), rows),
            report=FourierSpectrumSchema.model_validate(spectrum),
            notes={"parseval_variance": to_float(spectrum.parseval_variance)},
        )
