"""
Descent statistics of uniform permutations.
"""

from core.utils import to_float
from distributions.services import (
    Statistic,
    conditional_descent_table,
    eulerian_pmf,
    mc_histogram,
    one_sided_descent_table,
)
from cli.base import LabCommand
from cli.output import LabResult, Table, histogram_result, pmf_result, run_config_hash
from samplers.domain import RngStream


class Command(LabCommand):
    help = "Exact and sampled descent distributions; conditional descent tables"
    actions = ("exact", "sample", "lemma")

    def add_lab_arguments(self, parser):
        self.add_size_arguments(parser, samples=100000)

    def action_exact(self, options):
        return pmf_result(eulerian_pmf(self.require(options, "n")))

    def action_sample(self, options):
        rng = RngStream(seed=options["seed"], stream_id=options["stream"])
        statistic = Statistic(kind="descents", n=self.require(options, "n"))
        hist = mc_histogram(statistic, options["samples"], rng, options["workers"], run_hash=run_config_hash(options))
        return histogram_result(hist)

    def action_lemma(self, options):
        n = options["n"] or 4
        rows = [
            ("two_sided", previous, following, p.numerator, p.denominator, to_float(p))
            for (previous, following), p in sorted(conditional_descent_table(n, j=2).items())
        ]
        rows += [
            ("one_sided", previous, None, p.numerator, p.denominator, to_float(p))
            for previous, p in sorted(one_sided_descent_table(min(n, 8)).items())
        ]
        header = ("case", "x_prev", "x_next", "prob_num", "prob_den", "prob_float")
        return LabResult(table=Table(header, rows))
