"""
Combinatorial identities checked against brute force.
"""

from combinatorics.services import complement_identity, extension_count, intersection_table
from counters.services import (
    brute_force_complement_sums,
    brute_force_extension_count,
    brute_force_intersections,
)
from cli.base import LabCommand
from cli.output import LabResult, Table


class Command(LabCommand):
    help = "Complement identity, intersection table and extension counts with brute-force columns"
    actions = ("complement", "intersections", "extensions")

    def add_lab_arguments(self, parser):
        self.add_size_arguments(parser)
        parser.add_argument(
            "--check",
            action="store_true",
            help="Enumerate all 2^n subsets for the complement identity",
        )

    def action_complement(self, options):
        n = self.require(options, "n")
        observed = brute_force_complement_sums(n) if options["check"] else None
        rows = []
        for k in range(n + 1):
            value = complement_identity(n, k)
            if observed is None:
                rows.append((k, value, None, None))
            else:
                values = sorted(observed[k])
                rows.append((k, value, " ".join(map(str, values)), values == [value]))
        return LabResult(table=Table(("k", "formula", "observed", "holds"), rows))

    def action_intersections(self, options):
        table = intersection_table(self.require(options, "n"), options["allow_composite"])
        brute = brute_force_intersections(table.n)
        rows = [(i, formula, brute[i], formula == brute[i]) for i, formula in enumerate(table.counts)]
        return LabResult(table=Table(("i", "formula", "brute_force", "holds"), rows))

    def action_extensions(self, options):
        n = self.require(options, "n")
        rows = []
        for i in range(4):
            formula = extension_count(n, i, options["allow_composite"])
            brute = brute_force_extension_count(n, tuple(range(i)))
            rows.append((i, formula, brute, formula == brute))
        return LabResult(table=Table(("i", "formula", "brute_force", "holds"), rows))
