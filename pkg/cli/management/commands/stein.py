"""
Stein-method bounds and the local-limit diagnostics for progression counts.
"""

from core.utils import to_float
from cli.base import LabCommand
from cli.output import LabResult, Table
from samplers.domain import RngStream
from steinlab.serializers import (
    ChatterjeeBoundSchema,
    DependencyGraphSchema,
    ExchangeableReportSchema,
    GapDiagnosticSchema,
    PeakHeightSchema,
    SpacingProfileSchema,
)
from steinlab.services import (
    chatterjee_bound,
    dependency_graph,
    exchangeable_verify,
    gap_diagnostic,
    peak_height_check,
    spacing_profile,
)


class Command(LabCommand):
    help = "Dependency graph, Chatterjee bound, exchangeable pair, spacing, gap and peak checks"
    actions = ("graph", "bound", "exchangeable", "spacing", "gap", "peak")

    def add_lab_arguments(self, parser):
        self.add_size_arguments(parser, k=True, p=True, samples=100000)
        parser.add_argument("--mode", choices=("exact", "mc"), default=None)
        parser.add_argument("--x", type=int, default=None, help="Target value for the gap diagnostic")
        parser.add_argument("--exact", action="store_true", help="Include the exact probability")

    def action_graph(self, options):
        summary = dependency_graph(self.require(options, "n"), options["allow_composite"])
        return LabResult(report=DependencyGraphSchema.model_validate(summary))

    def action_bound(self, options):
        bound = chatterjee_bound(self.require(options, "n"), options["p"], options["allow_composite"])
        return LabResult(report=ChatterjeeBoundSchema.model_validate(bound))

    def action_exchangeable(self, options):
        n = self.require(options, "n")
        mode = options["mode"] or "exact"
        reports = []
        for k in self.k_values(options, n):
            reports.append(
                exchangeable_verify(
                    n,
                    k,
                    mode=mode,
                    samples=options["samples"],
                    rng=RngStream(seed=options["seed"], stream_id=options["stream"] + k),
                    allow_composite=options["allow_composite"],
                )
            )
        rows = [
            (
                r.n,
                r.k,
                r.mode,
                r.subsets,
                r.mean,
                r.lambda_stated,
                r.lambda_swap,
                r.lambda_fitted,
                r.max_residual_stated,
                r.max_residual_swap,
            )
            for r in reports
        ]
        header = (
            "n",
            "k",
            "mode",
            "subsets",
            "mean",
            "lambda_stated",
            "lambda_swap",
            "lambda_fitted",
            "max_residual_stated",
            "max_residual_swap",
        )
        report = ExchangeableReportSchema.model_validate(reports[0]) if len(reports) == 1 else None
        streams = tuple(options["stream"] + r.k for r in reports) if mode == "mc" else ()
        return LabResult(table=Table(header, rows), report=report, stream_ids=streams)

    def action_spacing(self, options):
        profile = spacing_profile(self.require(options, "n"), allow_composite=options["allow_composite"])
        rows = [
            (k, gap.numerator, gap.denominator, sigma, ratio)
            for k, gap, sigma, ratio in zip(profile.k_values, profile.gaps, profile.sigmas, profile.ratios)
        ]
        return LabResult(
            table=Table(("k", "gap_num", "gap_den", "sigma", "ratio"), rows),
            report=SpacingProfileSchema.model_validate(profile),
            notes={"coefficient_of_variation": profile.coefficient_of_variation},
        )

    def action_gap(self, options):
        diagnostic = gap_diagnostic(
            self.require(options, "n"),
            self.require(options, "x"),
            include_exact=options["exact"],
            allow_composite=options["allow_composite"],
        )
        notes = {}
        if diagnostic.exact_probability is not None:
            notes["exact_probability_float"] = to_float(diagnostic.exact_probability)
        return LabResult(report=GapDiagnosticSchema.model_validate(diagnostic), notes=notes)

    def action_peak(self, options):
        mode = options["mode"] or "mc"
        report = peak_height_check(
            self.require(options, "n"),
            samples=options["samples"],
            rng=RngStream(seed=options["seed"], stream_id=options["stream"]),
            mode=mode,
            workers=options["workers"],
        )
        streams = (options["stream"],) if mode == "mc" else ()
        return LabResult(report=PeakHeightSchema.model_validate(report), stream_ids=streams)
