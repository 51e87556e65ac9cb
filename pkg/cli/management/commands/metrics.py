"""
Distances, characteristic functions and inversion checks on exact pmfs.
"""

import math

import numpy as np

from core.exceptions import UsageError
from cli.base import LabCommand
from cli.output import LabResult, Table
from distributions.services import eulerian_pmf, exhaustive_ap_pmf, exhaustive_conditional_pmf
from limitmetrics.serializers import DistanceReportSchema, InversionErrorBoundSchema, LltErrorSchema
from limitmetrics.services import (
    bernoulli_char_check,
    char_fn,
    descent_char_bound,
    fulman_reference,
    inversion_error_bound,
    inversion_grid,
    kolmogorov,
    kolmogorov_wasserstein_check,
    llt_error,
    recover_masses,
    small_t_envelope,
    wasserstein_integer,
)

SOURCES = ("descents", "aps", "conditional")


class Command(LabCommand):
    help = "LLT error, Kolmogorov/Wasserstein, characteristic functions and Fourier inversion"
    actions = ("llt", "kolmogorov", "charfn", "invert", "envelope", "bernoulli", "split", "descentbound")

    def add_lab_arguments(self, parser):
        self.add_size_arguments(parser, k=True, p=True)
        parser.add_argument("--source", choices=SOURCES, default="descents", help="Exact distribution")
        parser.add_argument("--t-max", type=float, default=4.0, help="Largest t of the charfn grid")
        parser.add_argument("--t-points", type=int, default=201, help="Points of the charfn grid")
        parser.add_argument("--grid-rule", choices=("period", "curvature"), default="period")
        parser.add_argument("--split", type=float, default=None, help="Split point A of the inversion bound")

    def source_pmf(self, options):
        n = self.require(options, "n")
        source = options["source"]
        if source == "descents":
            return eulerian_pmf(n)
        if source == "aps":
            return exhaustive_ap_pmf(n, options["p"], options["allow_composite"], options["workers"])
        return exhaustive_conditional_pmf(
            n, self.require(options, "k"), options["allow_composite"], options["workers"]
        )

    def action_llt(self, options):
        pmf = self.source_pmf(options)
        return LabResult(report=LltErrorSchema.model_validate(llt_error(pmf, pmf.gaussian())))

    def action_kolmogorov(self, options):
        pmf = self.source_pmf(options)
        ref = pmf.gaussian()
        check = kolmogorov_wasserstein_check(pmf)
        reference = fulman_reference(options["n"]) if options["source"] == "descents" else None
        report = DistanceReportSchema(
            kolmogorov=kolmogorov(pmf, ref),
            wasserstein=wasserstein_integer(pmf, ref),
            standardized_wasserstein=check.wasserstein,
            bound=check.bound,
            bound_density_form=check.bound_density_form,
            holds=check.holds,
            reference_constant=reference,
        )
        return LabResult(report=report)

    def action_charfn(self, options):
        if options["t_points"] < 1:
            raise UsageError("--t-points must be positive")
        grid = np.linspace(0.0, options["t_max"], options["t_points"])
        profile = char_fn(self.source_pmf(options), standardize=True, t_grid=grid)
        header = ("t", "re_phi", "im_phi", "gauss", "abs_diff")
        return LabResult(table=Table(header, list(profile.rows())))

    def action_invert(self, options):
        pmf = self.source_pmf(options)
        grid = inversion_grid(pmf, standardize=True, rule=options["grid_rule"])
        profile = char_fn(pmf, standardize=True, t_grid=grid)
        exact = pmf.as_float()
        recovered = recover_masses(profile, pmf.support)
        errors = np.abs(recovered - exact)
        rows = [
            (int(k), float(p), float(r), float(e))
            for k, p, r, e in zip(pmf.support, exact, recovered, errors)
        ]
        return LabResult(
            table=Table(("k", "exact", "recovered", "abs_error"), rows),
            notes={"grid_step": profile.step, "grid_points": int(grid.size), "max_abs_error": float(errors.max())},
        )

    def action_envelope(self, options):
        envelope = small_t_envelope(self.require(options, "n"), workers=options["workers"])
        rows = [
            (float(t), float(d), float(b), float(envelope.constant * b))
            for t, d, b in zip(envelope.t_grid, envelope.abs_diff, envelope.envelope_basis)
        ]
        return LabResult(
            table=Table(("t", "abs_diff", "basis", "envelope"), rows),
            notes={"constant": envelope.constant},
        )

    def action_bernoulli(self, options):
        check = bernoulli_char_check(options["p"])
        rows = [
            (float(t), float(m), float(b), float(c))
            for t, m, b, c in zip(check.theta, check.modulus, check.bound, check.bound_nearest_integer)
        ]
        return LabResult(
            table=Table(("theta", "modulus", "bound", "bound_nearest_integer"), rows),
            notes={"holds": check.holds},
        )

    def action_split(self, options):
        bound = inversion_error_bound(self.source_pmf(options), split=options["split"])
        return LabResult(report=InversionErrorBoundSchema.model_validate(bound))

    def action_descentbound(self, options):
        bound = descent_char_bound(self.require(options, "n"))
        rows = [
            (float(t), float(theta), float(m), float(b))
            for t, theta, m, b in zip(bound.t_grid, bound.theta, bound.modulus, bound.bound)
        ]
        return LabResult(
            table=Table(("t", "theta", "modulus", "bound"), rows),
            notes={"holds": bound.holds, "sigma": math.sqrt((bound.n + 1) / 12)},
        )
