"""Optimal Orlicz domains for Hardy-type operators into Marcinkiewicz endpoint spaces."""

from __future__ import annotations

from .asymptotics import Chart, Order, PLLTerm, format_term, parse_term, pll_compare
from .norms import (
    FundamentalFunction, LebesgueSpace, LorentzEndpointSpace, LorentzSpace, MarcinkiewiczSpace, OrliczSpace,
    fundamental, luxemburg_norm, norm,
)
from .operators import HardyParams, Operator, boundedness_probe, make_operator
from .optimality import (
    Verdict, WitnessConstruction, condition_v, condition_vi, decide, sup_operator_probe, g_statistics_probe,
    witness_construct,
)
from .rearrangement import StepFunction, distribution, hardy_average, rearrange
from .scenarios import John, Mazya, Trace, build_table, optimal_range_fundamental, reduce, sobolev_target, target_phi
from .young import (
    ExplicitYoung, PatchedYoung, SymbolicYoung, TabulatedYoung, YoungFunction, conjugate, power_cutoff_norm,
    power_young,
)

__version__ = "0.1.0"

__all__ = [
    "Chart", "Order", "PLLTerm", "format_term", "parse_term", "pll_compare",
    "FundamentalFunction", "LebesgueSpace", "LorentzEndpointSpace", "LorentzSpace", "MarcinkiewiczSpace",
    "OrliczSpace", "fundamental", "luxemburg_norm", "norm",
    "HardyParams", "Operator", "boundedness_probe", "make_operator",
    "Verdict", "WitnessConstruction", "condition_v", "condition_vi", "decide", "sup_operator_probe",
    "g_statistics_probe", "witness_construct",
    "StepFunction", "distribution", "hardy_average", "rearrange",
    "John", "Mazya", "Trace", "build_table", "optimal_range_fundamental", "reduce", "sobolev_target", "target_phi",
    "ExplicitYoung", "PatchedYoung", "SymbolicYoung", "TabulatedYoung", "YoungFunction", "conjugate",
    "power_cutoff_norm", "power_young",
]
