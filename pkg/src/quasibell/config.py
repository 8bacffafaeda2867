"""Numerical tolerances shared by every module."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-12
    cross_path: float = 1e-10
    table: float = 5e-5
    distribution_sum: float = 1e-9
    negative_entry: float = 1e-12
    denominator: float = 1e-9


TOL = Tolerances()

# Largest number of deterministic strategies minimize_bell will enumerate.
ENUMERATION_BUDGET = 10**8
