"""Verification suites shared by the CLI and the test-suite.

Each suite returns a :class:`SuiteResult`; failures carry enough location
data (scenario, pair, outcomes, term) to find the offending value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .bell import BellExpression, build_chained, build_quadrangle
from .config import TOL
from .distributions import Direction, uniform_separation, white_noise_separation
from .lhv import FullJointModel, labels_for, minimize_bell, separation_matrix
from .quantum import (QuantumScenario, adjacent_pairs, joint_probability_closed,
                      joint_probability_oracle)
from .residue import OutcomeKind, OutcomeMap, QuasiDistanceSpec


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict[str, Any]:
        return {"suite": self.name, "passed": self.passed, "checks": self.checks,
                "failures": self.failures, **self.details}


def lhv_minima(N: int, dmax: int, dmin: int = 2) -> SuiteResult:
    """Quadrangle and chained(N) minima over deterministic strategies, both types."""
    result = SuiteResult("lhv-minima")
    exprs: list[BellExpression] = [build_quadrangle()]
    if N != 2:
        exprs.append(build_chained(N))
    records = []
    for expr in exprs:
        n_settings = expr.settings
        for kind in (OutcomeKind.TYPE_I, OutcomeKind.TYPE_II):
            for D in range(dmin, dmax + 1):
                spec = QuasiDistanceSpec.of_kind(kind, D)
                found = minimize_bell(expr, n_settings, D, spec)
                record = {"expression": expr.name, "N": n_settings, "D": D, "type": kind.value,
                          "min": found.value, "argmin": found.argmin.as_dict()}
                records.append(record)
                result.checks += 1
                if found.value != 0:
                    result.failures.append(record)
    result.details["minima"] = records
    return result


def triangle_suite(models: int, seed: int = 0, N: int = 2, D: int = 3) -> SuiteResult:
    """Random full-joint models; every ordered label triple, both built-in specs."""
    result = SuiteResult("triangle")
    rng = np.random.default_rng(seed)
    labels = labels_for(N)
    specs = [QuasiDistanceSpec.of_kind(k, D) for k in (OutcomeKind.TYPE_I, OutcomeKind.TYPE_II)]
    worst = np.inf
    for i in range(models):
        # alternate dense and sparse models so boundary points of the simplex get hit
        model = FullJointModel.random(N, D, rng, sparsity=0.9 if i % 2 else None)
        for spec in specs:
            S = separation_matrix(model, spec)
            for x, y, z in itertools.product(range(len(labels)), repeat=3):
                slack = S[x, y] + S[y, z] - S[x, z]
                worst = min(worst, slack)
                result.checks += 1
                if slack < -TOL.identity:
                    result.failures.append({"model": i, "type": spec.kind.value,
                                            "triple": [str(labels[x]), str(labels[y]), str(labels[z])],
                                            "slack": slack})
    result.details["min_slack"] = float(worst)
    return result


def white_noise_suite(maps: int, seed: int = 0, dmin: int = 2, dmax: int = 12) -> SuiteResult:
    """Closed-form S_r against the exact brute-force double sum."""
    result = SuiteResult("white-noise")
    rng = np.random.default_rng(seed)
    for D in range(dmin, dmax + 1):
        specs = [QuasiDistanceSpec.of_kind(k, D) for k in (OutcomeKind.TYPE_I, OutcomeKind.TYPE_II)]
        for _ in range(maps):
            table = rng.integers(-3 * D, 3 * D + 1, size=D)
            specs.append(QuasiDistanceSpec(D, OutcomeMap.custom(table.tolist())))
        for spec in specs:
            closed = white_noise_separation(spec, exact=True)
            for direction in Direction:
                brute = uniform_separation(spec, direction)
                result.checks += 1
                if closed != brute:
                    result.failures.append({"D": D, "map": list(spec.map.table),
                                            "direction": direction.value,
                                            "closed": str(closed), "brute": str(brute)})
    return result


Tamper = Callable[[QuantumScenario, int, int, int, int], float]


def oracle_suite(nmax: int, dmax: int, nmin: int = 2, dmin: int = 2,
                 tamper: Tamper | None = None) -> SuiteResult:
    """Closed-form probabilities against the inner-product oracle, plus normalisation.

    ``tamper`` is a fault-injection hook: its return value is added to the
    closed-form probability before comparison.
    """
    result = SuiteResult("oracle")
    max_dev = 0.0
    max_norm = 0.0
    for N in range(nmin, nmax + 1):
        for D in range(dmin, dmax + 1):
            for R in range(2, D + 1):
                sc = QuantumScenario.canonical(N, D, R)
                for n, m in adjacent_pairs(N):
                    total = 0.0
                    for a in range(D):
                        for b in range(D):
                            closed = joint_probability_closed(sc, n, m, a, b)
                            if tamper is not None:
                                closed += tamper(sc, n, m, a, b)
                            oracle = joint_probability_oracle(sc, n, m, a, b)
                            dev = abs(closed - oracle)
                            max_dev = max(max_dev, dev)
                            total += closed
                            result.checks += 1
                            if dev > TOL.identity:
                                result.failures.append({"N": N, "D": D, "R": R, "pair": [f"A{n}", f"B{m}"],
                                                        "a": a, "b": b, "closed": closed,
                                                        "oracle": oracle, "deviation": dev})
                    norm_err = abs(total - 1.0)
                    max_norm = max(max_norm, norm_err)
                    result.checks += 1
                    if norm_err > TOL.identity:
                        result.failures.append({"N": N, "D": D, "R": R, "pair": [f"A{n}", f"B{m}"],
                                                "normalization_error": norm_err})
    result.details["max_deviation"] = max_dev
    result.details["max_normalization_error"] = max_norm
    return result
