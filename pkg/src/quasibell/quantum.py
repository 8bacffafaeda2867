"""Schmidt-rank-R states measured in shifted Fourier bases.

The state is ``|psi> = R^{-1/2} sum_{j<R} |jj>`` in a D x D space.  Alice's
setting ``A(2n-1)`` measures in ``|a> = R^{-1/2} sum_j w^{j(a + alpha)} |j>`` and
Bob's ``B(2n)`` in ``|b> = R^{-1/2} sum_j w^{-j(b + beta)} |j>`` with
``w = exp(2 pi i / R)``; outcomes ``a >= R`` are standard-basis states.

Two independent routes give the joint probabilities: the closed form
``p(a, b) = g_1 / g_R(a - b)`` with ``g_X(x) = X^3 sin^2[(pi/X)(x + alpha - beta)]``,
and :func:`joint_probability_oracle`, which takes explicit inner products.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np

from .config import TOL
from .errors import (InvalidScenarioError, NonAdjacentPairError, OutcomeRangeError,
                     VanishingDenominatorError)


def _as_fraction(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    exact = Fraction(x)
    if isinstance(x, float):
        # phases read back from JSON floats: recover small rationals like -1/3
        snapped = exact.limit_denominator(10**6)
        if abs(float(snapped) - x) <= 1e-15:
            return snapped
    return exact


def canonical_phases(N: int) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """``alpha_{2n-1} = -(n-1)/N`` and ``beta_{2n} = -(2n-1)/(2N)`` for n = 1..N."""
    if N < 2:
        raise InvalidScenarioError(f"need N >= 2 settings per site, got {N}")
    alphas = tuple(Fraction(-(n - 1), N) for n in range(1, N + 1))
    betas = tuple(Fraction(-(2 * n - 1), 2 * N) for n in range(1, N + 1))
    return alphas, betas


@dataclass(frozen=True)
class QuantumScenario:
    N: int
    D: int
    R: int
    alphas: tuple[Fraction, ...]
    betas: tuple[Fraction, ...]

    def __post_init__(self):
        if self.N < 2:
            raise InvalidScenarioError(f"need N >= 2, got {self.N}")
        if self.D < 2:
            raise InvalidScenarioError(f"need D >= 2, got {self.D}")
        if not 2 <= self.R <= self.D:
            raise InvalidScenarioError(f"Schmidt rank must satisfy 2 <= R <= D, got R={self.R}, D={self.D}")
        alphas = tuple(_as_fraction(x) for x in self.alphas)
        betas = tuple(_as_fraction(x) for x in self.betas)
        if len(alphas) != self.N or len(betas) != self.N:
            raise InvalidScenarioError("need exactly N alphas and N betas")
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "betas", betas)

    @classmethod
    def canonical(cls, N: int, D: int, R: int | None = None) -> "QuantumScenario":
        alphas, betas = canonical_phases(N)
        return cls(N, D, D if R is None else R, alphas, betas)

    def alpha(self, n: int) -> Fraction:
        """Phase of Alice's observable ``A_n`` (n odd)."""
        if n % 2 != 1 or not 1 <= n <= 2 * self.N - 1:
            raise InvalidScenarioError(f"A{n} is not one of Alice's observables for N={self.N}")
        return self.alphas[(n - 1) // 2]

    def beta(self, m: int) -> Fraction:
        """Phase of Bob's observable ``B_m`` (m even)."""
        if m % 2 != 0 or not 2 <= m <= 2 * self.N:
            raise InvalidScenarioError(f"B{m} is not one of Bob's observables for N={self.N}")
        return self.betas[m // 2 - 1]

    def is_adjacent(self, n: int, m: int) -> bool:
        """Pairs appearing in the chain: (2k-1, 2k), (2k+1, 2k) and (1, 2N)."""
        if m % 2 or n % 2 == 0:
            return False
        return (n == m - 1 and m <= 2 * self.N) or (n == m + 1 and n <= 2 * self.N - 1) \
            or (n == 1 and m == 2 * self.N)

    def to_dict(self) -> dict[str, Any]:
        return {"N": self.N, "D": self.D, "R": self.R,
                "alphas": [float(x) for x in self.alphas],
                "betas": [float(x) for x in self.betas]}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "QuantumScenario":
        N, D = int(data["N"]), int(data["D"])
        R = int(data.get("R", D))
        if "alphas" not in data and "betas" not in data:
            return cls.canonical(N, D, R)
        return cls(N, D, R, tuple(data["alphas"]), tuple(data["betas"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "QuantumScenario":
        return cls.from_dict(json.loads(text))


def _check_outcomes(sc: QuantumScenario, a: int, b: int) -> None:
    for v in (a, b):
        if not 0 <= v < sc.D:
            raise OutcomeRangeError(f"outcome {v} outside [0, {sc.D})")


def _g(X: int, x: Fraction) -> float:
    return X ** 3 * math.sin(math.pi * float(x) / X) ** 2


def joint_probability_closed(sc: QuantumScenario, n: int, m: int, a: int, b: int) -> float:
    """``p(a, b | A_n, B_m) = g_1(0) / g_R(a - b)`` for ``a, b < R``, else 0."""
    if not sc.is_adjacent(n, m):
        raise NonAdjacentPairError(f"(A{n}, B{m}) is not an adjacent pair of the chain for N={sc.N}")
    _check_outcomes(sc, a, b)
    if a >= sc.R or b >= sc.R:
        return 0.0
    shift = sc.alpha(n) - sc.beta(m)
    denom_arg = Fraction(a - b) + shift
    # reduce the sin argument modulo R exactly; sin^2 has period R in x
    denom_arg -= sc.R * math.floor(denom_arg / sc.R)
    if abs(math.sin(math.pi * float(denom_arg) / sc.R)) < TOL.denominator:
        raise VanishingDenominatorError(
            f"g_R vanishes for (A{n}, B{m}), a-b={a - b}; phases {sc.alpha(n)}, {sc.beta(m)}")
    return _g(1, shift - math.floor(shift)) / _g(sc.R, denom_arg)


def _basis_vector(sc: QuantumScenario, outcome: int, phase: Fraction, sign: int) -> list[complex]:
    """Measurement vector for one outcome as a list of D complex amplitudes."""
    vec = [0j] * sc.D
    if outcome >= sc.R:
        vec[outcome] = 1 + 0j
        return vec
    norm = 1.0 / math.sqrt(sc.R)
    for j in range(sc.R):
        # exponent j*(outcome + phase)/R reduced mod 1 before going to floating point
        turns = sign * Fraction(j) * (outcome + phase) / sc.R
        turns -= math.floor(turns)
        vec[j] = norm * cmath.exp(2j * math.pi * float(turns))
    return vec


def joint_probability_oracle(sc: QuantumScenario, n: int, m: int, a: int, b: int) -> float:
    """``|<psi| (|a>_n (x) |b>_m)|^2`` by explicit complex inner products."""
    _check_outcomes(sc, a, b)
    u = _basis_vector(sc, a, sc.alpha(n), +1)
    v = _basis_vector(sc, b, sc.beta(m), -1)
    # <psi| has real coefficients R^{-1/2} on |jj>, j < R
    amp = sum(u[j] * v[j] for j in range(sc.R)) / math.sqrt(sc.R)
    return abs(amp) ** 2


def probability_table(sc: QuantumScenario, n: int, m: int, method: str = "closed") -> np.ndarray:
    """D x D table of ``p(a, b | A_n, B_m)``; ``method`` is ``closed`` or ``oracle``."""
    if method == "closed":
        fn = joint_probability_closed
    elif method == "oracle":
        fn = joint_probability_oracle
    else:
        raise ValueError(f"unknown method {method!r}")
    return np.array([[fn(sc, n, m, a, b) for b in range(sc.D)] for a in range(sc.D)])


def adjacent_pairs(N: int) -> tuple[tuple[int, int], ...]:
    """Observable index pairs (n, m) used by the chained expression, in chain order."""
    pairs = []
    for k in range(1, N):
        pairs += [(2 * k - 1, 2 * k), (2 * k + 1, 2 * k)]
    pairs += [(2 * N - 1, 2 * N), (1, 2 * N)]
    return tuple(pairs)


@dataclass(frozen=True)
class CorrelationMarginal:
    """Distribution of ``c = [a - b]_R`` for the canonical scenario."""

    R: int
    N: int
    values: tuple[float, ...]

    def __call__(self, c: int) -> float:
        return self.values[c % self.R]


@lru_cache(maxsize=None)
def correlation_marginal(R: int, N: int) -> CorrelationMarginal:
    """``p_R(c) = sin^2(pi/2N) / (R^2 sin^2[(pi/R)(c + 1/2N)])``."""
    if R < 2 or N < 2:
        raise InvalidScenarioError(f"need R >= 2 and N >= 2, got R={R}, N={N}")
    num = math.sin(math.pi / (2 * N)) ** 2
    values = tuple(num / (R * R * math.sin(math.pi / R * (c + 1 / (2 * N))) ** 2) for c in range(R))
    return CorrelationMarginal(R, N, values)


def correlation_mean(R: int, N: int) -> float:
    """``C_bar_R = sum_c c p_R(c)``."""
    return math.fsum(c * p for c, p in enumerate(correlation_marginal(R, N).values))

