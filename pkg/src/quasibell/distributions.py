"""Joint outcome tables for one observable pair and their quasi-separations."""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from .config import TOL
from .errors import DegenerateSpecError, DimensionMismatchError, InvalidDistributionError
from .residue import QuasiDistanceSpec, check_modulus


class Direction(enum.Enum):
    ALICE_TO_BOB = "AB"
    BOB_TO_ALICE = "BA"


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """``p[a, b] = p(a, b | A, B)``; rows are Alice's outcome, columns Bob's."""

    D: int
    p: np.ndarray

    def __post_init__(self):
        D = check_modulus(self.D)
        p = np.array(self.p, dtype=float)
        if p.shape != (D, D):
            raise InvalidDistributionError(f"expected a {D}x{D} table, got shape {p.shape}")
        if not np.all(np.isfinite(p)):
            raise InvalidDistributionError("table contains non-finite entries")
        if p.min() < -TOL.negative_entry:
            raise InvalidDistributionError(f"negative entry {p.min()!r}")
        p = np.clip(p, 0.0, None)
        total = p.sum()
        if abs(total - 1.0) > TOL.distribution_sum:
            raise InvalidDistributionError(f"entries sum to {total!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "p", p)

    @classmethod
    def uniform(cls, D: int) -> "JointDistribution":
        return cls(D, np.full((D, D), 1.0 / (D * D)))

    @classmethod
    def point_mass(cls, D: int, a: int, b: int) -> "JointDistribution":
        p = np.zeros((D, D))
        p[a, b] = 1.0
        return cls(D, p)

    def mix(self, other: "JointDistribution", weight: float) -> "JointDistribution":
        """``weight * self + (1 - weight) * other``."""
        if other.D != self.D:
            raise DimensionMismatchError(f"cannot mix D={self.D} with D={other.D}")
        return JointDistribution(self.D, weight * self.p + (1.0 - weight) * other.p)

    def to_dict(self) -> dict[str, Any]:
        return {"D": self.D, "p": self.p.tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "JointDistribution":
        try:
            return cls(int(data["D"]), np.asarray(data["p"], dtype=float))
        except (KeyError, TypeError) as exc:
            raise InvalidDistributionError(f"malformed distribution object: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "JointDistribution":
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, JointDistribution):
            return NotImplemented
        return self.D == other.D and np.array_equal(self.p, other.p)

    __hash__ = None


def quasi_separation(dist: JointDistribution, spec: QuasiDistanceSpec,
                     direction: Direction = Direction.ALICE_TO_BOB) -> float:
    """Average quasi-distance over the table.

    ``ALICE_TO_BOB`` gives ``S(A, B) = sum d(a, b) p(a, b)`` and ``BOB_TO_ALICE``
    gives ``S(B, A) = sum d(b, a) p(a, b)``.
    """
    if dist.D != spec.D:
        raise DimensionMismatchError(f"distribution has D={dist.D}, spec has D={spec.D}")
    d = spec.matrix if direction is Direction.ALICE_TO_BOB else spec.matrix.T
    return float(np.sum(d * dist.p))


def preimage_counts(spec: QuasiDistanceSpec) -> dict[int, int]:
    """``n(f)``: how many outcomes map to each value of ``f`` (reduced mod D)."""
    return dict(Counter(v % spec.D for v in spec.map.table))


def white_noise_separation(spec: QuasiDistanceSpec, exact: bool = False) -> float | Fraction:
    """``S_r = [(sum n)^2 - sum n^2] / 2D`` for the uniform distribution."""
    # f values congruent mod D give the same distance, so count residue classes.
    n = preimage_counts(spec).values()
    s_r = Fraction(sum(n) ** 2 - sum(k * k for k in n), 2 * spec.D)
    return s_r if exact else float(s_r)


def uniform_separation(spec: QuasiDistanceSpec,
                       direction: Direction = Direction.ALICE_TO_BOB) -> Fraction:
    """Brute-force ``(1/D^2) sum_{x,y} d(x, y)`` in exact arithmetic."""
    D = spec.D
    total = 0
    for x in range(D):
        for y in range(D):
            total += spec.distance(x, y) if direction is Direction.ALICE_TO_BOB else spec.distance(y, x)
    return Fraction(total, D * D)


def ssr(spec: QuasiDistanceSpec, exact: bool = False) -> float | Fraction:
    """Scaled white-noise separation ``S_r / S_max``."""
    s_max = spec.s_max
    if s_max == 0:
        raise DegenerateSpecError("S_max is zero for a constant outcome map")
    value = white_noise_separation(spec, exact=True) / s_max
    return value if exact else float(value)
