"""Nonnegative residues and modular quasi-distances.

A quasi-distance on the outcomes ``{0, ..., D-1}`` is built from an integer
valued outcome map ``f`` as ``d(x, y) = [f(x) - f(y)]_D``.  Everything here is
exact integer arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import InvalidModulusError, InvalidOutcomeMapError, OutcomeRangeError


class OutcomeKind(enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"
    CUSTOM = "custom"

    @classmethod
    def parse(cls, value: "str | int | OutcomeKind") -> "OutcomeKind":
        if isinstance(value, cls):
            return value
        key = str(value).strip().upper()
        aliases = {"1": cls.TYPE_I, "I": cls.TYPE_I, "TYPEI": cls.TYPE_I, "TYPE_I": cls.TYPE_I,
                   "2": cls.TYPE_II, "II": cls.TYPE_II, "TYPEII": cls.TYPE_II, "TYPE_II": cls.TYPE_II,
                   "CUSTOM": cls.CUSTOM}
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown outcome-map kind: {value!r}") from None


def check_modulus(D: int) -> int:
    if isinstance(D, bool) or not isinstance(D, (int, np.integer)):
        raise InvalidModulusError(f"modulus must be an integer, got {D!r}")
    if D < 2:
        raise InvalidModulusError(f"modulus must be >= 2, got {D}")
    return int(D)


def residue(x: int, D: int) -> int:
    """Nonnegative residue ``[x]_D`` in ``[0, D)``."""
    D = check_modulus(D)
    # Python's % already returns the nonnegative representative for D > 0.
    return int(x) % D


def check_subadditivity(D: int, x: int, y: int) -> bool:
    """``[x + y]_D <= [x]_D + [y]_D``."""
    return residue(x + y, D) <= residue(x, D) + residue(y, D)


def check_reverse_triangle(D: int, x: int, y: int) -> bool:
    """``[x]_D - [y]_D <= [x - y]_D``."""
    return residue(x, D) - residue(y, D) <= residue(x - y, D)


def negation_identity(D: int, x: int) -> bool:
    """``[-x]_D == D - 1 - [x - 1]_D``."""
    return residue(-x, D) == D - 1 - residue(x - 1, D)


@dataclass(frozen=True)
class OutcomeMap:
    kind: OutcomeKind
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) < 2:
            raise InvalidOutcomeMapError("outcome map needs at least two entries")
        for v in self.table:
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise InvalidOutcomeMapError(f"outcome map entries must be integers, got {v!r}")
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))

    @classmethod
    def type_i(cls, D: int) -> "OutcomeMap":
        """Linear map ``f(x) = x``."""
        return cls(OutcomeKind.TYPE_I, tuple(range(check_modulus(D))))

    @classmethod
    def type_ii(cls, D: int) -> "OutcomeMap":
        """Kronecker map ``f(x) = delta_{x,0}``."""
        D = check_modulus(D)
        return cls(OutcomeKind.TYPE_II, tuple(1 if x == 0 else 0 for x in range(D)))

    @classmethod
    def custom(cls, table: Sequence[int]) -> "OutcomeMap":
        return cls(OutcomeKind.CUSTOM, tuple(table))

    def __len__(self) -> int:
        return len(self.table)

    def __call__(self, x: int) -> int:
        return self.table[x]


@dataclass(frozen=True)
class QuasiDistanceSpec:
    D: int
    map: OutcomeMap

    def __post_init__(self):
        check_modulus(self.D)
        if len(self.map) != self.D:
            raise InvalidOutcomeMapError(
                f"outcome map has {len(self.map)} entries but modulus is {self.D}")

    @classmethod
    def of_kind(cls, kind: "OutcomeKind | str | int", D: int) -> "QuasiDistanceSpec":
        kind = OutcomeKind.parse(kind)
        if kind is OutcomeKind.TYPE_I:
            return cls(D, OutcomeMap.type_i(D))
        if kind is OutcomeKind.TYPE_II:
            return cls(D, OutcomeMap.type_ii(D))
        raise ValueError("custom specs need an explicit table; use QuasiDistanceSpec(D, OutcomeMap.custom(...))")

    @property
    def kind(self) -> OutcomeKind:
        return self.map.kind

    def distance(self, x: int, y: int) -> int:
        return quasi_distance(self, x, y)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Integer table ``M[x, y] = d(x, y)`` (read-only)."""
        f = np.array(self.map.table, dtype=np.int64)
        m = np.mod(f[:, None] - f[None, :], self.D)
        m.setflags(write=False)
        return m

    @property
    def s_max(self) -> int:
        """Largest quasi-distance attained on the outcome set."""
        return int(self.matrix.max())


def type_i_spec(D: int) -> QuasiDistanceSpec:
    return QuasiDistanceSpec.of_kind(OutcomeKind.TYPE_I, D)


def type_ii_spec(D: int) -> QuasiDistanceSpec:
    return QuasiDistanceSpec.of_kind(OutcomeKind.TYPE_II, D)


def quasi_distance(spec: QuasiDistanceSpec, x: int, y: int) -> int:
    """``d(x, y) = [f(x) - f(y)]_D``; not symmetric in general."""
    for v in (x, y):
        if not 0 <= v < spec.D:
            raise OutcomeRangeError(f"outcome {v} outside [0, {spec.D})")
    return residue(spec.map(x) - spec.map(y), spec.D)
