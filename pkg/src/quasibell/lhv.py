"""Local-realistic models: full joint distributions over all 2N observables.

Alice's observables carry odd indices ``A1, A3, ..., A(2N-1)`` and Bob's carry
even ones ``B2, B4, ..., B(2N)``.  A deterministic strategy fixes one outcome
per observable; a :class:`FullJointModel` is a weighting of all ``D**(2N)``
strategies stored as an array with one axis per observable, axes ordered
``(A1, A3, ..., B2, B4, ...)``.
"""

from __future__ import annotations

import enum
import itertools
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping

import numpy as np

from .config import ENUMERATION_BUDGET, TOL
from .distributions import Direction, JointDistribution, quasi_separation
from .errors import BudgetExceededError, InvalidDistributionError, UnknownLabelError
from .residue import QuasiDistanceSpec

if TYPE_CHECKING:
    from .bell import BellExpression


class Site(enum.Enum):
    ALICE = "A"
    BOB = "B"


@dataclass(frozen=True, order=False)
class ObservableLabel:
    site: Site
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise UnknownLabelError(f"observable index must be positive, got {self.index}")
        odd = self.index % 2 == 1
        if odd != (self.site is Site.ALICE):
            raise UnknownLabelError(
                f"{self.site.value}{self.index}: Alice uses odd indices, Bob even ones")

    @property
    def setting(self) -> int:
        """1-based setting number n, i.e. A(2n-1) or B(2n)."""
        return (self.index + 1) // 2

    @property
    def sort_key(self) -> tuple[int, int]:
        return (0 if self.site is Site.ALICE else 1, self.index)

    def __lt__(self, other: "ObservableLabel") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{self.site.value}{self.index}"

    @classmethod
    def parse(cls, text: str) -> "ObservableLabel":
        m = re.fullmatch(r"\s*([AaBb])\s*(\d+)\s*", text)
        if not m:
            raise UnknownLabelError(f"cannot parse observable label {text!r}")
        return cls(Site(m.group(1).upper()), int(m.group(2)))


def A(index: int) -> ObservableLabel:
    return ObservableLabel(Site.ALICE, index)


def B(index: int) -> ObservableLabel:
    return ObservableLabel(Site.BOB, index)


def labels_for(N: int) -> tuple[ObservableLabel, ...]:
    """All 2N labels in canonical order ``A1, A3, ..., B2, B4, ...``."""
    if N < 1:
        raise UnknownLabelError(f"need at least one setting per site, got N={N}")
    return tuple(A(2 * n - 1) for n in range(1, N + 1)) + tuple(B(2 * n) for n in range(1, N + 1))


def _axis(N: int, label: ObservableLabel) -> int:
    if label.setting > N:
        raise UnknownLabelError(f"{label} is outside a model with N={N} settings per site")
    return label.setting - 1 if label.site is Site.ALICE else N + label.setting - 1


@dataclass(frozen=True)
class DeterministicStrategy:
    labels: tuple[ObservableLabel, ...]
    outcomes: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.outcomes) or len(set(self.labels)) != len(self.labels):
            raise UnknownLabelError("every label must be assigned exactly one outcome")

    @classmethod
    def from_mapping(cls, N: int, assignment: Mapping[ObservableLabel, int]) -> "DeterministicStrategy":
        labels = labels_for(N)
        missing = set(labels) - set(assignment)
        extra = set(assignment) - set(labels)
        if missing or extra:
            raise UnknownLabelError(
                f"assignment must cover exactly {', '.join(map(str, labels))}")
        return cls(labels, tuple(int(assignment[lab]) for lab in labels))

    def __getitem__(self, label: ObservableLabel) -> int:
        try:
            return self.outcomes[self.labels.index(label)]
        except ValueError:
            raise UnknownLabelError(f"{label} not in strategy") from None

    def as_dict(self) -> dict[str, int]:
        return {str(lab): out for lab, out in zip(self.labels, self.outcomes)}


class FullJointModel:
    """Probability weights over every deterministic strategy."""

    def __init__(self, N: int, D: int, weights):
        w = np.array(weights, dtype=float)
        shape = (D,) * (2 * N)
        if w.size != D ** (2 * N):
            raise InvalidDistributionError(f"expected {D ** (2 * N)} weights, got {w.size}")
        w = w.reshape(shape)
        if w.min() < -TOL.negative_entry:
            raise InvalidDistributionError(f"negative weight {w.min()!r}")
        w = np.clip(w, 0.0, None)
        if abs(w.sum() - 1.0) > TOL.distribution_sum:
            raise InvalidDistributionError(f"weights sum to {w.sum()!r}, not 1")
        w.setflags(write=False)
        self.N = N
        self.D = D
        self.weights = w
        self.labels = labels_for(N)

    @classmethod
    def deterministic(cls, strategy: DeterministicStrategy, D: int) -> "FullJointModel":
        N = len(strategy.labels) // 2
        w = np.zeros((D,) * (2 * N))
        w[tuple(strategy[lab] for lab in labels_for(N))] = 1.0
        return cls(N, D, w)

    @classmethod
    def mixture(cls, N: int, D: int,
                components: Iterable[tuple[float, DeterministicStrategy]]) -> "FullJointModel":
        w = np.zeros((D,) * (2 * N))
        for weight, strategy in components:
            w[tuple(strategy[lab] for lab in labels_for(N))] += weight
        return cls(N, D, w)

    @classmethod
    def uniform(cls, N: int, D: int) -> "FullJointModel":
        return cls(N, D, np.full((D,) * (2 * N), float(D) ** (-2 * N)))

    @classmethod
    def random(cls, N: int, D: int, rng: np.random.Generator,
               sparsity: float | None = None) -> "FullJointModel":
        """Dirichlet-distributed weights; ``sparsity`` zeroes that fraction of strategies."""
        size = D ** (2 * N)
        w = rng.dirichlet(np.ones(size))
        if sparsity:
            w[rng.random(size) < sparsity] = 0.0
            if w.sum() == 0.0:
                w[rng.integers(size)] = 1.0
            w /= w.sum()
        return cls(N, D, w)


def pair_marginal(model: FullJointModel, X: ObservableLabel, Y: ObservableLabel) -> JointDistribution:
    """Table ``p[x, y]`` for observables X and Y, summed out of the full joint."""
    ax, ay = _axis(model.N, X), _axis(model.N, Y)
    if ax == ay:
        p = np.diag(model.weights.sum(axis=tuple(i for i in range(2 * model.N) if i != ax)))
    else:
        rest = tuple(i for i in range(2 * model.N) if i not in (ax, ay))
        p = model.weights.sum(axis=rest)
        if ax > ay:
            p = p.T
    return JointDistribution(model.D, p)


def separation(model: FullJointModel, spec: QuasiDistanceSpec,
               X: ObservableLabel, Y: ObservableLabel) -> float:
    """``S(X, Y)`` respecting the order of the two observables."""
    return quasi_separation(pair_marginal(model, X, Y), spec, Direction.ALICE_TO_BOB)


def triangle_slack(model: FullJointModel, spec: QuasiDistanceSpec,
                   X: ObservableLabel, Y: ObservableLabel, Z: ObservableLabel) -> float:
    """``S(X, Y) + S(Y, Z) - S(X, Z)``; nonnegative in every local model."""
    return separation(model, spec, X, Y) + separation(model, spec, Y, Z) - separation(model, spec, X, Z)


def verify_triangle(model: FullJointModel, spec: QuasiDistanceSpec,
                    X: ObservableLabel, Y: ObservableLabel, Z: ObservableLabel) -> bool:
    return triangle_slack(model, spec, X, Y, Z) >= -TOL.identity


def separation_matrix(model: FullJointModel, spec: QuasiDistanceSpec) -> np.ndarray:
    """``S[i, j] = S(label_i, label_j)`` over all ordered label pairs."""
    labels = model.labels
    return np.array([[separation(model, spec, X, Y) for Y in labels] for X in labels])


@dataclass(frozen=True)
class LHVMinimum:
    value: int
    argmin: DeterministicStrategy
    strategies: int


def _strategy_values(expr: "BellExpression", N: int, dmat: np.ndarray,
                     lead: int | None) -> np.ndarray:
    """Integer Bell value of every strategy, axes in canonical label order.

    With ``lead`` set, the first axis is fixed to that outcome and dropped.
    """
    D = dmat.shape[0]
    n_axes = 2 * N
    if lead is None:
        grids = list(np.indices((D,) * n_axes, sparse=True))
        shape = (D,) * n_axes
    else:
        grids = [np.int64(lead)] + list(np.indices((D,) * (n_axes - 1), sparse=True))
        shape = (D,) * (n_axes - 1)
    values = np.zeros(shape, dtype=np.int64)
    for term in expr.terms:
        i, j = _axis(N, term.first), _axis(N, term.second)
        values = values + term.sign * dmat[grids[i], grids[j]]
    return values


def minimize_bell(expr: "BellExpression", N: int, D: int, spec: QuasiDistanceSpec,
                  budget: int = ENUMERATION_BUDGET, workers: int = 1) -> LHVMinimum:
    """Exact minimum of the Bell expression over all deterministic strategies.

    Strategies are visited as a mixed-radix counter over the canonical label
    order, so the returned argmin is the lexicographically smallest minimiser.
    ``workers > 1`` splits the search by the outcome of the first label; the
    reduction keeps the earliest block on ties, matching the serial result.
    """
    if spec.D != D:
        raise ValueError(f"spec modulus {spec.D} differs from D={D}")
    for term in expr.terms:
        _axis(N, term.first)
        _axis(N, term.second)
    total = D ** (2 * N)
    if total > budget:
        raise BudgetExceededError(f"{total} strategies exceed the enumeration budget {budget}")
    dmat = np.asarray(spec.matrix, dtype=np.int64)
    labels = labels_for(N)

    def block(lead: int) -> tuple[int, tuple[int, ...]]:
        vals = _strategy_values(expr, N, dmat, lead)
        flat = int(np.argmin(vals))
        return int(vals.flat[flat]), (lead,) + np.unravel_index(flat, vals.shape)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(block, range(D)))
    else:
        results = [block(lead) for lead in range(D)]
    best_value, best_idx = results[0]
    for value, idx in results[1:]:
        if value < best_value:
            best_value, best_idx = value, idx
    argmin = DeterministicStrategy(labels, tuple(int(v) for v in best_idx))
    return LHVMinimum(best_value, argmin, total)


def iter_strategies(N: int, D: int) -> Iterable[DeterministicStrategy]:
    """Every strategy in mixed-radix order (slow; meant for small N and D)."""
    labels = labels_for(N)
    for outcomes in itertools.product(range(D), repeat=2 * N):
        yield DeterministicStrategy(labels, outcomes)
