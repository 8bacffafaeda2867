"""Bell expressions built by chaining triangle inequalities, and their values.

A Bell expression is a signed sum of quasi-separations ``S(X, Y)`` between one
Alice observable and one Bob observable.  Term order matters: ``S(A, B)`` and
``S(B, A)`` differ.  Every expression built here has local bound ``I >= 0``.

Quantum values are available along two independent routes.  The closed forms
(:func:`bell_quantum_type1`, :func:`bell_quantum_type2`) use the correlation
marginal ``p_R(c)``; :func:`evaluate` sums quasi-separations over explicit
probability tables.  The two must agree to ``TOL.cross_path``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import numpy as np

from .distributions import Direction, JointDistribution, quasi_separation, ssr as _ssr
from .distributions import white_noise_separation
from .errors import InvalidScenarioError, MissingPairError, NoViolationError, QuasiBellError
from .lhv import A, B, FullJointModel, ObservableLabel, Site, pair_marginal
from .quantum import QuantumScenario, correlation_marginal, correlation_mean, probability_table
from .residue import OutcomeKind, QuasiDistanceSpec

CATALAN = 0.915965594177219015054603514932384110774


@dataclass(frozen=True)
class BellTerm:
    sign: int
    first: ObservableLabel
    second: ObservableLabel

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"term sign must be +1 or -1, got {self.sign}")
        if self.first.site is self.second.site:
            raise ValueError(f"S({self.first}, {self.second}) pairs two observables of one site")

    @property
    def alice(self) -> ObservableLabel:
        return self.first if self.first.site is Site.ALICE else self.second

    @property
    def bob(self) -> ObservableLabel:
        return self.second if self.first.site is Site.ALICE else self.first

    @property
    def direction(self) -> Direction:
        return Direction.ALICE_TO_BOB if self.first.site is Site.ALICE else Direction.BOB_TO_ALICE

    def __str__(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}S({self.first},{self.second})"


@dataclass(frozen=True)
class BellExpression:
    terms: tuple[BellTerm, ...]
    name: str = "custom"

    @property
    def n_plus(self) -> int:
        return sum(1 for t in self.terms if t.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for t in self.terms if t.sign < 0)

    @property
    def settings(self) -> int:
        """Settings per site needed to host every label in the expression."""
        return max(max(t.first.setting, t.second.setting) for t in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return " ".join(str(t) for t in self.terms)


def build_chained(N: int) -> BellExpression:
    """``sum_{n<N} [S(A_{2n-1},B_{2n}) + S(B_{2n},A_{2n+1})] + S(A_{2N-1},B_{2N}) - S(A_1,B_{2N})``."""
    if N < 2:
        raise ValueError(f"chained expression needs N >= 2, got {N}")
    terms = []
    for n in range(1, N):
        terms.append(BellTerm(+1, A(2 * n - 1), B(2 * n)))
        terms.append(BellTerm(+1, B(2 * n), A(2 * n + 1)))
    terms.append(BellTerm(+1, A(2 * N - 1), B(2 * N)))
    terms.append(BellTerm(-1, A(1), B(2 * N)))
    return BellExpression(tuple(terms), name="quadrangle" if N == 2 else f"chained{N}")


def build_quadrangle() -> BellExpression:
    """``S(A1,B2) + S(B2,A3) + S(A3,B4) - S(A1,B4)``."""
    return build_chained(2)


def build_sum_of_closed_forms(M: int) -> BellExpression:
    """M quadrangle blocks on ``(A_{4m-3}, B_{4m-2}, A_{4m-1}, B_{4m})``."""
    if M < 1:
        raise ValueError(f"need at least one block, got M={M}")
    terms = []
    for m in range(1, M + 1):
        a1, b2, a3, b4 = A(4 * m - 3), B(4 * m - 2), A(4 * m - 1), B(4 * m)
        terms += [BellTerm(+1, a1, b2), BellTerm(+1, b2, a3),
                  BellTerm(+1, a3, b4), BellTerm(-1, a1, b4)]
    return BellExpression(tuple(terms), name="quadrangle" if M == 1 else f"sum{M}")


def build_expression(name: str, N: int = 2, M: int = 1) -> BellExpression:
    if name == "quadrangle":
        return build_quadrangle()
    if name == "chained":
        return build_chained(N)
    if name == "sum":
        return build_sum_of_closed_forms(M)
    raise ValueError(f"unknown expression {name!r}")


# -- pair-distribution providers ---------------------------------------------
#
# A provider maps (Alice label, Bob label) to the JointDistribution of that
# pair, indexed [alice outcome, bob outcome].

Provider = Callable[[ObservableLabel, ObservableLabel], JointDistribution]


class QuantumProvider:
    """Quantum tables from the closed form, the oracle, or ``auto``.

    ``auto`` uses the closed form on adjacent chain pairs and the oracle
    elsewhere (e.g. for sums of closed forms).
    """

    def __init__(self, scenario: QuantumScenario, method: str = "closed"):
        if method not in ("closed", "oracle", "auto"):
            raise ValueError(f"unknown method {method!r}")
        self.scenario = scenario
        self.method = method
        self._cache: dict[tuple[int, int], JointDistribution] = {}

    def __call__(self, alice: ObservableLabel, bob: ObservableLabel) -> JointDistribution:
        key = (alice.index, bob.index)
        if key not in self._cache:
            sc = self.scenario
            if alice.setting > sc.N or bob.setting > sc.N:
                raise MissingPairError(f"({alice}, {bob}) is outside a scenario with N={sc.N}")
            method = self.method
            if method == "auto":
                method = "closed" if sc.is_adjacent(*key) else "oracle"
            self._cache[key] = JointDistribution(sc.D, probability_table(sc, *key, method=method))
        return self._cache[key]


class WhiteNoiseProvider:
    def __init__(self, D: int):
        self._uniform = JointDistribution.uniform(D)

    def __call__(self, alice: ObservableLabel, bob: ObservableLabel) -> JointDistribution:
        return self._uniform


class LHVProvider:
    def __init__(self, model: FullJointModel):
        self.model = model

    def __call__(self, alice: ObservableLabel, bob: ObservableLabel) -> JointDistribution:
        try:
            return pair_marginal(self.model, alice, bob)
        except QuasiBellError as exc:
            raise MissingPairError(str(exc)) from exc


class NoisyProvider:
    """Tables of ``v rho + (1 - v) rho_r``; each is ``v p + (1 - v)/D^2``."""

    def __init__(self, inner: Provider, D: int, v: float):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"visibility must lie in [0, 1], got {v}")
        self.inner = inner
        self.v = v
        self._noise = JointDistribution.uniform(D)

    def __call__(self, alice: ObservableLabel, bob: ObservableLabel) -> JointDistribution:
        return self.inner(alice, bob).mix(self._noise, self.v)


class TableProvider:
    """Explicit tables keyed by ``(alice, bob)``; missing pairs raise."""

    def __init__(self, tables: dict[tuple[ObservableLabel, ObservableLabel], JointDistribution]):
        self.tables = dict(tables)

    def __call__(self, alice: ObservableLabel, bob: ObservableLabel) -> JointDistribution:
        try:
            return self.tables[(alice, bob)]
        except KeyError:
            raise MissingPairError(f"no distribution for ({alice}, {bob})") from None


def term_values(expr: BellExpression, provider: Provider, spec: QuasiDistanceSpec) -> list[float]:
    """Unsigned quasi-separation of every term, in term order."""
    return [quasi_separation(provider(t.alice, t.bob), spec, t.direction) for t in expr.terms]


def evaluate(expr: BellExpression, provider: Provider, spec: QuasiDistanceSpec) -> float:
    """``sum sign * S(first, second)`` over the terms."""
    values = term_values(expr, provider, spec)
    return math.fsum(t.sign * v for t, v in zip(expr.terms, values))


# -- closed forms --------------------------------------------------------------

def xi_type1(N: int, D: int) -> float:
    """``xi = 1 - 2N C_bar_D / (D - 1)``."""
    return 1.0 - 2 * N * correlation_mean(D, N) / (D - 1)


def xi_type2(N: int, R: int) -> float:
    """``xi'_R = [(1 - p_R(-1)) - (2N - 1)(1 - p_R(0))] / R``; independent of D."""
    p = correlation_marginal(R, N)
    return ((1.0 - p(-1)) - (2 * N - 1) * (1.0 - p(0))) / R


def bell_quantum_type1(N: int, D: int) -> float:
    """Chained type-I value for the maximally entangled state (R = D)."""
    _check_nd(N, D)
    return -(D - 1) * xi_type1(N, D)


def bell_quantum_type2(N: int, D: int, R: int) -> float:
    """Chained type-II value ``-D xi'_R`` for Schmidt rank R."""
    _check_nd(N, D)
    if not 2 <= R <= D:
        raise InvalidScenarioError(f"need 2 <= R <= D, got R={R}, D={D}")
    return -D * xi_type2(N, R)


def bell_white_noise(kind: OutcomeKind | str | int, N: int, D: int) -> float:
    """``(N - 1)(D - 1)`` for type I, ``2(N - 1)(D - 1)/D`` for type II."""
    _check_nd(N, D)
    kind = OutcomeKind.parse(kind)
    if kind is OutcomeKind.TYPE_I:
        return float((N - 1) * (D - 1))
    if kind is OutcomeKind.TYPE_II:
        return 2 * (N - 1) * (D - 1) / D
    raise ValueError("closed white-noise values exist only for types I and II")


def white_noise_value(expr: BellExpression, spec: QuasiDistanceSpec) -> float:
    """``(N_+ - N_-) S_r`` for any expression."""
    return (expr.n_plus - expr.n_minus) * white_noise_separation(spec)


def critical_visibility(i_q: float, i_r: float) -> float:
    """``v_c = I_r / (I_r - I_q)``; raises :class:`NoViolationError` unless ``I_q < 0 < I_r``."""
    if not (i_q < 0.0 and i_r > 0.0):
        raise NoViolationError(i_q, i_r)
    return i_r / (i_r - i_q)


def critical_visibility_type1_formula(N: int, D: int) -> float:
    """``1 / (1 + xi / (N - 1))`` with R = D."""
    xi = xi_type1(N, D)
    if xi <= 0:
        raise NoViolationError(-(D - 1) * xi, bell_white_noise(OutcomeKind.TYPE_I, N, D))
    return 1.0 / (1.0 + xi / (N - 1))


def critical_visibility_type2_formula(N: int, D: int, R: int) -> float:
    """``1 / (1 + D^2 xi'_R / (2 (D - 1)(N - 1)))``."""
    xi = xi_type2(N, R)
    if xi <= 0:
        raise NoViolationError(-D * xi, bell_white_noise(OutcomeKind.TYPE_II, N, D))
    return 1.0 / (1.0 + D * D / (2 * (D - 1)) / (N - 1) * xi)


def noisy_bell(expr: BellExpression, scenario: QuantumScenario, spec: QuasiDistanceSpec,
               v: float, method: str = "auto") -> float:
    """``I(v rho + (1 - v) rho_r)`` evaluated on the mixed tables."""
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"visibility must lie in [0, 1], got {v}")
    provider = NoisyProvider(QuantumProvider(scenario, method), scenario.D, v)
    return evaluate(expr, provider, spec)


def asymptote_type1() -> float:
    """Large-D limit of the type-I critical visibility, ``pi^2 / (16 G)``."""
    return math.pi ** 2 / (16 * CATALAN)


def large_n_xi_approx(kind: OutcomeKind | str | int, N: int, dim: int) -> float:
    """First-order-in-1/N approximation of ``xi`` (type I, dim = D) or ``xi'_R`` (type II, dim = R)."""
    if N < 2:
        raise InvalidScenarioError(f"need N >= 2, got {N}")
    kind = OutcomeKind.parse(kind)
    if kind is OutcomeKind.TYPE_I:
        D = dim
        s = math.fsum(x / (D * D * math.sin(math.pi * x / D) ** 2) for x in range(1, D))
        return 1.0 - (math.pi ** 2 / (2 * (D - 1))) * s / N
    if kind is OutcomeKind.TYPE_II:
        R = dim
        odd = math.fsum(math.cos(math.pi * x / R) / (R ** 4 * math.sin(math.pi * x / R) ** 3)
                        for x in range(1, R))
        first = math.fsum(1.0 / (R ** 3 * math.sin(math.pi * x / R) ** 2) for x in range(1, R))
        return 1.0 / R + math.pi ** 3 / 2 * odd - (math.pi ** 2 / 2) * first / N
    raise ValueError("approximation exists only for types I and II")


def exact_xi(kind: OutcomeKind | str | int, N: int, dim: int) -> float:
    kind = OutcomeKind.parse(kind)
    return xi_type1(N, dim) if kind is OutcomeKind.TYPE_I else xi_type2(N, dim)


# -- conventional CGLMP form -----------------------------------------------------

def cglmp_standard_value(D: int) -> float:
    """Conventional CGLMP value ``2 - 2 I_2q / (D - 1)`` for the maximally entangled state.

    Rescaling each type-I quasi-separation by ``2/(D-1)`` turns ``I_2 >= 0``
    into the usual ``I_CGLMP <= 2``.
    """
    _check_nd(2, D)
    return 2.0 - 2.0 * bell_quantum_type1(2, D) / (D - 1)


def _p_diff(table: np.ndarray, D: int, shift: int, transpose: bool) -> float:
    """``P(x = y + shift mod D)`` where x is the first observable of the term."""
    t = table.T if transpose else table
    return math.fsum(t[(y + shift) % D, y] for y in range(D))


def rescaled_separation_by_differences(table: np.ndarray, D: int, transpose: bool = False) -> float:
    """``1 + sum_k (1 - 2k/(D-1)) [P(x = y - k - 1) - P(x = y + k)]``.

    Equals ``2/(D-1) S(X, Y)``; ``transpose`` selects the Bob-first direction on an
    (Alice, Bob) indexed table.
    """
    total = 1.0
    for k in range(D // 2):
        c = 1.0 - 2.0 * k / (D - 1)
        total += c * (_p_diff(table, D, -k - 1, transpose) - _p_diff(table, D, k, transpose))
    return total


def cglmp_by_substitution(D: int) -> float:
    """CGLMP value from quantum probabilities plugged into the difference form."""
    _check_nd(2, D)
    expr = build_quadrangle()
    provider = QuantumProvider(QuantumScenario.canonical(2, D), "closed")
    rescaled = 0.0
    for t in expr.terms:
        table = provider(t.alice, t.bob).p
        rescaled += t.sign * rescaled_separation_by_differences(
            table, D, transpose=t.direction is Direction.BOB_TO_ALICE)
    # rescaled = 2 + sum(sign * differences) and I_CGLMP = -sum(sign * differences)
    return 2.0 - rescaled


def _check_nd(N: int, D: int) -> None:
    if N < 2 or D < 2:
        raise InvalidScenarioError(f"need N >= 2 and D >= 2, got N={N}, D={D}")


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class VisibilityReport:
    kind: str
    N: int
    D: int
    R: int
    I_q: float
    I_r: float
    v_c: float | None
    ssr: float
    s_max: float
    method: str

    @property
    def violation(self) -> bool:
        return self.v_c is not None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["violation"] = self.violation
        return d


def quantum_value(kind: OutcomeKind | str | int, N: int, D: int, R: int | None = None,
                  method: str = "closed-form") -> tuple[float, str]:
    """Quantum value of the chained expression and the route used to get it.

    ``closed-form`` falls back to the generic engine for type I at R < D, where
    no closed form exists; ``engine`` always evaluates probability tables.
    """
    kind = OutcomeKind.parse(kind)
    R = D if R is None else R
    if method == "closed-form":
        if kind is OutcomeKind.TYPE_II:
            return bell_quantum_type2(N, D, R), "closed-form"
        if R == D:
            return bell_quantum_type1(N, D), "closed-form"
    elif method != "engine":
        raise ValueError(f"unknown method {method!r}")
    spec = QuasiDistanceSpec.of_kind(kind, D)
    value = evaluate(build_chained(N), QuantumProvider(QuantumScenario.canonical(N, D, R)), spec)
    return value, "engine"


def visibility_report(kind: OutcomeKind | str | int, N: int, D: int, R: int | None = None,
                      method: str = "closed-form") -> VisibilityReport:
    kind = OutcomeKind.parse(kind)
    R = D if R is None else R
    i_q, used = quantum_value(kind, N, D, R, method)
    i_r = bell_white_noise(kind, N, D)
    try:
        v_c = critical_visibility(i_q, i_r)
    except NoViolationError:
        v_c = None
    spec = QuasiDistanceSpec.of_kind(kind, D)
    return VisibilityReport(kind.value, N, D, R, i_q, i_r, v_c, _ssr(spec), float(spec.s_max), used)


def sweep(kind: OutcomeKind | str | int, N: int, pairs: Iterable[tuple[int, int]],
          method: str = "closed-form") -> list[VisibilityReport]:
    """Reports for each ``(R, D)`` in the given order."""
    return [visibility_report(kind, N, D, R, method) for R, D in pairs]

