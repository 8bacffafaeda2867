import itertools

import numpy as np
import pytest

from quasibell.bell import build_chained, build_quadrangle, build_sum_of_closed_forms
from quasibell.errors import BudgetExceededError, UnknownLabelError
from quasibell.lhv import (A, B, DeterministicStrategy, FullJointModel, ObservableLabel,
                           iter_strategies, labels_for, minimize_bell, pair_marginal,
                           separation_matrix, triangle_slack, verify_triangle)
from quasibell.residue import OutcomeKind, QuasiDistanceSpec, type_i_spec, type_ii_spec


def brute_force_min(expr, N, D, spec):
    """Pure-Python enumeration in the same mixed-radix order."""
    best = None
    for strategy in iter_strategies(N, D):
        value = sum(t.sign * spec.distance(strategy[t.first], strategy[t.second]) for t in expr.terms)
        if best is None or value < best[0]:
            best = (value, strategy)
    return best


def test_labels():
    assert [str(x) for x in labels_for(3)] == ["A1", "A3", "A5", "B2", "B4", "B6"]
    assert ObservableLabel.parse("b4") == B(4)
    with pytest.raises(UnknownLabelError):
        A(2)
    with pytest.raises(UnknownLabelError):
        B(3)


def test_pair_marginal_single_strategy():
    strategy = DeterministicStrategy.from_mapping(2, {A(1): 0, A(3): 1, B(2): 2, B(4): 0})
    model = FullJointModel.deterministic(strategy, 3)
    p = pair_marginal(model, A(1), B(2)).p
    expected = np.zeros((3, 3))
    expected[0, 2] = 1.0
    assert np.array_equal(p, expected)
    # reversed order transposes the table
    assert np.array_equal(pair_marginal(model, B(2), A(1)).p, expected.T)


def test_pair_marginal_uniform():
    model = FullJointModel.uniform(2, 3)
    for X, Y in itertools.permutations(labels_for(2), 2):
        assert np.allclose(pair_marginal(model, X, Y).p, 1 / 9, atol=1e-15)


def test_pair_marginal_mixture():
    s1 = DeterministicStrategy.from_mapping(2, {A(1): 0, A(3): 0, B(2): 1, B(4): 0})
    s2 = DeterministicStrategy.from_mapping(2, {A(1): 2, A(3): 1, B(2): 1, B(4): 2})
    model = FullJointModel.mixture(2, 3, [(0.5, s1), (0.5, s2)])
    p = pair_marginal(model, A(1), B(2)).p
    expected = np.zeros((3, 3))
    expected[0, 1] = expected[2, 1] = 0.5
    assert np.array_equal(p, expected)


def test_pair_marginal_same_label_is_diagonal(rng):
    model = FullJointModel.random(2, 3, rng)
    p = pair_marginal(model, A(3), A(3)).p
    assert np.allclose(p, np.diag(np.diag(p)))


def test_pair_marginal_unknown_label():
    with pytest.raises(UnknownLabelError):
        pair_marginal(FullJointModel.uniform(2, 2), A(5), B(2))


@pytest.mark.parametrize("spec", [type_i_spec(3), type_ii_spec(3)])
def test_triangle_on_every_deterministic_strategy(spec):
    labels = labels_for(2)
    for strategy in itertools.islice(iter_strategies(2, 3), 0, 81, 7):
        model = FullJointModel.deterministic(strategy, 3)
        for X, Y, Z in itertools.product(labels, repeat=3):
            assert verify_triangle(model, spec, X, Y, Z)


def test_triangle_uniform_slack_is_s_r():
    model = FullJointModel.uniform(2, 3)
    spec = type_i_spec(3)
    for X, Y, Z in itertools.permutations(labels_for(2), 3):
        assert triangle_slack(model, spec, X, Y, Z) == pytest.approx(1.0, abs=1e-12)


def test_triangle_random_models(rng):
    labels = labels_for(2)
    specs = [type_i_spec(3), type_ii_spec(3)]
    for i in range(200):
        model = FullJointModel.random(2, 3, rng, sparsity=0.8 if i % 2 else None)
        for spec in specs:
            S = separation_matrix(model, spec)
            slack = S[:, :, None] + S[None, :, :] - S[:, None, :]
            assert slack.min() >= -1e-12
        X, Y, Z = (labels[k] for k in rng.integers(0, 4, size=3))
        assert verify_triangle(model, specs[0], X, Y, Z)


@pytest.mark.parametrize("expr, N, D, kind", [
    (build_quadrangle(), 2, 2, OutcomeKind.TYPE_I),
    (build_quadrangle(), 2, 3, OutcomeKind.TYPE_II),
    (build_chained(3), 3, 2, OutcomeKind.TYPE_I),
    (build_chained(3), 3, 2, OutcomeKind.TYPE_II),
    (build_quadrangle(), 2, 4, OutcomeKind.TYPE_II),
])
def test_minimize_bell_matches_brute_force(expr, N, D, kind):
    spec = QuasiDistanceSpec.of_kind(kind, D)
    found = minimize_bell(expr, N, D, spec)
    value, strategy = brute_force_min(expr, N, D, spec)
    assert found.value == value == 0
    assert found.argmin == strategy
    assert found.strategies == D ** (2 * N)


def test_minimize_bell_argmin_is_lexicographically_first():
    found = minimize_bell(build_quadrangle(), 2, 3, type_i_spec(3))
    assert found.argmin.outcomes == (0, 0, 0, 0)


def test_minimize_bell_parallel_equals_serial():
    for kind in OutcomeKind.TYPE_I, OutcomeKind.TYPE_II:
        spec = QuasiDistanceSpec.of_kind(kind, 4)
        serial = minimize_bell(build_chained(3), 3, 4, spec)
        parallel = minimize_bell(build_chained(3), 3, 4, spec, workers=4)
        assert serial == parallel


def test_minimize_bell_finds_negative_values_for_custom_expressions():
    # S(A1,B2) - S(B2,A1) alone is not a Bell expression; the search must still see below 0
    from quasibell.bell import BellExpression, BellTerm
    expr = BellExpression((BellTerm(+1, A(1), B(2)), BellTerm(-1, B(2), A(1))))
    found = minimize_bell(expr, 2, 3, type_i_spec(3))
    # d(0, b) - d(b, 0) = [-b]_3 - [b]_3 is -1 first at b = 2
    assert found.value == -1
    assert found.argmin.outcomes == (0, 0, 2, 0)


def test_minimize_bell_budget_and_labels():
    with pytest.raises(BudgetExceededError):
        minimize_bell(build_quadrangle(), 2, 3, type_i_spec(3), budget=80)
    with pytest.raises(UnknownLabelError):
        minimize_bell(build_chained(3), 2, 2, type_i_spec(2))


@pytest.mark.parametrize("builder, N", [(lambda: build_quadrangle(), 2), (lambda: build_chained(3), 3),
                                        (lambda: build_sum_of_closed_forms(2), 4)])
@pytest.mark.parametrize("kind", [OutcomeKind.TYPE_I, OutcomeKind.TYPE_II])
def test_builders_have_local_bound_zero(builder, N, kind):
    D = 2
    spec = QuasiDistanceSpec.of_kind(kind, D)
    assert minimize_bell(builder(), N, D, spec).value == 0


def test_random_mixtures_never_beat_deterministic_minimum(rng):
    from quasibell.bell import LHVProvider, evaluate
    expr = build_quadrangle()
    for kind in OutcomeKind.TYPE_I, OutcomeKind.TYPE_II:
        spec = QuasiDistanceSpec.of_kind(kind, 3)
        floor = minimize_bell(expr, 2, 3, spec).value
        for _ in range(200):
            model = FullJointModel.random(2, 3, rng, sparsity=0.95)
            assert evaluate(expr, LHVProvider(model), spec) >= floor - 1e-12
