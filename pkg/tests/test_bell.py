import math

import numpy as np
import pytest

from quasibell import bell
from quasibell.bell import (A, B, BellExpression, BellTerm, LHVProvider, QuantumProvider,
                            TableProvider, WhiteNoiseProvider, build_chained, build_quadrangle,
                            build_sum_of_closed_forms, evaluate, term_values)
from quasibell.distributions import JointDistribution, white_noise_separation
from quasibell.errors import MissingPairError, NoViolationError
from quasibell.lhv import FullJointModel, iter_strategies
from quasibell.quantum import QuantumScenario
from quasibell.residue import OutcomeKind, OutcomeMap, QuasiDistanceSpec, type_i_spec, type_ii_spec

KINDS = (OutcomeKind.TYPE_I, OutcomeKind.TYPE_II)


def catalan_series(terms=200_000):
    """Catalan's constant from its alternating series, averaging adjacent partial sums."""
    partial = math.fsum((-1) ** k / (2 * k + 1) ** 2 for k in range(terms))
    last = (-1) ** terms / (2 * terms + 1) ** 2
    return partial + last / 2


# -- builders ------------------------------------------------------------------

def test_quadrangle_terms():
    expr = build_quadrangle()
    assert len(expr) == 4
    assert [t.sign for t in expr.terms] == [1, 1, 1, -1]
    assert [(str(t.first), str(t.second)) for t in expr.terms] == [
        ("A1", "B2"), ("B2", "A3"), ("A3", "B4"), ("A1", "B4")]
    assert (expr.n_plus, expr.n_minus) == (3, 1)


def test_chained_terms():
    assert build_chained(2) == build_quadrangle()
    expr = build_chained(3)
    assert len(expr) == 6
    last = expr.terms[-1]
    assert (last.sign, last.first, last.second) == (-1, A(1), B(6))
    for N in range(2, 12):
        e = build_chained(N)
        assert (e.n_plus, e.n_minus) == (2 * N - 1, 1)
        assert e.n_plus - e.n_minus == 2 * N - 2
    with pytest.raises(ValueError):
        build_chained(1)


def test_sum_of_closed_forms_terms():
    assert build_sum_of_closed_forms(1).terms == build_quadrangle().terms
    expr = build_sum_of_closed_forms(2)
    assert len(expr) == 8
    assert max(t.second.index for t in expr.terms if t.second.site.value == "B") == 8
    assert expr.settings == 4
    with pytest.raises(ValueError):
        build_sum_of_closed_forms(0)


@pytest.mark.parametrize("M", range(1, 8))
def test_sum_of_closed_forms_counting(M):
    expr = build_sum_of_closed_forms(M)
    n_triangles = 2 * M
    assert len(expr) == 4 * M == 3 * n_triangles - 2 * M
    assert expr.n_plus == 2 * n_triangles - M == 3 * M
    assert expr.n_minus == n_triangles - M == M


def test_terms_must_cross_sites():
    with pytest.raises(ValueError):
        BellTerm(1, A(1), A(3))
    with pytest.raises(ValueError):
        BellTerm(2, A(1), B(2))


# -- evaluation ----------------------------------------------------------------

@pytest.mark.parametrize("expr", [build_quadrangle(), build_chained(3), build_chained(5),
                                  build_sum_of_closed_forms(2), build_sum_of_closed_forms(3)])
@pytest.mark.parametrize("D", [2, 3, 5, 8])
def test_white_noise_value_is_count_times_s_r(expr, D, rng):
    specs = [type_i_spec(D), type_ii_spec(D),
             QuasiDistanceSpec(D, OutcomeMap.custom(rng.integers(-9, 10, size=D).tolist()))]
    for spec in specs:
        expected = (expr.n_plus - expr.n_minus) * white_noise_separation(spec)
        assert evaluate(expr, WhiteNoiseProvider(D), spec) == pytest.approx(expected, abs=1e-12)


def test_quantum_quadrangle_type_i_d3():
    sc = QuantumScenario.canonical(2, 3)
    assert evaluate(build_quadrangle(), QuantumProvider(sc), type_i_spec(3)) == pytest.approx(-0.8729, abs=5e-5)


def test_lhv_strategies_evaluate_nonnegative():
    expr = build_quadrangle()
    for spec in (type_i_spec(3), type_ii_spec(3)):
        for strategy in iter_strategies(2, 3):
            value = evaluate(expr, LHVProvider(FullJointModel.deterministic(strategy, 3)), spec)
            assert value >= 0


def test_missing_pair():
    provider = TableProvider({(A(1), B(2)): JointDistribution.uniform(2)})
    with pytest.raises(MissingPairError):
        evaluate(build_quadrangle(), provider, type_i_spec(2))
    with pytest.raises(MissingPairError):
        evaluate(build_chained(3), QuantumProvider(QuantumScenario.canonical(2, 2)), type_i_spec(2))


def test_table_provider_direction():
    # a point mass at (a, b) = (0, 1): S(A1,B2) = d(0,1), S(B2,A1) = d(1,0)
    spec = type_i_spec(3)
    provider = TableProvider({(A(1), B(2)): JointDistribution.point_mass(3, 0, 1)})
    ab = BellExpression((BellTerm(1, A(1), B(2)),))
    ba = BellExpression((BellTerm(1, B(2), A(1)),))
    assert evaluate(ab, provider, spec) == 2
    assert evaluate(ba, provider, spec) == 1


# -- quantum closed forms --------------------------------------------------------

@pytest.mark.parametrize("D, expected", [(2, 1 - math.sqrt(2)), (3, -0.8729), (6, -2.3005)])
def test_bell_quantum_type1(D, expected):
    assert bell.bell_quantum_type1(2, D) == pytest.approx(expected, abs=5e-5)


@pytest.mark.parametrize("D, expected", [(2, -0.4142), (3, -0.3769), (5, -0.3548)])
def test_bell_quantum_type2(D, expected):
    assert bell.bell_quantum_type2(2, D, D) == pytest.approx(expected, abs=5e-5)


def test_white_noise_closed_values():
    assert bell.bell_white_noise(OutcomeKind.TYPE_I, 2, 4) == 3.0
    assert bell.bell_white_noise(OutcomeKind.TYPE_II, 2, 3) == pytest.approx(4 / 3)
    assert bell.bell_white_noise(OutcomeKind.TYPE_II, 2, 2) == 1.0


@pytest.mark.parametrize("N", range(2, 7))
@pytest.mark.parametrize("D", range(2, 9))
def test_closed_forms_match_engine(N, D):
    i1 = evaluate(build_chained(N), QuantumProvider(QuantumScenario.canonical(N, D)), type_i_spec(D))
    assert abs(bell.bell_quantum_type1(N, D) - i1) <= 1e-10
    for R in range(2, D + 1):
        sc = QuantumScenario.canonical(N, D, R)
        i2 = evaluate(build_chained(N), QuantumProvider(sc), type_ii_spec(D))
        assert abs(bell.bell_quantum_type2(N, D, R) - i2) <= 1e-10


@pytest.mark.parametrize("N", [2, 3, 4])
@pytest.mark.parametrize("D", [2, 3, 5, 7])
def test_positive_terms_share_one_value(N, D):
    expr = build_chained(N)
    for R in range(2, D + 1):
        provider = QuantumProvider(QuantumScenario.canonical(N, D, R))
        for spec in (type_i_spec(D), type_ii_spec(D)):
            values = [v for t, v in zip(expr.terms, term_values(expr, provider, spec)) if t.sign > 0]
            assert max(values) - min(values) <= 1e-10


def test_oracle_provider_agrees_with_closed_provider():
    expr = build_chained(3)
    sc = QuantumScenario.canonical(3, 5, 4)
    for spec in (type_i_spec(5), type_ii_spec(5)):
        closed = evaluate(expr, QuantumProvider(sc, "closed"), spec)
        oracle = evaluate(expr, QuantumProvider(sc, "oracle"), spec)
        assert closed == pytest.approx(oracle, abs=1e-10)


# -- visibility ----------------------------------------------------------------

def test_critical_visibility_examples():
    i_q, i_r = bell.bell_quantum_type1(2, 3), bell.bell_white_noise(1, 2, 3)
    assert bell.critical_visibility(i_q, i_r) == pytest.approx(0.6962, abs=5e-5)
    i_q, i_r = bell.bell_quantum_type2(2, 5, 5), bell.bell_white_noise(2, 2, 5)
    assert bell.critical_visibility(i_q, i_r) == pytest.approx(0.8185, abs=5e-5)
    assert bell.critical_visibility(-2.5, 2.5) == 0.5


@pytest.mark.parametrize("i_q, i_r", [(0.0, 1.0), (0.3, 1.0), (-1.0, 0.0)])
def test_critical_visibility_without_violation(i_q, i_r):
    with pytest.raises(NoViolationError):
        bell.critical_visibility(i_q, i_r)


def test_noisy_bell_endpoints_and_root():
    expr, spec = build_quadrangle(), type_i_spec(3)
    sc = QuantumScenario.canonical(2, 3)
    i_q, i_r = bell.bell_quantum_type1(2, 3), bell.bell_white_noise(1, 2, 3)
    assert bell.noisy_bell(expr, sc, spec, 1.0) == pytest.approx(i_q, abs=1e-12)
    assert bell.noisy_bell(expr, sc, spec, 0.0) == pytest.approx(i_r, abs=1e-12)
    v_c = bell.critical_visibility(i_q, i_r)
    assert abs(bell.noisy_bell(expr, sc, spec, v_c)) <= 1e-10
    with pytest.raises(ValueError):
        bell.noisy_bell(expr, sc, spec, 1.5)


@pytest.mark.parametrize("kind, N, D, R", [(1, 2, 4, 4), (2, 3, 6, 2), (2, 2, 9, 5)])
def test_noisy_bell_is_affine(kind, N, D, R):
    expr, spec = build_chained(N), QuasiDistanceSpec.of_kind(kind, D)
    sc = QuantumScenario.canonical(N, D, R)
    v = np.array([0.1, 0.45, 0.93])
    y = np.array([bell.noisy_bell(expr, sc, spec, x) for x in v])
    slope = (y[2] - y[0]) / (v[2] - v[0])
    assert y[1] == pytest.approx(y[0] + slope * (v[1] - v[0]), abs=1e-12)


def test_type2_formula_matches_generic_ratio():
    for N in (2, 3, 5):
        for D in (2, 3, 7, 20, 100):
            for R in {2, 3, min(D, 4), D}:
                if R > D:
                    continue
                generic = bell.critical_visibility(bell.bell_quantum_type2(N, D, R),
                                                   bell.bell_white_noise(2, N, D))
                assert bell.critical_visibility_type2_formula(N, D, R) == pytest.approx(generic, abs=1e-12)
    # xi'_2 = (sqrt(2) - 1)/2 at N = 2, so v_c = 1/(1 + 2500/99 (sqrt(2) - 1)) at D = 100
    expected = 1 / (1 + 100**2 / (2 * 99) * (math.sqrt(2) - 1) / 2)
    assert bell.critical_visibility_type2_formula(2, 100, 2) == pytest.approx(expected, abs=1e-12)
    assert bell.critical_visibility_type2_formula(2, 10**4, 2) < 0.01


def test_type2_formula_row_and_trend():
    assert bell.critical_visibility_type2_formula(2, 4, 4) == pytest.approx(0.8056, abs=5e-5)
    values = [bell.critical_visibility_type2_formula(2, D, 2) for D in range(2, 65)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_type1_formula_matches_generic_ratio():
    for N in range(2, 8):
        for D in range(2, 12):
            generic = bell.critical_visibility(bell.bell_quantum_type1(N, D), bell.bell_white_noise(1, N, D))
            assert bell.critical_visibility_type1_formula(N, D) == pytest.approx(generic, abs=1e-12)


def test_ssr_link_orderings():
    limit = bell.asymptote_type1()
    type1 = [bell.critical_visibility_type1_formula(2, D) for D in range(2, 65)]
    assert all(a > b for a, b in zip(type1, type1[1:]))
    assert min(type1) > limit
    for R in (2, 3, 4):
        type2 = [bell.critical_visibility_type2_formula(2, D, R) for D in range(R, 65)]
        assert all(a > b for a, b in zip(type2, type2[1:]))
    assert bell.critical_visibility_type2_formula(2, 64, 2) < min(type1)


def test_type_i_more_resilient_than_type_ii_at_full_rank():
    for D in range(3, 65):
        assert bell.critical_visibility_type1_formula(2, D) < bell.critical_visibility_type2_formula(2, D, D)
    assert bell.critical_visibility_type1_formula(2, 2) == pytest.approx(
        bell.critical_visibility_type2_formula(2, 2, 2), abs=1e-12)


@pytest.mark.parametrize("D", [2, 3, 5, 8])
def test_visibility_increases_with_settings(D):
    v1 = [bell.critical_visibility_type1_formula(N, D) for N in range(2, 33)]
    v2 = [bell.critical_visibility_type2_formula(N, D, D) for N in range(2, 33)]
    for seq in (v1, v2):
        assert all(a < b for a, b in zip(seq, seq[1:]))
        assert seq[-1] < 1


# -- asymptotics ---------------------------------------------------------------

def test_catalan_constant_against_series():
    assert bell.CATALAN == pytest.approx(catalan_series(), abs=1e-12)


def test_asymptote_value():
    assert bell.asymptote_type1() == pytest.approx(0.67344, abs=5e-6)
    assert abs(bell.critical_visibility_type1_formula(2, 4096) - bell.asymptote_type1()) < 2e-3


@pytest.mark.parametrize("kind, dim", [(1, 3), (1, 5), (2, 3), (2, 5)])
def test_large_n_residual_is_second_order(kind, dim):
    err = [abs(bell.exact_xi(kind, N, dim) - bell.large_n_xi_approx(kind, N, dim)) for N in (16, 32, 64)]
    assert 3.5 <= err[0] / err[1] <= 4.5
    assert 3.5 <= err[1] / err[2] <= 4.5


def test_large_n_rank_two_residual_decays_faster():
    # for R = 2 the 1/N^2 coefficient vanishes; the residual falls off as 1/N^3
    err = [abs(bell.xi_type2(N, 2) - bell.large_n_xi_approx(2, N, 2)) for N in (32, 64)]
    assert 7.0 <= err[0] / err[1] <= 9.0


def test_xi_rank_two_limit():
    assert abs(bell.xi_type2(256, 2) - 0.5) < 5e-3
    assert bell.large_n_xi_approx(2, 10**9, 2) == pytest.approx(0.5, abs=1e-8)


def test_type1_value_approaches_algebraic_bound():
    values = [bell.bell_quantum_type1(N, 3) for N in range(2, 33)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(v > -2 for v in values)
    assert bell.bell_quantum_type1(4096, 3) == pytest.approx(-2, abs=1e-3)


# -- CGLMP ---------------------------------------------------------------------

def test_cglmp_values():
    assert bell.cglmp_standard_value(2) == pytest.approx(2 * math.sqrt(2), abs=1e-12)
    assert bell.cglmp_standard_value(3) == pytest.approx(2.8729, abs=5e-4)


@pytest.mark.parametrize("D", range(2, 10))
def test_cglmp_by_substitution(D):
    assert bell.cglmp_by_substitution(D) == pytest.approx(bell.cglmp_standard_value(D), abs=1e-10)


@pytest.mark.parametrize("D", range(2, 10))
def test_rescaled_separation_identity_term_by_term(D, rng):
    spec = type_i_spec(D)
    tables = [rng.dirichlet(np.ones(D * D)).reshape(D, D) for _ in range(5)]
    tables += [QuantumProvider(QuantumScenario.canonical(2, D))(A(1), B(4)).p]
    for p in tables:
        dist = JointDistribution(D, p)
        s_ab = float(np.sum(spec.matrix * dist.p))
        s_ba = float(np.sum(spec.matrix.T * dist.p))
        assert bell.rescaled_separation_by_differences(dist.p, D) == pytest.approx(2 / (D - 1) * s_ab, abs=1e-10)
        assert bell.rescaled_separation_by_differences(dist.p, D, transpose=True) == pytest.approx(
            2 / (D - 1) * s_ba, abs=1e-10)


# -- reports -------------------------------------------------------------------

def test_visibility_report_fields():
    rep = bell.visibility_report(2, 2, 4)
    assert rep.R == 4 and rep.ssr == 0.25 and rep.s_max == 3.0
    assert rep.v_c == pytest.approx(rep.I_r / (rep.I_r - rep.I_q))
    assert rep.violation and rep.to_dict()["violation"] is True


def test_visibility_report_engine_for_type_i_low_rank():
    rep = bell.visibility_report(1, 2, 6, 3)
    assert rep.method == "engine"
    assert rep.v_c == pytest.approx(0.7411944503127993, abs=1e-12)


def test_quantum_value_routes_agree():
    for kind in KINDS:
        for D in (3, 6):
            closed, _ = bell.quantum_value(kind, 3, D, D)
            engine, used = bell.quantum_value(kind, 3, D, D, method="engine")
            assert used == "engine"
            assert closed == pytest.approx(engine, abs=1e-10)


def test_type1_rank_four_visibility_high_precision():
    # 40-digit evaluation of the same closed form; the printed table rounds this to 0.6906
    assert bell.critical_visibility_type1_formula(2, 4) == pytest.approx(0.6905497394878109, abs=1e-12)
    assert bell.bell_quantum_type1(2, 4) == pytest.approx(-1.3443648276880625, abs=1e-12)
