"""Bell-type inequalities from modular quasi-distances, with white-noise analysis."""

from .bell import (BellExpression, BellTerm, LHVProvider, NoisyProvider, QuantumProvider,
                   TableProvider, VisibilityReport, WhiteNoiseProvider, asymptote_type1,
                   bell_quantum_type1, bell_quantum_type2, bell_white_noise, build_chained,
                   build_quadrangle, build_sum_of_closed_forms, cglmp_by_substitution,
                   cglmp_standard_value, critical_visibility, critical_visibility_type1_formula,
                   critical_visibility_type2_formula, evaluate, large_n_xi_approx, noisy_bell,
                   visibility_report)
from .config import TOL, Tolerances
from .distributions import (Direction, JointDistribution, quasi_separation, ssr,
                            white_noise_separation)
from .lhv import (A, B, DeterministicStrategy, FullJointModel, ObservableLabel, Site,
                  minimize_bell, pair_marginal, verify_triangle)
from .quantum import (CorrelationMarginal, QuantumScenario, canonical_phases, correlation_marginal,
                      correlation_mean, joint_probability_closed, joint_probability_oracle)
from .residue import (OutcomeKind, OutcomeMap, QuasiDistanceSpec, check_subadditivity,
                      negation_identity, quasi_distance, residue)

__version__ = "0.1.0"

__all__ = [
    "A",
    "B",
    "BellExpression",
    "BellTerm",
    "CorrelationMarginal",
    "DeterministicStrategy",
    "Direction",
    "FullJointModel",
    "JointDistribution",
    "LHVProvider",
    "NoisyProvider",
    "ObservableLabel",
    "OutcomeKind",
    "OutcomeMap",
    "QuantumProvider",
    "QuantumScenario",
    "QuasiDistanceSpec",
    "Site",
    "TOL",
    "TableProvider",
    "Tolerances",
    "VisibilityReport",
    "WhiteNoiseProvider",
    "asymptote_type1",
    "bell_quantum_type1",
    "bell_quantum_type2",
    "bell_white_noise",
    "build_chained",
    "build_quadrangle",
    "build_sum_of_closed_forms",
    "canonical_phases",
    "cglmp_by_substitution",
    "cglmp_standard_value",
    "check_subadditivity",
    "correlation_marginal",
    "correlation_mean",
    "critical_visibility",
    "critical_visibility_type1_formula",
    "critical_visibility_type2_formula",
    "evaluate",
    "joint_probability_closed",
    "joint_probability_oracle",
    "large_n_xi_approx",
    "minimize_bell",
    "negation_identity",
    "noisy_bell",
    "pair_marginal",
    "quasi_distance",
    "quasi_separation",
    "residue",
    "ssr",
    "verify_triangle",
    "visibility_report",
    "white_noise_separation",
]
