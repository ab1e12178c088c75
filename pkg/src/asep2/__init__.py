"""Exact finite-N laws for the two-species exclusion process, with a
stochastic simulator and a master-equation oracle to check them."""

from .algebra import (DegenerateDenominatorError, ModelParams,
                      all_reduced_words, amplitude, reduced_word,
                      sector_amplitudes, vanishes)
from .dist import (DistributionTable, EnvelopeWarning, InitialConfig,
                   TableAlarmError, TargetConfig, n3_expanded_pmf,
                   poisson_window_halfwidth, proposition41_check_N3,
                   rightmost_single_species_pmf,
                   rightmost_single_species_table, second_class_pmf,
                   second_class_table, subset_integral, symmetric_pmf,
                   transition_probability)
from .oracle import (StateSpace, StateVector, WindowTooSmallError,
                     evolve, second_class_marginal)
from .qcomb import (coefficient_cS, coefficient_cS_rightmost,
                    coefficient_cS_tilde, q_binomial, verify_identities)
from .quadrature import (Contour, NonFiniteIntegrandError,
                         QuadratureResult, default_contour,
                         integrate_polydisc)
from .sim import MCEstimate, ParticleState, estimate_pmf, simulate_once

__version__ = "0.1.0"

__all__ = [
    "DegenerateDenominatorError",
    "ModelParams",
    "all_reduced_words",
    "amplitude",
    "reduced_word",
    "sector_amplitudes",
    "vanishes",
    "DistributionTable",
    "EnvelopeWarning",
    "InitialConfig",
    "TableAlarmError",
    "TargetConfig",
    "n3_expanded_pmf",
    "poisson_window_halfwidth",
    "proposition41_check_N3",
    "rightmost_single_species_pmf",
    "rightmost_single_species_table",
    "second_class_pmf",
    "second_class_table",
    "subset_integral",
    "symmetric_pmf",
    "transition_probability",
    "StateSpace",
    "StateVector",
    "WindowTooSmallError",
    "evolve",
    "second_class_marginal",
    "coefficient_cS",
    "coefficient_cS_rightmost",
    "coefficient_cS_tilde",
    "q_binomial",
    "verify_identities",
    "Contour",
    "NonFiniteIntegrandError",
    "QuadratureResult",
    "default_contour",
    "integrate_polydisc",
    "MCEstimate",
    "ParticleState",
    "estimate_pmf",
    "simulate_once",
    "__version__",
]
