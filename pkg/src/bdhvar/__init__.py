"""Variance statistics for weighted prime counts in arithmetic progressions.

The package computes, at desk scale, the objects behind
Barban-Davenport-Halberstam style variance bounds for three weightings of
the von Mangoldt function: twisted by e(t n^c), restricted to
Piatetski-Shapiro index sets, and both at once.  Supporting machinery
(segmented sieve, Dirichlet character groups, sawtooth approximation,
oscillatory integrals, a large-sieve checker) is exposed directly.
"""

from .arith import (LambdaTable, PrimeTable, build_lambda_table,
                    build_prime_table, euler_phi, factorize, von_mangoldt)
from .characters import (CharacterGroup, DirichletCharacter, char_eval,
                         character_group, conductor, delta_principal, psi_chi)
from .errors import ParameterError, ResourceError
from .oscillatory import (ExpWeightParams, VaalerExpansion, main_term_integral,
                          oscillatory_integral, phase_frac_array,
                          prime_exp_sum, reduced_phase, saw_psi, unit_exp,
                          vaaler_eval, vaaler_expansion)
from .psprimes import (GAMMA_THRESHOLDS, PSConfig, enumerate_ps, ps_array,
                       ps_config, ps_count_main_term, ps_indicator,
                       ps_indicator_array)
from .variance import (LargeSieveResult, MainTerm, SieveTables, VarianceReport,
                       WeightKind, WeightParams, WeightTable,
                       bdh_variance_characters, bdh_variance_direct,
                       build_weight_table, class_sums, custom_weight_table,
                       large_sieve_check, main_term_for, make_tables,
                       normalized_ratio, normalizer, progression_sum,
                       variance_report)

__version__ = "0.1.0"
