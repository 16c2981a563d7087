"""Dyadic nonlocal Schrödinger calculus on piecewise-constant grid functions."""
from .besov import besov_norm, besov_weight, coefficient_norm, equivalence_ratio, seminorm_sq_coefficients, seminorm_sq_quadrature
from .dyadic import DyadicInterval, GridPoint, delta_matrix, dyadic_distance, measure_B, measure_B_cap_C
from .evolution import EvolutionState, evolve, evolve_pointwise, pde_residual
from .exceptions import DyadicError, FormatError, PreconditionError, ResolutionError
from .grid import BesovParams, GridFunction, generate_besov_sample, generate_lipschitz_sample, project_P0, read_csv, write_csv
from .haar import HaarCoefficients, analyze, haar_function, partial_sum, synthesize
from .maximal import convergence_rate_bound, hardy_littlewood_dyadic, sharp_maximal_dyadic, star_maximal
from .nonlocal_op import dbeta_integral, dbeta_spectral, dbeta_via_spectrum, integral_prefactor
from .report import Case, VerificationReport

__version__ = "0.1.0"
