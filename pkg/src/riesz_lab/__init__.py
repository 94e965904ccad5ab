"""Riesz summation of general Dirichlet series ``sum a_n exp(-lam_n s)``.

Means and summatory functions of arbitrary order, abscissa estimates, the
Laplace/Perron transform pair, coefficient recovery and weighted sup-norm
diagnostics, all checked against independent oracles.
"""

__version__ = "0.1.0"

from .abscissa import (AbscissaEstimate, ConeSpec, OrderEstimate, absolute_abscissa,
                       bohr_cahen_pointwise, bohr_cahen_uniform, cone_uniformity, order_at)
from .catalog import CatalogEntry, KnownFact, catalog_list, cesaro_eval, eta_oracle, get_entry, zeta_oracle
from .frequency import (ConditionReport, Frequency, check_bc, check_lc, check_nc, estimate_L,
                        make_frequency, ordinary_frequency, power_frequency, sqrtlog_frequency)
from .series import (Coefficients, ConvergenceReport, DirichletSeries, RieszSpec, alternating, expr,
                     means_grid, ones, partial_sum, riesz_limit, riesz_mean, scaled_tail_residuals,
                     summatory, table, translate)
from .spaces import (EvalGrid, NormEstimate, NormSpec, coefficient_bound_check, default_grid,
                     far_left_profile, far_right_decay, limit_function, log_convexity_check,
                     maximal_ratio, norm_inf_ell, uniform_riesz_approx)
from .special import beta_fn, beta_moment, gamma_fn
from .transforms import (QuadratureConfig, TransformResult, abel_identity_check, laplace_forward,
                         laplace_limit, order_change_identity_check, order_raise, perron_summatory,
                         recover_coefficients)
