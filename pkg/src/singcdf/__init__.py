"""Distribution functions of random numbers with stationary base-q digits."""

from .approx import ApproxReport, markovize, sup_gap
from .cdf import (Classification, CdfValue, classify, derivative_estimate, eval_cdf,
                  eval_cdf_point_process, eval_grid, is_continuous_at,
                  is_strictly_increasing_at, predictive_ratio)
from .digits import (BaseQFraction, DigitExpansion, PointConfiguration, as_fraction,
                     digits_of, fraction_grid, is_base_q_fraction)
from .errors import (BadShape, DomainError, Inconclusive, InfiniteMean, NoConvergence,
                     NonStochasticRow, NotInvariant, PrefixTooLong, QuadratureFailure,
                     SingCdfError, ValidationError, ZeroDenominator)
from .mixtures import log_beta, mixed_bernoulli_cdf, mixed_ising_cdf, mixed_renewal_cdf
from .models import (BernoulliSpec, MarkovSpec, MixtureSpec, RenewalSpec, finite_dim_prob,
                     sample_digits, sample_paths, validate)
from .verify import VerificationReport, check_functional_equation, ks_distance, singularity_scan

__version__ = "0.1.0"
