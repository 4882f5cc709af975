"""Power indices, p-biased spectra, one-sided noise and threshold intervals
of monotone Boolean functions and cooperative games."""

from .exceptions import DomainError, ShapThreshError, SizeError, SpecError
from .functions import (
    BooleanFunction,
    FunctionSpec,
    GameFunction,
    and_,
    build,
    builtin_zoo,
    constant,
    dictator,
    judge,
    judge_or_tribes,
    majority,
    or_,
    parity,
    tribes,
    weighted_majority,
)
from .measures import influence, influences, mu, mu_derivative, sample_mu, total_influence
from .noise import NoisePair, apply_direct, apply_spectral, correlation
from .power import PowerVector, banzhaf, shapley_exact, shapley_owen, shapley_sampled, verify_shapley_axioms
from .spectral import PBiasedSpectrum, RealFunction, derivative, fourier_influence, inverse_transform, lq_norm, transform
from .threshold import (
    ThresholdReport,
    banzhaf_shapley_report,
    influence_profile_scan,
    low_influence_point,
    p_alpha,
    shapley_interval_report,
    threshold_interval,
)

__version__ = "0.1.0"
