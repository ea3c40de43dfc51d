"""Generalized weighted means and their reciprocal consistency.

The building blocks live in :mod:`quasimeans.generators` and
:mod:`quasimeans.means`; sampled property checks in
:mod:`quasimeans.checks`; the exchange-rate harness in :mod:`quasimeans.fx`.
"""

from .errors import (
    ArityMismatch,
    DegenerateFit,
    DomainError,
    InvalidWeights,
    InvariantError,
    InversionFailure,
    MeanError,
    ParseError,
    SpecParseError,
)
from .generators import Generator, Homeomorphism, Interval, invert_generator
from .means import (
    Conjugate,
    GeneralizedQuasigeometric,
    Geometric,
    MeanSpec,
    Power,
    Quasiarithmetic,
    Quasigeometric,
    Weights,
    conjugate_eval,
    eval_generalized_quasigeometric,
    eval_geometric,
    eval_power_mean,
    eval_quasiarithmetic,
    eval_quasigeometric,
    reciprocal_image,
)
from .registry import parse_generator, parse_mean

__version__ = "0.1.0"
