"""Extreme eigenvalue moduli of the complex Ginibre and induced Ginibre ensembles.

Exact finite-N laws (:mod:`.ginibre`, :mod:`.induced`), asymptotic laws
(:mod:`.limits`), Monte Carlo samplers (:mod:`.sampling`), goodness-of-fit
statistics (:mod:`.stats`) and the special functions underneath
(:mod:`.specfun`).
"""
__version__ = "0.1.0"

from .errors import DomainError, IntegrityError  # noqa: E402
from .params import DistributionCurve, EnsembleParams, ScalingMode  # noqa: E402

__all__ = [
    "__version__",
    "DomainError",
    "IntegrityError",
    "DistributionCurve",
    "EnsembleParams",
    "ScalingMode",
]
