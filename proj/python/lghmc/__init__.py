"""HMC sampling on naturally reductive homogeneous spaces via a group lift."""

from lghmc._core import (
    CapabilityError,
    ConfigError,
    __version__,
    dh_scaling,
    exp_matrix,
    geodesic,
    potentials,
    sample,
    spaces,
    taylor_threshold,
    validate_space,
)

__all__ = [
    "CapabilityError",
    "ConfigError",
    "__version__",
    "dh_scaling",
    "exp_matrix",
    "geodesic",
    "potentials",
    "sample",
    "spaces",
    "taylor_threshold",
    "validate_space",
]
