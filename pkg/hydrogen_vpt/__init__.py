"""Variational effective classical potential of hydrogen in a uniform magnetic field."""

try:
    from ._version import __version__
except ImportError:
    # Fallback when using the package in dev mode without installing
    # in editable mode with pip.
    import warnings
    warnings.warn("Importing 'hydrogen_vpt' outside a proper installation.")
    __version__ = "dev"

from .errors import DomainError, NumericalError, SingularConfigurationError, VptError
from .models import FluctuationWidths, FrequencyTriple, PotentialEvaluation, SmearingInput, ThermoPoint

__all__ = [
    "DomainError",
    "FluctuationWidths",
    "FrequencyTriple",
    "NumericalError",
    "PotentialEvaluation",
    "SingularConfigurationError",
    "SmearingInput",
    "ThermoPoint",
    "VptError",
    "__version__",
]
