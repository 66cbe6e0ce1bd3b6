"""Thermal-fluctuation decoherence rates of levitated nanospheres."""

from .errors import (
    DecoError,
    DivisionByZeroRate,
    DomainError,
    InvalidValue,
    MismatchedDimensions,
    NoSolution,
    NotFound,
    NumericalFailure,
    ParseError,
    SingularMaterial,
    ValidationError,
)
from .materials import Material, MaterialDb, builtin_db, default_db, load_materials
from .quantities import CODATA2018, Constants, Dimension, Quantity, q
from .rates import (
    Channel,
    CoefficientMode,
    RateResult,
    SphereConfig,
    gamma,
    gamma_electric,
    gamma_magnetic,
    rate_ratio,
    temperature_budget,
)
from .spectral import thermal_spectral_integral, zeta

__version__ = "0.1.0"

__all__ = [
    "DecoError",
    "DivisionByZeroRate",
    "DomainError",
    "InvalidValue",
    "MismatchedDimensions",
    "NoSolution",
    "NotFound",
    "NumericalFailure",
    "ParseError",
    "SingularMaterial",
    "ValidationError",
    "Channel",
    "CoefficientMode",
    "RateResult",
    "SphereConfig",
    "gamma",
    "gamma_electric",
    "gamma_magnetic",
    "rate_ratio",
    "temperature_budget",
    "Material",
    "MaterialDb",
    "builtin_db",
    "default_db",
    "load_materials",
    "CODATA2018",
    "Constants",
    "Dimension",
    "Quantity",
    "q",
    "thermal_spectral_integral",
    "zeta",
]
