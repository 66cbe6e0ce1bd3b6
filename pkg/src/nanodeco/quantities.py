"""SI dimensions, dimensioned values and the physical constants used everywhere.

Dimensions are tracked over five base units (m, kg, s, A, K). A
:class:`Quantity` carries a double-precision value together with its
:class:`Dimension`; arithmetic between quantities propagates dimensions
exactly and refuses to add or subtract mismatched ones.

Constants are CODATA 2018 values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from numbers import Real

from .errors import DomainError, InvalidValue, MismatchedDimensions

__all__ = [
    "Dimension",
    "Quantity",
    "Constants",
    "CODATA2018",
    "q",
    "check_c_identity",
    "DIMENSIONLESS",
    "METER",
    "KILOGRAM",
    "SECOND",
    "AMPERE",
    "KELVIN",
    "HERTZ",
    "JOULE",
    "HENRY",
    "FARAD",
    "TESLA",
    "MOMENTUM_SQ",
    "MOMENTUM_DIFFUSION",
    "POLARIZABILITY",
    "SCATTERING_CONSTANT",
]

_SYMBOLS = ("m", "kg", "s", "A", "K")


@dataclass(frozen=True)
class Dimension:
    """Integer exponents of (length, mass, time, current, temperature)."""

    length: int = 0
    mass: int = 0
    time: int = 0
    current: int = 0
    temperature: int = 0

    def __post_init__(self):
        for name, e in zip(_SYMBOLS, self.exponents):
            if not isinstance(e, int) or isinstance(e, bool):
                raise TypeError(f"exponent of {name} must be int, got {e!r}")

    @property
    def exponents(self) -> tuple[int, int, int, int, int]:
        return (self.length, self.mass, self.time, self.current, self.temperature)

    @classmethod
    def from_exponents(cls, exps) -> Dimension:
        return cls(*(int(e) for e in exps))

    def __mul__(self, other: Dimension) -> Dimension:
        return Dimension.from_exponents(a + b for a, b in zip(self.exponents, other.exponents))

    def __truediv__(self, other: Dimension) -> Dimension:
        return Dimension.from_exponents(a - b for a, b in zip(self.exponents, other.exponents))

    def __pow__(self, p) -> Dimension:
        p = Fraction(p)
        out = []
        for e in self.exponents:
            r = e * p
            if r.denominator != 1:
                raise DomainError(f"power {p} of dimension {self} is not integral")
            out.append(int(r))
        return Dimension.from_exponents(out)

    @property
    def is_dimensionless(self) -> bool:
        return not any(self.exponents)

    def __str__(self) -> str:
        parts = []
        for sym, e in zip(_SYMBOLS, self.exponents):
            if e == 1:
                parts.append(sym)
            elif e:
                parts.append(f"{sym}^{e}")
        return "·".join(parts) if parts else "1"


DIMENSIONLESS = Dimension()
METER = Dimension(length=1)
KILOGRAM = Dimension(mass=1)
SECOND = Dimension(time=1)
AMPERE = Dimension(current=1)
KELVIN = Dimension(temperature=1)
HERTZ = Dimension(time=-1)
JOULE = Dimension(2, 1, -2)
HENRY = Dimension(2, 1, -2, -2)
FARAD = Dimension(-2, -1, 4, 2)
TESLA = Dimension(0, 1, -2, -1)
MOMENTUM_SQ = Dimension(2, 2, -2)
MOMENTUM_DIFFUSION = Dimension(2, 2, -3)
# m = alpha * B for a magnetic moment in A·m^2
POLARIZABILITY = Dimension(2, -1, 2, 2)
SCATTERING_CONSTANT = Dimension(-2, 0, -1)


def _check_finite(value) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise InvalidValue(f"non-finite value {value!r}")
    return v


@dataclass(frozen=True)
class Quantity:
    """A real value with SI dimensions. Immutable."""

    value: float
    dim: Dimension = DIMENSIONLESS

    def __post_init__(self):
        object.__setattr__(self, "value", _check_finite(self.value))

    @staticmethod
    def _lift(other) -> Quantity:
        if isinstance(other, Quantity):
            return other
        if isinstance(other, Real):
            return Quantity(float(other))
        return NotImplemented

    def _same_dim(self, other: Quantity, op: str) -> None:
        if self.dim != other.dim:
            raise MismatchedDimensions(f"cannot {op} [{self.dim}] and [{other.dim}]")

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "add")
        return Quantity(self.value + other.value, self.dim)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        self._same_dim(other, "subtract")
        return Quantity(self.value - other.value, self.dim)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return Quantity(self.value * other.value, self.dim * other.dim)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.value == 0.0:
            raise DomainError("division by a zero quantity")
        return Quantity(self.value / other.value, self.dim / other.dim)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, p):
        if isinstance(p, Quantity):
            if not p.dim.is_dimensionless:
                raise MismatchedDimensions("exponent must be dimensionless")
            p = p.value
        frac = Fraction(p).limit_denominator(1000) if isinstance(p, float) else Fraction(p)
        dim = self.dim ** frac
        if frac.denominator == 1:
            return Quantity(self.value ** int(frac), dim)
        if self.value < 0:
            raise DomainError("fractional power of a negative quantity")
        return Quantity(self.value ** float(frac), dim)

    def __neg__(self):
        return Quantity(-self.value, self.dim)

    def __abs__(self):
        return Quantity(abs(self.value), self.dim)

    def _cmp(self, other) -> tuple[float, float]:
        other = self._lift(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare Quantity with {type(other).__name__}")
        self._same_dim(other, "compare")
        return self.value, other.value

    def __lt__(self, other):
        a, b = self._cmp(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp(other)
        return a >= b

    def __float__(self) -> float:
        if not self.dim.is_dimensionless:
            raise MismatchedDimensions(f"cannot convert [{self.dim}] to a bare float")
        return self.value

    def to(self, dim: Dimension) -> float:
        """Return the SI value after asserting the dimension is ``dim``."""
        if self.dim != dim:
            raise MismatchedDimensions(f"expected [{dim}], got [{self.dim}]")
        return self.value

    def __str__(self) -> str:
        unit = str(self.dim)
        return f"{self.value:.6g}" if unit == "1" else f"{self.value:.6g} {unit}"


def q(value: float, dim: Dimension = DIMENSIONLESS) -> Quantity:
    """Pair ``value`` with ``dim``. Raises :class:`InvalidValue` on NaN/inf."""
    return Quantity(value, dim)


@dataclass(frozen=True)
class Constants:
    """Physical constants as SI quantities."""

    hbar: Quantity
    k_B: Quantity
    c: Quantity
    eps0: Quantity
    mu0: Quantity

    def with_values(self, **values: float) -> Constants:
        """Copy with some constants replaced by bare SI values (same dims)."""
        changes = {k: Quantity(v, getattr(self, k).dim) for k, v in values.items()}
        return replace(self, **changes)


CODATA2018 = Constants(
    hbar=q(1.054571817e-34, JOULE * SECOND),
    k_B=q(1.380649e-23, JOULE / KELVIN),
    c=q(299792458.0, METER / SECOND),
    eps0=q(8.8541878128e-12, FARAD / METER),
    mu0=q(1.25663706212e-6, HENRY / METER),
)

# Wien displacement constant b (CODATA 2018)
WIEN_B = q(2.897771955e-3, METER * KELVIN)


def check_c_identity(const: Constants = CODATA2018) -> float:
    """Return ``|c^2 eps0 mu0 - 1|`` for the given constant set.

    The product must be dimensionless; a zero ``eps0`` or ``mu0`` is rejected
    because the identity degenerates.
    """
    if const.eps0.value == 0.0 or const.mu0.value == 0.0:
        raise InvalidValue("eps0 and mu0 must be nonzero")
    prod = const.c ** 2 * const.eps0 * const.mu0
    return abs(float(prod) - 1.0)
