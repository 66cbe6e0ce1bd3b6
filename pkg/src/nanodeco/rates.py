"""Closed-form momentum diffusion and decoherence rates of a levitated sphere.

Magnetic channel (diamagnetic sphere of radius a, volume susceptibility chi_v)::

    <Δp²>/Δt = (a⁶ ħ² c / 9π³) |chi_v/(3+chi_v)|² (k_B T/ħc)⁹ K
    gamma_B  = <Δp²>/Δt · Δx²/(2ħ²)
             = (a⁶ c / 18π³) |chi_v/(3+chi_v)|² (k_B T/ħc)⁹ K Δx²

Electric channel (dielectric constant eps)::

    gamma_E = (512 π⁷ a⁶ c / 135) (k_B T/ħc)⁹ |(eps-1)/(eps+2)|² Δx²

The magnetic coefficient K is selected by :class:`CoefficientMode`.
``PAPER`` uses Γ(8)ζ(8) as originally published. ``REDERIVED`` uses the
thermal spectral integral ∫x⁸(n²+n)dx = Γ(9)ζ(8), exactly 8 times larger. The
published magnetic/electric ratio constant 135/(19216 π¹⁰) is likewise kept
verbatim in ``PAPER`` mode, while ``REDERIVED`` divides the two rates
directly.
"""

from __future__ import annotations

import enum
import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

from . import spectral
from .errors import DivisionByZeroRate, DomainError, NoSolution, NumericalFailure, SingularMaterial
from .materials import DIAMOND_DENSITY, Material
from .quantities import (
    CODATA2018,
    HERTZ,
    KELVIN,
    KILOGRAM,
    METER,
    MOMENTUM_DIFFUSION,
    POLARIZABILITY,
    SCATTERING_CONSTANT,
    WIEN_B,
    Constants,
    Quantity,
    q,
)

__all__ = [
    "CoefficientMode",
    "Channel",
    "SphereConfig",
    "RateResult",
    "LongWavelengthReport",
    "magnetic_coefficient",
    "magnetic_polarizability",
    "electric_polarizability",
    "magnetic_factor",
    "magnetic_factor_from_permeability",
    "electric_factor",
    "dp2_per_dt_magnetic",
    "dp2_per_dt_from_polarizability",
    "gamma_magnetic",
    "gamma_electric",
    "gamma",
    "rate_ratio",
    "ratio_report",
    "temperature_budget",
    "long_wavelength_check",
    "PRINTED_RATIO_CONSTANT",
]

logger = logging.getLogger(__name__)

PRINTED_RATIO_CONSTANT = 135.0 / (19216.0 * math.pi**10)
ELECTRIC_CONSTANT = 512.0 * math.pi**7 / 135.0
LONG_WAVELENGTH_MIN_RATIO = 10.0
_GUARD_RTOL = 1e-12


class CoefficientMode(enum.Enum):
    PAPER = "paper"
    REDERIVED = "rederived"


class Channel(enum.Enum):
    MAGNETIC = "magnetic"
    ELECTRIC = "electric"


def _mode(mode) -> CoefficientMode:
    if mode is None:
        _default_mode_notice()
        return CoefficientMode.REDERIVED
    return CoefficientMode(mode.value if isinstance(mode, CoefficientMode) else mode)


@functools.lru_cache(maxsize=None)
def _default_mode_notice() -> None:
    logger.info(
        "coefficient mode defaults to 'rederived' (K = Γ(9)ζ(8) = %.6g); "
        "'paper' uses the published Γ(8)ζ(8) = %.6g",
        magnetic_coefficient(CoefficientMode.REDERIVED),
        magnetic_coefficient(CoefficientMode.PAPER),
    )


@functools.lru_cache(maxsize=None)
def magnetic_coefficient(mode: CoefficientMode) -> float:
    """Dimensionless spectral coefficient K of the magnetic rate."""
    mode = CoefficientMode(mode)
    if mode is CoefficientMode.PAPER:
        return spectral.gamma_int(8) * spectral.zeta(8)
    return spectral.thermal_spectral_integral(8).value


def _as_q(x, dim, name: str) -> Quantity:
    if isinstance(x, Quantity):
        if x.dim != dim:
            raise DomainError(f"{name} must have dimension [{dim}], got [{x.dim}]")
        return x
    if isinstance(x, bool) or not isinstance(x, Real):
        raise DomainError(f"{name} must be a number, got {x!r}")
    return q(float(x), dim)


@dataclass(frozen=True)
class SphereConfig:
    """Sphere radius (m), superposition size dx (m) and ambient temperature T (K).

    ``T`` may be ``None`` for inputs to :func:`temperature_budget`.
    """

    radius: float
    dx: float
    T: float | None = None

    def __post_init__(self):
        for name in ("radius", "dx", "T"):
            v = getattr(self, name)
            if v is None and name == "T":
                continue
            if isinstance(v, Quantity):
                v = v.value
            if isinstance(v, bool) or not isinstance(v, Real) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not self.radius > 0:
            raise DomainError(f"radius must be positive, got {self.radius}")
        if self.dx < 0:
            raise DomainError(f"dx must be nonnegative, got {self.dx}")
        if self.T is not None and self.T < 0:
            raise DomainError(f"T must be nonnegative, got {self.T}")

    @classmethod
    def from_mass(cls, mass: float, dx: float, T: float | None = None, density: float = DIAMOND_DENSITY):
        """Radius from mass and density: a = (3m / 4πρ)^(1/3)."""
        m = _as_q(mass, KILOGRAM, "mass")
        rho = _as_q(density, KILOGRAM / METER**3, "density")
        if not (m.value > 0 and rho.value > 0):
            raise DomainError("mass and density must be positive")
        a = (3.0 * m / (4.0 * math.pi * rho)) ** Fraction(1, 3)
        return cls(a.to(METER), dx, T)

    def with_T(self, T: float) -> SphereConfig:
        return SphereConfig(self.radius, self.dx, T)

    def _require_T(self) -> float:
        if self.T is None:
            raise DomainError("temperature T is required")
        return self.T


@dataclass(frozen=True)
class RateResult:
    """A decoherence rate with the intermediate quantities that produced it."""

    channel: Channel
    alpha: Quantity
    dp2_per_dt: Quantity
    Lambda: Quantity
    gamma: Quantity
    mode: CoefficientMode | None = None

    def as_dict(self) -> dict:
        def qd(x: Quantity) -> dict:
            return {"value": x.value, "unit": str(x.dim)}

        return {
            "channel": self.channel.value,
            "mode": self.mode.value if self.mode else None,
            "alpha": qd(self.alpha),
            "dp2_per_dt": qd(self.dp2_per_dt),
            "Lambda": qd(self.Lambda),
            "gamma": qd(self.gamma),
        }


def magnetic_factor(chi_v: float) -> float:
    """Clausius-Mossotti factor chi_v/(3 + chi_v); pole at chi_v = -3."""
    chi_v = float(chi_v)
    if chi_v == -3.0:
        raise SingularMaterial("chi_v = -3 is the Clausius-Mossotti pole")
    if math.isinf(chi_v):
        return 1.0
    return chi_v / (3.0 + chi_v)


def magnetic_factor_from_permeability(mu: float, const: Constants = CODATA2018) -> float:
    """(mu - mu0)/(mu + 2 mu0), the permeability form of the same factor."""
    mu0 = const.mu0.value
    if mu == -2.0 * mu0:
        raise SingularMaterial("mu = -2 mu0 is the Clausius-Mossotti pole")
    return (mu - mu0) / (mu + 2.0 * mu0)


def electric_factor(mat: Material) -> float:
    if not mat.epsilon_infinite and mat.epsilon == -2.0:
        raise SingularMaterial("epsilon = -2 is the Clausius-Mossotti pole")
    return mat.electric_factor


def magnetic_polarizability(a, chi_v: float, const: Constants = CODATA2018) -> Quantity:
    """alpha with m = alpha B for a uniformly magnetized sphere: (a³/mu0) chi_v/(3+chi_v)."""
    a = _as_q(a, METER, "radius")
    if not a.value > 0:
        raise DomainError("radius must be positive")
    f = magnetic_factor(chi_v)
    return a**3 / const.mu0 * f


def electric_polarizability(a, mat: Material, const: Constants = CODATA2018) -> Quantity:
    """4π eps0 a³ (eps-1)/(eps+2), with p = alpha E."""
    a = _as_q(a, METER, "radius")
    return 4.0 * math.pi * const.eps0 * a**3 * electric_factor(mat)


def _thermal_wavenumber(T: float, const: Constants) -> Quantity:
    return const.k_B * q(T, KELVIN) / (const.c * const.hbar)


def dp2_per_dt_magnetic(
    cfg: SphereConfig, mat: Material, mode: CoefficientMode | None = None, const: Constants = CODATA2018
) -> Quantity:
    """Momentum diffusion rate <Δp²>/Δt (kg² m² s⁻³) from thermal magnetic fluctuations."""
    mode = _mode(mode)
    T = cfg._require_T()
    f = magnetic_factor(mat.chi_v)
    a = q(cfg.radius, METER)
    K = magnetic_coefficient(mode)
    out = a**6 * const.hbar**2 * const.c / (9.0 * math.pi**3) * (f * f) * _thermal_wavenumber(T, const) ** 9 * K
    assert out.dim == MOMENTUM_DIFFUSION, out.dim
    return out


def dp2_per_dt_from_polarizability(
    alpha, T: float, mode: CoefficientMode | None = None, const: Constants = CODATA2018
) -> Quantity:
    """ħ² alpha² /(9π³ eps0² c¹²) ∫ω⁸(n²+n)dω, written in terms of alpha.

    Agrees with :func:`dp2_per_dt_magnetic` when c² eps0 mu0 = 1, i.e. to
    the accuracy of the CODATA constants (~1e-10).
    """
    mode = _mode(mode)
    alpha = _as_q(alpha, POLARIZABILITY, "alpha")
    if T < 0:
        raise DomainError("T must be nonnegative")
    omega_T = const.k_B * q(T, KELVIN) / const.hbar  # ∫dω ω⁸(...) = (k_BT/ħ)⁹ K
    out = const.hbar**2 * alpha**2 / (9.0 * math.pi**3 * const.eps0**2 * const.c**12) * omega_T**9
    out = out * magnetic_coefficient(mode)
    assert out.dim == MOMENTUM_DIFFUSION, out.dim
    return out


def gamma_magnetic(
    cfg: SphereConfig, mat: Material, mode: CoefficientMode | None = None, const: Constants = CODATA2018
) -> RateResult:
    mode = _mode(mode)
    T = cfg._require_T()
    f = magnetic_factor(mat.chi_v)
    a = q(cfg.radius, METER)
    dx = q(cfg.dx, METER)
    K = magnetic_coefficient(mode)
    alpha = magnetic_polarizability(a, mat.chi_v, const)
    dp2 = dp2_per_dt_magnetic(cfg, mat, mode, const)
    Lam = dp2 / (2.0 * const.hbar**2)
    g = a**6 * const.c / (18.0 * math.pi**3) * (f * f) * _thermal_wavenumber(T, const) ** 9 * K * dx**2
    assert Lam.dim == SCATTERING_CONSTANT and g.dim == HERTZ
    return RateResult(Channel.MAGNETIC, alpha, dp2, Lam, g, mode)


def gamma_electric(cfg: SphereConfig, mat: Material, const: Constants = CODATA2018) -> RateResult:
    T = cfg._require_T()
    f = electric_factor(mat)
    a = q(cfg.radius, METER)
    dx = q(cfg.dx, METER)
    Lam = ELECTRIC_CONSTANT * a**6 * const.c * _thermal_wavenumber(T, const) ** 9 * (f * f)
    dp2 = 2.0 * const.hbar**2 * Lam
    g = ELECTRIC_CONSTANT * a**6 * const.c * _thermal_wavenumber(T, const) ** 9 * (f * f) * dx**2
    alpha = electric_polarizability(a, mat, const)
    assert Lam.dim == SCATTERING_CONSTANT and g.dim == HERTZ and dp2.dim == MOMENTUM_DIFFUSION
    return RateResult(Channel.ELECTRIC, alpha, dp2, Lam, g, None)


def gamma(cfg: SphereConfig, mat: Material, channel, mode=None, const: Constants = CODATA2018) -> RateResult:
    """Dispatch on ``channel`` ("magnetic" or "electric")."""
    channel = Channel(channel.value if isinstance(channel, Channel) else channel)
    if channel is Channel.MAGNETIC:
        return gamma_magnetic(cfg, mat, mode, const)
    return gamma_electric(cfg, mat, const)


_RATIO_REFERENCE = SphereConfig(radius=1e-6, dx=1e-6, T=1.0)


def rate_ratio(
    mat: Material,
    mode: CoefficientMode | None = None,
    cfg: SphereConfig | None = None,
    const: Constants = CODATA2018,
) -> float:
    """gamma_B / gamma_E for ``mat``.

    ``REDERIVED`` divides the two rates evaluated at ``cfg`` (any common
    radius, temperature and dx; the result does not depend on them).
    ``PAPER`` returns 135/(19216 π¹⁰) |chi/(3+chi)|² |(eps+2)/(eps-1)|².
    """
    mode = _mode(mode)
    fe = electric_factor(mat)
    if fe == 0.0:
        raise DivisionByZeroRate(f"{mat.name}: epsilon = 1 gives a vanishing electric rate")
    fm = magnetic_factor(mat.chi_v)
    if mode is CoefficientMode.PAPER:
        return PRINTED_RATIO_CONSTANT * (fm * fm) / (fe * fe)
    cfg = cfg or _RATIO_REFERENCE
    if cfg.T is None or cfg.T == 0 or cfg.dx == 0:
        raise DomainError("ratio reference configuration needs T > 0 and dx > 0")
    gb = gamma_magnetic(cfg, mat, mode, const).gamma
    ge = gamma_electric(cfg, mat, const).gamma
    return float(gb / ge)


def ratio_report(mat: Material, const: Constants = CODATA2018) -> dict:
    """Both ratio conventions side by side, so the discrepancy is visible."""
    paper = rate_ratio(mat, CoefficientMode.PAPER, const=const)
    rederived = rate_ratio(mat, CoefficientMode.REDERIVED, const=const)
    direct_paper_k = rederived * magnetic_coefficient(CoefficientMode.PAPER) / magnetic_coefficient(
        CoefficientMode.REDERIVED
    )
    return {
        "material": mat.name,
        "paper_printed": paper,
        "rederived": rederived,
        "direct_quotient_with_paper_coefficient": direct_paper_k,
        "rederived_over_paper_printed": rederived / paper if paper else math.nan,
    }


def temperature_budget(
    cfg: SphereConfig,
    mat: Material,
    gamma_target: float,
    channel="electric",
    mode: CoefficientMode | None = None,
    const: Constants = CODATA2018,
) -> Quantity:
    """Largest ambient temperature keeping the chosen rate at or below ``gamma_target``.

    Both rates are C·T⁹ with C independent of T, so T_max = (gamma_target/C)^(1/9).
    The forward rate at T_max is re-evaluated as a guard.
    """
    gt = _as_q(gamma_target, HERTZ, "gamma_target")
    if not gt.value > 0:
        raise DomainError("gamma_target must be positive")
    if cfg.dx == 0:
        raise NoSolution("dx = 0 gives a vanishing rate at any temperature")
    channel = Channel(channel.value if isinstance(channel, Channel) else channel)
    if channel is Channel.MAGNETIC:
        mode = _mode(mode)
    unit_rate = gamma(cfg.with_T(1.0), mat, channel, mode, const).gamma
    if unit_rate.value == 0.0:
        raise NoSolution(f"{mat.name} has no {channel.value} response; any temperature satisfies the target")
    C = unit_rate / q(1.0, KELVIN) ** 9
    T_max = (gt / C) ** Fraction(1, 9)
    T_val = T_max.to(KELVIN)
    check = gamma(cfg.with_T(T_val), mat, channel, mode, const).gamma
    if abs(check.value / gt.value - 1.0) > _GUARD_RTOL:
        raise NumericalFailure(f"forward check at T_max={T_val:g} K missed target by {check.value / gt.value - 1:.2e}")
    return T_max


@dataclass(frozen=True)
class LongWavelengthReport:
    wavelength: Quantity
    ratio_radius: float
    ratio_dx: float
    radius_ok: bool
    dx_ok: bool
    threshold: float = LONG_WAVELENGTH_MIN_RATIO

    @property
    def passed(self) -> bool:
        return self.radius_ok and self.dx_ok

    def as_dict(self) -> dict:
        return {
            "thermal_wavelength": {"value": self.wavelength.value, "unit": str(self.wavelength.dim)},
            "ratio_radius": self.ratio_radius,
            "ratio_dx": self.ratio_dx,
            "radius_ok": self.radius_ok,
            "dx_ok": self.dx_ok,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def long_wavelength_check(cfg: SphereConfig, threshold: float = LONG_WAVELENGTH_MIN_RATIO) -> LongWavelengthReport:
    """Compare the Wien peak wavelength b/T with the radius and with dx."""
    T = cfg._require_T()
    if T == 0:
        raise DomainError("thermal wavelength is unbounded at T = 0")
    lam = WIEN_B / q(T, KELVIN)
    lam_m = lam.to(METER)
    r_a = lam_m / cfg.radius
    r_dx = lam_m / cfg.dx if cfg.dx > 0 else math.inf
    return LongWavelengthReport(lam, r_a, r_dx, r_a >= threshold, r_dx >= threshold, threshold)
