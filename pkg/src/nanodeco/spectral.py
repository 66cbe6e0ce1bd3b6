"""Bose-Einstein occupation, integer Gamma/zeta, and the thermal spectral integral.

The dimensionless integral

    I(s) = ∫_0^∞ x^s [n(x)^2 + n(x)] dx,   n(x) = 1/(e^x - 1),

fixes the temperature coefficient of the momentum diffusion rate. Because
n^2 + n = e^x/(e^x - 1)^2 = Σ_{m≥1} m e^{-mx}, termwise integration gives the
series form I(s) = Γ(s+1) ζ(s). Both routes are provided so one can check
the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate, special

from .errors import DomainError, NumericalFailure

__all__ = [
    "occupation",
    "gamma_int",
    "zeta",
    "SpectralIntegral",
    "thermal_spectral_integral",
    "bose_pair_weight",
    "sinc_kernel_integral",
]

X_LO = 1e-8
REL_TOL = 1e-10

# B_2, B_4, ..., B_12
_BERNOULLI_EVEN = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
)


def occupation(x):
    """Mean photon number 1/(e^x - 1) at reduced frequency ``x = ħω/k_BT``.

    Accepts scalars or arrays. ``x <= 0`` raises :class:`DomainError`.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("occupation requires x > 0")
    out = 1.0 / np.expm1(arr)
    return float(out) if out.ndim == 0 else out


def bose_pair_weight(x):
    """n(n+1) = e^x/(e^x-1)^2, evaluated without overflow for large x."""
    x = np.asarray(x, dtype=float)
    em = np.exp(-x)
    return em / (-np.expm1(-x)) ** 2


def gamma_int(k: int) -> float:
    """Γ(k) = (k-1)! for integer 1 <= k <= 171."""
    if isinstance(k, bool) or int(k) != k:
        raise DomainError(f"gamma_int needs an integer, got {k!r}")
    k = int(k)
    if not 1 <= k <= 171:
        raise DomainError(f"gamma_int defined for 1 <= k <= 171, got {k}")
    return float(math.factorial(k - 1))


def zeta(s: int) -> float:
    """Riemann ζ(s) for integer s >= 2.

    Direct partial sum up to M-1, then the tail Σ_{m>=M} m^{-s} from its
    leading integral M^{1-s}/(s-1) plus Euler-Maclaurin corrections through
    B_12, which puts the truncation error far below double precision.
    """
    if isinstance(s, bool) or int(s) != s:
        raise DomainError(f"zeta needs an integer argument, got {s!r}")
    s = int(s)
    if s < 2:
        raise DomainError(f"zeta(s) diverges or is out of scope for s = {s}")
    M = 32
    tail = M ** (1.0 - s) / (s - 1) + 0.5 * M ** (-float(s))
    rising = 1.0  # (s)_{2k-1}
    for k, b in enumerate(_BERNOULLI_EVEN, start=1):
        j = 2 * k - 1
        if k == 1:
            rising = float(s)
        else:
            rising *= (s + j - 2) * (s + j - 1)
        tail += float(b) / math.factorial(2 * k) * rising * M ** (-float(s) - j)
    head = math.fsum(m ** (-float(s)) for m in range(M - 1, 0, -1))
    return head + tail


@dataclass(frozen=True)
class SpectralIntegral:
    s: int
    value: float
    est_error: float
    method: str  # "quadrature" or "series"

    @property
    def rel_error(self) -> float:
        return self.est_error / self.value if self.value else math.inf


def _upper_tail_bound(s: int, x: float) -> float:
    # ∫_x^∞ t^s e^t/(e^t-1)^2 dt <= Γ(s+1, x)/(1-e^{-x})^2, Γ(s+1,x) closed form for integer s
    term, acc = 1.0, 1.0
    for j in range(1, s + 1):
        term *= (s - j + 1) / x
        acc += term
    return math.exp(-x) * x**s * acc / (-math.expm1(-x)) ** 2


def _choose_x_max(s: int) -> float:
    floor = 1e-16 * math.factorial(s)  # the integral is at least s!
    x = max(40.0, 2.0 * s)
    while _upper_tail_bound(s, x) >= floor:
        x += 5.0
    return x


def thermal_spectral_integral(s: int, method: str = "quadrature") -> SpectralIntegral:
    """∫_0^∞ x^s e^x/(e^x-1)^2 dx for integer s >= 2.

    ``method="quadrature"`` integrates adaptively (QUADPACK Gauss-Kronrod)
    over [1e-8, x_max]; the piece below 1e-8 is added analytically and the
    piece above x_max is bounded by an incomplete-Gamma estimate kept below
    1e-16 of the result. ``method="series"`` returns Γ(s+1)ζ(s).
    """
    if isinstance(s, bool) or int(s) != s or int(s) < 2:
        raise DomainError(f"thermal spectral integral diverges for s = {s!r} (need integer s >= 2)")
    s = int(s)
    if method == "series":
        val = gamma_int(s + 1) * zeta(s)
        return SpectralIntegral(s, val, 4.0 * np.finfo(float).eps * val, "series")
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    x_max = _choose_x_max(s)

    def f(x):
        return x**s * math.exp(-x) / (-math.expm1(-x)) ** 2

    # near-origin expansion: x^{s-2} - x^s/12 + ...
    low = X_LO ** (s - 1) / (s - 1)
    low_err = X_LO ** (s + 1) / (12.0 * (s + 1))

    pts = sorted({p for p in (1.0, float(s), 2.0 * s, 4.0 * s) if X_LO < p < x_max})
    val, err = integrate.quad(f, X_LO, x_max, points=pts, epsabs=0.0, epsrel=1e-13, limit=500)
    value = val + low
    est = err + low_err + _upper_tail_bound(s, x_max)
    if not est <= REL_TOL * value:
        raise NumericalFailure(f"spectral quadrature for s={s} reached only {est / value:.2e} relative")
    return SpectralIntegral(s, value, est, "quadrature")


def sinc_kernel_integral(half_width: float) -> float:
    """∫_{-L}^{L} sin^2(x)/x^2 dx for L = ``half_width`` > 0.

    Closed form 2[Si(2L) - sin^2(L)/L]; a Taylor series is used for tiny L
    where that difference cancels. Tends to π as L grows.
    """
    L = float(half_width)
    if not L > 0 or not math.isfinite(L):
        raise DomainError("half_width must be a positive finite number")
    if L < 1e-2:
        L2 = L * L
        return 2.0 * L * (1.0 - L2 / 9.0 + 2.0 * L2 * L2 / 225.0 - L2**3 / 2205.0)
    si, _ = special.sici(2.0 * L)
    return 2.0 * (float(si) - math.sin(L) ** 2 / L)
