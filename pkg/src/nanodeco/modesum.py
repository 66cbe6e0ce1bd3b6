"""Discrete-mode evaluation of the momentum variance of a magnetizable sphere.

The thermal field is expanded on a finite cubic grid of wavevectors, each
carrying two explicit transverse polarizations. For an impulse
Δp_i = alpha ∫ B_j ∂_i B_j dt accumulated over dt, the thermal expectation is
the double sum

    <Δp_i²> = 4 alpha² Σ_{k1 λ1} Σ_{k2 λ2} (ħ/2 eps0 ω2 V)(ħ/2 eps0 ω1 V) k1_i²
              · sin²((ω1-ω2) dt/2)/(ω1-ω2)²
              · [(n2+1) n1 + (n1+1) n2]
              · |k2 × e2|² |k1 × e1|²

and <Δp²> is the average over i. Anomalous pairings (<aa>, <a†a†>) vanish
in a thermal state and are not summed.

Each grid point stands for V h³/(2π)³ box modes (h = grid spacing), so the
quantization volume cancels and the result depends on the grid alone.

The summand depends on a mode only through |k| and k_i², so modes sitting
on the same shell |k|² are aggregated exactly before the double sum;
``method="pairs"`` performs the literal mode-by-mode sum instead.

Useful regime: the grid reproduces continuum behaviour only for
dt < 2π/(c h) (the lattice revival time), while the variance grows linearly
only for dt ≫ ħ/k_BT. A grid spacing well below k_BT/ħc is needed for the
two to overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import spectral
from .errors import DomainError
from .quantities import (
    CODATA2018,
    KELVIN,
    METER,
    MOMENTUM_DIFFUSION,
    MOMENTUM_SQ,
    POLARIZABILITY,
    SECOND,
    Constants,
    Quantity,
    q,
)

__all__ = [
    "ModeLattice",
    "ModeSumResult",
    "LinearityReport",
    "ConvergenceRow",
    "build_lattice",
    "thermal_wavenumber",
    "thermal_occupations",
    "dp2_modesum",
    "dp2_curve",
    "linearity_scan",
    "revival_time",
    "default_dt_window",
    "dp2_per_dt_continuum",
    "convergence_study",
    "DEFAULT_KMAX_THERMAL",
]

DEFAULT_KMAX_THERMAL = 20.0
_CHUNK = 1024


@dataclass(frozen=True, eq=False)
class ModeLattice:
    """Cell-centred cubic k-grid inside the sphere |k| <= k_max.

    Arrays are per mode: ``k`` (N, 3) in 1/m, ``pol`` (N, 2, 3) unit
    polarizations, ``omega`` (N,) in 1/s and ``shell`` (N,) the integer
    Σ(2 i_j + 1 - n)² that labels exactly degenerate |k|.
    """

    V: float
    k_max: float
    n_per_axis: int
    spacing: float
    k: np.ndarray
    pol: np.ndarray
    omega: np.ndarray
    shell: np.ndarray
    c: float

    @property
    def n_modes(self) -> int:
        return len(self.omega)

    @property
    def weight(self) -> float:
        """Box modes represented by one grid point, V h³/(2π)³."""
        return self.V * self.spacing**3 / (2.0 * math.pi) ** 3

    def polarization_sums(self) -> np.ndarray:
        """Σ_λ |k × e_λ|² / |k|² per mode (2 for two transverse unit vectors)."""
        cross = np.cross(self.k[:, None, :], self.pol)
        return (cross**2).sum(axis=(1, 2)) / (self.k**2).sum(axis=1)

    def polarization_count(self) -> tuple[float, float]:
        """Range of (Σ_λ1 |k1×e|²/k1²)(Σ_λ2 |k2×e|²/k2²) over all mode pairs; both ends are 4."""
        p = self.polarization_sums()
        return float(p.min() ** 2), float(p.max() ** 2)

    def orthonormality_error(self) -> float:
        """Largest deviation from e_a·e_b = δ_ab and e·k̂ = 0 over the grid."""
        gram = np.einsum("nai,nbi->nab", self.pol, self.pol)
        err = np.abs(gram - np.eye(2)).max()
        khat = self.k / np.linalg.norm(self.k, axis=1, keepdims=True)
        trans = np.abs(np.einsum("nai,ni->na", self.pol, khat)).max()
        return float(max(err, trans))


def _transverse_pair(k: np.ndarray) -> np.ndarray:
    khat = k / np.linalg.norm(k, axis=1, keepdims=True)
    # reference axis: the one least aligned with k
    ref = np.zeros_like(khat)
    ref[np.arange(len(k)), np.argmin(np.abs(khat), axis=1)] = 1.0
    e1 = np.cross(ref, khat)
    e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
    e2 = np.cross(khat, e1)
    return np.stack([e1, e2], axis=1)


def build_lattice(V: float, k_max: float, n_per_axis: int, const: Constants = CODATA2018) -> ModeLattice:
    """Grid k_j = (2 i_j + 1 - n) h/2 with h = 2 k_max/n, cut to |k| <= k_max.

    The cell-centred offset keeps k = 0 off the grid for even n; for odd n the
    origin is dropped explicitly.
    """
    if isinstance(n_per_axis, bool) or int(n_per_axis) != n_per_axis:
        raise DomainError("n_per_axis must be an integer")
    n = int(n_per_axis)
    if not (V > 0 and math.isfinite(V)):
        raise DomainError("V must be positive")
    if not (k_max > 0 and math.isfinite(k_max)):
        raise DomainError("k_max must be positive")
    if n < 2:
        raise DomainError("n_per_axis must be >= 2")
    h = 2.0 * k_max / n
    idx = 2 * np.arange(n) + 1 - n
    I, J, L = np.meshgrid(idx, idx, idx, indexing="ij")
    I, J, L = I.ravel(), J.ravel(), L.ravel()
    shell = I * I + J * J + L * L
    keep = (shell > 0) & (shell <= n * n)
    I, J, L, shell = I[keep], J[keep], L[keep], shell[keep]
    k = np.stack([I, J, L], axis=1) * (h / 2.0)
    c = const.c.value
    omega = c * (h / 2.0) * np.sqrt(shell.astype(float))
    return ModeLattice(float(V), float(k_max), n, h, k, _transverse_pair(k), omega, shell.astype(np.int64), c)


def thermal_wavenumber(T: float, const: Constants = CODATA2018) -> float:
    """k_B T/(ħ c) in 1/m."""
    return (const.k_B * q(T, KELVIN) / (const.hbar * const.c)).to(METER**-1)


def thermal_occupations(omega: np.ndarray, T: float, const: Constants = CODATA2018) -> np.ndarray:
    """Bose-Einstein n(ω) per mode; identically zero at T = 0."""
    omega = np.asarray(omega, dtype=float)
    if T < 0:
        raise DomainError("T must be nonnegative")
    if T == 0:
        return np.zeros_like(omega)
    x = const.hbar.value * omega / (const.k_B.value * T)
    return spectral.occupation(x)


@dataclass(frozen=True)
class ModeSumResult:
    dp2: Quantity
    dt: Quantity
    dp2_per_dt: Quantity
    components: tuple[float, float, float]
    n_modes: int
    n_shells: int
    n_per_axis: int
    k_max: float

    def as_dict(self) -> dict:
        return {
            "dp2": self.dp2.value,
            "dt": self.dt.value,
            "dp2_per_dt": self.dp2_per_dt.value,
            "components": list(self.components),
            "n_modes": self.n_modes,
            "n_shells": self.n_shells,
            "n_per_axis": self.n_per_axis,
            "k_max": self.k_max,
        }


def _alpha_value(alpha) -> float:
    if isinstance(alpha, Quantity):
        return alpha.to(POLARIZABILITY)
    return float(alpha)


def _grouped_factors(lat: ModeLattice):
    """Shell frequencies with exactly aggregated per-shell weights.

    Returns (omega_s, A_s (S, 3), B_s (S,)) where
    A_i = Σ_modes k_i² Π / ω and B = Σ_modes Π / ω, Π = Σ_λ |k × e_λ|².
    """
    cross = np.cross(lat.k[:, None, :], lat.pol)
    Pi = (cross**2).sum(axis=(1, 2))
    a_mode = lat.k**2 * (Pi / lat.omega)[:, None]
    b_mode = Pi / lat.omega
    shells, inv = np.unique(lat.shell, return_inverse=True)
    S = len(shells)
    A = np.zeros((S, 3))
    for i in range(3):
        A[:, i] = np.bincount(inv, weights=a_mode[:, i], minlength=S)
    B = np.bincount(inv, weights=b_mode, minlength=S)
    omega_s = np.zeros(S)
    omega_s[inv] = lat.omega
    return omega_s, A, B


def _kernel(d: np.ndarray, dt: float) -> np.ndarray:
    # sin²(d dt/2)/d², with the exact limit (dt/2)² on the diagonal
    zero = d == 0.0
    safe = np.where(zero, 1.0, d)
    return np.where(zero, 0.25 * dt * dt, np.sin(0.5 * d * dt) ** 2 / safe**2)


def _double_sum(w1, a1, n1, w2, b2, n2, dts) -> np.ndarray:
    """Σ_{1,2} a1_i b2 K(ω1-ω2) [(n2+1)n1 + (n1+1)n2] for every dt -> (len(dts), 3)."""
    out = np.zeros((len(dts), 3))
    for s in range(0, len(w1), _CHUNK):
        sl = slice(s, s + _CHUNK)
        d = w1[sl, None] - w2[None, :]
        P = (n2[None, :] + 1.0) * n1[sl, None] + (n1[sl, None] + 1.0) * n2[None, :]
        base = P * b2[None, :]
        for j, dt in enumerate(dts):
            inner = (_kernel(d, dt) * base).sum(axis=1)
            out[j] += inner @ a1[sl]
    return out


def dp2_curve(lat: ModeLattice, alpha, T: float, dts, method: str = "shells", const: Constants = CODATA2018) -> np.ndarray:
    """Per-component <Δp_i²> (kg² m² s⁻²) for each dt, shape (len(dts), 3)."""
    dts = np.atleast_1d(np.asarray(dts, dtype=float))
    if np.any(~(dts > 0)):
        raise DomainError("dt must be positive")
    if T < 0:
        raise DomainError("T must be nonnegative")
    alpha = _alpha_value(alpha)
    pref = 4.0 * alpha**2 * (const.hbar.value / (2.0 * const.eps0.value * lat.V)) ** 2 * lat.weight**2
    if T == 0 or alpha == 0.0:
        return np.zeros((len(dts), 3))
    if method == "shells":
        w, A, B = _grouped_factors(lat)
        n = thermal_occupations(w, T, const)
        S = _double_sum(w, A, n, w, B, n, dts)
    elif method == "pairs":
        cross = np.cross(lat.k[:, None, :], lat.pol)
        Pi = (cross**2).sum(axis=(1, 2))
        a = lat.k**2 * (Pi / lat.omega)[:, None]
        b = Pi / lat.omega
        n = thermal_occupations(lat.omega, T, const)
        S = _double_sum(lat.omega, a, n, lat.omega, b, n, dts)
    else:
        raise ValueError(f"unknown method {method!r}")
    return pref * S


def dp2_modesum(lat: ModeLattice, alpha, T: float, dt: float, method: str = "shells", const: Constants = CODATA2018) -> ModeSumResult:
    """Thermal <Δp²> accumulated over ``dt`` on the lattice."""
    if not dt > 0:
        raise DomainError("dt must be positive")
    comps = dp2_curve(lat, alpha, T, [dt], method, const)[0]
    dp2 = q(float(comps.mean()), MOMENTUM_SQ)
    dtq = q(dt, SECOND)
    return ModeSumResult(
        dp2=dp2,
        dt=dtq,
        dp2_per_dt=dp2 / dtq,
        components=tuple(float(c) for c in comps),
        n_modes=lat.n_modes,
        n_shells=len(np.unique(lat.shell)),
        n_per_axis=lat.n_per_axis,
        k_max=lat.k_max,
    )


@dataclass(frozen=True)
class LinearityReport:
    slope: float  # kg² m² s⁻³
    intercept: float
    r2: float
    dt: tuple[float, ...]
    dp2: tuple[float, ...]

    @property
    def slope_q(self) -> Quantity:
        return q(self.slope, MOMENTUM_DIFFUSION)


def linearity_scan(lat: ModeLattice, alpha, T: float, dt_list, const: Constants = CODATA2018) -> LinearityReport:
    """Least-squares line through <Δp²>(dt); the slope is the diffusion rate 2D."""
    dts = np.asarray(dt_list, dtype=float)
    if dts.ndim != 1 or len(dts) < 3:
        raise DomainError("dt_list needs at least 3 values")
    if np.any(~(dts > 0)) or np.any(np.diff(dts) <= 0):
        raise DomainError("dt_list must be positive and strictly increasing")
    y = dp2_curve(lat, alpha, T, dts, const=const).mean(axis=1)
    slope, intercept = np.polyfit(dts, y, 1)
    resid = y - (slope * dts + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    return LinearityReport(float(slope), float(intercept), r2, tuple(dts), tuple(y))


def revival_time(lat: ModeLattice) -> float:
    """2π/(c h): beyond this the grid no longer mimics a continuum."""
    return 2.0 * math.pi / (lat.c * lat.spacing)


def default_dt_window(lat: ModeLattice, points: int = 31, lo: float = 0.3, hi: float = 0.9) -> np.ndarray:
    """Evenly spaced dt in [lo, hi] x the revival time."""
    tr = revival_time(lat)
    return np.linspace(lo * tr, hi * tr, points)


def dp2_per_dt_continuum(alpha, T: float, x_max: float = math.inf, const: Constants = CODATA2018) -> Quantity:
    """Long-time slope of the mode sum in the continuum limit.

    With Σ_k -> V/(2π)³ ∫d³k, Σ_λ|k×e|² = 2k², the component average
    k_i² -> k²/3 and ∫dω2 sin²/(ω1-ω2)² -> π dt/2, the double sum reduces to

        ħ² alpha² /(3π³ eps0² c¹²) ∫_0^{ω_max} ω⁸ [n² + n] dω.

    ``x_max`` truncates the frequency integral at ħω/k_BT = x_max (the
    grid cutoff); the default integrates to infinity.
    """
    alpha_q = alpha if isinstance(alpha, Quantity) else q(float(alpha), POLARIZABILITY)
    if T < 0:
        raise DomainError("T must be nonnegative")
    if T == 0:
        return q(0.0, MOMENTUM_DIFFUSION)
    if math.isinf(x_max):
        I = spectral.thermal_spectral_integral(8).value
    else:
        I, _ = integrate.quad(lambda x: x**8 * spectral.bose_pair_weight(x), 0.0, x_max, epsabs=0, epsrel=1e-12, limit=200)
    omega_T = const.k_B * q(T, KELVIN) / const.hbar
    out = const.hbar**2 * alpha_q**2 / (3.0 * math.pi**3 * const.eps0**2 * const.c**12) * omega_T**9 * I
    assert out.dim == MOMENTUM_DIFFUSION
    return out


@dataclass(frozen=True)
class ConvergenceRow:
    n_per_axis: int
    k_max: float
    n_modes: int
    n_shells: int
    slope: float
    r2: float
    dt_lo: float
    dt_hi: float
    polarization_count_min: float
    polarization_count_max: float
    isotropy_spread: float


def convergence_study(
    alpha,
    T: float,
    n_list=(16, 24, 32),
    k_max_thermal: float = DEFAULT_KMAX_THERMAL,
    V: float = 1.0,
    dt_list=None,
    points: int = 31,
    const: Constants = CODATA2018,
) -> list[ConvergenceRow]:
    """Linearity-scan slope on successively finer grids at fixed cutoff.

    ``k_max_thermal`` is the cutoff in units of k_BT/(ħc). Without an explicit
    ``dt_list`` each grid uses its own :func:`default_dt_window`.
    """
    if T <= 0:
        raise DomainError("convergence study needs T > 0")
    kT = thermal_wavenumber(T, const)
    rows = []
    for n in n_list:
        lat = build_lattice(V, k_max_thermal * kT, n, const)
        dts = default_dt_window(lat, points) if dt_list is None else np.asarray(dt_list, float)
        rep = linearity_scan(lat, alpha, T, dts, const)
        comps = dp2_curve(lat, alpha, T, [dts[-1]], const=const)[0]
        spread = float((comps.max() - comps.min()) / abs(comps.mean())) if comps.mean() else 0.0
        lo, hi = lat.polarization_count()
        rows.append(
            ConvergenceRow(
                n_per_axis=n,
                k_max=lat.k_max,
                n_modes=lat.n_modes,
                n_shells=len(np.unique(lat.shell)),
                slope=rep.slope,
                r2=rep.r2,
                dt_lo=float(dts[0]),
                dt_hi=float(dts[-1]),
                polarization_count_min=lo,
                polarization_count_max=hi,
                isotropy_spread=spread,
            )
        )
    return rows
