"""Monte-Carlo momentum kicks and the dephasing they cause.

Each sample receives an independent zero-mean Gaussian kick of variance
2 D dt per step, realizing a drift-free Fokker-Planck diffusion in momentum.
For a superposition of two branches separated by dx, the accumulated
relative phase is p dx/ħ, and for Gaussian p

    |<exp(i p dx/ħ)>| = exp(-<p²> dx²/2ħ²) = exp(-(D dx²/ħ²) t),

so the visibility decays at Λ dx² with Λ = D/ħ².

Random numbers come from numpy's Philox4x64 counter-based generator seeded
with a 64-bit integer; identical arguments give bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quantities import CODATA2018, Constants

__all__ = [
    "RNG_ALGORITHM",
    "KickEnsemble",
    "CoherenceTrace",
    "make_rng",
    "simulate_diffusion",
    "coherence_decay",
    "fit_decay_rate",
]

RNG_ALGORITHM = "Philox4x64-10"
MIN_SAMPLES = 1000
FIT_FLOOR = 0.1


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed) & 0xFFFFFFFFFFFFFFFF))


def _check(D: float, dt: float, n_steps: int, n_samples: int) -> None:
    if not (np.isfinite(D) and D >= 0):
        raise DomainError("D must be finite and nonnegative")
    if not (np.isfinite(dt) and dt > 0):
        raise DomainError("dt must be positive")
    if int(n_steps) != n_steps or n_steps < 1:
        raise DomainError("n_steps must be a positive integer")
    if int(n_samples) != n_samples or n_samples < MIN_SAMPLES:
        raise DomainError(f"n_samples must be an integer >= {MIN_SAMPLES}")


@dataclass(frozen=True, eq=False)
class KickEnsemble:
    """Final momenta plus per-step ensemble statistics (index 0 is t = 0)."""

    n_samples: int
    seed: int
    D: float
    times: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    p: np.ndarray
    algorithm: str = RNG_ALGORITHM

    def variance_slope(self) -> float:
        """Least-squares slope of the sample variance against time (-> 2D)."""
        return float(np.polyfit(self.times, self.variance, 1)[0])


def simulate_diffusion(D: float, dt: float, n_steps: int, n_samples: int, seed: int) -> KickEnsemble:
    """Accumulate ``n_steps`` Gaussian kicks of variance 2 D dt on every sample."""
    _check(D, dt, n_steps, n_samples)
    rng = make_rng(seed)
    sigma = np.sqrt(2.0 * D * dt)
    p = np.zeros(int(n_samples))
    mean = np.zeros(n_steps + 1)
    var = np.zeros(n_steps + 1)
    for k in range(1, n_steps + 1):
        p += sigma * rng.standard_normal(p.size)
        mean[k] = p.mean()
        var[k] = p.var(ddof=1)
    times = dt * np.arange(n_steps + 1)
    return KickEnsemble(int(n_samples), int(seed), float(D), times, mean, var, p)


@dataclass(frozen=True, eq=False)
class CoherenceTrace:
    times: np.ndarray
    visibility: np.ndarray
    fitted_rate: float
    expected_rate: float  # D dx²/ħ²

    @property
    def relative_error(self) -> float:
        if self.expected_rate == 0:
            return abs(self.fitted_rate)
        return self.fitted_rate / self.expected_rate - 1.0


def fit_decay_rate(times: np.ndarray, visibility: np.ndarray, floor: float = FIT_FLOOR) -> float:
    """Rate from a straight-line fit of log V(t), using only points with V > floor."""
    times = np.asarray(times, float)
    vis = np.asarray(visibility, float)
    keep = vis > floor
    if keep.sum() < 2:
        raise DomainError("fewer than two visibility points above the fit floor")
    slope = np.polyfit(times[keep], np.log(vis[keep]), 1)[0]
    return float(-slope) + 0.0


def coherence_decay(
    D: float,
    dx: float,
    dt: float,
    n_steps: int,
    n_samples: int,
    seed: int,
    const: Constants = CODATA2018,
) -> CoherenceTrace:
    """Visibility |<exp(i p dx/ħ)>| of the kicked ensemble over time."""
    _check(D, dt, n_steps, n_samples)
    if not (np.isfinite(dx) and dx >= 0):
        raise DomainError("dx must be finite and nonnegative")
    hbar = const.hbar.value
    rng = make_rng(seed)
    sigma_phase = np.sqrt(2.0 * D * dt) * dx / hbar
    phase = np.zeros(int(n_samples))
    vis = np.ones(n_steps + 1)
    for k in range(1, n_steps + 1):
        phase += sigma_phase * rng.standard_normal(phase.size)
        vis[k] = abs(complex(np.cos(phase).mean(), np.sin(phase).mean()))
    times = dt * np.arange(n_steps + 1)
    rate = fit_decay_rate(times, vis)
    return CoherenceTrace(times, vis, rate, D * dx * dx / hbar**2)
