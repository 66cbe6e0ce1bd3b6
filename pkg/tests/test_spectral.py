import math

import mpmath
import numpy as np
import pytest

from nanodeco import spectral
from nanodeco.errors import DomainError


@pytest.mark.parametrize("s", range(2, 13))
def test_quadrature_agrees_with_series(s):
    quad = spectral.thermal_spectral_integral(s, "quadrature")
    series = spectral.thermal_spectral_integral(s, "series")
    assert quad.value == pytest.approx(series.value, rel=1e-12)
    assert quad.rel_error < 1e-10


@pytest.mark.parametrize("s", [2, 3, 4, 8, 12, 20])
def test_zeta_against_mpmath(s):
    assert spectral.zeta(s) == pytest.approx(float(mpmath.zeta(s)), rel=1e-15)


def test_zeta_even_closed_forms():
    assert spectral.zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert spectral.zeta(4) == pytest.approx(math.pi**4 / 90, rel=1e-15)


def test_integral_against_mpmath_quadrature():
    f = lambda x: x**8 * mpmath.exp(x) / (mpmath.exp(x) - 1) ** 2  # noqa: E731
    with mpmath.workdps(30):
        ref = float(mpmath.quad(f, [0, 1, 8, 30, mpmath.inf]))
    assert spectral.thermal_spectral_integral(8).value == pytest.approx(ref, rel=1e-12)


def test_gamma_int():
    assert spectral.gamma_int(1) == 1.0
    assert spectral.gamma_int(9) == 40320.0
    for bad in (0, 172, 2.5, True):
        with pytest.raises(DomainError):
            spectral.gamma_int(bad)


def test_domain_errors():
    for s in (1, 0, -3, 2.5):
        with pytest.raises(DomainError):
            spectral.thermal_spectral_integral(s)
    with pytest.raises(DomainError):
        spectral.zeta(1)
    with pytest.raises(DomainError):
        spectral.occupation(0.0)
    with pytest.raises(DomainError):
        spectral.occupation(np.array([1.0, -1.0]))


def test_occupation_and_pair_weight():
    x = np.array([1e-6, 0.1, 1.0, 10.0, 700.0])
    n = spectral.occupation(x)
    assert np.allclose(spectral.bose_pair_weight(x), n * n + n, rtol=1e-12)
    assert spectral.occupation(1.0) == pytest.approx(1 / (math.e - 1))
    assert np.isfinite(spectral.bose_pair_weight(1000.0))


@pytest.mark.parametrize("L", [1e-4, 5e-3, 0.3, 1.0, math.pi, 20.0])
def test_sinc_kernel_against_simpson(L):
    # composite Simpson on the even integrand, written out by hand
    n = 40_000
    x = np.linspace(0.0, L, n + 1)
    f = np.sinc(x / np.pi) ** 2
    h = L / n
    ref = 2.0 * h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum())
    assert spectral.sinc_kernel_integral(L) == pytest.approx(ref, rel=1e-10)


def test_sinc_kernel_tends_to_pi():
    assert spectral.sinc_kernel_integral(1e6) == pytest.approx(math.pi, abs=2e-6)
    with pytest.raises(DomainError):
        spectral.sinc_kernel_integral(0.0)
