import logging
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nanodeco import rates
from nanodeco.errors import DivisionByZeroRate, DomainError, NoSolution, SingularMaterial
from nanodeco.materials import Material, builtin_db
from nanodeco.quantities import CODATA2018
from nanodeco.rates import Channel, CoefficientMode, SphereConfig

DB = builtin_db()
DIAMOND = DB["diamond"]
SC = DB["superconductor"]
HBAR, KB, C, EPS0, MU0 = (getattr(CODATA2018, n).value for n in ("hbar", "k_B", "c", "eps0", "mu0"))
PAPER = CoefficientMode.PAPER
RED = CoefficientMode.REDERIVED


def hand_gamma_b(a, chi, T, dx, K):
    f = chi / (3 + chi)
    return a**6 * C / (18 * math.pi**3) * f * f * (KB * T / (HBAR * C)) ** 9 * K * dx * dx


def hand_gamma_e(a, eps, T, dx):
    f = (eps - 1) / (eps + 2)
    return 512 * math.pi**7 * a**6 * C / 135 * (KB * T / (HBAR * C)) ** 9 * f * f * dx * dx


def test_coefficients():
    assert rates.magnetic_coefficient(PAPER) == pytest.approx(5040 * math.pi**8 / 9450, rel=1e-14)
    assert rates.magnetic_coefficient(RED) == pytest.approx(40320 * math.pi**8 / 9450, rel=1e-12)


def test_magnetic_rate_hand_oracle():
    cfg = SphereConfig(1e-6, 1e-6, 300.0)
    for mode in (PAPER, RED):
        K = rates.magnetic_coefficient(mode)
        r = rates.gamma_magnetic(cfg, DIAMOND, mode)
        assert r.gamma.value == pytest.approx(hand_gamma_b(1e-6, -2.2e-5, 300.0, 1e-6, K), rel=1e-12)
    assert rates.gamma_magnetic(cfg, DIAMOND, PAPER).gamma.value == pytest.approx(1.66217e-3, rel=1e-5)


def test_electric_rate_hand_oracle():
    cfg = SphereConfig(8.79e-7, 11e-6, 5.0)
    r = rates.gamma_electric(cfg, DIAMOND)
    assert r.gamma.value == pytest.approx(hand_gamma_e(8.79e-7, 5.7, 5.0, 11e-6), rel=1e-12)
    assert r.mode is None


def test_polarizabilities():
    a = 1e-6
    am = rates.magnetic_polarizability(a, DIAMOND.chi_v)
    assert am.value == pytest.approx(a**3 / MU0 * (-2.2e-5 / (3 - 2.2e-5)), rel=1e-14)
    ae = rates.electric_polarizability(a, DIAMOND)
    assert ae.value == pytest.approx(4 * math.pi * EPS0 * a**3 * 4.7 / 7.7, rel=1e-14)


def test_polarizability_route_matches_closed_form():
    cfg = SphereConfig(3e-7, 1e-6, 12.0)
    alpha = rates.magnetic_polarizability(cfg.radius, DIAMOND.chi_v)
    for mode in (PAPER, RED):
        a = rates.dp2_per_dt_from_polarizability(alpha, cfg.T, mode).value
        b = rates.dp2_per_dt_magnetic(cfg, DIAMOND, mode).value
        assert a == pytest.approx(b, rel=1e-12)


def test_magnetic_factor_forms():
    assert rates.magnetic_factor(0.0) == 0.0
    assert rates.magnetic_factor(math.inf) == 1.0
    with pytest.raises(SingularMaterial):
        rates.magnetic_factor(-3.0)
    mu = MU0 * (1 - 2.2e-5)
    assert rates.magnetic_factor_from_permeability(mu) == pytest.approx(rates.magnetic_factor(-2.2e-5), rel=1e-9)
    assert rates.electric_factor(SC) == 1.0


def test_from_mass():
    cfg = SphereConfig.from_mass(1e-14, 11e-6, 5.0)
    assert cfg.radius == pytest.approx((3e-14 / (4 * math.pi * 3513)) ** (1 / 3), rel=1e-14)
    assert cfg.radius == pytest.approx(8.7918e-7, rel=1e-4)
    with pytest.raises(DomainError):
        SphereConfig.from_mass(-1.0, 1e-6)


def test_config_validation():
    for args in [(0.0, 1e-6, 1.0), (1e-6, -1e-6, 1.0), (1e-6, 1e-6, -1.0), (math.nan, 1e-6, 1.0)]:
        with pytest.raises(DomainError):
            SphereConfig(*args)
    with pytest.raises(DomainError):
        rates.gamma_electric(SphereConfig(1e-6, 1e-6), DIAMOND)


def test_default_mode_logs_notice(caplog):
    rates._default_mode_notice.cache_clear()
    with caplog.at_level(logging.INFO, logger="nanodeco.rates"):
        r = rates.gamma_magnetic(SphereConfig(1e-6, 1e-6, 4.0), DIAMOND)
        rates.gamma_magnetic(SphereConfig(1e-6, 1e-6, 4.0), DIAMOND)
    assert r.mode is RED
    notices = [rec for rec in caplog.records if "rederived" in rec.getMessage()]
    assert len(notices) == 1


def test_ratio_modes():
    paper = rates.rate_ratio(DIAMOND, PAPER)
    assert paper == pytest.approx(
        rates.PRINTED_RATIO_CONSTANT * (2.2e-5 / (3 - 2.2e-5)) ** 2 / (4.7 / 7.7) ** 2, rel=1e-12
    )
    assert rates.rate_ratio(SC, PAPER) == pytest.approx(1.875e-8, rel=1e-3)
    cfg = SphereConfig(2e-7, 3e-6, 7.0)
    direct = rates.gamma_magnetic(cfg, DIAMOND, RED).gamma.value / rates.gamma_electric(cfg, DIAMOND).gamma.value
    assert rates.rate_ratio(DIAMOND, RED) == pytest.approx(direct, rel=1e-12)
    with pytest.raises(DivisionByZeroRate):
        rates.rate_ratio(Material("x", chi_v=-1e-5, epsilon=1.0), RED)


def test_ratio_report_keeps_both():
    rep = rates.ratio_report(DIAMOND)
    assert rep["rederived"] / rep["paper_printed"] == pytest.approx(rep["rederived_over_paper_printed"])
    assert rep["direct_quotient_with_paper_coefficient"] == pytest.approx(rep["rederived"] / 8)


def test_budget_scaling_and_errors():
    cfg = SphereConfig.from_mass(1e-14, 11e-6)
    t1 = rates.temperature_budget(cfg, DIAMOND, 0.1).value
    t2 = rates.temperature_budget(cfg, DIAMOND, 0.1 * 512).value
    assert t2 / t1 == pytest.approx(2.0, rel=1e-12)
    g = rates.gamma_electric(cfg.with_T(t1), DIAMOND).gamma.value
    assert g == pytest.approx(0.1, rel=1e-12)
    with pytest.raises(NoSolution):
        rates.temperature_budget(cfg, DB["vacuum"], 0.1, "magnetic", RED)
    with pytest.raises(NoSolution):
        rates.temperature_budget(SphereConfig(1e-6, 0.0), DIAMOND, 0.1)
    with pytest.raises(DomainError):
        rates.temperature_budget(cfg, DIAMOND, 0.0)


def test_long_wavelength_check():
    rep = rates.long_wavelength_check(SphereConfig(8.79e-7, 11e-6, 5.0))
    assert rep.wavelength.value == pytest.approx(2.897771955e-3 / 5.0)
    assert rep.passed
    assert not rates.long_wavelength_check(SphereConfig(1e-3, 1e-6, 300.0)).passed
    with pytest.raises(DomainError):
        rates.long_wavelength_check(SphereConfig(1e-6, 1e-6, 0.0))


pos = st.floats(0.1, 10.0)


@settings(max_examples=200, deadline=None)
@given(pos, pos, pos, st.sampled_from(list(Channel)))
def test_scaling_law_property(sT, sa, sdx, channel):
    base = SphereConfig(1e-7, 1e-6, 3.0)
    scaled = SphereConfig(1e-7 * sa, 1e-6 * sdx, 3.0 * sT)
    g0 = rates.gamma(base, DIAMOND, channel, RED).gamma.value
    g1 = rates.gamma(scaled, DIAMOND, channel, RED).gamma.value
    assert g1 / g0 == pytest.approx(sT**9 * sa**6 * sdx**2, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.floats(-0.99, 10.0), st.floats(1.0, 100.0))
def test_material_dependence_is_clausius_mossotti_squared(chi, eps):
    cfg = SphereConfig(1e-7, 1e-6, 3.0)
    mat = Material("m", chi_v=chi, epsilon=eps)
    gb = rates.gamma_magnetic(cfg, mat, PAPER).gamma.value
    ge = rates.gamma_electric(cfg, mat).gamma.value
    assert gb == pytest.approx(hand_gamma_b(1e-7, chi, 3.0, 1e-6, rates.magnetic_coefficient(PAPER)), rel=1e-12, abs=0)
    assert ge == pytest.approx(hand_gamma_e(1e-7, eps, 3.0, 1e-6), rel=1e-12, abs=0)
