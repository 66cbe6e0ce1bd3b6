"""Acceptance suite: one PASS/FAIL line per criterion, each at its stated tolerance."""

import math
import time

import numpy as np
import pytest

from nanodeco import cli, kicksim, modesum, rates, spectral
from nanodeco.materials import Material, builtin_db
from nanodeco.quantities import CODATA2018
from nanodeco.rates import Channel, CoefficientMode, SphereConfig

DB = builtin_db()
DIAMOND = DB["diamond"]
HBAR = CODATA2018.hbar.value
RED = CoefficientMode.REDERIVED
PAPER = CoefficientMode.PAPER


def rel(a, b):
    return abs(a / b - 1.0)


# 1 --------------------------------------------------------------------------


def test_c1_spectral_identity(verdict):
    t0 = time.perf_counter()
    quad = spectral.thermal_spectral_integral(8, method="quadrature").value
    elapsed = time.perf_counter() - t0
    series = spectral.gamma_int(9) * spectral.zeta(8)
    err = rel(quad, series)
    ok = err < 1e-9 and elapsed < 1.0
    verdict("C1 I(8) = Γ(9)ζ(8)", ok, f"rel.err {err:.2e}, {elapsed * 1e3:.1f} ms")
    assert ok


def test_c1_coefficient_modes_differ_by_eight(verdict):
    k_red = rates.magnetic_coefficient(RED)
    k_pap = rates.magnetic_coefficient(PAPER)
    ok = rel(k_red / k_pap, 8.0) < 1e-12
    verdict("C1 Γ(9)/Γ(8) discrepancy exposed by CoefficientMode", ok, f"K_rederived/K_paper = {k_red / k_pap:.15g}")
    assert ok


# 2 --------------------------------------------------------------------------


def test_c2_zeta8(verdict):
    err = rel(spectral.zeta(8), math.pi**8 / 9450.0)
    ok = err < 1e-12
    verdict("C2 ζ(8) = π⁸/9450", ok, f"rel.err {err:.2e}")
    assert ok


# 3 --------------------------------------------------------------------------

C3_T = 300.0
C3_CFG = SphereConfig(1e-6, 1e-6, C3_T)
C3_ALPHA = rates.magnetic_polarizability(C3_CFG.radius, DIAMOND.chi_v)


@pytest.fixture(scope="module")
def c3_run():
    t0 = time.perf_counter()
    kT = modesum.thermal_wavenumber(C3_T)
    lat = modesum.build_lattice(1.0, 40.0 * kT, 32)
    rep = modesum.linearity_scan(lat, C3_ALPHA, C3_T, modesum.default_dt_window(lat))
    return lat, rep, time.perf_counter() - t0


def test_c3_modesum_matches_rederived(verdict, c3_run):
    lat, rep, elapsed = c3_run
    target = rates.dp2_per_dt_magnetic(C3_CFG, DIAMOND, RED).value
    err = rel(rep.slope, target)
    ok = err < 0.01 and elapsed < 300
    verdict(
        "C3a mode sum → closed form (rederived), n=32, k_max=40 k_T",
        ok,
        f"slope/closed form = {rep.slope / target:.6g}, {elapsed:.2f} s",
    )
    assert ok


def test_c3_linearity(verdict, c3_run):
    _, rep, _ = c3_run
    ok = rep.r2 > 0.999
    verdict("C3b dp2 vs dt linear, n=32, k_max=40 k_T", ok, f"R² = {rep.r2:.6g}")
    assert ok


def test_c3_polarization_count(verdict, c3_run):
    lat, _, _ = c3_run
    lo, hi = lat.polarization_count()
    ok = abs(lo - 4.0) < 1e-12 and abs(hi - 4.0) < 1e-12
    verdict("C3c polarization count 2·2 = 4", ok, f"min {lo!r}, max {hi!r}")
    assert ok


# 4 --------------------------------------------------------------------------


@pytest.mark.parametrize(
    "var,start,stop,expected",
    [("T", 1.0, 10.0, 9.0), ("a", 1e-7, 1e-6, 6.0), ("dx", 1e-7, 1e-6, 2.0)],
)
def test_c4_scaling_laws(verdict, var, start, stop, expected):
    spec = cli.SweepSpec(var, start, stop, 11, "log")
    rows = cli.run_sweep(spec, SphereConfig(5e-7, 1e-6, 4.0), DIAMOND, RED)
    x = [r[var] for r in rows]
    sb = cli.loglog_slope(x, [r["gamma_magnetic"] for r in rows])
    se = cli.loglog_slope(x, [r["gamma_electric"] for r in rows])
    ok = abs(sb - expected) < 1e-6 and abs(se - expected) < 1e-6
    verdict(f"C4 log-log slope in {var} = {expected:g}", ok, f"γ_B {sb:.9f}, γ_E {se:.9f}")
    assert ok


# 5 --------------------------------------------------------------------------


def test_c5_internal_consistency(verdict):
    rng = np.random.default_rng(20240501)
    worst = 0.0
    for _ in range(1000):
        cfg = SphereConfig(10 ** rng.uniform(-8, -5), 10 ** rng.uniform(-9, -4), 10 ** rng.uniform(-1, 2.5))
        mat = Material("x", chi_v=-(10 ** rng.uniform(-6, -0.1)), epsilon=1.0 + 10 ** rng.uniform(-3, 2))
        channel = Channel.MAGNETIC if rng.random() < 0.5 else Channel.ELECTRIC
        mode = PAPER if rng.random() < 0.5 else RED
        r = rates.gamma(cfg, mat, channel, mode)
        lhs = r.gamma.value
        rhs = r.dp2_per_dt.value * cfg.dx**2 / (2.0 * HBAR**2)
        worst = max(worst, rel(lhs, rhs))
    ok = worst < 1e-12
    verdict("C5 γ = (dp²/dt) Δx²/(2ħ²) on 1000 random inputs", ok, f"max rel.err {worst:.2e}")
    assert ok


# 6 --------------------------------------------------------------------------


def test_c6_design_point(verdict):
    cfg = SphereConfig.from_mass(1e-14, 11e-6, 5.0, 3513.0)
    g = rates.gamma_electric(cfg, DIAMOND).gamma.value
    t_max = rates.temperature_budget(cfg, DIAMOND, 0.1, "electric").value
    lam = rates.long_wavelength_check(cfg).wavelength.value
    ok = g <= 0.1 and 5.0 / 3.0 <= t_max <= 15.0 and 1e-4 <= lam <= 1e-3
    verdict(
        "C6 design point (electric, diamond, 1e-14 kg, 11 μm, 5 K)",
        ok,
        f"γ_E = {g:.6g} s⁻¹, T_max = {t_max:.6g} K, λ_th = {lam:.6g} m",
    )
    assert ok


# 7 --------------------------------------------------------------------------


def test_c7_printed_ratio(verdict):
    r = rates.rate_ratio(DIAMOND, PAPER)
    ok = 1e-17 / 3 <= r <= 3e-17
    verdict("C7 printed-constant ratio for diamond ~ 1e-17", ok, f"{r:.6g}")
    assert ok


def test_c7_rederived_ratio_invariant(verdict):
    rng = np.random.default_rng(7)
    ref = rates.rate_ratio(DIAMOND, RED)
    worst = 0.0
    for _ in range(200):
        cfg = SphereConfig(10 ** rng.uniform(-8, -5), 10 ** rng.uniform(-9, -4), 10 ** rng.uniform(-1, 2.5))
        worst = max(worst, rel(rates.rate_ratio(DIAMOND, RED, cfg), ref))
    ok = worst < 1e-12
    verdict("C7 rederived ratio invariant under (a, T, Δx)", ok, f"max rel.dev {worst:.2e}")
    assert ok


def test_c7_discrepancy_reported(verdict):
    rep = rates.ratio_report(DIAMOND)
    shown = {"paper_printed", "rederived", "rederived_over_paper_printed"} <= rep.keys()
    ok = shown and rep["rederived_over_paper_printed"] > 1.0
    verdict(
        "C7 rederived vs printed ratio discrepancy reported",
        ok,
        f"rederived {rep['rederived']:.6g} / printed {rep['paper_printed']:.6g} = {rep['rederived_over_paper_printed']:.6g}",
    )
    assert ok


# 8 --------------------------------------------------------------------------


def test_c8_variance_slope(verdict):
    D = 2.5e-50
    ens = kicksim.simulate_diffusion(D, 1e-3, 50, 100_000, seed=11)
    err = rel(ens.variance_slope(), 2 * D)
    ok = err < 0.05
    verdict("C8 variance slope = 2D (1e5 samples)", ok, f"rel.err {err:.4f}")
    assert ok


def test_c8_coherence_rate(verdict):
    dx = 1e-6
    D = HBAR**2 / dx**2
    tr = kicksim.coherence_decay(D, dx, 0.05, 40, 1_000_000, seed=3)
    err = abs(tr.relative_error)
    ok = err < 0.05
    verdict("C8 coherence decay rate = ΛΔx² (1e6 samples)", ok, f"rel.err {err:.4f}")
    assert ok


def test_c8_zero_dx_and_determinism(verdict):
    tr = kicksim.coherence_decay(1e-50, 0.0, 0.1, 20, 2000, seed=5)
    flat = bool(np.all(tr.visibility == 1.0))
    a = kicksim.simulate_diffusion(1e-50, 0.1, 20, 5000, seed=99)
    b = kicksim.simulate_diffusion(1e-50, 0.1, 20, 5000, seed=99)
    same = a.p.tobytes() == b.p.tobytes() and a.variance.tobytes() == b.variance.tobytes()
    ok = flat and same
    verdict("C8 Δx = 0 gives V ≡ 1; fixed seed is bit-identical", ok, f"V≡1 {flat}, identical {same}")
    assert ok


# 9 --------------------------------------------------------------------------


def test_c9_zero_limits(verdict):
    base = SphereConfig(1e-6, 1e-6, 5.0)
    cases = {
        "T=0 magnetic": rates.gamma_magnetic(base.with_T(0.0), DIAMOND, RED),
        "T=0 electric": rates.gamma_electric(base.with_T(0.0), DIAMOND),
        "χ_v=0": rates.gamma_magnetic(base, Material("m", chi_v=0.0, epsilon=5.7), RED),
        "ε=1": rates.gamma_electric(base, Material("e", chi_v=-1e-5, epsilon=1.0)),
        "Δx=0 magnetic": rates.gamma_magnetic(SphereConfig(1e-6, 0.0, 5.0), DIAMOND, RED),
        "Δx=0 electric": rates.gamma_electric(SphereConfig(1e-6, 0.0, 5.0), DIAMOND),
    }
    bad = [k for k, r in cases.items() if r.gamma.value != 0.0]
    ok = not bad
    verdict("C9 zero limits give exactly zero rate", ok, "all exact zeros" if ok else f"nonzero: {bad}")
    assert ok
