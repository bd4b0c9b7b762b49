import math

import numpy as np
import pytest

from cpb_optomech import (
    BiasPoint,
    CircuitParams,
    cavity_frequency,
    circuit_couplings,
    direct_coupling,
    effective_capacitance,
    effective_ck_hamiltonian,
    radiation_pressure_coupling,
    validate,
)
from cpb_optomech.circuit import _c_tot
from cpb_optomech.errors import (
    NonAnalyticPoint,
    NotInPureCkRegime,
    SeriesDivergence,
)
from conftest import TWO_PI, make_vp
from oracles import fd_gck, fd_grp


@pytest.fixture(scope="module")
def vp():
    return make_vp(30.0, 7.5)


def _ej0(vp):
    return validate(CircuitParams(**{**vp.raw.__dict__, "e_j1": 0.0, "e_j2": 0.0}))


def test_ceff_pure_parabola(vp):
    # E_J = 0: curvature 8 E_C exactly, so C_eff = C_g1 (C_J - C_g1) / C_Sigma1
    vp0 = _ej0(vp)
    eff = effective_capacitance(vp0, BiasPoint(0.25, 0.0))
    expect = vp0.c_g10 * (vp0.c_j - vp0.c_g10) / vp0.c_sigma1
    assert eff.value == pytest.approx(expect, rel=1e-9)


def test_ceff_approaches_geometric_gate():
    # C_g1 << C_J and E_J = 0: C_eff -> C_g1
    vp = make_vp(30.0, 7.5, c_g10=6e-18)
    vp0 = _ej0(vp)
    eff = effective_capacitance(vp0, BiasPoint(0.25, 0.0))
    assert eff.value == pytest.approx(vp0.c_g10, rel=0.01)


def test_ceff_peaks_at_degeneracy(vp):
    # ground-band curvature is maximally negative at n_g = 1/2, so the quantum
    # term makes C_eff large and positive there
    geo = vp.c_g10 * vp.c_j / vp.c_sigma1
    eff = effective_capacitance(vp, BiasPoint(0.5, 0.0))
    assert eff.value > 10 * geo


def test_cavity_frequency_limits(vp):
    # C_eff -> 0: the CPB branch opens and the bare LC frequency returns
    assert _c_tot(vp, 0.0) == pytest.approx(vp.c_cavity, rel=1e-15)
    # C_eff -> huge: the branch saturates at C_c + C_g2
    assert _c_tot(vp, 1e3) == pytest.approx(vp.c_cavity + vp.c_g2, rel=1e-9)


def test_loaded_frequency_golden(vp):
    # near the degeneracy the large positive C_eff pulls omega_c below bare;
    # away from it the quantum capacitance turns negative and pushes it above
    w_bare = 1.0 / math.sqrt(vp.l_cavity * vp.c_cavity)
    w_deg = cavity_frequency(vp, BiasPoint(0.5, 0.0), 0.0)
    w_off = cavity_frequency(vp, BiasPoint(0.3, 0.0), 0.0)
    assert w_deg < w_bare < w_off
    # recorded values for the default parameter set
    assert w_deg / TWO_PI == pytest.approx(4.974661e9, rel=1e-5)
    assert w_off / TWO_PI == pytest.approx(5.005508e9, rel=1e-5)


def test_g0_value_and_sign(vp):
    g0 = direct_coupling(vp)
    assert g0 < 0.0
    assert abs(g0) == pytest.approx(TWO_PI * 10.0, rel=1e-3)


def test_g0_linear_in_gate_slope(vp):
    # doubling the gap halves C_g1' and therefore g_0, with C_d unchanged
    wide = validate(CircuitParams(**{**vp.raw.__dict__,
                                     "gap_d0": 2 * vp.raw.gap_d0}))
    assert direct_coupling(wide) == pytest.approx(direct_coupling(vp) / 2,
                                                  rel=1e-12)


def test_grp_matches_fd(vp):
    rng = np.random.default_rng(3)
    for _ in range(4):
        bias = BiasPoint(rng.uniform(0.05, 0.45), rng.uniform(0.0, 0.4))
        res = radiation_pressure_coupling(vp, bias)
        ref = fd_grp(vp, bias)
        assert res.g_rp == pytest.approx(ref, rel=1e-6)


def test_gck_matches_fd(vp):
    rng = np.random.default_rng(5)
    for _ in range(3):
        bias = BiasPoint(rng.uniform(0.05, 0.45), rng.uniform(0.0, 0.4))
        res = circuit_couplings(vp, bias)
        ref = fd_gck(vp, bias)
        assert res.g_ck == pytest.approx(ref, rel=1e-4)


def test_grp_antisym_gck_sym(vp):
    # physical symmetric residue (geometric + even-derivative terms) bounds the
    # antisymmetry of g_rp; g_CK is symmetric to the odd-term residue
    for dng in (0.15, 0.3, 0.45):
        rp = circuit_couplings(vp, BiasPoint(0.5 + dng, 0.0))
        rm = circuit_couplings(vp, BiasPoint(0.5 - dng, 0.0))
        assert abs(rp.g_rp + rm.g_rp) <= 2e-2 * max(abs(rp.g_rp), abs(rm.g_rp))
        assert abs(rp.g_ck - rm.g_ck) <= 5e-4 * max(abs(rp.g_ck), abs(rm.g_ck))


def test_flux_symmetry(vp):
    a = circuit_couplings(vp, BiasPoint(0.3, 0.2))
    b = circuit_couplings(vp, BiasPoint(0.3, -0.2))
    assert a.g_rp == pytest.approx(b.g_rp, rel=1e-10)
    assert a.g_ck == pytest.approx(b.g_ck, rel=1e-10)


def test_gck_survives_degeneracy(vp):
    res = circuit_couplings(vp, BiasPoint(0.5, 0.0))
    assert abs(res.g_ck) > 0.0
    assert abs(res.g_rp) < 1e-3 * abs(res.g_ck)


def test_enhancement_peak_off_degeneracy(vp):
    grid = np.linspace(0.3, 0.7, 41)   # contains 0.5 exactly
    enh = [abs(circuit_couplings(vp, BiasPoint(n, 0.0)).enhancement)
           for n in grid]
    i = int(np.argmax(enh))
    assert grid[i] != 0.5
    assert abs(grid[i] - 0.5) <= 0.1


def test_enhancement_field(vp):
    res = circuit_couplings(vp, BiasPoint(0.37, 0.1))
    assert res.enhancement == res.g_rp / res.g_0


def test_pure_parabola_point(vp):
    # (n_g, f) = (0.3, 0.5) with d = 0: E_J_eff = 0, pure parabolas, curvature 8E_C
    res = circuit_couplings(vp, BiasPoint(0.3, 0.5))
    vp0 = _ej0(vp)
    res0 = circuit_couplings(vp0, BiasPoint(0.3, 0.0))
    assert res.g_rp == pytest.approx(res0.g_rp, rel=1e-6)
    assert res.g_ck == pytest.approx(res0.g_ck, rel=1e-4)


def test_nonanalytic_propagates(vp):
    with pytest.raises(NonAnalyticPoint):
        circuit_couplings(vp, BiasPoint(0.5, 0.5))


def test_series_divergence():
    # E_J = 0 makes C_eff = C_g1(C_J - C_g1)/C_Sigma1 < 0 here; a C_g2 tuned to
    # that magnitude blows up the series combination
    vp = make_vp(30.0, 7.5)
    vp0 = _ej0(vp)
    c_eff = vp0.c_g10 * (vp0.c_j - vp0.c_g10) / vp0.c_sigma1
    assert c_eff < 0.0
    vp_div = validate(CircuitParams(**{**vp0.raw.__dict__, "c_g2": -c_eff}))
    with pytest.raises(SeriesDivergence):
        circuit_couplings(vp_div, BiasPoint(0.25, 0.0))


def test_ck_hamiltonian_report(vp):
    rep = effective_ck_hamiltonian(vp, BiasPoint(0.5, 0.0))
    assert rep.g_ck != 0.0
    assert rep.purity < 1e-3
    lo, hi = rep.g_ck_over_kappa
    assert 0.0 < lo < hi
    assert "kappa" in rep.summary()
    with pytest.raises(NotInPureCkRegime):
        effective_ck_hamiltonian(vp, BiasPoint(0.3, 0.0))
