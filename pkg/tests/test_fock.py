import math

import numpy as np
import pytest

from cpb_optomech import (
    BiasPoint,
    FockConfig,
    build_tripartite_hamiltonian,
    dressed_levels,
    extract_gck,
    extract_grp,
    gck_perturbative,
    grp_perturbative,
    oracle_couplings,
    qubit_fields,
)
from cpb_optomech.constants import HBAR
from cpb_optomech.errors import DimensionCap, LabelingAmbiguous
from cpb_optomech.perturbative import ISLAND, coupling_coefficients
from conftest import TWO_PI, make_vp


def _zero_coeffs(vp, bias):
    """Test double: every cavity/mechanics coupling switched off."""
    co = coupling_coefficients(vp, bias)
    return type(co)(g1=0.0, g2=0.0, g3=0.0, g4=0.0, g_m=0.0, g_cp=0.0, g_cm=0.0,
                    eta=0.0, channel=co.channel, q_gate=0.0,
                    omega_ref=co.omega_ref)


@pytest.fixture(scope="module")
def bias():
    return BiasPoint(0.25, 0.0)


def test_config_caps():
    with pytest.raises(DimensionCap):
        FockConfig(n_cavity=2).validate()
    with pytest.raises(DimensionCap):
        FockConfig(n_cavity=64).validate()
    with pytest.raises(DimensionCap):
        FockConfig(n_mech=3).validate()
    # the largest legal cutoffs stay inside the total-dimension cap
    cfg = FockConfig(n_cavity=32, n_mech=32).validate()
    assert 2 * cfg.n_cavity * cfg.n_mech <= 8192


def test_hermiticity(crit6_vp, bias):
    system = build_tripartite_hamiltonian(crit6_vp, bias, FockConfig(6, 6))
    assert np.max(np.abs(system.h - system.h.conj().T)) == 0.0


def test_eigenvector_orthonormality(crit6_vp, bias):
    system = build_tripartite_hamiltonian(crit6_vp, bias, FockConfig(5, 5)).solve()
    v = system.eigvecs
    assert np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1]))) < 1e-10


def test_decoupled_spectrum_exact(crit6_vp, bias):
    vp = crit6_vp
    cfg = FockConfig(5, 4)
    co = _zero_coeffs(vp, bias)
    system = build_tripartite_hamiltonian(vp, bias, cfg, coeffs_override=co).solve()
    b = qubit_fields(vp, bias).b_norm
    w_c = co.omega_ref
    expected = sorted(
        q * b + HBAR * w_c * na + HBAR * vp.omega_m * nb
        for q in (0.0, 1.0)          # offset frame: qubit ground at 0, excited at B
        for na in range(cfg.n_cavity) for nb in range(cfg.n_mech)
    )
    assert np.allclose(system.eigvals, expected, rtol=0, atol=1e-9 * b)

    levels = dressed_levels(system)
    assert all(ov == pytest.approx(1.0, abs=1e-12)
               for ov in levels.labeling_overlap.values())
    # the cross-Kerr combination cancels only to the eigensolver floor eps*||H||
    noise = 100 * 2.2e-16 * b / HBAR
    assert extract_gck(levels) == pytest.approx(0.0, abs=noise)
    assert extract_grp(system, levels) == pytest.approx(0.0, abs=1e-9)


def test_diagonal_element_convention(crit6_vp, bias):
    # <0,0,up|H|0,0,up> = -B3/2 + offset (the x_c^2 pieces act off-diagonally in
    # the qubit and the zero-point constants are dropped by convention)
    vp = crit6_vp
    system = build_tripartite_hamiltonian(vp, bias, FockConfig(4, 4))
    fl = qubit_fields(vp, bias)
    assert system.h[0, 0].real == pytest.approx(-fl.b3 / 2 + system.energy_offset,
                                                rel=1e-12)


def test_labeling_overlap_healthy(crit6_vp):
    system = build_tripartite_hamiltonian(crit6_vp, BiasPoint(0.3, 0.0),
                                          FockConfig(8, 8))
    levels = dressed_levels(system)
    assert all(ov > 0.75 for ov in levels.labeling_overlap.values())
    # halving the zero-point motion halves the polaron displacement
    gentle = make_vp(60.0, 1.2, c_g10=0.25e-15, c_cavity=3.2e-12,
                     l_cavity=3.16629e-8, x_zp=1.0e-15, omega_m=TWO_PI * 0.2871e9)
    system = build_tripartite_hamiltonian(gentle, BiasPoint(0.3, 0.0),
                                          FockConfig(8, 8))
    levels = dressed_levels(system)
    assert all(ov > 0.9 for ov in levels.labeling_overlap.values())


def test_labeling_ambiguous_at_resonance(crit6_vp):
    # at n_g = 1/2 the qubit gap E_J_eff(f) crosses the cavity; the dressed
    # crossing sits above the bare acos(hbar w_c/E_J)/pi estimate because the
    # strong x_c coupling (g1 ~ 0.13 hbar w_c) Bloch-Siegert-shifts the qubit,
    # so scan the flux through the region and demand labeling refuses somewhere
    vp = crit6_vp
    w_c = coupling_coefficients(vp, BiasPoint(0.5, 0.0)).omega_ref
    f_bare = math.acos(HBAR * w_c / vp.e_j) / math.pi
    assert f_bare == pytest.approx(0.363, abs=0.002)
    hit = False
    for f in np.arange(f_bare, f_bare + 0.03, 0.0005):
        try:
            system = build_tripartite_hamiltonian(vp, BiasPoint(0.5, float(f)),
                                                  FockConfig(8, 6))
            dressed_levels(system)
        except LabelingAmbiguous:
            hit = True
            break
    assert hit


def test_oracle_matches_pert3_gate(crit6_vp, bias):
    res = oracle_couplings(crit6_vp, bias, FockConfig(8, 8))
    pert = grp_perturbative(crit6_vp, bias, 3)
    assert res.g_rp == pytest.approx(pert.g_rp, rel=0.15)
    assert res.g_ck == pytest.approx(pert.g_ck, rel=0.10)


def test_oracle_grp_sign_flip(crit6_vp):
    a = oracle_couplings(crit6_vp, BiasPoint(0.25, 0.0), FockConfig(6, 6))
    b = oracle_couplings(crit6_vp, BiasPoint(0.75, 0.0), FockConfig(6, 6))
    assert a.g_rp == pytest.approx(-b.g_rp, rel=1e-3)


def test_gck_order2_sign_matches_oracle(crit6_vp):
    # island-channel order 2 at the degeneracy point: positive cross-Kerr
    bias = BiasPoint(0.5, 0.0)
    pert = gck_perturbative(crit6_vp, bias, order=2, charge_channel=ISLAND)
    res = oracle_couplings(crit6_vp, bias,
                           FockConfig(8, 8, charge_channel=ISLAND))
    assert pert.g_ck > 0.0
    assert res.g_ck > 0.0


def test_cutoff_convergence(crit6_vp, bias):
    a = oracle_couplings(crit6_vp, bias, FockConfig(8, 8))
    b = oracle_couplings(crit6_vp, bias, FockConfig(12, 12))
    assert abs(b.g_rp / a.g_rp - 1) < 0.01
    assert abs(b.g_ck / a.g_ck - 1) < 0.01


def test_h1_h2_negligible_at_gentle_drive():
    # small V_g keeps the (formally C_B-divergent) electrostatic terms tiny
    vp = make_vp(60.0, 1.2, c_g10=0.25e-15, c_cavity=3.2e-12,
                 l_cavity=3.16629e-8, x_zp=2.0e-15, omega_m=TWO_PI * 0.2871e9,
                 v_gate=0.05)
    bias = BiasPoint(0.25, 0.0)
    base = oracle_couplings(vp, bias, FockConfig(8, 8))
    with_h = oracle_couplings(vp, bias, FockConfig(8, 8, include_h1_h2=True))
    assert with_h.g_ck == pytest.approx(base.g_ck, rel=0.01)


def test_direct_cm_term_small(crit6_vp, bias):
    base = oracle_couplings(crit6_vp, bias, FockConfig(8, 8))
    with_cm = oracle_couplings(crit6_vp, bias,
                               FockConfig(8, 8, include_direct_cm=True))
    assert with_cm.g_ck == pytest.approx(base.g_ck, rel=0.05)
    assert with_cm.g_rp == pytest.approx(base.g_rp, rel=0.05)


def test_model_tag(crit6_vp, bias):
    assert oracle_couplings(crit6_vp, bias, FockConfig(6, 6)).model_tag \
        == "fock_oracle"
