"""Shared fixtures: the frozen parameter sets every suite evaluates against."""

import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cpb_optomech import CONSTS, params_from_energies, validate

H = CONSTS.h_planck
TWO_PI = 2.0 * math.pi


def make_vp(ec_ghz, ej_ghz, d=0.0, c_g10=0.4e-15, c_cavity=0.318e-12,
            l_cavity=3.18e-9, c_g2=1e-9, v_gate=10.0, gap_d0=50e-9,
            x_zp=1.5915e-13, omega_m=TWO_PI * 10e6):
    return validate(params_from_energies(
        H * ec_ghz * 1e9, H * ej_ghz * 1e9, d, c_g10,
        c_cavity=c_cavity, l_cavity=l_cavity, c_g2=c_g2, v_gate=v_gate,
        gap_d0=gap_d0, x_zp=x_zp, omega_m=omega_m,
    ))


@pytest.fixture(scope="session")
def default_vp():
    """Shipped default: the paper's cavity and energy scales, |g_0| ~ 2pi*10 Hz."""
    return make_vp(30.0, 7.5)


@pytest.fixture(scope="session")
def charge_limit_vp():
    """Deep charge regime E_J/E_C = 1/50 at the default geometry."""
    return make_vp(30.0, 0.6)


@pytest.fixture(scope="session")
def crit1_vp():
    """Degeneracy-null config: 1/50 with a small junction asymmetry so every
    flux in [0, 0.5] keeps E_J_eff > 0."""
    return make_vp(30.0, 0.6, d=0.02)


def crit5_vp(ej_ghz):
    """Model-agreement config: low-impedance cavity, gate-dominated C_Sigma1."""
    return make_vp(20.0, ej_ghz, c_g10=0.75e-15, c_cavity=1.06103e-12,
                   l_cavity=9.5493e-10, x_zp=1e-16)


@pytest.fixture(scope="session")
def crit6_vp():
    """Oracle config: deep-adiabatic qubit (B/hbar omega_c ~ 240), stiff mechanics."""
    return make_vp(60.0, 1.2, c_g10=0.25e-15, c_cavity=3.2e-12,
                   l_cavity=3.16629e-8, x_zp=2.0e-15, omega_m=TWO_PI * 0.2871e9)
