"""Quantized two-level model and the square-root-expansion couplings.

The qubit field is (B1, B2, B3) = (E_J cos(pi f), E_J d sin(pi f), -4E_C(1-2 n_g0));
the cavity enters the junction term through the phase amplitude
eta = sqrt(e^2 Z0 / 2 hbar) (g1..g4) and the mechanics through the gate-charge slope
(g_m).  Expanding -(1/2)sqrt(Btilde_1^2 + Btilde_2^2 + Btilde_3^2) and normal
ordering gives the radiation-pressure and cross-Kerr couplings at second order (with
the small xi terms) and third order (xi terms dropped).

Two charge-channel modes exist for the cavity-charge coupling (g_cp, g_cm):

``island`` - the printed coefficients 2 (e/C_Sigma1c) Q_zp n_g0 with the exact
  C_B -> infinity 1/C_Sigma1c.  This is the coupling through the junction
  capacitance with the bias island RF-grounded; it is negligible for a large
  bias-tee C_g2 and the expansion orders above apply verbatim.

``gate`` (default) - the cavity voltage reaches the gate through the (transparent)
  C_g2 divider, shifting the gate charge by q per cavity momentum quadrature:
  q = -(C_g1/2e) * C_g2/(C_g2+C_eff_geo) * V_zp.  This longitudinal channel must be
  resummed exactly rather than expanded in powers of the qubit-field perturbation
  (a truncated power series leaves uncancelled terms orders of magnitude too
  large), so the couplings add the closed-form two-level band-derivative terms
  -E3 q^2 m (g_rp) and +E4 q^2 m^2 (g_CK) to the xi-free expansion, with
  m = (dn_g/dx) x_zp.  This is the mode that reproduces the circuit model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .capnet import infinite_bias_limits
from .circuit import CouplingResult, direct_coupling
from .constants import E_CHARGE, HBAR
from .errors import DegeneratePoint
from .params import BiasPoint, ValidatedParams
from .spectrum import cospi, sinpi

GATE = "gate"
ISLAND = "island"


@dataclass(frozen=True)
class QubitFields:
    b1: float                # E_J cos(pi f), J
    b2: float                # E_J d sin(pi f), J
    b3: float                # -4 E_C (1 - 2 n_g0), J
    b_norm: float            # sqrt(b1^2 + b2^2 + b3^2)


def qubit_fields(vp: ValidatedParams, bias: BiasPoint) -> QubitFields:
    b1 = vp.e_j * cospi(bias.f)
    b2 = vp.e_j * vp.d_asym * sinpi(bias.f)
    b3 = -4.0 * vp.e_c * (1.0 - 2.0 * bias.n_g0)
    return QubitFields(b1=b1, b2=b2, b3=b3,
                       b_norm=math.sqrt(b1 * b1 + b2 * b2 + b3 * b3))


@dataclass(frozen=True)
class CouplingCoefficients:
    g1: float                # -B1 eta / 2, J
    g2: float                # +B1 eta^2 / 4
    g3: float                # +B2 eta / 2
    g4: float                # +B2 eta^2 / 4
    g_m: float               # -(2/e) E_C V_g C_g1' x_zp
    g_cp: float              # cavity-charge coupling, channel dependent
    g_cm: float              # cavity-charge x mechanics cross term
    eta: float
    channel: str
    q_gate: float            # gate-charge shift per p_c quadrature (gate channel)
    omega_ref: float         # reference (geometric-C_eff loaded) cavity frequency


def _gate_reference(vp: ValidatedParams):
    """Geometric-C_eff loaded cavity: frequency, V_zp and the C_g2 divider."""
    ce_geo = vp.c_g10 * vp.c_j / vp.c_sigma1
    c_tot = vp.c_cavity + 1.0 / (1.0 / vp.c_g2 + 1.0 / ce_geo)
    w_ref = 1.0 / math.sqrt(vp.l_cavity * c_tot)
    v_zp = math.sqrt(HBAR * w_ref / (2.0 * c_tot))
    kappa2 = vp.c_g2 / (vp.c_g2 + ce_geo)
    return w_ref, v_zp, kappa2


def coupling_coefficients(vp: ValidatedParams, bias: BiasPoint,
                          charge_channel: str = GATE) -> CouplingCoefficients:
    fields = qubit_fields(vp, bias)
    eta = vp.eta
    g1 = -fields.b1 * eta / 2.0
    g2 = fields.b1 * eta**2 / 4.0
    g3 = fields.b2 * eta / 2.0
    g4 = fields.b2 * eta**2 / 4.0
    g_m = -2.0 * vp.e_c * vp.v_gate * vp.gate.c_g1_prime * vp.x_zp / E_CHARGE

    w_ref, v_zp, kappa2 = _gate_reference(vp)
    if charge_channel == GATE:
        q = -(vp.c_g10 / (2.0 * E_CHARGE)) * kappa2 * v_zp
        g_cp = 4.0 * vp.e_c * q
        g_cm = -4.0 * vp.e_c * q * (vp.gate.c_g1_prime / vp.c_g10) * vp.x_zp
    elif charge_channel == ISLAND:
        inv_cs1c = infinite_bias_limits(vp).shorthands.inv_c_sigma1c
        q = 0.0
        g_cp = 2.0 * E_CHARGE * inv_cs1c * vp.q_zp * bias.n_g0
        g_cm = 2.0 * E_CHARGE * inv_cs1c * vp.gate.dng_dx * vp.q_zp * vp.x_zp
    else:
        raise ValueError(f"unknown charge channel {charge_channel!r}")
    return CouplingCoefficients(g1=g1, g2=g2, g3=g3, g4=g4, g_m=g_m,
                                g_cp=g_cp, g_cm=g_cm, eta=eta,
                                channel=charge_channel, q_gate=q, omega_ref=w_ref)


@dataclass(frozen=True)
class GreekCoefficients:
    alpha: float             # -4 (B1 g3 + B2 g1); 0 for d = 0
    beta: float              # 4 (g3^2 + g1^2 - B1 g2 - B2 g4); identically 0 here
    rho: float               # 8 (g2 g3 + g1 g4); 0 for d = 0
    delta: float             # 4 (g2^2 + g4^2)
    epsilon: float           # 4 B3 g_m
    lambda_: float           # 4 g_m^2
    xi1: float               # 4 B3 g_cp
    xi2: float               # 4 g_cp^2
    xi3: float               # 4 (2 g_cp g_m - B3 g_cm)
    xi4: float               # -8 g_cp g_cm
    xi5: float               # -8 g_m g_cm


def greek_coefficients(fields: QubitFields,
                       coeffs: CouplingCoefficients) -> GreekCoefficients:
    g1, g2, g3, g4 = coeffs.g1, coeffs.g2, coeffs.g3, coeffs.g4
    gm, gcp, gcm = coeffs.g_m, coeffs.g_cp, coeffs.g_cm
    b1, b2, b3 = fields.b1, fields.b2, fields.b3
    return GreekCoefficients(
        alpha=-4.0 * (b1 * g3 + b2 * g1),
        beta=4.0 * (g3**2 + g1**2 - b1 * g2 - b2 * g4),
        rho=8.0 * (g2 * g3 + g1 * g4),
        delta=4.0 * (g2**2 + g4**2),
        epsilon=4.0 * b3 * gm,
        lambda_=4.0 * gm**2,
        xi1=4.0 * b3 * gcp,
        xi2=4.0 * gcp**2,
        xi3=4.0 * (2.0 * gcp * gm - b3 * gcm),
        xi4=-8.0 * gcp * gcm,
        xi5=-8.0 * gm * gcm,
    )


# --- printed expansion formulas (energy units; divide by hbar for rad/s) ----

def grp_energy_order2(b: float, gr: GreekCoefficients,
                      include_xi: bool = True) -> float:
    """Second-order hbar*g_rp; with xi terms this is the printed formula."""
    xi2 = gr.xi2 if include_xi else 0.0
    xi4 = gr.xi4 if include_xi else 0.0
    return (xi4 / (2.0 * b)
            - (gr.epsilon * (gr.beta + 6.0 * gr.delta + xi2)
               + xi4 * (2.0 * gr.beta - 3.0 * gr.delta + 3.0 * gr.lambda_))
            / (4.0 * b**3))


def gck_energy_order2(b: float, gr: GreekCoefficients,
                      include_xi: bool = True) -> float:
    """Second-order hbar*g_CK; with xi terms this is the printed formula."""
    xi = (gr.xi3**2 + 6.0 * gr.xi4**2 + 6.0 * gr.xi5**2
          + 2.0 * gr.epsilon * gr.xi4 + 2.0 * gr.lambda_ * gr.xi4) if include_xi else 0.0
    return (2.0 * gr.lambda_ * (gr.beta + 6.0 * gr.delta) + xi) / (4.0 * b**3)


def grp_energy_order3(b: float, gr: GreekCoefficients) -> float:
    """Third-order hbar*g_rp (xi terms dropped)."""
    al, be, rho, de = gr.alpha, gr.beta, gr.rho, gr.delta
    ep, lam = gr.epsilon, gr.lambda_
    return ep / (16.0 * b**5) * (
        -4.0 * b**2 * (be + 6.0 * de)
        + 3.0 * al**2 + 36.0 * al * rho + 135.0 * rho**2
        + 18.0 * (be**2 + 15.0 * be * de + 70.0 * de**2 + be * lam + 6.0 * de * lam)
    )


def gck_energy_order3(b: float, gr: GreekCoefficients) -> float:
    """Third-order hbar*g_CK (xi terms dropped)."""
    al, be, rho, de = gr.alpha, gr.beta, gr.rho, gr.delta
    ep, lam = gr.epsilon, gr.lambda_
    core = (-4.0 * b**2 * (be + 6.0 * de)
            + 3.0 * al**2 + 36.0 * al * rho + 135.0 * rho**2
            + 18.0 * (be**2 + 15.0 * be * de + 70.0 * de**2))
    return -1.0 / (8.0 * b**5) * (
        lam * core + 3.0 * (be + 6.0 * de) * ep**2
        + 18.0 * (be + 6.0 * de) * lam**2
    )


# --- closed-form two-level band derivatives ---------------------------------

def two_level_band_derivatives(vp: ValidatedParams, bias: BiasPoint):
    """(E2, E3, E4) of the two-level ground band at the bias, joule per n_g^n."""
    fl = qubit_fields(vp, bias)
    b_perp2 = fl.b1**2 + fl.b2**2
    b = fl.b_norm
    if b == 0.0:
        raise DegeneratePoint("two-level field magnitude is zero")
    bp = 8.0 * vp.e_c
    e2 = 8.0 * vp.e_c - 0.5 * bp**2 * b_perp2 / b**3
    e3 = 1.5 * bp**3 * b_perp2 * fl.b3 / b**5
    e4 = 1.5 * bp**4 * b_perp2 * (b**2 - 5.0 * fl.b3**2) / b**7
    return e2, e3, e4


# --- public coupling evaluators ----------------------------------------------

def _evaluate(vp: ValidatedParams, bias: BiasPoint, order: int,
              charge_channel: str):
    if order not in (2, 3):
        raise ValueError("order must be 2 or 3")
    fields = qubit_fields(vp, bias)
    if fields.b_norm == 0.0:
        raise DegeneratePoint(
            "B = 0 (half-flux with symmetric junctions at the charge degeneracy)"
        )
    coeffs = coupling_coefficients(vp, bias, charge_channel)
    gr = greek_coefficients(fields, coeffs)
    b = fields.b_norm

    if charge_channel == ISLAND:
        if order == 2:
            hg_rp = grp_energy_order2(b, gr, include_xi=True)
            hg_ck = gck_energy_order2(b, gr, include_xi=True)
        else:
            hg_rp = grp_energy_order3(b, gr)
            hg_ck = gck_energy_order3(b, gr)
    else:
        # gate channel: xi-free expansion + exactly resummed longitudinal terms
        if order == 2:
            hg_rp = grp_energy_order2(b, gr, include_xi=False)
            hg_ck = gck_energy_order2(b, gr, include_xi=False)
        else:
            hg_rp = grp_energy_order3(b, gr)
            hg_ck = gck_energy_order3(b, gr)
        _, e3, e4 = two_level_band_derivatives(vp, bias)
        q = coeffs.q_gate
        m = vp.gate.dng_dx * vp.x_zp
        hg_rp += -e3 * q * q * m
        hg_ck += e4 * q * q * m * m
    return coeffs.omega_ref, hg_rp / HBAR, hg_ck / HBAR


def grp_perturbative(vp: ValidatedParams, bias: BiasPoint, order: int = 3,
                     charge_channel: str = GATE) -> CouplingResult:
    """Perturbative radiation-pressure coupling at the given expansion order."""
    w_ref, g_rp, g_ck = _evaluate(vp, bias, order, charge_channel)
    g_0 = direct_coupling(vp)
    return CouplingResult(omega_c=w_ref, g_rp=g_rp, g_0=g_0, g_ck=g_ck,
                          enhancement=g_rp / g_0, model_tag=f"perturbative{order}")


def gck_perturbative(vp: ValidatedParams, bias: BiasPoint, order: int = 3,
                     charge_channel: str = GATE) -> CouplingResult:
    """Perturbative cross-Kerr coupling at the given expansion order."""
    return grp_perturbative(vp, bias, order, charge_channel)
