"""Quantum-capacitance (circuit) model of the CPB-loaded cavity.

The CPB presents the effective capacitance
    C_eff = C_g1 C_J / C_Sigma1 - (C_g1^2 / 4 e^2) d2E_k/dn_g^2
in series with C_g2 and in parallel with C_c, so the loaded cavity frequency is
omega_c = 1/sqrt(L_c C_tot) with C_tot = C_c + (1/C_g2 + 1/C_eff)^-1.

Sign conventions: g_rp = -(d omega_c/dx) x_zp and g_CK = +(d^2 omega_c/dx^2) x_zp^2.
The closed-form x-derivatives are implemented as written, with one correction: the
first geometric term of d^2 C_eff/dx^2 carries a factor -2 C_J C_g1'^2/C_Sigma1^2
(differentiating the first derivative term by term; the factor is confirmed by the
finite-difference oracle this module is tested against).

The direct (no-CPB) coupling g_0 keeps its printed leading minus sign; enhancement
ratios g_rp/g_0 are therefore negative where g_rp is positive, and magnitude
comparisons use |g_rp/g_0|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .constants import E_CHARGE
from .errors import SeriesDivergence, NotInPureCkRegime
from .params import BiasPoint, ValidatedParams
from .spectrum import band_derivatives

_SERIES_TOL = 1e-9   # relative tolerance for C_eff ~ -C_g2 cancellation


@dataclass(frozen=True)
class EffectiveCapacitance:
    value: float             # F
    d1: float                # dC_eff/dx, F/m
    d2: float                # d2C_eff/dx2, F/m^2
    band: int
    d1_error: float          # |error| propagated from band-derivative estimates
    d2_error: float


@dataclass(frozen=True)
class CouplingResult:
    omega_c: float           # rad/s
    g_rp: float              # rad/s
    g_0: float               # rad/s
    g_ck: float              # rad/s
    enhancement: float       # g_rp / g_0 (signed)
    model_tag: str
    g_rp_error: float = 0.0  # rad/s, propagated derivative error where available
    g_ck_error: float = 0.0


def _derivs(vp: ValidatedParams, bias: BiasPoint, max_order: int):
    k = vp.band_index
    spec = band_derivatives(vp, bias, k=k, max_order=max_order)
    d = [spec.derivatives.get((k, n), 0.0) for n in range(1, max_order + 1)]
    e = [spec.derivative_error.get((k, n), 0.0) for n in range(1, max_order + 1)]
    return d, e


def effective_capacitance(vp: ValidatedParams, bias: BiasPoint,
                          max_order: int = 4) -> EffectiveCapacitance:
    """C_eff and its first two x-derivatives at x = 0."""
    d, err = _derivs(vp, bias, max_order)
    e2 = d[1]
    e3 = d[2] if max_order >= 3 else 0.0
    e4 = d[3] if max_order >= 4 else 0.0
    cg1, cj, cs1 = vp.c_g10, vp.c_j, vp.c_sigma1
    cg1p = vp.gate.c_g1_prime
    cg1pp = vp.gate.c_g1_double_prime
    vg, e = vp.v_gate, E_CHARGE

    value = cg1 * cj / cs1 - cg1**2 / (4 * e**2) * e2

    d1 = (cj**2 * cg1p / cs1**2
          - cg1 * cg1p / (2 * e**2) * e2
          + cg1**2 * cg1p * vg / (8 * e**3) * e3)

    d2_geo = (-2 * cj * cg1p**2 / cs1**2 + cj * cg1pp / cs1
              + cj * cg1 * (2 * cg1p**2 / cs1**3 - cg1pp / cs1**2))
    d2_q = -(1.0 / (4 * e**2)) * (
        (2 * cg1p**2 + 2 * cg1 * cg1pp) * e2
        - (2 * cg1 * cg1p**2 * vg / e + cg1**2 * cg1pp * vg / (2 * e)) * e3
        + cg1**2 * (vg * cg1p / (2 * e)) ** 2 * e4
    )
    d2 = d2_geo + d2_q

    d1_error = (abs(cg1 * cg1p / (2 * e**2)) * err[1]
                + abs(cg1**2 * cg1p * vg / (8 * e**3)) * (err[2] if max_order >= 3 else 0.0))
    d2_error = (abs((2 * cg1p**2 + 2 * cg1 * cg1pp) / (4 * e**2)) * err[1]
                + abs((2 * cg1 * cg1p**2 * vg / e + cg1**2 * cg1pp * vg / (2 * e))
                      / (4 * e**2)) * (err[2] if max_order >= 3 else 0.0)
                + abs(cg1**2 * (vg * cg1p / (2 * e)) ** 2 / (4 * e**2))
                * (err[3] if max_order >= 4 else 0.0))
    return EffectiveCapacitance(value=value, d1=d1, d2=d2, band=vp.band_index,
                                d1_error=d1_error, d2_error=d2_error)


def _c_tot(vp: ValidatedParams, c_eff: float) -> float:
    cg2 = vp.c_g2
    if abs(cg2 + c_eff) <= _SERIES_TOL * cg2:
        raise SeriesDivergence(
            f"C_eff = {c_eff!r} cancels -C_g2 = {-cg2!r}: series combination diverges"
        )
    c_tot = vp.c_cavity + (cg2 * c_eff) / (cg2 + c_eff)
    if c_tot <= 0.0:
        raise SeriesDivergence(f"total capacitance {c_tot!r} <= 0")
    return c_tot


def cavity_frequency(vp: ValidatedParams, bias: BiasPoint, x: float = 0.0) -> float:
    """Loaded cavity frequency at mechanical displacement x, rad/s."""
    cg1x = vp.c_g1_at(x)
    ngx = vp.n_g_at(bias, x)
    spec = band_derivatives(vp, BiasPoint(n_g0=ngx, f=bias.f), k=vp.band_index,
                            max_order=2)
    e2 = spec.derivatives[(vp.band_index, 2)]
    cs1x = cg1x + vp.c_j
    c_eff = cg1x * vp.c_j / cs1x - cg1x**2 / (4 * E_CHARGE**2) * e2
    return 1.0 / math.sqrt(vp.l_cavity * _c_tot(vp, c_eff))


def direct_coupling(vp: ValidatedParams) -> float:
    """Direct optomechanical coupling g_0 without the CPB, rad/s (printed sign)."""
    cg1, cg2 = vp.c_g10, vp.c_g2
    c_d = vp.c_cavity + 1.0 / (1.0 / cg1 + 1.0 / cg2)
    w_d = 1.0 / math.sqrt(vp.l_cavity * c_d)
    return -0.5 * cg2**2 / (cg1 + cg2) ** 2 * (w_d / c_d) * vp.gate.c_g1_prime * vp.x_zp


def _assemble(vp: ValidatedParams, eff: EffectiveCapacitance):
    c_tot = _c_tot(vp, eff.value)
    w_c = 1.0 / math.sqrt(vp.l_cavity * c_tot)
    cg2, cc = vp.c_g2, vp.c_cavity
    pref = 0.5 * cg2**2 / (cg2 + eff.value) ** 2 * (w_c / c_tot)
    g_rp = vp.x_zp * pref * eff.d1
    g_rp_err = vp.x_zp * pref * eff.d1_error
    w = cc * cg2 + (cc + cg2) * eff.value
    d2w = (0.25 * w_c * cg2**2 * eff.d1**2
           * (cg2 * (4 * cc + 3 * cg2) + 4 * (cc + cg2) * eff.value)
           / ((cg2 + eff.value) ** 2 * w**2)
           - 0.5 * w_c * cg2**2 * eff.d2 / ((cg2 + eff.value) * w))
    g_ck = d2w * vp.x_zp**2
    g_ck_err = vp.x_zp**2 * (
        0.5 * w_c * cg2**2 * (cg2 * (4 * cc + 3 * cg2) + 4 * (cc + cg2) * eff.value)
        / ((cg2 + eff.value) ** 2 * w**2) * abs(eff.d1) * eff.d1_error
        + 0.5 * w_c * cg2**2 * eff.d2_error / abs((cg2 + eff.value) * w)
    )
    return w_c, g_rp, g_rp_err, g_ck, g_ck_err


def radiation_pressure_coupling(vp: ValidatedParams, bias: BiasPoint) -> CouplingResult:
    """Closed-form g_rp = -(d omega_c/dx) x_zp, with g_0 and the enhancement ratio."""
    eff = effective_capacitance(vp, bias, max_order=3)
    w_c, g_rp, g_rp_err, _, _ = _assemble(
        vp, EffectiveCapacitance(eff.value, eff.d1, 0.0, eff.band, eff.d1_error, 0.0))
    g_0 = direct_coupling(vp)
    return CouplingResult(omega_c=w_c, g_rp=g_rp, g_0=g_0, g_ck=float("nan"),
                          enhancement=g_rp / g_0, model_tag="circuit",
                          g_rp_error=g_rp_err)


def cross_kerr_coupling(vp: ValidatedParams, bias: BiasPoint) -> CouplingResult:
    """Closed-form g_CK = +(d^2 omega_c/dx^2) x_zp^2 (needs order-4 band derivatives)."""
    return circuit_couplings(vp, bias)


def circuit_couplings(vp: ValidatedParams, bias: BiasPoint) -> CouplingResult:
    """Full circuit-model evaluation: omega_c, g_rp, g_0, g_CK, enhancement."""
    eff = effective_capacitance(vp, bias, max_order=4)
    w_c, g_rp, g_rp_err, g_ck, g_ck_err = _assemble(vp, eff)
    g_0 = direct_coupling(vp)
    return CouplingResult(omega_c=w_c, g_rp=g_rp, g_0=g_0, g_ck=g_ck,
                          enhancement=g_rp / g_0, model_tag="circuit",
                          g_rp_error=g_rp_err, g_ck_error=g_ck_err)


@dataclass(frozen=True)
class CkHamiltonianReport:
    """Parameters of the pure cross-Kerr Hamiltonian, with the linewidth comparison."""
    omega_c: float           # rad/s
    omega_m: float           # rad/s
    g_ck: float              # rad/s
    g_rp: float              # rad/s (must pass the purity gate)
    purity: float            # |g_rp / g_ck|
    kappa_band: tuple = (2 * math.pi * 1e6, 2 * math.pi * 10e6)

    @property
    def g_ck_over_kappa(self) -> tuple:
        lo, hi = self.kappa_band
        return (abs(self.g_ck) / hi, abs(self.g_ck) / lo)

    def summary(self) -> str:
        lo, hi = self.g_ck_over_kappa
        return (f"H_CK/hbar = {self.omega_c:.6e} a'a + {self.omega_m:.6e} b'b "
                f"+ {self.g_ck:.6e} a'a b'b  [rad/s]\n"
                f"g_CK/2pi = {self.g_ck / (2 * math.pi):.6e} Hz, "
                f"|g_rp/g_CK| = {self.purity:.2e}, "
                f"g_CK/kappa in [{lo:.3f}, {hi:.3f}] "
                f"for kappa = 2pi*(1-10) MHz")


def effective_ck_hamiltonian(vp: ValidatedParams, bias: BiasPoint,
                             max_rp_fraction: float = 1e-3) -> CkHamiltonianReport:
    """Eq.-style pure cross-Kerr parameter triple; rejects biases where g_rp matters."""
    res = circuit_couplings(vp, bias)
    purity = abs(res.g_rp) / abs(res.g_ck) if res.g_ck != 0.0 else float("inf")
    if purity >= max_rp_fraction:
        raise NotInPureCkRegime(
            f"|g_rp|/|g_CK| = {purity:.3e} >= {max_rp_fraction:.1e} at "
            f"n_g = {bias.n_g0}, f = {bias.f}"
        )
    return CkHamiltonianReport(omega_c=res.omega_c, omega_m=vp.omega_m,
                               g_ck=res.g_ck, g_rp=res.g_rp, purity=purity)
