"""Three-node capacitance network: matrix, exact inverse shorthands, bias limits.

Node basis (phi_1, phi_2, phi_c): CPB island, bias island, cavity difference mode.
The closed-form inverse entries below were re-derived symbolically from the matrix;
three of the printed numerators circulating for this network contain typos (wrong
factor pairings in 1/C_Sigma1 and 1/C_Sigma2, a missing factor 2 in 1/C_Sigma2c).
The numeric 3x3 inversion is the ground truth the closed forms are tested against.

Physics results downstream always use the exact C_B -> infinity limits; the finite
C_B forms exist as the test oracle, and the further "C_c dominant" approximations
are exposed but unused.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import E_CHARGE
from .errors import SingularNetwork
from .params import ValidatedParams


@dataclass(frozen=True)
class CapMatrix:
    entries: np.ndarray      # 3x3, farad
    c_b: float


@dataclass(frozen=True)
class InverseShorthands:
    inv_c_sigma1: float
    inv_c_sigma2: float
    inv_c_sigmac: float
    inv_c_sigma12: float
    inv_c_sigma1c: float
    inv_c_sigma2c: float

    def as_matrix(self) -> np.ndarray:
        return np.array([
            [self.inv_c_sigma1, self.inv_c_sigma12, self.inv_c_sigma1c],
            [self.inv_c_sigma12, self.inv_c_sigma2, self.inv_c_sigma2c],
            [self.inv_c_sigma1c, self.inv_c_sigma2c, self.inv_c_sigmac],
        ])


def cap_matrix(vp: ValidatedParams, c_g1_at_x: float | None = None,
               c_b: float = 0.0) -> CapMatrix:
    """The 3x3 capacitance matrix in the (phi_1, phi_2, phi_c) basis."""
    cg1 = vp.c_g10 if c_g1_at_x is None else c_g1_at_x
    cg2, cj, cc = vp.c_g2, vp.c_j, vp.c_cavity
    m = np.array([
        [cj + cg1, -cg1, 0.5 * cj],
        [-cg1, cg1 + cg2 + c_b, -0.5 * cg2],
        [0.5 * cj, -0.5 * cg2, cc + 0.25 * cj + 0.25 * cg2],
    ])
    return CapMatrix(entries=m, c_b=c_b)


def inverse_shorthands_closed_form(vp: ValidatedParams,
                                   c_g1_at_x: float | None = None,
                                   c_b: float = 0.0) -> InverseShorthands:
    """Exact closed-form entries of the inverse capacitance matrix."""
    cg1 = vp.c_g10 if c_g1_at_x is None else c_g1_at_x
    return shorthands_from_values(cg1, vp.c_g2, vp.c_j, vp.c_cavity, c_b)


def shorthands_from_values(cg1: float, cg2: float, cj: float, cc: float,
                           cb: float = 0.0) -> InverseShorthands:
    """Closed-form inverse entries from raw capacitance values."""
    den = (cb * cg1 * (4 * cc + cg2) + cb * cj * (4 * cc + cg1 + cg2)
           + 4 * (cc * cg1 * cg2 + cj * cg1 * cg2 + cc * cj * (cg1 + cg2)))
    # every summand is non-negative for physical capacitances, so a vanishing
    # denominator is a true singularity rather than cancellation
    if not (np.isfinite(den) and den > 0.0):
        raise SingularNetwork(f"capacitance network singular (4 det = {den!r})")
    n1 = cb * (4 * cc + cg2 + cj) + cj * (cg1 + cg2) + 4 * cc * (cg1 + cg2) + cg1 * cg2
    n2 = cg1 * cg2 + 4 * cc * (cg1 + cj) + cj * (cg1 + cg2)
    nc = 4 * (cb * (cj + cg1) + cj * (cg1 + cg2) + cg1 * cg2)
    n12 = cg1 * (4 * cc + cg2 + cj) - cj * cg2
    n1c = 2 * cg1 * cg2 - 2 * cj * (cb + cg1 + cg2)
    n2c = 2 * cg1 * cg2 - 2 * cj * (cg1 - cg2)
    return InverseShorthands(
        inv_c_sigma1=n1 / den, inv_c_sigma2=n2 / den, inv_c_sigmac=nc / den,
        inv_c_sigma12=n12 / den, inv_c_sigma1c=n1c / den, inv_c_sigma2c=n2c / den,
    )


def numeric_inverse(vp: ValidatedParams, c_g1_at_x: float | None = None,
                    c_b: float = 0.0) -> np.ndarray:
    """Oracle path: plain numeric inversion of the 3x3 matrix."""
    m = cap_matrix(vp, c_g1_at_x, c_b).entries
    try:
        return np.linalg.inv(m)
    except np.linalg.LinAlgError as exc:
        raise SingularNetwork(str(exc)) from exc


@dataclass(frozen=True)
class InfiniteBiasLimits:
    shorthands: InverseShorthands
    n_g: float                       # -(C_g1 - C_g2 C_J/(4C_c+C_g2+C_J)) V_g / 2e
    # C_c-dominant approximations (exposed, never used downstream)
    approx_inv_c_sigma1: float       # 1/(C_g1 + C_J)
    approx_inv_c_sigmac: float       # 1/C_c
    approx_inv_c_sigma1c: float      # -C_J / (2 C_c (C_g1 + C_J))
    approx_n_g: float                # -C_g1 V_g / 2e


def infinite_bias_limits(vp: ValidatedParams,
                         c_g1_at_x: float | None = None) -> InfiniteBiasLimits:
    """C_B -> infinity limits of the shorthands and the gate-charge relation."""
    cg1 = vp.c_g10 if c_g1_at_x is None else c_g1_at_x
    cg2, cj, cc = vp.c_g2, vp.c_j, vp.c_cavity
    d_inf = cg1 * (4 * cc + cg2) + cj * (4 * cc + cg1 + cg2)
    sh = InverseShorthands(
        inv_c_sigma1=(4 * cc + cg2 + cj) / d_inf,
        inv_c_sigma2=0.0,
        inv_c_sigmac=4 * (cg1 + cj) / d_inf,
        inv_c_sigma12=0.0,
        inv_c_sigma1c=-2 * cj / d_inf,
        inv_c_sigma2c=0.0,
    )
    vg = vp.v_gate
    n_g = -(cg1 - cg2 * cj / (4 * cc + cg2 + cj)) * vg / (2 * E_CHARGE)
    return InfiniteBiasLimits(
        shorthands=sh,
        n_g=n_g,
        approx_inv_c_sigma1=1.0 / (cg1 + cj),
        approx_inv_c_sigmac=1.0 / cc,
        approx_inv_c_sigma1c=-cj / (2 * cc * (cg1 + cj)),
        approx_n_g=-cg1 * vg / (2 * E_CHARGE),
    )
