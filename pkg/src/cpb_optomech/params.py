"""Circuit parameters, validation, and derived quantities.

All quantities are SI. The island charging energy is E_C = e^2 / (2 (C_g10 + C_J))
with C_J = c_j1 + c_j2; the moving gate capacitor is a parallel plate with
C_g1(x) = c_g10 * d0 / (d0 - x), expanded to second order about x = 0.

n_g0 (in BiasPoint) is an independent offset-charge knob: the paper sweeps the gate
charge while quoting a fixed V_g, so the static gate voltage stays at its configured
value inside dn_g/dx = -C_g1' V_g / 2e.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict

from .constants import E_CHARGE, HBAR, ghz_to_joule
from .errors import (
    InfeasibleCharging,
    IoFailure,
    NegativeJosephsonEnergy,
    NonPositiveParameter,
    ParameterError,
    XzpExceedsGap,
)

# x_zp must stay well inside the parallel-plate expansion
_XZP_GAP_MAX_RATIO = 0.1


@dataclass(frozen=True)
class CircuitParams:
    c_cavity: float          # F, cavity capacitance C_c
    l_cavity: float          # H, cavity inductance L_c
    c_g10: float             # F, static moving-gate capacitance C_g1(0)
    c_g2: float              # F, bias-tee coupling capacitance
    c_j1: float              # F
    c_j2: float              # F
    e_j1: float              # J
    e_j2: float              # J
    v_gate: float            # V
    gap_d0: float            # m, parallel-plate gap
    x_zp: float              # m, mechanical zero-point amplitude
    omega_m: float = 2.0 * math.pi * 10e6   # rad/s, mechanical frequency (convention)
    band_index: int = 0


@dataclass(frozen=True)
class BiasPoint:
    n_g0: float              # static gate charge, Cooper pairs (offset-charge knob)
    f: float = 0.0           # reduced flux Phi_E / Phi_0

    def __post_init__(self):
        if not (math.isfinite(self.n_g0) and math.isfinite(self.f)):
            raise ParameterError("bias point must be finite")


@dataclass(frozen=True)
class GateGeometry:
    """Parallel-plate derivatives of C_g1(x) at x = 0 and the gate-charge slope."""
    c_g1_prime: float        # F/m,  C_g10 / d0
    c_g1_double_prime: float  # F/m^2, 2 C_g10 / d0^2
    dng_dx: float            # 1/m, -C_g1' V_g / 2e


@dataclass(frozen=True)
class ValidatedParams:
    """CircuitParams plus every derived quantity the other modules consume."""
    raw: CircuitParams
    c_j: float               # C_J = c_j1 + c_j2
    c_sigma1: float          # C_g10 + C_J
    e_c: float               # e^2 / (2 C_sigma1)
    e_j: float               # e_j1 + e_j2
    d_asym: float            # (e_j1 - e_j2) / E_J
    z0: float                # sqrt(L_c / C_c)
    eta: float               # sqrt(e^2 Z0 / 2 hbar)
    q_zp: float              # sqrt(hbar / 2 Z0)
    phi_zp: float            # sqrt(hbar Z0 / 2)
    gate: GateGeometry

    # convenience pass-throughs
    @property
    def c_cavity(self):
        return self.raw.c_cavity

    @property
    def l_cavity(self):
        return self.raw.l_cavity

    @property
    def c_g10(self):
        return self.raw.c_g10

    @property
    def c_g2(self):
        return self.raw.c_g2

    @property
    def v_gate(self):
        return self.raw.v_gate

    @property
    def x_zp(self):
        return self.raw.x_zp

    @property
    def gap_d0(self):
        return self.raw.gap_d0

    @property
    def omega_m(self):
        return self.raw.omega_m

    @property
    def band_index(self):
        return self.raw.band_index

    def c_g1_at(self, x: float) -> float:
        """Second-order parallel-plate expansion of C_g1 about x = 0."""
        g = self.gate
        return self.c_g10 + g.c_g1_prime * x + 0.5 * g.c_g1_double_prime * x * x

    def n_g_at(self, bias: BiasPoint, x: float) -> float:
        """Gate charge at displacement x, consistent with the C_g1(x) expansion."""
        g = self.gate
        return bias.n_g0 - (self.v_gate / (2.0 * E_CHARGE)) * (
            g.c_g1_prime * x + 0.5 * g.c_g1_double_prime * x * x
        )


def validate(params: CircuitParams) -> ValidatedParams:
    """Check invariants and compute all derived quantities."""
    positive = {
        "c_cavity": params.c_cavity,
        "l_cavity": params.l_cavity,
        "c_g10": params.c_g10,
        "c_g2": params.c_g2,
        "c_j1": params.c_j1,
        "c_j2": params.c_j2,
        "gap_d0": params.gap_d0,
        "x_zp": params.x_zp,
        "omega_m": params.omega_m,
    }
    for name, value in positive.items():
        if not (math.isfinite(value) and value > 0.0):
            raise NonPositiveParameter(f"{name} must be positive, got {value!r}")
    if not math.isfinite(params.v_gate):
        raise ParameterError("v_gate must be finite")
    if params.e_j1 < 0.0 or params.e_j2 < 0.0:
        raise NegativeJosephsonEnergy(
            f"junction energies must be >= 0, got {params.e_j1!r}, {params.e_j2!r}"
        )
    if params.x_zp > _XZP_GAP_MAX_RATIO * params.gap_d0:
        raise XzpExceedsGap(
            f"x_zp = {params.x_zp!r} is not << gap_d0 = {params.gap_d0!r}"
        )
    if params.band_index < 0:
        raise ParameterError("band_index must be >= 0")

    e_j = params.e_j1 + params.e_j2
    d_asym = (params.e_j1 - params.e_j2) / e_j if e_j > 0.0 else 0.0
    if not (0.0 <= d_asym < 1.0):
        raise ParameterError(
            f"junction asymmetry d = {d_asym!r} outside [0, 1); label the larger "
            "junction e_j1"
        )

    c_j = params.c_j1 + params.c_j2
    c_sigma1 = params.c_g10 + c_j
    e_c = E_CHARGE**2 / (2.0 * c_sigma1)
    z0 = math.sqrt(params.l_cavity / params.c_cavity)
    eta = math.sqrt(E_CHARGE**2 * z0 / (2.0 * HBAR))
    q_zp = math.sqrt(HBAR / (2.0 * z0))
    phi_zp = math.sqrt(HBAR * z0 / 2.0)

    c_g1_prime = params.c_g10 / params.gap_d0
    gate = GateGeometry(
        c_g1_prime=c_g1_prime,
        c_g1_double_prime=2.0 * params.c_g10 / params.gap_d0**2,
        dng_dx=-c_g1_prime * params.v_gate / (2.0 * E_CHARGE),
    )
    return ValidatedParams(
        raw=params, c_j=c_j, c_sigma1=c_sigma1, e_c=e_c, e_j=e_j, d_asym=d_asym,
        z0=z0, eta=eta, q_zp=q_zp, phi_zp=phi_zp, gate=gate,
    )


def params_from_energies(e_c_target: float, e_j_target: float, d: float,
                         c_g10: float, **rest) -> CircuitParams:
    """Back-solve capacitances from (E_C, E_J, d) and build CircuitParams.

    C_J = e^2/(2 E_C) - c_g10, split equally between the junctions; E_J is split
    as e_j1 = (1+d) E_J/2, e_j2 = (1-d) E_J/2.
    """
    if e_c_target <= 0.0:
        raise NonPositiveParameter("e_c_target must be positive")
    if e_j_target < 0.0:
        raise NegativeJosephsonEnergy("e_j_target must be >= 0")
    if not (0.0 <= d < 1.0):
        raise ParameterError(f"d = {d!r} outside [0, 1)")
    c_sigma1 = E_CHARGE**2 / (2.0 * e_c_target)
    c_j = c_sigma1 - c_g10
    if c_j <= 0.0:
        raise InfeasibleCharging(
            f"c_g10 = {c_g10!r} already exceeds C_Sigma1 = {c_sigma1!r} implied by E_C"
        )
    return CircuitParams(
        c_g10=c_g10,
        c_j1=c_j / 2.0,
        c_j2=c_j / 2.0,
        e_j1=(1.0 + d) * e_j_target / 2.0,
        e_j2=(1.0 - d) * e_j_target / 2.0,
        **rest,
    )


# --- JSON parameter schema -------------------------------------------------
#
# Field names exactly as in CircuitParams, SI units. Energies may instead be
# given in GHz via e_j1_ghz / e_j2_ghz, or in energy form via e_c_ghz + e_j_ghz
# (+ optional d, default 0), in which case the capacitances are back-solved
# from c_g10. omega_m may be given as omega_m_ghz (ordinary frequency, GHz).

_SI_FIELDS = ("c_cavity", "l_cavity", "c_g10", "c_g2", "c_j1", "c_j2",
              "e_j1", "e_j2", "v_gate", "gap_d0", "x_zp", "omega_m", "band_index")


def params_from_dict(data: dict) -> CircuitParams:
    data = dict(data)
    if "omega_m_ghz" in data:
        data["omega_m"] = 2.0 * math.pi * float(data.pop("omega_m_ghz")) * 1e9
    for key in ("e_j1", "e_j2"):
        ghz_key = key + "_ghz"
        if ghz_key in data:
            data[key] = ghz_to_joule(float(data.pop(ghz_key)))

    if "e_c_ghz" in data or "e_j_ghz" in data:
        try:
            e_c = ghz_to_joule(float(data.pop("e_c_ghz")))
            e_j = ghz_to_joule(float(data.pop("e_j_ghz")))
        except KeyError as exc:
            raise ParameterError("energy form needs both e_c_ghz and e_j_ghz") from exc
        d = float(data.pop("d", 0.0))
        c_g10 = float(data.pop("c_g10"))
        for key in ("c_j1", "c_j2", "e_j1", "e_j2"):
            if key in data:
                raise ParameterError(f"energy form conflicts with explicit {key}")
        rest = {k: (int(v) if k == "band_index" else float(v)) for k, v in data.items()}
        return params_from_energies(e_c, e_j, d, c_g10, **rest)

    unknown = set(data) - set(_SI_FIELDS)
    if unknown:
        raise ParameterError(f"unknown parameter keys: {sorted(unknown)}")
    kwargs = {k: (int(v) if k == "band_index" else float(v)) for k, v in data.items()}
    return CircuitParams(**kwargs)


def params_to_dict(params: CircuitParams) -> dict:
    return asdict(params)


def load_params(path: str) -> CircuitParams:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read parameter file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParameterError(f"malformed JSON in {path}: {exc}") from exc
    return params_from_dict(data)
