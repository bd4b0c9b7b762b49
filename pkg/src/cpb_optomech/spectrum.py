"""Charge-basis spectrum of the split Cooper-pair box and its gate-charge derivatives.

The Hamiltonian in the charge basis is tridiagonal: diagonal 4 E_C (n - n_g)^2 and
uniform off-diagonal -E_J_eff(f)/2, with
E_J_eff = E_J sqrt(cos^2(pi f) + d^2 sin^2(pi f)).  The complex phase of the
tunneling element that asymmetric junctions generate is removed by a diagonal gauge
transformation, so only |E_J_eff| enters the spectrum.

Energies are rescaled internally to units of h * 1 GHz for conditioning and converted
back to joule at the boundary.  First derivatives with respect to n_g come from the
Hellmann-Feynman theorem, dE_k/dn_g = -8 E_C (<n>_k - n_g); orders 2-4 from
Richardson-extrapolated central differences of that analytic first derivative, with
error estimates taken from the extrapolation residuals plus a roundoff floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .constants import H_PLANCK
from .errors import (
    ConvergenceFailure,
    DegenerateBand,
    DerivativeUnresolved,
    NonAnalyticPoint,
    TruncationTooSmall,
)
from .params import BiasPoint, ValidatedParams

_EGHZ = H_PLANCK * 1e9          # one internal energy unit, joule
_M_DEFAULT = 10
_M_CAP = 40
_CONV_TOL = 1e-10               # truncation convergence, units of E_C
_GAP_TOL = 1e-8                 # degenerate-band threshold, units of E_C
_H_BASE = 2e-3                  # base FD step in n_g
_REL_ERR_CAP = 1e-4             # DerivativeUnresolved threshold


def cospi(x: float) -> float:
    """cos(pi x), exact at half-integer and integer x."""
    r = x % 2.0
    if r == 0.0:
        return 1.0
    if r == 1.0:
        return -1.0
    if r == 0.5 or r == 1.5:
        return 0.0
    return math.cos(math.pi * r)


def sinpi(x: float) -> float:
    """sin(pi x), exact at half-integer and integer x."""
    return cospi(x - 0.5)


def effective_ej(vp: ValidatedParams, f: float) -> float:
    """Flux-tuned Josephson energy E_J sqrt(cos^2(pi f) + d^2 sin^2(pi f)), joule."""
    return vp.e_j * math.hypot(cospi(f), vp.d_asym * sinpi(f))


@dataclass(frozen=True)
class ChargeHamiltonian:
    """Real symmetric tridiagonal CPB Hamiltonian over a charge window."""
    n_values: np.ndarray     # charge states, centered on round(n_g)
    diagonal: np.ndarray     # 4 E_C (n - n_g)^2, joule
    off_diagonal: float      # -E_J_eff/2, joule

    @property
    def dim(self) -> int:
        return self.n_values.size


@dataclass
class CpbSpectrum:
    band_energies: np.ndarray                       # ascending, joule
    n_g: float
    f: float
    truncation_m: int
    derivatives: dict = field(default_factory=dict)       # (band, order) -> joule
    derivative_error: dict = field(default_factory=dict)  # (band, order) -> joule


def build_charge_hamiltonian(vp: ValidatedParams, bias: BiasPoint,
                             m: int = _M_DEFAULT) -> ChargeHamiltonian:
    """Tridiagonal matrix on the 2m+1 charge states centered at round(n_g)."""
    if m < 1:
        raise TruncationTooSmall(f"need m >= 1 charge states per side, got {m}")
    n0 = round(bias.n_g0)
    ns = np.arange(n0 - m, n0 + m + 1, dtype=float)
    diag = 4.0 * vp.e_c * (ns - bias.n_g0) ** 2
    return ChargeHamiltonian(
        n_values=ns, diagonal=diag, off_diagonal=-0.5 * effective_ej(vp, bias.f)
    )


def _solve(vp, n_g, f, k_hi, m, vectors=False):
    """Lowest k_hi+1 eigenpairs in internal (h GHz) units."""
    n0 = round(n_g)
    ns = np.arange(n0 - m, n0 + m + 1, dtype=float)
    ec = vp.e_c / _EGHZ
    ej = effective_ej(vp, f) / _EGHZ
    diag = 4.0 * ec * (ns - n_g) ** 2
    off = np.full(2 * m, -0.5 * ej)
    if vectors:
        w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, k_hi))
        return w, v, ns
    w = eigh_tridiagonal(diag, off, select="i", select_range=(0, k_hi),
                         eigvals_only=True)
    return w, None, ns


def _converged_m(vp, n_g, f, k_hi, m_start=_M_DEFAULT):
    """Smallest truncation (doubling from m_start, capped) with converged energies."""
    ec = vp.e_c / _EGHZ
    m = max(m_start, k_hi + 2)
    w_prev = _solve(vp, n_g, f, k_hi, m)[0]
    while m < _M_CAP:
        m_next = min(2 * m, _M_CAP)
        w_next = _solve(vp, n_g, f, k_hi, m_next)[0]
        if np.max(np.abs(w_next - w_prev)) < _CONV_TOL * ec:
            return m, w_prev
        m, w_prev = m_next, w_next
    w_check = _solve(vp, n_g, f, k_hi, _M_CAP + 2)[0]
    if np.max(np.abs(w_check - w_prev)) < _CONV_TOL * ec:
        return m, w_prev
    raise ConvergenceFailure(
        f"charge-basis truncation did not converge by m = {_M_CAP}"
    )


def band_energies(vp: ValidatedParams, bias: BiasPoint, k_max: int = 1) -> CpbSpectrum:
    """Lowest k_max+1 band energies, converged in truncation."""
    if k_max < 0:
        raise TruncationTooSmall("k_max must be >= 0")
    m, w = _converged_m(vp, bias.n_g0, bias.f, k_max)
    return CpbSpectrum(band_energies=w * _EGHZ, n_g=bias.n_g0, f=bias.f,
                       truncation_m=m)


def _hf(vp, n_g, f, k, m):
    """Hellmann-Feynman dE_k/dn_g in internal units, with the gap to neighbors."""
    w, v, ns = _solve(vp, n_g, f, k + 1, m, vectors=True)
    ec = vp.e_c / _EGHZ
    gap = w[k + 1] - w[k]
    if k > 0:
        gap = min(gap, w[k] - w[k - 1])
    nbar = float(np.sum(ns * v[:, k] ** 2))
    return -8.0 * ec * (nbar - n_g), gap


def band_first_derivative_hf(vp: ValidatedParams, bias: BiasPoint, k: int = 0,
                             m: int | None = None) -> float:
    """dE_k/dn_g via Hellmann-Feynman, joule per unit n_g."""
    if m is None:
        m = _converged_m(vp, bias.n_g0, bias.f, k)[0]
    ec = vp.e_c / _EGHZ
    d1, gap = _hf(vp, bias.n_g0, bias.f, k, m)
    if gap <= _GAP_TOL * ec:
        raise DegenerateBand(
            f"band {k} gap {gap * _EGHZ!r} J below threshold at n_g = {bias.n_g0}"
        )
    return d1 * _EGHZ


def _richardson(stencil, h):
    """Three-level Richardson extrapolation of an O(h^2) stencil."""
    a0, a1, a2 = stencil(h), stencil(h / 2.0), stencil(h / 4.0)
    b1 = (4.0 * a1 - a0) / 3.0
    b2 = (4.0 * a2 - a1) / 3.0
    c = (16.0 * b2 - b1) / 15.0
    return c, abs(c - b2)


def band_derivatives(vp: ValidatedParams, bias: BiasPoint, k: int = 0,
                     max_order: int = 4, raise_unresolved: bool = True) -> CpbSpectrum:
    """Orders 1..max_order of E_k with respect to n_g, with error estimates.

    Order 1 is the analytic Hellmann-Feynman value; orders 2-4 are Richardson
    central differences of it.  At an exact crossing (E_J_eff = 0 at half-integer
    n_g) the curvature diverges and NonAnalyticPoint is raised instead of numbers.
    """
    if not 1 <= max_order <= 4:
        raise ValueError("max_order must be in 1..4")
    ec_int = vp.e_c / _EGHZ
    ej_int = effective_ej(vp, bias.f) / _EGHZ

    near_half = abs(bias.n_g0 - math.floor(bias.n_g0) - 0.5) < 1e-9
    if ej_int < 1e-12 * ec_int and near_half and max_order >= 2:
        raise NonAnalyticPoint(
            "exact charge crossing (E_J_eff = 0 at half-integer n_g): derivatives of "
            "order >= 2 are not analytic"
        )

    m, w = _converged_m(vp, bias.n_g0, bias.f, k)
    spec = CpbSpectrum(band_energies=w * _EGHZ, n_g=bias.n_g0, f=bias.f,
                       truncation_m=m)

    d1_int, gap = _hf(vp, bias.n_g0, bias.f, k, m)
    if gap <= _GAP_TOL * ec_int:
        raise DegenerateBand(f"band {k} gap below threshold at n_g = {bias.n_g0}")
    spec.derivatives[(k, 1)] = d1_int * _EGHZ
    spec.derivative_error[(k, 1)] = 2e-15 * abs(8.0 * ec_int) * _EGHZ
    if max_order == 1:
        return spec

    # band features vary over the n_g width of the avoided crossing, gap/(8 E_C);
    # shrink the step there so the Richardson series stays convergent
    width = gap / (8.0 * ec_int)
    h = min(_H_BASE, max(width / 8.0, 1e-6))
    h = max(h, 1e-5)

    cache: dict[float, float] = {0.0: d1_int}

    def g(offset):
        if offset not in cache:
            cache[offset] = _hf(vp, bias.n_g0 + offset, bias.f, k, m)[0]
        return cache[offset]

    stencils = {
        2: lambda s: (g(+s) - g(-s)) / (2.0 * s),
        3: lambda s: (g(+s) - 2.0 * g(0.0) + g(-s)) / s**2,
        4: lambda s: (g(+2 * s) - 2.0 * g(+s) + 2.0 * g(-s) - g(-2 * s)) / (2.0 * s**3),
    }
    # roundoff amplification of each stencil at the smallest Richardson level
    noise = {2: 1.0 / (h / 4), 3: 4.0 / (h / 4) ** 2, 4: 3.0 / (h / 4) ** 3}
    for order in range(2, max_order + 1):
        val, err = _richardson(stencils[order], h)
        g_scale = max(abs(v) for v in cache.values())
        floor = 1e-16 * g_scale * noise[order]
        err = max(err, floor)
        spec.derivatives[(k, order)] = val * _EGHZ
        spec.derivative_error[(k, order)] = err * _EGHZ
        # values buried in the stencil roundoff floor are "near zero", not failures
        near_zero = abs(val) <= max(1e-6 * ec_int, 1e3 * floor)
        if raise_unresolved and not near_zero and err > _REL_ERR_CAP * abs(val):
            raise DerivativeUnresolved(
                f"order-{order} derivative error {err:.3e} exceeds "
                f"{_REL_ERR_CAP} of value {val:.3e} (internal units)"
            )
    return spec
