"""Physical constants (SI, 2019 redefinition: e and h are exact)."""

from dataclasses import dataclass
import math


@dataclass(frozen=True)
class PhysConsts:
    e_charge: float = 1.602176634e-19      # C
    h_planck: float = 6.62607015e-34       # J s

    @property
    def hbar(self) -> float:
        return self.h_planck / (2.0 * math.pi)

    @property
    def phi0(self) -> float:
        """Flux quantum h/2e."""
        return self.h_planck / (2.0 * self.e_charge)


CONSTS = PhysConsts()

E_CHARGE = CONSTS.e_charge
H_PLANCK = CONSTS.h_planck
HBAR = CONSTS.hbar
PHI0 = CONSTS.phi0


def ghz_to_joule(f_ghz: float) -> float:
    """Energy of a (plain, non-angular) frequency given in GHz."""
    return H_PLANCK * f_ghz * 1e9


def joule_to_ghz(energy: float) -> float:
    return energy / (H_PLANCK * 1e9)
