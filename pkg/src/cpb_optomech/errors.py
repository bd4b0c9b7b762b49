"""Exception hierarchy.

Grid sweeps convert the point-local conditions (NonAnalyticPoint, SeriesDivergence,
LabelingAmbiguous, DegeneratePoint, NotInPureCkRegime) into row flags instead of
aborting; everything else propagates.
"""


class CpbOptomechError(Exception):
    """Base class for all package errors."""


# --- parameter validation ---

class ParameterError(CpbOptomechError):
    pass


class NonPositiveParameter(ParameterError):
    pass


class XzpExceedsGap(ParameterError):
    pass


class NegativeJosephsonEnergy(ParameterError):
    pass


class InfeasibleCharging(ParameterError):
    """c_g10 alone already exceeds the total island capacitance implied by E_C."""


# --- charge-basis spectrum ---

class SpectrumError(CpbOptomechError):
    pass


class TruncationTooSmall(SpectrumError):
    pass


class ConvergenceFailure(SpectrumError):
    """Charge-basis truncation growth hit its cap without converging."""


class DegenerateBand(SpectrumError):
    """Band gap below threshold; Hellmann-Feynman derivative is ill-conditioned."""


class DerivativeUnresolved(SpectrumError):
    """Richardson error estimate too large for a value that is not near zero."""


class NonAnalyticPoint(SpectrumError):
    """Exact level crossing (E_J_eff = 0 at half-integer n_g): derivatives diverge."""


# --- capacitance network ---

class SingularNetwork(CpbOptomechError):
    pass


# --- circuit model ---

class SeriesDivergence(CpbOptomechError):
    """C_eff cancels -C_g2; the series combination (and omega_c) diverges."""


class NotInPureCkRegime(CpbOptomechError):
    """|g_rp| exceeds the configured fraction of |g_CK|."""


# --- perturbative model ---

class DegeneratePoint(CpbOptomechError):
    """Qubit field magnitude B = 0; the square-root expansion is undefined."""


# --- Fock oracle ---

class DimensionCap(CpbOptomechError):
    pass


class LabelingAmbiguous(CpbOptomechError):
    """Dressed-level overlap with every bare product state fell below 0.5."""


# --- sweeps / CLI ---

class ConfigInvalid(CpbOptomechError):
    pass


class OracleBudgetExceeded(ConfigInvalid):
    pass


class IoFailure(CpbOptomechError):
    pass
