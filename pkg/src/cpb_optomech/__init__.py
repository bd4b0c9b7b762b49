"""Cooper-pair-box mediated optomechanics.

Computes the radiation-pressure and cross-Kerr couplings of a tripartite
cavity / split-CPB / mechanical-capacitor circuit through two independent
models (quantum-capacitance circuit model and perturbative quantized model),
cross-checked by a truncated-Fock exact-diagonalization oracle.
"""

from .constants import CONSTS, PhysConsts
from .params import (
    BiasPoint,
    CircuitParams,
    GateGeometry,
    ValidatedParams,
    load_params,
    params_from_dict,
    params_from_energies,
    validate,
)
from .spectrum import (
    ChargeHamiltonian,
    CpbSpectrum,
    band_derivatives,
    band_energies,
    band_first_derivative_hf,
    build_charge_hamiltonian,
    effective_ej,
)
from .capnet import (
    CapMatrix,
    InverseShorthands,
    cap_matrix,
    infinite_bias_limits,
    inverse_shorthands_closed_form,
    numeric_inverse,
)
from .circuit import (
    CkHamiltonianReport,
    CouplingResult,
    EffectiveCapacitance,
    cavity_frequency,
    circuit_couplings,
    cross_kerr_coupling,
    direct_coupling,
    effective_capacitance,
    effective_ck_hamiltonian,
    radiation_pressure_coupling,
)
from .perturbative import (
    CouplingCoefficients,
    GreekCoefficients,
    QubitFields,
    coupling_coefficients,
    gck_perturbative,
    greek_coefficients,
    grp_perturbative,
    qubit_fields,
    two_level_band_derivatives,
)
from .fock import (
    DressedLevels,
    FockConfig,
    TripartiteSystem,
    build_tripartite_hamiltonian,
    dressed_levels,
    extract_gck,
    extract_grp,
    oracle_couplings,
)
from .sweep import (
    SweepConfig,
    SweepTable,
    compare_models,
    config_fingerprint,
    config_from_dict,
    emit,
    eval_point,
    load_config,
    run_ratio_ladder,
    run_sweep,
)
from . import errors

__version__ = "0.1.0"
