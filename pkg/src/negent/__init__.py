"""negent: the negative entanglement measure for separable states.

Exact two-qubit values via the spin-flip spectrum, a constructive optimal
mixer, a definitional minimization oracle, isotropic-state bounds, and a
transverse-field Ising application that detects the quantum phase transition
from entanglement-free two-site reduced states.
"""

from .qcore import (
    DensityMatrix,
    DensityValidationError,
    PureState,
    eig_hermitian,
    kron,
    partial_trace,
    partial_transpose,
    product_state,
    psd_sqrt,
    pure_state,
    read_density,
    validate_density,
    write_density,
)
from .measures import (
    WoottersData,
    concurrence_two_qubit,
    i_concurrence_pure,
    isotropic_i_concurrence,
    isotropic_state,
    lambda_two_qubit,
    maximally_entangled,
    ppt_min_eigenvalue,
    spin_flip,
    wootters_decomposition,
)
from .nem import (
    EntangledInput,
    MixingCertificate,
    NoFeasiblePoint,
    OracleConfig,
    is_ess_two_qubit,
    nem_diagonal,
    nem_isotropic_lower_bound,
    nem_oracle,
    nem_pure_product,
    nem_two_qubit,
    optimal_mixer,
    sample_separable,
)
from .ising import (
    CorrelatorSet,
    EntangledRdm,
    SweepResult,
    correlator_g,
    correlator_set,
    ed_two_site_rdm,
    nem_sweep,
    two_site_rdm,
    validate_pipeline,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "DensityMatrix",
    "DensityValidationError",
    "PureState",
    "eig_hermitian",
    "kron",
    "partial_trace",
    "partial_transpose",
    "product_state",
    "psd_sqrt",
    "pure_state",
    "read_density",
    "validate_density",
    "write_density",
    "WoottersData",
    "concurrence_two_qubit",
    "i_concurrence_pure",
    "isotropic_i_concurrence",
    "isotropic_state",
    "lambda_two_qubit",
    "maximally_entangled",
    "ppt_min_eigenvalue",
    "spin_flip",
    "wootters_decomposition",
    "EntangledInput",
    "MixingCertificate",
    "NoFeasiblePoint",
    "OracleConfig",
    "is_ess_two_qubit",
    "nem_diagonal",
    "nem_isotropic_lower_bound",
    "nem_oracle",
    "nem_pure_product",
    "nem_two_qubit",
    "optimal_mixer",
    "sample_separable",
    "CorrelatorSet",
    "EntangledRdm",
    "SweepResult",
    "correlator_g",
    "correlator_set",
    "ed_two_site_rdm",
    "nem_sweep",
    "two_site_rdm",
    "validate_pipeline",
    "write_sweep_csv",
    "__version__",
]
