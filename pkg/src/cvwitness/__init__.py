"""Optimal entanglement witnesses based on second moments of continuous-variable states."""

__version__ = "0.1.0"

from .product import (
    ProductWitness,
    balance_parameter,
    balanced_witness,
    decompose_xp,
    detects_product,
    product_value,
    scale_xp,
)
from .sdpcore import SdpProblem, SdpSolution, solve, weak_duality_residual
from .states import (
    add_noise,
    ghz_covariance,
    random_covariance,
    swap_state,
    two_mode_squeezed,
    ww_state,
)
from .symplectic import (
    CovarianceMatrix,
    ModePartition,
    apply_symplectic,
    beam_splitter_50_50,
    gaussian_entropy,
    is_valid_covariance,
    mode_permutation,
    p_measure,
    partial_transpose,
    pinch_xp,
    symplectic_eigenvalues,
    symplectic_form,
    symplectic_trace,
)
from .witness import (
    Bipartition,
    InfeasibleConstraintsError,
    MeasurementConstraint,
    WitnessError,
    WitnessResult,
    decide_separability,
    duan_witness,
    enumerate_bipartitions,
    fully_wit,
    multi_wit,
    symmetric_basis,
    validate_multipartite_witness,
    validate_witness,
    xp_cross_constraints,
)
