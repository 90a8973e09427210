"""Zero quantum discord via block normality and commutation.

A bipartite density matrix on ``A (x) B`` is cut into ``N^2`` blocks along the
A index.  It has zero discord with B as the measured subsystem exactly when
the blocks are normal and mutually commuting; the unitary that diagonalizes
them all gives the measurement basis that leaves the state undisturbed.
"""
from .criterion import (
    BlockPartition,
    DiscordVerdict,
    PointerBasis,
    block_partition,
    extend_with_ancilla,
    fit_pointer,
    pointer_basis,
    reconstruct,
    separability_hint,
    verify_pointer,
    zero_discord_verdict,
)
from .density import (
    BipartiteDensityMatrix,
    ProjectorBasis,
    conditional_states,
    partial_trace_a,
    partial_trace_b,
    projector_basis,
    swap_subsystems,
    validate,
    validate_density,
    von_neumann_entropy,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    InvalidDensityMatrixError,
    NonCommutingError,
    NonzeroDiscordError,
    NotHermitianError,
    PointerResidualError,
)
from .linalg import (
    HermitianEigenResult,
    adjoint,
    commutator,
    frobenius_norm,
    hermitian_eig,
    matmul,
    simultaneous_diag,
    tensor_product,
)
from .measure import (
    DiscordEstimate,
    QubitProjectorParams,
    discord_for_basis,
    disturbance,
    disturbance_min,
    measured_state,
    minimize_discord_qubit,
    qubit_basis,
    xstate_discord_closed_form,
)
from .states import (
    PointerCoefficients,
    bell_state,
    photon_pair_state,
    pointer_state,
    product_state,
    random_bipartite,
    random_density,
    random_pointer_coefficients,
    random_unitary,
    xstate,
)

__version__ = "0.1.0"
