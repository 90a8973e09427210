"""Zero-discord test by block normality and commutation, plus pointer-basis extraction.

Slicing a bipartite density matrix along the A index gives ``N^2`` blocks
``B_ij = <i_A| rho |j_A>`` of size ``M x M``.  The state is classical on B
(zero discord with B as the apparatus) exactly when every block is normal and
all blocks commute, because then a single unitary on B diagonalizes them all,
and its columns are the measurement basis that leaves the state untouched.
"""
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .density import BipartiteDensityMatrix, partial_trace_a, swap_subsystems, validate_density
from .errors import DimensionError, NonzeroDiscordError, PointerResidualError
from .linalg import offdiag_norm, simultaneous_diag, tensor_product

DEFAULT_TOL = 1e-9
# blocks this small relative to the largest one are treated as exact zeros
ZERO_BLOCK_REL = 1e-14

BlockIndex = Tuple[int, int]


@dataclass(frozen=True, eq=False)
class BlockPartition:
    """``blocks[i, j]`` is the ``M x M`` block ``<i_A| rho |j_A>`` (0-based indices)."""

    dim_a: int
    dim_b: int
    blocks: np.ndarray

    def __post_init__(self):
        b = np.array(self.blocks, dtype=complex)
        shape = (self.dim_a, self.dim_a, self.dim_b, self.dim_b)
        if b.shape != shape:
            raise DimensionError(f"blocks have shape {b.shape}, expected {shape}")
        b.setflags(write=False)
        object.__setattr__(self, "blocks", b)

    def __getitem__(self, ij):
        return self.blocks[ij]


@dataclass(frozen=True)
class DiscordVerdict:
    """Outcome of :func:`zero_discord_verdict`.

    Defects are scale-free: commutator norms divided by the product of the
    operand norms.  ``worst_pair`` names the two blocks (0-based ``(i, j)``
    labels) behind the largest defect; a normality failure shows up as a
    block paired with itself.  ``adjoint_commutation_defect`` is a diagnostic
    only, the largest ``[B, B'^dag]`` defect, which must vanish along with the
    other two for a commuting normal family.
    """

    is_zero: bool
    max_normality_defect: float
    max_commutation_defect: float
    worst_pair: Optional[Tuple[BlockIndex, BlockIndex]]
    tolerance_used: float
    adjoint_commutation_defect: float = 0.0

    @property
    def normality_ok(self) -> bool:
        return self.max_normality_defect <= self.tolerance_used

    @property
    def commutation_ok(self) -> bool:
        return self.max_commutation_defect <= self.tolerance_used


@dataclass(frozen=True, eq=False)
class PointerBasis:
    """Measurement basis on B that leaves a zero-discord state unchanged.

    ``unitary[:, k]`` is the k-th pointer vector and ``coefficients[i, j, k]``
    the k-th diagonal entry of ``U^dag B_ij U``.  ``eigen_diagnostics[i, j]``
    is the off-diagonal Frobenius mass left in that rotated block.
    """

    unitary: np.ndarray
    coefficients: np.ndarray
    eigen_diagnostics: np.ndarray = field(repr=False)
    reduced_state_residual: float = 0.0

    @property
    def projectors(self) -> np.ndarray:
        u = self.unitary
        return np.einsum("ik,jk->kij", u, u.conj())


def block_partition(rho: BipartiteDensityMatrix) -> BlockPartition:
    blocks = rho.tensor().transpose(0, 2, 1, 3)
    return BlockPartition(rho.dim_a, rho.dim_b, blocks)


def reconstruct(p: BlockPartition) -> BipartiteDensityMatrix:
    """Reassemble ``sum_ij |i><j| (x) B_ij``; the result is not validated."""
    n = p.dim_a * p.dim_b
    return BipartiteDensityMatrix(p.dim_a, p.dim_b, p.blocks.transpose(0, 2, 1, 3).reshape(n, n))


def _verdict_from_blocks(blocks: np.ndarray, tol: float) -> DiscordVerdict:
    dim_a = blocks.shape[0]
    labels = [(i, j) for i in range(dim_a) for j in range(dim_a)]
    flat = blocks.reshape(dim_a * dim_a, *blocks.shape[2:])
    norms = np.linalg.norm(flat, axis=(1, 2))
    live = norms > ZERO_BLOCK_REL * norms.max()

    normality = 0.0
    commutation = 0.0
    adjoint_comm = 0.0
    worst, worst_value = None, -1.0
    for a in range(len(flat)):
        if not live[a]:
            continue
        b = flat[a]
        bd = b.conj().T
        d = np.linalg.norm(b @ bd - bd @ b) / norms[a] ** 2
        normality = max(normality, d)
        if d > worst_value:
            worst, worst_value = (labels[a], labels[a]), d
        others = np.flatnonzero(live[a + 1:]) + a + 1
        if others.size == 0:
            continue
        rest = flat[others]
        scale = norms[a] * norms[others]
        comm = np.linalg.norm(b @ rest - rest @ b, axis=(1, 2)) / scale
        adj = np.linalg.norm(b @ rest.conj().transpose(0, 2, 1) - rest.conj().transpose(0, 2, 1) @ b,
                             axis=(1, 2)) / scale
        adjoint_comm = max(adjoint_comm, float(adj.max()))
        k = int(np.argmax(comm))
        commutation = max(commutation, float(comm[k]))
        if comm[k] > worst_value:
            worst, worst_value = (labels[a], labels[others[k]]), float(comm[k])

    if worst_value <= 0.0:
        worst = None
    is_zero = normality <= tol and commutation <= tol
    return DiscordVerdict(bool(is_zero), float(normality), float(commutation), worst, tol, float(adjoint_comm))


def zero_discord_verdict(rho: BipartiteDensityMatrix, tol: float = DEFAULT_TOL,
                         apparatus: str = "B") -> DiscordVerdict:
    """Decide whether ``rho`` has zero discord with the given subsystem measured.

    Parameters
    ----------
    rho : BipartiteDensityMatrix
    tol : float
        Threshold on the scale-free normality and commutation defects.
    apparatus : {"B", "A"}
        Measured subsystem.  ``"A"`` runs the same test on the swapped state.
    """
    if apparatus.upper() == "A":
        rho = swap_subsystems(rho)
    elif apparatus.upper() != "B":
        raise ValueError(f"apparatus must be 'A' or 'B', got {apparatus!r}")
    return _verdict_from_blocks(block_partition(rho).blocks, tol)


def fit_pointer(rho: BipartiteDensityMatrix, unitary) -> PointerBasis:
    """Best pointer-form coefficients for a fixed basis: the diagonals of ``U^dag B_ij U``."""
    u = np.asarray(unitary, dtype=complex)
    blocks = block_partition(rho).blocks
    rotated = np.einsum("ka,ijkl,lb->ijab", u.conj(), blocks, u)
    coeffs = np.einsum("ijkk->ijk", rotated).copy()
    diag = np.zeros(rho.dim_a * rho.dim_a)
    for n, r in enumerate(rotated.reshape(-1, rho.dim_b, rho.dim_b)):
        diag[n] = offdiag_norm(r)
    rho_b = u.conj().T @ partial_trace_a(rho) @ u
    return PointerBasis(u, coeffs, diag.reshape(rho.dim_a, rho.dim_a), offdiag_norm(rho_b))


def _canonical_column_order(u: np.ndarray) -> np.ndarray:
    """Sort columns by the first row where each reaches its largest modulus
    (near-ties within 1e-12 go to the lower row), so a basis that is a
    permutation of the computational one comes out as the identity."""
    mod = np.abs(u)
    lead = np.argmax(mod >= mod.max(axis=0) - 1e-12, axis=0)
    return u[:, np.argsort(lead, kind="stable")]


def pointer_basis(rho: BipartiteDensityMatrix, tol: float = DEFAULT_TOL) -> PointerBasis:
    """Extract the non-disturbing measurement basis of a zero-discord state.

    The first nonzero block fixes the basis when its spectrum is simple;
    degenerate eigenspaces are split using the remaining blocks.  Raises
    :class:`NonzeroDiscordError` when the block test fails and
    :class:`PointerResidualError` when the rotated blocks, or the rotated
    reduced state of B, keep off-diagonal mass above ``tol`` times the
    largest block norm.
    """
    verdict = zero_discord_verdict(rho, tol)
    if not verdict.is_zero:
        raise NonzeroDiscordError(verdict)
    blocks = block_partition(rho).blocks
    flat = blocks.reshape(-1, rho.dim_b, rho.dim_b)
    norms = np.linalg.norm(flat, axis=(1, 2))
    family = [b for b, n in zip(flat, norms) if n > ZERO_BLOCK_REL * norms.max()]
    u = _canonical_column_order(simultaneous_diag(family, tol))

    pb = fit_pointer(rho, u)
    limit = tol * norms.max()
    if pb.eigen_diagnostics.max() > limit:
        raise PointerResidualError(
            f"block off-diagonal residual {pb.eigen_diagnostics.max():.3e} exceeds {limit:.3e}",
            pb.eigen_diagnostics,
        )
    if pb.reduced_state_residual > tol * np.linalg.norm(partial_trace_a(rho)):
        raise PointerResidualError(
            f"reduced state of B not diagonal in pointer basis (residual {pb.reduced_state_residual:.3e})"
        )
    return pb


def pointer_reconstruction(dim_a: int, pb: PointerBasis) -> np.ndarray:
    """``sum_ijk C_ijk |i><j| (x) U|k><k|U^dag`` as a full matrix."""
    u = pb.unitary
    m = u.shape[0]
    blocks = np.einsum("ak,ijk,bk->ijab", u, pb.coefficients, u.conj())
    return blocks.transpose(0, 2, 1, 3).reshape(dim_a * m, dim_a * m)


def verify_pointer(rho: BipartiteDensityMatrix, pb: PointerBasis) -> float:
    """Frobenius distance between ``rho`` and its pointer-form reconstruction."""
    if pb.unitary.shape[0] != rho.dim_b or pb.coefficients.shape[:2] != (rho.dim_a, rho.dim_a):
        raise DimensionError("pointer basis does not match the state's dimensions")
    return float(np.linalg.norm(rho.matrix - pointer_reconstruction(rho.dim_a, pb)))


def separability_hint(p: BlockPartition, tol: float = DEFAULT_TOL) -> bool:
    """True when every block is diagonal to ``tol``.

    Such a state is a mixture of products of computational basis states of B
    with states of A, hence separable.  False says nothing either way.
    """
    flat = p.blocks.reshape(-1, p.dim_b, p.dim_b)
    return all(offdiag_norm(b) <= tol for b in flat)


def extend_with_ancilla(rho: BipartiteDensityMatrix, rho_c, tol: float = DEFAULT_TOL):
    """Verdicts on ``rho`` and on ``rho (x) rho_c`` with the ancilla appended to B.

    A generalized measurement on B is a projective one on B plus an ancilla,
    so the two flags must agree: every enlarged block is ``B_ij (x) rho_c``
    and ``[B (x) C, B' (x) C] = [B, B'] (x) C^2``.
    """
    rho_c = validate_density(rho_c)
    k = rho_c.shape[0]
    extended = BipartiteDensityMatrix(rho.dim_a, rho.dim_b * k, tensor_product(rho.matrix, rho_c))
    return zero_discord_verdict(rho, tol), zero_discord_verdict(extended, tol)
