"""Bipartite density matrices, partial traces, entropies and measurement-conditioned states.

Basis order is fixed throughout the package: subsystem A is the slow index and
B the fast one, i.e. ``|1_A 1_B>, ..., |1_A M_B>, |2_A 1_B>, ..., |N_A M_B>``.
Row ``i * M + k`` of the matrix (0-based) is ``|i_A k_B>``.
"""
from dataclasses import dataclass
from typing import List, NamedTuple

import numpy as np

from .errors import DimensionError, InvalidDensityMatrixError
from .linalg import as_matrix

ENTROPY_CLAMP = 1e-10
NEGLIGIBLE_PROBABILITY = 1e-12


@dataclass(frozen=True, eq=False)
class BipartiteDensityMatrix:
    """An ``(N*M) x (N*M)`` matrix with its split into ``dim_a = N`` and ``dim_b = M``.

    Construction does not check physicality; use :func:`validate` for that.
    """

    dim_a: int
    dim_b: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = self.dim_a * self.dim_b
        if m.shape != (n, n):
            raise DimensionError(f"matrix shape {m.shape} does not match dims ({self.dim_a}, {self.dim_b})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dims(self):
        return self.dim_a, self.dim_b

    def tensor(self) -> np.ndarray:
        """View as a 4-index array ``[i, k, j, l]`` = ``<i_A k_B| rho |j_A l_B>``."""
        return self.matrix.reshape(self.dim_a, self.dim_b, self.dim_a, self.dim_b)


@dataclass(frozen=True, eq=False)
class ProjectorBasis:
    """Orthonormal basis of B; column ``k`` is ``|k_B>``."""

    dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=complex)
        if b.shape != (self.dim, self.dim):
            raise DimensionError(f"basis shape {b.shape} for dim {self.dim}")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    def projectors(self) -> np.ndarray:
        """Stack of rank-one projectors ``|k><k|``, shape ``(M, M, M)``."""
        return np.einsum("ik,jk->kij", self.basis, self.basis.conj())


def projector_basis(matrix, tol: float = 1e-10) -> ProjectorBasis:
    """Wrap a unitary matrix as a :class:`ProjectorBasis`, checking unitarity."""
    b = as_matrix(matrix)
    m = b.shape[0]
    if b.shape != (m, m):
        raise DimensionError(f"basis must be square, got {b.shape}")
    defect = np.linalg.norm(b.conj().T @ b - np.eye(m))
    if defect > tol * m:
        raise ValueError(f"basis is not unitary: ||B^dag B - I||_F = {defect:.3e}")
    return ProjectorBasis(m, b)


def _as_basis(basis) -> ProjectorBasis:
    return basis if isinstance(basis, ProjectorBasis) else projector_basis(basis)


def density_defects(matrix: np.ndarray, tol: float = 1e-10) -> dict:
    """Hermiticity, trace and positivity defects of a square matrix that exceed ``tol``."""
    scale = max(np.linalg.norm(matrix), np.finfo(float).tiny)
    defects = {}
    herm = np.linalg.norm(matrix - matrix.conj().T) / scale
    if herm > tol:
        defects["hermiticity"] = herm
    trace = abs(np.trace(matrix) - 1.0)
    if trace > tol:
        defects["trace"] = trace
    min_eig = np.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T))[0]
    if min_eig < -tol:
        defects["positivity"] = -min_eig
    return defects


def validate_density(matrix, tol: float = 1e-10) -> np.ndarray:
    """Check a single-system density matrix; returns it as a complex array."""
    m = as_matrix(matrix)
    if m.shape[0] != m.shape[1]:
        raise InvalidDensityMatrixError({"shape": float(abs(m.shape[0] - m.shape[1]))})
    defects = density_defects(m, tol)
    if defects:
        raise InvalidDensityMatrixError(defects)
    return m


def validate(matrix, dim_a: int, dim_b: int, tol: float = 1e-10) -> BipartiteDensityMatrix:
    """Return a :class:`BipartiteDensityMatrix` or raise :class:`InvalidDensityMatrixError`.

    All failing checks are reported together, each with its magnitude.
    """
    if dim_a < 1 or dim_b < 1:
        raise DimensionError(f"dimensions must be positive, got ({dim_a}, {dim_b})")
    m = as_matrix(matrix)
    n = dim_a * dim_b
    if m.shape != (n, n):
        raise InvalidDensityMatrixError({"size": float(abs(m.shape[0] - n) + abs(m.shape[1] - n))})
    defects = density_defects(m, tol)
    if defects:
        raise InvalidDensityMatrixError(defects)
    return BipartiteDensityMatrix(dim_a, dim_b, m)


def partial_trace_a(rho: BipartiteDensityMatrix) -> np.ndarray:
    """Reduced state of B, the sum of the diagonal blocks."""
    return np.einsum("ikil->kl", rho.tensor())


def partial_trace_b(rho: BipartiteDensityMatrix) -> np.ndarray:
    """Reduced state of A."""
    return np.einsum("ikjk->ij", rho.tensor())


def entropy_from_eigenvalues(evals) -> np.ndarray:
    """``-sum(lam * log2(lam))`` along the last axis, with ``0 log 0 = 0``.

    Accepts a batch of spectra; values below zero are clipped first.
    """
    lam = np.clip(np.asarray(evals, dtype=float), 0.0, None)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0, -lam * np.log2(np.where(lam > 0, lam, 1.0)), 0.0)
    return terms.sum(axis=-1)


def von_neumann_entropy(h, tol: float = 1e-10) -> float:
    """Von Neumann entropy in bits.

    The input must be Hermitian, trace one and positive semidefinite to
    ``tol``; eigenvalues in ``[-tol, 0)`` are treated as zero.
    """
    m = validate_density(h, tol)
    evals = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    s = float(entropy_from_eigenvalues(evals))
    return min(max(s, 0.0), np.log2(m.shape[0]))


class ConditionalState(NamedTuple):
    probability: float
    state: np.ndarray
    negligible: bool


def conditional_states(rho: BipartiteDensityMatrix, basis) -> List[ConditionalState]:
    """States of A conditioned on each outcome of a projective measurement of B.

    For outcome ``k`` the probability is ``Tr_A <k|rho|k>`` and the state is
    ``<k|rho|k> / p_k``.  Outcomes with ``p_k`` below 1e-12 come back as a zero
    matrix with ``negligible=True``.
    """
    basis = _as_basis(basis)
    if basis.dim != rho.dim_b:
        raise DimensionError(f"basis dim {basis.dim} != dim_b {rho.dim_b}")
    w = basis.basis
    sigma = np.einsum("ck,icjd,dk->kij", w.conj(), rho.tensor(), w)
    out = []
    for s in sigma:
        p = float(np.trace(s).real)
        if p < NEGLIGIBLE_PROBABILITY:
            out.append(ConditionalState(max(p, 0.0), np.zeros_like(s), True))
        else:
            out.append(ConditionalState(p, s / p, False))
    return out


def swap_subsystems(rho: BipartiteDensityMatrix) -> BipartiteDensityMatrix:
    """Exchange the roles of A and B (perfect-shuffle re-indexing)."""
    t = rho.tensor().transpose(1, 0, 3, 2)
    n = rho.dim_a * rho.dim_b
    return BipartiteDensityMatrix(rho.dim_b, rho.dim_a, t.reshape(n, n))
