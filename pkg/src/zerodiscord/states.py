"""Generators for the state families used in tests, demos and the CLI."""
from dataclasses import dataclass

import numpy as np
from scipy.stats import unitary_group

from .density import BipartiteDensityMatrix, validate, validate_density
from .errors import InvalidDensityMatrixError
from .linalg import as_matrix, tensor_product


def xstate(x: float) -> BipartiteDensityMatrix:
    """Two-qubit X-state with diagonal ``(x, 1/2 - x, x, 1/2 - x)`` and
    anti-diagonal ``sqrt(x (1/2 - x))``, for ``x`` in ``[0, 1/2]``."""
    if not 0.0 <= x <= 0.5:
        raise ValueError(f"x must lie in [0, 0.5], got {x}")
    y = 0.5 - x
    s = np.sqrt(x * y)
    m = np.array([
        [x, 0, 0, s],
        [0, y, s, 0],
        [0, s, x, 0],
        [s, 0, 0, y],
    ], dtype=complex)
    return BipartiteDensityMatrix(2, 2, m)


def photon_pair_state(theta: float) -> BipartiteDensityMatrix:
    """Equal mixture of ``cos t |HH> + sin t |VV>`` and ``cos t |VH> + sin t |HV>``.

    H is basis index 0 and V index 1 on both photons, so the matrix is in the
    order ``HH, HV, VH, VV``.  For ``sin(2t) >= 0`` this is ``xstate(cos(t)^2 / 2)``.
    """
    c, s = np.cos(theta), np.sin(theta)
    hh, hv, vh, vv = np.eye(4)
    psi1 = c * hh + s * vv
    psi2 = c * vh + s * hv
    m = 0.5 * np.outer(psi1, psi1) + 0.5 * np.outer(psi2, psi2)
    return BipartiteDensityMatrix(2, 2, m.astype(complex))


def bell_state() -> BipartiteDensityMatrix:
    """``|Phi+> = (|00> + |11>) / sqrt(2)``."""
    psi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    return BipartiteDensityMatrix(2, 2, np.outer(psi, psi.conj()))


def product_state(rho_a, rho_b) -> BipartiteDensityMatrix:
    rho_a = validate_density(rho_a)
    rho_b = validate_density(rho_b)
    return BipartiteDensityMatrix(rho_a.shape[0], rho_b.shape[0], tensor_product(rho_a, rho_b))


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_density(dim: int, rank: int = None, seed=None) -> np.ndarray:
    """``G G^dag / Tr(G G^dag)`` for a ``dim x rank`` complex Gaussian ``G``."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    rng = _rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    w = g @ g.conj().T
    w = 0.5 * (w + w.conj().T)  # bitwise Hermitian
    return w / np.trace(w).real


def random_bipartite(dim_a: int, dim_b: int, rank: int = None, seed=None) -> BipartiteDensityMatrix:
    return BipartiteDensityMatrix(dim_a, dim_b, random_density(dim_a * dim_b, rank, seed))


def random_unitary(dim: int, seed=None) -> np.ndarray:
    """Haar-random unitary."""
    if dim == 1:
        return np.ones((1, 1), dtype=complex)
    return unitary_group.rvs(dim, random_state=_rng(seed))


@dataclass(frozen=True, eq=False)
class PointerCoefficients:
    """``values[i, j, k]``: weight of ``|i_A><j_A| (x) |k'><k'|`` in a pointer-form state."""

    dim_a: int
    dim_b: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if v.shape != (self.dim_a, self.dim_a, self.dim_b):
            raise ValueError(f"coefficient array has shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def check(self, tol: float = 1e-10):
        """Raise :class:`InvalidDensityMatrixError` if the coefficients cannot form a state."""
        v = self.values
        defects = {}
        herm = np.abs(v - v.conj().transpose(1, 0, 2)).max()
        if herm > tol:
            defects["hermiticity"] = herm
        slices = 0.5 * (v + v.conj().transpose(1, 0, 2))
        min_eig = min(np.linalg.eigvalsh(slices[:, :, k])[0] for k in range(self.dim_b))
        if min_eig < -tol:
            defects["positivity"] = -min_eig
        trace = abs(np.einsum("iik->", v) - 1.0)
        if trace > tol:
            defects["trace"] = trace
        if defects:
            raise InvalidDensityMatrixError(defects)


def random_pointer_coefficients(dim_a: int, dim_b: int, seed=None) -> PointerCoefficients:
    """Each ``k`` slice is an independent random PSD matrix; the total trace is one."""
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(dim_b))
    slices = [w * random_density(dim_a, seed=rng) for w in weights]
    return PointerCoefficients(dim_a, dim_b, np.stack(slices, axis=-1))


def pointer_state(c: PointerCoefficients, v) -> BipartiteDensityMatrix:
    """``sum_ijk C_ijk |i><j| (x) v|k><k|v^dag``: zero discord with ``v``'s columns as pointer basis."""
    c.check()
    v = as_matrix(v)
    if v.shape != (c.dim_b, c.dim_b):
        raise ValueError(f"unitary has shape {v.shape}, expected ({c.dim_b}, {c.dim_b})")
    if np.linalg.norm(v.conj().T @ v - np.eye(c.dim_b)) > 1e-10 * c.dim_b:
        raise ValueError("v is not unitary")
    n = c.dim_a * c.dim_b
    blocks = np.einsum("ak,ijk,bk->ijab", v, c.values, v.conj())
    m = blocks.transpose(0, 2, 1, 3).reshape(n, n)
    return validate(m, c.dim_a, c.dim_b)
