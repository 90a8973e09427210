"""Dense complex linear algebra: products, commutators, Jacobi eigensolver and
simultaneous diagonalization of commuting normal families.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.
"""
import warnings
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConvergenceError, DimensionError, NonCommutingError, NotHermitianError

MAX_SWEEPS = 100
OFFDIAG_REL_TOL = 1e-14
DEGENERACY_REL = 1e-8


class TrivialFamilyWarning(UserWarning):
    """Raised (as a warning) when a family imposes no constraint on the basis."""


class HermitianEigenResult(NamedTuple):
    eigenvalues: np.ndarray  # real, descending
    eigenvectors: np.ndarray  # columns paired with eigenvalues


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex array with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {m.shape}")
    if m.size == 0:
        raise DimensionError("matrix has no entries")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def _as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    return m


def adjoint(a) -> np.ndarray:
    return as_matrix(a).conj().T


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def commutator(a, b) -> np.ndarray:
    """Return ``AB - BA``."""
    a, b = _as_square(a), _as_square(b)
    if a.shape != b.shape:
        raise DimensionError(f"commutator of {a.shape} and {b.shape}")
    return a @ b - b @ a


def frobenius_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product; the left factor is the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def offdiag_norm(a) -> float:
    """Frobenius norm of the off-diagonal part of a square matrix."""
    a = np.asarray(a)
    return float(np.linalg.norm(a[~np.eye(a.shape[0], dtype=bool)]))


def fix_column_phases(v: np.ndarray) -> np.ndarray:
    """Scale each column so its largest-modulus entry is real and positive."""
    v = np.array(v, dtype=complex)
    for k in range(v.shape[1]):
        idx = int(np.argmax(np.abs(v[:, k])))
        pivot = v[idx, k]
        if pivot != 0:
            v[:, k] *= np.conj(pivot) / abs(pivot)
    return v


def _jacobi_rotation(app, aqq, apq):
    # Unitary G acting on the (p, q) plane with (G^dag A G)[p, q] == 0.
    r = abs(apq)
    phase = apq / r
    tau = (aqq - app) / (2.0 * r)
    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    ph = np.conj(phase)
    return np.array([[c, s], [-s * ph, c * ph]], dtype=complex)


def hermitian_eig(h, tol: float = 1e-10) -> HermitianEigenResult:
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Parameters
    ----------
    h : array_like
        Square matrix with ``||h - h^dag||_F <= tol * ||h||_F``.
    tol : float
        Relative Hermiticity tolerance for the input check.

    Returns
    -------
    HermitianEigenResult
        Eigenvalues in descending order and a unitary whose columns are the
        matching eigenvectors, each with its largest-modulus entry real positive.
    """
    a = _as_square(h)
    n = a.shape[0]
    scale = np.linalg.norm(a)
    herm_defect = np.linalg.norm(a - a.conj().T)
    if herm_defect > tol * scale:
        raise NotHermitianError(herm_defect / scale, tol)
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)

    threshold = OFFDIAG_REL_TOL * scale
    for sweep in range(MAX_SWEEPS + 1):
        if offdiag_norm(a) <= threshold:
            break
        if sweep == MAX_SWEEPS:
            raise ConvergenceError(
                f"Jacobi did not converge in {MAX_SWEEPS} sweeps (off-diagonal {offdiag_norm(a):.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                g = _jacobi_rotation(a[p, p].real, a[q, q].real, apq)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ g

    evals = np.real(np.diag(a))
    order = np.argsort(-evals, kind="stable")
    return HermitianEigenResult(evals[order], fix_column_phases(v[:, order]))


def _hermitian_components(a, floor):
    parts = [0.5 * (a + a.conj().T), (a - a.conj().T) / 2j]
    return [p for p in parts if np.linalg.norm(p) > floor]


def _clusters(evals, threshold):
    groups = [[0]]
    for k in range(1, len(evals)):
        if evals[groups[-1][-1]] - evals[k] < threshold:
            groups[-1].append(k)
        else:
            groups.append([k])
    return groups


def _refine(q, members, floor):
    if q.shape[1] == 1 or not members:
        return [q]
    h, rest = members[0], members[1:]
    hr = q.conj().T @ h @ q
    hr = 0.5 * (hr + hr.conj().T)
    if np.linalg.norm(hr) <= floor:
        return _refine(q, rest, floor)
    evals, evecs = hermitian_eig(hr)
    spread = evals[0] - evals[-1]
    threshold = DEGENERACY_REL * max(spread, np.max(np.abs(evals)))
    out = []
    for group in _clusters(evals, threshold):
        out.extend(_refine(q @ evecs[:, group], rest, floor))
    return out


def check_commuting_normal(family: Sequence[np.ndarray], tol: float):
    """Raise :class:`NonCommutingError` unless the family is commuting and normal.

    Defects are measured relative to the product of operand norms; zero members
    are ignored.
    """
    norms = [np.linalg.norm(a) for a in family]
    for i, a in enumerate(family):
        if norms[i] == 0:
            continue
        c = np.linalg.norm(a @ a.conj().T - a.conj().T @ a)
        if c > tol * norms[i] ** 2:
            raise NonCommutingError((i, i), c, c / norms[i] ** 2)
        for j in range(i + 1, len(family)):
            if norms[j] == 0:
                continue
            c = np.linalg.norm(a @ family[j] - family[j] @ a)
            if c > tol * norms[i] * norms[j]:
                raise NonCommutingError((i, j), c, c / (norms[i] * norms[j]))


def simultaneous_diag(family: Sequence, tol: float = 1e-9, dim: int | None = None) -> np.ndarray:
    """Find one unitary ``U`` with ``U^dag A U`` diagonal for every ``A`` in ``family``.

    Every member is split into its Hermitian and anti-Hermitian parts.  The
    first part with non-negligible norm is diagonalized; each cluster of
    (near-)degenerate eigenvalues is then refined with the next part restricted
    to that eigenspace, until the parts run out or every cluster is a single
    vector.  An empty or all-zero family returns the identity with a
    :class:`TrivialFamilyWarning`; an empty family needs ``dim``.
    """
    family = [_as_square(a) for a in family]
    if not family:
        if dim is None:
            raise DimensionError("empty family has no dimension; pass dim")
        warnings.warn("empty family; any unitary diagonalizes it", TrivialFamilyWarning)
        return np.eye(dim, dtype=complex)
    n = family[0].shape[0]
    if any(a.shape != (n, n) for a in family):
        raise DimensionError("family members differ in shape")
    check_commuting_normal(family, tol)

    max_norm = max(np.linalg.norm(a) for a in family)
    if max_norm == 0:
        warnings.warn("all members are zero; any unitary diagonalizes them", TrivialFamilyWarning)
        return np.eye(n, dtype=complex)
    floor = tol * max_norm
    members = [p for a in family for p in _hermitian_components(a, floor)]
    u = fix_column_phases(np.hstack(_refine(np.eye(n, dtype=complex), members, floor)))

    for i, a in enumerate(family):
        resid = offdiag_norm(u.conj().T @ a @ u)
        if resid > tol * max(np.linalg.norm(a), floor):
            raise ConvergenceError(f"member {i} left with off-diagonal mass {resid:.3e}")
    return u
