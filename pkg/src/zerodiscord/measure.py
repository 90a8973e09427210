"""Discord for a fixed measurement basis, its minimization for a qubit apparatus,
the X-state closed form and the measurement-disturbance oracle.

All qubit searches run over Bloch angles ``(theta, phi)`` of the first
projector ``|k1> = cos(theta/2)|1> + e^{i phi} sin(theta/2)|2>``: a coarse grid
evaluated in one vectorized pass, then coordinate-wise bounded line searches
inside a window that halves each iteration.
"""
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .density import (
    NEGLIGIBLE_PROBABILITY,
    BipartiteDensityMatrix,
    ProjectorBasis,
    _as_basis,
    entropy_from_eigenvalues,
    partial_trace_a,
    von_neumann_entropy,
)
from .errors import DimensionError

DEFAULT_GRID = (64, 128)
DEFAULT_REFINE_STEPS = 40
MIN_STEP = 1e-6
CLAMP = 1e-9


@dataclass(frozen=True)
class QubitProjectorParams:
    theta: float
    phi: float

    def basis(self) -> ProjectorBasis:
        return ProjectorBasis(2, qubit_basis(self.theta, self.phi))


@dataclass(frozen=True)
class DiscordEstimate:
    value: float
    argmin: QubitProjectorParams
    grid_resolution: Tuple[int, int]
    refinement_iterations: int


def qubit_basis(theta, phi) -> np.ndarray:
    """Unitary whose columns are the Bloch-angle projector pair; batched over array inputs.

    Both columns have a real non-negative first component.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    w = np.empty(np.broadcast(theta, phi).shape + (2, 2), dtype=complex)
    w[..., 0, 0] = c
    w[..., 1, 0] = e * s
    w[..., 0, 1] = s
    w[..., 1, 1] = -e * c
    return w


def canonical_angles(theta: float, phi: float) -> QubitProjectorParams:
    """Fold any ``(theta, phi)`` to ``[0, pi] x [0, 2 pi)`` without changing the projectors."""
    theta = float(np.mod(theta, 2 * np.pi))
    if theta > np.pi:
        theta = 2 * np.pi - theta
        phi = phi + np.pi
    return QubitProjectorParams(theta, float(np.mod(phi, 2 * np.pi)))


def _require_qubit(rho):
    if rho.dim_b != 2:
        raise DimensionError(f"qubit apparatus required (dim_b = 2), got dim_b = {rho.dim_b}")


def _rotated(rho: BipartiteDensityMatrix, w: np.ndarray) -> np.ndarray:
    # [..., i, a, j, b] = <i a'| rho |j b'> for the basis columns a', b' of w
    return np.einsum("...ca,icjd,...db->...iajb", w.conj(), rho.tensor(), w)


def _conditional_entropy(rho: BipartiteDensityMatrix, w: np.ndarray) -> np.ndarray:
    r = _rotated(rho, w)
    m = rho.dim_b
    sigma = np.stack([r[..., :, k, :, k] for k in range(m)], axis=-3)
    p = np.trace(sigma, axis1=-2, axis2=-1).real
    lam = np.linalg.eigvalsh(sigma)
    # sum_k p_k S(sigma_k / p_k) = sum_k [S_unnormalized(sigma_k) + p_k log2 p_k]
    keep = p >= NEGLIGIBLE_PROBABILITY
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(keep, p * np.log2(np.where(keep, p, 1.0)), 0.0)
    per_outcome = np.where(keep, entropy_from_eigenvalues(lam) + plogp, 0.0)
    return per_outcome.sum(axis=-1)


def _offdiag_mass(r: np.ndarray, m: int) -> np.ndarray:
    mask = ~np.eye(m, dtype=bool)
    weights = np.abs(r) ** 2  # [..., i, a, j, b]
    per_ab = weights.sum(axis=(-4, -2))  # [..., a, b]
    return (per_ab * mask).sum(axis=(-2, -1))


def discord_for_basis(rho: BipartiteDensityMatrix, basis) -> float:
    """``sum_k p_k S(rho_k) - S(rho) + S(rho_B)`` in bits for a projective measurement of B."""
    basis = _as_basis(basis)
    if basis.dim != rho.dim_b:
        raise DimensionError(f"basis dim {basis.dim} != dim_b {rho.dim_b}")
    cond = float(_conditional_entropy(rho, basis.basis))
    return cond - von_neumann_entropy(rho.matrix) + von_neumann_entropy(partial_trace_a(rho))


def _bloch_search(objective: Callable, grid, refine_steps: int):
    n_theta, n_phi = grid
    thetas = np.linspace(0.0, np.pi, n_theta)
    phis = np.linspace(0.0, 2 * np.pi, n_phi, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    values = objective(qubit_basis(tt, pp))
    # argmin over the row-major grid breaks ties in lexicographic (theta, phi) order
    flat = int(np.argmin(values))
    it, ip = divmod(flat, n_phi)
    theta, phi, best = thetas[it], phis[ip], float(values.flat[flat])

    def f(t, p):
        return float(objective(qubit_basis(t, p)))

    h_theta = np.pi / max(n_theta - 1, 1)
    h_phi = 2 * np.pi / n_phi
    iterations = 0
    for _ in range(refine_steps):
        if max(h_theta, h_phi) < MIN_STEP:
            break
        iterations += 1
        res = minimize_scalar(lambda t: f(t, phi), bounds=(theta - h_theta, theta + h_theta),
                              method="bounded", options={"xatol": 1e-12})
        if res.fun < best:
            theta, best = float(res.x), float(res.fun)
        res = minimize_scalar(lambda p: f(theta, p), bounds=(phi - h_phi, phi + h_phi),
                              method="bounded", options={"xatol": 1e-12})
        if res.fun < best:
            phi, best = float(res.x), float(res.fun)
        h_theta /= 2
        h_phi /= 2
    return canonical_angles(theta, phi), iterations


def minimize_discord_qubit(rho: BipartiteDensityMatrix, grid=DEFAULT_GRID,
                           refine_steps: int = DEFAULT_REFINE_STEPS) -> DiscordEstimate:
    """Minimum of :func:`discord_for_basis` over projective measurements of a qubit B.

    Values within 1e-9 below zero are reported as 0.
    """
    _require_qubit(rho)
    params, iterations = _bloch_search(lambda w: _conditional_entropy(rho, w), grid, refine_steps)
    value = discord_for_basis(rho, params.basis())
    if -CLAMP <= value < 0:
        value = 0.0
    return DiscordEstimate(value, params, tuple(grid), iterations)


def _binary_terms(p):
    return 0.0 if p <= 0 else -p * np.log2(p)


def xstate_discord_closed_form(x: float) -> float:
    """Discord of :func:`~zerodiscord.states.xstate` ``(x)`` in bits."""
    if not 0.0 <= x <= 0.5:
        raise ValueError(f"x must lie in [0, 0.5], got {x}")
    r = np.sqrt(2 * x * (1 - 2 * x))
    value = (-1.0 + _binary_terms(2 * x) + _binary_terms(1 - 2 * x)
             + _binary_terms(0.5 - r) + _binary_terms(0.5 + r))
    return max(value, 0.0) if value > -CLAMP else value


def measured_state(rho: BipartiteDensityMatrix, basis) -> BipartiteDensityMatrix:
    """Post-measurement state ``sum_k (I (x) P_k) rho (I (x) P_k)`` of a non-selective measurement of B."""
    basis = _as_basis(basis)
    if basis.dim != rho.dim_b:
        raise DimensionError(f"basis dim {basis.dim} != dim_b {rho.dim_b}")
    out = np.zeros_like(rho.matrix)
    eye = np.eye(rho.dim_a)
    for proj in basis.projectors():
        big = np.kron(eye, proj)
        out += big @ rho.matrix @ big
    return BipartiteDensityMatrix(rho.dim_a, rho.dim_b, out)


def disturbance(rho: BipartiteDensityMatrix, basis) -> float:
    """``||measured_state(rho, basis) - rho||_F``."""
    basis = _as_basis(basis)
    return float(np.sqrt(_offdiag_mass(_rotated(rho, basis.basis), rho.dim_b)))


def disturbance_min(rho: BipartiteDensityMatrix, grid=DEFAULT_GRID,
                    refine_steps: int = DEFAULT_REFINE_STEPS) -> float:
    """Smallest disturbance over all projective measurements of a qubit B.

    Zero exactly when some measurement leaves the state unchanged, which is an
    independent route to the zero-discord decision.
    """
    return disturbance_argmin(rho, grid, refine_steps)[0]


def disturbance_argmin(rho: BipartiteDensityMatrix, grid=DEFAULT_GRID,
                       refine_steps: int = DEFAULT_REFINE_STEPS):
    """Like :func:`disturbance_min` but also returns the minimizing angles."""
    _require_qubit(rho)
    params, _ = _bloch_search(lambda w: _offdiag_mass(_rotated(rho, w), 2), grid, refine_steps)
    return disturbance(rho, params.basis()), params
