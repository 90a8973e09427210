import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zerodiscord.criterion import (
    block_partition,
    extend_with_ancilla,
    fit_pointer,
    pointer_basis,
    reconstruct,
    separability_hint,
    verify_pointer,
    zero_discord_verdict,
)
from zerodiscord.density import partial_trace_a, swap_subsystems, validate
from zerodiscord.errors import InvalidDensityMatrixError, NonzeroDiscordError
from zerodiscord.linalg import offdiag_norm
from zerodiscord.measure import disturbance_min
from zerodiscord.states import (
    PointerCoefficients,
    bell_state,
    pointer_state,
    product_state,
    random_bipartite,
    random_density,
    random_pointer_coefficients,
    random_unitary,
    xstate,
)

from conftest import HADAMARD, SX, haar_unitary, same_up_to_phase_and_order


def test_partition_xstate_blocks():
    x = 0.1
    s = np.sqrt(x * (0.5 - x))
    p = block_partition(xstate(x))
    for i in range(2):
        np.testing.assert_array_equal(p[i, i], np.diag([x, 0.5 - x]))
    np.testing.assert_array_equal(p[0, 1], s * SX)
    np.testing.assert_array_equal(p[1, 0], s * SX)


def test_partition_index_map():
    rho = random_bipartite(3, 2, seed=11)
    p = block_partition(rho)
    for i in range(3):
        for j in range(3):
            for r in range(2):
                for c in range(2):
                    assert p[i, j][r, c] == rho.matrix[i * 2 + r, j * 2 + c]


def test_partition_product_state():
    ra, rb = random_density(2, seed=12), random_density(3, seed=13)
    p = block_partition(product_state(ra, rb))
    for i in range(2):
        for j in range(2):
            np.testing.assert_allclose(p[i, j], ra[i, j] * rb, atol=1e-16)


def test_partition_2x3_round_trip():
    rho = random_bipartite(2, 3, seed=14)
    p = block_partition(rho)
    assert p.blocks.shape == (2, 2, 3, 3)
    np.testing.assert_array_equal(reconstruct(p).matrix, rho.matrix)


def test_reconstruct_matches_sum_of_outer_products():
    rho = random_bipartite(3, 3, seed=15)
    p = block_partition(rho)
    total = sum(np.kron(np.outer(np.eye(3)[i], np.eye(3)[j]), p[i, j]) for i in range(3) for j in range(3))
    np.testing.assert_array_equal(reconstruct(p).matrix, total)
    np.testing.assert_array_equal(reconstruct(block_partition(xstate(0.1))).matrix, xstate(0.1).matrix)


def test_reconstruct_zero_blocks_rejected_by_validate():
    from zerodiscord.criterion import BlockPartition
    z = reconstruct(BlockPartition(2, 2, np.zeros((2, 2, 2, 2))))
    np.testing.assert_array_equal(z.matrix, 0)
    with pytest.raises(InvalidDensityMatrixError):
        validate(z.matrix, 2, 2)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_and_hermiticity_propagation(seed):
    rng = np.random.default_rng(seed)
    n, m = int(rng.integers(1, 5)), int(rng.integers(1, 5))
    rho = random_bipartite(n, m, seed=rng)
    p = block_partition(rho)
    np.testing.assert_array_equal(reconstruct(p).matrix, rho.matrix)
    for i in range(n):
        for j in range(n):
            np.testing.assert_array_equal(p[j, i], p[i, j].conj().T)
    assert sum(np.trace(p[i, i]).real for i in range(n)) == pytest.approx(1.0, abs=1e-10)


def test_verdict_xstate_quarter():
    v = zero_discord_verdict(xstate(0.25))
    assert v.is_zero and v.normality_ok and v.commutation_ok


def test_verdict_xstate_tenth():
    v = zero_discord_verdict(xstate(0.1))
    assert not v.is_zero
    assert v.worst_pair == ((0, 0), (0, 1))
    assert v.max_normality_defect == pytest.approx(0.0, abs=1e-15)
    # raw defect 0.06 sqrt(2) over ||diag(0.1, 0.4)||_F * ||0.2 sx||_F
    raw = 0.06 * np.sqrt(2)
    expected = raw / (np.sqrt(0.1**2 + 0.4**2) * 0.2 * np.sqrt(2))
    assert v.max_commutation_defect == pytest.approx(expected, rel=1e-12)


def test_verdict_product_states(rng):
    for _ in range(10):
        rho = product_state(random_density(3, seed=rng), random_density(4, seed=rng))
        assert zero_discord_verdict(rho).is_zero


def test_verdict_bell_fails_on_normality():
    v = zero_discord_verdict(bell_state())
    assert not v.is_zero
    assert not v.normality_ok
    # off-diagonal block [[0, 1/2], [0, 0]] is nilpotent: ||[B, B^dag]|| / ||B||^2 = sqrt(2)
    assert v.max_normality_defect == pytest.approx(np.sqrt(2), rel=1e-12)


def test_verdict_is_zero_iff_defects_below_tolerance(rng):
    for _ in range(20):
        rho = random_bipartite(2, 3, seed=rng)
        v = zero_discord_verdict(rho, tol=0.5)
        assert v.is_zero == (v.max_normality_defect <= 0.5 and v.max_commutation_defect <= 0.5)


def test_verdict_apparatus_side():
    # classical on A but not on B: sum_i p_i |i><i| (x) rho_i with non-commuting rho_i
    plus = np.full((2, 2), 0.5)
    rho = validate(0.5 * np.kron(np.diag([1, 0]), np.diag([1, 0])) + 0.5 * np.kron(np.diag([0, 1]), plus), 2, 2)
    assert zero_discord_verdict(rho, apparatus="A").is_zero
    assert zero_discord_verdict(swap_subsystems(rho)).is_zero
    assert not zero_discord_verdict(rho).is_zero
    with pytest.raises(ValueError):
        zero_discord_verdict(rho, apparatus="C")


def test_pointer_basis_xstate_quarter():
    rho = xstate(0.25)
    pb = pointer_basis(rho)
    assert same_up_to_phase_and_order(pb.unitary, HADAMARD, 1e-12)
    assert verify_pointer(rho, pb) <= 1e-12
    assert pb.reduced_state_residual <= 1e-12


def test_pointer_basis_xstate_edges():
    for x in (0.0, 0.5):
        pb = pointer_basis(xstate(x))
        assert same_up_to_phase_and_order(pb.unitary, np.eye(2), 1e-14)
        assert verify_pointer(xstate(x), pb) <= 1e-14


def test_pointer_basis_refuses_nonzero_discord():
    with pytest.raises(NonzeroDiscordError) as info:
        pointer_basis(xstate(0.1))
    assert info.value.verdict.worst_pair == ((0, 0), (0, 1))


def test_pointer_coefficient_invariants():
    rho = pointer_state(random_pointer_coefficients(3, 3, seed=21), random_unitary(3, seed=22))
    pb = pointer_basis(rho)
    c = pb.coefficients
    np.testing.assert_allclose(c.transpose(1, 0, 2), c.conj(), atol=1e-12)
    assert np.einsum("iik->", c).real == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("seed", range(15))
@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 4)])
def test_pointer_recovery_matches_construction(seed, dims):
    rng = np.random.default_rng(seed)
    n, m = dims
    v = random_unitary(m, rng)
    rho = pointer_state(random_pointer_coefficients(n, m, rng), v)
    pb = pointer_basis(rho)
    assert same_up_to_phase_and_order(pb.unitary, v, 1e-8)
    assert verify_pointer(rho, pb) <= 1e-9
    assert offdiag_norm(pb.unitary.conj().T @ partial_trace_a(rho) @ pb.unitary) <= 1e-9


def test_pointer_with_degenerate_first_block(rng):
    # first block proportional to identity: the basis must come from the other blocks
    v = haar_unitary(rng, 3)
    c = np.zeros((2, 2, 3), dtype=complex)
    c[0, 0] = [0.2, 0.2, 0.2]
    c[1, 1] = [0.3, 0.05, 0.05]
    c[0, 1] = [0.05, 0.01j, -0.02]
    c[1, 0] = c[0, 1].conj()
    rho = pointer_state(PointerCoefficients(2, 3, c), v)
    pb = pointer_basis(rho)
    assert verify_pointer(rho, pb) <= 1e-12
    assert same_up_to_phase_and_order(pb.unitary, v, 1e-9)


def test_verify_pointer_non_commuting_best_fit():
    pb = fit_pointer(xstate(0.1), HADAMARD)
    # rotated diagonal blocks keep off-diagonal -0.15 entries: residual sqrt(4 * 0.15^2)
    assert verify_pointer(xstate(0.1), pb) == pytest.approx(0.3, abs=1e-12)
    assert verify_pointer(xstate(0.1), pb) > 0.05


def test_verify_pointer_product_eigenbasis():
    ra, rb = random_density(2, seed=31), random_density(3, seed=32)
    rho = product_state(ra, rb)
    _, evecs = np.linalg.eigh(rb)
    assert verify_pointer(rho, fit_pointer(rho, evecs)) <= 1e-10


def test_separability_hint():
    assert separability_hint(block_partition(xstate(0.0)))
    assert not separability_hint(block_partition(xstate(0.1)))
    diag = validate(np.diag([0.1, 0.2, 0.3, 0.15, 0.05, 0.2]), 2, 3)
    assert separability_hint(block_partition(diag))


def test_ancilla_examples():
    base, ext = extend_with_ancilla(xstate(0.1), np.eye(2) / 2)
    assert not base.is_zero and not ext.is_zero
    base, ext = extend_with_ancilla(xstate(0.25), random_density(3, seed=41))
    assert base.is_zero and ext.is_zero
    for rho in (xstate(0.1), xstate(0.25), bell_state()):
        base, ext = extend_with_ancilla(rho, np.diag([1.0, 0.0]))
        assert base.is_zero == ext.is_zero


def test_ancilla_extended_blocks_are_tensored():
    rho = random_bipartite(2, 2, seed=42)
    rc = random_density(3, seed=43)
    from zerodiscord.density import BipartiteDensityMatrix
    big = BipartiteDensityMatrix(2, 6, np.kron(rho.matrix, rc))
    p, q = block_partition(rho), block_partition(big)
    for i in range(2):
        for j in range(2):
            np.testing.assert_allclose(q[i, j], np.kron(p[i, j], rc), atol=1e-16)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_local_unitary_covariance(seed):
    rng = np.random.default_rng(seed)
    v = random_unitary(3, rng)
    big_v = np.kron(np.eye(2), v)
    zero = pointer_state(random_pointer_coefficients(2, 3, rng), random_unitary(3, rng))
    generic = random_bipartite(2, 3, seed=rng)
    for rho in (zero, generic):
        rotated = validate(big_v @ rho.matrix @ big_v.conj().T, 2, 3)
        assert zero_discord_verdict(rotated).is_zero == zero_discord_verdict(rho).is_zero


@pytest.mark.parametrize("seed", range(10))
def test_verdict_agrees_with_disturbance_oracle(seed):
    rng = np.random.default_rng(seed)
    zero = pointer_state(random_pointer_coefficients(2, 2, rng), random_unitary(2, rng))
    assert zero_discord_verdict(zero).is_zero
    assert disturbance_min(zero) <= 1e-6
    # non-commuting blocks: rho_0 (x) |0><0| + rho_1 (x) |+><+| mixture
    plus = np.full((2, 2), 0.5)
    r0, r1 = random_density(2, seed=rng), random_density(2, seed=rng)
    mixed = validate(0.5 * np.kron(r0, np.diag([1, 0])) + 0.5 * np.kron(r1, plus), 2, 2)
    assert not zero_discord_verdict(mixed).is_zero
    assert disturbance_min(mixed) >= 1e-3
