import numpy as np
import pytest

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g + g.conj().T


def haar_unitary(rng, n):
    # QR of a Ginibre matrix with the R-diagonal phases removed
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def same_up_to_phase_and_order(u, v, atol):
    """Every column of ``u`` equals some column of ``v`` times a phase."""
    overlaps = np.abs(u.conj().T @ v)
    perm = np.argmax(overlaps, axis=1)
    if len(set(perm)) != u.shape[1]:
        return False
    for k, p in enumerate(perm):
        phase = np.vdot(v[:, p], u[:, k])
        phase /= abs(phase)
        if np.max(np.abs(u[:, k] - phase * v[:, p])) > atol:
            return False
    return True


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
