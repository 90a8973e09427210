"""
Recovering the undisturbing measurement
=======================================

Build a zero-discord state from a hidden basis, then get that basis back
from the block family alone.
"""

import numpy as np

from zerodiscord import (
    pointer_basis,
    pointer_state,
    random_pointer_coefficients,
    random_unitary,
    verify_pointer,
    xstate,
)
from zerodiscord.measure import measured_state

# X-state at x = 1/4: the blocks are multiples of I and sigma_x, diagonalized by the Hadamard
pb = pointer_basis(xstate(0.25))
print("U =\n", np.round(pb.unitary, 12))
print("residual", verify_pointer(xstate(0.25), pb))

# a 2 x 3 state that is classical on B in a random basis v
rng = np.random.default_rng(3)
v = random_unitary(3, rng)
rho = pointer_state(random_pointer_coefficients(2, 3, rng), v)

pb = pointer_basis(rho)

# columns agree up to order and phase: |v^dag U| is a permutation matrix
print("\n|v^dag U| =\n", np.round(np.abs(v.conj().T @ pb.unitary), 10))
print("reconstruction residual", verify_pointer(rho, pb))
print("U^dag rho_B U off-diagonal", pb.reduced_state_residual)

# measuring in any other basis disturbs the state
other = random_unitary(3, rng)
print("disturbance in a random basis", np.linalg.norm(measured_state(rho, other).matrix - rho.matrix))
print("disturbance in the pointer basis", np.linalg.norm(measured_state(rho, pb.unitary).matrix - rho.matrix))
