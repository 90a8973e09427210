"""
Block criterion on the X-state family
=====================================

Cut each X-state into its four 2x2 blocks, check normality and pairwise
commutation, and print where the verdict flips.
"""

import numpy as np

from zerodiscord import block_partition, xstate, zero_discord_verdict

# the diagonal blocks are diag(x, 1/2 - x); the off-diagonal ones are sqrt(x (1/2 - x)) sigma_x
rho = xstate(0.1)
p = block_partition(rho)
print("rho^(1,1) =\n", p[0, 0].real)
print("rho^(1,2) =\n", p[0, 1].real)

# all blocks are Hermitian, hence normal; what fails is the commutator
v = zero_discord_verdict(rho)
print(f"\nx = 0.1: zero discord {v.is_zero}, normality defect {v.max_normality_defect:.1e}, "
      f"commutation defect {v.max_commutation_defect:.4f}, worst pair {v.worst_pair}")

# sweep the whole family; only three points survive
xs = np.linspace(0, 0.5, 101)
defects = np.array([zero_discord_verdict(xstate(x)).max_commutation_defect for x in xs])
print("\nzero discord at x =", [float(x) for x, d in zip(xs, defects) if d <= 1e-9])

# near 1/4 the defect shrinks linearly with |x - 1/4|
for x in (0.2, 0.24, 0.249, 0.2499):
    print(f"  x = {x:<7} commutation defect {zero_discord_verdict(xstate(x)).max_commutation_defect:.3e}")
