"""
Photon pairs and measurement disturbance
========================================

The polarization mixture of two photon pairs is an X-state with
x = cos^2(theta) / 2.  Measuring the second photon in the best basis leaves
it unchanged only where the block criterion says so.
"""

import numpy as np

from zerodiscord import photon_pair_state, xstate, zero_discord_verdict
from zerodiscord.measure import disturbance_argmin

theta = np.pi / 4
print("theta = pi/4 equals xstate(1/4):",
      np.allclose(photon_pair_state(theta).matrix, xstate(0.25).matrix, atol=1e-12))

# the smallest Frobenius change any projective measurement on B can make
print(f"\n{'theta':>8} {'x':>8} {'zero?':>6} {'min disturbance':>16}  best basis (theta_B, phi_B)")
for theta in np.linspace(0, np.pi / 2, 9):
    rho = photon_pair_state(theta)
    d, params = disturbance_argmin(rho, grid=(32, 64))
    x = 0.5 * np.cos(theta) ** 2
    print(f"{theta:8.4f} {x:8.4f} {str(zero_discord_verdict(rho).is_zero):>6} {d:16.3e}"
          f"  ({params.theta:.4f}, {params.phi:.4f})")
