"""
Generalized measurements through an ancilla
===========================================

A POVM on B is a projective measurement on B plus an ancilla C.  Tensoring
an uncorrelated ancilla onto B turns every block B into B (x) rho_C, so the
commutators become [B, B'] (x) rho_C^2 and the verdict cannot change.
"""

import numpy as np

from zerodiscord import (
    extend_with_ancilla,
    pointer_state,
    random_bipartite,
    random_density,
    random_pointer_coefficients,
    random_unitary,
    xstate,
)

rng = np.random.default_rng(11)
cases = {
    "xstate(0.1)": xstate(0.1),
    "xstate(0.25)": xstate(0.25),
    "pointer 2x3": pointer_state(random_pointer_coefficients(2, 3, rng), random_unitary(3, rng)),
    "random 2x2": random_bipartite(2, 2, seed=rng),
}

for name, rho in cases.items():
    for k in (2, 3):
        base, ext = extend_with_ancilla(rho, random_density(k, seed=rng))
        print(f"{name:13} ancilla dim {k}: base {base.is_zero!s:5} extended {ext.is_zero!s:5} "
              f"defects {base.max_commutation_defect:.2e} -> {ext.max_commutation_defect:.2e}")
