"""
Discord by minimization over qubit projectors
=============================================

Compare the grid-plus-refinement minimizer with the closed form on the
X-state family, and plot both if matplotlib is around.
"""

import numpy as np

from zerodiscord import minimize_discord_qubit, xstate, xstate_discord_closed_form

xs = np.linspace(0, 0.5, 41)
closed = np.array([xstate_discord_closed_form(x) for x in xs])

# the minimizer knows nothing about X-states
estimates = [minimize_discord_qubit(xstate(x), grid=(32, 64)) for x in xs]
grid = np.array([e.value for e in estimates])

print(f"max |grid - closed form| over {len(xs)} points: {np.abs(grid - closed).max():.2e}")
print(f"D(x = 0.1) = {xstate_discord_closed_form(0.1):.9f}")

# where the optimum sits on the Bloch sphere: the x axis, i.e. the Hadamard basis
e = estimates[8]
print(f"argmin at x = {xs[8]}: theta = {e.argmin.theta:.6f}, phi = {e.argmin.phi:.6f}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(xs, closed, label="closed form")
    ax.plot(xs, grid, "o", ms=3, label="minimizer")
    ax.set_xlabel("x")
    ax.set_ylabel("discord (bits)")
    ax.legend()
    fig.tight_layout()
    fig.savefig("xstate_discord.png", dpi=120)
    print("wrote xstate_discord.png")
