"""
Single-layer energy landscape
=============================

Scan the p=1 expected energy of the Williamson-12 Hamiltonian over
(gamma, beta) and save the grid as CSV. If matplotlib is installed the
landscape is also drawn.
"""

import numpy as np

from qaoa_hadamard import brute_force, builtin_hamiltonian, pel_scan

H = builtin_hamiltonian("williamson12")
grid = pel_scan(H, (-np.pi, np.pi, 101), (-np.pi, np.pi, 101))
print(f"E(0,0) = {grid.value_at(0, 0):.6f}; brute-force mean = {brute_force(H).mean_energy:.6f}")
print(f"grid minimum {grid.values.min():.4f} at {len(grid.minima())} points, e.g. {grid.argmin()}")

# every energy is even, so shifting gamma by pi changes nothing
print("pi-periodic in gamma:", np.allclose(grid.values[:50], grid.values[50:100]))

grid.save("pel_williamson12.csv")

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 4))
    im = ax.pcolormesh(grid.betas, grid.gammas, grid.values, shading="auto", cmap="viridis")
    ax.set_xlabel("beta")
    ax.set_ylabel("gamma")
    fig.colorbar(im, label="<H>")
    fig.savefig("pel_williamson12.png", dpi=120)
