"""
k-body prototypes and mixed Hamiltonians
========================================

``2(1 + Z_0...Z_{k-1})`` asks for the unknown entries of a 2x2 Hadamard
matrix; the valid strings are those of odd parity. One layer is enough to
concentrate almost all probability on them, whatever k is. The mixed
Hamiltonians need more depth.
"""

import numpy as np

from qaoa_hadamard import RunConfig, brute_force, build_qaoa_circuit, builtin_hamiltonian, run_qaoa
from qaoa_hadamard.circuit import ParameterVector, expected_gate_count

for k in range(1, 5):
    H = builtin_hamiltonian(f"proto{k}")
    rep = run_qaoa(H, RunConfig(layers=1, restarts=10))
    gates = len(build_qaoa_circuit(H, ParameterVector.zeros(1)))
    print(f"k={k}: {gates:2d} gates (formula {expected_gate_count(H, 1)}), xRAR {rep.metrics['xrar_best']:.4f}")

# %%
# Mixed k-body terms
# ------------------
for name in ("mixed_uniform", "mixed_nonuniform"):
    H = builtin_hamiltonian(name)
    oracle = brute_force(H)
    print(f"\n{name}: valid {list(oracle.solutions)}")
    for p in (1, 4, 16):
        xs = [run_qaoa(H, RunConfig(layers=p, seed=s), oracle=oracle).metrics["xrar"] for s in range(5)]
        print(f"  p={p:2d} median xRAR {np.median(xs):.3f}")
