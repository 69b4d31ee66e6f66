"""
The 44-order Turyn instance
===========================

Five spins, one valid string. Random guessing finds it 1 time in 32; a few
QAOA layers already do much better. The second half builds a Turyn cost from
a user template and checks it against the numeric autocorrelations.
"""

import numpy as np

from qaoa_hadamard import RunConfig, TurynTemplate, brute_force, builtin_hamiltonian, run_qaoa
from qaoa_hadamard import npaf, turyn_cost, turyn_hamiltonian
from qaoa_hadamard.ising import evaluate

H = builtin_hamiltonian("turyn44")
oracle = brute_force(H)
print("valid:", oracle.solutions, f"P_R = {oracle.P_R:.4f}")

for p in (1, 2, 4, 8):
    rep = run_qaoa(H, RunConfig(layers=p, restarts=5, seed=3, mode="sampled", shots=1024), oracle=oracle)
    hist = rep.histogram
    print(f"p={p}: 11100 drawn {hist.counts.get('11100', 0):4d}/{hist.shots}  xRAR {rep.metrics['xrar']:.2f}")

# %%
# A template with free entries
# ----------------------------
template = TurynTemplate.loads(
    """
    v0 v1 + -
    v2 + + -
    v3 + - +
    v4 - -
    """
)
HT = turyn_hamiltonian(template)
print(f"\ntemplate: N={template.N}, {template.n_qubits} qubits, {len(HT.terms)} terms")
for bits in ("00000", "10101", "11111"):
    X, Y, Z, W = template.substitute(bits)
    lags = [int(npaf(X, r) + npaf(Y, r) + 2 * npaf(Z, r) + 2 * npaf(W, r)) for r in range(1, template.N)]
    print(bits, "weighted NPAF", lags, "cost", turyn_cost(template, bits), "energy", evaluate(HT, bits))
