"""QAOA search for Hadamard matrices on an exact statevector simulator."""

from .circuit import Circuit, ParameterVector, build_qaoa_circuit, kbody_block, mixer_layer
from .ising import (
    IsingHamiltonian,
    IsingTerm,
    bits_to_spins,
    canonicalize,
    evaluate,
    scale,
    spins_to_bits,
)
from .optimize import OptimizerOptions, minimize
from .oracle import OracleReport, brute_force, histogram_valid_probability, normalized_avg_error, xrar
from .problems import (
    TurynTemplate,
    WilliamsonSpec,
    assemble_williamson,
    builtin_hamiltonian,
    direct_cost,
    npaf,
    turyn_cost,
    turyn_hamiltonian,
    turyn_order,
    turyn_qubits,
    williamson_cost,
    williamson_hamiltonian,
)
from .runtime import PelGrid, QaoaEvolver, RunConfig, RunReport, energy_objective, pel_scan, run_qaoa
from .statevector import (
    CNOT,
    RX,
    RZ,
    HGate,
    SampleHistogram,
    StateVector,
    apply_diagonal_phase,
    apply_gate,
    expectation_diagonal,
    init_uniform,
    sample,
)

__version__ = "0.1.0"
