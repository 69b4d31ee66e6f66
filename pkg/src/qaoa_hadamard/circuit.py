"""Gate-level QAOA circuits built from CNOT-ladder k-body blocks."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .ising import MAX_BODY, IsingHamiltonian, IsingTerm
from .statevector import CNOT, RX, RZ, GateOp, HGate, StateVector, apply_gates, gate_qubits


@dataclass(frozen=True)
class ParameterVector:
    """Angles of a ``p``-layer QAOA circuit."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        if len(self.gammas) != len(self.betas):
            raise ValueError(
                f"need as many gammas as betas, got {len(self.gammas)} and {len(self.betas)}"
            )
        if len(self.gammas) < 1:
            raise ValueError("at least one layer is required")

    @property
    def p(self) -> int:
        return len(self.gammas)

    def to_array(self) -> np.ndarray:
        """Flat ``[g_1, ..., g_p, b_1, ..., b_p]`` layout used by the optimizer."""
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_array(cls, x) -> "ParameterVector":
        x = np.asarray(x, dtype=float).ravel()
        if x.size % 2:
            raise ValueError("flat parameter vector must have even length")
        p = x.size // 2
        return cls(tuple(x[:p]), tuple(x[p:]))

    @classmethod
    def zeros(cls, p: int) -> "ParameterVector":
        return cls((0.0,) * p, (0.0,) * p)

    def to_dict(self) -> dict:
        return {"gammas": list(self.gammas), "betas": list(self.betas)}


@dataclass
class Circuit:
    n_qubits: int
    gates: list = field(default_factory=list)

    def __post_init__(self):
        for gate in self.gates:
            if isinstance(gate, CNOT) and gate.control == gate.target:
                raise ValueError(f"CNOT control and target coincide: {gate}")
            for q in gate_qubits(gate):
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"gate {gate} outside {self.n_qubits}-qubit register")

    def __len__(self):
        return len(self.gates)

    def count(self, kind) -> int:
        return sum(isinstance(g, kind) for g in self.gates)

    def simulate(self, initial: StateVector | None = None) -> StateVector:
        """Run the circuit from ``|0...0>`` (or ``initial``)."""
        if initial is None:
            initial = StateVector.basis("0" * self.n_qubits)
        return apply_gates(initial, self.gates)


def kbody_block(term: IsingTerm, gamma: float) -> list[GateOp]:
    """Gates implementing ``exp(-i gamma c Z_q0 ... Z_q(k-1))``.

    A CNOT ladder accumulates the parity of the support on its highest
    qubit, ``RZ(2 c gamma)`` rotates it and the mirrored ladder uncomputes.
    Constant terms give an empty list since they are a global phase.
    """
    support = term.support
    if len(support) > MAX_BODY:
        raise ValueError(f"{len(support)}-body term not supported (max {MAX_BODY})")
    if not support:
        return []
    ladder = [CNOT(support[i], support[i + 1]) for i in range(len(support) - 1)]
    rotation = RZ(support[-1], 2.0 * term.coefficient * gamma)
    return ladder + [rotation] + ladder[::-1]


def mixer_layer(n: int, beta: float, weights: Sequence[float] | None = None) -> list[GateOp]:
    """``exp(-i beta sum_q b_q X_q)`` as one ``RX(2 b_q beta)`` per qubit."""
    if n < 1:
        raise ValueError("mixer needs at least one qubit")
    if weights is None:
        weights = [1.0] * n
    if len(weights) != n:
        raise ValueError(f"expected {n} mixer weights, got {len(weights)}")
    return [RX(q, 2.0 * weights[q] * beta) for q in range(n)]


def problem_layer(H: IsingHamiltonian, gamma: float) -> list[GateOp]:
    gates = []
    for term in H.terms:
        gates.extend(kbody_block(term, gamma))
    return gates


def build_qaoa_circuit(
    H: IsingHamiltonian,
    params: ParameterVector,
    mixer_weights: Sequence[float] | None = None,
) -> Circuit:
    """Hadamards on every qubit, then ``p`` problem + mixer layers."""
    n = H.n_qubits
    gates: list[GateOp] = [HGate(q) for q in range(n)]
    for gamma, beta in zip(params.gammas, params.betas):
        gates.extend(problem_layer(H, gamma))
        gates.extend(mixer_layer(n, beta, mixer_weights))
    return Circuit(n, gates)


def expected_gate_count(H: IsingHamiltonian, p: int) -> int:
    per_layer = sum(2 * (t.body - 1) + 1 for t in H.terms if t.body) + H.n_qubits
    return H.n_qubits + p * per_layer


# -- text format -------------------------------------------------------------


def dumps(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.n_qubits}"]
    for g in circuit.gates:
        if isinstance(g, HGate):
            lines.append(f"h {g.qubit}")
        elif isinstance(g, RX):
            lines.append(f"rx {g.qubit} {g.theta:.17g}")
        elif isinstance(g, RZ):
            lines.append(f"rz {g.qubit} {g.theta:.17g}")
        elif isinstance(g, CNOT):
            lines.append(f"cx {g.control} {g.target}")
        else:
            raise TypeError(f"unknown gate {g!r}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> Circuit:
    n_qubits = None
    gates: list[GateOp] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        op, *args = line.split()
        try:
            if op == "qubits":
                n_qubits = int(args[0])
            elif op == "h":
                gates.append(HGate(int(args[0])))
            elif op == "rx":
                gates.append(RX(int(args[0]), float(args[1])))
            elif op == "rz":
                gates.append(RZ(int(args[0]), float(args[1])))
            elif op == "cx":
                gates.append(CNOT(int(args[0]), int(args[1])))
            else:
                raise ValueError(op)
        except (ValueError, IndexError):
            raise ValueError(f"line {lineno}: cannot parse gate {raw!r}") from None
    if n_qubits is None:
        raise ValueError("missing 'qubits <n>' header")
    return Circuit(n_qubits, gates)


def save(circuit: Circuit, path):
    Path(path).write_text(dumps(circuit))
