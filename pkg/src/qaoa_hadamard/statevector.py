"""Exact statevector simulation for QAOA circuits.

Basis index ``i`` stores qubit 0 in its most significant bit, so
``format(i, f"0{n}b")`` reads like the bit strings used elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .ising import IsingHamiltonian, IsingTerm, energies, index_to_bits, support_mask

MAX_QUBITS = 26


class QubitLimitError(ValueError):
    """Requested register does not fit under the configured qubit cap."""


@dataclass(frozen=True)
class HGate:
    qubit: int


@dataclass(frozen=True)
class RX:
    qubit: int
    theta: float


@dataclass(frozen=True)
class RZ:
    qubit: int
    theta: float


@dataclass(frozen=True)
class CNOT:
    control: int
    target: int


GateOp = Union[HGate, RX, RZ, CNOT]


def gate_qubits(gate: GateOp) -> tuple[int, ...]:
    if isinstance(gate, CNOT):
        return (gate.control, gate.target)
    return (gate.qubit,)


class StateVector:
    """``2^n`` complex amplitudes. Gate application returns a new state."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << n_qubits,):
            raise ValueError(f"expected {1 << n_qubits} amplitudes, got shape {amplitudes.shape}")
        self.n_qubits = n_qubits
        self.amplitudes = amplitudes

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[int(bits, 2)] = 1.0
        return cls(len(bits), amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amplitudes.copy())

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits})"


def check_qubit_count(n: int, max_qubits: int = MAX_QUBITS):
    if not 1 <= n <= max_qubits:
        need = (1 << n) * 16 if n >= 0 else 0
        raise QubitLimitError(
            f"{n} qubits outside supported range 1..{max_qubits} "
            f"(statevector would need {need / 2**30:.3g} GiB)"
        )


def init_uniform(n: int, max_qubits: int = MAX_QUBITS) -> StateVector:
    """Uniform superposition, i.e. a Hadamard on every qubit of ``|0...0>``."""
    check_qubit_count(n, max_qubits)
    dim = 1 << n
    return StateVector(n, np.full(dim, dim**-0.5, dtype=np.complex128))


# -- kernels on raw arrays ------------------------------------------------------
# ``psi`` is viewed as (2^q, 2, 2^(n-q-1)); axis 1 is qubit q.


def _split(psi: np.ndarray, n: int, q: int) -> np.ndarray:
    return psi.reshape(1 << q, 2, 1 << (n - q - 1))


def apply_1q_matrix(psi: np.ndarray, n: int, q: int, mat: np.ndarray) -> np.ndarray:
    view = _split(psi, n, q)
    out = np.einsum("ab,ibj->iaj", mat, view)
    return out.reshape(-1)


def apply_rx_inplace(psi: np.ndarray, n: int, q: int, theta: float):
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    view = _split(psi, n, q)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = c * a0 - 1j * s * a1
    view[:, 1, :] = c * a1 - 1j * s * a0


def _check_gate(gate: GateOp, n: int):
    qubits = gate_qubits(gate)
    for q in qubits:
        if not 0 <= q < n:
            raise ValueError(f"qubit index {q} out of range in {gate} for {n} qubits")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"gate {gate} repeats a qubit")


_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)


def apply_gate(state: StateVector, gate: GateOp) -> StateVector:
    n = state.n_qubits
    _check_gate(gate, n)
    psi = state.amplitudes.copy()
    if isinstance(gate, HGate):
        psi = apply_1q_matrix(psi, n, gate.qubit, _H)
    elif isinstance(gate, RX):
        apply_rx_inplace(psi, n, gate.qubit, gate.theta)
    elif isinstance(gate, RZ):
        # RZ(theta) = diag(e^{-i theta/2}, e^{+i theta/2})
        view = _split(psi, n, gate.qubit)
        view[:, 0, :] *= np.exp(-0.5j * gate.theta)
        view[:, 1, :] *= np.exp(0.5j * gate.theta)
    elif isinstance(gate, CNOT):
        c, t = gate.control, gate.target
        view = psi.reshape((2,) * n)
        idx = [slice(None)] * n
        idx[c] = 1
        sub = view[tuple(idx)]
        # target axis index drops by one if it came after the control axis
        t_axis = t if t < c else t - 1
        view[tuple(idx)] = np.flip(sub, axis=t_axis).copy()
    else:
        raise TypeError(f"unknown gate {gate!r}")
    return StateVector(n, psi)


def apply_gates(state: StateVector, gates: Iterable[GateOp]) -> StateVector:
    for gate in gates:
        state = apply_gate(state, gate)
    return state


def term_parity(term: IsingTerm, n: int) -> np.ndarray:
    """``prod_{q in support} spin_q`` for every basis index, as +1/-1 floats."""
    mask = support_mask(term.support, n)
    idx = np.arange(1 << n, dtype=np.uint64)
    odd = np.bitwise_count(idx & np.uint64(mask)) & 1
    return 1.0 - 2.0 * odd


def apply_diagonal_phase(state: StateVector, term: IsingTerm, gamma: float) -> StateVector:
    """Apply ``exp(-i gamma c Z_j Z_k ...)`` directly as a diagonal phase."""
    n = state.n_qubits
    for q in term.support:
        if not 0 <= q < n:
            raise ValueError(f"qubit index out of range in {term} for {n} qubits")
    if not term.support:
        phase = np.exp(-1j * gamma * term.coefficient)
        return StateVector(n, state.amplitudes * phase)
    parity = term_parity(term, n)
    return StateVector(n, state.amplitudes * np.exp(-1j * gamma * term.coefficient * parity))


def apply_hamiltonian_phase(state: StateVector, H: IsingHamiltonian, gamma: float) -> StateVector:
    """``exp(-i gamma H_C)`` for a whole diagonal Hamiltonian."""
    if H.n_qubits != state.n_qubits:
        raise ValueError("Hamiltonian and state sizes differ")
    return StateVector(state.n_qubits, state.amplitudes * np.exp(-1j * gamma * energies(H)))


def expectation_diagonal(state: StateVector, H: IsingHamiltonian) -> float:
    if H.n_qubits != state.n_qubits:
        raise ValueError(f"Hamiltonian has {H.n_qubits} qubits, state has {state.n_qubits}")
    return float(np.dot(state.probabilities(), energies(H)))


@dataclass(frozen=True)
class SampleHistogram:
    """Bit string -> count, with the total shot count."""

    counts: dict
    shots: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.shots:
            raise ValueError("counts do not sum to shots")

    @property
    def n_qubits(self) -> int:
        return len(next(iter(self.counts))) if self.counts else 0

    def probability(self, bits: str) -> float:
        return self.counts.get(bits, 0) / self.shots

    def most_common(self, k: int | None = None):
        items = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return items if k is None else items[:k]

    def to_dict(self) -> dict:
        return {"shots": self.shots, "counts": dict(sorted(self.counts.items()))}

    @classmethod
    def from_dict(cls, data: dict) -> "SampleHistogram":
        return cls({str(k): int(v) for k, v in data["counts"].items()}, int(data["shots"]))


def sample_indices(probabilities: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF draws of basis indices."""
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    cdf = np.cumsum(probabilities)
    cdf /= cdf[-1]
    draws = np.searchsorted(cdf, rng.random(shots), side="right")
    return np.minimum(draws, len(cdf) - 1)


def sample(state: StateVector, shots: int, seed=None) -> SampleHistogram:
    """Draw ``shots`` measurements in the computational basis.

    ``seed`` may be an int, ``None`` or a :class:`numpy.random.Generator`;
    the same integer seed always gives the same histogram.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    draws = sample_indices(state.probabilities(), shots, rng)
    values, counts = np.unique(draws, return_counts=True)
    return SampleHistogram(
        {index_to_bits(int(v), state.n_qubits): int(c) for v, c in zip(values, counts)}, shots
    )
