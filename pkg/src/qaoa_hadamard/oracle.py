"""Exhaustive enumeration oracle and performance metrics (xRAR, normalized error)."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .ising import IsingHamiltonian, energies, index_to_bits, support_mask
from .statevector import QubitLimitError, SampleHistogram

MAX_ENUMERATION_QUBITS = 28
DEFAULT_CHUNK = 1 << 16


@dataclass(frozen=True)
class OracleReport:
    """Ground truth from enumerating all ``2^n`` bit strings.

    ``valid_energy`` is 0 when some string reaches exactly zero energy (the
    non-negative cost convention), otherwise the global minimum.
    ``solutions`` are the strings at ``valid_energy``.
    """

    n_qubits: int
    solutions: tuple[str, ...]
    valid_energy: float
    E_min: float
    E_max: float
    E_tot: float

    @property
    def S_R(self) -> int:
        return len(self.solutions)

    @property
    def P_R(self) -> float:
        return self.S_R / 2**self.n_qubits

    @property
    def mean_energy(self) -> float:
        return self.E_tot / 2**self.n_qubits

    @property
    def normalized_avg_error(self) -> float:
        return normalized_avg_error(self.E_tot, self.E_max, self.n_qubits)

    @property
    def max_xrar(self) -> float:
        return 1.0 / self.P_R

    def to_dict(self) -> dict:
        d = asdict(self)
        d["solutions"] = list(self.solutions)
        d.update(S_R=self.S_R, P_R=self.P_R)
        try:
            d["normalized_avg_error"] = self.normalized_avg_error
        except ValueError:
            d["normalized_avg_error"] = None
        return d


def _chunk_energies(H: IsingHamiltonian, start: int, stop: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.uint64)
    out = np.zeros(stop - start)
    for term in H.terms:
        if not term.support:
            out += term.coefficient
            continue
        odd = np.bitwise_count(idx & np.uint64(support_mask(term.support, H.n_qubits))) & 1
        out += term.coefficient * (1.0 - 2.0 * odd)
    return out


def enumerate_energies(H: IsingHamiltonian, method: str = "auto", chunk_size: int = DEFAULT_CHUNK):
    """Energy of every bit string, in index order.

    ``"direct"`` evaluates term by term over index chunks; ``"walsh"`` uses a
    single Walsh-Hadamard transform. ``"auto"`` picks ``walsh`` when the
    direct cost (terms x states) gets large.
    """
    n = H.n_qubits
    if n > MAX_ENUMERATION_QUBITS:
        raise QubitLimitError(f"enumeration over {n} qubits exceeds the {MAX_ENUMERATION_QUBITS}-qubit guard")
    if method == "auto":
        method = "walsh" if len(H.terms) * (1 << n) > 1 << 26 else "direct"
    if method == "walsh":
        return energies(H)
    if method != "direct":
        raise ValueError(f"unknown enumeration method {method!r}")
    total = 1 << n
    return np.concatenate(
        [_chunk_energies(H, a, min(a + chunk_size, total)) for a in range(0, total, chunk_size)]
    )


def valid_energy_of(values: np.ndarray, atol: float = 1e-9) -> float:
    if np.any(np.abs(values) <= atol):
        return 0.0
    return float(values.min())


def brute_force(H: IsingHamiltonian, method: str = "auto", chunk_size: int = DEFAULT_CHUNK,
                atol: float = 1e-9) -> OracleReport:
    values = enumerate_energies(H, method, chunk_size)
    target = valid_energy_of(values, atol)
    hits = np.flatnonzero(np.abs(values - target) <= atol)
    return OracleReport(
        n_qubits=H.n_qubits,
        solutions=tuple(index_to_bits(int(i), H.n_qubits) for i in hits),
        valid_energy=target,
        E_min=float(values.min()),
        E_max=float(values.max()),
        E_tot=float(values.sum()),
    )


def valid_mask(H: IsingHamiltonian, values: np.ndarray | None = None, atol: float = 1e-9) -> np.ndarray:
    """Boolean mask over basis indices marking valid strings."""
    if values is None:
        values = energies(H)
    return np.abs(values - valid_energy_of(values, atol)) <= atol


def xrar(P_x: float, P_R: float) -> float:
    """Ratio of an algorithm's valid-solution probability to random guessing."""
    if not 0 < P_R <= 1:
        raise ValueError(f"P_R must lie in (0, 1], got {P_R} (no valid solutions?)")
    if not 0 <= P_x <= 1:
        raise ValueError(f"P_x must lie in [0, 1], got {P_x}")
    return P_x / P_R


def histogram_valid_probability(hist: SampleHistogram, H: IsingHamiltonian,
                                oracle: OracleReport | None = None) -> float:
    if hist.shots < 1 or not hist.counts:
        raise ValueError("empty histogram")
    for bits in hist.counts:
        if len(bits) != H.n_qubits:
            raise ValueError(f"bit string {bits!r} does not match {H.n_qubits} qubits")
    if oracle is None:
        oracle = brute_force(H)
    valid = set(oracle.solutions)
    return sum(c for bits, c in hist.counts.items() if bits in valid) / hist.shots


def normalized_avg_error(E_tot: float, E_max: float, n: int) -> float:
    """``E_tot / (2^n E_max)``."""
    if E_max == 0:
        raise ValueError("E_max is zero; normalized error undefined")
    return E_tot / (2**n * E_max)
