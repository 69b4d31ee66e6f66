"""Spin cost functions as Ising Hamiltonians with at most 4-body terms.

Bit strings follow one convention everywhere in the package: the leftmost
character is qubit 0, bit ``0`` maps to spin ``+1`` and bit ``1`` to spin
``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

MAX_BODY = 4


@dataclass(frozen=True)
class IsingTerm:
    """A real coefficient times a product of Pauli-Z operators.

    An empty ``support`` is the constant offset.
    """

    coefficient: float
    support: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coefficient", float(self.coefficient))
        object.__setattr__(self, "support", tuple(int(q) for q in self.support))

    @property
    def body(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class IsingHamiltonian:
    """Canonical Ising Hamiltonian: one term per support, no zero coefficients.

    Build instances through :func:`canonicalize` (or :meth:`from_terms`);
    the constructor only validates.
    """

    n_qubits: int
    terms: tuple[IsingTerm, ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        seen = set()
        for term in self.terms:
            _check_support(term, self.n_qubits)
            if list(term.support) != sorted(set(term.support)):
                raise ValueError(f"support not canonical: {term}")
            if term.support in seen:
                raise ValueError(f"duplicate support {term.support}")
            if term.coefficient == 0.0:
                raise ValueError(f"zero coefficient in canonical form: {term}")
            seen.add(term.support)

    @classmethod
    def from_terms(cls, terms, n_qubits: int) -> "IsingHamiltonian":
        return canonicalize(terms, n_qubits)

    @property
    def constant(self) -> float:
        for term in self.terms:
            if not term.support:
                return term.coefficient
        return 0.0

    @property
    def max_body(self) -> int:
        return max((t.body for t in self.terms), default=0)

    def coefficient(self, *support: int) -> float:
        """Coefficient of the term on ``support`` (0.0 if absent)."""
        key = tuple(sorted(support))
        for term in self.terms:
            if term.support == key:
                return term.coefficient
        return 0.0

    def body_counts(self) -> dict[int, int]:
        counts = {k: 0 for k in range(MAX_BODY + 1)}
        for term in self.terms:
            counts[term.body] += 1
        return counts

    def without_constant(self) -> "IsingHamiltonian":
        return IsingHamiltonian(self.n_qubits, tuple(t for t in self.terms if t.support))

    def __add__(self, other: "IsingHamiltonian") -> "IsingHamiltonian":
        n = max(self.n_qubits, other.n_qubits)
        return canonicalize(self.terms + other.terms, n)

    def __mul__(self, factor: float) -> "IsingHamiltonian":
        return canonicalize(
            [IsingTerm(t.coefficient * factor, t.support) for t in self.terms], self.n_qubits
        )

    __rmul__ = __mul__

    def __str__(self):
        return dumps(self)


def _check_support(term: IsingTerm, n_qubits: int):
    if len(term.support) > MAX_BODY:
        raise ValueError(f"term {term} has more than {MAX_BODY} bodies")
    for q in term.support:
        if not 0 <= q < n_qubits:
            raise ValueError(f"qubit index out of range for {n_qubits} qubits in term {term}")


def canonicalize(terms: Iterable, n_qubits: int) -> IsingHamiltonian:
    """Merge duplicate supports, drop zero coefficients and sort.

    ``terms`` may hold :class:`IsingTerm` objects or ``(coefficient, support)``
    pairs. A support that repeats an index is reduced with ``Z_q Z_q = 1``.
    Terms are ordered by body size, then lexicographically by support.
    """
    merged: dict[tuple[int, ...], float] = {}
    for term in terms:
        if not isinstance(term, IsingTerm):
            term = IsingTerm(*term)
        for q in term.support:
            if not 0 <= q < n_qubits:
                raise ValueError(
                    f"qubit index out of range for {n_qubits} qubits in term {term}"
                )
        odd = set()
        for q in term.support:
            odd ^= {q}
        key = tuple(sorted(odd))
        merged[key] = merged.get(key, 0.0) + term.coefficient
    out = [
        IsingTerm(c, s)
        for s, c in sorted(merged.items(), key=lambda kv: (len(kv[0]), kv[0]))
        if c != 0.0
    ]
    return IsingHamiltonian(n_qubits, tuple(out))


def scale(H: IsingHamiltonian, factor: float) -> IsingHamiltonian:
    if not factor > 0:
        raise ValueError(f"scale factor must be positive, got {factor}")
    return IsingHamiltonian(
        H.n_qubits, tuple(IsingTerm(t.coefficient * factor, t.support) for t in H.terms)
    )


def bits_to_spins(bits: str | Sequence[int]) -> np.ndarray:
    """``"010110"`` -> ``[1, -1, 1, -1, -1, 1]``."""
    if isinstance(bits, str):
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        arr = np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(bits, dtype=np.int64)
        if arr.size == 0 or np.any((arr != 0) & (arr != 1)):
            raise ValueError(f"not a bit sequence: {bits!r}")
    return 1 - 2 * arr.astype(np.int64)


def spins_to_bits(spins: Sequence[int]) -> str:
    arr = np.asarray(spins)
    if arr.size == 0 or np.any((arr != 1) & (arr != -1)):
        raise ValueError(f"spins must be +1/-1, got {spins!r}")
    return "".join("0" if s == 1 else "1" for s in arr)


def evaluate(H: IsingHamiltonian, s: str | Sequence[int]) -> float:
    """Energy of one bit string (text or 0/1 sequence), constant included."""
    spins = bits_to_spins(s)
    if spins.size != H.n_qubits:
        raise ValueError(f"string length {spins.size} != n_qubits {H.n_qubits}")
    total = 0.0
    for term in H.terms:
        total += term.coefficient * int(np.prod(spins[list(term.support)]))
    return total


def index_to_bits(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")


def bits_to_index(bits: str) -> int:
    return int(bits, 2)


def support_mask(support: Iterable[int], n_qubits: int) -> int:
    """Basis-index mask of a support; qubit 0 is the most significant bit."""
    mask = 0
    for q in support:
        mask |= 1 << (n_qubits - 1 - q)
    return mask


def walsh_hadamard(values: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis."""
    out = np.array(values, dtype=np.float64, copy=True)
    size = out.shape[-1]
    h = 1
    while h < size:
        view = out.reshape(-1, size // (2 * h), 2, h)
        a = view[:, :, 0, :].copy()
        b = view[:, :, 1, :]
        view[:, :, 0, :] += b
        view[:, :, 1, :] = a - b
        h *= 2
    return out


def energies(H: IsingHamiltonian) -> np.ndarray:
    """Energy of every basis state, indexed like the statevector.

    ``E(i) = sum_mask c_mask (-1)^popcount(i & mask)`` is the Walsh-Hadamard
    transform of the coefficient table, so the cost is ``n 2^n`` regardless
    of the number of terms.
    """
    coeffs = np.zeros(1 << H.n_qubits)
    for term in H.terms:
        coeffs[support_mask(term.support, H.n_qubits)] += term.coefficient
    return walsh_hadamard(coeffs)


# -- text format -------------------------------------------------------------


def dumps(H: IsingHamiltonian) -> str:
    lines = [f"qubits {H.n_qubits}"]
    for term in H.terms:
        lines.append(" ".join([format(term.coefficient, ".17g"), *map(str, term.support)]))
    return "\n".join(lines) + "\n"


def loads(text: str) -> IsingHamiltonian:
    """Parse the line-oriented Hamiltonian format written by :func:`dumps`."""
    n_qubits = None
    terms = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "qubits":
            if n_qubits is not None or len(fields) != 2:
                raise ValueError(f"line {lineno}: bad header {raw!r}")
            n_qubits = int(fields[1])
            continue
        if n_qubits is None:
            raise ValueError(f"line {lineno}: term before 'qubits <n>' header")
        try:
            coefficient = float(fields[0])
            support = [int(tok) for tok in fields[1:]]
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse term {raw!r}") from None
        if len(set(support)) != len(support):
            raise ValueError(f"line {lineno}: repeated qubit index in {raw!r}")
        terms.append(IsingTerm(coefficient, tuple(support)))
    if n_qubits is None:
        raise ValueError("missing 'qubits <n>' header")
    return canonicalize(terms, n_qubits)


def load(path) -> IsingHamiltonian:
    return loads(Path(path).read_text())


def save(H: IsingHamiltonian, path):
    Path(path).write_text(dumps(H))
