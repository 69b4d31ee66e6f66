"""Hadamard-matrix search problems: cost functions, Hamiltonians, assembly.

Three formulations are provided:

* direct orthogonality cost of a full sign matrix,
* Williamson cost over four symmetric circulant ``K x K`` blocks,
* Turyn cost built from non-periodic autocorrelations of four sequences
  whose entries are fixed signs or spin variables (a :class:`TurynTemplate`).

The Williamson and Turyn costs are expanded symbolically (with ``s**2 = 1``)
into Ising Hamiltonians of at most 4-body terms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .ising import IsingHamiltonian, bits_to_spins, canonicalize
from .spinpoly import SpinPolynomial, poly_sum

SUBMATRIX_NAMES = ("A", "B", "C", "D")


# -- sign matrices -------------------------------------------------------------


def direct_cost(B) -> float:
    """Sum of squared entries of ``B^T B - M I``; zero iff ``B`` is Hadamard."""
    B = np.asarray(B, dtype=np.int64)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"sign matrix must be square, got shape {B.shape}")
    M = B.shape[0]
    D = B.T @ B - M * np.eye(M, dtype=np.int64)
    return float(np.sum(D * D))


def is_hadamard(B) -> bool:
    B = np.asarray(B)
    return bool(np.all(np.abs(B) == 1)) and direct_cost(B) == 0


def format_matrix(B) -> str:
    B = np.asarray(B)
    if np.any(np.abs(B) != 1):
        raise ValueError("matrix entries must be +1/-1")
    return "\n".join("".join("+" if v > 0 else "-" for v in row) for row in B) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    rows = [line.strip() for line in text.splitlines() if line.strip()]
    if not rows:
        raise ValueError("empty matrix")
    out = []
    for i, row in enumerate(rows):
        row = row.replace("−", "-")
        if set(row) - {"+", "-"}:
            raise ValueError(f"row {i}: only '+' and '-' allowed, got {row!r}")
        out.append([1 if ch == "+" else -1 for ch in row])
    if any(len(r) != len(rows) for r in out):
        raise ValueError(f"matrix is not square ({len(rows)} rows)")
    return np.array(out, dtype=np.int64)


def load_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


# -- Williamson ----------------------------------------------------------------


@dataclass(frozen=True)
class WilliamsonSpec:
    """Four symmetric circulant ``K x K`` blocks with ``(K+1)/2`` free spins each.

    Block ``m`` (A, B, C, D) owns qubits ``m*h .. m*h + h - 1`` with
    ``h = (K+1)/2``; its first row is ``(x0, x1, ..., x_{h-1}, ..., x2, x1)``.
    """

    K: int

    def __post_init__(self):
        if self.K < 1 or self.K % 2 == 0:
            raise ValueError(f"Williamson layout needs odd K >= 1, got {self.K}")

    @property
    def free_per_block(self) -> int:
        return (self.K + 1) // 2

    @property
    def n_qubits(self) -> int:
        return 4 * self.free_per_block

    @property
    def order(self) -> int:
        return 4 * self.K

    def row_qubits(self, block: int) -> list[int]:
        """Qubit feeding each entry of block ``block``'s first row."""
        h = self.free_per_block
        return [block * h + min(j, self.K - j) for j in range(self.K)]


def _circulant(first_row: Sequence) -> list[list]:
    K = len(first_row)
    return [[first_row[(j - i) % K] for j in range(K)] for i in range(K)]


def williamson_blocks(spec: WilliamsonSpec, s) -> list[np.ndarray]:
    spins = bits_to_spins(s)
    if spins.size != spec.n_qubits:
        raise ValueError(f"need {spec.n_qubits} bits for K={spec.K}, got {spins.size}")
    return [
        np.array(_circulant([spins[q] for q in spec.row_qubits(m)]), dtype=np.int64)
        for m in range(4)
    ]


def williamson_cost(spec: WilliamsonSpec, s) -> float:
    """``sum_ij (V_ij - 4K delta_ij)^2`` with ``V = A^T A + B^T B + C^T C + D^T D``."""
    V = sum(X.T @ X for X in williamson_blocks(spec, s))
    R = V - 4 * spec.K * np.eye(spec.K, dtype=np.int64)
    return float(np.sum(R * R))


def williamson_hamiltonian(spec: WilliamsonSpec) -> IsingHamiltonian:
    """Full symbolic expansion of :func:`williamson_cost`."""
    K = spec.K
    blocks = [
        _circulant([SpinPolynomial.var(q) for q in spec.row_qubits(m)]) for m in range(4)
    ]
    cost = []
    for i in range(K):
        for j in range(K):
            v = poly_sum(X[k][i] * X[k][j] for X in blocks for k in range(K))
            if i == j:
                v = v - 4 * K
            cost.append(v.square())
    return poly_sum(cost).to_hamiltonian(spec.n_qubits)


def assemble_williamson(spec: WilliamsonSpec, s) -> np.ndarray:
    """The ``4K x 4K`` Williamson array built from the four blocks."""
    A, B, C, D = williamson_blocks(spec, s)
    return np.block(
        [
            [A, B, C, D],
            [-B, A, -D, C],
            [-C, D, A, -B],
            [-D, -C, B, A],
        ]
    )


def williamson_qubits(K: int) -> int:
    return WilliamsonSpec(K).n_qubits


# -- Turyn ---------------------------------------------------------------------


def npaf(X: Sequence[int], r: int):
    """Non-periodic autocorrelation ``sum_{n=0}^{N-1-r} x_n x_{n+r}`` (0 for ``r >= N``)."""
    if r < 0:
        raise ValueError(f"lag must be non-negative, got {r}")
    N = len(X)
    if r >= N:
        return 0
    total = X[0] * X[r]
    for n in range(1, N - r):
        total = total + X[n] * X[n + r]
    return total


_TOKEN = re.compile(r"^(?:([+-])|v(\d+))$")

TURYN_WEIGHTS = (1, 1, 2, 2)


@dataclass(frozen=True)
class TurynTemplate:
    """Four sequences X, Y, Z, W of lengths (N, N, N, N-1).

    Each entry is ``+1``/``-1`` (fixed) or a string ``"v<k>"`` naming spin
    variable ``k``. Variables must be numbered ``0..Q-1`` with none unused.
    """

    X: tuple
    Y: tuple
    Z: tuple
    W: tuple

    def __post_init__(self):
        seqs = []
        for name in "XYZW":
            seq = tuple(_parse_entry(e) for e in getattr(self, name))
            object.__setattr__(self, name, seq)
            seqs.append(seq)
        N = len(self.X)
        lengths = tuple(len(s) for s in seqs)
        if N < 2 or lengths != (N, N, N, N - 1):
            raise ValueError(f"sequence lengths must be (N, N, N, N-1), got {lengths}")
        used = {e for seq in seqs for e in seq if isinstance(e, str)}
        indices = sorted(int(e[1:]) for e in used)
        if indices != list(range(len(indices))):
            raise ValueError(f"variables must be v0..v{len(indices) - 1} without gaps, got {indices}")

    @property
    def N(self) -> int:
        return len(self.X)

    @property
    def n_qubits(self) -> int:
        return len({e for seq in self.sequences for e in seq if isinstance(e, str)})

    @property
    def sequences(self) -> tuple:
        return (self.X, self.Y, self.Z, self.W)

    def substitute(self, s) -> list[np.ndarray]:
        """Numeric sequences for bit string ``s``."""
        spins = np.zeros(0, dtype=np.int64) if len(s) == 0 else bits_to_spins(s)
        if spins.size != self.n_qubits:
            raise ValueError(f"template has {self.n_qubits} variables, got {spins.size} bits")
        return [
            np.array([spins[int(e[1:])] if isinstance(e, str) else e for e in seq], dtype=np.int64)
            for seq in self.sequences
        ]

    def dumps(self) -> str:
        def tok(e):
            return e if isinstance(e, str) else ("+" if e > 0 else "-")

        return "\n".join(" ".join(tok(e) for e in seq) for seq in self.sequences) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TurynTemplate":
        lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if len(lines) != 4:
            raise ValueError(f"Turyn template needs 4 sequence lines, got {len(lines)}")
        return cls(*(tuple(ln) for ln in lines))

    @classmethod
    def load(cls, path) -> "TurynTemplate":
        return cls.loads(Path(path).read_text())


def _parse_entry(e):
    if isinstance(e, str):
        m = _TOKEN.match(e)
        if not m:
            raise ValueError(f"bad template token {e!r} (expected '+', '-' or 'v<k>')")
        if m.group(1):
            return 1 if m.group(1) == "+" else -1
        return f"v{int(m.group(2))}"
    if e in (1, -1):
        return int(e)
    raise ValueError(f"bad template entry {e!r}")


def turyn_cost(template: TurynTemplate, s) -> float:
    """``sum_{r>=1} (N_X(r) + N_Y(r) + 2 N_Z(r) + 2 N_W(r))^2``."""
    seqs = template.substitute(s)
    total = 0
    for r in range(1, template.N):
        v = sum(w * npaf(seq, r) for w, seq in zip(TURYN_WEIGHTS, seqs))
        total += v * v
    return float(total)


def turyn_hamiltonian(template: TurynTemplate) -> IsingHamiltonian:
    def symbol(e):
        return SpinPolynomial.var(int(e[1:])) if isinstance(e, str) else SpinPolynomial.constant(e)

    seqs = [[symbol(e) for e in seq] for seq in template.sequences]
    squares = []
    for r in range(1, template.N):
        v = poly_sum(npaf(seq, r) * w for w, seq in zip(TURYN_WEIGHTS, seqs) if r < len(seq))
        squares.append(v.square())
    return poly_sum(squares).to_hamiltonian(template.n_qubits)


def turyn_order(N: int) -> int:
    _check_turyn_length(N)
    return 4 * (3 * N - 1)


def turyn_qubits(N: int) -> int:
    _check_turyn_length(N)
    return 4 * N - 11


def _check_turyn_length(N: int):
    if N < 4 or N % 2:
        raise ValueError(f"Turyn length N must be even and >= 4, got {N}")


# -- literal Hamiltonians --------------------------------------------------------

# the 12-order literal names qubit 13 where qubit 3 is meant
_WILLIAMSON12 = [
    (2, (0, 1)), (2, (2, 3)), (2, (4, 5)), (2, (6, 7)),
    (1, (0, 1, 2, 3)), (1, (0, 1, 4, 5)), (1, (0, 1, 6, 7)),
    (1, (2, 3, 4, 5)), (1, (2, 3, 6, 7)), (1, (4, 5, 6, 7)),
    (4, ()),
]  # fmt: skip

_TURYN44 = [
    (1, (0, 1, 2)), (1, (0, 3, 4)), (1, (0, 3)), (-1, (0, 4)), (1, (1, 2, 3, 4)),
    (1, (1, 2, 3)), (2, (1, 2)), (1, (1, 3, 4)), (1, (1, 3)), (1, (1, 4)), (1, (1,)),
    (1, (2, 3, 4)), (1, (2, 3)), (1, (2, 4)), (1, (2,)), (1, (4,)), (5, ()),
]  # fmt: skip

# includes the s2 term; without it none of the four listed solutions has zero energy
_MIXED_UNIFORM = [
    (1, (0,)), (1, (1,)), (1, (2,)), (1, (0, 1)), (1, (1, 2)),
    (1, (1, 2, 3)), (1, (0, 1, 2, 3)), (-1, ()),
]  # fmt: skip

_MIXED_NONUNIFORM = [
    (1, (0,)), (2, (1,)), (3, (2,)), (5, (0, 1)), (7, (1, 2)),
    (11, (1, 2, 3)), (13, (0, 1, 2, 3)),
]  # fmt: skip

_TWO_BODY_UNIFORM = [(1, (i, j)) for i in range(4) for j in range(i + 1, 4)]

_TWO_BODY_NONUNIFORM = [
    (1, (0, 1)), (2, (0, 2)), (3, (0, 3)), (5, (1, 2)), (7, (1, 3)), (11, (2, 3)), (-3, ()),
]  # fmt: skip

_LITERALS = {
    "williamson12": (8, _WILLIAMSON12),
    "turyn44": (5, _TURYN44),
    "mixed_uniform": (4, _MIXED_UNIFORM),
    "mixed_nonuniform": (4, _MIXED_NONUNIFORM),
    "two_body_uniform": (4, _TWO_BODY_UNIFORM),
    "two_body_nonuniform": (4, _TWO_BODY_NONUNIFORM),
}


def proto_kbody(k: int) -> IsingHamiltonian:
    """``2 (1 + Z_0 ... Z_{k-1})``: fill ``k`` unknown entries of a 2x2 Hadamard matrix."""
    if not 1 <= k <= 4:
        raise ValueError(f"prototype body count must be 1..4, got {k}")
    return canonicalize([(2, ()), (2, tuple(range(k)))], k)


BUILTIN_NAMES = tuple(_LITERALS) + ("proto1", "proto2", "proto3", "proto4")


def builtin_hamiltonian(name: str) -> IsingHamiltonian:
    """Fixed problem instances by short name.

    Names: ``williamson12``, ``turyn44``, ``mixed_uniform``,
    ``mixed_nonuniform``, ``two_body_uniform``, ``two_body_nonuniform`` and
    ``proto1`` .. ``proto4`` (also ``proto_kbody(k)``). Dashes are accepted
    in place of underscores.
    """
    key = name.strip().replace("-", "_")
    m = re.fullmatch(r"proto(?:_kbody)?\(?(\d)\)?", key)
    if m:
        return proto_kbody(int(m.group(1)))
    if key not in _LITERALS:
        raise ValueError(f"unknown builtin Hamiltonian {name!r}; choose from {', '.join(BUILTIN_NAMES)}")
    n, terms = _LITERALS[key]
    return canonicalize(terms, n)
