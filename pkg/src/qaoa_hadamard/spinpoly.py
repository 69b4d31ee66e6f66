"""Multilinear polynomials in +/-1 spin variables.

Monomials are stored as integer bitmasks over variable indices; since
``s**2 == 1`` the product of two monomials is the XOR of their masks.
"""

from __future__ import annotations

from collections import defaultdict

from .ising import IsingHamiltonian, IsingTerm, canonicalize


class SpinPolynomial:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs: dict[int, float] = {m: c for m, c in (coeffs or {}).items() if c != 0}

    @classmethod
    def constant(cls, value: float) -> "SpinPolynomial":
        return cls({0: value})

    @classmethod
    def var(cls, index: int, sign: int = 1) -> "SpinPolynomial":
        return cls({1 << index: sign})

    def __add__(self, other):
        if not isinstance(other, SpinPolynomial):
            other = SpinPolynomial.constant(other)
        out = defaultdict(float, self.coeffs)
        for m, c in other.coeffs.items():
            out[m] += c
        return SpinPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return SpinPolynomial({m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, SpinPolynomial) else -other)

    def __mul__(self, other):
        if not isinstance(other, SpinPolynomial):
            return SpinPolynomial({m: c * other for m, c in self.coeffs.items()})
        out = defaultdict(float)
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                out[m1 ^ m2] += c1 * c2
        return SpinPolynomial(out)

    __rmul__ = __mul__

    def square(self) -> "SpinPolynomial":
        return self * self

    @property
    def degree(self) -> int:
        return max((m.bit_count() for m in self.coeffs), default=0)

    def evaluate(self, spins) -> float:
        total = 0.0
        for m, c in self.coeffs.items():
            v = c
            i = 0
            while m:
                if m & 1:
                    v *= spins[i]
                m >>= 1
                i += 1
            total += v
        return total

    def to_hamiltonian(self, n_qubits: int) -> IsingHamiltonian:
        terms = []
        for m, c in self.coeffs.items():
            support = tuple(i for i in range(m.bit_length()) if m >> i & 1)
            terms.append(IsingTerm(c, support))
        return canonicalize(terms, n_qubits)

    def __repr__(self):
        return f"SpinPolynomial({len(self.coeffs)} terms, degree {self.degree})"


def poly_sum(polys) -> SpinPolynomial:
    out = defaultdict(float)
    for p in polys:
        for m, c in p.coeffs.items():
            out[m] += c
    return SpinPolynomial(out)
