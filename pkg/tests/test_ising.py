import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaoa_hadamard.ising import (
    IsingHamiltonian,
    IsingTerm,
    bits_to_spins,
    canonicalize,
    dumps,
    energies,
    evaluate,
    loads,
    scale,
    spins_to_bits,
)
from qaoa_hadamard.problems import builtin_hamiltonian

from conftest import all_bitstrings, random_hamiltonian


def brute_energy(terms, bits):
    """Reference evaluation straight from the definition."""
    spins = [1 if b == "0" else -1 for b in bits]
    total = 0.0
    for c, support in terms:
        prod = 1
        for q in support:
            prod *= spins[q]
        total += c * prod
    return total


class TestCanonicalize:
    def test_merges_permuted_supports(self):
        H = canonicalize([IsingTerm(2.0, (1, 0)), IsingTerm(1.0, (0, 1))], 2)
        assert H.terms == (IsingTerm(3.0, (0, 1)),)

    def test_cancellation_drops_term(self):
        H = canonicalize([IsingTerm(1.0, (2,)), IsingTerm(-1.0, (2,))], 3)
        assert H.terms == ()

    def test_turyn44_literal_is_already_canonical(self):
        H = builtin_hamiltonian("turyn44")
        assert len([t for t in H.terms if t.support]) == 16
        assert H.constant == 5
        assert canonicalize(H.terms, H.n_qubits) == H

    def test_index_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            canonicalize([(1.0, (0, 3))], 3)

    def test_repeated_index_reduces(self):
        H = canonicalize([(1.5, (0, 0, 1))], 2)
        assert H.terms == (IsingTerm(1.5, (1,)),)

    def test_more_than_four_bodies_rejected(self):
        with pytest.raises(ValueError, match="more than 4"):
            canonicalize([(1.0, (0, 1, 2, 3, 4))], 5)

    def test_idempotent(self, rng):
        for _ in range(50):
            H = random_hamiltonian(rng, 6)
            assert canonicalize(H.terms, H.n_qubits) == H

    def test_constructor_rejects_noncanonical(self):
        with pytest.raises(ValueError):
            IsingHamiltonian(2, (IsingTerm(1.0, (1, 0)),))
        with pytest.raises(ValueError):
            IsingHamiltonian(2, (IsingTerm(0.0, (1,)),))


class TestEvaluate:
    def test_turyn44_solution_has_zero_energy(self):
        assert evaluate(builtin_hamiltonian("turyn44"), "11100") == 0

    def test_prototype_all_zero_bits(self):
        H = canonicalize([(2, ()), (2, (0, 1, 2, 3))], 4)
        assert evaluate(H, "0000") == 4

    @pytest.mark.parametrize("bits", ["0101", "0110", "1000", "1001"])
    def test_mixed_uniform_listed_solutions(self, bits):
        assert evaluate(builtin_hamiltonian("mixed_uniform"), bits) == 0

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            evaluate(builtin_hamiltonian("turyn44"), "111")

    def test_matches_reference(self, rng):
        for _ in range(30):
            H = random_hamiltonian(rng, 5)
            terms = [(t.coefficient, t.support) for t in H.terms]
            for bits in all_bitstrings(5):
                assert evaluate(H, bits) == pytest.approx(brute_energy(terms, bits), abs=1e-12)

    def test_linear_in_coefficients(self, rng):
        for _ in range(20):
            H1, H2 = random_hamiltonian(rng, 4), random_hamiltonian(rng, 4)
            a = float(rng.normal())
            combo = canonicalize(
                [IsingTerm(a * t.coefficient, t.support) for t in H1.terms] + list(H2.terms), 4
            )
            for bits in all_bitstrings(4):
                assert evaluate(combo, bits) == pytest.approx(
                    a * evaluate(H1, bits) + evaluate(H2, bits), abs=1e-12
                )

    def test_energies_vector_matches_pointwise(self, rng):
        for _ in range(20):
            H = random_hamiltonian(rng, 6)
            table = energies(H)
            for i, bits in enumerate(all_bitstrings(6)):
                assert table[i] == pytest.approx(evaluate(H, bits), abs=1e-12)


class TestSpinConversion:
    def test_known_pattern(self):
        assert bits_to_spins("010110").tolist() == [1, -1, 1, -1, -1, 1]

    def test_single_bit(self):
        assert bits_to_spins("0").tolist() == [1]

    @given(st.text(alphabet="01", min_size=1, max_size=40))
    @settings(max_examples=1000)
    def test_round_trip(self, bits):
        assert spins_to_bits(bits_to_spins(bits)) == bits

    def test_bad_spin(self):
        with pytest.raises(ValueError):
            spins_to_bits([1, 0, -1])

    def test_bad_bits(self):
        with pytest.raises(ValueError):
            bits_to_spins("01a")
        with pytest.raises(ValueError):
            bits_to_spins("")


class TestScale:
    def test_identity(self, rng):
        H = random_hamiltonian(rng, 5)
        assert scale(H, 1) == H

    @pytest.mark.parametrize("factor", [0, -1.0])
    def test_nonpositive_rejected(self, factor):
        with pytest.raises(ValueError):
            scale(builtin_hamiltonian("turyn44"), factor)

    def test_argmin_invariant_8_qubits(self, rng):
        for _ in range(10):
            H = random_hamiltonian(rng, 8, n_terms=15, integer=True)
            for alpha in (0.25, 3.0, 1 / 48):
                e0, e1 = energies(H), energies(scale(H, alpha))
                m0 = np.isclose(e0, e0.min(), rtol=0, atol=1e-9)
                m1 = np.isclose(e1, e1.min(), rtol=0, atol=1e-9 * alpha)
                assert np.array_equal(np.flatnonzero(m0), np.flatnonzero(m1))


class TestTextFormat:
    def test_round_trip_is_exact(self, rng):
        for _ in range(20):
            H = random_hamiltonian(rng, 7)
            assert loads(dumps(H)) == H

    def test_comments_and_constant(self):
        H = loads("# test\nqubits 3\n4   # offset\n2 0 1\n-1.5 2\n")
        assert H.constant == 4
        assert H.coefficient(0, 1) == 2
        assert H.coefficient(2) == -1.5

    def test_literal_text(self):
        text = dumps(canonicalize([(2, ()), (2, (0, 1))], 2))
        assert text == "qubits 2\n2\n2 0 1\n"

    @pytest.mark.parametrize(
        "text",
        ["1 0\n", "qubits 2\n1 0 5\n", "qubits 2\nfoo 1\n", "qubits 2\n1 0 0\n", "qubits 1\nqubits 1\n"],
    )
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            loads(text)
