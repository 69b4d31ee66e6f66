import itertools

import numpy as np
import pytest

from qaoa_hadamard.ising import IsingTerm, canonicalize


def all_bitstrings(n):
    return ["".join(b) for b in itertools.product("01", repeat=n)]


def random_hamiltonian(rng, n, n_terms=None, max_body=4, integer=False):
    if n_terms is None:
        n_terms = int(rng.integers(1, 12))
    terms = []
    for _ in range(n_terms):
        k = int(rng.integers(0, min(max_body, n) + 1))
        support = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        c = float(rng.integers(-5, 6)) if integer else float(rng.normal())
        terms.append(IsingTerm(c, support))
    return canonicalize(terms, n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
