"""QAOA experiment loop: evolve, measure, update angles, repeat.

The loop simulates layers directly on the statevector: the problem layer is
one diagonal phase ``exp(-i gamma E)`` and the mixer is diagonal in the
Hadamard basis. :func:`circuit.build_qaoa_circuit` produces the same
state gate by gate and is used to cross-check this fast path.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import numpy as np

from .circuit import ParameterVector
from .ising import IsingHamiltonian, energies, index_to_bits, walsh_hadamard
from .optimize import OptimizerOptions, OptimizeResult, minimize
from .oracle import OracleReport, brute_force, xrar
from .statevector import (
    MAX_QUBITS,
    SampleHistogram,
    StateVector,
    apply_rx_inplace,
    check_qubit_count,
    sample_indices,
)

DEFAULT_SHOTS = 1024
DENSE_MIXER_MAX_QUBITS = 10
OBJECTIVES = ("error", "energy")
MODES = ("exact", "sampled")


@lru_cache(maxsize=8)
def _walsh_matrix(n: int) -> np.ndarray:
    return walsh_hadamard(np.eye(1 << n)) / np.sqrt(1 << n)


class QaoaEvolver:
    """Applies ``U(gamma, beta)`` to the uniform superposition.

    ``mixer_weights`` are the transverse-field coefficients ``b_q``
    (all ones by default).
    """

    def __init__(self, H: IsingHamiltonian, mixer_weights: Sequence[float] | None = None,
                 max_qubits: int = MAX_QUBITS, dense_mixer: bool | None = None):
        check_qubit_count(H.n_qubits, max_qubits)
        self.H = H
        self.n = H.n_qubits
        self.energies = energies(H)
        weights = np.ones(self.n) if mixer_weights is None else np.asarray(mixer_weights, float)
        if weights.shape != (self.n,):
            raise ValueError(f"expected {self.n} mixer weights, got {weights.shape}")
        self.mixer_weights = weights
        if dense_mixer is None:
            dense_mixer = self.n <= DENSE_MIXER_MAX_QUBITS
        self.dense_mixer = dense_mixer
        if dense_mixer:
            # eigenvalues of sum_q b_q X_q in the Hadamard basis
            bits = (np.arange(1 << self.n)[:, None] >> (self.n - 1 - np.arange(self.n))) & 1
            self._x_eigs = (1 - 2 * bits) @ weights
            self._walsh = _walsh_matrix(self.n)

    def initial(self) -> np.ndarray:
        dim = 1 << self.n
        return np.full(dim, dim**-0.5, dtype=np.complex128)

    def mix(self, psi: np.ndarray, beta: float) -> np.ndarray:
        if self.dense_mixer:
            return self._walsh @ (np.exp(-1j * beta * self._x_eigs) * (self._walsh @ psi))
        psi = psi.copy()
        for q in range(self.n):
            apply_rx_inplace(psi, self.n, q, 2.0 * self.mixer_weights[q] * beta)
        return psi

    def evolve(self, params: ParameterVector | np.ndarray) -> np.ndarray:
        if not isinstance(params, ParameterVector):
            params = ParameterVector.from_array(params)
        psi = self.initial()
        for gamma, beta in zip(params.gammas, params.betas):
            psi = psi * np.exp(-1j * gamma * self.energies)
            psi = self.mix(psi, beta)
        return psi

    def state(self, params) -> StateVector:
        return StateVector(self.n, self.evolve(params))

    def probabilities(self, params) -> np.ndarray:
        return np.abs(self.evolve(params)) ** 2


def cost_vector(values: np.ndarray, objective: str, valid_energy: float) -> np.ndarray:
    """Per-string cost that the optimizer averages.

    ``"energy"`` is the Hamiltonian itself; ``"error"`` is the distance to
    the valid energy, ``|E - E_valid|``, which equals the energy for
    non-negative costs whose valid strings sit at zero.
    """
    if objective == "energy":
        return values
    if objective == "error":
        return np.abs(values - valid_energy)
    raise ValueError(f"unknown objective {objective!r}; choose from {OBJECTIVES}")


def energy_objective(H: IsingHamiltonian, params: ParameterVector, mode: str = "exact",
                     shots: int = DEFAULT_SHOTS, seed=None, *, evolver: QaoaEvolver | None = None,
                     costs: np.ndarray | None = None) -> float:
    """Mean energy of the QAOA state (``exact``) or of ``shots`` samples (``sampled``)."""
    evolver = evolver or QaoaEvolver(H)
    costs = evolver.energies if costs is None else costs
    probs = evolver.probabilities(params)
    if mode == "exact":
        return float(np.dot(probs, costs))
    if mode == "sampled":
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return float(costs[sample_indices(probs, shots, rng)].mean())
    raise ValueError(f"unknown mode {mode!r}; choose from {MODES}")


# -- runs ----------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    layers: int = 1
    mode: str = "exact"
    shots: int = DEFAULT_SHOTS
    record_shots: int = DEFAULT_SHOTS
    restarts: int = 1
    seed: int = 0
    init_range: tuple[float, float] = (-0.5, 0.5)
    objective: str = "error"
    optimizer: OptimizerOptions = field(default_factory=OptimizerOptions)
    mixer_weights: tuple[float, ...] | None = None
    threads: int = 1
    max_qubits: int = MAX_QUBITS

    def __post_init__(self):
        if self.layers < 1:
            raise ValueError("layers must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        lo, hi = self.init_range
        if not lo < hi:
            raise ValueError(f"init_range needs lo < hi, got {self.init_range}")
        if self.shots < 1 or self.record_shots < 1:
            raise ValueError("shot counts must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    def to_dict(self) -> dict:
        d = asdict(self)
        del d["threads"]  # reports must not depend on the thread count
        d["init_range"] = list(self.init_range)
        if self.mixer_weights is not None:
            d["mixer_weights"] = list(self.mixer_weights)
        return d


@dataclass
class RestartResult:
    index: int
    initial_params: ParameterVector
    final_params: ParameterVector
    initial_energy: float
    final_energy: float
    final_expectation: float
    valid_probability: float
    histogram: SampleHistogram
    histogram_valid_probability: float
    xrar: float
    optimization: OptimizeResult

    def to_dict(self, include_trace: bool = True) -> dict:
        opt = self.optimization
        d = {
            "index": self.index,
            "initial_params": self.initial_params.to_dict(),
            "final_params": self.final_params.to_dict(),
            "initial_energy": self.initial_energy,
            "final_energy": self.final_energy,
            "final_expectation": self.final_expectation,
            "valid_probability": self.valid_probability,
            "histogram_valid_probability": self.histogram_valid_probability,
            "xrar": self.xrar,
            "n_evaluations": opt.n_evaluations,
            "n_iterations": opt.n_iterations,
            "converged": opt.converged,
            "histogram": self.histogram.to_dict(),
        }
        if include_trace:
            d["trace"] = [[t.evaluation, t.iteration, t.energy] for t in opt.trace]
        return d


@dataclass
class RunReport:
    config: RunConfig
    oracle: OracleReport
    restarts: list
    best_restart: int
    metrics: dict

    @property
    def best(self) -> RestartResult:
        return self.restarts[self.best_restart]

    @property
    def histogram(self) -> SampleHistogram:
        return self.best.histogram

    @property
    def best_energy(self) -> float:
        return self.best.final_energy

    def to_dict(self, reproducible: bool = True, include_trace: bool = True) -> dict:
        d = {
            "config": self.config.to_dict(),
            "oracle": self.oracle.to_dict(),
            "restarts": [r.to_dict(include_trace) for r in self.restarts],
            "best_restart": self.best_restart,
            "histogram": self.histogram.to_dict(),
            "metrics": self.metrics,
        }
        if not reproducible:
            d["created"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
        return d

    def to_json(self, reproducible: bool = True, include_trace: bool = True) -> str:
        return json.dumps(self.to_dict(reproducible, include_trace), indent=2, sort_keys=True)


def _histogram(probs: np.ndarray, shots: int, rng: np.random.Generator, n: int) -> SampleHistogram:
    values, counts = np.unique(sample_indices(probs, shots, rng), return_counts=True)
    return SampleHistogram({index_to_bits(int(v), n): int(c) for v, c in zip(values, counts)}, shots)


def _run_restart(index: int, H: IsingHamiltonian, config: RunConfig, evolver: QaoaEvolver,
                 costs: np.ndarray, valid: np.ndarray, oracle: OracleReport,
                 seed_seq: np.random.SeedSequence) -> RestartResult:
    init_rng, sample_rng, record_rng = (np.random.default_rng(s) for s in seed_seq.spawn(3))
    p = config.layers
    lo, hi = config.init_range
    x0 = init_rng.uniform(lo, hi, size=2 * p)

    if config.mode == "exact":
        def objective(x):
            return float(np.dot(evolver.probabilities(x), costs))
    else:
        def objective(x):
            draws = sample_indices(evolver.probabilities(x), config.shots, sample_rng)
            return float(costs[draws].mean())

    result = minimize(objective, x0, config.optimizer)
    probs = evolver.probabilities(result.x)
    hist = _histogram(probs, config.record_shots, record_rng, H.n_qubits)
    valid_set = set(oracle.solutions)
    hist_p = sum(c for b, c in hist.counts.items() if b in valid_set) / hist.shots
    exact_p = float(probs[valid].sum())
    p_x = exact_p if config.mode == "exact" else hist_p
    return RestartResult(
        index=index,
        initial_params=ParameterVector.from_array(x0),
        final_params=ParameterVector.from_array(result.x),
        initial_energy=result.f0,
        final_energy=result.fun,
        final_expectation=float(np.dot(probs, evolver.energies)),
        valid_probability=exact_p,
        histogram=hist,
        histogram_valid_probability=hist_p,
        xrar=xrar(min(p_x, 1.0), oracle.P_R),
        optimization=result,
    )


def run_qaoa(H: IsingHamiltonian, config: RunConfig | None = None,
             oracle: OracleReport | None = None) -> RunReport:
    """Optimize the QAOA angles from ``config.restarts`` random starts.

    Each restart draws its initial angles uniformly from ``config.init_range``
    and owns its random streams, so results do not depend on ``threads``.
    The reported histogram belongs to the restart with the lowest final
    objective.
    """
    config = config or RunConfig()
    check_qubit_count(H.n_qubits, config.max_qubits)
    evolver = QaoaEvolver(H, config.mixer_weights, config.max_qubits)
    if oracle is None:
        oracle = brute_force(H)
    if oracle.S_R == 0:
        raise ValueError("Hamiltonian has no valid strings")
    valid = np.zeros(1 << H.n_qubits, dtype=bool)
    valid[[int(b, 2) for b in oracle.solutions]] = True
    costs = cost_vector(evolver.energies, config.objective, oracle.valid_energy)

    seeds = np.random.SeedSequence(config.seed).spawn(config.restarts)
    args = [(i, H, config, evolver, costs, valid, oracle, seeds[i]) for i in range(config.restarts)]
    if config.threads > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            restarts = list(pool.map(lambda a: _run_restart(*a), args))
    else:
        restarts = [_run_restart(*a) for a in args]

    best = min(range(len(restarts)), key=lambda i: (restarts[i].final_energy, i))
    return RunReport(config, oracle, restarts, best, _metrics(restarts, best, oracle))


def _metrics(restarts: list, best: int, oracle: OracleReport) -> dict:
    x = np.array([r.xrar for r in restarts])
    b = restarts[best]
    m = {
        "S_R": oracle.S_R,
        "P_R": oracle.P_R,
        "E_max": oracle.E_max,
        "E_tot": oracle.E_tot,
        "valid_energy": oracle.valid_energy,
        "xRAR": b.xrar,
        "xrar": b.xrar,
        "xrar_best": b.xrar,
        "xrar_mean": float(x.mean()),
        "xrar_max": float(x.max()),
        "xrar_min": float(x.min()),
        "valid_probability": b.valid_probability,
        "histogram_valid_probability": b.histogram_valid_probability,
        "histogram_xrar": xrar(b.histogram_valid_probability, oracle.P_R),
        "best_final_energy": b.final_energy,
        "best_final_expectation": b.final_expectation,
    }
    if oracle.E_max > 0:
        m["random_normalized_error"] = oracle.normalized_avg_error
        m["final_normalized_error"] = b.final_energy / oracle.E_max
        m["final_normalized_error_mean"] = float(np.mean([r.final_energy for r in restarts])) / oracle.E_max
    return m


def save_report(report: RunReport, path, reproducible: bool = True):
    Path(path).write_text(report.to_json(reproducible) + "\n")


# -- PEL scans -----------------------------------------------------------------


@dataclass
class PelGrid:
    """Energy of a single-layer QAOA state over a (gamma, beta) grid.

    ``values[i, j]`` is the energy at ``gammas[i]``, ``betas[j]``.
    """

    gammas: np.ndarray
    betas: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (len(self.gammas), len(self.betas)):
            raise ValueError("grid values do not match axes")

    def argmin(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmin(self.values), self.values.shape)
        return float(self.gammas[i]), float(self.betas[j])

    def minima(self, atol: float = 1e-9) -> list[tuple[float, float]]:
        """Every grid point whose value is within ``atol`` of the grid minimum."""
        ii, jj = np.nonzero(self.values <= self.values.min() + atol)
        return [(float(self.gammas[i]), float(self.betas[j])) for i, j in zip(ii, jj)]

    def value_at(self, gamma: float, beta: float) -> float:
        i = int(np.argmin(np.abs(self.gammas - gamma)))
        j = int(np.argmin(np.abs(self.betas - beta)))
        return float(self.values[i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["gamma\\beta", *(f"{b:.17g}" for b in self.betas)])
        for g, row in zip(self.gammas, self.values):
            writer.writerow([f"{g:.17g}", *(f"{v:.17g}" for v in row)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PelGrid":
        rows = list(csv.reader(io.StringIO(text)))
        betas = np.array([float(b) for b in rows[0][1:]])
        gammas = np.array([float(r[0]) for r in rows[1:]])
        values = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
        return cls(gammas, betas, values)

    def save(self, path):
        Path(path).write_text(self.to_csv())


def _axis(spec) -> np.ndarray:
    lo, hi, steps = spec
    if steps < 1:
        raise ValueError("a grid axis needs at least one step")
    return np.linspace(lo, hi, int(steps))


def pel_scan(H: IsingHamiltonian, gamma_range=(-np.pi, np.pi, 101), beta_range=(-np.pi, np.pi, 101),
             objective: str = "energy", mixer_weights=None) -> PelGrid:
    """Exact single-layer energy over an inclusive ``(lo, hi, steps)`` grid."""
    evolver = QaoaEvolver(H, mixer_weights)
    gammas, betas = _axis(gamma_range), _axis(beta_range)
    costs = evolver.energies
    if objective != "energy":
        oracle = brute_force(H)
        costs = cost_vector(costs, objective, oracle.valid_energy)
    values = np.empty((len(gammas), len(betas)))
    start = evolver.initial()
    for i, g in enumerate(gammas):
        phased = start * np.exp(-1j * g * evolver.energies)
        for j, b in enumerate(betas):
            values[i, j] = np.dot(np.abs(evolver.mix(phased, b)) ** 2, costs)
    return PelGrid(gammas, betas, values)
