"""Derivative-free minimization of QAOA energies.

Both methods delegate to :func:`scipy.optimize.minimize`; this module adds
the evaluation trace, the best-so-far guarantee and finite-value checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize as _scipy_optimize

METHODS = ("cobyla", "nelder-mead")


class NonFiniteObjectiveError(FloatingPointError):
    def __init__(self, x, value):
        super().__init__(f"objective returned {value} at x={np.array2string(np.asarray(x), precision=6)}")
        self.x = np.array(x)
        self.value = value


@dataclass(frozen=True)
class OptimizerOptions:
    method: str = "cobyla"
    max_iterations: int = 2000
    tolerance: float = 1e-6
    initial_scale: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "method", self.method.lower().replace("_", "-"))
        if self.method == "cobyla-like":
            object.__setattr__(self, "method", "cobyla")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {METHODS}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.initial_scale > 0:
            raise ValueError("initial_scale must be positive")


@dataclass
class TraceEntry:
    evaluation: int
    iteration: int
    energy: float
    best: float


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    x0: np.ndarray
    f0: float
    trace: list = field(default_factory=list)
    n_evaluations: int = 0
    n_iterations: int = 0
    converged: bool = False
    message: str = ""

    def best_so_far(self) -> np.ndarray:
        return np.array([t.best for t in self.trace])

    def energies(self) -> np.ndarray:
        return np.array([t.energy for t in self.trace])


def minimize(objective: Callable[[np.ndarray], float], x0, opts: OptimizerOptions | None = None) -> OptimizeResult:
    """Minimize ``objective`` from ``x0``.

    Stops when successive energies stop changing by more than
    ``opts.tolerance`` (COBYLA's final trust radius / Nelder-Mead's simplex
    spread) or after ``opts.max_iterations`` evaluations. The returned
    point is the best one ever evaluated, so ``fun <= objective(x0)``.
    """
    opts = opts or OptimizerOptions()
    x0 = np.asarray(x0, dtype=float).ravel()
    if not np.all(np.isfinite(x0)):
        raise ValueError(f"x0 must be finite, got {x0}")

    trace: list[TraceEntry] = []
    state = {"best": np.inf, "best_x": x0.copy(), "iteration": 0}

    def wrapped(x):
        x = np.asarray(x, dtype=float)
        value = float(objective(x))
        if not np.isfinite(value):
            raise NonFiniteObjectiveError(x, value)
        if value < state["best"]:
            state["best"] = value
            state["best_x"] = x.copy()
        trace.append(TraceEntry(len(trace), state["iteration"], value, state["best"]))
        return value

    def callback(*_):
        state["iteration"] += 1

    f0 = wrapped(x0)
    budget = max(opts.max_iterations - 1, 1)
    if opts.method == "cobyla":
        res = _scipy_optimize.minimize(
            wrapped, x0, method="COBYLA", callback=callback, tol=opts.tolerance,
            options={"rhobeg": opts.initial_scale, "maxiter": budget},
        )
    else:
        simplex = np.vstack([x0, x0 + opts.initial_scale * np.eye(x0.size)])
        res = _scipy_optimize.minimize(
            wrapped, x0, method="Nelder-Mead", callback=callback,
            options={
                "initial_simplex": simplex,
                "fatol": opts.tolerance,
                "xatol": opts.tolerance,
                "maxfev": budget,
                "maxiter": budget,
            },
        )
    return OptimizeResult(
        x=state["best_x"],
        fun=state["best"],
        x0=x0,
        f0=f0,
        trace=trace,
        n_evaluations=len(trace),
        n_iterations=state["iteration"],
        converged=bool(res.success),
        message=str(res.message),
    )
