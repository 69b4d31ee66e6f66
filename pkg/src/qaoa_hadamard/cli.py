"""Command-line front end: ``qaoa-hadamard <command> ...``.

Exit codes: 0 success, 1 usage or input error, 2 verification failure,
3 resource cap exceeded. Output files are written atomically, so a failed
command never leaves a partial file behind.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import circuit as circuit_mod
from . import ising
from .circuit import ParameterVector, build_qaoa_circuit
from .optimize import METHODS, OptimizerOptions
from .oracle import brute_force
from .problems import (
    TurynTemplate,
    WilliamsonSpec,
    assemble_williamson,
    builtin_hamiltonian,
    direct_cost,
    format_matrix,
    is_hadamard,
    load_matrix,
    turyn_hamiltonian,
    williamson_hamiltonian,
)
from .runtime import MODES, OBJECTIVES, RunConfig, pel_scan, run_qaoa
from .statevector import MAX_QUBITS, QubitLimitError

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_RESOURCE = 0, 1, 2, 3

# options whose values may legitimately start with '-'
_SIGNED_OPTIONS = ("--gamma", "--beta", "--init-lo", "--init-hi")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument helpers ----------------------------------------------------------


def _angle(text: str) -> float:
    """A float, or a multiple of pi such as ``pi``, ``-pi/2``, ``0.5pi``."""
    t = text.strip().lower().replace(" ", "")
    try:
        return float(t)
    except ValueError:
        pass
    m = re.fullmatch(r"([+-]?)(\d*\.?\d*)\*?pi(?:/(\d*\.?\d+))?", t)
    if not m:
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}")
    sign, coef, denom = m.groups()
    value = (float(coef) if coef else 1.0) * np.pi / (float(denom) if denom else 1.0)
    return -value if sign == "-" else value


def _grid_axis(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEPS, got {text!r}")
    lo, hi = _angle(parts[0]), _angle(parts[1])
    try:
        steps = int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"STEPS must be an integer, got {parts[2]!r}") from None
    if steps < 1:
        raise argparse.ArgumentTypeError("STEPS must be >= 1")
    return lo, hi, steps


def _angle_list(text: str) -> list[float]:
    return [_angle(t) for t in text.split(",") if t.strip()]


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _bits(text: str) -> str:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"expected a 0/1 string, got {text!r}")
    return text


def load_hamiltonian(source: str) -> ising.IsingHamiltonian:
    """``builtin:<name>`` or a path to a Hamiltonian text file."""
    if source.startswith("builtin:"):
        return builtin_hamiltonian(source.split(":", 1)[1])
    return ising.load(source)


def write_output(path: str | None, text: str):
    """Write to ``path`` atomically, or to stdout when ``path`` is None or ``-``."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent if str(target.parent) else ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


# -- commands ------------------------------------------------------------------


def _hamiltonian_source(args) -> str:
    source = args.hamiltonian or args.source
    if not source:
        raise UsageError("a Hamiltonian is required (FILE or builtin:<name>)")
    if args.hamiltonian and args.source and args.hamiltonian != args.source:
        raise UsageError("Hamiltonian given both positionally and via --hamiltonian")
    return source


def cmd_hamiltonian(args) -> int:
    problem = args.problem
    if problem == "williamson":
        if args.k is None:
            raise UsageError("--problem williamson needs --k")
        H = williamson_hamiltonian(WilliamsonSpec(args.k))
    elif problem == "turyn-template":
        if args.template is None:
            raise UsageError("--problem turyn-template needs --template FILE")
        H = turyn_hamiltonian(TurynTemplate.load(args.template))
    elif problem.startswith("builtin:"):
        H = builtin_hamiltonian(problem.split(":", 1)[1])
    else:
        raise UsageError(f"unknown problem {problem!r}")
    if args.scale is not None:
        H = ising.scale(H, args.scale)
    write_output(args.out, ising.dumps(H))
    return EXIT_OK


def cmd_brute_force(args) -> int:
    H = load_hamiltonian(_hamiltonian_source(args))
    report = brute_force(H)
    write_output(args.out, _dump_json(report.to_dict()))
    return EXIT_OK


def cmd_solve(args) -> int:
    H = load_hamiltonian(_hamiltonian_source(args))
    config = RunConfig(
        layers=args.layers,
        mode=args.mode,
        shots=args.shots,
        record_shots=args.record_shots or args.shots,
        restarts=args.restarts,
        seed=args.seed,
        init_range=(args.init_lo, args.init_hi),
        objective=args.objective,
        optimizer=OptimizerOptions(
            method=args.optimizer,
            max_iterations=args.max_iterations,
            tolerance=args.tolerance,
            initial_scale=args.initial_scale,
        ),
        threads=args.threads,
        max_qubits=args.max_qubits,
    )
    report = run_qaoa(H, config)
    d = report.to_dict(reproducible=args.reproducible, include_trace=not args.no_trace)
    write_output(args.out, _dump_json(d))
    return EXIT_OK


def cmd_pel(args) -> int:
    H = load_hamiltonian(_hamiltonian_source(args))
    grid = pel_scan(H, args.gamma, args.beta, objective=args.objective)
    write_output(args.out, grid.to_csv())
    return EXIT_OK


def cmd_assemble(args) -> int:
    if args.problem != "williamson":
        raise UsageError(f"assembly is only defined for --problem williamson, got {args.problem!r}")
    spec = WilliamsonSpec(args.k)
    if len(args.string) != spec.n_qubits:
        raise UsageError(f"K={args.k} needs a {spec.n_qubits}-bit string, got {len(args.string)} bits")
    write_output(args.out, format_matrix(assemble_williamson(spec, args.string)))
    return EXIT_OK


def cmd_verify(args) -> int:
    B = load_matrix(args.matrix)
    cost = direct_cost(B)
    ok = is_hadamard(B)
    if args.json:
        sys.stdout.write(_dump_json({"order": int(B.shape[0]), "direct_cost": cost, "hadamard": ok}))
    else:
        print(f"order {B.shape[0]}")
        print(f"direct_cost {cost:g}")
        print(f"hadamard {'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_emit(args) -> int:
    H = load_hamiltonian(_hamiltonian_source(args))
    gammas, betas = args.gamma, args.beta
    p = args.layers
    if len(gammas) == 1 and p > 1:
        gammas = gammas * p
    if len(betas) == 1 and p > 1:
        betas = betas * p
    if len(gammas) != p or len(betas) != p:
        raise UsageError(f"--layers {p} needs {p} gamma and beta values, got {len(gammas)} and {len(betas)}")
    circ = build_qaoa_circuit(H, ParameterVector(tuple(gammas), tuple(betas)))
    write_output(args.out, circuit_mod.dumps(circ))
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--threads", type=_positive_int, default=1, help="worker thread cap (results do not depend on it)")
    common.add_argument("--reproducible", action="store_true", help="omit timestamps from JSON output")
    common.add_argument("--json", action="store_true", help="machine-readable output where a command prints text")

    parser = _Parser(prog="qaoa-hadamard", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def with_hamiltonian(p):
        p.add_argument("source", nargs="?", help="Hamiltonian FILE or builtin:<name>")
        p.add_argument("--hamiltonian", help="same as the positional argument")

    p = sub.add_parser("hamiltonian", parents=[common], help="build a problem Hamiltonian")
    p.add_argument("--problem", required=True, help="williamson | turyn-template | builtin:<name>")
    p.add_argument("--k", type=int, help="Williamson block size (odd)")
    p.add_argument("--template", help="Turyn template file")
    p.add_argument("--scale", type=float, help="multiply all coefficients by a positive factor")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_hamiltonian)

    p = sub.add_parser("brute-force", parents=[common], help="enumerate all bit strings")
    with_hamiltonian(p)
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_brute_force)

    p = sub.add_parser("solve", parents=[common], help="optimize QAOA angles")
    with_hamiltonian(p)
    p.add_argument("--layers", type=_positive_int, default=1)
    p.add_argument("--mode", choices=MODES, default="exact")
    p.add_argument("--shots", type=_positive_int, default=1024)
    p.add_argument("--record-shots", type=_positive_int, help="histogram shots (default --shots)")
    p.add_argument("--restarts", type=_positive_int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init-lo", type=_angle, default=-0.5)
    p.add_argument("--init-hi", type=_angle, default=0.5)
    p.add_argument("--objective", choices=OBJECTIVES, default="error")
    p.add_argument("--optimizer", choices=METHODS, default="cobyla")
    p.add_argument("--max-iterations", type=_positive_int, default=2000)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--initial-scale", type=float, default=0.1)
    p.add_argument("--max-qubits", type=_positive_int, default=MAX_QUBITS)
    p.add_argument("--no-trace", action="store_true", help="leave optimizer traces out of the report")
    p.add_argument("--out", help="report file (default stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("pel", parents=[common], help="single-layer energy landscape grid")
    with_hamiltonian(p)
    p.add_argument("--gamma", type=_grid_axis, default=(-np.pi, np.pi, 101), help="LO:HI:STEPS")
    p.add_argument("--beta", type=_grid_axis, default=(-np.pi, np.pi, 101), help="LO:HI:STEPS")
    p.add_argument("--objective", choices=OBJECTIVES, default="energy")
    p.add_argument("--out", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_pel)

    p = sub.add_parser("assemble", parents=[common], help="build a sign matrix from a bit string")
    p.add_argument("--problem", default="williamson")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--string", type=_bits, required=True)
    p.add_argument("--out", help="matrix file (default stdout)")
    p.set_defaults(func=cmd_assemble)

    p = sub.add_parser("verify", parents=[common], help="check a sign matrix for orthogonality")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("emit", parents=[common], help="write the QAOA gate list")
    with_hamiltonian(p)
    p.add_argument("--layers", type=_positive_int, default=1)
    p.add_argument("--gamma", type=_angle_list, required=True, help="comma-separated, one per layer")
    p.add_argument("--beta", type=_angle_list, required=True, help="comma-separated, one per layer")
    p.add_argument("--out", help="circuit file (default stdout)")
    p.set_defaults(func=cmd_emit)
    return parser


def _join_signed(argv: list[str]) -> list[str]:
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED_OPTIONS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    argv = _join_signed(list(sys.argv[1:] if argv is None else argv))
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing command; see --help")
        return args.func(args)
    except QubitLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, ValueError, OSError, argparse.ArgumentTypeError) as exc:
        print(f"error: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
