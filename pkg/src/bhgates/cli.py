"""Command-line interface: verify, synthesize, sweep, evolve, tomo, decompose.

Exit codes: 0 on success (and threshold met for verify), 1 when a verify
threshold fails, 2 on usage or input errors. All numeric values accept a "pi"
suffix ("4pi", "-1.03pi"); `--plot` renders figures next to the delimited
outputs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import evolve, gates, hamiltonian, logical, optimize, tomography

WORKERS_ENV = "BHGATES_WORKERS"

DEFAULT_GAMMA_RATIOS = (0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0)
DEFAULT_JMAX_GRID = tuple(k * math.pi for k in (1, 2, 3, 4, 6))
SWEEP_JMAX_DEFAULT_GAMMA = 20 * math.pi


def parse_value(text: str) -> float:
    """Parse a float with an optional pi suffix: '4pi' -> 4*pi, 'pi' -> pi."""
    s = str(text).strip().lower()
    factor = 1.0
    if s.endswith("pi"):
        factor = math.pi
        s = s[:-2].strip()
        if s in ("", "+", "-"):
            s += "1"
    try:
        return float(s) * factor
    except ValueError:
        raise ValueError(f"cannot parse numeric value {text!r}") from None


def parse_grid(text: str) -> tuple[float, ...]:
    return tuple(parse_value(part) for part in text.split(",") if part.strip())


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        return 1


def _load_lattice(args) -> hamiltonian.LatticeSpec:
    if getattr(args, "spec", None) and getattr(args, "reference", False):
        raise ValueError("choose either --spec or --reference, not both")
    if getattr(args, "spec", None):
        return hamiltonian.load_spec(args.spec, units=args.units)
    if getattr(args, "reference", False):
        return gates.reference_lattice_for(args.gate, parse_value)
    raise ValueError("a lattice is required: pass --spec FILE or --reference")


def _print_json(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _plots():
    os.environ.setdefault("MPLBACKEND", "Agg")
    from . import plots

    return plots


def cmd_verify(args) -> int:
    target = gates.gate_from_name(args.gate, parse_value)
    spec = _load_lattice(args)
    problem = logical.gate_problem(target.n_qubits)
    h = hamiltonian.build_hamiltonian(spec, problem.basis)
    u = evolve.unitary_at(h, spec.evolution_time)
    sub = logical.extract_logical(u, problem.encoding)
    score = logical.score_matrix(sub, target.matrix)
    report = {
        "gate": target.name,
        "spec": hamiltonian.spec_to_dict(spec),
        "fidelity": score.fidelity,
        "cost": score.cost,
        "leakage": score.leakage,
        "threshold": args.threshold,
        "logical_matrix_real": sub.real.tolist(),
        "logical_matrix_imag": sub.imag.tolist(),
    }
    _print_json(report)
    out = Path(args.out) if args.out else None
    if out:
        out.write_text(json.dumps(report, indent=2) + "\n")
    if args.plot:
        base = out if out else Path(f"verify_{target.name.replace(':', '_')}.json")
        _plots().plot_gate_matrix(
            sub, base.with_suffix(".png"), title=f"{target.name}: logical submatrix"
        )
    return 0 if score.fidelity >= args.threshold else 1


def cmd_synthesize(args) -> int:
    target = gates.gate_from_name(args.gate, parse_value)
    config = optimize.OptimizationConfig(
        j_max=args.jmax,
        gamma_max=args.gammamax,
        n_starts=args.starts,
        max_local_evals=args.evals,
        rng_seed=args.seed,
    )
    result = optimize.multistart(target, config, workers=args.workers)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    optimize.save_result(result, out_dir / "result.json")
    hamiltonian.save_spec(result.best_spec, out_dir / "best_spec.json")
    convergence = out_dir / "convergence.csv"
    with open(convergence, "w") as fh:
        fh.write("evaluation,mean_fidelity,std_fidelity\n")
        for k, (m, s) in enumerate(zip(result.mean_trajectory, result.std_trajectory), 1):
            fh.write(f"{k},{m:.12g},{s:.12g}\n")
    if args.plot:
        _plots().plot_convergence(
            result.mean_trajectory,
            result.std_trajectory,
            out_dir / "convergence.png",
            title=f"{target.name}: {config.n_starts} starts",
        )
    fidelities = [run.score.fidelity for run in result.runs]
    _print_json(
        {
            "gate": target.name,
            "best_fidelity": result.best_score.fidelity,
            "best_cost": result.best_score.cost,
            "best_leakage": result.best_score.leakage,
            "best_run_index": result.best_run_index,
            "median_run_fidelity": float(np.median(fidelities)),
            "out_dir": str(out_dir),
        }
    )
    return 0


def cmd_sweep(args) -> int:
    target = gates.gate_from_name(args.gate, parse_value)
    if args.grid:
        grid = parse_grid(args.grid)
    elif args.axis == "gamma":
        grid = tuple(r * args.jmax for r in DEFAULT_GAMMA_RATIOS)
    else:
        grid = DEFAULT_JMAX_GRID
    gammamax = args.gammamax
    if gammamax is None:
        # the swept axis overwrites its own bound per grid point, so only the
        # jmax sweep actually consumes this value
        gammamax = SWEEP_JMAX_DEFAULT_GAMMA if args.axis == "jmax" else max(grid)
    config = optimize.OptimizationConfig(
        j_max=args.jmax,
        gamma_max=gammamax,
        n_starts=args.starts,
        max_local_evals=args.evals,
        rng_seed=args.seed,
    )
    if args.axis == "gamma":
        sweep = optimize.sweep_gamma(target, config, grid, workers=args.workers)
        xlabel = "gamma_max"
    else:
        sweep = optimize.sweep_jmax(target, config, grid, workers=args.workers)
        xlabel = "j_max"
    out = Path(args.out or f"sweep_{args.axis}.csv")
    optimize.write_sweep_csv(sweep, out)
    if args.plot:
        _plots().plot_sweep(
            sweep.values, sweep.best_fidelities, out.with_suffix(".png"),
            xlabel=xlabel, title=f"{target.name} vs {xlabel}",
        )
    _print_json(
        {
            "gate": target.name,
            "axis": args.axis,
            "values": list(sweep.values),
            "best_fidelities": list(sweep.best_fidelities),
            "csv": str(out),
        }
    )
    return 0


def cmd_evolve(args) -> int:
    spec = _load_lattice(args)
    if spec.sites % 2 != 0:
        raise ValueError(f"dual-rail evolution needs an even site count, got {spec.sites}")
    n_qubits = spec.sites // 2
    bits = [c for c in args.input.strip()]
    if len(bits) != n_qubits or any(c not in "01" for c in bits):
        raise ValueError(
            f"input must be a bitstring of length {n_qubits} for this lattice, "
            f"got {args.input!r}"
        )
    bits = [int(c) for c in bits]
    problem = logical.gate_problem(n_qubits)
    h = hamiltonian.build_hamiltonian(spec, problem.basis)
    times = np.linspace(0.0, spec.evolution_time, args.points)
    trace = evolve.density_trace(h, logical.dual_rail_state(bits), problem.basis, times)
    out = Path(args.out or "density.csv")
    evolve.write_density_csv(trace, out)
    if args.plot:
        _plots().plot_density_trace(
            trace, out.with_suffix(".png"), title=f"input |{args.input}>"
        )
    start = np.zeros(problem.basis.dimension, dtype=complex)
    start[problem.basis.index[logical.dual_rail_state(bits)]] = 1.0
    final = evolve.evolve_state(h, start, spec.evolution_time)
    logical_weight = float(
        np.sum(np.abs(final[np.asarray(problem.encoding.indices)]) ** 2)
    )
    _print_json(
        {
            "input": args.input,
            "rows": len(trace.times),
            "csv": str(out),
            "logical_return_probability": logical_weight,
        }
    )
    return 0


def cmd_tomo(args) -> int:
    target = gates.target_cnot()
    if args.ideal:
        spec = None
        records = tomography.run_protocol(
            gate_unitary=target.matrix, shots=args.shots, seed=args.seed
        )
    else:
        spec = _load_lattice(args)
        if spec.sites != 4:
            raise ValueError(
                f"tomography runs on 2-qubit (4-site) lattices, got {spec.sites} sites"
            )
        records = tomography.run_protocol(spec=spec, shots=args.shots, seed=args.seed)
    chi = tomography.reconstruct_chi(records)
    ideal = tomography.chi_of_unitary(target.matrix)
    fid = tomography.process_fidelity(chi, ideal)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tomography.write_records_csv(records, out_dir / "records.csv")
    tomography.save_chi(chi, out_dir / "chi.json")
    if args.plot:
        _plots().plot_chi(chi, out_dir / "chi.png", title="reconstructed process matrix")
    leaks = [rec.leakage for rec in records]
    _print_json(
        {
            "records": len(records),
            "process_fidelity_vs_cnot": fid,
            "mean_leakage": float(np.mean(leaks)),
            "max_leakage": float(np.max(leaks)),
            "shots": args.shots,
            "records_csv": str(out_dir / "records.csv"),
            "chi_json": str(out_dir / "chi.json"),
        }
    )
    return 0


def _load_matrix(path) -> np.ndarray:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict) or "real" not in data:
        raise ValueError(f"{path} must be JSON with 'real' (and optional 'imag') arrays")
    real = np.asarray(data["real"], dtype=float)
    imag = np.asarray(data.get("imag", np.zeros_like(real)), dtype=float)
    return real + 1j * imag


def cmd_decompose(args) -> int:
    if bool(args.matrix) == bool(args.gate):
        raise ValueError("provide exactly one of --matrix FILE or --gate NAME")
    if args.matrix:
        m = _load_matrix(args.matrix)
    else:
        target = gates.gate_from_name(args.gate, parse_value)
        if target.n_qubits != 1:
            raise ValueError("decompose handles single-qubit gates only")
        m = target.matrix
    alpha, beta, gamma, delta = gates.decompose_single_qubit(m)
    error = float(np.abs(gates.zxz_matrix(alpha, beta, gamma, delta) - m).max())
    _print_json(
        {
            "alpha": alpha,
            "beta": beta,
            "gamma": gamma,
            "delta": delta,
            "reconstruction_error": error,
        }
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bhgates",
        description="Quantum gates as boson walks on small lattices: "
        "verify recipes, synthesize new ones, export dynamics and tomography.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_units(p):
        p.add_argument(
            "--units", choices=("raw", "pi"), default=None,
            help="interpret spec-file values in these units when the file has no units field",
        )

    def add_lattice_source(p):
        p.add_argument("--spec", help="lattice JSON file")
        p.add_argument(
            "--reference", action="store_true",
            help="use the bundled lattice recipe for the gate",
        )
        add_units(p)

    p = sub.add_parser("verify", help="score a lattice against a target gate")
    p.add_argument("--gate", required=True)
    add_lattice_source(p)
    p.add_argument("--threshold", type=parse_value, default=0.99)
    p.add_argument("--out", help="write the JSON report here as well")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synthesize", help="multistart synthesis of a lattice for a gate")
    p.add_argument("--gate", required=True)
    p.add_argument("--jmax", type=parse_value, default=4 * math.pi)
    p.add_argument("--gammamax", type=parse_value, default=40 * math.pi)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--evals", type=int, default=5000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--out-dir", default=".")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("sweep", help="best fidelity versus a bound")
    p.add_argument("--axis", choices=("gamma", "jmax"), required=True)
    p.add_argument("--gate", required=True)
    p.add_argument("--grid", help="comma-separated bound values, e.g. '1pi,2pi,4pi'")
    p.add_argument("--jmax", type=parse_value, default=4 * math.pi)
    p.add_argument(
        "--gammamax", type=parse_value, default=None,
        help="fixed interaction bound for --axis jmax (default 20pi)",
    )
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--evals", type=int, default=5000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--out", help="output CSV path")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("evolve", help="export site-density dynamics as CSV")
    p.add_argument("--gate", default="cnot", help="gate whose reference lattice to use")
    add_lattice_source(p)
    p.add_argument("--input", required=True, help="logical bitstring, e.g. 11")
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--out", help="output CSV path (default density.csv)")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("tomo", help="process tomography of a CNOT lattice")
    p.add_argument("--gate", default="cnot", help=argparse.SUPPRESS)
    add_lattice_source(p)
    p.add_argument("--ideal", action="store_true", help="bypass: tomograph the exact CNOT")
    p.add_argument("--shots", type=int, default=None)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_tomo)

    p = sub.add_parser("decompose", help="ZXZ angles of a single-qubit unitary")
    p.add_argument("--matrix", help="JSON file with 'real'/'imag' 2x2 arrays")
    p.add_argument("--gate", help="named gate instead of a file, e.g. 'rx:1.3'")
    p.set_defaults(func=cmd_decompose)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
