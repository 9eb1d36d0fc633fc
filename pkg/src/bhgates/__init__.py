"""Quantum logic gates as continuous-time walks of interacting bosons.

A gate on n dual-rail qubits is one evolution U = exp(-iHT) of a Bose-Hubbard
Hamiltonian on 2n lattice sites. This package builds such Hamiltonians over
exact Fock bases, scores the logical submatrix against target gates,
synthesizes lattice parameters by multistart derivative-free optimization,
and verifies gates end to end with process tomography.
"""

from .fock import FockBasis, FockState, apply_hop, enumerate_basis, index_of
from .hamiltonian import (
    HermitianOperator,
    LatticeSpec,
    build_hamiltonian,
    load_spec,
    save_spec,
    validate_bounds,
)
from .evolve import (
    DensityTrace,
    UnitaryMatrix,
    count_level_crossings,
    density_trace,
    evolve_state,
    unitary_at,
    write_density_csv,
)
from .logical import (
    DualRailEncoding,
    GateProblem,
    GateScore,
    dual_rail_state,
    extract_logical,
    fidelity,
    gate_problem,
    leakage,
    logical_indices,
    score_gate,
    score_matrix,
)
from .gates import (
    GateTarget,
    analytic_gate_lattice,
    decompose_single_qubit,
    gate_from_name,
    reference_cnot_lattice,
    reference_double_cnot_lattice,
    reference_lattice_for,
    target_cnot,
    target_double_cnot_3q,
    target_hadamard,
    target_identity,
    target_phase,
    target_rx,
    target_rz,
    zxz_matrix,
)
from .optimize import (
    OptimizationConfig,
    OptimizationResult,
    OptimizationRun,
    SweepResult,
    decode_params,
    encode_params,
    local_minimize,
    multistart,
    sweep_gamma,
    sweep_jmax,
    write_sweep_csv,
)
from .tomography import (
    ProcessMatrix,
    TomographyRecord,
    chi_of_unitary,
    process_fidelity,
    reconstruct_chi,
    run_protocol,
    simulate_setting,
    tomography_settings,
    write_records_csv,
)

__version__ = "0.1.0"

__all__ = [
    "FockBasis",
    "FockState",
    "apply_hop",
    "enumerate_basis",
    "index_of",
    "HermitianOperator",
    "LatticeSpec",
    "build_hamiltonian",
    "load_spec",
    "save_spec",
    "validate_bounds",
    "DensityTrace",
    "UnitaryMatrix",
    "count_level_crossings",
    "density_trace",
    "evolve_state",
    "unitary_at",
    "write_density_csv",
    "DualRailEncoding",
    "GateProblem",
    "GateScore",
    "dual_rail_state",
    "extract_logical",
    "fidelity",
    "gate_problem",
    "leakage",
    "logical_indices",
    "score_gate",
    "score_matrix",
    "GateTarget",
    "analytic_gate_lattice",
    "decompose_single_qubit",
    "gate_from_name",
    "reference_cnot_lattice",
    "reference_double_cnot_lattice",
    "reference_lattice_for",
    "target_cnot",
    "target_double_cnot_3q",
    "target_hadamard",
    "target_identity",
    "target_phase",
    "target_rx",
    "target_rz",
    "zxz_matrix",
    "OptimizationConfig",
    "OptimizationResult",
    "OptimizationRun",
    "SweepResult",
    "decode_params",
    "encode_params",
    "local_minimize",
    "multistart",
    "sweep_gamma",
    "sweep_jmax",
    "write_sweep_csv",
    "ProcessMatrix",
    "TomographyRecord",
    "chi_of_unitary",
    "process_fidelity",
    "reconstruct_chi",
    "run_protocol",
    "simulate_setting",
    "tomography_settings",
    "write_records_csv",
    "__version__",
]
