"""Dual-rail qubit encoding, logical submatrix extraction, fidelity and gate cost."""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .evolve import unitary_at
from .fock import FockBasis, FockState, enumerate_basis, index_of
from .hamiltonian import LatticeSpec, build_hamiltonian

# Phase-penalty cutoff: below this magnitude arg(u_11) is numerically
# meaningless and the penalty is defined to vanish (the fidelity term
# dominates there anyway).
PHASE_EPS = 1e-12


@dataclass(frozen=True)
class DualRailEncoding:
    """Map from logical bitstrings to Fock-basis indices.

    Qubit k lives on sites (2k, 2k+1); bit 0 puts the boson in the left well.
    Logical position b reads its bits with qubit 0 most significant, so for
    two qubits the order is |00>, |01>, |10>, |11>.
    """

    n_qubits: int
    indices: tuple[int, ...]

    def __post_init__(self):
        if len(self.indices) != 2 ** self.n_qubits:
            raise ValueError(
                f"{self.n_qubits} qubits need {2 ** self.n_qubits} indices, got {len(self.indices)}"
            )
        if len(set(self.indices)) != len(self.indices):
            raise ValueError("logical indices must be distinct")


@dataclass(frozen=True)
class GateScore:
    """Fidelity, optimization cost and leakage of one candidate gate."""

    fidelity: float
    cost: float
    leakage: float

    def __post_init__(self):
        if not -1e-12 <= self.fidelity <= 1 + 1e-12:
            raise ValueError(f"fidelity {self.fidelity} outside [0, 1]")
        if self.cost < 0 or self.leakage < 0:
            raise ValueError("cost and leakage must be non-negative")


def dual_rail_state(bits) -> FockState:
    """Occupation vector for a logical bitstring, one boson per qubit pair."""
    state = []
    for b in bits:
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b!r}")
        state += [1 - b, b]
    return tuple(state)


def logical_indices(n_qubits: int, basis: FockBasis) -> DualRailEncoding:
    """Locate all 2^n dual-rail states of `basis` in logical binary order."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    if basis.sites != 2 * n_qubits or basis.particles != n_qubits:
        raise ValueError(
            f"dual-rail encoding of {n_qubits} qubits needs a ({2 * n_qubits} sites, "
            f"{n_qubits} particles) basis, got ({basis.sites}, {basis.particles})"
        )
    indices = []
    for b in range(2 ** n_qubits):
        bits = [(b >> (n_qubits - 1 - k)) & 1 for k in range(n_qubits)]
        indices.append(index_of(dual_rail_state(bits), basis))
    return DualRailEncoding(n_qubits=n_qubits, indices=tuple(indices))


@dataclass(frozen=True)
class GateProblem:
    """Simulation context for gates on n dual-rail qubits: basis plus encoding."""

    n_qubits: int
    basis: FockBasis
    encoding: DualRailEncoding


@functools.lru_cache(maxsize=8)
def gate_problem(n_qubits: int) -> GateProblem:
    basis = enumerate_basis(2 * n_qubits, n_qubits)
    return GateProblem(n_qubits, basis, logical_indices(n_qubits, basis))


def extract_logical(u, enc: DualRailEncoding) -> np.ndarray:
    """Submatrix of a unitary over the logical indices; not unitary in general."""
    m = np.asarray(getattr(u, "entries", u))
    if max(enc.indices) >= m.shape[0]:
        raise ValueError(
            f"encoding indices go up to {max(enc.indices)} but the matrix has "
            f"dimension {m.shape[0]}"
        )
    idx = np.asarray(enc.indices)
    return m[np.ix_(idx, idx)]


def fidelity(target, candidate) -> float:
    """|Tr(target+ candidate)| / N, invariant under global phase of the candidate."""
    t = np.asarray(getattr(target, "matrix", target))
    c = np.asarray(candidate)
    if t.shape != c.shape or t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise ValueError(f"shape mismatch: target {t.shape} vs candidate {c.shape}")
    n = t.shape[0]
    return float(np.abs(np.trace(t.conj().T @ c)) / n)


def leakage(candidate: np.ndarray) -> float:
    """1 - mean column norm squared: average weight leaving the logical subspace."""
    c = np.asarray(candidate)
    kept = float(np.mean(np.sum(np.abs(c) ** 2, axis=0)))
    return max(0.0, 1.0 - kept)


def phase_penalty(candidate: np.ndarray) -> float:
    """sin^2(arg(u_11)); defined as 0 when u_11 vanishes."""
    u11 = complex(np.asarray(candidate)[0, 0])
    if abs(u11) < PHASE_EPS:
        return 0.0
    return float(np.sin(np.angle(u11)) ** 2)


def score_matrix(candidate: np.ndarray, target) -> GateScore:
    """Score a logical submatrix against a target gate."""
    f = fidelity(target, candidate)
    # max() guards against float dust pushing 1 - F^2 below zero at F ~ 1
    cost = max(0.0, 1.0 - f * f) + phase_penalty(candidate)
    return GateScore(fidelity=f, cost=cost, leakage=leakage(candidate))


def score_gate(spec: LatticeSpec, target) -> GateScore:
    """Full pipeline: build H, evolve for spec.evolution_time, extract, score."""
    matrix = np.asarray(getattr(target, "matrix", target))
    n_qubits = int(matrix.shape[0]).bit_length() - 1
    if 2 ** n_qubits != matrix.shape[0]:
        raise ValueError(f"target dimension {matrix.shape[0]} is not a power of two")
    problem = gate_problem(n_qubits)
    h = build_hamiltonian(spec, problem.basis)
    u = unitary_at(h, spec.evolution_time)
    return score_matrix(extract_logical(u, problem.encoding), matrix)


def score_params(params, target, problem: GateProblem) -> GateScore:
    """Score a flat parameter vector (decoded per the optimize module's layout)."""
    from .optimize import decode_params

    params = np.asarray(params, dtype=float)
    if not np.all(np.isfinite(params)):
        raise ValueError("parameters must be finite")
    spec = decode_params(params, problem.basis.sites)
    h = build_hamiltonian(spec, problem.basis)
    u = unitary_at(h, spec.evolution_time)
    return score_matrix(extract_logical(u, problem.encoding), target)


def cost(params, target, problem: GateProblem) -> float:
    """Optimization cost (1 - F^2) + sin^2(arg(u_11)) of a flat parameter vector."""
    return score_params(params, target, problem).cost
