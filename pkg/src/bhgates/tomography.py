"""Process tomography of lattice gates: prepare, evolve, rotate, measure, invert.

Inputs are products of {|0>, |1>, |+>, |->} prepared from computational states
by single-qubit lattice rotations; after the gate, per-qubit rotations map X
and Y observables onto computational measurements. Weight outside the logical
subspace is recorded as a fifth outcome ("leak") and the logical probabilities
are renormalized before linear inversion, so the reconstruction stays
well-posed while the leakage remains visible in the records.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .evolve import unitary_at
from .gates import HADAMARD, analytic_gate_lattice, rx_matrix
from .hamiltonian import LatticeSpec, build_hamiltonian
from .logical import dual_rail_state, gate_problem

PI = math.pi

INPUT_LABELS = ("0", "1", "+", "-")
ROTATION_LABELS = ("I", "X", "Y")

_PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Input preparation: computational bit plus the rotation applied to it.
_PREP_FOR_INPUT = {"0": (0, "I"), "1": (1, "I"), "+": (0, "X"), "-": (0, "Ydg")}

_PREP_GATE = {"I": np.eye(2, dtype=complex), "X": HADAMARD, "Ydg": rx_matrix(-PI / 2)}
_MEAS_GATE = {"I": np.eye(2, dtype=complex), "X": HADAMARD, "Y": rx_matrix(PI / 2)}

_KET = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / math.sqrt(2),
    "-": np.array([1, 1j], dtype=complex) / math.sqrt(2),
}

# Measuring Z after rotation R reads out M = R+ Z R. The sign below maps that
# onto the bare Pauli (computed once so a convention change cannot silently
# corrupt the reconstruction).
_MEAS_PAULI = {"I": "Z", "X": "X", "Y": "Y"}
_MEAS_SIGN = {
    r: round(
        float(
            np.real(
                np.trace(
                    _PAULI_1Q[_MEAS_PAULI[r]] @ (_MEAS_GATE[r].conj().T @ _PAULI_1Q["Z"] @ _MEAS_GATE[r])
                )
            )
        )
        / 2
    )
    for r in ROTATION_LABELS
}
# Canonical rotation used to read each Pauli letter (I and Z share "I").
_ROT_FOR_PAULI = {"I": "I", "Z": "I", "X": "X", "Y": "Y"}


@dataclass(frozen=True)
class BasisRotation:
    """A measurement-basis rotation: its matrix and the lattice realizing it."""

    name: str
    matrix: np.ndarray = field(repr=False)
    lattice: LatticeSpec


def basis_rotations() -> dict[str, BasisRotation]:
    """The protocol's rotations: X (Hadamard lattice), Y (rx(pi/2)), Ydg (rx(7pi/2))."""
    return {
        "X": BasisRotation("X", HADAMARD, analytic_gate_lattice("hadamard")),
        "Y": BasisRotation("Y", rx_matrix(PI / 2), analytic_gate_lattice("rx", PI / 2)),
        "Ydg": BasisRotation("Ydg", rx_matrix(-PI / 2), analytic_gate_lattice("rx", 7 * PI / 2)),
    }


def input_states() -> dict[str, np.ndarray]:
    """The four single-qubit preparations as kets: 0, 1, + = (1,1)/sqrt2, - = (1,i)/sqrt2."""
    return {label: ket.copy() for label, ket in _KET.items()}


def pauli_labels(n_qubits: int) -> tuple[str, ...]:
    """Tensor-product Pauli labels, first qubit leftmost: II, IX, IY, IZ, XI, ..."""
    return tuple(
        "".join(combo) for combo in itertools.product("IXYZ", repeat=n_qubits)
    )


def _pauli_matrix(label: str) -> np.ndarray:
    m = _PAULI_1Q[label[0]]
    for c in label[1:]:
        m = np.kron(m, _PAULI_1Q[c])
    return m


@dataclass(frozen=True)
class TomographyRecord:
    """One measurement setting: raw logical outcome probabilities plus leakage."""

    prep: tuple[str, ...]
    rotations: tuple[str, ...]
    probabilities: tuple[float, ...]
    leakage: float


@dataclass(frozen=True)
class ProcessMatrix:
    """chi over the Pauli basis: E(rho) = sum_mn chi_mn P_m rho P_n+."""

    labels: tuple[str, ...]
    chi: np.ndarray = field(repr=False)

    def __post_init__(self):
        chi = np.asarray(self.chi, dtype=complex)
        d = len(self.labels)
        if chi.shape != (d, d):
            raise ValueError(f"chi shape {chi.shape} does not match {d} labels")
        defect = np.abs(chi - chi.conj().T).max()
        if defect > 1e-8:
            raise ValueError(f"chi is not Hermitian (defect {defect:.3e})")
        object.__setattr__(self, "chi", chi)

    @property
    def n_qubits(self) -> int:
        return len(self.labels[0])

    def trace_preservation_residual(self) -> float:
        """max-norm of sum_mn chi_mn P_n+ P_m - I; zero for a trace-preserving map."""
        dim = 2 ** self.n_qubits
        acc = np.zeros((dim, dim), dtype=complex)
        for m, lm in enumerate(self.labels):
            pm = _pauli_matrix(lm)
            for n, ln in enumerate(self.labels):
                acc += self.chi[m, n] * (_pauli_matrix(ln).conj().T @ pm)
        return float(np.abs(acc - np.eye(dim)).max())


def tomography_settings(n_qubits: int = 2) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    """All (preparation, rotation) label pairs in canonical record order."""
    return [
        (prep, rots)
        for prep in itertools.product(INPUT_LABELS, repeat=n_qubits)
        for rots in itertools.product(ROTATION_LABELS, repeat=n_qubits)
    ]


class _IdealProtocol:
    """Exact matrix backend: the gate acts directly on the logical space."""

    def __init__(self, gate_unitary: np.ndarray):
        gate = np.asarray(gate_unitary, dtype=complex)
        n = gate.shape[0].bit_length() - 1
        if gate.shape != (2 ** n, 2 ** n):
            raise ValueError(f"gate unitary must be 2^n x 2^n, got {gate.shape}")
        self.n_qubits = n
        self.gate = gate

    def probabilities(self, prep, rotations):
        bits = [_PREP_FOR_INPUT[p][0] for p in prep]
        psi = np.zeros(2 ** self.n_qubits, dtype=complex)
        psi[int("".join(map(str, bits)), 2)] = 1.0
        pre = _PREP_GATE[_PREP_FOR_INPUT[prep[0]][1]]
        post = _MEAS_GATE[rotations[0]]
        for p, r in zip(prep[1:], rotations[1:]):
            pre = np.kron(pre, _PREP_GATE[_PREP_FOR_INPUT[p][1]])
            post = np.kron(post, _MEAS_GATE[r])
        psi = post @ (self.gate @ (pre @ psi))
        return np.abs(psi) ** 2, 0.0


class _LatticeProtocol:
    """Lattice backend: every stage is an evolution of the full bosonic space."""

    def __init__(self, spec: LatticeSpec):
        if spec.sites % 2 != 0:
            raise ValueError(f"dual-rail lattices need an even site count, got {spec.sites}")
        self.n_qubits = spec.sites // 2
        self.problem = gate_problem(self.n_qubits)
        self.indices = np.asarray(self.problem.encoding.indices)
        self.gate_u = unitary_at(
            build_hamiltonian(spec, self.problem.basis), spec.evolution_time
        ).entries
        self._stages: dict[tuple[str, int], np.ndarray] = {}

    def _stage(self, rotation: str, qubit: int) -> np.ndarray:
        """Full-space unitary rotating one qubit pair, identity elsewhere."""
        key = (rotation, qubit)
        if key not in self._stages:
            single = basis_rotations()[rotation].lattice
            sites = 2 * self.n_qubits
            onsite = [0.0] * sites
            onsite[2 * qubit], onsite[2 * qubit + 1] = single.onsite
            hoppings = [0.0] * (sites - 1)
            hoppings[2 * qubit] = single.hoppings[0]
            embedded = LatticeSpec(
                tuple(onsite), tuple(hoppings), 0.0, single.evolution_time
            )
            h = build_hamiltonian(embedded, self.problem.basis)
            self._stages[key] = unitary_at(h, embedded.evolution_time).entries
        return self._stages[key]

    def probabilities(self, prep, rotations):
        bits = [_PREP_FOR_INPUT[p][0] for p in prep]
        psi = np.zeros(self.problem.basis.dimension, dtype=complex)
        psi[self.problem.basis.index[dual_rail_state(bits)]] = 1.0
        for qubit, p in enumerate(prep):
            rotation = _PREP_FOR_INPUT[p][1]
            if rotation != "I":
                psi = self._stage(rotation, qubit) @ psi
        psi = self.gate_u @ psi
        for qubit, r in enumerate(rotations):
            if r != "I":
                psi = self._stage(r, qubit) @ psi
        probs = np.abs(psi[self.indices]) ** 2
        return probs, float(max(0.0, 1.0 - probs.sum()))


def _backend(spec, gate_unitary):
    if (spec is None) == (gate_unitary is None):
        raise ValueError("provide exactly one of spec or gate_unitary")
    return _LatticeProtocol(spec) if spec is not None else _IdealProtocol(gate_unitary)


def simulate_setting(spec: LatticeSpec | None, prep, rotations, gate_unitary=None):
    """Outcome probabilities and leakage for one setting.

    With a spec, all stages are lattice evolutions in the boson space; with
    gate_unitary, the ideal gate acts on the logical space (leakage 0).
    """
    backend = _backend(spec, gate_unitary)
    prep, rotations = tuple(prep), tuple(rotations)
    if len(prep) != backend.n_qubits or len(rotations) != backend.n_qubits:
        raise ValueError(
            f"setting has {len(prep)} preps / {len(rotations)} rotations "
            f"for {backend.n_qubits} qubits"
        )
    for p in prep:
        if p not in INPUT_LABELS:
            raise ValueError(f"unknown input label {p!r}")
    for r in rotations:
        if r not in ROTATION_LABELS:
            raise ValueError(f"unknown rotation label {r!r}")
    probs, leak = backend.probabilities(prep, rotations)
    return tuple(float(v) for v in probs), leak


def run_protocol(
    spec: LatticeSpec | None = None,
    gate_unitary=None,
    shots: int | None = None,
    seed: int = 42,
) -> list[TomographyRecord]:
    """Simulate the full setting grid; optionally draw multinomial shot samples.

    Exact probabilities by default. With shots, each record is sampled from
    the 2^n outcomes plus leakage with a generator seeded once for the whole
    protocol, so the record stream is reproducible.
    """
    backend = _backend(spec, gate_unitary)
    rng = np.random.default_rng(seed) if shots is not None else None
    records = []
    for prep, rotations in tomography_settings(backend.n_qubits):
        probs, leak = backend.probabilities(prep, rotations)
        if shots is not None:
            full = np.append(np.clip(probs, 0.0, None), max(leak, 0.0))
            counts = rng.multinomial(shots, full / full.sum())
            probs, leak = counts[:-1] / shots, counts[-1] / shots
        records.append(
            TomographyRecord(
                prep=prep,
                rotations=rotations,
                probabilities=tuple(float(v) for v in probs),
                leakage=float(leak),
            )
        )
    return records


def _pauli_expectation(label: str, group: dict, n_qubits: int) -> float:
    rotations = tuple(_ROT_FOR_PAULI[c] for c in label)
    probs = group[rotations]
    value = 0.0
    for outcome, p in enumerate(probs):
        weight = 1.0
        for k, c in enumerate(label):
            if c == "I":
                continue
            bit = (outcome >> (n_qubits - 1 - k)) & 1
            weight *= _MEAS_SIGN[rotations[k]] * (1 - 2 * bit)
        value += weight * p
    return value


def reconstruct_chi(records) -> ProcessMatrix:
    """Linear-inversion chi from a complete record set.

    Groups records by preparation, renormalizes away leakage, reconstructs
    each output state from its Pauli expectations, then solves the process
    matrix over the Pauli basis.
    """
    records = list(records)
    if not records:
        raise ValueError("no records")
    n_qubits = len(records[0].prep)
    dim = 2 ** n_qubits

    grouped: dict[tuple[str, ...], dict[tuple[str, ...], np.ndarray]] = {}
    for rec in records:
        probs = np.asarray(rec.probabilities, dtype=float)
        total = probs.sum()
        if total <= 0:
            raise ValueError(f"record {rec.prep}/{rec.rotations} has no logical weight")
        grouped.setdefault(tuple(rec.prep), {})[tuple(rec.rotations)] = probs / total

    missing = [
        (prep, rots)
        for prep, rots in tomography_settings(n_qubits)
        if rots not in grouped.get(prep, {})
    ]
    if missing:
        shown = ", ".join(
            f"prep={''.join(p)} rot={''.join(r)}" for p, r in missing[:8]
        )
        raise ValueError(f"incomplete setting set; missing {len(missing)}: {shown}")

    labels = pauli_labels(n_qubits)
    paulis = [_pauli_matrix(l) for l in labels]

    preps = list(itertools.product(INPUT_LABELS, repeat=n_qubits))
    r_in = np.zeros((dim * dim, len(preps)), dtype=complex)
    r_out = np.zeros((dim * dim, len(preps)), dtype=complex)
    for col, prep in enumerate(preps):
        ket = _KET[prep[0]]
        for p in prep[1:]:
            ket = np.kron(ket, _KET[p])
        r_in[:, col] = np.outer(ket, ket.conj()).reshape(-1, order="F")
        rho = np.zeros((dim, dim), dtype=complex)
        for label, pauli in zip(labels, paulis):
            rho += _pauli_expectation(label, grouped[prep], n_qubits) * pauli
        r_out[:, col] = (rho / dim).reshape(-1, order="F")

    smat = r_out @ np.linalg.inv(r_in)
    chi = np.zeros((len(labels), len(labels)), dtype=complex)
    for m, pm in enumerate(paulis):
        for n, pn in enumerate(paulis):
            basis_mn = np.kron(pn.conj(), pm)
            chi[m, n] = np.trace(basis_mn.conj().T @ smat) / (dim * dim)
    return ProcessMatrix(labels=labels, chi=chi)


def chi_of_unitary(u) -> ProcessMatrix:
    """Rank-one chi of a unitary: c c+ with c_m = Tr(P_m U) / 2^n."""
    gate = np.asarray(getattr(u, "matrix", getattr(u, "entries", u)), dtype=complex)
    n = gate.shape[0].bit_length() - 1
    if gate.shape != (2 ** n, 2 ** n):
        raise ValueError(f"unitary must be 2^n x 2^n, got {gate.shape}")
    labels = pauli_labels(n)
    c = np.array([np.trace(_pauli_matrix(l) @ gate) / (2 ** n) for l in labels])
    return ProcessMatrix(labels=labels, chi=np.outer(c, c.conj()))


def process_fidelity(chi: ProcessMatrix, chi_ideal: ProcessMatrix) -> float:
    """Tr(chi_ideal chi); equals the process overlap for a rank-one ideal chi."""
    if chi.labels != chi_ideal.labels:
        raise ValueError("process matrices use different Pauli bases")
    return float(np.real(np.trace(chi_ideal.chi @ chi.chi)))


def write_records_csv(records, path) -> None:
    """One row per setting: prep and rotation labels, probabilities, leakage."""
    records = list(records)
    n = len(records[0].prep)
    prep_cols = [f"prep_q{k + 1}" for k in range(n)]
    rot_cols = [f"rot_q{k + 1}" for k in range(n)]
    prob_cols = [f"p{format(b, f'0{n}b')}" for b in range(2 ** n)]
    with open(path, "w") as fh:
        fh.write(",".join(prep_cols + rot_cols + prob_cols + ["leak"]) + "\n")
        for rec in records:
            values = [f"{v:.12g}" for v in rec.probabilities] + [f"{rec.leakage:.12g}"]
            fh.write(",".join(list(rec.prep) + list(rec.rotations) + values) + "\n")


def read_records_csv(path) -> list[TomographyRecord]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        n = sum(1 for c in header if c.startswith("prep_q"))
        if n == 0:
            raise ValueError(f"{path} is not a tomography records CSV")
        records = []
        for line in fh:
            parts = line.strip().split(",")
            records.append(
                TomographyRecord(
                    prep=tuple(parts[:n]),
                    rotations=tuple(parts[n : 2 * n]),
                    probabilities=tuple(float(v) for v in parts[2 * n : -1]),
                    leakage=float(parts[-1]),
                )
            )
    return records


def chi_to_dict(pm: ProcessMatrix) -> dict:
    return {
        "labels": list(pm.labels),
        "real": pm.chi.real.tolist(),
        "imag": pm.chi.imag.tolist(),
    }


def save_chi(pm: ProcessMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(chi_to_dict(pm), fh, indent=2)
        fh.write("\n")
