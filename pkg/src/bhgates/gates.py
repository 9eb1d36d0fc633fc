"""Target gate library, reference lattice recipes, analytic single-qubit lattices.

Every gate on n dual-rail qubits is realized by evolving a 2n-site lattice for
a fixed time. Two-qubit and larger recipes come from numerical synthesis; the
single-qubit family has closed-form lattices, built here, whose 2x2 lattice
matrix is itself the single-particle Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import LatticeSpec

PI = math.pi
SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class GateTarget:
    """A named 2^n x 2^n target unitary."""

    name: str
    n_qubits: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"gate '{self.name}' needs at least one qubit")
        m = np.asarray(self.matrix, dtype=complex)
        dim = 2 ** self.n_qubits
        if m.shape != (dim, dim):
            raise ValueError(
                f"gate '{self.name}' on {self.n_qubits} qubits needs shape {(dim, dim)}, "
                f"got {m.shape}"
            )
        defect = np.abs(m.conj().T @ m - np.eye(dim)).max()
        if defect > 1e-12:
            raise ValueError(f"gate '{self.name}' is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "matrix", m)


def rz_matrix(theta: float) -> np.ndarray:
    return np.array([[np.exp(-0.5j * theta), 0], [0, np.exp(0.5j * theta)]])


def rx_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def phase_matrix(theta: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * theta)]], dtype=complex)


HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2


def target_identity(n_qubits: int = 1) -> GateTarget:
    return GateTarget("identity", n_qubits, np.eye(2 ** n_qubits, dtype=complex))


def target_hadamard() -> GateTarget:
    return GateTarget("hadamard", 1, HADAMARD)


def target_phase(theta: float) -> GateTarget:
    return GateTarget(f"phase({theta:g})", 1, phase_matrix(theta))


def target_rz(theta: float) -> GateTarget:
    return GateTarget(f"rz({theta:g})", 1, rz_matrix(theta))


def target_rx(theta: float) -> GateTarget:
    return GateTarget(f"rx({theta:g})", 1, rx_matrix(theta))


def target_cnot() -> GateTarget:
    """CNOT with qubit 1 (sites 1-2) as control, qubit 2 (sites 3-4) as target."""
    m = np.zeros((4, 4), dtype=complex)
    for b in range(4):
        control, target = b >> 1, b & 1
        m[(control << 1) | (target ^ control), b] = 1
    return GateTarget("cnot", 2, m)


def target_double_cnot_3q(target_qubit: int = 2) -> GateTarget:
    """Two CNOTs sharing one target qubit: its bit picks up the XOR of the other two.

    target_qubit is 1-based. The bundled six-site recipe realizes the
    target_qubit=2 layout (shared qubit on the middle pair of sites), which is
    why that is the default; pass 1 or 3 for the other orderings.
    """
    if target_qubit not in (1, 2, 3):
        raise ValueError(f"target_qubit must be 1, 2 or 3, got {target_qubit}")
    t = target_qubit - 1
    m = np.zeros((8, 8), dtype=complex)
    for b in range(8):
        bits = [(b >> 2) & 1, (b >> 1) & 1, b & 1]
        bits[t] ^= bits[(t + 1) % 3] ^ bits[(t + 2) % 3]
        m[(bits[0] << 2) | (bits[1] << 1) | bits[2], b] = 1
    return GateTarget(f"double-cnot-3q(target={target_qubit})", 3, m)


def reference_cnot_lattice() -> LatticeSpec:
    """Four-site recipe realizing a CNOT at fidelity 0.996 with T = 1.

    The control pair is decoupled from hopping (J_12 = 0); the interaction
    blockade steers the target-pair Rabi flip conditionally.
    """
    return LatticeSpec(
        onsite=(0.40 * PI, 1.82 * PI, -0.37 * PI, -0.66 * PI),
        hoppings=(0.0 * PI, -1.03 * PI, -3.80 * PI),
        interaction=21.68 * PI,
        evolution_time=1.0,
    )


def reference_double_cnot_lattice() -> LatticeSpec:
    """Six-site recipe realizing the 3-qubit double-CNOT at fidelity 0.998, T = 1.

    The outer qubit pairs have zero internal hopping (J_12 = J_56 = 0); both
    couple through the middle pair, which hosts the shared target qubit.
    """
    return LatticeSpec(
        onsite=(5.98 * PI, 7.13 * PI, 0.14 * PI, 0.18 * PI, 11.69 * PI, -8.03 * PI),
        hoppings=(0.0 * PI, -1.21 * PI, -12.04 * PI, -1.37 * PI, 0.0 * PI),
        interaction=108.24 * PI,
        evolution_time=1.0,
    )


def analytic_gate_lattice(gate: str, angle: float | None = None) -> LatticeSpec:
    """Closed-form 2-site lattice whose evolution equals the named 1-qubit gate.

    Supported: phase(theta) with T=1, hadamard with T=pi/(2*sqrt(2)),
    rz(theta>0) with T=theta/2, rx(theta in [0,4pi)) with T=(4pi-theta)/2,
    global-phase(alpha) with T=1. rz(0) needs T=0, which is not a valid
    evolution, so it is emitted as global-phase(0) instead.
    """

    def need_angle() -> float:
        if angle is None:
            raise ValueError(f"gate '{gate}' requires an angle")
        return float(angle)

    if gate == "hadamard":
        if angle is not None:
            raise ValueError("hadamard takes no angle")
        return LatticeSpec(
            onsite=(SQRT2 - 1, SQRT2 + 1),
            hoppings=(-1.0,),
            interaction=0.0,
            evolution_time=PI / (2 * SQRT2),
        )
    if gate == "phase":
        theta = need_angle()
        return LatticeSpec((0.0, -theta), (0.0,), 0.0, 1.0)
    if gate == "rz":
        theta = need_angle()
        if theta < 0:
            raise ValueError(f"rz angle must be >= 0, got {theta}")
        if theta == 0:
            return analytic_gate_lattice("global-phase", 0.0)
        return LatticeSpec((1.0, -1.0), (0.0,), 0.0, theta / 2)
    if gate == "rx":
        theta = need_angle()
        if not 0 <= theta < 4 * PI:
            raise ValueError(
                f"rx angle must lie in [0, 4pi), got {theta}; reduce modulo 4pi first"
            )
        return LatticeSpec((0.0, 0.0), (-1.0,), 0.0, (4 * PI - theta) / 2)
    if gate == "global-phase":
        alpha = need_angle()
        return LatticeSpec((-alpha, -alpha), (0.0,), 0.0, 1.0)
    raise ValueError(
        f"unknown analytic gate '{gate}' "
        "(choose from phase, hadamard, rz, rx, global-phase)"
    )


def zxz_matrix(alpha: float, beta: float, gamma: float, delta: float) -> np.ndarray:
    """e^(i alpha) Rz(beta) Rx(gamma) Rz(delta)."""
    return np.exp(1j * alpha) * (rz_matrix(beta) @ rx_matrix(gamma) @ rz_matrix(delta))


def decompose_single_qubit(u) -> tuple[float, float, float, float]:
    """Angles (alpha, beta, gamma, delta) with u = e^(i alpha) Rz(beta) Rx(gamma) Rz(delta).

    Canonical ranges: alpha in [0, 2pi), beta and delta in [0, 4pi), and gamma
    in [0, 2pi] (the convention prefers the small-gamma representative).
    """
    m = np.asarray(getattr(u, "entries", u), dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    defect = np.abs(m.conj().T @ m - np.eye(2)).max()
    if defect > 1e-10:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e})")

    alpha = float(np.angle(np.linalg.det(m)) / 2)
    if alpha < 0:
        alpha += PI
    v = np.exp(-1j * alpha) * m     # special-unitary part
    a, b = v[0, 0], v[0, 1]
    two_pi = 2 * PI

    if abs(b) < 1e-12:              # diagonal: no x-rotation needed
        beta = float(-2 * np.angle(a)) % (4 * PI)
        gamma, delta = 0.0, 0.0
    elif abs(a) < 1e-12:            # antidiagonal: full x-flip
        beta = float(-2 * np.angle(b) - PI) % (4 * PI)
        gamma, delta = PI, 0.0
    else:
        gamma = float(2 * np.arctan2(abs(b), abs(a)))
        beta = float(-np.angle(a) - np.angle(b) - PI / 2) % (4 * PI)
        delta = float(-np.angle(a) + np.angle(b) + PI / 2) % (4 * PI)
    return alpha % two_pi, beta, gamma, delta


_FIXED_GATES = {
    "cnot": target_cnot,
    "hadamard": target_hadamard,
    "double-cnot-3q": target_double_cnot_3q,
    "identity": target_identity,
}
_ANGLE_GATES = {
    "phase": target_phase,
    "rz": target_rz,
    "rx": target_rx,
}


def gate_from_name(name: str, value_parser=float) -> GateTarget:
    """Resolve a gate string such as 'cnot', 'rx:0.5pi' or 'phase:1.2'."""
    base, sep, arg = name.partition(":")
    if base in _FIXED_GATES:
        if sep:
            raise ValueError(f"gate '{base}' takes no angle argument")
        return _FIXED_GATES[base]()
    if base in _ANGLE_GATES:
        if not sep:
            raise ValueError(f"gate '{base}' needs an angle, e.g. '{base}:0.5pi'")
        return _ANGLE_GATES[base](value_parser(arg))
    known = sorted(_FIXED_GATES) + [f"{g}:<angle>" for g in sorted(_ANGLE_GATES)]
    raise ValueError(f"unknown gate '{name}' (known: {', '.join(known)})")


def reference_lattice_for(name: str, value_parser=float) -> LatticeSpec:
    """Bundled lattice realizing the named gate: recipes for multi-qubit gates,
    analytic constructions for the single-qubit family."""
    base, sep, arg = name.partition(":")
    if base == "cnot":
        return reference_cnot_lattice()
    if base == "double-cnot-3q":
        return reference_double_cnot_lattice()
    if base == "identity":
        return analytic_gate_lattice("global-phase", 0.0)
    if base == "hadamard":
        return analytic_gate_lattice("hadamard")
    if base in _ANGLE_GATES:
        if not sep:
            raise ValueError(f"gate '{base}' needs an angle, e.g. '{base}:0.5pi'")
        return analytic_gate_lattice(base, value_parser(arg))
    raise ValueError(f"no reference lattice for gate '{name}'")
