"""Exact unitary evolution U = exp(-iHT) by Hermitian eigendecomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .fock import FockBasis, FockState, index_of
from .hamiltonian import HermitianOperator


@dataclass(frozen=True)
class UnitaryMatrix:
    """Dense matrix checked to satisfy U+U = I (entrywise to 1e-10) on construction."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        defect = np.abs(m.conj().T @ m - np.eye(m.shape[0])).max()
        if defect > 1e-10:
            raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "entries", m)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class DensityTrace:
    """Expected site occupations <n_m>(t) on a time grid; densities is [time, site]."""

    times: np.ndarray
    densities: np.ndarray

    @property
    def sites(self) -> int:
        return self.densities.shape[1]


def _as_hermitian(h) -> HermitianOperator:
    if isinstance(h, HermitianOperator):
        return h
    return HermitianOperator(np.asarray(h))


def unitary_at(h, t: float) -> UnitaryMatrix:
    """exp(-iHT) via H = V diag(lam) V+, so U = V diag(exp(-i lam T)) V+."""
    h = _as_hermitian(h)
    if not math.isfinite(t):
        raise ValueError(f"evolution time must be finite, got {t}")
    lam, vec = np.linalg.eigh(h.entries)
    u = (vec * np.exp(-1j * lam * t)) @ vec.conj().T
    return UnitaryMatrix(u)


def evolve_state(h, initial: np.ndarray, t: float) -> np.ndarray:
    """exp(-iHT) applied to a state vector; preserves the norm."""
    h = _as_hermitian(h)
    psi = np.asarray(initial, dtype=complex)
    if psi.shape != (h.dimension,):
        raise ValueError(
            f"state has shape {psi.shape}, expected ({h.dimension},)"
        )
    lam, vec = np.linalg.eigh(h.entries)
    return vec @ (np.exp(-1j * lam * t) * (vec.conj().T @ psi))


def density_trace(h, initial: FockState, basis: FockBasis, times) -> DensityTrace:
    """Site densities over time starting from a basis Fock state.

    One eigendecomposition serves every requested time. times must be
    non-negative and sorted ascending.
    """
    h = _as_hermitian(h)
    if h.dimension != basis.dimension:
        raise ValueError(
            f"operator dimension {h.dimension} does not match basis dimension {basis.dimension}"
        )
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1D grid")
    if not np.all(np.isfinite(times)):
        raise ValueError("times must be finite")
    if times[0] < 0:
        raise ValueError("times must be non-negative")
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted ascending")
    start = index_of(initial, basis)
    lam, vec = np.linalg.eigh(h.entries)
    coeffs = vec[start, :].conj()
    phases = np.exp(-1j * np.outer(times, lam))
    psi_t = (phases * coeffs) @ vec.T
    probs = np.abs(psi_t) ** 2
    densities = probs @ basis.occupations
    return DensityTrace(times=times, densities=densities)


def write_density_csv(trace: DensityTrace, path) -> None:
    """CSV with header t,site_1,...,site_m and 12 significant digits per value."""
    with open(path, "w") as fh:
        header = ",".join(["t"] + [f"site_{m + 1}" for m in range(trace.sites)])
        fh.write(header + "\n")
        for t, row in zip(trace.times, trace.densities):
            fields = [f"{t:.11e}"] + [f"{v:.11e}" for v in row]
            fh.write(",".join(fields) + "\n")


def count_level_crossings(values, level: float = 0.5) -> int:
    """Number of sign changes of (values - level) along a sampled curve.

    Used to count half-periods of a two-well density oscillation: each
    crossing of half occupation is one half Rabi flip boundary.
    """
    offsets = np.asarray(values, dtype=float) - level
    signs = np.sign(offsets)
    # treat exact hits as belonging to the previous side to avoid double counts
    nonzero = signs[signs != 0]
    return int(np.sum(nonzero[1:] * nonzero[:-1] < 0))
