"""Bosonic occupation-number bases and second-quantized matrix elements."""

from __future__ import annotations

import math

import numpy as np

# A Fock state is a tuple of non-negative occupations, one entry per site.
FockState = tuple[int, ...]


def _compositions(sites: int, particles: int):
    """Yield occupation tuples in descending lexicographic order."""
    if sites == 1:
        yield (particles,)
        return
    for n in range(particles, -1, -1):
        for rest in _compositions(sites - 1, particles - n):
            yield (n,) + rest


class FockBasis:
    """Ordered basis of all states of `particles` bosons on `sites` sites.

    States are sorted in descending lexicographic order with site 0 most
    significant, so (2,0,0,0) precedes (1,1,0,0). File formats and frozen
    test values depend on this ordering; do not change it.
    """

    def __init__(self, sites: int, particles: int):
        if sites < 1:
            raise ValueError(f"need at least one site, got sites={sites}")
        if particles < 1:
            raise ValueError(f"need at least one particle, got particles={particles}")
        self.sites = sites
        self.particles = particles
        self.states: tuple[FockState, ...] = tuple(_compositions(sites, particles))
        self.index: dict[FockState, int] = {s: k for k, s in enumerate(self.states)}
        self.occupations = np.array(self.states, dtype=np.int64)
        # sum_m n_m (n_m - 1) per state, reused by the interaction diagonal
        self.pair_counts = np.sum(self.occupations * (self.occupations - 1), axis=1)
        self._hop_patterns: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    @property
    def dimension(self) -> int:
        return len(self.states)

    def hop_pattern(self, dest: int, src: int):
        """Sparse pattern (rows, cols, amplitudes) of a†_dest a_src over the basis.

        Amplitudes are the bare bosonic factors sqrt((n_dest+1) n_src); the
        hopping strength is applied by the Hamiltonian builder.
        """
        key = (dest, src)
        cached = self._hop_patterns.get(key)
        if cached is not None:
            return cached
        for site in key:
            if not 0 <= site < self.sites:
                raise ValueError(f"site index {site} out of range for {self.sites} sites")
        if dest == src:
            raise ValueError("hop requires two distinct sites")
        cols = np.flatnonzero(self.occupations[:, src] > 0)
        moved = self.occupations[cols].copy()
        moved[:, src] -= 1
        moved[:, dest] += 1
        rows = np.array([self.index[tuple(s)] for s in moved], dtype=np.int64)
        amps = np.sqrt(
            (self.occupations[cols, dest] + 1) * self.occupations[cols, src]
        ).astype(np.float64)
        pattern = (rows, cols, amps)
        self._hop_patterns[key] = pattern
        return pattern

    def __len__(self) -> int:
        return len(self.states)

    def __repr__(self) -> str:
        return f"FockBasis(sites={self.sites}, particles={self.particles}, dimension={self.dimension})"


def enumerate_basis(sites: int, particles: int) -> FockBasis:
    """Enumerate the full fixed-number basis; dimension C(particles+sites-1, sites-1)."""
    basis = FockBasis(sites, particles)
    assert basis.dimension == math.comb(particles + sites - 1, sites - 1)
    return basis


def index_of(state: FockState, basis: FockBasis) -> int:
    """Position of `state` in the canonical ordering of `basis`."""
    try:
        return basis.index[tuple(state)]
    except KeyError:
        raise ValueError(f"state {tuple(state)} is not in {basis!r}") from None


def apply_hop(state: FockState, dest: int, src: int) -> tuple[FockState, float] | None:
    """Apply a†_dest a_src to a Fock state.

    Returns (new_state, amplitude) with amplitude sqrt((n_dest+1) n_src), or
    None when the source site is empty (annihilation of the vacuum component).
    """
    for site in (dest, src):
        if not 0 <= site < len(state):
            raise ValueError(f"site index {site} out of range for {len(state)} sites")
    if dest == src:
        raise ValueError("hop requires two distinct sites")
    if state[src] == 0:
        return None
    moved = list(state)
    moved[src] -= 1
    moved[dest] += 1
    amplitude = math.sqrt((state[dest] + 1) * state[src])
    return tuple(moved), amplitude


def number_diagonal(state: FockState, energies, gamma: float) -> float:
    """Diagonal energy sum_m E_m n_m + (gamma/2) sum_m n_m (n_m - 1)."""
    if len(energies) != len(state):
        raise ValueError(
            f"got {len(energies)} on-site energies for {len(state)} sites"
        )
    onsite = sum(e * n for e, n in zip(energies, state))
    pairs = sum(n * (n - 1) for n in state)
    return onsite + 0.5 * gamma * pairs
