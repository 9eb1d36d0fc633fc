"""Dense Bose-Hubbard Hamiltonians on 1D lattices, plus spec validation and JSON I/O.

H = sum_m E_m n_m + sum_<l,m> J_lm a+_l a_m + (G/2) sum_m n_m (n_m - 1)

with nearest-neighbor tunneling only. Physical solutions use J <= 0 and G >= 0;
those sign conventions are checked by validate_bounds rather than at
construction so that out-of-bounds candidates can still be represented and
reported.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .fock import FockBasis


@dataclass(frozen=True)
class LatticeSpec:
    """A 1D lattice: on-site energies, nearest-neighbor hoppings, global interaction.

    Units have hbar = 1, so energies are inverse times and evolution_time is
    dimensionless. hoppings[b] couples sites b and b+1.
    """

    onsite: tuple[float, ...]
    hoppings: tuple[float, ...]
    interaction: float
    evolution_time: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "onsite", tuple(float(v) for v in self.onsite))
        object.__setattr__(self, "hoppings", tuple(float(v) for v in self.hoppings))
        object.__setattr__(self, "interaction", float(self.interaction))
        object.__setattr__(self, "evolution_time", float(self.evolution_time))
        if len(self.onsite) < 1:
            raise ValueError("lattice needs at least one site")
        if len(self.hoppings) != len(self.onsite) - 1:
            raise ValueError(
                f"{len(self.onsite)} sites require {len(self.onsite) - 1} hoppings, "
                f"got {len(self.hoppings)}"
            )
        values = self.onsite + self.hoppings + (self.interaction, self.evolution_time)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("lattice parameters must be finite")
        if self.evolution_time <= 0:
            raise ValueError(f"evolution_time must be positive, got {self.evolution_time}")

    @property
    def sites(self) -> int:
        return len(self.onsite)


@dataclass(frozen=True)
class HermitianOperator:
    """Dense matrix checked to be Hermitian (entrywise to 1e-12) on construction."""

    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        defect = np.abs(m - m.conj().T).max()
        if defect > 1e-12:
            raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
        object.__setattr__(self, "entries", m)

    @property
    def dimension(self) -> int:
        return self.entries.shape[0]


def build_hamiltonian(spec: LatticeSpec, basis: FockBasis) -> HermitianOperator:
    """Assemble the Hamiltonian of `spec` over `basis`. Real-symmetric by construction."""
    if spec.sites != basis.sites:
        raise ValueError(
            f"spec has {spec.sites} sites but basis has {basis.sites}"
        )
    dim = basis.dimension
    h = np.zeros((dim, dim))
    onsite = np.asarray(spec.onsite)
    diag = basis.occupations @ onsite + 0.5 * spec.interaction * basis.pair_counts
    h[np.arange(dim), np.arange(dim)] = diag
    for bond, j in enumerate(spec.hoppings):
        if j == 0.0:
            continue
        for dest, src in ((bond, bond + 1), (bond + 1, bond)):
            rows, cols, amps = basis.hop_pattern(dest, src)
            h[rows, cols] += j * amps
    return HermitianOperator(h)


def validate_bounds(spec: LatticeSpec, j_max: float, gamma_max: float) -> list[str]:
    """Check |E_m| <= j_max, -j_max <= J <= 0, 0 <= G <= gamma_max.

    Returns one message per violated bound; an empty list means the spec is
    feasible. Bounds are configuration, not intrinsic to the lattice: recipes
    are allowed to exceed them and simply report as infeasible here.
    """
    if j_max <= 0 or gamma_max <= 0:
        raise ValueError("bounds j_max and gamma_max must be positive")
    violations = []
    for m, e in enumerate(spec.onsite):
        if abs(e) > j_max:
            violations.append(
                f"onsite[{m}] = {e:.6g} outside [-j_max, j_max] = [{-j_max:.6g}, {j_max:.6g}]"
            )
    for b, j in enumerate(spec.hoppings):
        if j > 0:
            violations.append(f"hoppings[{b}] = {j:.6g} is positive (tunneling must be <= 0)")
        elif j < -j_max:
            violations.append(f"hoppings[{b}] = {j:.6g} below -j_max = {-j_max:.6g}")
    if spec.interaction < 0:
        violations.append(f"interaction = {spec.interaction:.6g} is negative")
    elif spec.interaction > gamma_max:
        violations.append(
            f"interaction = {spec.interaction:.6g} above gamma_max = {gamma_max:.6g}"
        )
    return violations


def spec_to_dict(spec: LatticeSpec) -> dict:
    """JSON-ready dict; always written with raw values and an explicit units flag."""
    return {
        "onsite": list(spec.onsite),
        "hoppings": list(spec.hoppings),
        "interaction": spec.interaction,
        "evolution_time": spec.evolution_time,
        "units": "raw",
    }


def dict_to_spec(data: dict, units: str | None = None) -> LatticeSpec:
    """Build a LatticeSpec from its JSON dict.

    A "units": "pi" entry in the file (or units="pi" when the file is silent)
    multiplies onsite, hoppings and interaction by pi. evolution_time is a
    plain time and is never rescaled.
    """
    for key in ("onsite", "hoppings", "interaction"):
        if key not in data:
            raise ValueError(f"lattice JSON is missing required key '{key}'")
    effective = data.get("units", units) or "raw"
    if effective not in ("raw", "pi"):
        raise ValueError(f"unknown units flag '{effective}' (expected 'raw' or 'pi')")
    scale = math.pi if effective == "pi" else 1.0
    return LatticeSpec(
        onsite=tuple(scale * float(v) for v in data["onsite"]),
        hoppings=tuple(scale * float(v) for v in data["hoppings"]),
        interaction=scale * float(data["interaction"]),
        evolution_time=float(data.get("evolution_time", 1.0)),
    )


def save_spec(spec: LatticeSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(spec_to_dict(spec), fh, indent=2)
        fh.write("\n")


def load_spec(path, units: str | None = None) -> LatticeSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"malformed lattice JSON in {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValueError(f"lattice JSON in {path} must be an object")
    return dict_to_spec(data, units=units)
