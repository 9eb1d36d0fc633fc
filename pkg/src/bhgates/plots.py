"""Matplotlib renderings of traces, convergence, sweeps and process matrices.

Every function writes a PNG next to the delimited output it illustrates and
returns the path it wrote.
"""

from __future__ import annotations

import numpy as np
import matplotlib.pyplot as plt

from .evolve import DensityTrace
from .tomography import ProcessMatrix


def plot_density_trace(trace: DensityTrace, path, title: str | None = None):
    fig, ax = plt.subplots(figsize=(7, 4))
    for m in range(trace.sites):
        ax.plot(trace.times, trace.densities[:, m], label=f"site {m + 1}")
    ax.set_xlabel("time")
    ax.set_ylabel("site density")
    ax.set_ylim(bottom=0)
    ax.legend(loc="center right", fontsize="small")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_convergence(mean, std, path, title: str | None = None):
    mean = np.asarray(mean)
    std = np.asarray(std)
    evals = np.arange(1, len(mean) + 1)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(evals, mean, color="tab:blue", label="mean best fidelity")
    ax.fill_between(
        evals, np.clip(mean - std, 0, 1), np.clip(mean + std, 0, 1),
        alpha=0.3, color="tab:blue", label="±1 std",
    )
    ax.set_xlabel("cost evaluations")
    ax.set_ylabel("best fidelity so far")
    ax.set_ylim(0, 1.02)
    ax.legend(loc="lower right")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_sweep(values, fidelities, path, xlabel: str = "bound value",
               title: str | None = None):
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(values, fidelities, marker="o")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("best fidelity")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _bit_labels(dim: int) -> list[str]:
    n = dim.bit_length() - 1
    return [format(b, f"0{n}b") for b in range(dim)]


def plot_gate_matrix(matrix, path, title: str | None = None):
    """Real and imaginary parts of a logical submatrix, side by side."""
    m = np.asarray(matrix)
    labels = _bit_labels(m.shape[0])
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    for ax, part, name in ((axes[0], m.real, "real"), (axes[1], m.imag, "imaginary")):
        im = ax.imshow(part, vmin=-1, vmax=1, cmap="RdBu_r")
        ax.set_title(f"{name} part")
        ax.set_xticks(range(len(labels)), labels)
        ax.set_yticks(range(len(labels)), labels)
    fig.colorbar(im, ax=axes, shrink=0.8)
    if title:
        fig.suptitle(title)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_chi(pm: ProcessMatrix, path, title: str | None = None):
    """Magnitude of the process matrix over the Pauli basis."""
    fig, ax = plt.subplots(figsize=(7, 6))
    im = ax.imshow(np.abs(pm.chi), vmin=0, cmap="viridis")
    ax.set_xticks(range(len(pm.labels)), pm.labels, rotation=90, fontsize="x-small")
    ax.set_yticks(range(len(pm.labels)), pm.labels, fontsize="x-small")
    fig.colorbar(im, ax=ax, label="|chi|")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
