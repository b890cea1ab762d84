"""Figure rendering for CLI reports.  Figures go to files, never to a window."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {
    "font.size": 10,
    "axes.labelsize": 11,
    "axes.titlesize": 11,
    "figure.dpi": 100,
    "savefig.bbox": "tight",
}
# strip the software/version tag so identical inputs give identical bytes
_PNG_META = {"Software": None}


def _save(fig, path):
    fig.savefig(path, metadata=_PNG_META)
    plt.close(fig)


def plot_quasiprob(weights, path, title=None):
    """Bar chart of the quasiprobability over solution index k = 1..K."""
    weights = np.asarray(weights)
    k = np.arange(1, len(weights) + 1)
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(max(4.0, 0.22 * len(k) + 2), 3.2))
        colors = np.where(weights < 0, "tab:red", "tab:blue")
        ax.bar(k, weights, color=colors, width=0.7)
        ax.axhline(0.0, color="black", lw=0.6)
        ax.set_xlabel("k")
        ax.set_ylabel(r"$P_{\mathrm{Ent}}(a_k)$")
        if len(k) <= 12:
            ax.set_xticks(k)
        if title:
            ax.set_title(title)
        _save(fig, path)


def plot_phase_dist(phi, pdf, path, sigma=None):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.0, 3.0))
        ax.plot(phi, pdf, color="tab:blue")
        ax.set_xlim(0, 2 * np.pi)
        ax.set_ylim(bottom=0)
        ax.set_xlabel(r"$\varphi$")
        ax.set_ylabel(r"$p_\sigma(\varphi)$")
        if sigma is not None:
            ax.set_title(rf"$\sigma={sigma:g}$")
        _save(fig, path)


def plot_sweep(sigmas, min_weights, path, title=None):
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        ax.plot(sigmas, min_weights, "o-", color="tab:red")
        ax.axhline(0.0, color="black", lw=0.6)
        ax.set_xlabel(r"$\sigma$")
        ax.set_ylabel(r"$\min_k P_{\mathrm{Ent}}$")
        if title:
            ax.set_title(title)
        _save(fig, path)
