"""Figure rendering for surface reports (headless matplotlib backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .geometry import curvature_grid, induced_metric


def curvature_heatmap(P, path, radius=3.0, resolution=81):
    """Heat map of the exact Gaussian curvature over the scan square."""
    metric = induced_metric(P)
    _, vals = curvature_grid(metric, radius, resolution)
    grid = vals.reshape(resolution, resolution).T
    fig, ax = plt.subplots(figsize=(5.4, 4.4))
    im = ax.imshow(grid, origin="lower", cmap="viridis",
                   extent=[-radius, radius, -radius, radius])
    fig.colorbar(im, ax=ax, label="K")
    ax.set_xlabel("Re xi")
    ax.set_ylabel("Im xi")
    ax.set_title(f"Gaussian curvature, N={P.n}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def diagonal_profile(P, chart, path, radius=3.0, resolution=201):
    """Diagonal embedding coordinates X_1..X_(N-1) along the real axis."""
    from .surface import embed_matrix

    xs = np.linspace(-radius, radius, resolution)
    mats = P.eval_many(xs.astype(complex))
    coords = np.array([embed_matrix(m, chart).X_diag for m in mats])
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    for i in range(coords.shape[1]):
        ax.plot(xs, coords[:, i], label=f"X_{i + 1}")
    ax.set_xlabel("xi (real axis)")
    ax.set_ylabel("coordinate value")
    ax.set_title(f"Diagonal coordinates, N={P.n}, r={chart.r}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path


def metric_profile(P, path, radius=3.0, resolution=201):
    """Conformal factor g along the real axis (log scale)."""
    metric = induced_metric(P)
    xs = np.linspace(-radius, radius, resolution)
    g = metric.eval_many(xs.astype(complex))
    fig, ax = plt.subplots(figsize=(5.4, 3.6))
    ax.semilogy(xs, np.where(g > 0, g, np.nan))
    ax.set_xlabel("xi (real axis)")
    ax.set_ylabel("g")
    ax.set_title(f"Conformal factor, N={P.n}")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
