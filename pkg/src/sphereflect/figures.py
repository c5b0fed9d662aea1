"""Static figures for the report path (PNG files next to the JSON).

Plots are rendered headless (Agg).  For deep extensions the conformal
factor grows like cosh of the band depth, so the 3D view and the heatmap
clamp the plotted window to a few original band-heights around the
source band; the factor profile shows the full strip on a log scale.
"""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .export import evaluate_grid, mesh_bands  # noqa: E402

__all__ = ["render_figures"]


def _plot_window(obj):
    y_lo, y_hi = float(obj.y_lo), float(obj.y_hi)
    a = getattr(obj, "a", None)
    if a is None:
        return y_lo, y_hi
    return max(y_lo, -1.5 * a), min(y_hi, 2.5 * a)


def _surface_figure(obj, path, nx, ny):
    lo, hi = _plot_window(obj)
    fig = plt.figure(figsize=(7, 6))
    ax = fig.add_subplot(111, projection="3d")
    cmap = plt.get_cmap("viridis")
    bands = [(n, max(b_lo, lo), min(b_hi, hi))
             for n, b_lo, b_hi in mesh_bands(obj)]
    bands = [b for b in bands if b[2] > b[1]]
    x = np.linspace(0, obj.period, nx)
    for k, (name, b_lo, b_hi) in enumerate(bands):
        y = np.linspace(b_lo, b_hi, ny)
        pts = evaluate_grid(obj, x, y)
        color = cmap(0.15 + 0.7 * k / max(1, len(bands) - 1))
        ax.plot_surface(pts[..., 0], pts[..., 1], pts[..., 2],
                        color=color, alpha=0.8, linewidth=0, label=name)
    # faint unit sphere for scale
    u = np.linspace(0, 2 * np.pi, 40)
    v = np.linspace(0, np.pi, 20)
    ax.plot_wireframe(np.outer(np.cos(u), np.sin(v)),
                      np.outer(np.sin(u), np.sin(v)),
                      np.outer(np.ones_like(u), np.cos(v)),
                      color="0.75", linewidth=0.3, alpha=0.5)
    ax.set_box_aspect((1, 1, 1))
    ax.set_title("surface and its continuation bands")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def _factor_figure(obj, path, ny):
    y = np.linspace(obj.y_lo + 1e-6, obj.y_hi - 1e-6, ny)
    x = np.linspace(0, obj.period, 32, endpoint=False)
    px = evaluate_grid(obj, x, y, dx=1)
    F = np.sqrt(np.sum(px * px, axis=-1)).mean(axis=1)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy(y, F, lw=1.5)
    for _, b_lo, b_hi in mesh_bands(obj):
        ax.axvline(b_lo, color="0.8", lw=0.7)
        ax.axvline(b_hi, color="0.8", lw=0.7)
    ax.set_xlabel("y (strip coordinate)")
    ax.set_ylabel("conformal factor F (x-mean)")
    ax.set_title("metric scale across the bands")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def _curvature_figure(obj, path, nx, ny):
    from .geometry import fundamental_forms
    lo, hi = _plot_window(obj)
    span = hi - lo
    x = np.linspace(0, obj.period, nx)[None, :]
    y = np.linspace(lo + 1e-3 * span, hi - 1e-3 * span, ny)[:, None]
    forms = fundamental_forms(obj, x, y)
    fig, ax = plt.subplots(figsize=(7, 4))
    pc = ax.pcolormesh(np.broadcast_to(x, forms.gauss_curvature.shape),
                       np.broadcast_to(y, forms.gauss_curvature.shape),
                       forms.gauss_curvature, shading="gouraud",
                       cmap="magma")
    fig.colorbar(pc, ax=ax, label="Gauss curvature K")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("curvature over the plotted window")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def render_figures(obj, out_dir, *, nx=72, ny=49, stem="sphereflect"):
    """Write the three report figures; returns the list of file paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    jobs = [
        ("%s-surface.png" % stem, lambda p: _surface_figure(obj, p, nx, ny)),
        ("%s-factor.png" % stem, lambda p: _factor_figure(obj, p, 4 * ny)),
        ("%s-curvature.png" % stem,
         lambda p: _curvature_figure(obj, p, nx, ny)),
    ]
    for name, job in jobs:
        path = os.path.join(out_dir, name)
        job(path)
        paths.append(path)
    return paths
