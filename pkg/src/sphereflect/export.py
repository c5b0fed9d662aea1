"""Mesh and table export for surfaces and their extensions.

OBJ meshes sample each band of the strip on a regular grid: the original
band and every reflected band become separate object groups, so viewers
can color the continuation steps individually.  Vertices are written in
row-major order (y rows outer, x columns inner) and quads are split into
two triangles.  The x direction is sampled periodically (no duplicated
seam column); pass ``wrap=True`` to close the period with seam faces.

CSV tables carry the chart point, the annulus coordinate w = X + iY of
the plane model w = exp(-2*pi*i*(x + i*y)/L), and the three components of
the surface map.

All floating-point output uses 17 significant digits, so a fixed grid
produces byte-identical files run over run.
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .extension import ExtendedSurface

__all__ = ["evaluate_grid", "mesh_bands", "export_obj", "export_csv"]


def evaluate_grid(surface, x, y, *, dx=0, dy=0, threads=1):
    """Evaluate the map on the tensor grid, rows split across workers.

    Rows are reduced back in submission order, so the result (and any
    file rendered from it) does not depend on the worker count.
    """
    X, Y = np.meshgrid(np.asarray(x, float), np.asarray(y, float))
    if threads <= 1 or Y.shape[0] < 2 * threads:
        return surface.evaluate(X, Y, dx, dy)
    blocks = np.array_split(np.arange(Y.shape[0]), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(surface.evaluate, X[b], Y[b], dx, dy)
                   for b in blocks]
        parts = [f.result() for f in futures]
    return np.concatenate(parts, axis=0)


def mesh_bands(obj):
    """(name, y_lo, y_hi) for each object group the mesh should carry."""
    if isinstance(obj, ExtendedSurface):
        bands = [("original", 0.0, obj.a)]
        for rec in obj.records:
            bands.append(("patch_%d" % rec.step,
                          float(rec.added[0]), float(rec.added[1])))
        return bands
    return [("surface", float(obj.y_lo), float(obj.y_hi))]


def _fmt(v):
    return "%.17g" % v


def export_obj(obj, *, nx=64, ny=33, wrap=False, threads=1):
    """Render the surface (or extension) as Wavefront OBJ text.

    Each band contributes nx*ny vertices and 2*(nx-1)*(ny-1) triangles
    (2*nx*(ny-1) when the period is closed with ``wrap``).
    """
    if nx < 8 or ny < 8:
        raise ValueError("mesh resolution must be at least 8x8 (got %dx%d)"
                         % (nx, ny))
    period = obj.period
    x = period * np.arange(nx) / nx
    lines = ["# periodic strip mesh, %d x %d per band%s"
             % (nx, ny, ", wrapped" if wrap else "")]
    offset = 0
    for name, y_lo, y_hi in mesh_bands(obj):
        y = np.linspace(y_lo, y_hi, ny)
        pts = evaluate_grid(obj, x, y, threads=threads)
        lines.append("o %s" % name)
        for row in pts.reshape(-1, 3):
            lines.append("v %s %s %s" % (_fmt(row[0]), _fmt(row[1]),
                                         _fmt(row[2])))
        ncols = nx if wrap else nx - 1
        for i in range(ny - 1):
            for j in range(ncols):
                jn = (j + 1) % nx
                a = offset + i * nx + j + 1
                b = offset + i * nx + jn + 1
                c = offset + (i + 1) * nx + jn + 1
                d = offset + (i + 1) * nx + j + 1
                lines.append("f %d %d %d" % (a, b, c))
                lines.append("f %d %d %d" % (a, c, d))
        offset += nx * ny
    return "\n".join(lines) + "\n"


def export_csv(obj, *, nx=64, ny=33, wrap=False, threads=1):
    """Render the sampled grid as CSV: x,y,X,Y,psi1,psi2,psi3.

    X + iY is the annulus coordinate of the point under the plane model
    w = exp(-2*pi*i*(x + i*y)/L).  ``wrap`` is accepted for interface
    symmetry with the OBJ path; the sampling is periodic either way.
    """
    del wrap
    if nx < 8 or ny < 8:
        raise ValueError("grid resolution must be at least 8x8 (got %dx%d)"
                         % (nx, ny))
    period = obj.period
    x = period * np.arange(nx) / nx
    lines = ["x,y,X,Y,psi1,psi2,psi3"]
    for _, y_lo, y_hi in mesh_bands(obj):
        y = np.linspace(y_lo, y_hi, ny)
        pts = evaluate_grid(obj, x, y, threads=threads)
        X, Y = np.meshgrid(x, y)
        w = np.exp(-2j * np.pi * (X + 1j * Y) / period)
        cols = np.stack([X, Y, w.real, w.imag,
                         pts[..., 0], pts[..., 1], pts[..., 2]], axis=-1)
        for row in cols.reshape(-1, 7):
            lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"
