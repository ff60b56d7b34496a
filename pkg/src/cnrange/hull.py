"""Convex hulls and Hausdorff distances for planar point clouds."""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, Delaunay, QhullError, cKDTree

from .numrange import angle_grid, point_support


def hull_vertices(points) -> np.ndarray:
    """Hull vertices in counter-clockwise order; collinear clouds give the two
    extreme points."""
    pts = np.asarray(points, dtype=complex).ravel()
    xy = np.column_stack([pts.real, pts.imag])
    try:
        hull = ConvexHull(xy)
    except (QhullError, ValueError):
        centered = xy - xy.mean(axis=0)
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        proj = centered @ vt[0]
        return pts[[int(np.argmin(proj)), int(np.argmax(proj))]]
    return pts[hull.vertices]


def support_hausdorff(points, support, angles: int = 1024) -> float:
    """Hausdorff distance between conv(points) and a convex set given by its
    support callable, as ``max |h_1 - h_2|`` on an angle grid."""
    theta = angle_grid(angles)
    h = point_support(hull_vertices(points), theta)
    return float(np.max(np.abs(h - support(theta))))


def hull_gap(points, resolution: int = 200) -> float:
    """Largest distance from a point of conv(points) to the nearest cloud point.

    Probes a square grid clipped to the hull plus points along every hull
    edge; the probe spacing bounds the error.
    """
    pts = np.asarray(points, dtype=complex).ravel()
    xy = np.column_stack([pts.real, pts.imag])
    verts = hull_vertices(pts)
    vxy = np.column_stack([verts.real, verts.imag])
    lo, hi = vxy.min(axis=0), vxy.max(axis=0)
    span = float(np.max(hi - lo))
    if span == 0.0:
        return 0.0
    step = span / resolution
    edges = []
    for p, q in zip(vxy, np.roll(vxy, -1, axis=0)):
        k = max(2, int(np.ceil(np.linalg.norm(q - p) / step)) + 1)
        t = np.linspace(0.0, 1.0, k)[:, None]
        edges.append(p + t * (q - p))
    probes = [np.concatenate(edges)]
    if verts.size >= 3:
        gx = np.arange(lo[0], hi[0] + step, step)
        gy = np.arange(lo[1], hi[1] + step, step)
        grid = np.stack(np.meshgrid(gx, gy), axis=-1).reshape(-1, 2)
        inside = Delaunay(vxy).find_simplex(grid) >= 0
        probes.append(grid[inside])
    probes = np.concatenate(probes)
    dist, _ = cKDTree(xy).query(probes)
    return float(dist.max())
