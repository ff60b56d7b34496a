"""Classical numerical range W(B): support function, numerical radius,
boundary points, and the elliptical disc of a 2x2 matrix."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_cmat, herm_eig, singular_values_2x2, trace_zero_part

MEMBERSHIP_TOL = 1e-9
DEFAULT_ANGLES = 1024
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def angle_grid(count: int = DEFAULT_ANGLES) -> np.ndarray:
    return 2.0 * np.pi * np.arange(count) / count


@dataclass(frozen=True)
class Ellipse:
    """Closed elliptical disc; ``angle`` is the major-axis direction in [0, pi).

    ``semi_minor == 0`` is a segment and ``semi_major == 0`` a point.
    """

    center: complex
    semi_major: float
    semi_minor: float
    angle: float = 0.0

    @classmethod
    def make(cls, center, axis_1, axis_2, angle) -> "Ellipse":
        """Normalize arbitrary semi-axes (``axis_1`` along ``angle``)."""
        a1, a2 = abs(float(axis_1)), abs(float(axis_2))
        angle = float(angle)
        if a2 > a1:
            a1, a2 = a2, a1
            angle += np.pi / 2
        if a1 == a2:
            angle = 0.0
        angle = math.fmod(angle, np.pi) + 0.0  # no negative zero
        if angle < 0:
            angle += np.pi
        if angle >= np.pi:
            angle = 0.0
        return cls(complex(center), a1, a2, angle)

    @property
    def focal_distance(self) -> float:
        return math.sqrt(max(self.semi_major**2 - self.semi_minor**2, 0.0))

    @property
    def foci(self) -> tuple[complex, complex]:
        f = self.focal_distance * np.exp(1j * self.angle)
        return self.center + f, self.center - f

    @property
    def extent(self) -> float:
        """Largest modulus of a point of the disc."""
        return float(np.max(self.support(angle_grid(256)))) if self.semi_major > 0 else abs(self.center)

    def support(self, theta) -> np.ndarray:
        """max over the disc of Re(e^{-i theta} z)."""
        theta = np.asarray(theta, dtype=float)
        psi = theta - self.angle
        rad = np.sqrt((self.semi_major * np.cos(psi)) ** 2 + (self.semi_minor * np.sin(psi)) ** 2)
        return self.center.real * np.cos(theta) + self.center.imag * np.sin(theta) + rad

    def support_point(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        psi = theta - self.angle
        a, b = self.semi_major, self.semi_minor
        x, y = a * a * np.cos(psi), b * b * np.sin(psi)
        norm = np.sqrt(x * np.cos(psi) + y * np.sin(psi))
        norm = np.where(norm == 0.0, 1.0, norm)
        return self.center + np.exp(1j * self.angle) * (x + 1j * y) / norm

    def boundary(self, count: int = 256) -> np.ndarray:
        t = angle_grid(count)
        local = self.semi_major * np.cos(t) + 1j * self.semi_minor * np.sin(t)
        return self.center + np.exp(1j * self.angle) * local

    def scaled(self, factor) -> "Ellipse":
        """The image ``factor * E`` under a complex scalar."""
        factor = complex(factor)
        r = abs(factor)
        if r == 0.0:
            return Ellipse(0j, 0.0, 0.0, 0.0)
        return Ellipse.make(factor * self.center, r * self.semi_major, r * self.semi_minor,
                            self.angle + np.angle(factor))

    def shifted(self, offset) -> "Ellipse":
        return Ellipse(self.center + complex(offset), self.semi_major, self.semi_minor, self.angle)

    def distance(self, z) -> np.ndarray:
        """Euclidean distance from each point to the disc (0 inside)."""
        z = np.asarray(z, dtype=complex)
        w = (z - self.center) * np.exp(-1j * self.angle)
        return _ellipse_distance(np.abs(w.real), np.abs(w.imag), self.semi_major, self.semi_minor)

    def contains(self, z, tol=MEMBERSHIP_TOL):
        return self.distance(z) <= tol

    def to_json(self) -> dict:
        return {
            "center": [self.center.real, self.center.imag],
            "semi_major": self.semi_major,
            "semi_minor": self.semi_minor,
            "angle": self.angle,
        }

    @classmethod
    def from_json(cls, obj) -> "Ellipse":
        c = obj["center"]
        return cls.make(complex(c[0], c[1]), obj["semi_major"], obj["semi_minor"], obj["angle"])


def _ellipse_distance(y0, y1, e0, e1, iters: int = 80):
    # First-quadrant point (y0, y1) against x^2/e0^2 + y^2/e1^2 <= 1, e0 >= e1.
    # Outside points: bisection on the Lagrange parameter (Eberly's method).
    y0 = np.asarray(y0, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    out = np.zeros(np.broadcast(y0, y1).shape)
    if e0 == 0.0:
        return np.hypot(y0, y1) + out
    if e1 == 0.0:
        return np.hypot(np.maximum(y0 - e0, 0.0), y1) + out
    z0, z1 = y0 / e0, y1 / e1
    outside = z0 * z0 + z1 * z1 > 1.0
    if not np.any(outside):
        return out
    y0o, y1o, z0, z1 = y0[outside], y1[outside], z0[outside], z1[outside]
    r0 = (e0 / e1) ** 2
    lo = np.zeros_like(z0)
    hi = np.sqrt((r0 * z0) ** 2 + z1**2) - 1.0
    hi = np.maximum(hi, 0.0)
    for _ in range(iters):
        s = 0.5 * (lo + hi)
        g = (r0 * z0 / (s + r0)) ** 2 + (z1 / (s + 1.0)) ** 2 - 1.0
        pos = g > 0.0
        lo = np.where(pos, s, lo)
        hi = np.where(pos, hi, s)
    s = 0.5 * (lo + hi)
    x0 = r0 * y0o / (s + r0)
    x1 = y1o / (s + 1.0)
    out[outside] = np.hypot(x0 - y0o, x1 - y1o)
    return out


# --------------------------------------------------------------------------
# Support function of W(B)
# --------------------------------------------------------------------------


def _hermitian_part(b, theta):
    rot = np.exp(-1j * theta) * b
    return 0.5 * (rot + rot.conj().T)


def _support_2x2(b, theta):
    theta = np.asarray(theta, dtype=float)
    e = np.exp(-1j * theta)
    h11 = np.real(e * b[0, 0])
    h22 = np.real(e * b[1, 1])
    h12 = 0.5 * (e * b[0, 1] + np.conj(e * b[1, 0]))
    return 0.5 * (h11 + h22) + np.sqrt((0.5 * (h11 - h22)) ** 2 + np.abs(h12) ** 2)


def support_classical(b, theta):
    """Largest eigenvalue of the Hermitian part of ``e^{-i theta} B``.

    Accepts a scalar or an array of angles.
    """
    b = as_cmat(b)
    if b.shape[0] == 2:
        out = _support_2x2(b, theta)
        return float(out) if np.ndim(out) == 0 else out
    if np.ndim(theta) == 0:
        return float(herm_eig(_hermitian_part(b, float(theta))).eigenvalues[-1])
    return np.array([herm_eig(_hermitian_part(b, t)).eigenvalues[-1] for t in np.ravel(theta)])


def golden_max(f, lo: float, hi: float, tol: float = 1e-12, max_iter: int = 200):
    """Golden-section search for the maximum of a unimodal ``f`` on [lo, hi]."""
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def numerical_radius(b, angles: int = 256) -> float:
    """max |z| over W(B): best support value on an angle grid, refined by
    golden-section search in the neighbouring cells."""
    b = as_cmat(b)
    grid = angle_grid(angles)
    vals = np.asarray(support_classical(b, grid))
    k = int(np.argmax(vals))
    step = grid[1]
    _, best = golden_max(lambda t: float(support_classical(b, t)), grid[k] - step, grid[k] + step)
    return max(float(best), float(vals[k]), 0.0)


def ellipse_2x2(b) -> Ellipse:
    """W(B) for 2x2 ``B``: center ``tr B / 2``, foci at the eigenvalues and
    minor axis ``sqrt(tr B*B - |l1|^2 - |l2|^2)``."""
    b = as_cmat(b, order=2)
    b0 = trace_zero_part(b)
    d2 = complex(-np.linalg.det(b0))  # eigenvalues of b0 are +-sqrt(d2)
    # semi-axes are (s1 +- s2)/2 for the singular values of b0
    s1, s2 = (float(x) for x in singular_values_2x2(b0))
    major, minor = 0.5 * (s1 + s2), 0.5 * (s1 - s2)
    return Ellipse.make(0.5 * np.trace(b), major, minor, 0.5 * np.angle(d2))


def boundary_points(b, count: int = 64) -> np.ndarray:
    """Points ``x^* B x`` for the top eigenvector ``x`` of the Hermitian part of
    ``e^{-i theta} B`` at ``count`` uniform angles."""
    if count < 8:
        raise ValueError("count must be at least 8")
    b = as_cmat(b)
    pts = np.empty(count, dtype=complex)
    for k, t in enumerate(angle_grid(count)):
        x = herm_eig(_hermitian_part(b, t)).vectors[:, -1]
        pts[k] = np.vdot(x, b @ x)
    return pts


# --------------------------------------------------------------------------
# Support tables of finite point sets and convex containment
# --------------------------------------------------------------------------


def point_support(points, theta, chunk: int = 4096) -> np.ndarray:
    """Support table of a finite point set (= that of its convex hull)."""
    points = np.asarray(points, dtype=complex).ravel()
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    out = np.full(theta.shape, -np.inf)
    for i in range(0, points.size, chunk):
        p = points[i:i + chunk]
        vals = np.outer(p.real, c) + np.outer(p.imag, s)
        out = np.maximum(out, vals.max(axis=0))
    return out


def containment_margin(inner, outer, angles: int = DEFAULT_ANGLES, refine: bool = True) -> tuple[float, float]:
    """``min_theta (h_outer - h_inner)`` and its minimizing angle.

    ``inner`` and ``outer`` are callables returning support values; the grid
    minimum is refined by golden-section search on the neighbouring cells.
    A non-negative result means ``inner`` is contained in ``outer``.
    """
    grid = angle_grid(angles)
    diff = np.asarray(outer(grid)) - np.asarray(inner(grid))
    k = int(np.argmin(diff))
    best, where = float(diff[k]), float(grid[k])
    if refine:
        step = grid[1]
        t, v = golden_max(lambda t: -(float(outer(t)) - float(inner(t))), grid[k] - step, grid[k] + step)
        if -v < best:
            best, where = -v, t
    return best, where
