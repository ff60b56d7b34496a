"""C-numerical ranges of 2x2 pairs and of their zero-bordered embeddings.

``W_C(B) = {tr(C U^* B U) : U unitary}``. For 2x2 pairs the set is an
elliptical disc with a closed form; for the bordered pair
``(A + 0_{n-2}, B + 0_{n-2})`` it is approximated by a :class:`Region`
built from the union of 2x2 ellipses ``W_B(Ahat(eps))`` over the unitary
orbit of ``A`` and compressions ``eps`` in [0, 1].
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DEFAULT_SEED,
    DomainError,
    as_cmat,
    haar_unitaries,
    herm_eig,
    make_rng,
    singular_values_2x2,
    svd_2x2,
    thread_count,
    unitary_residual,
)
from .numrange import DEFAULT_ANGLES, Ellipse, angle_grid, ellipse_2x2, numerical_radius

SCALE_FLOOR = 1e-30
CHUNK = 2048
# substream identifiers for make_rng(seed, stream, chunk)
STREAM_ORBIT = 1
STREAM_CLOUD = 2


@dataclass(frozen=True)
class Budget:
    """Sampling sizes for region construction and the Haar oracle."""

    orbit_samples: int = 20000
    eps_count: int = 17
    alpha_count: int = 9
    cloud_samples: int = 100000
    angles: int = DEFAULT_ANGLES

    @property
    def eps_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.eps_count)

    @property
    def alpha_grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.alpha_count)


def pair_scale(a, b) -> float:
    """Tolerance unit ``r(A) r(B)`` (floored)."""
    return max(numerical_radius(a) * numerical_radius(b), SCALE_FLOOR)


def _seed_of(rng) -> int:
    if rng is None:
        return DEFAULT_SEED
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(2**63))
    return int(rng)


# --------------------------------------------------------------------------
# Canonical form and the 2x2 closed form
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalPair:
    mu: complex
    nu: complex
    a: complex
    b: complex
    a12: float
    a21: float
    b12: float
    b21: float
    conjA: np.ndarray = field(repr=False)
    conjB: np.ndarray = field(repr=False)

    @property
    def kernel(self) -> np.ndarray:
        """The 2x2 matrix whose numerical range, scaled by ``2 mu nu``, is W_A(B)."""
        ab = self.a * self.b
        return np.array([[ab, self.a12 * self.b12], [self.a21 * self.b21, ab]])


def _equal_diagonal_basis(a0) -> np.ndarray:
    """Unitary V with zero diagonal in ``V^* a0 V`` for trace-zero 2x2 ``a0``."""
    h = 0.5 * (a0 + a0.conj().T)
    k = (a0 - a0.conj().T) / 2j
    u, v = herm_eig(h).vectors.T
    w = np.vdot(u, k @ v)
    tau = np.pi / 2 - np.angle(w) if abs(w) > 0 else 0.0
    x = (u + np.exp(1j * tau) * v) / math.sqrt(2.0)
    y = (u - np.exp(1j * tau) * v) / math.sqrt(2.0)
    return np.column_stack([x, y])


def canonicalize_2x2(a, tol: float = 1e-13):
    """Return ``(mu, form, conj)`` with ``A = mu conj form conj^*``.

    ``form = [[t, a12], [a21, t]]`` with ``t = tr A / (2 mu)``, real
    ``a12 >= a21 >= 0`` and ``|mu| = 1``.
    """
    a = as_cmat(a, order=2)
    c = 0.5 * np.trace(a)
    a0 = a - c * np.eye(2)
    size = max(1.0, float(np.linalg.norm(a)))
    thr = tol * size

    if abs(a0[0, 0]) <= thr:
        v = np.eye(2, dtype=complex)
    else:
        v = _equal_diagonal_basis(a0)
    f = v.conj().T @ a0 @ v
    f12, f21 = f[0, 1], f[1, 0]
    r12, r21 = abs(f12), abs(f21)

    if r12 <= thr and r21 <= thr:
        mu, ph = 1.0 + 0j, 1.0 + 0j
    elif r21 <= thr:
        mu, ph = f12 / r12, 1.0 + 0j
    elif r12 <= thr:
        mu, ph = f21 / r21, 1.0 + 0j
    else:
        mu = np.sqrt(f12 * f21 / (r12 * r21))
        ph = mu * np.conj(f12) / r12
    conj = v @ np.diag([1.0, ph])
    if r12 < r21:
        conj = conj @ np.array([[0.0, 1.0], [1.0, 0.0]])
        r12, r21 = r21, r12
    form = np.array([[c / mu, r12], [r21, c / mu]], dtype=complex)
    return complex(mu), form, conj


def canonical_pair(a, b) -> CanonicalPair:
    mu, fa, ca = canonicalize_2x2(a)
    nu, fb, cb = canonicalize_2x2(b)
    return CanonicalPair(
        mu, nu, complex(fa[0, 0]), complex(fb[0, 0]),
        float(fa[0, 1].real), float(fa[1, 0].real), float(fb[0, 1].real), float(fb[1, 0].real),
        ca, cb,
    )


def nakasato_cnr_2x2(a, b) -> Ellipse:
    """``W_A(B) = 2 mu nu W([[ab, a12 b12], [a21 b21, ab]])`` from the canonical forms."""
    cp = canonical_pair(a, b)
    return ellipse_2x2(cp.kernel).scaled(2.0 * cp.mu * cp.nu)


def _offdiag_moduli(m0):
    # a12 >= a21 of the canonical form are the singular values of the trace-zero part
    s1, s2 = singular_values_2x2(m0)
    det = m0[..., 0, 0] * m0[..., 1, 1] - m0[..., 0, 1] * m0[..., 1, 0]
    return s1, s2, det


def cnr_params(a, b):
    """Vectorized ellipse parameters of ``W_A(B)`` over stacks of 2x2 matrices.

    Returns ``(center, semi_major, semi_minor, angle)`` arrays. Uses only
    unitary invariants: the canonical off-diagonal moduli are determined by
    ``||A_0||_F`` and ``|det A_0|``, and the major axis points along
    ``sqrt(det A_0 det B_0)``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    tra = a[..., 0, 0] + a[..., 1, 1]
    trb = b[..., 0, 0] + b[..., 1, 1]
    eye = np.eye(2)
    a12, a21, da = _offdiag_moduli(a - 0.5 * tra[..., None, None] * eye)
    b12, b21, db = _offdiag_moduli(b - 0.5 * trb[..., None, None] * eye)
    p, q = a12 * b12, a21 * b21
    return 0.5 * tra * trb, p + q, np.maximum(p - q, 0.0), 0.5 * np.angle(da * db)


def _support_block(center, major, minor, angle, theta):
    # (T, N) support values of N ellipses at T angles
    s = 0.5 * (major**2 + minor**2)
    d = 0.5 * (major**2 - minor**2)
    quad = np.stack([s, d * np.cos(2 * angle), d * np.sin(2 * angle)])
    trig2 = np.stack([np.ones_like(theta), np.cos(2 * theta), np.sin(2 * theta)], axis=1)
    lin = np.stack([center.real, center.imag])
    trig = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return trig @ lin + np.sqrt(np.maximum(trig2 @ quad, 0.0))


def _support_points(center, major, minor, angle, theta):
    psi = theta - angle
    x = major**2 * np.cos(psi)
    y = minor**2 * np.sin(psi)
    norm = np.sqrt(np.maximum(x * np.cos(psi) + y * np.sin(psi), 0.0))
    norm = np.where(norm == 0.0, 1.0, norm)
    return center + np.exp(1j * angle) * (x + 1j * y) / norm


# --------------------------------------------------------------------------
# Compressions and the bordered decomposition
# --------------------------------------------------------------------------


def _check_eps(eps):
    if not 0.0 <= eps <= 1.0:
        raise DomainError(f"eps = {eps} outside [0, 1]")


def scale_offdiag(b, eps: float) -> np.ndarray:
    """``[[b11, eps b12], [eps b21, b22]]``."""
    b = as_cmat(b, order=2)
    _check_eps(eps)
    out = b.copy()
    out[0, 1] *= eps
    out[1, 0] *= eps
    return out


def compress(b, eps):
    """``diag(1, eps) B diag(1, eps)``; vectorized over stacks and eps arrays."""
    b = np.asarray(b, dtype=complex)
    if np.ndim(eps) == 0:
        _check_eps(float(eps))
    d = np.stack([np.ones_like(np.asarray(eps, dtype=float)), np.asarray(eps, dtype=float)], axis=-1)
    return b * d[..., :, None] * d[..., None, :]


@dataclass(frozen=True)
class DilationParts:
    Ahat: np.ndarray
    Bhat: np.ndarray
    alpha: float
    epsilon: float
    value: complex


def bordered_trace(a, b, u) -> complex:
    """``tr((A + 0) U^* (B + 0) U)``; only the leading 2x2 block of U enters."""
    k = np.asarray(u)[:2, :2]
    return complex(np.trace(a @ k.conj().T @ b @ k))


def dilation_decompose(a, b, u) -> DilationParts:
    """Split the bordered trace as ``alpha tr(Ahat Bhat(eps))`` using the SVD
    ``K = P diag(s1, s2) Q^*`` of the leading block of ``U``:
    ``Ahat = Q^* A Q``, ``Bhat = P^* B P``, ``alpha = s1^2``, ``eps = s2 / s1``."""
    a = as_cmat(a, order=2)
    b = as_cmat(b, order=2)
    u = as_cmat(u)
    n = u.shape[0]
    if n < 3:
        raise DomainError("bordered decomposition needs n >= 3")
    res = unitary_residual(u)
    if res > 1e-10:
        raise DomainError(f"U is not unitary (residual norm {res:.3e})")
    p, s1, s2, q = svd_2x2(u[:2, :2])
    if s1 <= 1e-15:
        return DilationParts(a, b, 0.0, 0.0, 0j)
    ahat = q.conj().T @ a @ q
    bhat = p.conj().T @ b @ p
    alpha = s1 * s1
    eps = min(s2 / s1, 1.0)
    value = alpha * np.trace(ahat @ compress(bhat, eps))
    return DilationParts(ahat, bhat, alpha, eps, complex(value))


# --------------------------------------------------------------------------
# Regions
# --------------------------------------------------------------------------


@dataclass
class Region:
    """Convex region held as a support table on a uniform angle grid."""

    angle_count: int
    support: np.ndarray
    cloud: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    scale: float = 1.0

    @property
    def thetas(self) -> np.ndarray:
        return angle_grid(self.angle_count)

    @classmethod
    def empty(cls, angle_count=DEFAULT_ANGLES, scale=1.0) -> "Region":
        return cls(angle_count, np.full(angle_count, -np.inf), scale=scale)

    def update(self, ellipse: Ellipse) -> None:
        """Union-update with an ellipse (pointwise max of supports)."""
        self.support = np.maximum(self.support, ellipse.support(self.thetas))

    def contains(self, z, tol: float = 1e-9) -> np.ndarray:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        t = self.thetas
        ok = np.ones(z.shape, dtype=bool)
        for i in range(0, z.size, 4096):
            zz = z[i:i + 4096]
            proj = np.outer(zz.real, np.cos(t)) + np.outer(zz.imag, np.sin(t))
            ok[i:i + 4096] = np.all(proj <= self.support + tol * self.scale, axis=1)
        return ok

    def center(self) -> complex:
        """Center of the bounding box."""
        t = self.thetas
        idx = [int(np.argmin(np.abs(np.angle(np.exp(1j * (t - x)))))) for x in (0, np.pi, np.pi / 2, 1.5 * np.pi)]
        h = self.support[idx]
        return complex(0.5 * (h[0] - h[1]), 0.5 * (h[2] - h[3]))

    def radial_support(self, center: complex) -> np.ndarray:
        t = self.thetas
        return self.support - (center.real * np.cos(t) + center.imag * np.sin(t))

    def vertices(self) -> np.ndarray:
        """Polygon cut out by consecutive supporting lines."""
        t = self.thetas
        h = self.support
        t2, h2 = np.roll(t, -1), np.roll(h, -1)
        det = np.sin(t2 - t)
        x = (h * np.sin(t2) - h2 * np.sin(t)) / det
        y = (h2 * np.cos(t) - h * np.cos(t2)) / det
        return x + 1j * y

    def to_json(self) -> dict:
        return {
            "angles": self.angle_count,
            "support": [float(v) for v in self.support],
            "cloud": [[float(z.real), float(z.imag)] for z in self.cloud],
        }

    @classmethod
    def from_json(cls, obj, scale: float = 1.0) -> "Region":
        cloud = np.array([complex(x, y) for x, y in obj.get("cloud", [])], dtype=complex)
        return cls(int(obj["angles"]), np.asarray(obj["support"], dtype=float), cloud, scale)


def _candidates(prm, theta, best, step):
    """Indices of ellipses whose support can exceed ``best`` somewhere.

    Support functions are Lipschitz in the angle with constant max|z|, so
    between coarse angles ``step`` cells apart an ellipse exceeds its larger
    coarse value by at most ``max|z| * width / 2``.
    """
    coarse = theta[::step]
    hc = _support_block(*prm, coarse)
    hc = np.maximum(hc, np.roll(hc, -1, axis=0))
    lip = np.abs(prm[0]) + prm[1]
    width = step * (theta[1] - theta[0])
    bound = hc + lip * (0.5 * width)
    cell_min = np.minimum(best.reshape(coarse.size, step).min(axis=1), np.roll(best[::step], -1))
    return np.flatnonzero(np.any(bound > cell_min[:, None], axis=0))


def _orbit_chunk(a, b, seed, k, count, eps_grid, alpha_grid, theta, floor):
    """Best support value per angle for orbit chunk ``k`` above ``floor``,
    with the ellipse parameters and alpha that attain it."""
    v = haar_unitaries(2, CHUNK, make_rng(seed, STREAM_ORBIT, k))[:count]
    ahat = v @ a @ v.conj().transpose(0, 2, 1)
    a_lo, a_hi = float(alpha_grid.min()), float(alpha_grid.max())
    best = floor.copy()
    params = np.zeros((4, theta.size), dtype=complex)
    alpha = np.full(theta.size, a_hi)
    found = np.zeros(theta.size, dtype=bool)
    step = max(1, theta.size // 128)
    prune = theta.size % step == 0 and a_lo in (0.0, a_hi)
    for eps in eps_grid[::-1]:
        prm = cnr_params(compress(ahat, eps), b)
        if prune:
            keep = _candidates([a_hi * x if i < 2 else x for i, x in enumerate(prm)], theta, best, step)
            if keep.size == 0:
                continue
            prm = tuple(x[keep] for x in prm)
        block = _support_block(*prm, theta)
        top = a_hi * block.max(axis=1)
        # alpha h is linear in alpha, so the end points of the grid suffice;
        # the low end only matters where every ellipse has negative support
        low = a_lo * block.min(axis=1) if a_lo != a_hi else top
        use_hi = top >= low
        val = np.where(use_hi, top, low)
        rows = np.flatnonzero(val > best)
        if rows.size == 0:
            continue
        sub = block[rows]
        arg = np.where(use_hi[rows], sub.argmax(axis=1), sub.argmin(axis=1))
        best[rows] = val[rows]
        found[rows] = True
        alpha[rows] = np.where(use_hi[rows], a_hi, a_lo)
        for r, src in enumerate(prm):
            params[r, rows] = src[arg]
    return best, params, alpha, found


def bordered_region(a, b, n: int = 3, budget: Budget | None = None, rng=None) -> Region:
    """Support table of ``W_{A+0_{n-2}}(B+0_{n-2})``.

    Pointwise max over Haar samples ``Ahat = V A V^*`` of the unitary orbit,
    the eps grid and (for ``n >= 4``) the alpha grid of the supports of
    ``alpha W_B(Ahat(eps))``. The cloud holds the support point of the
    maximizing ellipse at each grid angle.
    """
    a = as_cmat(a, order=2)
    b = as_cmat(b, order=2)
    if n < 3:
        raise DomainError("bordered region needs n >= 3")
    budget = budget or Budget()
    seed = _seed_of(rng)
    theta = angle_grid(budget.angles)
    alpha_grid = budget.alpha_grid if n >= 4 else np.array([1.0])
    a_lo, a_hi = float(alpha_grid.min()), float(alpha_grid.max())

    # Ahat = A, eps = 1 gives W_A(B) itself; alpha = 0 gives the point 0
    e2 = nakasato_cnr_2x2(a, b)
    base = e2.support(theta)
    best = np.maximum(a_hi * base, a_lo * base)
    params = np.empty((4, theta.size), dtype=complex)
    params[:] = np.array([[e2.center], [e2.semi_major], [e2.semi_minor], [e2.angle]])
    alpha = np.where(a_hi * base >= a_lo * base, a_hi, a_lo)
    floor = best.copy()

    counts = []
    left = budget.orbit_samples
    while left > 0:
        counts.append(min(CHUNK, left))
        left -= CHUNK

    def work(k):
        return _orbit_chunk(a, b, seed, k, counts[k], budget.eps_grid, alpha_grid, theta, floor)

    workers = min(thread_count(), max(1, len(counts)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # merged in chunk order, so the result does not depend on the pool size
        for val, prm, asc, found in pool.map(work, range(len(counts))):
            better = found & (val > best)
            best = np.where(better, val, best)
            params = np.where(better, prm, params)
            alpha = np.where(better, asc, alpha)

    pts = alpha * _support_points(params[0], params[1].real, params[2].real, params[3].real, theta)
    return Region(budget.angles, best, pts, pair_scale(a, b))


def haar_cloud_chunks(a, b, n: int, samples: int, rng=None):
    """Yield ``(U, values)`` chunks of the Haar oracle, in chunk order."""
    a = as_cmat(a, order=2)
    b = as_cmat(b, order=2)
    if n < 2:
        raise DomainError("n must be at least 2")
    seed = _seed_of(rng)
    k = 0
    left = samples
    while left > 0:
        count = min(CHUNK, left)
        u = haar_unitaries(n, CHUNK, make_rng(seed, STREAM_CLOUD, n, k))[:count]
        kb = u[:, :2, :2]
        vals = np.einsum("ij,nkj,kl,nli->n", a, kb.conj(), b, kb, optimize=True)
        yield u, vals
        left -= count
        k += 1


def haar_cloud(a, b, n: int = 2, samples: int = 100000, rng=None) -> np.ndarray:
    """``tr((A+0) U^* (B+0) U)`` for Haar-random ``U`` of order ``n``."""
    parts = [vals for _, vals in haar_cloud_chunks(a, b, n, samples, rng)]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)
