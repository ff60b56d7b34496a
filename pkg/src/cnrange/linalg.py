"""Small dense complex matrices: predicates, Hermitian eigen, 2x2 SVD,
Haar-random unitaries and the matrix JSON format.

Matrices are plain ``numpy`` complex arrays of order 2..8.
"""

from __future__ import annotations

import json
import os
from typing import NamedTuple

import numpy as np

MIN_ORDER = 2
MAX_ORDER = 8
PRED_TOL = 1e-10
JACOBI_TOL = 1e-12
DEFAULT_SEED = 42


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class MatrixFormatError(ValueError):
    """Malformed matrix JSON."""


def as_cmat(x, order=None) -> np.ndarray:
    m = np.array(x, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise DomainError(f"order {n} outside {MIN_ORDER}..{MAX_ORDER}")
    if order is not None and n != order:
        raise DomainError(f"expected order {order}, got {n}")
    return m


def hermitian_residual(m) -> float:
    m = np.asarray(m)
    return float(np.linalg.norm(m - m.conj().T))


def unitary_residual(m) -> float:
    m = np.asarray(m)
    return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])))


def is_hermitian(m, tol=PRED_TOL) -> bool:
    return hermitian_residual(m) <= tol


def is_unitary(m, tol=PRED_TOL) -> bool:
    return unitary_residual(m) <= tol


def is_contraction(m, tol=PRED_TOL) -> bool:
    return float(np.linalg.norm(np.asarray(m), 2)) <= 1.0 + tol


def trace_zero_part(m) -> np.ndarray:
    """``m - (tr m / order) I``; for 2x2 this is ``B - (tr B / 2) I``."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    return m - (np.trace(m) / n) * np.eye(n)


def direct_sum_zero(m, n: int) -> np.ndarray:
    """Embed ``m`` as the leading block of an ``n x n`` zero matrix."""
    m = np.asarray(m, dtype=complex)
    k = m.shape[0]
    if n < k:
        raise DomainError(f"cannot border an order-{k} matrix to order {n}")
    out = np.zeros((n, n), dtype=complex)
    out[:k, :k] = m
    return out


# --------------------------------------------------------------------------
# Hermitian eigenproblem
# --------------------------------------------------------------------------


class SpectralData(NamedTuple):
    eigenvalues: np.ndarray
    vectors: np.ndarray


def herm_eig(h, tol: float = JACOBI_TOL, max_sweeps: int = 60) -> SpectralData:
    """Cyclic Jacobi eigensolver for a Hermitian matrix.

    Each rotation first removes the phase of the pivot ``h[p, q]`` with a
    diagonal unitary and then applies the classical real Jacobi rotation.
    Iterates until the off-diagonal Frobenius norm drops below
    ``tol * max(1, ||h||_F)``. Eigenvalues are returned ascending, with the
    eigenvectors as columns of a unitary matrix.
    """
    h = np.array(h, dtype=complex)
    res = hermitian_residual(h)
    if res > PRED_TOL * max(1.0, float(np.linalg.norm(h))):
        raise DomainError(f"matrix is not Hermitian (residual norm {res:.3e})")
    h = 0.5 * (h + h.conj().T)
    n = h.shape[0]
    v = np.eye(n, dtype=complex)
    stop = tol * max(1.0, float(np.linalg.norm(h)))

    mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(h[mask]))
        if off < stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                g = h[p, q]
                r = abs(g)
                if r == 0.0:
                    continue
                a = h[p, p].real
                b = h[q, q].real
                theta = (b - a) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ph = g / r
                # G = diag(1, conj(ph)) @ [[c, s], [-s, c]]
                rot = np.array([[c, s], [-s * ph.conjugate(), c * ph.conjugate()]])
                idx = [p, q]
                h[:, idx] = h[:, idx] @ rot
                h[idx, :] = rot.conj().T @ h[idx, :]
                h[p, q] = h[q, p] = 0.0
                h[p, p] = h[p, p].real
                h[q, q] = h[q, q].real
                v[:, idx] = v[:, idx] @ rot

    w = np.real(np.diag(h))
    order = np.argsort(w, kind="stable")
    return SpectralData(w[order], v[:, order])


def singular_values_2x2(m):
    """Singular values ``(s1, s2)`` of a stack of 2x2 matrices, in closed form.

    ``s1 + s2 = sqrt(||M||_F^2 + 2|det M|)`` and ``s1^2 - s2^2`` is the
    eigenvalue gap of ``M^* M``; neither step takes the square root of a
    cancelling difference, so both values carry absolute error ~eps ||M||.
    """
    m = np.asarray(m, dtype=complex)
    a, b, c, d = m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1]
    fro2 = np.abs(a) ** 2 + np.abs(b) ** 2 + np.abs(c) ** 2 + np.abs(d) ** 2
    total = np.sqrt(fro2 + 2.0 * np.abs(a * d - b * c))
    h_diff = np.abs(a) ** 2 + np.abs(c) ** 2 - np.abs(b) ** 2 - np.abs(d) ** 2
    h_off = np.conj(a) * b + np.conj(c) * d
    gap = np.sqrt(h_diff**2 + 4.0 * np.abs(h_off) ** 2)
    diff = np.minimum(gap / np.where(total > 0.0, total, 1.0), total)
    return 0.5 * (total + diff), 0.5 * (total - diff)


def svd_2x2(k):
    """Return ``(P, s1, s2, Q)`` with ``k = P diag(s1, s2) Q^*``, ``s1 >= s2 >= 0``."""
    k = as_cmat(k, order=2)
    p, s, vh = np.linalg.svd(k)
    return p, float(s[0]), float(s[1]), vh.conj().T


# --------------------------------------------------------------------------
# Random unitaries
# --------------------------------------------------------------------------


def make_rng(seed: int = DEFAULT_SEED, *stream: int) -> np.random.Generator:
    """Generator for substream ``stream`` of ``seed``.

    Substreams are addressed by integer counters (``SeedSequence`` spawn
    keys), so chunk ``k`` of a sampling task draws the same numbers no
    matter how many workers run or in which order they finish.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(stream)))


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(DEFAULT_SEED if rng is None else int(rng))


def haar_unitaries(n: int, count: int, rng) -> np.ndarray:
    """``count`` independent Haar unitaries of order ``n``, shape ``(count, n, n)``."""
    rng = as_rng(rng)
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    ph = d / np.where(np.abs(d) == 0.0, 1.0, np.abs(d))
    return q * ph[..., None, :]


def haar_unitary(n: int, rng=None) -> np.ndarray:
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise DomainError(f"order {n} outside {MIN_ORDER}..{MAX_ORDER}")
    return haar_unitaries(n, 1, rng)[0]


def orbit_element_2x2(t: float, phi: float, psi: float) -> np.ndarray:
    """SU(2) element; with t in [0, pi/2] and phi, psi in [0, 2pi) it reaches
    every conjugation action of U(2)."""
    c, s = np.cos(t), np.sin(t)
    return np.array(
        [
            [c * np.exp(1j * phi), -s * np.exp(1j * psi)],
            [s * np.exp(-1j * psi), c * np.exp(-1j * phi)],
        ]
    )


def thread_count() -> int:
    """Worker cap from ``CNRANGE_THREADS`` (default: CPU count)."""
    env = os.environ.get("CNRANGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "order" not in obj or "entries" not in obj:
        raise MatrixFormatError('matrix JSON needs "order" and "entries"')
    n = obj["order"]
    entries = obj["entries"]
    if not isinstance(n, int) or isinstance(n, bool) or not MIN_ORDER <= n <= MAX_ORDER:
        raise MatrixFormatError(f"bad order {n!r}")
    if not isinstance(entries, list) or len(entries) != n * n:
        got = len(entries) if isinstance(entries, list) else type(entries).__name__
        raise MatrixFormatError(f"order {n} needs {n * n} entries, got {got}")
    vals = []
    for e in entries:
        if (
            not isinstance(e, (list, tuple))
            or len(e) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in e)
        ):
            raise MatrixFormatError(f"entry {e!r} is not a [re, im] pair")
        vals.append(complex(e[0], e[1]))
    return np.array(vals, dtype=complex).reshape(n, n)


def matrix_to_json(m) -> dict:
    m = as_cmat(m)
    return {
        "order": m.shape[0],
        "entries": [[float(z.real), float(z.imag)] for z in m.ravel()],
    }


def load_matrix(path) -> np.ndarray:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFormatError(f"{path}: {exc}") from exc
    return matrix_from_json(obj)
