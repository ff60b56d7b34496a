import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cnrange.crange import haar_cloud
from cnrange.linalg import DomainError
from cnrange.numrange import (
    Ellipse,
    angle_grid,
    boundary_points,
    containment_margin,
    ellipse_2x2,
    golden_max,
    numerical_radius,
    point_support,
    support_classical,
)

from conftest import rand_c

E11 = np.array([[1, 0], [0, 0]], dtype=complex)
E12 = np.array([[0, 1], [0, 0]], dtype=complex)
C4 = np.array([[0, 3], [1, 0]], dtype=complex)

complex_entries = st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False)
mat2 = st.lists(complex_entries, min_size=4, max_size=4).map(lambda v: np.array(v).reshape(2, 2))


def test_support_examples():
    assert support_classical(E11, 0.0) == pytest.approx(1.0, abs=1e-12)
    assert support_classical(E12, 0.0) == pytest.approx(0.5, abs=1e-12)
    assert support_classical(C4, 0.0) == pytest.approx(2.0, abs=1e-12)


def test_support_order3_matches_eigvalsh(rng):
    b = rand_c(rng, (3, 3))
    for t in angle_grid(16):
        r = np.exp(-1j * t) * b
        ref = np.linalg.eigvalsh(0.5 * (r + r.conj().T))[-1]
        assert support_classical(b, t) == pytest.approx(ref, abs=1e-10)


def test_numerical_radius_examples():
    assert numerical_radius(E11) == pytest.approx(1.0, abs=1e-10)
    assert numerical_radius(E12) == pytest.approx(0.5, abs=1e-10)
    assert numerical_radius([[0, 2], [0, 0]]) == pytest.approx(1.0, abs=1e-10)


def test_numerical_radius_vs_dense_grid(rng):
    for n in (2, 3, 4):
        b = rand_c(rng, (n, n))
        fine = max(abs(np.vdot(x, b @ x)) for x in _unit_vectors(rng, n, 20000))
        r = numerical_radius(b)
        assert fine <= r + 1e-9
        ref = max(support_classical(b, t) for t in angle_grid(20000)) if n == 2 else None
        if ref is not None:
            assert abs(r - ref) <= 1e-8 * r


def _unit_vectors(rng, n, count):
    x = rand_c(rng, (count, n))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def test_ellipse_examples():
    e = ellipse_2x2(E12)
    assert e.center == 0 and e.semi_major == pytest.approx(0.5) and e.semi_minor == pytest.approx(0.5)
    s = ellipse_2x2(np.diag([1.0, -1.0]))
    assert s.center == 0 and s.semi_major == pytest.approx(1.0) and s.semi_minor == pytest.approx(0.0, abs=1e-15)
    c = ellipse_2x2(C4)
    assert c.center == 0
    assert c.semi_major == pytest.approx(2.0, abs=1e-12)
    assert c.semi_minor == pytest.approx(1.0, abs=1e-12)
    f1, f2 = c.foci
    assert sorted([f1.real, f2.real]) == pytest.approx([-math.sqrt(3), math.sqrt(3)], abs=1e-12)
    p = ellipse_2x2(2j * np.eye(2))
    assert p.center == 2j and p.semi_major == 0 and p.semi_minor == 0


def test_ellipse_foci_are_eigenvalues(rng):
    for _ in range(20):
        b = rand_c(rng)
        f = np.sort_complex(np.array(ellipse_2x2(b).foci))
        assert np.allclose(f, np.sort_complex(np.linalg.eigvals(b)), atol=1e-10)


def test_ellipse_haar_cross_check():
    e = ellipse_2x2(C4)
    e11 = np.array([[1, 0], [0, 0]])
    pts = haar_cloud(e11, C4, 2, 20000, 3)
    assert e.distance(pts).max() < 1e-10
    assert np.max(np.abs(pts)) > 0.99 * 2.0


@settings(max_examples=60, deadline=None)
@given(mat2)
def test_support_consistency(b):
    theta = angle_grid(64)
    ref = np.array([np.linalg.eigvalsh(0.5 * (np.exp(-1j * t) * b + np.conj(np.exp(-1j * t) * b).T))[-1]
                    for t in theta])
    assert np.max(np.abs(ellipse_2x2(b).support(theta) - ref)) < 1e-9 * max(1, np.abs(b).max())


@settings(max_examples=60, deadline=None)
@given(mat2, complex_entries, complex_entries)
def test_covariance(b, alpha, beta):
    e = ellipse_2x2(alpha * b + beta * np.eye(2))
    f = ellipse_2x2(b).scaled(alpha).shifted(beta)
    tol = 1e-9 * (1 + abs(alpha)) * (1 + np.abs(b).max()) + 1e-9 * abs(beta)
    assert abs(e.center - f.center) < tol
    assert abs(e.semi_major - f.semi_major) < tol and abs(e.semi_minor - f.semi_minor) < tol
    theta = angle_grid(64)
    assert np.max(np.abs(e.support(theta) - f.support(theta))) < 10 * tol


def test_hadamard_radius_bound(rng):
    for _ in range(200):
        a, b = rand_c(rng), rand_c(rng)
        assert numerical_radius(a * b) <= 2 * numerical_radius(a) * numerical_radius(b) + 1e-9


def test_boundary_points():
    pts = boundary_points(E11, 16)
    assert np.all(np.abs(pts.imag) < 1e-12) and pts.real.min() > -1e-12 and pts.real.max() < 1 + 1e-12
    assert pts.real.min() == pytest.approx(0, abs=1e-12) and pts.real.max() == pytest.approx(1, abs=1e-12)
    d = np.abs(boundary_points(E12, 32))
    assert np.allclose(d, 0.5, atol=1e-9)
    with pytest.raises(ValueError):
        boundary_points(E11, 4)


def test_boundary_points_bordered_match_2x2(rng):
    for _ in range(5):
        b = rand_c(rng)
        big = np.zeros((3, 3), dtype=complex)
        big[:2, :2] = b
        e = ellipse_2x2(b)
        # padding adds the point 0 to the hull, so compare against conv(W(B), 0)
        hull_support = lambda t: np.maximum(e.support(t), 0.0)
        pts = boundary_points(big, 64)
        theta = angle_grid(64)
        assert np.max(point_support(pts, theta) - hull_support(theta)) < 1e-9


def test_boundary_points_inside_range(rng):
    b = rand_c(rng, (4, 4))
    pts = boundary_points(b, 32)
    theta = angle_grid(256)
    h = np.array([support_classical(b, t) for t in theta])
    assert np.all(point_support(pts, theta) <= h + 1e-9)


def test_ellipse_make_normalizes():
    e = Ellipse.make(1j, 1.0, 3.0, 0.2)
    assert e.semi_major == 3.0 and e.semi_minor == 1.0
    assert e.angle == pytest.approx(0.2 + math.pi / 2)
    assert Ellipse.make(0, 2, 2, 1.0).angle == 0.0
    assert 0 <= Ellipse.make(0, 2, 1, -0.3).angle < math.pi
    assert math.copysign(1, Ellipse.make(0, 1, 0, 0.0).angle) == 1


def test_ellipse_json_round_trip():
    e = Ellipse.make(1 + 2j, 3.0, 1.0, 0.4)
    assert Ellipse.from_json(e.to_json()) == e


def _brute_distance(e, z, count=200000):
    # dense sample of the disc boundary and interior test
    if e.contains(z, tol=0):
        return 0.0
    return float(np.min(np.abs(e.boundary(count) - z)))


@pytest.mark.parametrize("e", [
    Ellipse.make(0.3 - 1j, 2.0, 0.7, 0.9),
    Ellipse.make(1, 1.0, 0.0, 0.3),
    Ellipse.make(2j, 0.0, 0.0, 0.0),
    Ellipse.make(0, 1.0, 1.0, 0.0),
])
def test_ellipse_distance_vs_brute_force(e, rng):
    for z in 3 * rand_c(rng, (25,)):
        assert float(e.distance(z)) == pytest.approx(_brute_distance(e, z), abs=1e-6)


def test_contains_and_support_point():
    e = Ellipse.make(0, 2.0, 1.0, 0.0)
    assert e.contains(1.9) and not e.contains(2.1) and e.contains(2.0)
    for t in angle_grid(12):
        p = e.support_point(t)
        assert float(e.distance(p)) < 1e-12
        assert (p * np.exp(-1j * t)).real == pytest.approx(float(e.support(t)), abs=1e-12)


def test_containment_margin():
    small = Ellipse(0j, 1.0, 0.5, 0.0)
    big = Ellipse(0j, 2.0, 1.0, 0.0)
    m, _ = containment_margin(small.support, big.support)
    assert m == pytest.approx(0.5, abs=1e-9)
    m, t = containment_margin(big.support, small.support)
    assert m == pytest.approx(-1.0, abs=1e-9)


def test_golden_max():
    x, v = golden_max(lambda t: -(t - 0.3) ** 2, -1, 2)
    assert x == pytest.approx(0.3, abs=1e-6) and v == pytest.approx(0, abs=1e-12)


def test_support_rejects_bad_shape():
    with pytest.raises(DomainError):
        support_classical(np.zeros((2, 3)), 0.0)
