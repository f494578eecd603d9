"""Center recurrence, its convergence bound, and the exact oracle.

The oracle is the test bed for everything else here, so its own checks
come first and use only hand-derivable geometry.
"""

import numpy as np
import pytest

from mebo import (
    EmptySubsetError,
    InstanceTooLargeError,
    approx_meb_center,
    enclosing_radius,
    exact_meb_oracle,
    meb_iterates,
)


# ------------------------------------------------------------- oracle


def test_oracle_symmetric_pair():
    b = exact_meb_oracle(np.array([[-1.0, 0.0], [1.0, 0.0]]))
    assert np.allclose(b.center, [0.0, 0.0], atol=1e-12)
    assert b.radius == pytest.approx(1.0, abs=1e-12)


def test_oracle_three_points():
    # circle through (0,0) and (2,0) centered at (1,0); (1,1) lies on it
    b = exact_meb_oracle(np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 1.0]]))
    assert np.allclose(b.center, [1.0, 0.0], atol=1e-9)
    assert b.radius == pytest.approx(1.0, abs=1e-9)


def test_oracle_single_point():
    b = exact_meb_oracle(np.array([[3.0, 4.0, 5.0]]))
    assert b.radius == 0.0
    assert np.allclose(b.center, [3.0, 4.0, 5.0])


def test_oracle_equilateral_triangle():
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, np.sqrt(3) / 2]])
    b = exact_meb_oracle(pts)
    assert b.radius == pytest.approx(1 / np.sqrt(3), abs=1e-9)
    assert np.allclose(b.center, [0.5, np.sqrt(3) / 6], atol=1e-9)


def test_oracle_collinear():
    b = exact_meb_oracle(np.array([[0.0], [1.0], [10.0]]))
    assert b.radius == pytest.approx(5.0, abs=1e-9)
    assert b.center[0] == pytest.approx(5.0, abs=1e-9)


def test_oracle_duplicates():
    pts = np.array([[1.0, 1.0]] * 5 + [[3.0, 1.0]] * 3)
    b = exact_meb_oracle(pts)
    assert b.radius == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(b.center, [2.0, 1.0], atol=1e-9)


def test_oracle_covers_and_is_minimal():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(2, 13))
        d = int(rng.integers(1, 5))
        pts = rng.normal(size=(n, d)) * rng.uniform(0.5, 3.0)
        b = exact_meb_oracle(pts)
        cover = enclosing_radius(pts, b.center)
        assert cover <= b.radius + 1e-9 * max(1.0, b.radius)
        # no perturbed center does better; crude local optimality probe
        for _ in range(8):
            z = b.center + rng.normal(size=d) * 0.05 * (b.radius + 0.1)
            assert enclosing_radius(pts, z) >= b.radius - 1e-9


def test_oracle_limits():
    with pytest.raises(InstanceTooLargeError):
        exact_meb_oracle(np.zeros((15, 2)))
    with pytest.raises(InstanceTooLargeError):
        exact_meb_oracle(np.zeros((3, 7)))
    exact_meb_oracle(np.zeros((20, 2)), limit=20)  # explicit limit admits more
    with pytest.raises(EmptySubsetError):
        exact_meb_oracle(np.zeros((0, 2)))


# --------------------------------------------------------- recurrence


def test_recurrence_hand_trace():
    # c_1 = (-1,0); farthest is (1,0) so c_2 = midpoint (0,0);
    # then both points tie at distance 1, lowest index wins,
    # c_3 = (0,0) + ((-1,0) - (0,0))/3 = (-1/3, 0)
    pts = np.array([[-1.0, 0.0], [1.0, 0.0]])
    it = meb_iterates(pts, 3)
    assert np.array_equal(it[0], [-1.0, 0.0])
    assert np.array_equal(it[1], [0.0, 0.0])
    assert np.allclose(it[2], [-1.0 / 3.0, 0.0], atol=1e-15)


def test_iterates_match_single_center():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(9, 3))
    it = meb_iterates(pts, 12)
    for t in (1, 2, 5, 12):
        assert np.array_equal(it[t - 1], approx_meb_center(pts, t))


def test_single_point_fixed_point():
    p = np.array([[2.0, -7.0]])
    for iters in (1, 3, 50):
        assert np.array_equal(approx_meb_center(p, iters), p[0])


def test_symmetric_pair_bound():
    # ||c_t|| <= 1/sqrt(t) for the unit pair, every step
    pts = np.array([[-1.0, 0.0], [1.0, 0.0]])
    it = meb_iterates(pts, 64)
    for t in range(1, 65):
        assert np.linalg.norm(it[t - 1]) <= 1.0 / np.sqrt(t) + 1e-12


def test_random_3d_instance_bound():
    rng = np.random.default_rng(17)
    pts = rng.normal(size=(20, 3))
    b = exact_meb_oracle(pts, limit=20)
    c100 = approx_meb_center(pts, 100)
    assert np.linalg.norm(c100 - b.center) <= b.radius / 10.0 + 1e-12


def test_convergence_bound_random_instances():
    # quick local version of the full acceptance sweep
    rng = np.random.default_rng(29)
    for _ in range(25):
        n = int(rng.integers(2, 13))
        d = int(rng.integers(1, 5))
        pts = rng.normal(size=(n, d)) * rng.uniform(0.2, 4.0)
        b = exact_meb_oracle(pts)
        it = meb_iterates(pts, 32)
        dist = np.linalg.norm(it - b.center, axis=1)
        bound = b.radius / np.sqrt(np.arange(1, 33))
        assert (dist <= bound + 1e-9).all()


def test_monotone_coverage():
    # covering radius of c_N is at most r * (1 + 1/sqrt(N))
    rng = np.random.default_rng(41)
    for _ in range(20):
        pts = rng.normal(size=(int(rng.integers(2, 12)), 2))
        b = exact_meb_oracle(pts)
        for N in (1, 4, 16):
            c = approx_meb_center(pts, N)
            assert enclosing_radius(pts, c) <= b.radius * (1 + 1 / np.sqrt(N)) + 1e-9


def test_farthest_point_lower_bound():
    # for any probe p, the farthest point of the set is at least
    # sqrt(r^2 + K^2) away, K being the probe's distance to the center
    rng = np.random.default_rng(53)
    for _ in range(25):
        pts = rng.normal(size=(int(rng.integers(2, 13)), 3))
        b = exact_meb_oracle(pts)
        for _ in range(6):
            p = rng.normal(size=3) * rng.uniform(0.0, 5.0)
            K = np.linalg.norm(p - b.center)
            far = np.sqrt(((pts - p) ** 2).sum(axis=1).max())
            assert far >= np.sqrt(b.radius**2 + K**2) - 1e-9


def test_deterministic_in_order():
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(7, 2))
    assert np.array_equal(approx_meb_center(pts, 9), approx_meb_center(pts, 9))
    perm = pts[::-1].copy()
    # a different input order legitimately changes the start point
    c1, c2 = approx_meb_center(pts, 1), approx_meb_center(perm, 1)
    assert np.array_equal(c1, pts[0]) and np.array_equal(c2, perm[0])


def test_enclosing_radius():
    pts = np.array([[0.0, 0.0], [3.0, 4.0]])
    assert enclosing_radius(pts, [0.0, 0.0]) == pytest.approx(5.0)
    assert enclosing_radius(np.array([[2.0, 2.0]]), [2.0, 2.0]) == 0.0
    rng = np.random.default_rng(8)
    X = rng.normal(size=(30, 4))
    c = rng.normal(size=4)
    brute = max(float(np.linalg.norm(x - c)) for x in X)
    assert enclosing_radius(X, c) == pytest.approx(brute, rel=1e-12)


def test_iters_validation():
    with pytest.raises(ValueError):
        approx_meb_center(np.zeros((2, 2)), 0)
    with pytest.raises(ValueError):
        meb_iterates(np.zeros((2, 2)), 0)
    with pytest.raises(EmptySubsetError):
        approx_meb_center(np.zeros((0, 2)), 1)
