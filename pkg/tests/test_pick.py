import numpy as np
import pytest
from hypothesis import given, strategies as st

from isoembed.clark import measure_from_schur
from isoembed.errors import DuplicateNodes, InputError, NotUnique
from isoembed.pick import (
    PickSystem,
    boundary_fbp_interpolation,
    numerical_rank,
    pick_matrix,
    recover_fbp,
    sample,
    solvability,
    uniqueness,
)
from isoembed.rational import BlaschkeProduct
from isoembed.samplers import disk_points, random_fbp, unimodular

seeds = st.integers(0, 2**32 - 1)


def test_pick_matrix_examples():
    assert np.allclose(pick_matrix([0], [0]), [[1]])
    assert np.allclose(pick_matrix([0, 0.5], [0, 0.5]), np.ones((2, 2)))
    assert np.allclose(pick_matrix([0], [0.5]), [[0.75]])
    with pytest.raises(DuplicateNodes):
        pick_matrix([0.1, 0.1], [0, 0])


def test_solvability_examples():
    assert solvability(np.ones((2, 2))).solvable
    assert solvability(np.array([[0.75]])).solvable
    p = pick_matrix([0, 0.5], [0, 0.9])
    assert np.allclose(p, [[1, 1], [1, 0.19 / 0.75]])
    s = solvability(p)
    assert not s.solvable and s.margin < 0


def test_uniqueness_examples():
    u = uniqueness(np.ones((2, 2)))
    assert u.unique and u.rank == 1
    assert not uniqueness(pick_matrix([0], [0])).unique


def test_recover_examples():
    b = recover_fbp([0, 0.5, -0.5], [0, 0.5, -0.5])
    assert b.degree == 1 and np.allclose(b.eval(np.array([0.3j, -0.7])), [0.3j, -0.7])
    rng = np.random.default_rng(0)
    b = recover_fbp(disk_points(rng, 3), [1j] * 3)
    assert b.degree == 0 and b.gamma == pytest.approx(1j)
    src = random_fbp(rng, 2)
    nodes = disk_points(rng, 4)
    rec = recover_fbp(nodes, sample(src, nodes))
    fresh = disk_points(rng, 20)
    assert np.max(np.abs(rec.eval(fresh) - src.eval(fresh))) < 1e-8


def test_recover_errors():
    with pytest.raises(NotUnique):
        recover_fbp([0.0, 0.3], [0.1, 0.2])
    with pytest.raises(InputError):
        recover_fbp([0, 0.5], [0, 0.9])


@given(seeds)
def test_rank_equals_degree(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(0, 6))
    n = int(rng.integers(m + 1, m + 4))
    b = random_fbp(rng, m)
    nodes = disk_points(rng, n, 0.85)
    p = pick_matrix(nodes, b.eval(nodes))
    assert numerical_rank(p) == m
    assert solvability(p).solvable and uniqueness(p).unique
    assert np.max(np.abs(p - p.conj().T)) <= 1e-13


@given(seeds)
def test_random_schur_data_is_solvable_and_full_rank(seed):
    rng = np.random.default_rng(seed)
    nodes = disk_points(rng, 4, 0.8)
    values = 0.5 * disk_points(rng, 1, 1.0)[0] * nodes + 0.3 * nodes ** 2
    p = pick_matrix(nodes, values)
    assert solvability(p).solvable
    assert not uniqueness(p).unique


def test_boundary_examples():
    b = boundary_fbp_interpolation([1], [1])
    assert b.degree == 0 and b.gamma == pytest.approx(1)
    b = boundary_fbp_interpolation([1, -1], [1, 1])
    assert b.degree == 0
    b = boundary_fbp_interpolation([1, -1], [1, -1])
    assert b.degree == 1 and np.allclose(b.eval(np.array([1, -1])), [1, -1])


@given(seeds)
def test_boundary_interpolation(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 7))
    t = unimodular(rng, p)
    w = unimodular(rng, p)
    b = boundary_fbp_interpolation(t, w, seed=seed % 1000)
    assert b.degree <= p - 1
    assert np.max(np.abs(b.eval(t) - w)) < 1e-8


@given(seeds)
def test_prescribed_atoms(seed):
    # a measure in S_f(B) through p chosen boundary points with at most n + p - 1 atoms
    rng = np.random.default_rng(seed)
    b = random_fbp(rng, int(rng.integers(1, 4)))
    p = int(rng.integers(1, 5))
    t = unimodular(rng, p)
    omega = boundary_fbp_interpolation(t, 1.0 / b.eval(t))
    sigma = measure_from_schur(b, omega).measure
    assert sigma.size <= b.degree + p - 1
    for tj in t:
        assert sigma.mass_at(tj) > 0


def test_pick_system_json():
    sys = PickSystem.from_json({"nodes": [[0, 0], [0.5, 0]], "values": [[0, 0], [0.5, 0]]})
    assert np.allclose(sys.matrix, np.ones((2, 2)))
    assert sys.solve().degree == 1
    with pytest.raises(InputError):
        PickSystem.from_json({"nodes": []})
    assert PickSystem(np.array([1]), np.array([1]), boundary=True).matrix is None
