import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from isoembed.clark import AtomicMeasure, clark_measure
from isoembed.errors import RequiresZeroAtOrigin
from isoembed.model_space import (
    MONOMIAL,
    CAUCHY,
    e_space_functions,
    e_space_matrix,
    gram_lebesgue,
    gram_lebesgue_adaptive,
    gram_measure,
    model_basis,
    verify_isometry,
)
from isoembed.rational import BlaschkeProduct, circle_grid
from isoembed.samplers import disk_points, random_fbp, unimodular

Z = BlaschkeProduct([0.0])
Z2 = BlaschkeProduct([(0.0, 2)])
seeds = st.integers(0, 2**32 - 1)


def test_basis_examples():
    t = np.array([0.3, -0.2j])
    assert np.allclose(model_basis(Z).eval(t), [[1, 1]])
    assert np.allclose(model_basis(Z2).eval(t), [np.ones(2), t])
    b = BlaschkeProduct([0.5, 0.0])
    assert np.allclose(model_basis(b).eval(t), [1 / (1 - 0.5 * t), t / (1 - 0.5 * t)])


def test_paper_basis_needs_zero_at_origin():
    with pytest.raises(RequiresZeroAtOrigin):
        model_basis(BlaschkeProduct([0.5]), CAUCHY)
    assert model_basis(BlaschkeProduct([(0.5, 2), (0.0, 2)]), CAUCHY).dim == 4


def test_gram_lebesgue_examples():
    assert np.allclose(gram_lebesgue(model_basis(Z)), [[1]])
    assert np.allclose(gram_lebesgue(model_basis(Z2)), np.eye(2))
    g = gram_lebesgue(model_basis(BlaschkeProduct([0.5, 0.0]), CAUCHY))
    # basis {1/(1 - z/2), 1}
    assert g[0, 0] == pytest.approx(4 / 3, abs=1e-13) and g[1, 1] == pytest.approx(1)


def test_gram_lebesgue_identity_for_powers_of_z():
    for n in range(1, 9):
        assert np.allclose(gram_lebesgue(model_basis(BlaschkeProduct([(0.0, n)]))), np.eye(n), atol=1e-14)


def test_gram_matches_reproducing_kernel_closed_form():
    zs = np.array([0.5, -0.3 + 0.6j, 0.85j])
    basis = model_basis(BlaschkeProduct(list(zs) + [0.0]), CAUCHY)
    g, n_pts = gram_lebesgue_adaptive(basis)
    kernel = 1.0 / (1.0 - np.conj(zs)[:, None] * zs[None, :])  # <k_j, k_k> = k_j(z_k)
    assert np.max(np.abs(g[:3, :3] - kernel)) < 1e-12
    assert n_pts >= 512


def test_gram_measure_examples():
    assert np.allclose(gram_measure(model_basis(Z), AtomicMeasure([1], [1])), [[1]])
    assert np.allclose(gram_measure(model_basis(Z2), AtomicMeasure([1, -1], [0.5, 0.5])), np.eye(2))
    assert np.allclose(gram_measure(model_basis(Z), AtomicMeasure([1j], [2])), [[2]])


def test_verify_examples():
    cert = verify_isometry(Z, AtomicMeasure([1], [1]))
    assert cert.max_deviation < 1e-12 and cert.verdict
    cert = verify_isometry(Z, AtomicMeasure([1], [0.9]))
    assert not cert.verdict and cert.max_deviation == pytest.approx(0.1)
    assert verify_isometry(Z2, clark_measure(Z2, 1j)).verdict


def test_certificate_json():
    out = verify_isometry(Z2, clark_measure(Z2, 1)).to_json()
    assert out["verdict"] and len(out["gram_sigma"]) == 2 and len(out["gram_sigma"][0][0]) == 2


@given(seeds)
def test_clark_measures_verify(seed):
    rng = np.random.default_rng(seed)
    b = random_fbp(rng, int(rng.integers(1, 7)))
    for alpha in np.exp(2j * np.pi * np.arange(16) / 16 + 1j * rng.random()):
        assert verify_isometry(b, clark_measure(b, alpha), 1e-8).verdict


@given(seeds)
def test_verdict_is_basis_independent(seed):
    rng = np.random.default_rng(seed)
    b = BlaschkeProduct(list(disk_points(rng, int(rng.integers(0, 4)))) + [(0.0, int(rng.integers(1, 3)))])
    good = clark_measure(b, unimodular(rng))
    for sigma in (good, good.scaled(0.97)):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            cert = verify_isometry(b, sigma, cross_check=True)
        other = verify_isometry(b, sigma, kind=CAUCHY)
        assert cert.verdict == other.verdict and cert.basis_kind == MONOMIAL


@given(seeds)
def test_too_few_atoms_fail(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    b = random_fbp(rng, n)
    sigma = AtomicMeasure(unimodular(rng, n - 1), rng.uniform(0.1, 1.0, n - 1))
    cert = verify_isometry(b, sigma)
    assert not cert.verdict
    assert np.linalg.matrix_rank(cert.gram_sigma, 1e-10) < n


def test_e_space_examples():
    assert len(e_space_functions(Z)) == 1
    t = np.exp(1j * np.array([0.2, 1.0, 2.5]))
    assert np.allclose(e_space_matrix(Z2, t), [t.real, t.imag, np.ones(3)])
    assert e_space_matrix(BlaschkeProduct([0.5, 0.0]), t).shape == (3, 3)
    with pytest.raises(RequiresZeroAtOrigin):
        e_space_functions(BlaschkeProduct([0.5]))


@given(seeds)
def test_products_lie_in_e(seed):
    rng = np.random.default_rng(seed)
    zs = [(complex(z), int(rng.integers(1, 3))) for z in disk_points(rng, int(rng.integers(0, 3)), 0.8)]
    b = BlaschkeProduct(zs + [(0.0, int(rng.integers(1, 3)))])
    t = circle_grid(512)
    e = e_space_matrix(b, t).T
    assert e.shape[1] == 2 * b.degree - 1
    f = model_basis(b).eval(t)
    for i in range(b.degree):
        for j in range(b.degree):
            prod = f[i] * np.conj(f[j])
            for part in (prod.real, prod.imag):
                coef, *_ = np.linalg.lstsq(e, part, rcond=None)
                assert np.max(np.abs(e @ coef - part)) < 1e-10
