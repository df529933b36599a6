"""Seeded generators for randomized experiments and tests."""
from __future__ import annotations

import numpy as np

from .rational import BlaschkeProduct, Polynomial, RationalSchur, circle_grid


def disk_points(rng: np.random.Generator, k: int, radius: float = 0.9) -> np.ndarray:
    """k points uniform (by area) in the disk |z| <= radius."""
    r = radius * np.sqrt(rng.random(k))
    return r * np.exp(2j * np.pi * rng.random(k))


def unimodular(rng: np.random.Generator, k: int | None = None):
    z = np.exp(2j * np.pi * rng.random(k))
    return complex(z) if k is None else z


def random_fbp(rng: np.random.Generator, degree: int, radius: float = 0.9) -> BlaschkeProduct:
    return BlaschkeProduct(list(disk_points(rng, degree, radius)), unimodular(rng))


def random_schur(rng: np.random.Generator, max_degree: int = 3) -> tuple[RationalSchur, bool]:
    """A random rational Schur function and whether it is inner.

    Draws from five families: Blaschke products, contracted Blaschke
    products, normalized polynomials, sub-unimodular and unimodular constants.
    """
    kind = int(rng.integers(0, 5))
    if kind == 0:
        return random_fbp(rng, int(rng.integers(0, max_degree + 1))).to_rational(), True
    if kind == 1:
        r = random_fbp(rng, int(rng.integers(0, max_degree))).to_rational()
        return RationalSchur(r.num * rng.uniform(0.1, 0.99), r.den), False
    if kind == 2:
        p = Polynomial(rng.standard_normal(max_degree) + 1j * rng.standard_normal(max_degree))
        peak = float(np.max(np.abs(p(circle_grid(4096)))))
        return RationalSchur(p * (rng.uniform(0.5, 1.0) / peak), Polynomial([1.0])), False
    if kind == 3:
        return RationalSchur.constant(rng.uniform(0.0, 1.0) * unimodular(rng)), False
    return RationalSchur.constant(unimodular(rng)), True
