"""Nevanlinna-Pick data: Pick matrices, recovery of Blaschke products from
interior samples, and Blaschke interpolation of unimodular boundary data.

Both interpolation problems couple the unknown polynomial with its
reflection, so the linear systems are solved in real coordinates; kernels
are read off the SVD with a relative cutoff of ``RANK_TOL``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DuplicateNodes,
    InputError,
    InterpolationFailure,
    NotUnique,
    ValidationFailure,
)
from .rational import BlaschkeProduct, Polynomial, RationalSchur

RANK_TOL = 1e-9
NODE_SEPARATION = 1e-10
INTERP_TOL = 1e-8


def _nodes(z, interior: bool) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128).ravel()
    if interior and np.any(np.abs(z) >= 1):
        raise InputError("interior nodes must lie in the open unit disk")
    if not interior and np.any(np.abs(np.abs(z) - 1.0) > 1e-12):
        raise InputError("boundary nodes must be unimodular")
    if z.size > 1:
        d = np.abs(z[:, None] - z[None, :])
        np.fill_diagonal(d, np.inf)
        if d.min() <= NODE_SEPARATION:
            raise DuplicateNodes("interpolation nodes are not distinct")
    return z


def pick_matrix(nodes, values) -> np.ndarray:
    """P_jk = (1 - conj(w_j) w_k)/(1 - conj(z_j) z_k)."""
    z = _nodes(nodes, interior=True)
    w = np.asarray(values, dtype=np.complex128).ravel()
    if w.shape != z.shape:
        raise InputError("nodes and values differ in length")
    p = (1.0 - np.conj(w)[:, None] * w[None, :]) / (1.0 - np.conj(z)[:, None] * z[None, :])
    return 0.5 * (p + p.conj().T)


def numerical_rank(p: np.ndarray, tol: float = RANK_TOL) -> int:
    """Singular values above tol * max(sigma_max, 1) count.

    The floor of 1 keeps a numerically zero Pick matrix (unimodular data)
    at rank 0 instead of rescaling its rounding noise.
    """
    sv = np.linalg.svd(np.atleast_2d(p), compute_uv=False)
    if sv.size == 0:
        return 0
    return int(np.sum(sv > tol * max(sv[0], 1.0)))


@dataclass(frozen=True)
class Solvability:
    solvable: bool
    margin: float  # smallest eigenvalue


@dataclass(frozen=True)
class Uniqueness:
    unique: bool
    rank: int
    scaled_det: float  # |det P| / ||P||^n


def solvability(p: np.ndarray, tol: float = RANK_TOL) -> Solvability:
    eig = np.linalg.eigvalsh(p)
    norm = float(np.max(np.abs(eig))) if eig.size else 0.0
    return Solvability(bool(eig[0] >= -tol * max(norm, 1.0)), float(eig[0]))


def uniqueness(p: np.ndarray, tol: float = RANK_TOL) -> Uniqueness:
    n = p.shape[0]
    norm = float(np.linalg.norm(p, 2))
    rank = numerical_rank(p, tol)
    det = abs(np.linalg.det(p)) / norm ** n if norm > 0 else 0.0
    return Uniqueness(rank < n, rank, float(det))


def _kernel(m: np.ndarray, tol: float = RANK_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Null-space basis (columns, smallest singular value first) and singular values."""
    _, sv, vh = np.linalg.svd(m)
    full = np.zeros(vh.shape[0])
    full[: sv.size] = sv
    cut = tol * (sv[0] if sv.size else 1.0)
    idx = [i for i in range(vh.shape[0]) if full[i] <= cut]
    idx.sort(key=lambda i: full[i])
    return vh[idx].T, full


def _realify(m: np.ndarray) -> np.ndarray:
    return np.vstack([m.real, m.imag])


def _fbp_from_reflected(a: np.ndarray, tol_root: float = 1e-10) -> BlaschkeProduct | None:
    """A/A* as a Blaschke product, if A has exact degree and roots inside the disk."""
    if abs(a[-1]) <= 1e-10 * np.max(np.abs(a)):
        return None
    poly = Polynomial(a)
    roots = poly.roots()
    if roots.size and np.max(np.abs(roots)) >= 1.0 - tol_root:
        return None
    trial = BlaschkeProduct(list(roots), 1.0)
    ref = poly.reversed(a.size - 1)
    g = complex(poly(1.0) / ref(1.0)) / complex(trial.eval(1.0 + 0j))
    return BlaschkeProduct(list(roots), g / abs(g))


def recover_fbp(nodes, values, max_degree: int | None = None) -> BlaschkeProduct:
    """The unique Blaschke product matching interior data of deficient rank.

    With m the numerical rank of the Pick matrix, solve
    w_j A*(z_j) - A(z_j) = 0 for A of degree m; the result is A/A*.
    """
    z = _nodes(nodes, interior=True)
    w = np.asarray(values, dtype=np.complex128).ravel()
    p = pick_matrix(z, w)
    if not solvability(p).solvable:
        raise InputError("Pick matrix is not positive semidefinite; no Schur interpolant")
    m = numerical_rank(p)
    if m == z.size:
        raise NotUnique("Pick matrix has full rank; the interpolant is not unique")
    if max_degree is not None and m > max_degree:
        raise InputError(f"Pick rank {m} exceeds max_degree {max_degree}")
    k = np.arange(m + 1)
    v = z[:, None] ** k[None, :]
    u = z[:, None] ** (m - k)[None, :]
    wu = w[:, None] * u
    system = _realify(np.hstack([wu - v, -1j * (wu + v)]))
    _, sv, vh = np.linalg.svd(system)
    x = vh[-1]
    a = x[: m + 1] + 1j * x[m + 1:]
    b = _fbp_from_reflected(a)
    if b is None:
        raise ValidationFailure("kernel polynomial has roots on or outside the circle")
    resid = float(np.max(np.abs(b.eval(z) - w)))
    if resid > INTERP_TOL:
        raise ValidationFailure(f"recovered product misses the data by {resid:.3e}")
    return b


# -- boundary interpolation ----------------------------------------------------

def _boundary_system(t: np.ndarray, w: np.ndarray, q: int) -> np.ndarray:
    # A(t) - u conj(A(t)) = 0 with u = w t^q, A = V (x + i y)
    k = np.arange(q + 1)
    v = t[:, None] ** k[None, :]
    u = (w * t ** q)[:, None]
    return _realify(np.hstack([v - u * np.conj(v), 1j * (v + u * np.conj(v))]))


def _check(b: BlaschkeProduct | None, t, w) -> bool:
    return b is not None and float(np.max(np.abs(b.eval(t) - w))) < INTERP_TOL


def _herglotz_candidate(t, w, rng, tries: int) -> BlaschkeProduct | None:
    """Place p - 1 poles of (c + omega)/(c - omega) in all but one gap between
    the nodes and solve the square system for beta and the pole masses; accept
    the first configuration with positive masses."""
    p = t.size
    grid = np.exp(2j * np.pi * np.arange(720) / 720)
    c = grid[np.argmax(np.min(np.abs(grid[:, None] - w[None, :]), axis=1))]
    h = ((c + w) / (c - w)).imag
    theta = np.mod(np.angle(t), 2 * np.pi)
    order = np.argsort(theta)
    th, hs = theta[order], h[order]
    gaps = [(th[i], th[i + 1] if i + 1 < p else th[0] + 2 * np.pi) for i in range(p)]
    for attempt in range(tries):
        skip = attempt % p
        phis = np.array([lo + (hi - lo) * rng.uniform(0.02, 0.98)
                         for i, (lo, hi) in enumerate(gaps) if i != skip])
        mat = np.hstack([np.ones((p, 1)), 1.0 / np.tan((th[:, None] - phis[None, :]) / 2.0)])
        try:
            sol = np.linalg.solve(mat, hs)
        except np.linalg.LinAlgError:
            continue
        beta, mu = sol[0], sol[1:]
        if np.any(mu <= 0):
            continue
        zeta = np.exp(1j * phis)
        # omega = c (G - 1)/(G + 1), G = i beta + sum mu (zeta + z)/(zeta - z) = N/D
        d = Polynomial.from_roots(zeta, lead=(-1.0) ** zeta.size)
        nh = Polynomial()
        for j in range(zeta.size):
            nh = nh + Polynomial.from_roots(np.delete(zeta, j), lead=(-1.0) ** (zeta.size - 1)) \
                * Polynomial([zeta[j], 1.0]) * mu[j]
        ibd = d * (1j * beta)
        omega = RationalSchur((ibd + nh - d) * c, ibd + nh + d)
        try:
            b = omega.to_blaschke()
        except InputError:
            continue
        if _check(b, t, w):
            return b
    return None


def boundary_fbp_interpolation(nodes, values, seed: int = 0, random_tries: int = 200,
                               herglotz_tries: int = 2000) -> BlaschkeProduct:
    """A Blaschke product of degree <= p - 1 with omega(t_j) = w_j.

    Ansatz degrees q = 0, 1, ..., p - 1 are tried in turn. For each, the real
    kernel of A(t_j) = w_j t_j^q conj(A(t_j)) is scanned: basis directions in
    singular-value order, then seeded random combinations. A direction is
    accepted when A has exact degree q with all roots in the open disk.
    If the scan fails, a pole-placement search on the Cayley transform is
    run before giving up.
    """
    t = _nodes(nodes, interior=False)
    w = np.asarray(values, dtype=np.complex128).ravel()
    if w.shape != t.shape:
        raise InputError("nodes and values differ in length")
    if np.any(np.abs(np.abs(w) - 1.0) > 1e-12):
        raise InputError("boundary values must be unimodular")
    p = t.size
    if p == 0:
        raise InputError("no interpolation data")
    rng = np.random.default_rng(seed)
    kernel_dims = {}
    for q in range(p):
        ker, _ = _kernel(_boundary_system(t, w, q))
        kernel_dims[q] = ker.shape[1]
        if ker.shape[1] == 0:
            continue
        candidates = [ker[:, i] for i in range(ker.shape[1])]
        if ker.shape[1] > 1:
            candidates += [ker @ rng.standard_normal(ker.shape[1]) for _ in range(random_tries)]
        for x in candidates:
            b = _fbp_from_reflected(x[: q + 1] + 1j * x[q + 1:])
            if _check(b, t, w):
                return b
    if p >= 2:
        b = _herglotz_candidate(t, w, rng, herglotz_tries)
        if b is not None:
            return b
    raise InterpolationFailure("no kernel direction produced a valid Blaschke interpolant",
                               {"kernel_dims": kernel_dims, "nodes": p})


@dataclass(frozen=True)
class PickSystem:
    nodes: np.ndarray
    values: np.ndarray
    boundary: bool = False

    @property
    def matrix(self) -> np.ndarray | None:
        return None if self.boundary else pick_matrix(self.nodes, self.values)

    @classmethod
    def from_json(cls, data: dict) -> "PickSystem":
        from .rational import complex_from_json
        try:
            nodes = np.array([complex_from_json(v) for v in data["nodes"]])
            values = np.array([complex_from_json(v) for v in data["values"]])
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed Pick system: {exc}") from exc
        return cls(nodes, values, bool(data.get("boundary", False)))

    def solve(self) -> BlaschkeProduct:
        if self.boundary:
            return boundary_fbp_interpolation(self.nodes, self.values)
        return recover_fbp(self.nodes, self.values)


def sample(b: BlaschkeProduct, nodes: Sequence[complex]) -> np.ndarray:
    return np.asarray(b.eval(np.asarray(nodes, dtype=np.complex128)))
