"""Model spaces K_B, Gram matrices and the isometry check.

K_B is spanned by z^i / prod(1 - conj(z_j) z)^r_j, i < n. When B(0) = 0 the
Cauchy-kernel basis (powers of 1/(1 - conj(z_k) z), monomials for the zero at
the origin, and the constant) is available as well; the real system attached
to it spans every product f conj(g) with f, g in K_B.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .clark import AtomicMeasure
from .errors import QuadratureNonConvergence, RequiresZeroAtOrigin
from .rational import BlaschkeProduct, Polynomial, circle_grid

MONOMIAL = "monomial_over_denominator"
CAUCHY = "paper_basis"  # interface tag of the Cauchy-kernel basis
QUAD_TOL = 1e-13
QUAD_MAX = 2 ** 20
COND_WARN = 1e12


@dataclass(frozen=True)
class ModelBasis:
    functions: tuple[tuple[Polynomial, Polynomial], ...]
    kind: str

    @property
    def dim(self) -> int:
        return len(self.functions)

    def eval(self, z) -> np.ndarray:
        """Basis values, shape (dim, len(z))."""
        z = np.asarray(z, dtype=np.complex128).ravel()
        return np.array([num(z) / den(z) for num, den in self.functions]).reshape(self.dim, z.size)


def _cauchy_power(zk: complex, j: int) -> Polynomial:
    den = Polynomial([1.0])
    lin = Polynomial([1.0, -np.conj(zk)])
    for _ in range(j):
        den = den * lin
    return den


def model_basis(b: BlaschkeProduct, kind: str = MONOMIAL) -> ModelBasis:
    n = b.degree
    if n < 1:
        raise ValueError("model space of a constant is trivial")
    if kind == MONOMIAL:
        den = Polynomial([1.0])
        for zk, rk in zip(b.zeros, b.mults):
            if zk != 0:
                den = den * _cauchy_power(complex(zk), int(rk))
        funcs = tuple((Polynomial([0.0] * i + [1.0]), den) for i in range(n))
        return ModelBasis(funcs, MONOMIAL)
    if kind == CAUCHY:
        if not np.any(b.zeros == 0):
            raise RequiresZeroAtOrigin("the Cauchy-kernel basis needs B(0) = 0")
        one = Polynomial([1.0])
        funcs = []
        for zk, rk in zip(b.zeros, b.mults):
            if zk != 0:
                funcs += [(one, _cauchy_power(complex(zk), j)) for j in range(1, int(rk) + 1)]
        r0 = int(b.mults[b.zeros == 0][0])
        funcs += [(Polynomial([0.0] * j + [1.0]), one) for j in range(1, r0)]
        funcs.append((one, one))
        return ModelBasis(tuple(funcs), CAUCHY)
    raise ValueError(f"unknown basis kind {kind!r}")


def _gram_from_samples(f: np.ndarray, w) -> np.ndarray:
    g = (f * w) @ f.conj().T
    return 0.5 * (g + g.conj().T)


def gram_lebesgue_adaptive(basis: ModelBasis, start: int = 256, tol: float = QUAD_TOL,
                           max_points: int | None = None) -> tuple[np.ndarray, int]:
    """Trapezoid rule on the circle, doubling until successive Grams agree.

    Agreement is relative to the largest Gram entry.
    """
    max_points = QUAD_MAX if max_points is None else max_points
    n_pts = start
    prev = _gram_from_samples(basis.eval(circle_grid(n_pts)), 1.0 / n_pts)
    while True:
        n_pts *= 2
        if n_pts > max_points:
            raise QuadratureNonConvergence(f"Gram quadrature did not settle by {max_points} points")
        cur = _gram_from_samples(basis.eval(circle_grid(n_pts)), 1.0 / n_pts)
        if np.max(np.abs(cur - prev)) < tol * max(1.0, np.max(np.abs(cur))):
            return cur, n_pts
        prev = cur


def gram_lebesgue(basis: ModelBasis, start: int = 256) -> np.ndarray:
    return gram_lebesgue_adaptive(basis, start)[0]


def gram_measure(basis: ModelBasis, sigma: AtomicMeasure) -> np.ndarray:
    if sigma.size == 0:
        return np.zeros((basis.dim, basis.dim), dtype=np.complex128)
    return _gram_from_samples(basis.eval(sigma.t), sigma.s)


def _matrix_json(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


@dataclass(frozen=True)
class IsometryCertificate:
    """Gram comparison of sigma against Lebesgue measure on K_B.

    Both Grams are stored after the congruence D G D with
    D = diag(G_lebesgue)^(-1/2), so that the Lebesgue Gram has unit diagonal
    and ``max_deviation`` is comparable across spaces.
    """

    max_deviation: float
    gram_lebesgue: np.ndarray
    gram_sigma: np.ndarray
    quadrature_points: int
    tol: float
    basis_kind: str = MONOMIAL
    condition: float = 1.0
    warnings: tuple[str, ...] = field(default=())

    @property
    def verdict(self) -> bool:
        return self.max_deviation <= self.tol

    def to_json(self) -> dict:
        return {
            "max_deviation": self.max_deviation,
            "verdict": self.verdict,
            "tol": self.tol,
            "quadrature_points": self.quadrature_points,
            "basis_kind": self.basis_kind,
            "condition": self.condition,
            "warnings": list(self.warnings),
            "gram_lebesgue": _matrix_json(self.gram_lebesgue),
            "gram_sigma": _matrix_json(self.gram_sigma),
        }


def _certificate(b, sigma, tol, kind, quadrature_start):
    basis = model_basis(b, kind)
    gm, n_pts = gram_lebesgue_adaptive(basis, quadrature_start)
    gs = gram_measure(basis, sigma)
    d = 1.0 / np.sqrt(np.real(np.diag(gm)))
    gm = gm * np.outer(d, d)
    gs = gs * np.outer(d, d)
    cond = float(np.linalg.cond(gm))
    notes = []
    if cond > COND_WARN:
        notes.append(f"Lebesgue Gram condition number {cond:.3e}")
    dev = float(np.max(np.abs(gs - gm)))
    return IsometryCertificate(dev, gm, gs, n_pts, tol, kind, cond, tuple(notes))


def verify_isometry(b: BlaschkeProduct, sigma: AtomicMeasure, tol: float = 1e-8,
                    kind: str = MONOMIAL, quadrature_start: int = 256,
                    cross_check: bool = False) -> IsometryCertificate:
    """Compare <f, g>_sigma with <f, g>_m over a basis of K_B.

    With ``cross_check`` and B(0) = 0 the verdict is recomputed in the other
    basis; a disagreement is recorded in the certificate warnings.
    """
    cert = _certificate(b, sigma, tol, kind, quadrature_start)
    if cross_check and np.any(b.zeros == 0):
        other = CAUCHY if kind == MONOMIAL else MONOMIAL
        alt = _certificate(b, sigma, tol, other, quadrature_start)
        if alt.verdict != cert.verdict:
            msg = f"verdict differs in {other} basis (deviation {alt.max_deviation:.3e})"
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            cert = IsometryCertificate(cert.max_deviation, cert.gram_lebesgue, cert.gram_sigma,
                                       cert.quadrature_points, tol, kind, cert.condition,
                                       cert.warnings + (msg,))
    return cert


# -- the real span E -------------------------------------------------------------

def e_space_matrix(b: BlaschkeProduct, t) -> np.ndarray:
    """Values of the 2n - 1 real functions spanning E, shape (2n - 1, len(t)).

    Rows: Re and Im of phi_k^j (phi_k = 1/(1 - conj(z_k) t)) for each nonzero
    zero, Re and Im of t^j (j < multiplicity of the zero at 0), then 1.
    """
    if not np.any(b.zeros == 0):
        raise RequiresZeroAtOrigin("E is built for B(0) = 0; apply the Mobius reduction first")
    t = np.asarray(t, dtype=np.complex128).ravel()
    rows = []
    for zk, rk in zip(b.zeros, b.mults):
        if zk == 0:
            continue
        phi = 1.0 / (1.0 - np.conj(zk) * t)
        p = np.ones_like(t)
        for _ in range(int(rk)):
            p = p * phi
            rows += [p.real, p.imag]
    r0 = int(b.mults[b.zeros == 0][0])
    for j in range(1, r0):
        tj = t ** j
        rows += [tj.real, tj.imag]
    rows.append(np.ones(t.size))
    return np.array(rows)


def e_space_functions(b: BlaschkeProduct) -> list[Callable[[np.ndarray], np.ndarray]]:
    count = 2 * b.degree - 1
    e_space_matrix(b, np.ones(1))  # validates B(0) = 0
    return [(lambda t, i=i: e_space_matrix(b, np.atleast_1d(t))[i]) for i in range(count)]
