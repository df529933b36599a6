"""Polynomials, finite Blaschke products and rational Schur functions.

Blaschke products are stored in zero form (distinct zeros, multiplicities and a
unimodular front constant) and are expanded to coefficient form only on
request. A zero at the origin contributes the factor ``z``; any other zero
``a`` contributes ``(|a|/a) (a - z)/(1 - conj(a) z)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import numpy.polynomial.polynomial as npp

from . import kernels
from .errors import DegreeMismatch, InputError, PoleProximity

UNIMODULAR_TOL = 1e-12
SCHUR_TOL = 1e-10
POLE_TOL = 1e-13
SCHUR_GRID = 4096
# zeros closer than this are merged into one zero with added multiplicity
MERGE_TOL = 1e-12


def circle_grid(n: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(n) / n)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


# ----------------------------------------------------------------------------
# Polynomial
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Polynomial:
    """Complex polynomial with ascending coefficients.

    The stored form is normalized: trailing zeros are stripped and the zero
    polynomial has no coefficients.
    """

    coeffs: np.ndarray

    def __init__(self, coeffs: Iterable[complex] = ()):
        c = np.atleast_1d(np.asarray(list(coeffs) if not isinstance(coeffs, np.ndarray) else coeffs,
                                     dtype=np.complex128)).ravel()
        k = c.size
        while k > 0 and c[k - 1] == 0:
            k -= 1
        object.__setattr__(self, "coeffs", _frozen(c[:k]))

    @classmethod
    def from_roots(cls, roots: Sequence[complex], lead: complex = 1.0) -> "Polynomial":
        if len(roots) == 0:
            return cls([lead])
        return cls(lead * npp.polyfromroots(np.asarray(roots, dtype=np.complex128)))

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def __call__(self, z):
        if self.is_zero:
            return np.zeros(np.shape(z), dtype=np.complex128) if np.ndim(z) else 0j
        return npp.polyval(np.asarray(z, dtype=np.complex128), self.coeffs)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npp.polyadd(self._c(), other._c()))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npp.polysub(self._c(), other._c()))

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial()
            return Polynomial(npp.polymul(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * complex(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.coeffs)

    def _c(self) -> np.ndarray:
        return self.coeffs if self.coeffs.size else np.zeros(1, dtype=np.complex128)

    def roots(self) -> np.ndarray:
        if self.degree < 1:
            return np.zeros(0, dtype=np.complex128)
        return np.roots(self.coeffs[::-1]).astype(np.complex128)

    def reversed(self, m: int | None = None) -> "Polynomial":
        return reverse_polynomial(self, self.degree if m is None else m)

    def deflate(self, root: complex) -> tuple["Polynomial", complex]:
        """Divide by (z - root); returns (quotient, remainder).

        Runs from the leading coefficient for roots in the closed unit disk
        and from the constant term otherwise, so that the recursion
        multiplier never exceeds one in modulus.
        """
        a = self.coeffs
        n = a.size - 1
        if n < 1:
            return Polynomial(), complex(a[0]) if a.size else 0j
        b = np.empty(n, dtype=np.complex128)
        if abs(root) <= 1.0:
            b[n - 1] = a[n]
            for i in range(n - 1, 0, -1):
                b[i - 1] = a[i] + root * b[i]
            rem = a[0] + root * b[0]
        else:
            b[0] = -a[0] / root
            for i in range(1, n):
                b[i] = (b[i - 1] - a[i]) / root
            rem = a[n] - b[n - 1]
        return Polynomial(b), complex(rem)

    def allclose(self, other: "Polynomial", tol: float = 1e-12) -> bool:
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n, complex)
        b = np.zeros(n, complex)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        return bool(np.all(np.abs(a - b) <= tol))

    def __eq__(self, other) -> bool:
        return isinstance(other, Polynomial) and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({np.round(self.coeffs, 12).tolist()})"

    def to_json(self) -> list:
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        return cls([complex_from_json(c) for c in data])


def reverse_polynomial(q: Polynomial, m: int) -> Polynomial:
    """Q*(z) = z^m conj(Q(1/conj z)): conjugated coefficients in reverse order."""
    if m < q.degree:
        raise DegreeMismatch(f"reversal degree {m} below polynomial degree {q.degree}")
    c = np.zeros(m + 1, dtype=np.complex128)
    c[: q.coeffs.size] = q.coeffs
    return Polynomial(np.conj(c[::-1]))


def complex_from_json(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise InputError(f"expected [re, im] pair, got {v!r}")


def complex_to_json(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


# ----------------------------------------------------------------------------
# Blaschke products
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BlaschkeProduct:
    zeros: np.ndarray
    mults: np.ndarray
    gamma: complex = 1.0 + 0j

    def __init__(self, zeros: Sequence = (), gamma: complex = 1.0):
        """``zeros`` holds complex numbers or ``(z, r)`` pairs.

        Repeated zeros are merged; multiplicities add.
        """
        zs: list[complex] = []
        rs: list[int] = []
        for item in zeros:
            if isinstance(item, (tuple, list)):
                z, r = complex(item[0]), int(item[1])
            else:
                z, r = complex(item), 1
            if r < 1:
                raise InputError(f"multiplicity must be positive, got {r}")
            if not abs(z) < 1.0:
                raise InputError(f"zero {z} not in the open unit disk")
            for i, w in enumerate(zs):
                if abs(w - z) <= MERGE_TOL:
                    rs[i] += r
                    break
            else:
                zs.append(z)
                rs.append(r)
        gamma = complex(gamma)
        if abs(abs(gamma) - 1.0) > UNIMODULAR_TOL:
            raise InputError(f"front constant {gamma} is not unimodular")
        gamma /= abs(gamma)
        object.__setattr__(self, "zeros", _frozen(zs))
        m = np.array(rs, dtype=np.int64)
        m.setflags(write=False)
        object.__setattr__(self, "mults", m)
        object.__setattr__(self, "gamma", gamma)

    @classmethod
    def constant(cls, gamma: complex) -> "BlaschkeProduct":
        return cls((), gamma)

    @property
    def degree(self) -> int:
        return int(self.mults.sum())

    @property
    def factor_consts(self) -> np.ndarray:
        z = self.zeros
        out = np.full(z.shape, -1.0 + 0j)
        nz = z != 0
        out[nz] = np.abs(z[nz]) / z[nz]
        return out

    def zero_list(self) -> np.ndarray:
        """Zeros repeated according to multiplicity."""
        return np.repeat(self.zeros, self.mults)

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        z = np.asarray(z, dtype=np.complex128)
        nz = self.zeros[self.zeros != 0]
        if nz.size and z.size:
            poles = 1.0 / np.conj(nz)
            dist = np.abs(z.reshape(-1, 1) - poles.reshape(1, -1))
            if dist.min() < POLE_TOL:
                raise PoleProximity("evaluation point within 1e-13 of a pole")
        out = kernels.fbp_eval(self.zeros, self.mults, self.factor_consts, self.gamma, z)
        return out if out.ndim else complex(out)

    def log_derivative(self, t):
        """t B'(t)/B(t); on the circle this is the positive Poisson sum."""
        t = np.asarray(t, dtype=np.complex128)
        out = kernels.fbp_logderiv(self.zeros, self.mults, t)
        return out if out.ndim else complex(out)

    def poisson_sum(self, t):
        """Sum of r_k (1-|z_k|^2)/|t-z_k|^2 for unimodular t."""
        t = np.asarray(t, dtype=np.complex128)
        out = kernels.fbp_poisson(self.zeros, self.mults, t)
        return out if out.ndim else float(out)

    def phase_offset(self) -> float:
        """arg of gamma * prod(-c_k)^r_k, the constant part of the boundary phase."""
        return float(np.angle(self.gamma * np.prod((-self.factor_consts) ** self.mults)))

    def boundary_phase(self, theta):
        """Continuous argument of B(e^{i theta}), strictly increasing."""
        return self.phase_offset() + kernels.fbp_phase(self.zeros, self.mults, theta)

    def __mul__(self, other: "BlaschkeProduct") -> "BlaschkeProduct":
        return multiply(self, other)

    def to_quotient(self) -> tuple[complex, Polynomial]:
        return to_quotient(self)

    def to_rational(self) -> "RationalSchur":
        g, q = to_quotient(self)
        return RationalSchur(g * q, q.reversed(self.degree))

    def allclose(self, other: "BlaschkeProduct", tol: float = 1e-10, n: int = 64) -> bool:
        if self.degree != other.degree:
            return False
        t = circle_grid(n)
        return bool(np.max(np.abs(self.eval(t) - other.eval(t))) <= tol)

    def __repr__(self) -> str:
        parts = [f"({complex(z):.6g}, {int(r)})" for z, r in zip(self.zeros, self.mults)]
        return f"BlaschkeProduct([{', '.join(parts)}], gamma={self.gamma:.6g})"

    def to_json(self) -> dict:
        return {
            "gamma": complex_to_json(self.gamma),
            "zeros": [{"z": complex_to_json(z), "r": int(r)} for z, r in zip(self.zeros, self.mults)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BlaschkeProduct":
        try:
            zeros = [(complex_from_json(item["z"]), int(item.get("r", 1))) for item in data.get("zeros", [])]
            gamma = complex_from_json(data.get("gamma", [1.0, 0.0]))
        except (KeyError, TypeError, AttributeError) as exc:
            raise InputError(f"malformed Blaschke product: {exc}") from exc
        return cls(zeros, gamma)


def multiply(b1: BlaschkeProduct, b2: BlaschkeProduct) -> BlaschkeProduct:
    zeros = list(zip(b1.zeros, b1.mults)) + list(zip(b2.zeros, b2.mults))
    return BlaschkeProduct(zeros, b1.gamma * b2.gamma)


def to_quotient(b: BlaschkeProduct) -> tuple[complex, Polynomial]:
    """Return (g, Q) with B = g Q / Q*, Q(z) = prod (z_k - z)^r_k, deg Q = n.

    Since (z_k - z)/(z_k z conj - 1) = -(z_k - z)/(1 - conj(z_k) z), the
    constant is g = gamma * prod over nonzero zeros of (-|z_k|/z_k)^r_k.
    """
    roots = b.zero_list()
    q = Polynomial.from_roots(roots, lead=(-1.0) ** b.degree)
    nz = b.zeros != 0
    g = b.gamma * np.prod((-np.abs(b.zeros[nz]) / b.zeros[nz]) ** b.mults[nz])
    return complex(g), q


def mobius(a: complex, z):
    """b_a(z) = (z + a)/(1 + conj(a) z)."""
    return (z + a) / (1.0 + np.conj(a) * z)


def mobius_precompose(b: BlaschkeProduct, a: complex) -> BlaschkeProduct:
    """B o b_a as a Blaschke product; zeros move to (z_k - a)/(1 - conj(a) z_k)."""
    a = complex(a)
    if not abs(a) < 1:
        raise InputError("Mobius parameter must lie in the open disk")
    if a == 0:
        return b
    new = [((z - a) / (1.0 - np.conj(a) * z), r) for z, r in zip(b.zeros, b.mults)]
    trial = BlaschkeProduct(new, 1.0)
    # match the front constant at z = 1, where both sides are unimodular
    g = b.eval(mobius(a, 1.0 + 0j)) / trial.eval(1.0 + 0j)
    return BlaschkeProduct(new, g / abs(g))


# ----------------------------------------------------------------------------
# Rational Schur functions
# ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RationalSchur:
    """num/den with den zero-free on the closed disk and |num/den| <= 1."""

    num: Polynomial
    den: Polynomial

    def __post_init__(self):
        if self.den.is_zero:
            raise InputError("zero denominator")

    @classmethod
    def constant(cls, c: complex) -> "RationalSchur":
        return cls(Polynomial([c]), Polynomial([1.0]))

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        return self.num(z) / self.den(z)

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    def boundary_modulus(self, n: int = SCHUR_GRID) -> np.ndarray:
        return np.abs(self.eval(circle_grid(n)))

    def is_inner(self, tol: float = 1e-9, n: int = SCHUR_GRID) -> bool:
        return bool(np.max(np.abs(self.boundary_modulus(n) - 1.0)) <= tol)

    def to_blaschke(self, tol: float = 1e-9, cluster: float = 1e-5) -> BlaschkeProduct:
        """Convert an inner rational function to zero form.

        Zeros are the numerator roots in the disk; numerator roots closer
        than ``cluster`` are merged into one zero (multiple roots come back
        from the eigenvalue solver split by about eps^(1/r)).
        """
        if not self.is_inner(tol):
            raise InputError("rational function is not inner")
        roots = self.num.roots()
        roots = roots[np.abs(roots) < 1.0]
        groups: list[list[complex]] = []
        for r in roots:
            for g in groups:
                if abs(np.mean(g) - r) < cluster:
                    g.append(r)
                    break
            else:
                groups.append([r])
        zeros = [(complex(np.mean(g)), len(g)) for g in groups]
        trial = BlaschkeProduct(zeros, 1.0)
        t0 = 1.0 + 0j
        g = complex(self.eval(t0)) / complex(trial.eval(t0))
        return BlaschkeProduct(zeros, g / abs(g))

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data) -> "RationalSchur":
        if isinstance(data, dict) and "zeros" in data:
            return BlaschkeProduct.from_json(data).to_rational()
        try:
            return cls(Polynomial.from_json(data["num"]), Polynomial.from_json(data["den"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed rational function: {exc}") from exc


def as_rational(s) -> RationalSchur:
    if isinstance(s, RationalSchur):
        return s
    if isinstance(s, BlaschkeProduct):
        return s.to_rational()
    if isinstance(s, Polynomial):
        return RationalSchur(s, Polynomial([1.0]))
    return RationalSchur.constant(complex(s))


def schur_check(s, n: int = SCHUR_GRID, tol: float = SCHUR_TOL) -> tuple[bool, float]:
    """(ok, max modulus on an n-point circle grid)."""
    s = as_rational(s)
    t = circle_grid(n)
    den = s.den(t)
    max_mod = float(np.max(np.abs(s.num(t) / den)))
    root_free = float(np.min(np.abs(den))) > 1e-10
    if root_free and s.den.degree >= 1:
        root_free = bool(np.all(np.abs(s.den.roots()) > 1.0))
    return (root_free and max_mod <= 1.0 + tol), max_mod
