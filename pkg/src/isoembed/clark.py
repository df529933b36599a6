"""Atomic embedding measures and their Schur parameters.

For a Blaschke product ``B`` and a Schur parameter ``omega`` the identity

    (1 + B omega)/(1 - B omega) = i beta + sum_j s_j (t_j + z)/(t_j - z)

ties ``omega`` to a real ``beta`` and a positive measure. When ``omega`` is a
finite Blaschke product the measure is atomic: its atoms are the solutions of
``B(t) omega(t) = 1`` on the circle and the weights are reciprocals of the
boundary log-derivative of ``B omega``.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from math import factorial
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (
    InconsistentMeasure,
    InputError,
    NotFinitelySupported,
    NotSupportPoint,
    RootFindingFailure,
)
from .rational import (
    BlaschkeProduct,
    Polynomial,
    RationalSchur,
    complex_from_json,
    complex_to_json,
    multiply,
    schur_check,
    to_quotient,
)

TWO_PI = 2.0 * np.pi
ATOM_SEPARATION = 1e-9
SUPPORT_TOL = 1e-10
MATCH_TOL = 1e-8


def arc_distance(a, b):
    """Angular distance between unimodular points."""
    return np.abs(np.angle(np.asarray(a) * np.conj(b)))


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    """sum_j s_j delta(t_j), atoms sorted by argument in [0, 2 pi)."""

    t: np.ndarray
    s: np.ndarray

    def __init__(self, t: Sequence[complex], s: Sequence[float]):
        t = np.asarray(t, dtype=np.complex128).ravel()
        s = np.asarray(s, dtype=np.float64).ravel()
        if t.shape != s.shape:
            raise InputError("atoms and weights differ in length")
        if np.any(np.abs(np.abs(t) - 1.0) > 1e-12):
            raise InputError("atoms must be unimodular")
        if np.any(~(s > 0)):
            raise InputError("weights must be positive")
        t = t / np.abs(t)
        order = np.argsort(np.mod(np.angle(t), TWO_PI), kind="stable")
        t, s = t[order], s[order]
        if t.size > 1:
            d = arc_distance(t[:, None], t[None, :])
            np.fill_diagonal(d, np.inf)
            if d.min() <= ATOM_SEPARATION:
                raise InputError("atoms closer than 1e-9")
        t.setflags(write=False)
        s.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "s", s)

    @property
    def size(self) -> int:
        return int(self.t.size)

    @property
    def mass(self) -> float:
        return float(self.s.sum())

    @property
    def args(self) -> np.ndarray:
        return np.mod(np.angle(self.t), TWO_PI)

    def mass_at(self, tau: complex, tol: float = MATCH_TOL) -> float:
        """Weight of the atom within ``tol`` (arc) of tau, or 0."""
        if self.size == 0:
            return 0.0
        d = arc_distance(self.t, tau)
        k = int(np.argmin(d))
        return float(self.s[k]) if d[k] <= tol else 0.0

    def integrate(self, f) -> complex:
        return complex(np.sum(self.s * f(self.t)))

    def scaled(self, factor: float) -> "AtomicMeasure":
        return AtomicMeasure(self.t, self.s * factor)

    def with_density(self, density: np.ndarray, drop: float = 1e-14) -> "AtomicMeasure":
        """(1 + ...)-style reweighting; atoms whose new weight vanishes are dropped."""
        w = self.s * np.asarray(density, dtype=np.float64)
        keep = w > drop * self.s.max()
        return AtomicMeasure(self.t[keep], w[keep])

    def to_json(self) -> dict:
        return {"atoms": [{"t": complex_to_json(t), "s": float(s)} for t, s in zip(self.t, self.s)]}

    @classmethod
    def from_json(cls, data: dict) -> "AtomicMeasure":
        try:
            atoms = data["atoms"]
            t = [complex_from_json(a["t"]) for a in atoms]
            s = [float(a["s"]) for a in atoms]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed measure: {exc}") from exc
        t = [z / abs(z) if abs(abs(z) - 1) <= 1e-12 else z for z in t]
        return cls(t, s)

    def csv_rows(self) -> list[tuple[float, float, float, float]]:
        return [(float(a), float(t.real), float(t.imag), float(s)) for a, t, s in zip(self.args, self.t, self.s)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["arg_t", "re_t", "im_t", "weight"])
        for row in self.csv_rows():
            w.writerow([repr(x) for x in row])
        return buf.getvalue()

    def __repr__(self) -> str:
        atoms = ", ".join(f"{a:.6f}:{s:.6g}" for a, s in zip(self.args, self.s))
        return f"AtomicMeasure([{atoms}])"


def measures_match(a: AtomicMeasure, b: AtomicMeasure, tol: float = MATCH_TOL) -> bool:
    """Atomwise agreement: same count, positions (arc) and weights within tol."""
    if a.size != b.size:
        return False
    if a.size == 0:
        return True
    d = arc_distance(a.t[:, None], b.t[None, :])
    k = np.argmin(d, axis=1)
    if len(set(k.tolist())) != a.size:
        return False
    return bool(np.all(d[np.arange(a.size), k] <= tol) and np.all(np.abs(a.s - b.s[k]) <= tol))


def shared_support(a: AtomicMeasure, b: AtomicMeasure, tol: float = MATCH_TOL) -> int:
    """Number of atoms of ``a`` lying within ``tol`` of an atom of ``b``."""
    if a.size == 0 or b.size == 0:
        return 0
    d = arc_distance(a.t[:, None], b.t[None, :])
    return int(np.sum(d.min(axis=1) <= tol))


@dataclass(frozen=True)
class HerglotzData:
    beta: float
    measure: AtomicMeasure

    def herglotz(self, z):
        """i beta + sum s_j (t_j + z)/(t_j - z)."""
        z = np.asarray(z, dtype=np.complex128)
        t = self.measure.t
        terms = (t + z[..., None]) / (t - z[..., None])
        return 1j * self.beta + terms @ self.measure.s

    def to_json(self) -> dict:
        out = self.measure.to_json()
        out["beta"] = float(self.beta)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "HerglotzData":
        return cls(float(data.get("beta", 0.0)), AtomicMeasure.from_json(data))


def _as_fbp(omega) -> BlaschkeProduct:
    if isinstance(omega, BlaschkeProduct):
        return omega
    if isinstance(omega, RationalSchur):
        if not omega.is_inner():
            raise NotFinitelySupported("Schur parameter is not inner; the measure has a continuous part")
        return omega.to_blaschke()
    c = complex(omega)
    if abs(abs(c) - 1.0) > 1e-12:
        raise NotFinitelySupported(f"constant parameter {c} is not unimodular")
    return BlaschkeProduct.constant(c)


def support_points(b: BlaschkeProduct, omega) -> np.ndarray:
    """Solutions of B(t) omega(t) = 1 on the circle, sorted by argument.

    The boundary phase of B omega is strictly increasing with total gain
    2 pi (n + m); each solution is bracketed between consecutive multiples of
    2 pi and found by bisection followed by Newton polishing.
    """
    omega = _as_fbp(omega)
    if b.degree < 1:
        raise InputError("B must have degree at least 1")
    c = multiply(b, omega)
    n = c.degree
    offset = c.phase_offset()
    start = offset + float(kernels.fbp_phase(c.zeros, c.mults, np.zeros(1))[0])
    k0 = int(np.ceil(start / TWO_PI - 1e-15))
    targets = TWO_PI * np.arange(k0, k0 + n) - offset
    theta = kernels.circle_solve(c.zeros, c.mults, targets)
    theta = np.where(theta >= TWO_PI - 1e-13, theta - TWO_PI, theta)
    theta = np.sort(theta)
    t = np.exp(1j * theta)
    resid = np.abs(c.eval(t) - 1.0)
    if resid.size and resid.max() >= SUPPORT_TOL:
        raise RootFindingFailure(f"support equation residual {resid.max():.3e}")
    return t


def weights(b: BlaschkeProduct, omega, t) -> np.ndarray | float:
    """Atom weights 1/(t (B omega)'(t)/(B omega)(t)) at support points."""
    omega = _as_fbp(omega)
    t_arr = np.asarray(t, dtype=np.complex128)
    if np.any(np.abs(b.eval(t_arr) * omega.eval(t_arr) - 1.0) >= 1e-8):
        raise NotSupportPoint("B(t) omega(t) != 1")
    s = 1.0 / (b.poisson_sum(t_arr) + omega.poisson_sum(t_arr))
    return s if np.ndim(s) else float(s)


def beta_of(b: BlaschkeProduct, omega) -> float:
    """2 Im(omega(0) B(0)) / |1 - B(0) omega(0)|^2."""
    c = complex(b.eval(0j)) * complex(_as_fbp(omega).eval(0j))
    return 2.0 * c.imag / abs(1.0 - c) ** 2


def measure_from_schur(b: BlaschkeProduct, omega) -> HerglotzData:
    omega = _as_fbp(omega)
    t = support_points(b, omega)
    s = weights(b, omega, t)
    return HerglotzData(beta_of(b, omega), AtomicMeasure(t, s))


def clark_measure(b: BlaschkeProduct, alpha: complex) -> AtomicMeasure:
    alpha = complex(alpha)
    if abs(abs(alpha) - 1.0) > 1e-12:
        raise InputError("alpha must be unimodular")
    return measure_from_schur(b, BlaschkeProduct.constant(alpha / abs(alpha))).measure


def max_mass(b: BlaschkeProduct, tau: complex) -> tuple[AtomicMeasure, float]:
    """Largest point mass at tau over all embedding measures.

    Attained by the Clark measure with alpha = conj(B(tau)).
    """
    tau = complex(tau)
    if abs(abs(tau) - 1.0) > 1e-12:
        raise InputError("tau must be unimodular")
    alpha = np.conj(complex(b.eval(tau)))
    sigma = clark_measure(b, alpha)
    mass = 1.0 / float(b.poisson_sum(tau))
    if abs(sigma.mass_at(tau) - mass) > 1e-10:
        raise RootFindingFailure("tau is not an atom of the maximizing Clark measure")
    return sigma, mass


# -- inverse map ---------------------------------------------------------------

def _herglotz_derivative(measure: AtomicMeasure, z: complex, order: int) -> complex:
    # (t+z)/(t-z) = -1 + 2t/(t-z)
    t, s = measure.t, measure.s
    return complex(np.sum(s * 2.0 * t * factorial(order) / (t - z) ** (order + 1)))


def schur_from_measure(b: BlaschkeProduct, sigma: AtomicMeasure,
                       tol: float = 1e-8, deriv_tol: float = 1e-6) -> tuple[RationalSchur, float]:
    """Recover (omega, beta) from an embedding measure.

    beta is fixed by F(z_1) = 1 at the first zero of B; the remaining zeros
    (and derivatives up to the multiplicity) are consistency checks. Any
    failure means sigma is not an embedding measure for B.
    """
    n = b.degree
    if n < 1:
        raise InputError("B must have degree at least 1")
    p = sigma.size
    if p < n:
        raise InconsistentMeasure(f"{p} atoms cannot carry an embedding of a {n}-dimensional space")
    t, s = sigma.t, sigma.s

    h1 = _herglotz_derivative(sigma, complex(b.zeros[0]), 0) - sigma.mass
    if abs(h1.real - 1.0) > tol:
        raise InconsistentMeasure(f"Re F(z_1) = {h1.real:.12g}, expected 1")
    beta = -h1.imag
    for zk, rk in zip(b.zeros, b.mults):
        fk = 1j * beta + _herglotz_derivative(sigma, complex(zk), 0) - sigma.mass
        if abs(fk - 1.0) > tol:
            raise InconsistentMeasure(f"F({complex(zk):.6g}) = {fk:.6g}, expected 1")
        for j in range(1, int(rk)):
            dj = _herglotz_derivative(sigma, complex(zk), j)
            if abs(dj) > deriv_tol:
                raise InconsistentMeasure(f"F derivative of order {j} at a multiple zero is {abs(dj):.3e}")

    # F = (i beta D + N)/D with D = prod(t_j - z), N = sum s_j (t_j + z) prod_{i != j}(t_i - z)
    d = Polynomial.from_roots(t, lead=(-1.0) ** p)
    nh = Polynomial()
    for j in range(p):
        others = np.delete(t, j)
        nh = nh + Polynomial.from_roots(others, lead=(-1.0) ** (p - 1)) * Polynomial([t[j], 1.0]) * s[j]
    ibd = d * (1j * beta)
    top = ibd + nh - d
    bottom = ibd + nh + d

    scale_top = np.max(np.abs(top.coeffs))
    for zk in b.zero_list():
        top, rem = top.deflate(complex(zk))
        if abs(rem) > 1e-7 * scale_top:
            raise InconsistentMeasure("F - 1 does not vanish at the zeros of B")
    scale_bottom = np.max(np.abs(bottom.coeffs))
    nz = b.zeros != 0
    for zk in np.repeat(b.zeros[nz], b.mults[nz]):
        bottom, rem = bottom.deflate(1.0 / np.conj(zk))
        if abs(rem) > 1e-7 * scale_bottom:
            raise InconsistentMeasure("F + 1 lacks the reflected zeros of B")

    # omega = (F-1)/(B (F+1)) with B = g Q/Q*, Q = prod(z_k - z)^r, Q* = prod(conj(z_k) z - 1)^r
    g, _ = to_quotient(b)
    r0 = int(b.mults[~nz].sum())
    const = (-1.0) ** (n + r0) * np.prod(np.conj(b.zeros[nz]) ** b.mults[nz])
    omega = RationalSchur(top * const, bottom * g)
    lead = omega.den.coeffs[0]
    omega = RationalSchur(omega.num * (1.0 / lead), omega.den * (1.0 / lead))
    ok, max_mod = schur_check(omega)
    if not ok:
        raise InconsistentMeasure(f"recovered parameter is not Schur (max modulus {max_mod:.6g})")
    return omega, float(beta)
