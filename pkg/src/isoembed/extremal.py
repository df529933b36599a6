"""Extreme points of the set of embedding measures.

Two independent routes decide extremality of an atomic embedding measure:

* the support count, extreme iff n <= |supp sigma| <= 2n - 1;
* an explicit search for a perturbation: a real density phi0 on the atoms,
  |phi0| <= 1, annihilating the (2n - 1)-dimensional real span E that
  contains every f conj(g) for f, g in K_B. A nonzero phi0 splits sigma as
  the midpoint of (1 + phi0) sigma and (1 - phi0) sigma.

The theta-product mirrors midpoints of measures on the Schur-parameter side.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .clark import AtomicMeasure, measure_from_schur, measures_match, schur_from_measure
from .errors import DenominatorVanishes, InputError, NotEmbedding, ValidationFailure
from .model_space import e_space_matrix, verify_isometry
from .rational import BlaschkeProduct, Polynomial, RationalSchur, as_rational, circle_grid, mobius_precompose

KERNEL_TOL = 1e-9
CANCEL_TOL = 1e-10
# common roots on or inside the circle must cancel; they are matched more loosely
DISK_CANCEL_TOL = 1e-6


class Verdict(str, enum.Enum):
    EXTREME = "extreme"
    NOT_EXTREME = "not_extreme"


class Primality(str, enum.Enum):
    PRIME = "prime"
    NOT_PRIME = "not_prime"


@dataclass(frozen=True)
class ExtremalityReport:
    verdict: Verdict
    support_size: int
    bounds: tuple[int, int]
    decomposition: tuple[AtomicMeasure, AtomicMeasure] | None = None
    phi0: np.ndarray | None = None
    certified: bool = True
    kernel_dim: int = 0
    notes: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "support_size": self.support_size,
            "bounds": list(self.bounds),
            "kernel_dim": self.kernel_dim,
            "certified": self.certified,
        }
        if self.phi0 is not None:
            out["phi0"] = [float(v) for v in self.phi0]
        if self.decomposition is not None:
            out["decomposition"] = [m.to_json() for m in self.decomposition]
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _bounds(b: BlaschkeProduct) -> tuple[int, int]:
    return b.degree, 2 * b.degree - 1


def is_extreme(b: BlaschkeProduct, sigma: AtomicMeasure, tol: float = 1e-8) -> Verdict:
    cert = verify_isometry(b, sigma, tol)
    if not cert.verdict:
        raise NotEmbedding(f"measure fails the isometry check (deviation {cert.max_deviation:.3e})")
    lo, hi = _bounds(b)
    return Verdict.EXTREME if lo <= sigma.size <= hi else Verdict.NOT_EXTREME


def mobius_reduce(b: BlaschkeProduct, t: np.ndarray, s: np.ndarray, a: complex):
    """Transport (B, sigma) to (B o b_a, sigma_a).

    Atoms move to (t - a)/(1 - conj(a) t) and weights pick up the Poisson
    factor (1 - |a|^2)/|t - a|^2. Atom order is preserved.
    """
    t = np.asarray(t, dtype=np.complex128)
    tau = (t - a) / (1.0 - np.conj(a) * t)
    return mobius_precompose(b, a), tau, np.asarray(s) * (1.0 - abs(a) ** 2) / np.abs(t - a) ** 2


def _null_space(m: np.ndarray, tol: float = KERNEL_TOL) -> np.ndarray:
    """Kernel of m after row/column equilibration, columns in singular order."""
    rows = np.max(np.abs(m), axis=1)
    rows[rows == 0] = 1.0
    meq = m / rows[:, None]
    cols = np.linalg.norm(meq, axis=0)
    cols[cols == 0] = 1.0
    meq = meq / cols[None, :]
    _, sv, vh = np.linalg.svd(meq)
    full = np.zeros(vh.shape[0])
    full[: sv.size] = sv
    cut = tol * (sv[0] if sv.size else 1.0)
    idx = sorted((i for i in range(vh.shape[0]) if full[i] <= cut), key=lambda i: full[i])
    return vh[idx].T / cols[:, None]


def decomposition_oracle(b: BlaschkeProduct, sigma: AtomicMeasure, tol: float = 1e-8) -> ExtremalityReport:
    """Decide extremality by searching for a splitting density.

    When B(0) != 0 the problem is first moved by the Mobius map sending the
    smallest zero of B to the origin. The density found there is the density
    for sigma itself, since the transport only reweights atoms.
    """
    n = b.degree
    bounds = _bounds(b)
    t, s = sigma.t, sigma.s
    if np.any(b.zeros == 0):
        b_red, tau, s_red = b, t, s
    else:
        a = complex(b.zeros[np.argmin(np.abs(b.zeros))])
        b_red, tau, s_red = mobius_reduce(b, t, s, a)
    m = e_space_matrix(b_red, tau) * s_red[None, :]
    ker = _null_space(m)
    if ker.shape[1] == 0:
        return ExtremalityReport(Verdict.EXTREME, sigma.size, bounds)

    phi = ker[:, 0]
    k = int(np.argmax(np.abs(phi)))
    phi0 = phi / phi[k]
    plus = sigma.with_density(1.0 + phi0)
    minus = sigma.with_density(1.0 - phi0)

    notes = []
    average = AtomicMeasure(*_merge(plus, minus))
    certified = measures_match(average, sigma, 1e-10)
    if not certified:
        notes.append("halves do not average back to sigma")
    for half, name in ((plus, "sigma_plus"), (minus, "sigma_minus")):
        if half.size < n:
            certified = False
            notes.append(f"{name} has fewer than n atoms")
            continue
        cert = verify_isometry(b, half, tol)
        if not cert.verdict:
            certified = False
            notes.append(f"{name} fails the isometry check ({cert.max_deviation:.3e})")
    return ExtremalityReport(Verdict.NOT_EXTREME, sigma.size, bounds, (plus, minus), phi0,
                             certified, ker.shape[1], tuple(notes))


def _merge(plus: AtomicMeasure, minus: AtomicMeasure):
    """Atoms and weights of (plus + minus)/2, matching atoms exactly."""
    w: dict[complex, float] = {}
    for m in (plus, minus):
        for t, s in zip(m.t, m.s):
            key = complex(t)
            w[key] = w.get(key, 0.0) + 0.5 * s
    return list(w.keys()), list(w.values())


def oracle_verdict(report: ExtremalityReport) -> Verdict:
    """Only a certified decomposition counts as evidence of non-extremality."""
    if report.verdict is Verdict.NOT_EXTREME and report.certified:
        return Verdict.NOT_EXTREME
    return Verdict.EXTREME


# -- theta-product -----------------------------------------------------------------

def _cancel_common(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    if num.degree < 1 or den.degree < 1:
        return num, den
    rn = list(num.roots())
    rd = sorted(den.roots(), key=abs)
    for r in rd:
        if not rn:
            break
        dist = np.abs(np.array(rn) - r)
        j = int(np.argmin(dist))
        limit = DISK_CANCEL_TOL if abs(r) <= 1.0 + 1e-9 else CANCEL_TOL * max(1.0, abs(r))
        if dist[j] <= limit:
            num, _ = num.deflate(rn.pop(j))
            den, _ = den.deflate(r)
    return num, den


def theta_product(theta, s1, s2) -> RationalSchur:
    """(s0 - theta s1 s2)/(1 - theta s0) with s0 = (s1 + s2)/2.

    Over the common denominator d1 d2 d_theta this is
    (C d_theta - 2 n_theta n1 n2) / (2 d1 d2 d_theta - n_theta C), with
    C = n1 d2 + n2 d1. Equal arguments are returned unchanged, which is the
    exact value of the product.
    """
    th, a, b = as_rational(theta), as_rational(s1), as_rational(s2)
    cross = a.num * b.den + b.num * a.den
    if (a.num * b.den - b.num * a.den).is_zero:
        return RationalSchur(a.num, a.den)
    num = cross * th.den - th.num * a.num * b.num * 2.0
    den = a.den * b.den * th.den * 2.0 - th.num * cross
    if den.is_zero:
        raise DenominatorVanishes("1 - theta s0 vanishes identically")
    if num.is_zero:
        return RationalSchur(Polynomial(), Polynomial([1.0]))
    num, den = _cancel_common(num, den)
    if den.degree >= 1 and np.min(np.abs(den.roots())) <= 1.0:
        raise DenominatorVanishes("1 - theta s0 has an uncancelled zero in the closed disk")
    c = den.coeffs[0]
    return RationalSchur(num * (1.0 / c), den * (1.0 / c))


def theta_prime_fbp(theta: BlaschkeProduct, omega: BlaschkeProduct) -> Primality:
    n = theta.degree
    if n < 1:
        raise InputError("theta must be nonconstant")
    return Primality.PRIME if omega.degree <= n - 1 else Primality.NOT_PRIME


def factor_witness(theta: BlaschkeProduct, omega: BlaschkeProduct, tol: float = 1e-7):
    """A nontrivial factorization omega = (omega1 o omega2)_theta, or None.

    Built through the measures: decompose the measure of omega and map the
    two halves back to their Schur parameters.
    """
    if theta_prime_fbp(theta, omega) is Primality.PRIME:
        return None
    sigma = measure_from_schur(theta, omega).measure
    report = decomposition_oracle(theta, sigma)
    if report.decomposition is None or not report.certified:
        return None
    plus, minus = report.decomposition
    omega1, _ = schur_from_measure(theta, plus)
    omega2, _ = schur_from_measure(theta, minus)
    z = 0.8 * circle_grid(64)
    prod = theta_product(theta, omega1, omega2)
    err = float(np.max(np.abs(prod.eval(z) - omega.eval(z))))
    if err > tol:
        raise ValidationFailure(f"theta-product of the witnesses misses omega by {err:.3e}")
    if np.max(np.abs(omega1.eval(z) - omega2.eval(z))) <= 1e-6:
        raise ValidationFailure("witness factors coincide")
    return omega1, omega2
