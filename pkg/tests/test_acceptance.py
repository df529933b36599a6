"""Acceptance criteria 1-10.

Each test prints one ``criterion N: PASS|FAIL`` line; the lines are also
collected and repeated in the pytest terminal summary. Running this file
directly (``python3 tests/test_acceptance.py``) executes all ten in order.
"""
from __future__ import annotations

import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from isoembed import (
    AtomicMeasure,
    BlaschkeProduct,
    beta_of,
    boundary_fbp_interpolation,
    clark_measure,
    decomposition_oracle,
    is_extreme,
    max_mass,
    measure_from_schur,
    measures_match,
    numerical_rank,
    pick_matrix,
    recover_fbp,
    schur_check,
    schur_from_measure,
    shared_support,
    theta_product,
    uniqueness,
    verify_isometry,
)
from isoembed.clark import arc_distance
from isoembed.extremal import _merge
from isoembed.samplers import disk_points, random_fbp, random_schur, unimodular

FIXTURES = Path(__file__).parent / "fixtures"
RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def _warm_up():
    # exclude one-off JIT compilation from the timed criteria
    b = BlaschkeProduct([0.3, (0.0, 2)], 1j)
    sigma = measure_from_schur(b, BlaschkeProduct([0.1 + 0.2j], 1.0)).measure
    verify_isometry(b, sigma)


_warm_up()


def _criterion2_corpus(seed: int = 2024, count: int = 200):
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(count):
        b = random_fbp(rng, int(rng.integers(1, 7)))
        omega = random_fbp(rng, int(rng.integers(0, 5)))
        cases.append((b, omega))
    return cases


CORPUS = _criterion2_corpus()


def test_criterion_1_clark_roots_of_unity():
    t0 = time.perf_counter()
    worst_pos = worst_w = worst_dev = 0.0
    for n in range(1, 9):
        b = BlaschkeProduct([(0.0, n)], 1.0)
        sigma = clark_measure(b, 1.0)
        roots = np.exp(2j * np.pi * np.arange(n) / n)
        assert sigma.size == n
        worst_pos = max(worst_pos, float(np.max(np.abs(sigma.t - roots))))
        worst_w = max(worst_w, float(np.max(np.abs(sigma.s - 1.0 / n))))
        worst_dev = max(worst_dev, verify_isometry(b, sigma).max_deviation)
    elapsed = time.perf_counter() - t0
    ok = worst_pos <= 1e-10 and worst_w <= 1e-10 and worst_dev < 1e-10 and elapsed < 1.0
    record(1, ok, f"atom err {worst_pos:.2e}, weight err {worst_w:.2e}, deviation {worst_dev:.2e}, {elapsed:.2f}s")


def test_criterion_2_forward_randomized():
    t0 = time.perf_counter()
    worst = 0.0
    bad = 0
    for b, omega in CORPUS:
        sigma = measure_from_schur(b, omega).measure
        cert = verify_isometry(b, sigma, 1e-8)
        worst = max(worst, cert.max_deviation)
        if not cert.verdict or sigma.size != b.degree + omega.degree:
            bad += 1
    elapsed = time.perf_counter() - t0
    record(2, bad == 0 and elapsed < 30, f"{len(CORPUS)} cases, {bad} bad, worst deviation {worst:.2e}, {elapsed:.2f}s")


def test_criterion_3_round_trip():
    rng = np.random.default_rng(3)
    z = disk_points(rng, 32, 0.95)
    worst_eval = worst_beta = 0.0
    for b, omega in CORPUS:
        data = measure_from_schur(b, omega)
        rec, beta = schur_from_measure(b, data.measure)
        worst_eval = max(worst_eval, float(np.max(np.abs(rec.eval(z) - omega.eval(z)))))
        worst_beta = max(worst_beta, abs(beta - beta_of(b, omega)))
    ok = worst_eval < 1e-7 and worst_beta <= 1e-8
    record(3, ok, f"eval err {worst_eval:.2e}, beta err {worst_beta:.2e}")


def test_criterion_4_count_vs_oracle():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    cases = disagree = invalid = 0
    for n in range(1, 5):
        for m in range(0, n + 3):
            for _ in range(20):
                b = random_fbp(rng, n)
                sigma = measure_from_schur(b, random_fbp(rng, m)).measure
                by_count = is_extreme(b, sigma)
                report = decomposition_oracle(b, sigma)
                cases += 1
                disagree += report.verdict is not by_count
                if report.decomposition is not None:
                    plus, minus = report.decomposition
                    avg = AtomicMeasure(*_merge(plus, minus))
                    good = (measures_match(avg, sigma, 1e-10)
                            and verify_isometry(b, plus, 1e-8).verdict
                            and verify_isometry(b, minus, 1e-8).verdict
                            and not measures_match(plus, minus, 1e-10))
                    invalid += not good
    elapsed = time.perf_counter() - t0
    ok = disagree == 0 and invalid == 0 and elapsed < 60
    record(4, ok, f"{cases} cases, {disagree} disagreements, {invalid} invalid decompositions, {elapsed:.2f}s")


def test_criterion_5_too_few_atoms():
    rng = np.random.default_rng(5)
    smallest = np.inf
    for _ in range(50):
        n = int(rng.integers(1, 6))
        b = random_fbp(rng, n)
        sigma = AtomicMeasure(unimodular(rng, n - 1), rng.uniform(0.05, 2.0, n - 1))
        smallest = min(smallest, verify_isometry(b, sigma).max_deviation)
    record(5, smallest > 1e-3, f"smallest deviation over 50 cases {smallest:.3e}")


def test_criterion_6_shared_support():
    rng = np.random.default_rng(6)
    b = BlaschkeProduct([0.4, -0.3 + 0.5j, (0.0, 1)], 1.0)
    worst_slack = -np.inf
    engineered = 0
    for i in range(50):
        p1 = int(rng.integers(0, 4))
        omega1 = random_fbp(rng, p1)
        sigma1 = measure_from_schur(b, omega1).measure
        if i % 2 == 0:
            p2 = int(rng.integers(0, 4))
            omega2 = random_fbp(rng, p2)
        else:
            # force many common atoms: interpolate 1/B on k atoms of sigma1
            k = int(rng.integers(1, min(sigma1.size, 4) + 1))
            pts = sigma1.t[rng.choice(sigma1.size, k, replace=False)]
            omega2 = boundary_fbp_interpolation(pts, 1.0 / b.eval(pts), seed=i)
            p2 = omega2.degree
            engineered += 1
        if omega1.allclose(omega2):
            continue
        sigma2 = measure_from_schur(b, omega2).measure
        shared = shared_support(sigma1, sigma2, 1e-8)
        worst_slack = max(worst_slack, shared - (omega1.degree + p2))
    record(6, worst_slack <= 0, f"max(shared - (p1 + p2)) = {worst_slack} ({engineered} engineered pairs)")


def test_criterion_7_pick_recovery():
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    bad_rank = bad_unique = 0
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(0, 6))
        b = random_fbp(rng, m)
        nodes = disk_points(rng, m + 1, 0.9)
        values = b.eval(nodes)
        p = pick_matrix(nodes, values)
        bad_rank += numerical_rank(p) != m
        bad_unique += not uniqueness(p).unique
        rec = recover_fbp(nodes, values)
        fresh = disk_points(rng, 50, 0.95)
        worst = max(worst, float(np.max(np.abs(rec.eval(fresh) - b.eval(fresh)))))
    elapsed = time.perf_counter() - t0
    ok = bad_rank == 0 and bad_unique == 0 and worst < 1e-8 and elapsed < 10
    record(7, ok, f"rank misses {bad_rank}, uniqueness misses {bad_unique}, eval err {worst:.2e}, {elapsed:.2f}s")


def test_criterion_8_theta_product():
    rng = np.random.default_rng(8)
    z = np.concatenate([np.exp(2j * np.pi * np.arange(256) / 256), 0.7 * np.exp(2j * np.pi * np.arange(64) / 64)])
    one = BlaschkeProduct.constant(1.0)
    closure = inner_miss = 0
    idem = unit = 0.0
    total = 0
    for deg in (1, 2, 3):
        for _ in range(500):
            theta = random_fbp(rng, deg)
            (s1, i1), (s2, i2) = random_schur(rng), random_schur(rng)
            prod = theta_product(theta, s1, s2)
            closure += not schur_check(prod)[0]
            inner_miss += prod.is_inner() != (i1 and i2)
            idem = max(idem, float(np.max(np.abs(theta_product(theta, s1, s1).eval(z) - s1.eval(z)))))
            unit = max(unit, float(np.max(np.abs(theta_product(one, s1, 1.0).eval(z) - 1.0))))
            total += 1
    ok = closure == 0 and inner_miss == 0 and idem <= 1e-12 and unit <= 1e-12
    record(8, ok, f"{total} pairs, closure fails {closure}, inner-ness misses {inner_miss}, "
                  f"idempotence {idem:.2e}, theta=1 identity {unit:.2e}")


def test_criterion_9_extremal_mass():
    rng = np.random.default_rng(9)
    worst = 0.0
    excess = -np.inf
    for _ in range(20):
        b = random_fbp(rng, int(rng.integers(1, 7)))
        tau = unimodular(rng)
        _, mass = max_mass(b, tau)
        sigma = clark_measure(b, 1.0 / complex(b.eval(tau)))
        worst = max(worst, abs(sigma.mass_at(tau) - mass))
        for _ in range(10):
            omega = random_fbp(rng, int(rng.integers(0, 5)))
            # rotate omega so that tau lands in the support
            c = 1.0 / complex(b.eval(tau) * omega.eval(tau))
            omega = BlaschkeProduct(list(zip(omega.zeros, omega.mults)), omega.gamma * c)
            comp = measure_from_schur(b, omega).measure
            d = arc_distance(comp.t, tau)
            assert d.min() <= 1e-8
            excess = max(excess, comp.mass_at(tau) - mass)
    ok = worst <= 1e-10 and excess <= 1e-10
    record(9, ok, f"max_mass vs Clark weight {worst:.2e}, largest competitor excess {excess:.2e}")


def test_criterion_10_negative_controls():
    rng = np.random.default_rng(10)
    passed_wrongly = 0
    for _ in range(20):
        b = random_fbp(rng, int(rng.integers(1, 6)))
        sigma = measure_from_schur(b, random_fbp(rng, int(rng.integers(0, 4)))).measure
        controls = [sigma.scaled(0.9)]
        shifted = sigma.t.copy()
        shifted[0] *= np.exp(1e-3j)
        controls.append(AtomicMeasure(shifted, sigma.s))
        controls.append(AtomicMeasure(sigma.t * np.exp(1e-3j), sigma.s))
        keep = rng.choice(sigma.size, b.degree - 1, replace=False)
        controls.append(AtomicMeasure(sigma.t[keep], sigma.s[keep]))
        passed_wrongly += sum(verify_isometry(b, c).verdict for c in controls)
    proc = subprocess.run([sys.executable, "-m", "isoembed.cli", "extreme",
                           str(FIXTURES / "neg_z_half_pm1_scaled.json"), "--oracle"],
                          capture_output=True, text=True)
    ok = passed_wrongly == 0 and proc.returncode == 4 and proc.stdout == ""
    record(10, ok, f"corrupted measures verified: {passed_wrongly}, CLI disagreement exit {proc.returncode}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
