"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import time

import numpy as np
import pytest

from helpers import congruent_normal_form, inf_norm, random_orthosymplectic, random_pd, random_symplectic
from sympal import (
    Ball,
    CommutatorError,
    Cylinder,
    Ellipsoid,
    ThermoParams,
    capacity,
    degenerate_williamson,
    family_diagonalize,
    gauss_hermite_partition,
    geometric_mean,
    hormander_constraints,
    hormander_psd_normal_form,
    nonsqueezing_embeddable,
    partition_interacting,
    partition_noninteracting,
    power_commutator_residual,
    scaled_region,
    simultaneous_williamson,
    symplectic_residual,
    symplectic_spectrum,
    williamson_decompose,
)


@pytest.fixture
def report(acceptance_lines):
    def record(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        acceptance_lines.append(line)
        print(line)
        assert ok, line

    return record


def diag_residual(s, m, spectrum):
    return inf_norm(s.T @ m @ s - np.diag(np.concatenate([spectrum, spectrum])))


def test_criterion_01_two_by_two_fixture(report):
    m = np.array([[5.0, 3.0], [3.0, 2.0]])
    symplectic_spectrum(m)
    timings = []
    for _ in range(20):
        start = time.perf_counter()
        spectrum = symplectic_spectrum(m)
        timings.append(time.perf_counter() - start)
    err = float(np.abs(spectrum - [1.0]).max())
    best = min(timings)
    report(1, spectrum.shape == (1,) and err <= 1e-10 and best < 1e-3, f"error {err:.2e}, runtime {best * 1e3:.3f} ms")


def test_criterion_02_four_by_four_fixture(report):
    m = np.array([[6.0, 0, 0, 0], [0, 3.0, 0, 0], [0, 0, 3.0, -1.0], [0, 0, -1.0, 1.0]])
    expected = np.sqrt(1.5 * (7 + np.array([-1.0, 1.0]) * np.sqrt(33)))
    err = float(np.abs(symplectic_spectrum(m) - expected).max())
    report(2, err <= 1e-9, f"spectrum error {err:.2e} against {np.round(expected, 6).tolist()}")


def test_criterion_03_williamson_property_suite(report):
    rng = np.random.default_rng(2024)
    worst_symp = worst_diag = 0.0
    start = time.perf_counter()
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        m = random_pd(2 * n, rng)
        dec = williamson_decompose(m)
        worst_symp = max(worst_symp, symplectic_residual(dec.s))
        worst_diag = max(worst_diag, diag_residual(dec.s, m, dec.spectrum) / inf_norm(m))
    elapsed = time.perf_counter() - start
    ok = worst_symp <= 1e-8 and worst_diag <= 1e-8 and elapsed < 30
    report(3, ok, f"max ||S^T J S - J|| {worst_symp:.2e}, max relative diag {worst_diag:.2e}, {elapsed:.1f} s")


def test_criterion_04_degenerate_round_trip(report):
    rng = np.random.default_rng(4)
    worst = 0.0
    k_exact = True
    for _ in range(500):
        n = int(rng.integers(1, 5))
        k = int(rng.integers(0, n + 1))
        lam = np.concatenate([rng.uniform(0.3, 4.0, k), np.zeros(n - k)])
        m = congruent_normal_form(lam, random_symplectic(n, rng))
        dec = degenerate_williamson(m)
        k_exact &= dec.k == k
        if k:
            worst = max(worst, float(np.max(np.abs(dec.spectrum[:k] - np.sort(lam[:k])) / np.sort(lam[:k]))))
    report(4, k_exact and worst <= 1e-7, f"k exact: {k_exact}, max relative spectrum error {worst:.2e}")


def test_criterion_05_hormander(report):
    form = hormander_psd_normal_form(np.diag([1.0, 0.0]))
    parabolic_ok = (form.k, form.l) == (0, 1)
    rng = np.random.default_rng(5)
    l_zero = True
    worst_symp = worst_diag = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 6))
        m = random_pd(2 * n, rng)
        form = hormander_psd_normal_form(m)
        l_zero &= form.l == 0 and form.k == n
        r1, r2 = form.residuals(m)
        worst_symp, worst_diag = max(worst_symp, r1), max(worst_diag, r2 / inf_norm(m))
    ok = parabolic_ok and l_zero and worst_symp <= 1e-8 and worst_diag <= 1e-8
    report(5, ok, f"diag(1,0) -> (k,l)=(0,1): {parabolic_ok}; PD l=0: {l_zero}; residuals {worst_symp:.2e}/{worst_diag:.2e}")


def test_criterion_06_simultaneous(report):
    rng = np.random.default_rng(6)
    worst = 0.0
    for i in range(200):
        n = int(rng.integers(1, 6))
        s0 = random_symplectic(n, rng)
        lam, gam = rng.uniform(0.5, 3.0, n), rng.uniform(0.5, 3.0, n)
        if i % 4 == 0:
            lam[:] = lam[0]
        a, b = congruent_normal_form(lam, s0), congruent_normal_form(gam, s0)
        res = simultaneous_williamson(a, b)
        r1, (ra, rb) = res.residuals([a, b])
        worst = max(worst, r1, ra / max(1.0, inf_norm(a)), rb / max(1.0, inf_norm(b)))
    rejected, smallest = 0, np.inf
    for _ in range(50):
        n = int(rng.integers(1, 6))
        a, b = random_pd(2 * n, rng), random_pd(2 * n, rng)
        with pytest.raises(CommutatorError) as info:
            simultaneous_williamson(a, b)
        rejected += 1
        smallest = min(smallest, info.value.residual)
    ok = worst <= 1e-7 and rejected == 50 and smallest >= 1e-3
    report(6, ok, f"max residual {worst:.2e} over 200 pairs; 50/50 non-commuting rejected, min residual {smallest:.2e}")


def test_criterion_07_power_theorem(report):
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 6))
        o = random_orthosymplectic(n, rng)
        lam, gam = rng.uniform(0.3, 3.0, n), rng.uniform(0.3, 3.0, n)
        a = o.T @ np.diag(np.concatenate([lam, lam])) @ o
        b = o.T @ np.diag(np.concatenate([gam, gam])) @ o
        a, b = 0.5 * (a + a.T), 0.5 * (b + b.T)
        for s in (-1, 0.5, 2, np.pi):
            worst = max(worst, power_commutator_residual(a, b, s))
    report(7, worst <= 1e-8, f"max residual {worst:.2e} over 100 pairs x 4 exponents")


def test_criterion_08_geometric_mean(report):
    rng = np.random.default_rng(8)
    worst_eq = worst_end = 0.0
    for _ in range(200):
        a, b = random_pd(4, rng, floor=0.5), random_pd(4, rng, floor=0.5)
        m = np.eye(4) + 0.3 * rng.standard_normal((4, 4))
        t = rng.uniform()
        lhs = m.T @ geometric_mean(a, b, t) @ m
        rhs = geometric_mean(m.T @ a @ m, m.T @ b @ m, t)
        worst_eq = max(worst_eq, np.abs(lhs - rhs).max() / max(1.0, np.abs(rhs).max()))
        worst_end = max(
            worst_end,
            np.abs(geometric_mean(a, b, 0.0) - a).max() / max(1.0, np.abs(a).max()),
            np.abs(geometric_mean(a, b, 1.0) - b).max() / max(1.0, np.abs(b).max()),
        )
    worst_family = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 5))
        s0 = random_symplectic(n, rng)
        a = congruent_normal_form(rng.uniform(0.5, 3.0, n), s0)
        b = congruent_normal_form(rng.uniform(0.5, 3.0, n), s0)
        s = simultaneous_williamson(a, b).s
        means = [geometric_mean(a, b, t) for t in (0.0, 0.25, 0.5, 0.75, 1.0)]
        family_diagonalize(means)
        for g in means:
            d = np.diag(s.T @ g @ s)
            spec = 0.5 * (d[:n] + d[n:])
            worst_family = max(worst_family, diag_residual(s, g, spec) / max(1.0, inf_norm(g)))
    ok = worst_eq <= 1e-7 and worst_end <= 1e-9 and worst_family <= 1e-7
    report(8, ok, f"equivariance {worst_eq:.2e}, endpoints {worst_end:.2e}, family {worst_family:.2e}")


def test_criterion_09_partition_functions(report):
    rng = np.random.default_rng(9)
    start = time.perf_counter()
    worst_quad = 0.0
    for nd in (1, 2):
        s0 = random_symplectic(nd, rng, squeeze=0.3)
        hs = [congruent_normal_form(rng.uniform(0.5, 2.0, nd), s0) for _ in range(2)]
        params = ThermoParams(0.8, 1.2)
        closed = partition_interacting(hs, params)
        quad = gauss_hermite_partition(sum(hs), params)
        worst_quad = max(worst_quad, abs(closed - quad) / quad)
        single = partition_noninteracting([hs[0]], params)
        worst_quad = max(worst_quad, abs(single - gauss_hermite_partition(hs[0], params)) / single)
    worst_n1 = 0.0
    for _ in range(20):
        m = random_pd(2 * int(rng.integers(1, 4)), rng)
        params = ThermoParams(rng.uniform(0.2, 3), rng.uniform(0.2, 3))
        z_int, z_non = partition_interacting([m], params), partition_noninteracting([m], params)
        worst_n1 = max(worst_n1, abs(z_int - z_non) / z_non)
    elapsed = time.perf_counter() - start
    ok = worst_quad <= 1e-6 and worst_n1 <= 1e-10 and elapsed < 5
    report(9, ok, f"quadrature gap {worst_quad:.2e}, N=1 gap {worst_n1:.2e}, {elapsed:.2f} s")


def test_criterion_10_constraints_and_capacity(report):
    rng = np.random.default_rng(10)
    n, k = 3, 1
    s0 = random_symplectic(n, rng)
    lam_t = rng.uniform(0.5, 3.0, n)
    lam = np.where(np.arange(n) < k, lam_t, 0.0)
    m, mt = congruent_normal_form(lam, s0), congruent_normal_form(lam_t, s0)
    rep = hormander_constraints(m, mt)
    worst_ext = 0.0
    for _ in range(100):
        z = rng.standard_normal(2 * n)
        w = rep.s @ z
        chi = rep.constraints(z)
        gap = (w @ mt @ w) - (w @ m @ w) - float(np.dot(rep.c, chi * chi))
        worst_ext = max(worst_ext, abs(gap) / max(1.0, abs(w @ mt @ w)))

    axioms = True
    for _ in range(100):
        dim = int(rng.integers(1, 4))
        t = rng.uniform(0.1, 5.0)
        r = rng.uniform(0.1, 5.0)
        e = Ellipsoid(random_pd(2 * dim, rng))
        c = capacity(e)
        s = random_symplectic(dim, rng, squeeze=0.5)
        axioms &= abs(capacity(scaled_region(e, t)) - t**2 * c) <= 1e-9 * t**2 * c
        axioms &= abs(capacity(Ellipsoid(s.T @ e.m @ s)) - c) <= 1e-9 * c
        axioms &= capacity(Ball(r, dim)) == capacity(Cylinder(r, int(rng.integers(1, dim + 1)), dim))
        axioms &= abs(capacity(scaled_region(Ball(r), t)) - t**2 * capacity(Ball(r))) <= 1e-12 * t**2 * r**2
    squeeze = nonsqueezing_embeddable(2, 1)
    ok = worst_ext <= 1e-8 and axioms and squeeze is False
    report(10, ok, f"extension identity {worst_ext:.2e}; capacity axioms: {axioms}; embeddable(2,1) = {squeeze}")
