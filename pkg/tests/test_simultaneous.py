import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from helpers import congruent_normal_form, inf_norm, random_orthosymplectic, random_pd, random_symplectic, std_j
from sympal import (
    CommutatorError,
    DimensionError,
    NotPositiveDefiniteError,
    NotSymplecticSubspaceError,
    PreconditionError,
    commutator_norm,
    family_diagonalize,
    geometric_mean,
    is_orthosymplectic,
    is_symplectic,
    poisson_commutes,
    power_commutator_residual,
    simultaneous_williamson,
    simultaneous_williamson_psd,
    williamson_decompose,
)

Q = np.array([[5.0, 3.0], [3.0, 2.0]])


def commuting_pair(rng, n, repeat=False):
    s0 = random_symplectic(n, rng)
    lam = rng.uniform(0.5, 3.0, n)
    gam = rng.uniform(0.5, 3.0, n)
    if repeat:
        lam[: max(1, n // 2 + 1)] = lam[0]
    return congruent_normal_form(lam, s0), congruent_normal_form(gam, s0), lam, gam


def orthosymplectic_pair(rng, n):
    o = random_orthosymplectic(n, rng)
    lam, gam = rng.uniform(0.3, 3.0, n), rng.uniform(0.3, 3.0, n)
    a = o.T @ np.diag(np.concatenate([lam, lam])) @ o
    b = o.T @ np.diag(np.concatenate([gam, gam])) @ o
    return 0.5 * (a + a.T), 0.5 * (b + b.T)


def joint_sorted(*spectra):
    return sorted(zip(*[np.round(s, 6) for s in spectra]))


def test_commutator_oracle():
    a, b = np.diag([1.0, 2.0]), Q
    j = std_j(1)
    direct = np.abs(j @ a @ j @ b - j @ b @ j @ a).sum(axis=1).max()
    assert commutator_norm(a, b) == pytest.approx(direct)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (Q, Q, True),
        (np.eye(4), np.diag([1.0, 3.0, 1.0, 3.0]), True),
        (np.diag([1.0, 2.0]), Q, False),
    ],
)
def test_poisson_commutes(a, b, expected):
    assert poisson_commutes(a, b) is expected


def test_poisson_commutes_dimension_mismatch():
    with pytest.raises(DimensionError):
        poisson_commutes(np.eye(2), np.eye(4))


def test_identical_pair_matches_williamson():
    res = simultaneous_williamson(Q, Q)
    assert_allclose(res.spectra[0], [1.0], atol=1e-12)
    assert_allclose(res.spectra[1], [1.0], atol=1e-12)
    assert_allclose(res.s, williamson_decompose(Q).s, atol=1e-12)


def test_already_normal_pair():
    res = simultaneous_williamson(np.eye(4), np.diag([2.0, 3.0, 2.0, 3.0]))
    assert_allclose(res.s, np.eye(4))
    assert_allclose(res.spectra[0], [1.0, 1.0])
    assert_allclose(res.spectra[1], [2.0, 3.0])


@pytest.mark.parametrize("repeat", [False, True])
@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_forward_construction(n, repeat):
    rng = np.random.default_rng(30 + n + 10 * repeat)
    a, b, lam, gam = commuting_pair(rng, n, repeat)
    res = simultaneous_williamson(a, b)
    assert joint_sorted(*res.spectra) == joint_sorted(lam, gam)
    r1, (ra, rb) = res.residuals([a, b])
    assert r1 <= 1e-8
    assert ra <= 1e-7 * max(1.0, inf_norm(a)) and rb <= 1e-7 * max(1.0, inf_norm(b))


def test_spectra_are_sorted_lexicographically():
    rng = np.random.default_rng(40)
    a, b, _, _ = commuting_pair(rng, 4, repeat=True)
    res = simultaneous_williamson(a, b)
    pairs = list(zip(*res.spectra))
    assert pairs == sorted(pairs)


def test_non_commuting_rejected_with_residual():
    with pytest.raises(CommutatorError) as info:
        simultaneous_williamson(np.diag([1.0, 2.0]), Q)
    assert info.value.residual == pytest.approx(commutator_norm(np.diag([1.0, 2.0]), Q))


def test_non_pd_rejected():
    with pytest.raises(NotPositiveDefiniteError):
        simultaneous_williamson(np.diag([1.0, 0.0]), np.eye(2))


def test_nilpotent_pair_is_rejected():
    # J a and J b are nilpotent and commute, but admit no joint normal form
    a, b = np.diag([1.0, 0.0]), np.diag([2.0, 0.0])
    assert poisson_commutes(a, b)
    with pytest.raises(NotPositiveDefiniteError):
        simultaneous_williamson(a, b)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4))
def test_spectra_symplectically_invariant(seed, n):
    rng = np.random.default_rng(seed)
    a, b, _, _ = commuting_pair(rng, n)
    s = random_symplectic(n, rng, squeeze=0.4)
    first = simultaneous_williamson(a, b)
    second = simultaneous_williamson(s.T @ a @ s, s.T @ b @ s)
    for x, y in zip(first.spectra, second.spectra):
        assert_allclose(x, y, rtol=1e-8)


def test_psd_diagonal_example():
    res = simultaneous_williamson_psd(np.diag([1.0, 0.0, 1.0, 0.0]), np.diag([2.0, 0.0, 2.0, 0.0]))
    assert_allclose(res.spectra[0], [1.0, 0.0])
    assert_allclose(res.spectra[1], [2.0, 0.0])


def test_psd_zero_pair():
    res = simultaneous_williamson_psd(np.zeros((4, 4)), np.zeros((4, 4)))
    assert_allclose(res.s, np.eye(4))
    assert all(np.all(s == 0.0) for s in res.spectra)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4), data=st.data())
def test_psd_forward_construction(seed, n, data):
    rng = np.random.default_rng(seed)
    s0 = random_symplectic(n, rng)
    lam = rng.uniform(0.5, 3.0, n)
    gam = rng.uniform(0.5, 3.0, n)
    za = data.draw(st.integers(0, n))
    zb = data.draw(st.integers(0, n))
    lam[n - za :] = 0.0
    gam[:zb] = 0.0
    a, b = congruent_normal_form(lam, s0), congruent_normal_form(gam, s0)
    res = simultaneous_williamson_psd(a, b)
    assert joint_sorted(*res.spectra) == joint_sorted(lam, gam)
    r1, (ra, rb) = res.residuals([a, b])
    assert r1 <= 1e-8
    assert ra <= 1e-7 * max(1.0, inf_norm(a)) and rb <= 1e-7 * max(1.0, inf_norm(b))


def test_psd_joint_radical_must_be_symplectic():
    # both forms vanish on the isotropic line spanned by e_2 only
    with pytest.raises(NotSymplecticSubspaceError):
        simultaneous_williamson_psd(np.diag([1.0, 0.0, 1.0, 1.0]), np.diag([2.0, 0.0, 2.0, 2.0]))


def test_family_singleton():
    rng = np.random.default_rng(41)
    m = random_pd(4, rng)
    res = family_diagonalize([m])
    assert_allclose(res.spectra[0], williamson_decompose(m).spectrum)


def test_family_scalar_multiples():
    res = family_diagonalize([np.eye(4), 2 * np.eye(4), 3 * np.eye(4)])
    assert is_orthosymplectic(res.s)
    for c, spec in zip([1, 2, 3], res.spectra):
        assert_allclose(spec, [c, c])


def test_family_shared_frame():
    rng = np.random.default_rng(42)
    s0 = random_symplectic(3, rng)
    spectra = [rng.uniform(0.5, 3.0, 3) for _ in range(3)]
    spectra[0][:2] = 1.0
    forms = [congruent_normal_form(lam, s0) for lam in spectra]
    res = family_diagonalize(forms)
    assert joint_sorted(*res.spectra) == joint_sorted(*spectra)
    r1, rs = res.residuals(forms)
    assert r1 <= 1e-8
    assert all(r <= 1e-7 * max(1.0, inf_norm(m)) for r, m in zip(rs, forms))


def test_family_reports_failing_pair():
    with pytest.raises(CommutatorError) as info:
        family_diagonalize([Q, 2 * Q, np.eye(2)])
    assert info.value.indices == (0, 2)


def test_power_residual_examples():
    rng = np.random.default_rng(43)
    m = random_pd(4, rng)
    assert power_commutator_residual(m, m, 0.7) <= 1e-12
    assert power_commutator_residual(np.eye(2), np.diag([2.0, 2.0]), 0.5) <= 1e-14


@pytest.mark.parametrize("s", [-1, 0.5, 2, np.pi])
def test_power_theorem(s):
    rng = np.random.default_rng(44)
    for _ in range(10):
        a, b = orthosymplectic_pair(rng, rng.integers(1, 5))
        assert power_commutator_residual(a, b, s) <= 1e-8


def test_power_precondition():
    rng = np.random.default_rng(45)
    a, b, _, _ = commuting_pair(rng, 2)  # [Ja, Jb] = 0 but [a, b] != 0 in general
    with pytest.raises(CommutatorError):
        power_commutator_residual(a, b, 0.5)


def test_mean_endpoints_and_identity():
    rng = np.random.default_rng(46)
    a, b = random_pd(4, rng), random_pd(4, rng)
    assert np.abs(geometric_mean(a, b, 0.0) - a).max() <= 1e-9 * max(1.0, np.abs(a).max())
    assert np.abs(geometric_mean(a, b, 1.0) - b).max() <= 1e-9 * max(1.0, np.abs(b).max())
    expected = scipy.linalg.fractional_matrix_power(b, 0.3).real
    assert_allclose(geometric_mean(np.eye(4), b, 0.3), expected, rtol=1e-9, atol=1e-11)


def test_mean_of_commuting_pair():
    rng = np.random.default_rng(47)
    q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    da, db = rng.uniform(0.5, 3, 4), rng.uniform(0.5, 3, 4)
    a, b = q @ np.diag(da) @ q.T, q @ np.diag(db) @ q.T
    expected = q @ np.diag(da**0.6 * db**0.4) @ q.T
    assert_allclose(geometric_mean(a, b, 0.4), expected, atol=1e-12)


@pytest.mark.parametrize("t", [-0.1, 1.5])
def test_mean_rejects_t(t):
    with pytest.raises(PreconditionError):
        geometric_mean(np.eye(2), np.eye(2), t)


def test_mean_rejects_non_pd():
    with pytest.raises(NotPositiveDefiniteError):
        geometric_mean(np.eye(2), np.diag([1.0, 0.0]), 0.5)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), t=st.floats(0, 1))
def test_mean_congruence_equivariance(seed, t):
    rng = np.random.default_rng(seed)
    a, b = random_pd(4, rng, floor=0.5), random_pd(4, rng, floor=0.5)
    m = np.eye(4) + 0.3 * rng.standard_normal((4, 4))
    lhs = m.T @ geometric_mean(a, b, t) @ m
    rhs = geometric_mean(m.T @ a @ m, m.T @ b @ m, t)
    assert np.abs(lhs - rhs).max() <= 1e-7 * max(1.0, np.abs(rhs).max())


def test_mean_family_shares_frame():
    rng = np.random.default_rng(48)
    a, b, _, _ = commuting_pair(rng, 3)
    s = simultaneous_williamson(a, b).s
    means = [geometric_mean(a, b, t) for t in (0.0, 0.25, 0.5, 0.75, 1.0)]
    family_diagonalize(means)
    n = 3
    for g in means:
        d = s.T @ g @ s
        spec = 0.5 * (np.diag(d)[:n] + np.diag(d)[n:])
        assert inf_norm(d - np.diag(np.concatenate([spec, spec]))) <= 1e-7 * max(1.0, inf_norm(g))
    assert is_symplectic(s)
