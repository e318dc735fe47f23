import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import cubicforms as cf
from cubicforms import minors as mn
from cubicforms.errors import DimensionMismatchError, RankDeficientError


def test_index_tuples_lex_order():
    ts = mn.index_tuples(2, 4)
    assert ts.tuples == ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
    with pytest.raises(DimensionMismatchError):
        mn.index_tuples(5, 4)


def test_det_matches_numpy():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(1, 6))
        A = rng.integers(-9, 10, size=(n, n))
        assert mn.det(A.tolist()) == round(float(np.linalg.det(A.astype(float))))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_cauchy_binet_exact(seed):
    rng = np.random.default_rng(seed)
    l, m, n = (int(rng.integers(1, 6)) for _ in range(3))
    k = int(rng.integers(1, min(l, m, n, 4) + 1))
    L = rng.integers(-9, 10, size=(l, m)).tolist()
    M = rng.integers(-9, 10, size=(m, n)).tolist()
    _, _, diff = mn.cauchy_binet(L, M, k)
    assert all(v == 0 for row in diff.entries for v in row)


def test_minors_vector_of_hessian():
    c = cf.CubicForm.fermat(3)
    mv = mn.minors_vector(c, [1, 2, 3], 2)
    # H = diag(6,12,18): 2x2 principal minors 72, 108, 216; off-diagonal ones 0
    assert set(abs(v) for v in mv.entries) == {0, 72, 108, 216}
    assert mv.sup_norm() == 216


def test_minors_jacobian_directional_derivative():
    # Delta^(k)(x) entries are degree-k polynomials; check J t against a
    # central difference of the exact minors along t.
    c = cf.CubicForm.from_coeffs(3, {(0, 0, 1): 2, (1, 1, 2): -1, (0, 1, 2): 3})
    x = [1.0, -2.0, 1.5]
    t = [0.3, 0.7, -0.2]
    k = 2
    J = mn.minors_jacobian(c.to_float(), x, k).to_array()
    h = 1e-5
    up = np.array(mn.minors_vector(c.to_float(), [a + h * b for a, b in zip(x, t)], k).entries)
    dn = np.array(mn.minors_vector(c.to_float(), [a - h * b for a, b in zip(x, t)], k).entries)
    fd = (up - dn) / (2 * h)
    assert np.allclose(J @ np.array(t), fd, atol=1e-6)


def test_singular_values_symmetric_are_abs_eigs():
    A = np.diag([3.0, -5.0, 0.5])
    spec = mn.singular_values(A)
    assert spec.values == (5.0, 3.0, 0.5)
    with pytest.raises(DimensionMismatchError):
        mn.singular_values(np.array([[np.inf, 0], [0, 1.0]]))


def test_minor_sv_bounds_random():
    rng = np.random.default_rng(1)
    for _ in range(50):
        A = rng.standard_normal((5, 5))
        for k in range(1, 5):
            assert mn.minor_sv_bounds(A, k).passes


def test_big_subspace_certificate():
    rng = np.random.default_rng(2)
    for _ in range(30):
        A = rng.standard_normal((4, 4))
        k = int(rng.integers(1, 5))
        spec = mn.singular_values(A)
        if spec[k - 1] < 1e-6:
            continue
        big = mn.big_subspace(A, k)
        # ||A v||_inf >= kappa Lambda_k ||v||_inf for v in the coordinate span
        for _ in range(20):
            w = rng.standard_normal(k)
            v = np.zeros(4)
            for i, idx in enumerate(big.indices):
                v[idx - 1] = w[i]
            if np.max(np.abs(v)) == 0:
                continue
            assert np.max(np.abs(A @ v)) >= big.kappa * spec[k - 1] * np.max(np.abs(v)) * (1 - 1e-9)


def test_big_subspace_rank_deficient():
    with pytest.raises(RankDeficientError):
        mn.big_subspace(np.zeros((3, 3)), 1)


def test_small_or_big_examples():
    sb = mn.small_or_big(np.diag([1.0, 1e-6, 1e-6]), 2, 1e3)
    assert isinstance(sb, mn.SmallSpace)
    assert len(sb.basis) == 2
    # certificate holds on the span
    A = np.diag([1.0, 1e-6, 1e-6])
    for v in sb.basis:
        va = np.array(v)
        assert np.max(np.abs(A @ va)) <= 1e-3 * np.max(np.abs(va)) + 1e-12
    bg = mn.small_or_big(np.eye(3), 2, 10.0)
    assert isinstance(bg, mn.BigSpace)
    assert len(bg.indices) == 2
    with pytest.raises(DimensionMismatchError):
        mn.small_or_big(np.eye(2), 1, 0.5)
