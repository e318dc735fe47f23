import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import cubicforms as cf
from cubicforms.errors import DimensionMismatchError, ZeroFormError
from cubicforms.forms import format_form_file, parse_form_file


def small_forms(max_n=4):
    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_n))
        n_terms = draw(st.integers(1, 5))
        coeffs = {}
        for _ in range(n_terms):
            idx = tuple(sorted(draw(st.tuples(*[st.integers(0, n - 1)] * 3))))
            coeffs[idx] = draw(st.integers(-9, 9))
        return cf.CubicForm(n, coeffs)
    return build()


def test_sup_norm_examples():
    assert cf.CubicForm.fermat(3).sup_norm() == 1
    # x1^2 x2 has third derivative 2, so norm 1/3
    c = cf.CubicForm.from_coeffs(2, {(0, 0, 1): 1})
    assert c.sup_norm() == Fraction(1, 3)
    c2 = cf.CubicForm.from_coeffs(3, {(0, 1, 2): 1})
    assert c2.sup_norm() == Fraction(1, 6)
    with pytest.raises(ZeroFormError):
        cf.CubicForm.zero(2).sup_norm()


def test_third_derivative_multiplicities():
    c = cf.CubicForm.from_coeffs(3, {(0, 0, 0): 2, (0, 0, 1): 3, (0, 1, 2): 5})
    assert c.third_derivative(0, 0, 0) == 12
    assert c.third_derivative(0, 1, 0) == 6
    assert c.third_derivative(2, 0, 1) == 5
    assert c.third_derivative(1, 1, 1) == 0


@settings(max_examples=60, deadline=None)
@given(small_forms(), st.lists(st.integers(-9, 9), min_size=1, max_size=4))
def test_euler_identity(c, xs):
    # x^T H_c(x) x = 6 c(x) / ||c||
    x = (xs * 4)[: c.n]
    if c.is_zero:
        return
    H = c.hessian(x)
    lhs = sum(x[p] * v for p, v in enumerate(H.apply(x)))
    assert lhs == 6 * c.evaluate(x) / c.sup_norm()


@settings(max_examples=60, deadline=None)
@given(small_forms(), st.lists(st.integers(-9, 9), min_size=1, max_size=4))
def test_gradient_matches_finite_structure(c, xs):
    # grad c(x) . x = 3 c(x) (homogeneity)
    x = (xs * 4)[: c.n]
    g = c.gradient(x)
    assert sum(gi * xi for gi, xi in zip(g, x)) == 3 * c.evaluate(x)


def test_hessian_is_linear_and_symmetric():
    c = cf.CubicForm.from_coeffs(3, {(0, 0, 1): 1, (1, 2, 2): -4})
    x = [1, 2, 3]
    y = [-1, 0, 5]
    Hx = c.unnormalized_hessian(x)
    Hy = c.unnormalized_hessian(y)
    Hxy = c.unnormalized_hessian([a + b for a, b in zip(x, y)])
    for p in range(3):
        for q in range(3):
            assert Hxy[p][q] == Hx[p][q] + Hy[p][q]
            assert Hx[p][q] == Hx[q][p]


def test_scaling_cancels_in_normalized_hessian():
    c = cf.CubicForm.from_coeffs(2, {(0, 0, 0): 1, (0, 1, 1): 2})
    x = [3, -2]
    assert c.hessian(x).entries == c.scale(7).hessian(x).entries


def test_linear_combination_and_beta():
    c1 = cf.CubicForm.fermat(4)
    c2 = cf.CubicForm.diagonal([1, -1, 0, 0])
    h = cf.linear_combination(cf.BetaVector((0, 1)), [c1, c2])
    assert h.diagonal_coefficients() == [1, -1, 0, 0]
    zero = cf.linear_combination([1, -1], [c2, c2])
    assert zero.is_zero


def test_trilinear_symmetry():
    c = cf.CubicForm.from_coeffs(3, {(0, 1, 2): 1, (0, 0, 0): -2})
    x, y, z = [1, 2, 3], [0, -1, 4], [2, 2, -5]
    vals = {cf.trilinear(c, *p) for p in ((x, y, z), (y, x, z), (z, y, x), (x, z, y))}
    assert len(vals) == 1


def test_form_file_roundtrip():
    forms = [cf.CubicForm.from_coeffs(3, {(0, 0, 0): 1, (0, 1, 2): Fraction(-1, 2)}),
             cf.CubicForm.fermat(3)]
    text = format_form_file(forms)
    back, backend = parse_form_file(text)
    assert backend == cf.EXACT
    assert [f.coeffs for f in back] == [f.coeffs for f in forms]
    assert format_form_file(back) == text


def test_form_file_errors():
    with pytest.raises(ValueError):
        parse_form_file("R 1\nform 1\n1 1 1 : 1\n")  # missing n
    with pytest.raises(ValueError):
        parse_form_file("n 2\nR 2\nform 1\n1 1 1 : 1\n")  # R mismatch


def test_bad_monomial_index_rejected():
    with pytest.raises(DimensionMismatchError):
        cf.CubicForm(2, {(0, 0, 2): 1})
