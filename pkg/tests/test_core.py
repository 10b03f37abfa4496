import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triband import (
    DegenerateOperatorError,
    apply,
    char_roots,
    make_operator,
    truncation_matrix,
)

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
complex_scalars = st.builds(complex, finite, finite)


def test_make_operator_keeps_values():
    op = make_operator(1, 2)
    assert (op.r, op.s) == (1.0, 2.0)
    assert not op.degenerate and op.is_real


def test_make_operator_flags_degenerate():
    op = make_operator(2, 0)
    assert op.degenerate
    with pytest.raises(DegenerateOperatorError):
        char_roots(op, 1.0)


@pytest.mark.parametrize("bad", [float("nan"), float("inf"), complex(1, float("inf"))])
def test_make_operator_rejects_non_finite(bad):
    with pytest.raises(ValueError):
        make_operator(bad, 1)
    with pytest.raises(ValueError):
        make_operator(0, bad)


def test_complex_parameters_stay_complex():
    op = make_operator(1, 1 + 1j)
    assert op.s == 1 + 1j and not op.is_real
    assert make_operator(1 + 0j, 2).is_real


def test_char_roots_golden_ratio_pair():
    roots = char_roots(make_operator(0, 1), 3)
    assert roots.alpha1 == pytest.approx((3 - 5 ** 0.5) / 2, abs=1e-15)
    assert roots.alpha2 == pytest.approx((3 + 5 ** 0.5) / 2, abs=1e-15)
    assert not roots.is_double_root


@pytest.mark.parametrize("r,s", [(0, 1), (1, 2), (2, -1), (1, 1 + 1j)])
def test_char_roots_at_diagonal_value_are_plus_minus_i(r, s):
    roots = char_roots(make_operator(r, s), r)
    assert {complex(np.round(roots.alpha1, 14)), complex(np.round(roots.alpha2, 14))} == {1j, -1j}
    assert abs(roots.alpha1) == pytest.approx(1) and abs(roots.alpha2) == pytest.approx(1)


@pytest.mark.parametrize("r,s", [(0, 1), (1, 2), (-3, 0.5), (1, 1 + 1j)])
def test_double_roots_at_segment_ends(r, s):
    op = make_operator(r, s)
    low = char_roots(op, r - 2 * s)
    assert low.is_double_root and low.ratio_q == pytest.approx(2)
    assert low.alpha1 == low.alpha2 == -1
    high = char_roots(op, r + 2 * s)
    assert high.is_double_root and high.alpha1 == high.alpha2 == 1


def test_double_root_needs_q_near_two_not_modulus_two():
    # |q| = 2 but q = 2i: two distinct roots of modulus != 1
    roots = char_roots(make_operator(0, 1), 2j)
    assert not roots.is_double_root
    assert abs(roots.alpha1 - roots.alpha2) > 1


def test_char_roots_no_cancellation_far_from_segment():
    # q = -1e8: the small root is ~1e-8 and would lose all digits with the naive formula
    roots = char_roots(make_operator(0, 1), 1e8)
    assert roots.alpha1 == pytest.approx(1e-8, rel=1e-14)


def test_root_product_on_ten_thousand_random_inputs():
    rng = np.random.default_rng(7)
    z = rng.uniform(-50, 50, (10_000, 3)) + 1j * rng.uniform(-50, 50, (10_000, 3))
    for r, s, lam in z:
        roots = char_roots(make_operator(r, s), lam)
        assert abs(roots.alpha1 * roots.alpha2 - 1) <= 1e-10


@settings(max_examples=500, deadline=None)
@given(r=complex_scalars, s=complex_scalars.filter(lambda z: abs(z) > 1e-3), lam=complex_scalars)
def test_root_product_and_residual(r, s, lam):
    roots = char_roots(make_operator(r, s), lam)
    assert abs(roots.alpha1 * roots.alpha2 - 1) <= 1e-10
    assert abs(roots.alpha1) <= abs(roots.alpha2)
    scale = abs(s) * abs(roots.alpha2) ** 2 + abs(r - lam) * abs(roots.alpha2) + abs(s)
    for a in (roots.alpha1, roots.alpha2):
        assert abs(s * a * a + (r - lam) * a + s) <= 1e-12 * max(scale, 1.0) * 10


@settings(max_examples=300, deadline=None)
@given(r=complex_scalars, s=complex_scalars.filter(lambda z: abs(z) > 1e-3), theta=st.floats(0, 2 * np.pi))
def test_segment_points_have_unimodular_roots(r, s, theta):
    roots = char_roots(make_operator(r, s), r + 2 * s * np.cos(theta))
    assert abs(roots.modulus - 1) <= 1e-6


def test_truncation_matrix_examples():
    np.testing.assert_array_equal(
        truncation_matrix(make_operator(0, 1), 3).toarray(),
        [[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    np.testing.assert_array_equal(truncation_matrix(make_operator(2, 1), 2, lam=1).toarray(), [[1, 1], [1, 1]])
    np.testing.assert_array_equal(truncation_matrix(make_operator(1, 2), 1).toarray(), [[1]])


@pytest.mark.parametrize("N", [0, -1, 2.5])
def test_truncation_matrix_rejects_bad_order(N):
    with pytest.raises(ValueError):
        truncation_matrix(make_operator(0, 1), N)


def test_truncation_banded_storage_matches_dense():
    T = truncation_matrix(make_operator(1 - 1j, 2j), 5, lam=0.5)
    dense = T.toarray()
    ab = T.banded()
    for i in range(5):
        for j in range(max(0, i - 1), min(5, i + 2)):
            assert ab[1 + i - j, j] == dense[i, j]


@settings(max_examples=100, deadline=None)
@given(r=complex_scalars, s=complex_scalars, lam=complex_scalars, N=st.integers(1, 30))
def test_truncation_symmetric_and_tridiagonal(r, s, lam, N):
    A = truncation_matrix(make_operator(r, s), N, lam).toarray()
    np.testing.assert_array_equal(A, A.T)
    i, j = np.indices(A.shape)
    assert np.all(A[np.abs(i - j) > 1] == 0)


def test_apply_basis_vector():
    np.testing.assert_array_equal(apply(make_operator(2, 1), [0, 1, 0]), [1, 2, 1, 0])


def test_apply_zero():
    np.testing.assert_array_equal(apply(make_operator(3, -2), np.zeros(4)), np.zeros(5))


def test_apply_three_ones():
    # y0 = r x0 + s x1, y1 = s x0 + r x1 + s x2, y2 = s x1 + r x2, y3 = s x2
    np.testing.assert_array_equal(apply(make_operator(0, 1), [1, 1, 1]), [1, 2, 1, 1])


def test_apply_empty_sequence():
    np.testing.assert_array_equal(apply(make_operator(1, 1), []), [0.0])


def test_apply_rejects_non_finite():
    with pytest.raises(ValueError):
        apply(make_operator(0, 1), [1.0, np.nan])


@settings(max_examples=200, deadline=None)
@given(
    r=st.integers(-9, 9), s=st.integers(-9, 9),
    x=st.lists(st.integers(-100, 100), min_size=1, max_size=40),
)
def test_apply_agrees_with_truncation(r, s, x):
    op = make_operator(r, s)
    N = len(x)
    image = apply(op, np.array(x, dtype=float))
    np.testing.assert_array_equal(image[:N], truncation_matrix(op, N) @ np.array(x, dtype=float))
    assert image[N] == s * x[-1]


@settings(max_examples=100, deadline=None)
@given(r=complex_scalars, s=complex_scalars, x=st.lists(complex_scalars, min_size=1, max_size=20))
def test_apply_matches_loop_definition(r, s, x):
    op = make_operator(r, s)
    padded = [0] + list(x) + [0, 0]
    expected = [s * padded[k] + r * padded[k + 1] + s * padded[k + 2] for k in range(len(x) + 1)]
    np.testing.assert_allclose(apply(op, x), expected, rtol=1e-13, atol=1e-10)


def test_cmath_reference_roots():
    # independent reference: roots of x^2 + q x + 1 via numpy.roots
    op = make_operator(0.3, -1.7 + 0.2j)
    lam = 2 - 3j
    q = (op.r - lam) / op.s
    ref = sorted(np.roots([1, q, 1]), key=abs)
    roots = char_roots(op, lam)
    assert cmath.isclose(roots.alpha1, ref[0], rel_tol=1e-12)
    assert cmath.isclose(roots.alpha2, ref[1], rel_tol=1e-12)
