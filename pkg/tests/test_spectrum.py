import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from triband import (
    DegenerateOperatorError,
    Region,
    SpaceSpec,
    classify_lambda,
    fine_spectrum_report,
    make_operator,
    segment_membership,
    spectrum_segment,
)
from triband.spectrum import distance_to_segment


def test_segment_examples():
    seg = spectrum_segment(make_operator(1, 2))
    assert (seg.endpoint_low, seg.endpoint_high) == (-3, 5)
    seg = spectrum_segment(make_operator(0, 1))
    assert (seg.endpoint_low, seg.endpoint_high) == (-2, 2)


def test_complex_segment_traced_by_parametrization():
    op = make_operator(0, 1j)
    seg = spectrum_segment(op)
    assert (seg.endpoint_low, seg.endpoint_high) == (-2j, 2j)
    theta = np.linspace(0, 2 * np.pi, 101)
    pts = seg.point(theta)
    np.testing.assert_allclose(pts.real, 0, atol=1e-15)
    assert pts.imag.min() == pytest.approx(-2) and pts.imag.max() == pytest.approx(2)


def test_segment_geometry():
    seg = spectrum_segment(make_operator(1 + 1j, 2 - 1j))
    assert seg.midpoint == 1 + 1j
    assert seg.half_length == 2 * (2 - 1j)
    assert seg.point(0) == seg.endpoint_high
    assert seg.point(np.pi) == pytest.approx(seg.endpoint_low)


def test_degenerate_operator_rejected():
    op = make_operator(2, 0)
    for call in (lambda: spectrum_segment(op), lambda: classify_lambda(op, 1),
                 lambda: segment_membership(op, 2)):
        with pytest.raises(DegenerateOperatorError):
            call()


@pytest.mark.parametrize("r,s,lam,region", [
    (1, 2, 0, Region.CONTINUOUS_SPECTRUM),
    (1, 2, 6, Region.RESOLVENT_SET),
    (0, 1, 3, Region.RESOLVENT_SET),
    (0, 1, 2, Region.CONTINUOUS_SPECTRUM),
    (0, 1, 0, Region.CONTINUOUS_SPECTRUM),
])
def test_classification_examples(r, s, lam, region):
    assert classify_lambda(make_operator(r, s), lam).region is region


def test_classification_payload():
    c = classify_lambda(make_operator(0, 1), 3)
    assert c.roots.alpha1 == pytest.approx(0.381966011, abs=1e-9)
    assert c.distance == pytest.approx(1)
    assert c.root_gap == pytest.approx(1 - 0.381966011, abs=1e-9)
    assert not c.in_spectrum


def test_classify_rejects_nonpositive_tol():
    with pytest.raises(ValueError):
        classify_lambda(make_operator(0, 1), 3, tol=0)


def test_membership_examples():
    assert segment_membership(make_operator(1, 2), 5)
    assert not segment_membership(make_operator(1, 2), 1 + 0.5j)
    assert segment_membership(make_operator(0, 1), -1.999999, tol=1e-3)
    assert not segment_membership(make_operator(0, 1), -2.1)


def test_distance_to_segment():
    op = make_operator(0, 1)
    assert distance_to_segment(op, 3) == pytest.approx(1)
    assert distance_to_segment(op, 1 + 2j) == pytest.approx(2)
    assert distance_to_segment(op, 0.5) == 0
    assert distance_to_segment(make_operator(0, 1j), 1) == pytest.approx(1)


scalars = st.floats(-10, 10, allow_nan=False)


@settings(max_examples=2_000, deadline=None)
@given(
    r=st.builds(complex, scalars, scalars),
    s=st.builds(complex, scalars, scalars).filter(lambda z: abs(z) > 0.1),
    mu=st.builds(complex, st.floats(-3, 3), st.floats(-2, 2)),
)
def test_root_test_agrees_with_geometry(r, s, mu):
    op = make_operator(r, s)
    lam = r + 2 * s * mu
    if distance_to_segment(op, lam) <= 1e-6 or min(abs(mu - 1), abs(mu + 1)) * abs(2 * s) <= 1e-6:
        return
    resolvent = classify_lambda(op, lam).region is Region.RESOLVENT_SET
    assert resolvent != segment_membership(op, lam)


def test_parametrization_closure():
    for r, s in [(0, 1), (1, 2), (2, -1), (1, 1 + 1j)]:
        op = make_operator(r, s)
        for theta in np.linspace(0, 2 * np.pi, 100):
            lam = r + 2 * s * math.cos(theta)
            assert classify_lambda(op, lam).region is Region.CONTINUOUS_SPECTRUM


@settings(max_examples=200, deadline=None)
@given(r=st.integers(-1000, 1000), s=st.integers(-1000, 1000).filter(bool), c=st.integers(-50, 50).filter(bool))
def test_scale_covariance(r, s, c):
    base = spectrum_segment(make_operator(r, s))
    scaled = spectrum_segment(make_operator(c * r, c * s))
    assert scaled.endpoint_low == c * base.endpoint_low
    assert scaled.endpoint_high == c * base.endpoint_high


@pytest.mark.parametrize("p", [1.1, 2, 3, 10])
def test_space_independence(p):
    op = make_operator(1, 2)
    lp = fine_spectrum_report(op, SpaceSpec.lp(p))
    bv = fine_spectrum_report(op, SpaceSpec.bvp(p))
    for report in (lp, bv):
        assert (report.spectrum.endpoint_low, report.spectrum.endpoint_high) == (-3, 5)
        assert report.continuous == report.spectrum
        assert report.point == report.residual == report.adjoint_point == ()
    assert (lp.spectrum, lp.continuous, lp.point, lp.residual) == (bv.spectrum, bv.continuous, bv.point, bv.residual)


def test_fine_spectrum_example_unit_shift():
    report = fine_spectrum_report(make_operator(0, 1), SpaceSpec.lp(2))
    assert (report.continuous.endpoint_low, report.continuous.endpoint_high) == (-2, 2)


@pytest.mark.parametrize("p", [1, 0.5, math.inf])
def test_fine_spectrum_rejects_exponent(p):
    with pytest.raises(ValueError):
        fine_spectrum_report(make_operator(0, 1), SpaceSpec("lp", p))
