import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.errors import InvariantError, PreconditionError
from measurement.lattice import (
    LatticeInterval,
    RationalStep,
    SampleSet,
    quantize,
    quantize_array,
)

TENTH = RationalStep(1, 10)


@pytest.mark.parametrize(
    ("x", "expected"),
    [(0.26, 3), (0.25, 2), (-0.26, -3), (0.75, 8), (-0.25, -2), (0.0, 0), (0.04, 0)],
)
def test_quantize_examples(x, expected):
    assert quantize(x, TENTH) == expected


def test_quantize_array_agrees_with_scalar_rounding():
    xs = np.array([0.26, 0.25, -0.26, 0.75, 0.35, -0.45, 1.05, 12.3456, -7.0])
    expected = [quantize(float(x), TENTH) for x in xs]
    assert quantize_array(xs, TENTH).tolist() == expected


def test_quantize_rejects_non_finite():
    with pytest.raises(InvariantError):
        quantize(math.nan, TENTH)
    with pytest.raises(InvariantError):
        quantize_array([0.0, math.inf], TENTH)


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_quantize_is_odd(x):
    assert quantize(-x, TENTH) == -quantize(x, TENTH)


@given(st.floats(-1e3, 1e3, allow_nan=False))
def test_quantize_lands_within_half_a_step(x):
    m = quantize(x, TENTH)
    assert abs(x - m / 10) <= 0.05 + 1e-12


def test_rational_step_is_normalized():
    step = RationalStep(2, 20)
    assert (step.numerator, step.denominator) == (1, 10)
    assert step == TENTH
    assert str(RationalStep.parse(" 3/60 ")) == "1/20"
    assert RationalStep.parse("2").value == 2.0


@pytest.mark.parametrize("text", ["0.1", "1/0", "-1/10", "a/b", ""])
def test_rational_step_parse_errors(text):
    with pytest.raises(InvariantError):
        RationalStep.parse(text)


def test_half_points(twentieth):
    assert twentieth.half_point(0) == -0.025
    assert twentieth.half_point(5) == pytest.approx(0.225)


def test_interval_from_endpoints(twentieth):
    iv = LatticeInterval.from_endpoints(-0.225, 0.225, twentieth)
    assert (iv.lower, iv.upper) == (-4, 5)
    assert iv.contains([-5, -4, 0, 4, 5]).tolist() == [False, True, True, True, False]


def test_off_lattice_endpoint_is_rejected(twentieth):
    with pytest.raises(PreconditionError):
        LatticeInterval.from_endpoints(-0.2, 0.225, twentieth)
    with pytest.raises(PreconditionError):
        LatticeInterval(3, 2, twentieth)


def test_sample_set_is_read_only_and_compares_by_value(tenth):
    s = SampleSet([1, 2, 3], tenth)
    assert s.n == 3
    assert s.values() == pytest.approx([0.1, 0.2, 0.3])
    assert s == SampleSet(np.array([1, 2, 3]), RationalStep(2, 20))
    with pytest.raises(ValueError):
        s.indices[0] = 5
    with pytest.raises(InvariantError):
        SampleSet([], tenth)
