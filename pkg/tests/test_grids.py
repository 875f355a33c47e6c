import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdcsim.errors import GridError, UsageError
from spdcsim.grids import FrequencyGrid, JointAmplitudeGrid, TimeGrid, edge_fraction, next_pow2


@given(st.sampled_from([64, 128, 256, 1024]), st.floats(1e12, 1e16))
def test_conjugate_axes(n, span):
    g = FrequencyGrid(n, span)
    t = g.conjugate()
    assert t.n == n
    assert g.step * t.step * n == pytest.approx(2 * math.pi)
    assert t.conjugate().span == pytest.approx(span)
    assert g.samples[n // 2] == 0.0


@pytest.mark.parametrize("n", [0, 32, 100, 513])
def test_bad_sizes(n):
    with pytest.raises(GridError):
        FrequencyGrid(n, 1.0)


def test_bad_span():
    with pytest.raises(GridError):
        TimeGrid(64, -1.0)
    with pytest.raises(GridError):
        FrequencyGrid(64, math.inf)


def test_amplitude_grid_is_read_only_and_normalizes():
    g = FrequencyGrid(64, 1.0)
    a = JointAmplitudeGrid(np.ones((64, 64), complex), g, g, normalized=False)
    with pytest.raises(ValueError):
        a.values[0, 0] = 2
    b = a.normalize()
    assert b.norm2() == pytest.approx(1.0)
    assert b.normalized


def test_domain_and_shape_checks():
    g = FrequencyGrid(64, 1.0)
    with pytest.raises(UsageError):
        JointAmplitudeGrid(np.ones((64, 64)), g, g, domain="temporal")
    with pytest.raises(UsageError):
        JointAmplitudeGrid(np.ones((64, 32)), g, g)
    with pytest.raises(UsageError):
        JointAmplitudeGrid(np.ones((64, 64)), g, g, domain="spectrum")
    with pytest.raises(GridError):
        JointAmplitudeGrid(np.zeros((64, 64)), g, g).normalize()


def test_edge_fraction():
    w = np.zeros((10, 10))
    w[5, 5] = 1.0
    assert edge_fraction(w) == 0.0
    w[0, 0] = 1.0
    assert edge_fraction(w) == pytest.approx(0.5)


@given(st.floats(1, 1e6))
def test_next_pow2(x):
    p = next_pow2(x)
    assert p >= x and p < 2 * x + 1 and p & (p - 1) == 0
