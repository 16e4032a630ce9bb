"""Tests for uniform periodic grids and trigonometric interpolation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lamesusy.errors import DomainError
from lamesusy.grid import GridFunction


def trig_poly(x):
    return 1.0 + np.sin(x) - 0.4 * np.cos(3 * x) + 0.05 * np.sin(7 * x)


class TestGridFunction:
    def test_requires_minimum_samples(self):
        with pytest.raises(DomainError):
            GridFunction(period=1.0, samples=np.ones(16))

    def test_rejects_nonfinite(self):
        bad = np.ones(64)
        bad[3] = np.inf
        with pytest.raises(DomainError):
            GridFunction(period=1.0, samples=bad)

    def test_x_grid(self):
        g = GridFunction.from_function(np.sin, 2 * math.pi, 64)
        assert g.n == 64
        assert g.x[0] == 0.0
        assert g.x[1] == pytest.approx(2 * math.pi / 64)

    def test_eval_reproduces_samples(self):
        g = GridFunction.from_function(trig_poly, 2 * math.pi, 128)
        assert np.max(np.abs(g.eval(g.x) - g.samples)) <= 1e-12

    def test_eval_interpolates_band_limited_exactly(self):
        g = GridFunction.from_function(trig_poly, 2 * math.pi, 128)
        pts = np.linspace(0.05, 6.0, 77)
        assert np.max(np.abs(g.eval(pts) - trig_poly(pts))) <= 1e-12

    def test_eval_scalar(self):
        g = GridFunction.from_function(np.cos, 2 * math.pi, 64)
        assert isinstance(g.eval(0.3), float)
        assert g.eval(0.3) == pytest.approx(math.cos(0.3), abs=1e-12)

    @given(st.floats(0, 2 * math.pi))
    @settings(max_examples=60, deadline=None)
    def test_shifted_matches_direct_evaluation(self, a):
        g = GridFunction.from_function(trig_poly, 2 * math.pi, 128)
        got = g.shifted(a)
        want = trig_poly(g.x - a)
        assert np.max(np.abs(got - want)) <= 1e-11

    def test_shift_with_reflection(self):
        g = GridFunction.from_function(trig_poly, 2 * math.pi, 128)
        a = 0.813
        got = g.shifted(a, reflect=True)
        want = trig_poly(-(g.x - a))
        assert np.max(np.abs(got - want)) <= 1e-11

    def test_spectral_derivatives(self):
        g = GridFunction.from_function(trig_poly, 2 * math.pi, 128)
        d1 = lambda x: np.cos(x) + 1.2 * np.sin(3 * x) + 0.35 * np.cos(7 * x)
        d2 = lambda x: -np.sin(x) + 3.6 * np.cos(3 * x) - 2.45 * np.sin(7 * x)
        assert np.max(np.abs(g.derivative(1).samples - d1(g.x))) <= 1e-10
        assert np.max(np.abs(g.derivative(2).samples - d2(g.x))) <= 1e-9

    def test_spectral_filter_removes_noise_floor(self):
        rng = np.random.default_rng(7)
        noisy = trig_poly(np.arange(256) * (2 * math.pi / 256))
        noisy = noisy + 1e-12 * rng.standard_normal(256)
        g = GridFunction(2 * math.pi, noisy).spectral_filter(1e-9)
        c = np.abs(np.fft.rfft(g.samples))
        # only the true modes survive (the rfft round trip leaves
        # 1e-15-level dust on the zeroed ones)
        assert np.count_nonzero(c > 1e-13 * c.max()) <= 4
