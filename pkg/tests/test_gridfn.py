"""Tests for the circle-grid analysis kernels."""

import numpy as np
import pytest

from blaschkelab.gridfn import (
    BoundaryGridFunction,
    bmo_norm_estimate,
    harmonic_conjugate,
    l2_norm,
    winding_number,
)

N = 1024
THETA = 2 * np.pi * np.arange(N) / N


class TestHarmonicConjugate:
    def test_cos_to_sin_exact(self):
        out = harmonic_conjugate(BoundaryGridFunction(np.cos(THETA)))
        np.testing.assert_allclose(out.samples, np.sin(THETA), atol=1e-13)

    def test_constant_to_zero(self):
        out = harmonic_conjugate(BoundaryGridFunction(np.full(N, 3.7)))
        np.testing.assert_allclose(out.samples, 0.0, atol=1e-13)

    def test_sin_to_minus_cos(self):
        out = harmonic_conjugate(BoundaryGridFunction(np.sin(THETA)))
        np.testing.assert_allclose(out.samples, -np.cos(THETA), atol=1e-13)

    def test_double_conjugation(self):
        rng = np.random.default_rng(0)
        f = np.zeros(N)
        for k in range(1, 12):
            f += rng.standard_normal() * np.cos(k * THETA) + rng.standard_normal() * np.sin(k * THETA)
        f += 2.5
        twice = harmonic_conjugate(harmonic_conjugate(BoundaryGridFunction(f)))
        np.testing.assert_allclose(twice.samples, -(f - f.mean()), atol=1e-10)

    def test_rejects_complex(self):
        with pytest.raises(ValueError):
            harmonic_conjugate(BoundaryGridFunction(np.exp(1j * THETA)))


class TestL2Norm:
    def test_constant(self):
        assert l2_norm(BoundaryGridFunction(np.full(N, 2.0 - 1.0j))) == pytest.approx(abs(2.0 - 1.0j))

    def test_unimodular(self):
        assert l2_norm(BoundaryGridFunction(np.exp(1j * THETA))) == pytest.approx(1.0)

    def test_cosine_parseval(self):
        assert l2_norm(BoundaryGridFunction(np.cos(THETA))) == pytest.approx(1 / np.sqrt(2))


class TestBMOEstimate:
    def test_constant_zero(self):
        assert bmo_norm_estimate(BoundaryGridFunction(np.full(N, 4.2))) < 1e-14

    def test_step_function(self):
        f = np.where(THETA < np.pi, 1.0, -1.0)
        val = bmo_norm_estimate(BoundaryGridFunction(f))
        assert 0.5 <= val <= 1.0

    def test_translation_invariance(self):
        rng = np.random.default_rng(1)
        f = rng.standard_normal(N)
        a = bmo_norm_estimate(BoundaryGridFunction(f))
        b = bmo_norm_estimate(BoundaryGridFunction(f + 17.0))
        assert a == pytest.approx(b, abs=1e-12)


class TestWindingNumber:
    def test_circle(self):
        assert winding_number(np.exp(1j * THETA)) == 1
        assert winding_number(np.exp(-2j * THETA)) == -2

    def test_offset_no_winding(self):
        assert winding_number(3.0 + np.exp(1j * THETA)) == 0

    def test_through_zero_raises(self):
        vals = np.exp(1j * THETA).copy()
        vals[5] = 0.0
        with pytest.raises(ValueError):
            winding_number(vals)


class TestSerialization:
    def test_json_round_trip(self):
        f = BoundaryGridFunction(np.exp(1j * THETA[:16]) if False else np.cos(THETA[:64]) + 0.5)
        g = BoundaryGridFunction.from_json(f.to_json())
        np.testing.assert_allclose(f.samples, g.samples)
        assert g.is_real

    def test_csv(self, tmp_path):
        f = BoundaryGridFunction(np.exp(1j * 2 * np.pi * np.arange(8) / 8))
        path = tmp_path / "f.csv"
        f.write_csv(path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == "theta,re,im"
        assert len(rows) == 9
