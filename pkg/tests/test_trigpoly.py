import cmath

import numpy as np
import pytest

from curvelift import (DegenerateInputError, FreqRect, TrigPoly,
                       hermitian_project, random_hermitian, zero_set_raster)
from curvelift.trigpoly import read_trigpoly, write_trigpoly


def direct_eval(poly, x, y):
    """Independent oracle: plain double sum with cmath, no vectorization."""
    total = 0.0 + 0.0j
    rect = poly.support
    for kx in range(-rect.kmax_x, rect.kmax_x + 1):
        for ky in range(-rect.kmax_y, rect.kmax_y + 1):
            c = poly.coeffs[kx + rect.kmax_x, ky + rect.kmax_y]
            total += c * cmath.exp(2j * cmath.pi * (kx * x + ky * y))
    return total


def cos_x_poly():
    return TrigPoly.from_terms(FreqRect(1, 0), {(1, 0): 0.5, (-1, 0): 0.5})


class TestEval:
    def test_constant(self):
        p = TrigPoly.constant(1.0)
        assert p.eval([(0.3, 0.7)])[0] == pytest.approx(1.0 + 0.0j)
        assert p.eval([(0.0, 0.0), (0.99, 0.5)])[1] == pytest.approx(1.0 + 0.0j)

    def test_cosine_zero(self):
        p = cos_x_poly()
        assert abs(p.eval([(0.25, 0.9)])[0]) <= 1e-15

    def test_matches_direct_sum_oracle(self):
        rng = np.random.default_rng(3)
        p = random_hermitian(FreqRect(3, 3), rng, ensure_curve=False)
        pts = rng.random((100, 2))
        got = p.eval(pts)
        want = np.array([direct_eval(p, x, y) for x, y in pts])
        assert np.max(np.abs(got - want)) <= 1e-12 * np.max(np.abs(want))

    def test_periodic_wrap(self):
        rng = np.random.default_rng(4)
        p = random_hermitian(FreqRect(2, 2), rng, ensure_curve=False)
        a = p.eval([(0.3, 0.4)])
        b = p.eval([(1.3, -0.6)])
        np.testing.assert_allclose(a, b, rtol=1e-12)

    def test_empty_points(self):
        assert cos_x_poly().eval([]).shape == (0,)

    def test_hermitian_implies_real(self):
        rng = np.random.default_rng(5)
        p = random_hermitian(FreqRect(3, 2), rng, ensure_curve=False)
        vals = p.eval(rng.random((50, 2)))
        assert np.max(np.abs(vals.imag)) <= 1e-12 * np.sum(np.abs(p.coeffs))


class TestAlgebra:
    def test_multiply_identity(self):
        rng = np.random.default_rng(6)
        p = random_hermitian(FreqRect(2, 2), rng, ensure_curve=False)
        delta = TrigPoly.constant(1.0)
        q = p.multiply(delta)
        assert q.support == p.support
        np.testing.assert_array_equal(q.coeffs, p.coeffs)

    def test_multiply_support_arithmetic(self):
        p = TrigPoly.zeros(FreqRect(1, 1))
        q = TrigPoly.zeros(FreqRect(2, 0))
        assert p.multiply(q).support == FreqRect(3, 1)

    def test_multiply_pointwise(self):
        rng = np.random.default_rng(7)
        p = random_hermitian(FreqRect(2, 1), rng, ensure_curve=False)
        q = random_hermitian(FreqRect(1, 3), rng, ensure_curve=False)
        pts = rng.random((50, 2))
        got = p.multiply(q).eval(pts)
        want = p.eval(pts) * q.eval(pts)
        assert np.max(np.abs(got - want)) <= 1e-12 * np.max(np.abs(want))

    def test_power_one(self):
        rng = np.random.default_rng(8)
        p = random_hermitian(FreqRect(2, 2), rng, ensure_curve=False)
        np.testing.assert_array_equal(p.power(1).coeffs, p.coeffs)

    def test_power_of_scaled_delta(self):
        p = TrigPoly.constant(2.0)
        assert p.power(3).coeffs[0, 0] == pytest.approx(8.0)

    def test_power_two_equals_multiply(self):
        rng = np.random.default_rng(9)
        p = random_hermitian(FreqRect(2, 2), rng, ensure_curve=False)
        a = p.power(2)
        b = p.multiply(p)
        assert a.support == b.support
        assert np.max(np.abs(a.coeffs - b.coeffs)) <= 1e-13 * np.max(np.abs(b.coeffs))

    def test_power_support_scaling(self):
        p = TrigPoly.zeros(FreqRect(2, 3))
        assert p.power(3).support == FreqRect(6, 9)

    def test_power_zero_rejected(self):
        with pytest.raises(ValueError):
            cos_x_poly().power(0)


class TestGradient:
    def test_constant_gradient_zero(self):
        dx, dy = TrigPoly.constant(5.0).gradient()
        assert not np.any(dx.coeffs)
        assert not np.any(dy.coeffs)

    def test_cosine_analytic(self):
        dx, dy = cos_x_poly().gradient()
        rect = dx.support
        assert dx.coeffs[rect.index_of(1, 0)] == pytest.approx(1j * np.pi)
        assert dx.coeffs[rect.index_of(-1, 0)] == pytest.approx(-1j * np.pi)
        assert not np.any(dy.coeffs)
        # matches -2*pi*sin(2*pi*x) pointwise
        xs = np.linspace(0, 1, 7, endpoint=False)
        pts = np.stack([xs, np.zeros_like(xs)], axis=1)
        np.testing.assert_allclose(dx.eval(pts).real, -2 * np.pi * np.sin(2 * np.pi * xs),
                                   atol=1e-12)

    def test_finite_difference_oracle(self):
        rng = np.random.default_rng(10)
        p = random_hermitian(FreqRect(3, 3), rng, ensure_curve=False)
        dx, dy = p.gradient()
        h = 1e-5
        pts = rng.random((20, 2))
        for x, y in pts:
            fd_x = (p.eval([(x + h, y)])[0] - p.eval([(x - h, y)])[0]) / (2 * h)
            fd_y = (p.eval([(x, y + h)])[0] - p.eval([(x, y - h)])[0]) / (2 * h)
            assert abs(fd_x - dx.eval([(x, y)])[0]) <= 1e-6 * max(1.0, abs(fd_x))
            assert abs(fd_y - dy.eval([(x, y)])[0]) <= 1e-6 * max(1.0, abs(fd_y))


class TestHermitianProject:
    def test_already_hermitian_unchanged(self):
        rng = np.random.default_rng(11)
        p = random_hermitian(FreqRect(2, 2), rng, ensure_curve=False)
        q = hermitian_project(p.coeffs)
        assert np.max(np.abs(q.coeffs - p.coeffs)) <= 1e-15 * np.max(np.abs(p.coeffs))

    def test_phase_recovery_up_to_sign(self):
        rng = np.random.default_rng(12)
        p = random_hermitian(FreqRect(3, 2), rng, ensure_curve=False)
        rotated = np.exp(1j * np.pi / 3) * p.coeffs
        q = hermitian_project(rotated)
        err = min(np.max(np.abs(q.coeffs - p.coeffs)), np.max(np.abs(q.coeffs + p.coeffs)))
        assert err <= 1e-12 * np.max(np.abs(p.coeffs))

    def test_output_exactly_hermitian(self):
        rng = np.random.default_rng(13)
        raw = rng.standard_normal((5, 7)) + 1j * rng.standard_normal((5, 7))
        q = hermitian_project(raw)
        assert q.hermitian_error() == 0.0

    def test_zero_input_degenerate(self):
        with pytest.raises(DegenerateInputError):
            hermitian_project(np.zeros((3, 3), dtype=complex))


class TestZeroSetRaster:
    def test_constant_empty(self):
        img = zero_set_raster(TrigPoly.constant(1.0), 16)
        assert not img.any()

    def test_cosine_columns(self):
        img = zero_set_raster(cos_x_poly(), 64)
        cols = np.nonzero(img.any(axis=1))[0]
        np.testing.assert_array_equal(cols, [16, 48])
        assert img[16].all() and img[48].all()

    def test_oversampled_oracle(self):
        rng = np.random.default_rng(14)
        p = random_hermitian(FreqRect(2, 2), rng)
        n = 48
        img = zero_set_raster(p, n)
        # brute force: sign scan at 4x resolution, OR-pooled back down
        fine = p.eval_grid(4 * n).real
        sc = (fine * np.roll(fine, -1, 0) <= 0) | (fine * np.roll(fine, -1, 1) <= 0)
        pooled = sc.reshape(n, 4, n, 4).any(axis=(1, 3))
        assert (img <= _dilate(pooled)).all()
        assert (pooled <= _dilate(img)).all()

    def test_scale_invariance(self):
        rng = np.random.default_rng(15)
        p = random_hermitian(FreqRect(2, 2), rng)
        a = zero_set_raster(p, 32)
        b = zero_set_raster(137.0 * p, 32)
        np.testing.assert_array_equal(a, b)

    def test_threshold_mode(self):
        img = zero_set_raster(cos_x_poly(), 64, mode="threshold", tol=1e-6)
        cols = np.nonzero(img.any(axis=1))[0]
        np.testing.assert_array_equal(cols, [16, 48])

    def test_non_hermitian_rejected(self):
        p = TrigPoly.from_terms(FreqRect(1, 0), {(1, 0): 1.0})
        with pytest.raises(ValueError):
            zero_set_raster(p, 16)

    def test_too_coarse_rejected(self):
        rng = np.random.default_rng(16)
        p = random_hermitian(FreqRect(3, 3), rng)
        with pytest.raises(ValueError):
            zero_set_raster(p, 8)


def _dilate(mask):
    out = mask.copy()
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            out |= np.roll(np.roll(mask, dx, axis=0), dy, axis=1)
    return out


class TestTrigpolyFile:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(17)
        p = random_hermitian(FreqRect(2, 3), rng, ensure_curve=False)
        path = tmp_path / "p.tp"
        write_trigpoly(path, p)
        q = read_trigpoly(path)
        assert q.support == p.support
        np.testing.assert_array_equal(q.coeffs, p.coeffs)
        # write -> read -> write is byte-identical
        path2 = tmp_path / "p2.tp"
        write_trigpoly(path2, q)
        assert path.read_bytes() == path2.read_bytes()

    def test_missing_entries_rejected(self, tmp_path):
        rng = np.random.default_rng(18)
        p = random_hermitian(FreqRect(1, 1), rng, ensure_curve=False)
        path = tmp_path / "p.tp"
        write_trigpoly(path, p)
        lines = path.read_text().splitlines()
        (tmp_path / "short.tp").write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(ValueError):
            read_trigpoly(tmp_path / "short.tp")

    def test_out_of_order_rejected(self, tmp_path):
        rng = np.random.default_rng(19)
        p = random_hermitian(FreqRect(1, 1), rng, ensure_curve=False)
        path = tmp_path / "p.tp"
        write_trigpoly(path, p)
        lines = path.read_text().splitlines()
        lines[1], lines[2] = lines[2], lines[1]
        (tmp_path / "swapped.tp").write_text("\n".join(lines) + "\n")
        with pytest.raises(ValueError):
            read_trigpoly(tmp_path / "swapped.tp")

    def test_bad_header_rejected(self, tmp_path):
        (tmp_path / "bad.tp").write_text("NOPE 1 1\n")
        with pytest.raises(ValueError):
            read_trigpoly(tmp_path / "bad.tp")


class TestFreqRect:
    def test_odd_dimensions(self):
        assert FreqRect(4, 4).shape == (9, 9)
        assert FreqRect(0, 0).shape == (1, 1)

    def test_dilation(self):
        assert FreqRect(4, 3).dilate(3) == FreqRect(12, 9)
        assert FreqRect(0, 0).dilate(2) == FreqRect(0, 0)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            FreqRect(-1, 0)
