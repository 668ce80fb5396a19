import math

import numpy as np
import pytest

from curvelift import (DiracStream, Ellipse, EllipsePhantom, FreqRect,
                       TrigPoly, TrigRegionPhantom, curve_points,
                       dirac_stream_ft, ellipse_ft, random_hermitian,
                       raster_dft_oracle, shepp_logan)
from curvelift.phantom import read_fsamples, write_fsamples


def cos_x_poly():
    return TrigPoly.from_terms(FreqRect(1, 0), {(1, 0): 0.5, (-1, 0): 0.5})


class TestEllipseFT:
    def test_dc_is_area(self):
        ph = EllipsePhantom((Ellipse(2.5 + 0.5j, (0.4, 0.6), (0.2, 0.1), 0.7),))
        got = ellipse_ft(ph, FreqRect(0, 0)).value_at(0, 0)
        assert got == pytest.approx((2.5 + 0.5j) * np.pi * 0.2 * 0.1, rel=1e-14)

    def test_shift_theorem(self):
        rng = np.random.default_rng(0)
        base = Ellipse(1.0, (0.5, 0.5), (0.15, 0.08), 0.4)
        dx, dy = 0.07, -0.11
        moved = Ellipse(1.0, (0.5 + dx, 0.5 + dy), (0.15, 0.08), 0.4)
        grid = FreqRect(6, 6)
        a = ellipse_ft(EllipsePhantom((base,)), grid)
        b = ellipse_ft(EllipsePhantom((moved,)), grid)
        ks = rng.integers(-6, 7, size=(20, 2))
        for kx, ky in ks:
            phase = np.exp(-2j * np.pi * (kx * dx + ky * dy))
            assert b.value_at(kx, ky) == pytest.approx(a.value_at(kx, ky) * phase, abs=1e-13)

    def test_superposition(self):
        e1 = Ellipse(1.0, (0.4, 0.4), (0.1, 0.2), 0.0)
        e2 = Ellipse(1.0, (0.6, 0.6), (0.15, 0.1), 1.0)
        grid = FreqRect(4, 4)
        both = ellipse_ft(EllipsePhantom((e1, e2)), grid)
        scaled = ellipse_ft(EllipsePhantom((Ellipse(2.0, e1.center, e1.semi_axes, e1.angle),
                                            Ellipse(-0.5, e2.center, e2.semi_axes, e2.angle))), grid)
        combo = 2.0 * ellipse_ft(EllipsePhantom((e1,)), grid).values \
            - 0.5 * ellipse_ft(EllipsePhantom((e2,)), grid).values
        assert np.max(np.abs(scaled.values - combo)) <= 1e-14 * np.max(np.abs(combo))

    def test_shepp_logan_against_oracle(self):
        ph = shepp_logan()
        grid = FreqRect(32, 24)  # 65 x 49 samples
        exact = ellipse_ft(ph, grid)
        oracle = raster_dft_oracle(ph, 2048, grid)
        err = np.linalg.norm(oracle.values - exact.values) / np.linalg.norm(exact.values)
        assert err <= 5e-3

    def test_hermitian_for_real_phantom(self):
        exact = ellipse_ft(shepp_logan(), FreqRect(8, 8))
        assert exact.hermitian_error() <= 1e-10 * np.max(np.abs(exact.values))

    def test_ellipse_outside_square_rejected(self):
        with pytest.raises(ValueError):
            EllipsePhantom((Ellipse(1.0, (0.9, 0.5), (0.2, 0.1), 0.0),))

    def test_nonpositive_axes_rejected(self):
        with pytest.raises(ValueError):
            EllipsePhantom((Ellipse(1.0, (0.5, 0.5), (0.0, 0.1), 0.0),))


class TestRasterOracle:
    def test_unit_signal(self):
        region = TrigRegionPhantom(cos_x_poly(), amp_pos=1.0, amp_neg=1.0)
        fs = raster_dft_oracle(region, 64, FreqRect(2, 2))
        assert fs.value_at(0, 0) == pytest.approx(1.0, abs=1e-12)
        off_dc = fs.values.copy()
        off_dc[2, 2] = 0
        assert np.max(np.abs(off_dc)) <= 1e-12

    def test_convergence_on_disk(self):
        ph = EllipsePhantom((Ellipse(1.0, (0.5, 0.5), (0.25, 0.25), 0.0),))
        grid = FreqRect(5, 5)
        exact = ellipse_ft(ph, grid).values
        err1 = np.linalg.norm(raster_dft_oracle(ph, 1024, grid).values - exact)
        err2 = np.linalg.norm(raster_dft_oracle(ph, 2048, grid).values - exact)
        assert err1 / err2 >= 1.5

    def test_strip_region_matches_analytic(self):
        # {cos(2*pi*x) > 0} is a strip in x: value[(k, 0)] = sin(pi k / 2) / (pi k),
        # value[(0, 0)] = 1/2, and nothing depends on y.
        region = TrigRegionPhantom(cos_x_poly(), amp_pos=1.0, amp_neg=0.0)
        grid = FreqRect(4, 2)
        fs = raster_dft_oracle(region, 1024, grid)
        for kx in range(-4, 5):
            want = 0.5 if kx == 0 else math.sin(math.pi * kx / 2) / (math.pi * kx)
            for ky in (-2, -1, 1, 2):
                assert abs(fs.value_at(kx, ky)) <= 1e-3
            assert fs.value_at(kx, 0) == pytest.approx(want, abs=1e-3)

    def test_hermitian_symmetry(self):
        rng = np.random.default_rng(1)
        region = TrigRegionPhantom(random_hermitian(FreqRect(2, 2), rng),
                                   amp_pos=1.0, amp_neg=-0.5)
        fs = raster_dft_oracle(region, 512, FreqRect(4, 4))
        assert fs.hermitian_error() <= 1e-10 * np.max(np.abs(fs.values))

    def test_piecewise_linear_value(self):
        # linear term on the positive region shows up in the mean
        region = TrigRegionPhantom(cos_x_poly(), amp_pos=0.0, amp_neg=0.0,
                                   lin_pos=(1.0, 0.0))
        fs = raster_dft_oracle(region, 1024, FreqRect(0, 0))
        # integral of x over ([0,1/4) u (3/4,1)) x [0,1]: 1/32 + (1 - 9/16)/2 = 0.25
        assert fs.value_at(0, 0) == pytest.approx(0.25, abs=2e-3)

    def test_power_of_two_required(self):
        region = TrigRegionPhantom(cos_x_poly())
        with pytest.raises(ValueError):
            raster_dft_oracle(region, 1000, FreqRect(2, 2))

    def test_resolution_floor(self):
        region = TrigRegionPhantom(cos_x_poly())
        with pytest.raises(ValueError):
            raster_dft_oracle(region, 64, FreqRect(16, 16))


class TestDiracStream:
    def test_single_at_origin(self):
        fs = dirac_stream_ft(DiracStream([(0.0, 0.0)], [1.0]), FreqRect(3, 3))
        np.testing.assert_allclose(fs.values, np.ones((7, 7)), atol=1e-15)

    def test_two_point_symmetry(self):
        fs = dirac_stream_ft(DiracStream([(0.25, 0.0), (0.75, 0.0)], [1.0, 1.0]),
                             FreqRect(2, 2))
        for ky in range(-2, 3):
            assert abs(fs.value_at(1, ky)) <= 1e-14
            assert fs.value_at(2, ky) == pytest.approx(-2.0, abs=1e-14)

    def test_matches_fsum_oracle(self):
        import cmath
        from math import fsum
        rng = np.random.default_rng(2)
        pts = rng.random((200, 2))
        wts = rng.standard_normal(200) + 1j * rng.standard_normal(200)
        grid = FreqRect(2, 2)
        fs = dirac_stream_ft(DiracStream(pts, wts), grid)
        for kx in range(-2, 3):
            for ky in range(-2, 3):
                terms = [w * cmath.exp(-2j * cmath.pi * (kx * x + ky * y))
                         for (x, y), w in zip(pts, wts)]
                want = complex(fsum(t.real for t in terms), fsum(t.imag for t in terms))
                assert abs(fs.value_at(kx, ky) - want) <= 1e-13 * abs(want)

    def test_dc_is_weight_sum(self):
        rng = np.random.default_rng(3)
        pts = rng.random((31, 2))
        wts = rng.standard_normal(31) + 1j * rng.standard_normal(31)
        fs = dirac_stream_ft(DiracStream(pts, wts), FreqRect(1, 1))
        # DC phases are exactly 1, so this is a plain sum of the weights;
        # only the reduction order differs from np.sum
        assert abs(fs.value_at(0, 0) - np.sum(wts)) <= 1e-15 * np.sum(np.abs(wts))

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            DiracStream([(0.1, 0.2)], [1.0, 2.0])


class TestCurvePoints:
    def test_cosine_roots(self):
        pts = curve_points(cos_x_poly(), 64, 5)
        assert len(pts) == 10
        xs = np.sort(pts[:, 0].reshape(5, 2), axis=1)
        np.testing.assert_allclose(xs[:, 0], 0.25, atol=1e-13)
        np.testing.assert_allclose(xs[:, 1], 0.75, atol=1e-13)

    def test_points_on_curve(self):
        rng = np.random.default_rng(4)
        p = random_hermitian(FreqRect(3, 3), rng)
        pts = curve_points(p, 256, 16)
        assert len(pts) > 0
        assert np.max(np.abs(p.eval(pts))) <= 1e-12

    def test_count_matches_dense_scan(self):
        p = TrigPoly.from_terms(FreqRect(1, 1), {(1, 0): 0.5, (-1, 0): 0.5,
                                                 (0, 1): 0.5, (0, -1): 0.5,
                                                 (0, 0): -0.5})
        y = 0.5 / 7
        pts = curve_points(p, 512, 7)
        on_line = np.sum(np.abs(pts[:, 1] - y) < 1e-12)
        xs = np.arange(100000) / 100000
        vals = p.eval(np.stack([xs, np.full_like(xs, y)], axis=1)).real
        crossings = np.sum(vals * np.roll(vals, -1) < 0)
        assert on_line == crossings

    def test_empty_curve(self):
        p = TrigPoly.from_terms(FreqRect(1, 0), {(1, 0): 0.1, (-1, 0): 0.1, (0, 0): 5.0})
        assert curve_points(p, 64, 4).shape == (0, 2)

    def test_constant_rejected(self):
        with pytest.raises(ValueError):
            curve_points(TrigPoly.constant(1.0), 64, 4)


class TestFsamplesFile:
    def test_round_trip(self, tmp_path):
        fs = ellipse_ft(shepp_logan(), FreqRect(3, 2))
        path = tmp_path / "f.fs"
        write_fsamples(path, fs)
        back = read_fsamples(path)
        assert back.grid == fs.grid
        np.testing.assert_array_equal(back.values, fs.values)
        path2 = tmp_path / "f2.fs"
        write_fsamples(path2, back)
        assert path.read_bytes() == path2.read_bytes()

    def test_missing_entries_rejected(self, tmp_path):
        fs = ellipse_ft(shepp_logan(), FreqRect(1, 1))
        path = tmp_path / "f.fs"
        write_fsamples(path, fs)
        lines = path.read_text().splitlines()
        (tmp_path / "short.fs").write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(ValueError):
            read_fsamples(tmp_path / "short.fs")

    def test_wrong_header_rejected(self, tmp_path):
        (tmp_path / "bad.fs").write_text("TRIGPOLY 1 1\n")
        with pytest.raises(ValueError):
            read_fsamples(tmp_path / "bad.fs")
