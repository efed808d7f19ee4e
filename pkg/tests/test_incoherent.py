import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasediverse import (
    NoiseSpec,
    add_noise,
    blur,
    make_grid,
    open_aperture,
    otf_from_psf,
    psf_from_pupil,
    spiral_aperture,
)

from oracles import brute_circular_conv


class TestPsfFromPupil:
    def test_open_aperture_peak_at_origin(self, grid256):
        psf = psf_from_pupil(open_aperture(grid256, 50))
        assert psf[128, 128] == psf.max()
        assert abs(psf.sum() - 1.0) < 1e-12
        assert np.all(psf >= 0)

    def test_full_pupil_gives_delta(self):
        g = make_grid(32)
        psf = psf_from_pupil(np.ones((32, 32), dtype=complex))
        expected = np.zeros((32, 32))
        expected[g.origin] = 1.0
        assert np.allclose(psf, expected, atol=1e-12)

    def test_vortex_donut_null(self, grid256):
        psf = psf_from_pupil(spiral_aperture(grid256, 50))
        assert psf[128, 128] == 0.0

    def test_zero_pupil_rejected(self):
        with pytest.raises(ValueError):
            psf_from_pupil(np.zeros((16, 16), dtype=complex))


class TestOtfFromPsf:
    def test_open_otf_real_nonneg_monotone(self, grid256):
        psf = psf_from_pupil(open_aperture(grid256, 50))
        otf = otf_from_psf(psf)
        assert np.abs(otf.imag).max() < 1e-10
        row = otf[128, 128:].real
        assert row.min() > -1e-12
        assert np.all(np.diff(row) <= 1e-12)

    def test_vortex_otf_dips_then_rises(self, grid256):
        otf = otf_from_psf(psf_from_pupil(spiral_aperture(grid256, 50)))
        row = np.abs(otf[128, 128:])
        imin = int(row[1:100].argmin()) + 1
        # band-edge rolloff also approaches zero; the structural dip is
        # the one flanked by O(0.1) values on both sides
        dip = int(np.argmin(row[10:70])) + 10
        assert row[dip] < 0.05
        assert row[1:dip].max() > 0.1
        assert row[dip:100].max() > 0.1
        assert imin in (dip, 99)  # global interior min is the dip or band edge

    def test_dc_exactly_one(self, grid256):
        otf = otf_from_psf(psf_from_pupil(open_aperture(grid256, 50)))
        assert otf[128, 128] == 1.0
        assert np.abs(otf).max() <= 1.0 + 1e-12

    def test_delta_psf_gives_unit_otf(self):
        g = make_grid(16)
        psf = np.zeros((16, 16))
        psf[g.origin] = 1.0
        assert np.allclose(otf_from_psf(psf), 1.0, atol=1e-12)

    def test_support_bound(self, grid256):
        radius = 50
        outside = grid256.radius() > 2 * radius + 2
        for pupil in (open_aperture(grid256, radius),
                      spiral_aperture(grid256, radius)):
            otf = otf_from_psf(psf_from_pupil(pupil))
            assert np.abs(otf[outside]).max() < 1e-9


class TestBlur:
    def test_delta_object_returns_psf(self):
        g = make_grid(64)
        psf = psf_from_pupil(open_aperture(g, 12))
        obj = np.zeros((64, 64))
        obj[g.origin] = 1.0
        out = blur(obj, psf)
        assert np.allclose(out, psf, atol=1e-12)

    def test_constant_object_unchanged(self):
        g = make_grid(64)
        psf = psf_from_pupil(open_aperture(g, 12))
        out = blur(np.full((64, 64), 3.7), psf)
        assert np.allclose(out, 3.7, atol=1e-10)

    def test_energy_conserved(self):
        g = make_grid(64)
        psf = psf_from_pupil(open_aperture(g, 12))
        rng = np.random.default_rng(0)
        x = rng.random((64, 64))
        out = blur(x, psf)
        assert abs(out.sum() - x.sum()) / x.sum() < 1e-10

    def test_matches_brute_force_convolution(self):
        g = make_grid(16)
        psf = psf_from_pupil(open_aperture(g, 4))
        rng = np.random.default_rng(1)
        x = rng.random((16, 16))
        expected = brute_circular_conv(x, psf)
        assert np.abs(blur(x, psf) - expected).max() < 1e-8

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            blur(np.ones((16, 16)), np.ones((32, 32)) / 1024)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1),
           st.floats(0.0, 5.0), st.floats(0.0, 5.0))
    def test_linearity(self, seed, a, b):
        g = make_grid(32)
        psf = psf_from_pupil(open_aperture(g, 8))
        rng = np.random.default_rng(seed)
        x1 = rng.random((32, 32))
        x2 = rng.random((32, 32))
        lhs = blur(a * x1 + b * x2, psf)
        rhs = a * blur(x1, psf) + b * blur(x2, psf)
        assert np.abs(lhs - rhs).max() < 1e-10 * max(1.0, a + b)

    def test_frequency_domain_equivalence(self):
        from phasediverse import fft_centered

        g = make_grid(32)
        psf = psf_from_pupil(open_aperture(g, 8))
        otf = otf_from_psf(psf)
        rng = np.random.default_rng(2)
        x = rng.random((32, 32))
        lhs = fft_centered(blur(x, psf))
        rhs = fft_centered(x) * otf
        assert np.abs(lhs - rhs).max() < 1e-10


class TestAddNoise:
    def test_zero_fraction_is_identity(self):
        img = np.linspace(0, 1, 64).reshape(8, 8)
        out = add_noise(img, NoiseSpec(fraction=0.0, seed=9))
        assert np.array_equal(out, img)

    def test_sigma_matches_fraction_of_peak(self):
        img = np.full((256, 256), 5.0)
        out = add_noise(img, NoiseSpec(fraction=0.01, seed=42))
        sample_sigma = float((out - img).std())
        expected = 0.01 * 5.0
        assert abs(sample_sigma - expected) / expected < 0.05

    def test_deterministic_per_seed(self):
        rng = np.random.default_rng(5)
        img = rng.random((64, 64))
        spec = NoiseSpec(fraction=0.05, seed=123)
        assert np.array_equal(add_noise(img, spec), add_noise(img, spec))

    def test_different_seeds_differ(self):
        img = np.ones((32, 32))
        a = add_noise(img, NoiseSpec(fraction=0.05, seed=1))
        b = add_noise(img, NoiseSpec(fraction=0.05, seed=2))
        assert not np.array_equal(a, b)

    def test_clipped_at_zero(self):
        img = np.zeros((64, 64))
        img[0, 0] = 1.0
        out = add_noise(img, NoiseSpec(fraction=0.5, seed=3))
        assert out.min() >= 0.0

    def test_negative_fraction_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(fraction=-0.1)
