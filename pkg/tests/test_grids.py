import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phasediverse import (
    fft_centered,
    ifft_centered,
    make_grid,
    open_aperture,
    spiral_aperture,
    spiral_phase,
)

from oracles import brute_dft2


class TestMakeGrid:
    def test_origin_256(self):
        assert make_grid(256).origin == (128, 128)

    def test_origin_8(self):
        assert make_grid(8).origin == (4, 4)

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            make_grid(7)

    @pytest.mark.parametrize("n", [6, 0, -2, 8194])
    def test_out_of_range_rejected(self, n):
        with pytest.raises(ValueError):
            make_grid(n)

    def test_origin_coordinates_are_zero(self):
        g = make_grid(64)
        i, j = g.origin
        assert g.uu[i, j] == 0 and g.vv[i, j] == 0

    def test_coordinate_convention(self):
        g = make_grid(16)
        # pixel (i, j) -> (u, v) = (j - n/2, i - n/2)
        assert g.uu[3, 11] == 3 and g.vv[3, 11] == -5


class TestOpenAperture:
    def test_values_at_origin_and_outside(self, grid256):
        ap = open_aperture(grid256, 50)
        assert ap[128, 128] == 1
        assert ap[128, 128 + 60] == 0  # (u, v) = (60, 0)

    def test_radius_one_on_grid8(self):
        g = make_grid(8)
        ap = open_aperture(g, 1)
        nz = np.abs(ap).sum()
        assert nz == 5  # center plus 4-neighborhood
        assert np.all((g.uu ** 2 + g.vv ** 2 <= 1) == (np.abs(ap) > 0))

    def test_pixel_count_matches_disk_area(self, grid256):
        count = int(np.abs(open_aperture(grid256, 50)).sum())
        assert count == 7845  # brute-force count over u^2+v^2 <= 2500
        assert abs(count - np.pi * 50 ** 2) / (np.pi * 50 ** 2) < 0.02

    @pytest.mark.parametrize("radius", [0, -1, 128, 200])
    def test_radius_range(self, grid256, radius):
        with pytest.raises(ValueError):
            open_aperture(grid256, radius)

    def test_support_exact(self, grid256):
        ap = open_aperture(grid256, 31.5)
        outside = grid256.uu ** 2 + grid256.vv ** 2 > 31.5 ** 2
        assert np.all(ap[outside] == 0)


class TestSpiralPhase:
    def test_positive_u_axis_phase_zero(self, grid256):
        sp = spiral_phase(grid256)
        assert sp[128, 131] == 1.0 + 0.0j  # (u, v) = (3, 0)

    def test_positive_v_axis_phase_half_pi(self, grid256):
        sp = spiral_phase(grid256)
        assert sp[133, 128] == 1.0j  # (u, v) = (0, 5)

    def test_disk_sum_cancels(self, grid256):
        ap = spiral_aperture(grid256, 50)
        area = np.abs(ap).sum()
        assert abs(ap.sum()) < 1e-10 * area

    def test_unit_modulus_off_origin(self, grid256):
        sp = spiral_phase(grid256)
        mags = np.abs(sp)
        mags[128, 128] = 1.0
        assert np.allclose(mags, 1.0, atol=1e-12)

    def test_origin_pixel_zero(self, grid256):
        assert spiral_phase(grid256)[128, 128] == 0

    def test_odd_symmetry_exact(self):
        g = make_grid(64)
        sp = spiral_phase(g)
        # pixels on the u = -n/2 or v = -n/2 edge have no on-grid
        # negation, so compare the interior block only
        flipped = np.roll(sp[::-1, ::-1], 1, axis=(0, 1))[1:, 1:]
        inner = sp[1:, 1:]
        mask = np.ones(inner.shape, dtype=bool)
        mask[31, 31] = False  # origin
        assert np.array_equal(flipped[mask], -inner[mask])


class TestSpiralAperture:
    def test_unit_modulus_inside(self, grid256):
        ap = spiral_aperture(grid256, 50)
        assert abs(abs(ap[128, 138]) - 1) < 1e-12  # (u, v) = (10, 0)

    def test_zero_outside(self, grid256):
        ap = spiral_aperture(grid256, 50)
        assert ap[128, 188] == 0  # (u, v) = (60, 0)

    def test_product_with_conjugate_phase_is_open(self, grid256):
        ap = spiral_aperture(grid256, 50)
        sp = spiral_phase(grid256)
        disk = open_aperture(grid256, 50)
        recovered = ap * np.conj(sp)
        off_origin = np.ones(ap.shape, dtype=bool)
        off_origin[128, 128] = False
        assert np.allclose(recovered[off_origin], disk[off_origin], atol=1e-12)


class TestCenteredTransforms:
    def test_delta_transforms_to_constant(self):
        g = make_grid(16)
        f = np.zeros((16, 16), dtype=complex)
        f[g.origin] = 1.0
        out = fft_centered(f)
        assert np.allclose(out, 1.0 / 16.0, atol=1e-14)

    def test_matches_brute_force_dft(self):
        rng = np.random.default_rng(3)
        f = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
        assert np.allclose(fft_centered(f), brute_dft2(f), atol=1e-12)

    def test_roundtrip(self):
        rng = np.random.default_rng(4)
        f = rng.standard_normal((32, 32)) + 1j * rng.standard_normal((32, 32))
        back = ifft_centered(fft_centered(f))
        assert np.linalg.norm(back - f) / np.linalg.norm(f) < 1e-12

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.sampled_from([8, 16, 32, 64]))
    def test_parseval(self, seed, n):
        rng = np.random.default_rng(seed)
        f = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        e1 = float(np.sum(np.abs(f) ** 2))
        e2 = float(np.sum(np.abs(fft_centered(f)) ** 2))
        assert abs(e1 - e2) / e1 < 1e-10

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_inverse_property(self, seed):
        rng = np.random.default_rng(seed)
        f = rng.standard_normal((24, 24)) + 1j * rng.standard_normal((24, 24))
        fwd_back = ifft_centered(fft_centered(f))
        back_fwd = fft_centered(ifft_centered(f))
        scale = np.linalg.norm(f)
        assert np.linalg.norm(fwd_back - f) / scale < 1e-12
        assert np.linalg.norm(back_fwd - f) / scale < 1e-12
