import math

import mpmath
import numpy as np
import pytest

from logsurf.errors import ParameterError
from logsurf.render import (
    ERROR_COLOR,
    FUNCTIONS,
    THREADS_ENV,
    ImageBuffer,
    Overlay,
    RenderSpec,
    Style,
    domain_color,
    mask_components,
    overlay_region,
    pixel_grid,
    read_image,
    region_overlays,
    render,
    write_image,
    zeta_plane,
)


def identity(z):
    return z


def hue_of(rgb):
    import colorsys
    r, g, b = (c / 255 for c in rgb)
    return colorsys.rgb_to_hls(r, g, b)[0]


class TestGrid:
    def test_orientation(self):
        z = pixel_grid(RenderSpec((-1, 1, -1, 1), (4, 3)))
        assert z.shape == (3, 4)
        assert z[0, 0].imag > z[-1, 0].imag
        assert z[0, 0].real < z[0, -1].real

    def test_symmetric_window(self):
        z = pixel_grid(RenderSpec((-2, 2, -3, 3), (7, 9)))
        assert np.array_equal(z[::-1, :].imag, -z.imag)
        assert np.array_equal(z[:, ::-1].real, -z.real)

    @pytest.mark.parametrize("window", [(1, 1, 0, 1), (0, 1, 2, 0)])
    def test_degenerate_window(self, window):
        with pytest.raises(ParameterError):
            RenderSpec(window)

    def test_bad_resolution(self):
        with pytest.raises(ParameterError):
            RenderSpec((0, 1, 0, 1), (0, 5))


class TestColouring:
    def test_identity_hues(self):
        spec = RenderSpec((-1, 1, -1, 1), (64, 64))
        img = domain_color(identity, spec).rgb
        # right edge middle row: arg ~ 0 -> red; top middle: arg ~ pi/2 -> hue 1/4
        assert hue_of(img[32, 63]) == pytest.approx(0.0, abs=0.02) or hue_of(img[32, 63]) > 0.98
        assert hue_of(img[0, 32]) == pytest.approx(0.25, abs=0.02)
        assert hue_of(img[32, 0]) == pytest.approx(0.5, abs=0.02)
        assert hue_of(img[63, 32]) == pytest.approx(0.75, abs=0.02)

    def test_lightness_grows_with_modulus(self):
        spec = RenderSpec((0.1, 10, -0.01, 0.01), (50, 1))
        img = domain_color(identity, spec).rgb.astype(int)
        light = (img.max(axis=2) + img.min(axis=2))[0]
        assert np.all(np.diff(light) >= 0)
        assert light[-1] > light[0]

    def test_contour_lines_on_powers_of_two(self):
        spec = RenderSpec((0.3, 9, -0.01, 0.01), (400, 1), style=Style.CONTOUR)
        img = domain_color(identity, spec).rgb
        dark = np.where(img[0].max(axis=1) < 100)[0]
        x = pixel_grid(spec)[0].real
        crossings = [x[i] for i in dark]
        for level in (0.5, 1, 2, 4, 8):
            assert min(abs(c - level) for c in crossings) < 0.05

    def test_explicit_contour_levels(self):
        spec = RenderSpec((0.5, 3, -0.01, 0.01), (200, 1), style="contour", contour_levels=[0.0])
        img = domain_color(identity, spec).rgb
        dark = np.where(img[0].max(axis=1) < 100)[0]
        x = pixel_grid(spec)[0].real
        assert len(dark) >= 1 and all(abs(x[i] - 1) < 0.05 for i in dark)

    def test_poles_white(self):
        spec = RenderSpec((-4.5, 0.5, -0.5, 0.5), (5, 3))
        z = pixel_grid(spec)
        img = domain_color(FUNCTIONS["gamma"], spec).rgb
        poles = np.isclose(z.imag, 0) & np.isclose(z.real, np.round(z.real)) & (z.real <= 0)
        assert poles.any()
        assert np.all(img[poles] == 255)

    def test_error_colour(self):
        def broken(z):
            if np.ndim(z):
                raise ValueError("array path")
            if z.real > 0:
                raise ValueError("bad pixel")
            return z

        spec = RenderSpec((-1, 1, -1, 1), (4, 4))
        img = domain_color(broken, spec).rgb
        assert np.all(img[:, 2:] == ERROR_COLOR)
        assert not np.any(np.all(img[:, :2] == ERROR_COLOR, axis=-1))

    def test_nan_is_error_colour(self):
        spec = RenderSpec((-1, 1, -1, 1), (2, 2))
        img = domain_color(lambda z: np.full(z.shape, np.nan + 0j), spec).rgb
        assert np.all(img == ERROR_COLOR)

    def test_conjugation_symmetry(self):
        spec = RenderSpec((-4, 4, -3, 3), (64, 48))
        g = FUNCTIONS["gamma"]
        a = domain_color(g, spec).rgb
        b = domain_color(lambda z: np.conj(g(z)), spec).rgb
        assert np.array_equal(np.flipud(a), b)

    def test_zeta_right_half_plane(self):
        spec = RenderSpec((20, 30, -1, 1), (16, 8))
        img = domain_color(zeta_plane, spec).rgb.astype(int)
        # zeta ~ 1 there: red hue, lightness ~ 1/2
        assert np.all(np.abs(img[..., 0] - 255) <= 2)
        assert np.all(img[..., 1] <= 3) and np.all(img[..., 2] <= 3)

    def test_threads_deterministic(self, monkeypatch):
        spec = RenderSpec((-4, 4, -4, 4), (40, 40))
        monkeypatch.setenv(THREADS_ENV, "1")
        a = domain_color(FUNCTIONS["zeta"], spec).rgb
        monkeypatch.setenv(THREADS_ENV, "4")
        b = domain_color(FUNCTIONS["zeta"], spec).rgb
        assert np.array_equal(a, b)


class TestZeta:
    @pytest.mark.parametrize("s", [2, 0.5 + 14.134725j, -3.5 + 2j, 0.3 - 7j, 3 + 40j, -10.2])
    def test_against_mpmath(self, s):
        ref = complex(mpmath.zeta(s))
        got = complex(zeta_plane(np.array([s]))[0])
        assert abs(got - ref) <= 1e-9 * max(1, abs(ref))

    def test_pole(self):
        assert np.isinf(zeta_plane(np.array([1.0 + 0j]))[0])

    def test_trivial_zero(self):
        assert abs(zeta_plane(np.array([-2.0 + 0j]))[0]) < 1e-12


class TestOverlay:
    def setup_method(self):
        self.spec = RenderSpec((-1, 1, -1, 1), (8, 8))
        self.img = domain_color(identity, self.spec)

    def test_empty_predicate(self):
        out = overlay_region(self.img, self.spec, lambda z: np.zeros(z.shape, bool), "white")
        assert np.array_equal(out.rgb, self.img.rgb)

    def test_full_opaque(self):
        out = overlay_region(self.img, self.spec, lambda z: np.ones(z.shape, bool), "black", opacity=1)
        assert np.all(out.rgb == 0)

    def test_partial_blend(self):
        out = overlay_region(self.img, self.spec, lambda z: z.real > 0, (255, 255, 255), opacity=0.5)
        right = self.img.rgb[:, 4:].astype(float)
        assert np.allclose(out.rgb[:, 4:], np.rint(0.5 * right + 127.5), atol=1)
        assert np.array_equal(out.rgb[:, :4], self.img.rgb[:, :4])

    def test_bad_inputs(self):
        with pytest.raises(ParameterError):
            overlay_region(self.img, self.spec, lambda z: z.real > 0, "white", opacity=1.5)
        with pytest.raises(ParameterError):
            overlay_region(self.img, self.spec, lambda z: z.real > 0, "mauve")
        with pytest.raises(ParameterError):
            overlay_region(self.img, self.spec, lambda z: np.ones(3, bool), "white")

    def test_render_applies_overlays(self):
        spec = RenderSpec((-1, 1, -1, 1), (8, 8), overlays=(Overlay(lambda z: z.real > 0, "black", 1.0),))
        out = render(identity, spec)
        assert np.all(out.rgb[:, 4:] == 0)


class TestIO:
    def test_roundtrip(self, tmp_path):
        rgb = np.array([[[1, 2, 3], [250, 0, 7]], [[0, 0, 0], [255, 255, 255]]], dtype=np.uint8)
        path = tmp_path / "tiny.png"
        write_image(ImageBuffer(rgb), path)
        assert np.array_equal(read_image(path).rgb, rgb)

    def test_invalid_path(self, tmp_path):
        img = ImageBuffer(np.zeros((2, 2, 3), np.uint8))
        with pytest.raises(OSError):
            write_image(img, tmp_path / "missing" / "x.png")

    def test_buffer_validation(self):
        with pytest.raises(ParameterError):
            ImageBuffer(np.zeros((2, 2), np.uint8))


class TestRegions:
    def test_un_mask_connected_at_odd_height(self):
        spec = RenderSpec((-7, 7, -7, 7), (257, 257))
        _, un = region_overlays()
        assert mask_components(un.predicate(pixel_grid(spec))) == 1

    def test_sector_mask(self):
        spec = RenderSpec((-7, 7, -7, 7), (65, 65))
        sector, _ = region_overlays()
        z = pixel_grid(spec)
        mask = sector.predicate(z)
        assert mask.ravel()[np.argmin(np.abs(z - 6))]
        assert not mask.ravel()[np.argmin(np.abs(z + 6))]

    def test_components(self):
        m = np.zeros((5, 5), bool)
        m[0, 0] = m[4, 4] = True
        assert mask_components(m) == 2
        m[1, 1] = True  # diagonal only: not 4-connected
        assert mask_components(m) == 3
