"""Domain colouring of complex functions and region overlays."""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from PIL import Image
from scipy import ndimage

from .errors import ParameterError
from .gamma import RegionSpec, default_context, g_tilde, in_sector_inf, un_index
from .stirling import bernoulli_numbers

__all__ = [
    "Style",
    "Overlay",
    "RenderSpec",
    "ImageBuffer",
    "pixel_grid",
    "domain_color",
    "overlay_region",
    "render",
    "write_image",
    "read_image",
    "zeta_plane",
    "FUNCTIONS",
    "region_overlays",
    "mask_components",
    "ERROR_COLOR",
    "THREADS_ENV",
]

THREADS_ENV = "LOGSURF_THREADS"
ERROR_COLOR = (0, 255, 0)
SHADES = {"white": (255, 255, 255), "black": (0, 0, 0)}


class Style(enum.Enum):
    GRADIENT = "gradient"
    CONTOUR = "contour"


@dataclass(frozen=True)
class Overlay:
    predicate: Callable[[np.ndarray], np.ndarray]
    shade: tuple[int, int, int] | str
    opacity: float = 0.6


@dataclass(frozen=True)
class RenderSpec:
    window: tuple[float, float, float, float]
    resolution: tuple[int, int] = (512, 512)
    style: Style = Style.GRADIENT
    contour_levels: Sequence[float] | None = None
    overlays: Sequence[Overlay] = field(default_factory=tuple)

    def __post_init__(self):
        xmin, xmax, ymin, ymax = map(float, self.window)
        if not (xmin < xmax and ymin < ymax):
            raise ParameterError("degenerate window")
        w, h = self.resolution
        if int(w) != w or int(h) != h or w < 1 or h < 1:
            raise ParameterError("resolution must be positive integers")
        object.__setattr__(self, "window", (xmin, xmax, ymin, ymax))
        object.__setattr__(self, "resolution", (int(w), int(h)))
        object.__setattr__(self, "style", Style(self.style))


@dataclass(frozen=True)
class ImageBuffer:
    rgb: np.ndarray  # (height, width, 3) uint8

    def __post_init__(self):
        if self.rgb.ndim != 3 or self.rgb.shape[2] != 3 or self.rgb.dtype != np.uint8:
            raise ParameterError("expected an (h, w, 3) uint8 array")

    @property
    def width(self) -> int:
        return self.rgb.shape[1]

    @property
    def height(self) -> int:
        return self.rgb.shape[0]


def _centers(lo: float, hi: float, n: int) -> np.ndarray:
    # symmetric construction: a window symmetric about 0 gives exactly negated centers
    c, half = (hi + lo) / 2, (hi - lo) / 2
    return c + half * (2 * np.arange(n) - (n - 1)) / n


def pixel_grid(spec: RenderSpec) -> np.ndarray:
    """Complex pixel centers, row 0 at the top of the window."""
    xmin, xmax, ymin, ymax = spec.window
    w, h = spec.resolution
    x = _centers(xmin, xmax, w)
    y = _centers(ymin, ymax, h)[::-1]
    return x[None, :] + 1j * y[:, None]


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _evaluate(f, z: np.ndarray) -> np.ndarray:
    """Apply f to the grid; pixels where f raises or returns nan come back as nan."""
    def run(block):
        try:
            with np.errstate(all="ignore"):
                return np.asarray(f(block), dtype=complex).reshape(block.shape)
        except Exception:
            out = np.empty(block.shape, dtype=complex)
            for idx, v in np.ndenumerate(block):
                try:
                    out[idx] = complex(f(v))
                except Exception:
                    out[idx] = complex(np.nan, np.nan)
            return out

    n = _threads()
    if n == 1 or z.shape[0] < 2 * n:
        return run(z)
    blocks = np.array_split(z, n, axis=0)
    with ThreadPoolExecutor(n) as pool:
        return np.concatenate(list(pool.map(run, blocks)), axis=0)


def _hsl_to_rgb(h, s, l):
    c = (1 - np.abs(2 * l - 1)) * s
    hp = (h % 1.0) * 6
    x = c * (1 - np.abs(hp % 2 - 1))
    z = np.zeros_like(h)
    sector = np.floor(hp).astype(int) % 6
    r = np.choose(sector, [c, x, z, z, x, c])
    g = np.choose(sector, [x, c, c, x, z, z])
    b = np.choose(sector, [z, z, x, c, c, x])
    m = l - c / 2
    return np.stack([r + m, g + m, b + m], axis=-1)


def _contour_bands(mod: np.ndarray, levels) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        if levels is None:
            return np.floor(np.log2(mod))
        return np.searchsorted(np.sort(np.asarray(levels, dtype=float)), np.log(mod)).astype(float)


def _colorize(w: np.ndarray, spec: RenderSpec) -> np.ndarray:
    mod = np.abs(w)
    infinite = np.isinf(mod)
    error = np.isnan(w) & ~infinite
    hue = np.nan_to_num(np.angle(w) / (2 * np.pi))
    if spec.style is Style.GRADIENT:
        with np.errstate(over="ignore", invalid="ignore"):
            m2 = mod * mod
            light = np.nan_to_num(np.where(np.isinf(m2), 1.0, m2 / (m2 + 1)))
        rgb = _hsl_to_rgb(hue, np.ones_like(hue), light)
    else:
        rgb = _hsl_to_rgb(hue, np.ones_like(hue), np.full_like(hue, 0.5))
        band = _contour_bands(mod, spec.contour_levels)
        edge = np.zeros(band.shape, dtype=bool)
        edge[:, :-1] |= band[:, :-1] != band[:, 1:]
        edge[:-1, :] |= band[:-1, :] != band[1:, :]
        rgb[edge] *= 0.3
    img = np.clip(np.rint(rgb * 255), 0, 255).astype(np.uint8)
    img[infinite] = 255
    img[error] = ERROR_COLOR
    return img


def domain_color(f: Callable, spec: RenderSpec) -> ImageBuffer:
    """Colour each pixel by ``arg f`` (hue) and ``|f|`` (lightness or contour lines)."""
    return ImageBuffer(_colorize(_evaluate(f, pixel_grid(spec)), spec))


def _shade(shade) -> np.ndarray:
    if isinstance(shade, str):
        try:
            shade = SHADES[shade]
        except KeyError:
            raise ParameterError(f"unknown shade {shade!r}") from None
    return np.asarray(shade, dtype=float)


def overlay_region(img: ImageBuffer, spec: RenderSpec, predicate, shade, opacity: float = 0.6) -> ImageBuffer:
    """Blend the pixels whose centers satisfy ``predicate`` toward ``shade``."""
    if not 0 <= opacity <= 1:
        raise ParameterError("opacity must lie in [0, 1]")
    mask = np.asarray(predicate(pixel_grid(spec)), dtype=bool)
    if mask.shape != img.rgb.shape[:2]:
        raise ParameterError("predicate mask does not match the image")
    out = img.rgb.astype(float)
    out[mask] = (1 - opacity) * out[mask] + opacity * _shade(shade)
    return ImageBuffer(np.clip(np.rint(out), 0, 255).astype(np.uint8))


def render(f: Callable, spec: RenderSpec) -> ImageBuffer:
    img = domain_color(f, spec)
    for ov in spec.overlays:
        img = overlay_region(img, spec, ov.predicate, ov.shade, ov.opacity)
    return img


def write_image(img: ImageBuffer, path) -> None:
    Image.fromarray(img.rgb, mode="RGB").save(path, format="PNG")


def read_image(path) -> ImageBuffer:
    with Image.open(path) as im:
        return ImageBuffer(np.array(im.convert("RGB")))


# -- functions to render ---------------------------------------------------------

_EM_TERMS = 12
_EM_COEFFS = [float(bernoulli_numbers(2 * k)[2 * k]) / math.factorial(2 * k) for k in range(1, _EM_TERMS + 1)]


def _zeta_em(s: np.ndarray, N: int = 30) -> np.ndarray:
    n = np.arange(1, N, dtype=float)
    out = np.zeros(s.shape, dtype=complex)
    for k in n:
        out += k ** -s
    out += N ** (1 - s) / (s - 1) + 0.5 * N ** -s
    poch = s.copy()
    for k, c in enumerate(_EM_COEFFS, start=1):
        out += c * poch * N ** (-s - 2 * k + 1)
        poch = poch * (s + 2 * k - 1) * (s + 2 * k)
    return out


def zeta_plane(s) -> np.ndarray:
    """Riemann zeta on the whole plane; complex infinity at s = 1.

    Euler-Maclaurin summation for Re s >= 1/2, the functional equation with
    the library's Gamma on the left.
    """
    s = np.asarray(s, dtype=complex)
    out = np.empty(s.shape, dtype=complex)
    right = s.real >= 0.5
    with np.errstate(all="ignore"):
        out[right] = _zeta_em(s[right])
        left = ~right
        if np.any(left):
            t = s[left]
            ctx = default_context()
            factor = 2 ** t * np.pi ** (t - 1) * np.sin(np.pi * t / 2) * ctx.gamma_array(1 - t)
            out[left] = factor * _zeta_em(1 - t)
    out[s == 1] = complex(np.inf, np.nan)
    return out


def _gamma(z):
    return default_context().gamma_array(z)


def _gtilde(z):
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, complex(np.nan, np.nan))
    ok = ~((z.imag == 0) & (z.real <= 0))
    out[ok] = g_tilde(z[ok])
    return out


FUNCTIONS: dict[str, Callable] = {"gamma": _gamma, "zeta": zeta_plane, "gtilde": _gtilde}


def region_overlays(R: float = 2 / 3, alpha: float = 14 * math.pi / 30, n: int = 0) -> tuple[Overlay, Overlay]:
    """The sector ``S^inf(R, alpha)`` in white and the strip tilde-U_n in black."""
    spec = RegionSpec(R, alpha, n)
    return (Overlay(lambda z: in_sector_inf(z, R, alpha), "white"),
            Overlay(lambda z: un_index(z, spec, tilde=True) == n, "black"))


def mask_components(mask: np.ndarray) -> int:
    """Number of 4-connected components of a boolean mask."""
    _, count = ndimage.label(np.asarray(mask, dtype=bool))
    return int(count)
