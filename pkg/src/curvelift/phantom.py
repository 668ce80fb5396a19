"""Ground-truth test signals and their Fourier samples.

Three signal families, each with an exact or quadrature path to Fourier
samples of a function on the unit square:

* ellipse phantoms (closed-form transform via the order-1 Bessel function),
* two-region phantoms split by the sign of a trigonometric polynomial,
  piecewise constant or piecewise linear (quadrature oracle),
* weighted Dirac streams (exact exponential sums), typically supported on
  a polynomial's zero curve via :func:`curve_points`.

Fourier convention, used everywhere in this package:

    value[k] = integral over [0,1]^2 of f(r) * exp(-j2pi<k, r>) dr

so the coefficient of d/dx is +j2pi*kx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import j1

from .trigpoly import TWO_PI, FreqRect, TrigPoly

#: bisection target for curve-point extraction
_ROOT_TOL = 1e-13


@dataclass(frozen=True)
class FourierSamples:
    """Complex samples of f-hat on a centered rectangle of integer frequencies."""

    grid: FreqRect
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.complex128)
        if arr.shape != self.grid.shape:
            raise ValueError(f"values shape {arr.shape} does not match grid {self.grid.shape}")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    def value_at(self, kx: int, ky: int) -> complex:
        return complex(self.values[self.grid.index_of(kx, ky)])

    def hermitian_error(self) -> float:
        flipped = np.conj(self.values[::-1, ::-1])
        return float(np.max(np.abs(self.values - flipped)))


@dataclass(frozen=True)
class Ellipse:
    amplitude: complex
    center: tuple[float, float]
    semi_axes: tuple[float, float]
    angle: float = 0.0  # radians, counterclockwise


@dataclass(frozen=True)
class EllipsePhantom:
    """Superposition of constant-amplitude ellipses inside the unit square."""

    ellipses: tuple[Ellipse, ...]

    def __post_init__(self):
        object.__setattr__(self, "ellipses", tuple(self.ellipses))
        for e in self.ellipses:
            a, b = e.semi_axes
            if a <= 0 or b <= 0:
                raise ValueError(f"semi-axes must be positive, got {e.semi_axes}")
            ca, sa = math.cos(e.angle), math.sin(e.angle)
            hx = math.hypot(a * ca, b * sa)
            hy = math.hypot(a * sa, b * ca)
            cx, cy = e.center
            if cx - hx < 0 or cx + hx > 1 or cy - hy < 0 or cy + hy > 1:
                raise ValueError(
                    f"ellipse bounding box [{cx - hx:.3f}, {cx + hx:.3f}] x "
                    f"[{cy - hy:.3f}, {cy + hy:.3f}] leaves the unit square")


@dataclass(frozen=True)
class TrigRegionPhantom:
    """Two-region signal split by the sign of a real trigonometric polynomial.

    Region values are ``amp_pos``/``amp_neg`` plus, optionally, a linear term
    <lin, r> per region.  Note a nonzero linear term on a region touching
    the square's boundary breaks periodicity of the signal; quadrature
    stays honest but annihilation arguments then no longer apply.
    """

    levelset: TrigPoly
    amp_pos: complex = 1.0
    amp_neg: complex = 0.0
    lin_pos: tuple[complex, complex] | None = None
    lin_neg: tuple[complex, complex] | None = None

    def __post_init__(self):
        if not self.levelset.is_hermitian():
            raise ValueError("region level set must be Hermitian (real-valued)")


@dataclass(frozen=True)
class DiracStream:
    """Weighted point masses on the unit square."""

    points: np.ndarray  # (n, 2) in [0, 1)^2
    weights: np.ndarray  # (n,) complex

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=np.float64))
        wts = np.atleast_1d(np.asarray(self.weights, dtype=np.complex128))
        if pts.size == 0:
            pts = pts.reshape(0, 2)
        if pts.shape[1] != 2:
            raise ValueError("points must be (n, 2)")
        if len(pts) != len(wts):
            raise ValueError(f"{len(pts)} points vs {len(wts)} weights")
        pts = np.mod(pts, 1.0)
        pts.flags.writeable = False
        wts = wts.copy()
        wts.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)


# -- closed-form ellipse transform -----------------------------------------

def ellipse_ft(phantom: EllipsePhantom, grid: FreqRect) -> FourierSamples:
    """Analytic Fourier samples of an ellipse phantom.

    Per ellipse: A*a*b * exp(-j2pi<k, c>) * J1(2pi rho)/rho, where
    rho = |(a*u, b*v)| and (u, v) is k rotated by -angle; the rho -> 0
    limit is pi*A*a*b (the ellipse area times the amplitude).
    """
    kx = grid.kx_range()[:, None].astype(np.float64)
    ky = grid.ky_range()[None, :].astype(np.float64)
    out = np.zeros(grid.shape, dtype=np.complex128)
    for e in phantom.ellipses:
        a, b = e.semi_axes
        ca, sa = math.cos(e.angle), math.sin(e.angle)
        u = ca * kx + sa * ky
        v = -sa * kx + ca * ky
        rho = np.hypot(a * u, b * v)
        jinc = np.full_like(rho, np.pi)
        nz = rho > 0
        jinc[nz] = j1(TWO_PI * rho[nz]) / rho[nz]
        shift = np.exp(-1j * TWO_PI * (kx * e.center[0] + ky * e.center[1]))
        out += e.amplitude * a * b * shift * jinc
    return FourierSamples(grid, out)


_SHEPP_LOGAN_TABLE = [
    # amplitude, a, b, x0, y0, angle (degrees); classic high-contrast values
    (1.0, 0.6900, 0.9200, 0.00, 0.0000, 0.0),
    (-0.8, 0.6624, 0.8740, 0.00, -0.0184, 0.0),
    (-0.2, 0.1100, 0.3100, 0.22, 0.0000, -18.0),
    (-0.2, 0.1600, 0.4100, -0.22, 0.0000, 18.0),
    (0.1, 0.2100, 0.2500, 0.00, 0.3500, 0.0),
    (0.1, 0.0460, 0.0460, 0.00, 0.1000, 0.0),
    (0.1, 0.0460, 0.0460, 0.00, -0.1000, 0.0),
    (0.1, 0.0460, 0.0230, -0.08, -0.6050, 0.0),
    (0.1, 0.0230, 0.0230, 0.00, -0.6060, 0.0),
    (0.1, 0.0230, 0.0460, 0.06, -0.6050, 0.0),
]

#: shrink factor mapping the published [-1,1]^2 phantom into the unit square
_SHEPP_LOGAN_SCALE = 0.48


def shepp_logan() -> EllipsePhantom:
    """The 10-ellipse head phantom, scaled into the unit square."""
    s = _SHEPP_LOGAN_SCALE
    ellipses = [
        Ellipse(amplitude=amp, center=(0.5 + s * x0, 0.5 + s * y0),
                semi_axes=(s * a, s * b), angle=math.radians(deg))
        for amp, a, b, x0, y0, deg in _SHEPP_LOGAN_TABLE
    ]
    return EllipsePhantom(tuple(ellipses))


# -- spatial rasterization and the quadrature oracle ------------------------

def sample_image(phantom, n: int, offset: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
    """Point-sample a phantom on the grid ((i+ox)/n, (j+oy)/n).

    Output index [i, j] pairs with (x_i, y_j), matching the rendering
    convention of the inverse-transform path.
    """
    ox, oy = offset
    if isinstance(phantom, EllipsePhantom):
        xs = (np.arange(n) + ox)[:, None] / n
        ys = (np.arange(n) + oy)[None, :] / n
        out = np.zeros((n, n), dtype=np.complex128)
        for e in phantom.ellipses:
            a, b = e.semi_axes
            ca, sa = math.cos(e.angle), math.sin(e.angle)
            dx = xs - e.center[0]
            dy = ys - e.center[1]
            u = ca * dx + sa * dy
            v = -sa * dx + ca * dy
            out += e.amplitude * (((u / a) ** 2 + (v / b) ** 2) <= 1.0)
        return out
    if isinstance(phantom, TrigRegionPhantom):
        vals = phantom.levelset.eval_grid(n, offset).real
        pos = vals > 0
        out = np.where(pos, np.complex128(phantom.amp_pos), np.complex128(phantom.amp_neg))
        if phantom.lin_pos is not None or phantom.lin_neg is not None:
            xs = (np.arange(n) + ox)[:, None] / n
            ys = (np.arange(n) + oy)[None, :] / n
            lp = phantom.lin_pos or (0.0, 0.0)
            ln = phantom.lin_neg or (0.0, 0.0)
            out = out + np.where(pos, lp[0] * xs + lp[1] * ys, ln[0] * xs + ln[1] * ys)
        return out
    raise TypeError(f"cannot rasterize {type(phantom).__name__}")


def raster_dft_oracle(phantom, n_fine: int, grid: FreqRect) -> FourierSamples:
    """Quadrature Fourier samples, independent of any analytic path.

    The phantom is averaged over 2x2 subpixels of an n_fine grid (halving
    boundary-pixel bias), then a normalized FFT with midpoint phase
    correction extracts the requested frequencies.  Accuracy is O(1/n_fine)
    relative for piecewise-constant signals; in practice far better at
    frequencies well below n_fine.
    """
    if n_fine < 2 or (n_fine & (n_fine - 1)) != 0:
        raise ValueError(f"fine grid size must be a power of two, got {n_fine}")
    max_freq = max(grid.kmax_x, grid.kmax_y, 1)
    if n_fine < 8 * max_freq:
        raise ValueError(f"fine grid {n_fine} cannot resolve frequencies up to {max_freq}; "
                         f"need >= {8 * max_freq}")
    pix = np.zeros((n_fine, n_fine), dtype=np.complex128)
    for ox in (0.25, 0.75):
        for oy in (0.25, 0.75):
            pix += sample_image(phantom, n_fine, (ox, oy))
    pix *= 0.25
    spec = np.fft.fft2(pix) / (n_fine * n_fine)
    kxs = grid.kx_range()
    kys = grid.ky_range()
    gathered = spec[np.ix_(kxs % n_fine, kys % n_fine)]
    # samples sit at pixel centers (i+1/2)/n, hence the half-pixel phase
    px = np.exp(-1j * np.pi * kxs / n_fine)
    py = np.exp(-1j * np.pi * kys / n_fine)
    return FourierSamples(grid, gathered * np.outer(px, py))


# -- Dirac streams ----------------------------------------------------------

def dirac_stream_ft(stream: DiracStream, grid: FreqRect) -> FourierSamples:
    """Exact transform of a weighted point stream:
    value[k] = sum_m w_m exp(-j2pi<k, r_m>)."""
    freqs = grid.frequencies()  # (K*L, 2)
    if len(stream.points) == 0:
        return FourierSamples(grid, np.zeros(grid.shape, dtype=np.complex128))
    phases = np.exp(-1j * TWO_PI * (freqs @ stream.points.T))  # (K*L, n)
    values = phases @ stream.weights
    return FourierSamples(grid, values.reshape(grid.shape))


def _line_coeffs(poly: TrigPoly, y: float) -> np.ndarray:
    ey = np.exp(1j * TWO_PI * poly.support.ky_range() * y)
    return poly.coeffs @ ey


def _line_eval(cline: np.ndarray, kxs: np.ndarray, x: float) -> float:
    return float(np.real(np.exp(1j * TWO_PI * kxs * x) @ cline))


def curve_points(poly: TrigPoly, n_per_line: int, n_lines: int) -> np.ndarray:
    """Points on the zero curve of a real polynomial, by line scanning.

    Scans ``n_lines`` horizontal lines y = (j+1/2)/n_lines; on each,
    brackets sign changes over ``n_per_line`` subintervals of [0, 1] and
    bisects until |value| <= 1e-13.  Returns an (m, 2) array; an empty
    array signals an empty curve (not an error).
    """
    if not poly.is_hermitian():
        raise ValueError("curve extraction requires Hermitian coefficients")
    if poly.support.kmax_x == 0 and poly.support.kmax_y == 0:
        raise ValueError("constant polynomial has no curve to scan")
    kxs = poly.support.kx_range()
    xs = np.arange(n_per_line + 1) / n_per_line
    found = []
    for j in range(n_lines):
        y = (j + 0.5) / n_lines
        cline = _line_coeffs(poly, y)
        vals = np.real(np.exp(1j * TWO_PI * np.outer(xs, kxs)) @ cline)
        for i in range(n_per_line):
            lo, hi = xs[i], xs[i + 1]
            flo, fhi = vals[i], vals[i + 1]
            if flo == 0.0:
                found.append((lo, y))
                continue
            if flo * fhi >= 0.0:
                continue
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fmid = _line_eval(cline, kxs, mid)
                if abs(fmid) <= _ROOT_TOL:
                    found.append((mid, y))
                    break
                if (fmid > 0) == (flo > 0):
                    lo, flo = mid, fmid
                else:
                    hi = mid
    if not found:
        return np.zeros((0, 2))
    return np.array(found)


# -- text format ------------------------------------------------------------
#
# Line 1: "FSAMPLES kmax_x kmax_y", then "kx ky re im" lines, row-major over
# the full rectangle, %.17g.  Interchange format between synthesis and all
# recovery front ends.

def write_fsamples(path, samples: FourierSamples) -> None:
    rect = samples.grid
    with open(path, "w") as fh:
        fh.write(f"FSAMPLES {rect.kmax_x} {rect.kmax_y}\n")
        for kx in rect.kx_range():
            for ky in rect.ky_range():
                v = samples.values[rect.index_of(kx, ky)]
                fh.write("%d %d %.17g %.17g\n" % (kx, ky, v.real, v.imag))


def read_fsamples(path) -> FourierSamples:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty FSAMPLES file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "FSAMPLES":
        raise ValueError(f"{path}: bad FSAMPLES header {lines[0]!r}")
    rect = FreqRect(int(head[1]), int(head[2]))
    body = lines[1:]
    if len(body) != rect.size:
        raise ValueError(f"{path}: expected {rect.size} sample lines, got {len(body)}")
    arr = np.zeros(rect.shape, dtype=np.complex128)
    idx = 0
    for kx in rect.kx_range():
        for ky in rect.ky_range():
            parts = body[idx].split()
            if len(parts) != 4:
                raise ValueError(f"{path}: malformed line {body[idx]!r}")
            if int(parts[0]) != kx or int(parts[1]) != ky:
                raise ValueError(
                    f"{path}: expected frequency ({kx}, {ky}) at line {idx + 2}, "
                    f"got ({parts[0]}, {parts[1]})")
            arr[rect.index_of(kx, ky)] = float(parts[2]) + 1j * float(parts[3])
            idx += 1
    return FourierSamples(rect, arr)
