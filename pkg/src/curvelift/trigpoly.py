"""Band-limited periodic trigonometric polynomials on the unit square.

A polynomial is a finite 2-D Fourier series

    p(x, y) = sum_{|kx|<=kmax_x, |ky|<=kmax_y} c[kx, ky] exp(j2pi(kx*x + ky*y))

with complex coefficients on a centered rectangle of integer frequencies.
Hermitian-symmetric coefficients (c[-k] = conj(c[k])) give a real-valued
polynomial whose zero level set is a closed curve on the torus; that curve
is the edge-set model used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import convolve2d

from .errors import DegenerateInputError

TWO_PI = 2.0 * np.pi

#: relative tolerance for the per-pair Hermitian symmetry predicate
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class FreqRect:
    """Centered rectangle of integer frequencies |kx| <= kmax_x, |ky| <= kmax_y.

    Dimensions (2*kmax_x+1, 2*kmax_y+1) are always odd, so the rectangle is
    symmetric about the origin and dilations by an integer stay centered.
    """

    kmax_x: int
    kmax_y: int

    def __post_init__(self):
        if self.kmax_x < 0 or self.kmax_y < 0:
            raise ValueError(f"kmax must be non-negative, got {(self.kmax_x, self.kmax_y)}")

    @property
    def shape(self) -> tuple[int, int]:
        return (2 * self.kmax_x + 1, 2 * self.kmax_y + 1)

    @property
    def size(self) -> int:
        kx, ly = self.shape
        return kx * ly

    def kx_range(self) -> np.ndarray:
        return np.arange(-self.kmax_x, self.kmax_x + 1)

    def ky_range(self) -> np.ndarray:
        return np.arange(-self.kmax_y, self.kmax_y + 1)

    def frequencies(self) -> np.ndarray:
        """All (kx, ky) pairs, row-major (kx outer, ky inner), shape (size, 2)."""
        gx, gy = np.meshgrid(self.kx_range(), self.ky_range(), indexing="ij")
        return np.stack([gx.ravel(), gy.ravel()], axis=1)

    def dilate(self, m: int) -> "FreqRect":
        if m < 0:
            raise ValueError("dilation factor must be non-negative")
        return FreqRect(m * self.kmax_x, m * self.kmax_y)

    def contains(self, other: "FreqRect") -> bool:
        return other.kmax_x <= self.kmax_x and other.kmax_y <= self.kmax_y

    def index_of(self, kx: int, ky: int) -> tuple[int, int]:
        """Array index of frequency (kx, ky); raises if outside the rectangle."""
        if abs(kx) > self.kmax_x or abs(ky) > self.kmax_y:
            raise ValueError(f"frequency {(kx, ky)} outside rectangle {self}")
        return (kx + self.kmax_x, ky + self.kmax_y)


def _as_coeff_array(coeffs, rect: FreqRect) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=np.complex128)
    if arr.shape != rect.shape:
        raise ValueError(f"coefficient array shape {arr.shape} does not match support {rect.shape}")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class TrigPoly:
    """A trigonometric polynomial: support rectangle plus coefficient array.

    ``coeffs[kx + kmax_x, ky + kmax_y]`` is the coefficient of
    exp(j2pi(kx*x + ky*y)).  Instances are immutable; all operations return
    new objects, so concurrent use is safe.
    """

    support: FreqRect
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeff_array(self.coeffs, self.support))

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, support: FreqRect) -> "TrigPoly":
        return cls(support, np.zeros(support.shape, dtype=np.complex128))

    @classmethod
    def constant(cls, value: complex) -> "TrigPoly":
        return cls(FreqRect(0, 0), np.array([[value]], dtype=np.complex128))

    @classmethod
    def from_terms(cls, support: FreqRect, terms: dict) -> "TrigPoly":
        """Build from a {(kx, ky): coefficient} mapping."""
        arr = np.zeros(support.shape, dtype=np.complex128)
        for (kx, ky), val in terms.items():
            arr[support.index_of(kx, ky)] = val
        return cls(support, arr)

    # -- evaluation -------------------------------------------------------

    def eval(self, points) -> np.ndarray:
        """Evaluate at points (x, y); coordinates are wrapped mod 1.

        Returns a complex array of the same length as ``points``.
        """
        pts = np.asarray(points, dtype=np.float64)
        if pts.size == 0:
            return np.zeros(0, dtype=np.complex128)
        pts = np.atleast_2d(pts)
        if pts.shape[1] != 2:
            raise ValueError("points must be (n, 2)")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        pts = np.mod(pts, 1.0)
        phases = np.exp(1j * TWO_PI * (pts @ self.support.frequencies().T))
        return phases @ self.coeffs.ravel()

    def __call__(self, points) -> np.ndarray:
        return self.eval(points)

    def eval_grid(self, n: int, offset: tuple[float, float] = (0.0, 0.0)) -> np.ndarray:
        """Evaluate on the n x n grid x_i = (i + offset_x)/n, y_j = (j + offset_y)/n.

        Separable evaluation; output index [i, j] pairs with (x_i, y_j).
        """
        ox, oy = offset
        xs = (np.arange(n) + ox) / n
        ys = (np.arange(n) + oy) / n
        ex = np.exp(1j * TWO_PI * np.outer(self.support.kx_range(), xs))
        ey = np.exp(1j * TWO_PI * np.outer(self.support.ky_range(), ys))
        return ex.T @ self.coeffs @ ey

    # -- algebra ----------------------------------------------------------

    def multiply(self, other: "TrigPoly") -> "TrigPoly":
        """Product polynomial; support is the Minkowski sum rectangle."""
        support = FreqRect(self.support.kmax_x + other.support.kmax_x,
                           self.support.kmax_y + other.support.kmax_y)
        coeffs = convolve2d(self.coeffs, other.coeffs, mode="full")
        return TrigPoly(support, coeffs)

    def __mul__(self, other):
        if isinstance(other, TrigPoly):
            return self.multiply(other)
        return TrigPoly(self.support, self.coeffs * other)

    __rmul__ = __mul__

    def power(self, n: int) -> "TrigPoly":
        """n-fold product, n >= 1.  n = 0 is rejected to keep the degree
        bookkeeping honest (the result's kmax must be n times the input's)."""
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise ValueError(f"power requires a positive integer exponent, got {n!r}")
        out = self
        for _ in range(n - 1):
            out = out.multiply(self)
        return out

    def __pow__(self, n: int) -> "TrigPoly":
        return self.power(n)

    def gradient(self) -> tuple["TrigPoly", "TrigPoly"]:
        """Partial derivatives (d/dx, d/dy); same support, coefficients
        scaled by j2pi*kx and j2pi*ky."""
        kx = self.support.kx_range()[:, None]
        ky = self.support.ky_range()[None, :]
        dx = TrigPoly(self.support, 1j * TWO_PI * kx * self.coeffs)
        dy = TrigPoly(self.support, 1j * TWO_PI * ky * self.coeffs)
        return dx, dy

    # -- Hermitian symmetry -----------------------------------------------

    def hermitian_error(self) -> float:
        """Largest |c[k] - conj(c[-k])| over the support."""
        flipped = np.conj(self.coeffs[::-1, ::-1])
        return float(np.max(np.abs(self.coeffs - flipped)))

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        scale = float(np.max(np.abs(self.coeffs)))
        return self.hermitian_error() <= tol * max(scale, 1e-300)


def hermitian_project(coeffs: np.ndarray) -> TrigPoly:
    """Phase-align a coefficient array and project it onto Hermitian symmetry.

    Nullspace vectors carry an arbitrary global phase; a real curve needs
    Hermitian coefficients.  The unit phase exp(-j*theta) maximizing the
    Hermitian-symmetric energy has the closed form
    theta = 0.5 * arg(sum_k c[k] * c[-k]); after rotation, c[k] and
    conj(c[-k]) are averaged.  The output is exactly Hermitian by
    construction.  If the input was Hermitian up to a global phase, the
    input is recovered up to sign.
    """
    arr = np.asarray(coeffs, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] % 2 == 0 or arr.shape[1] % 2 == 0:
        raise ValueError("coefficients must be a 2-D array with odd dimensions")
    if not np.any(arr):
        raise DegenerateInputError("cannot phase-align an all-zero coefficient array")
    support = FreqRect(arr.shape[0] // 2, arr.shape[1] // 2)
    theta = 0.5 * np.angle(np.sum(arr * arr[::-1, ::-1]))
    rotated = arr * np.exp(-1j * theta)
    projected = 0.5 * (rotated + np.conj(rotated[::-1, ::-1]))
    return TrigPoly(support, projected)


def zero_set_raster(poly: TrigPoly, n: int, mode: str = "sign-change",
                    tol: float = 1e-6) -> np.ndarray:
    """Rasterize the zero level set of a real (Hermitian) polynomial.

    Samples poly on the n x n grid (i/n, j/n).  In ``sign-change`` mode a
    pixel is marked when the value changes sign against its right or down
    neighbor (periodic wrap); this is parameter-free and invariant under
    scaling of poly.  In ``threshold`` mode pixels with
    |value| <= tol * max|value| are marked.

    Returns a boolean n x n image.
    """
    if not poly.is_hermitian():
        raise ValueError("zero_set_raster requires Hermitian (real-valued) coefficients")
    n_min = 2 * (poly.support.kmax_x + poly.support.kmax_y) + 2
    if n < n_min:
        raise ValueError(f"grid size {n} too coarse to resolve oscillation; need >= {n_min}")
    vals = poly.eval_grid(n).real
    if mode == "sign-change":
        right = np.roll(vals, -1, axis=0)
        down = np.roll(vals, -1, axis=1)
        return (vals * right <= 0) | (vals * down <= 0)
    if mode == "threshold":
        return np.abs(vals) <= tol * np.max(np.abs(vals))
    raise ValueError(f"unknown raster mode {mode!r}")


def random_hermitian(support: FreqRect, rng: np.random.Generator,
                     ensure_curve: bool = True) -> TrigPoly:
    """Random real polynomial with iid Gaussian coefficient structure.

    With ``ensure_curve`` the DC term is re-centered so the polynomial takes
    both signs, guaranteeing a nonempty zero set.
    """
    raw = rng.standard_normal(support.shape) + 1j * rng.standard_normal(support.shape)
    coeffs = 0.5 * (raw + np.conj(raw[::-1, ::-1]))
    if ensure_curve:
        vals = (TrigPoly(support, coeffs).eval_grid(64)).real
        coeffs = coeffs.copy()
        coeffs[support.kmax_x, support.kmax_y] -= 0.5 * (vals.max() + vals.min())
    return TrigPoly(support, coeffs)


# -- text format ----------------------------------------------------------
#
# Line 1: "TRIGPOLY kmax_x kmax_y", then one "kx ky re im" line per
# coefficient, row-major over the full rectangle.  Parsing rejects missing,
# extra, or out-of-order entries.

def write_trigpoly(path, poly: TrigPoly) -> None:
    rect = poly.support
    with open(path, "w") as fh:
        fh.write(f"TRIGPOLY {rect.kmax_x} {rect.kmax_y}\n")
        for kx in rect.kx_range():
            for ky in rect.ky_range():
                c = poly.coeffs[rect.index_of(kx, ky)]
                fh.write("%d %d %.17g %.17g\n" % (kx, ky, c.real, c.imag))


def read_trigpoly(path) -> TrigPoly:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: empty TRIGPOLY file")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "TRIGPOLY":
        raise ValueError(f"{path}: bad TRIGPOLY header {lines[0]!r}")
    rect = FreqRect(int(head[1]), int(head[2]))
    body = lines[1:]
    if len(body) != rect.size:
        raise ValueError(f"{path}: expected {rect.size} coefficient lines, got {len(body)}")
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
    return TrigPoly(rect, arr)
