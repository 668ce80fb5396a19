"""Derivative-weighted convolution systems for edge recovery.

If a signal's discontinuities sit on the zero curve of a real trigonometric
polynomial, the Fourier samples of the signal's partial derivatives are
annihilated by convolution with that polynomial's coefficients.  Stacking
every valid convolution shift for a list of derivative operators gives a
block-Toeplitz matrix whose nullspace holds the curve polynomial; this
module builds that matrix, extracts the filter via SVD, and computes the
sample-count bounds that govern when the filter is unique.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import DegenerateInputError
from .phantom import FourierSamples
from .trigpoly import TWO_PI, FreqRect, TrigPoly

#: default relative tolerance separating "zero" singular values on
#: analytically exact data; quadrature-grade data needs ~1e-3
DEFAULT_NULLITY_TOL = 1e-8


@dataclass(frozen=True)
class DiffOp:
    """Constant-coefficient partial derivative d^alpha_x/dx d^alpha_y/dy.

    Edge recovery from raw signal samples uses order >= 1 (order 0 carries
    no edge information).  Order 0 (identity weighting) is allowed for data
    that is already a derivative, e.g. the transform of a boundary-supported
    Dirac stream.
    """

    alpha_x: int
    alpha_y: int

    def __post_init__(self):
        if self.alpha_x < 0 or self.alpha_y < 0:
            raise ValueError(f"multi-index must be non-negative, got {(self.alpha_x, self.alpha_y)}")

    @property
    def order(self) -> int:
        return self.alpha_x + self.alpha_y

    def weights_on_grid(self, rect: FreqRect) -> np.ndarray:
        """Array of (j2pi*kx)^alpha_x (j2pi*ky)^alpha_y over the rectangle."""
        wx = (1j * TWO_PI * rect.kx_range().astype(np.float64)) ** self.alpha_x
        wy = (1j * TWO_PI * rect.ky_range().astype(np.float64)) ** self.alpha_y
        return np.outer(wx, wy)


IDENTITY = DiffOp(0, 0)
DX = DiffOp(1, 0)
DY = DiffOp(0, 1)
GRADIENT = (DX, DY)
SECOND_ORDER = (DiffOp(2, 0), DiffOp(1, 1), DiffOp(0, 2))


def derivative_weight(k: tuple[int, int], op: DiffOp) -> complex:
    """Fourier-domain factor turning f-hat[k] into the transform of (D f)[k]."""
    kx, ky = k
    return complex((1j * TWO_PI * kx) ** op.alpha_x * (1j * TWO_PI * ky) ** op.alpha_y)


def convolution_rows(values: np.ndarray, sample_grid: FreqRect,
                     filter_support: FreqRect, ops) -> np.ndarray:
    """Stacked convolution matrix shared by edge recovery and lifting.

    Entry at row (op, shift l), column k is weight_op(l-k) * values[l-k];
    rows run op-major then shift row-major, columns row-major over the
    filter support.  Every referenced frequency l-k stays inside the sample
    grid, so the shift grid has kmax = sample kmax - filter kmax.
    """
    ops = tuple(ops)
    if not ops:
        raise ValueError("need at least one differential operator")
    kf, lf = filter_support.shape
    ks, ls = sample_grid.shape
    if ks < kf or ls < lf:
        raise ValueError(
            f"filter support {filter_support.shape} does not fit inside sample grid {sample_grid.shape}")
    if values.shape != sample_grid.shape:
        raise ValueError(f"values shape {values.shape} does not match grid {sample_grid.shape}")
    rx, ry = ks - kf + 1, ls - lf + 1
    blocks = []
    for op in ops:
        weighted = op.weights_on_grid(sample_grid) * values
        windows = sliding_window_view(weighted, (kf, lf))[:, :, ::-1, ::-1]
        blocks.append(windows.reshape(rx * ry, kf * lf))
    return np.concatenate(blocks, axis=0)


@dataclass(frozen=True)
class AnnihilationSystem:
    """Assembled system matrix plus the metadata needed to address entries."""

    matrix: np.ndarray
    filter_support: FreqRect
    sample_grid: FreqRect
    ops: tuple[DiffOp, ...]

    @property
    def shift_grid(self) -> FreqRect:
        return FreqRect(self.sample_grid.kmax_x - self.filter_support.kmax_x,
                        self.sample_grid.kmax_y - self.filter_support.kmax_y)

    def row_index(self, row: int) -> tuple[DiffOp, tuple[int, int]]:
        """Map a matrix row back to its (operator, shift) pair."""
        rx, ry = self.shift_grid.shape
        per_op = rx * ry
        op = self.ops[row // per_op]
        rem = row % per_op
        shift = (rem // ry - self.shift_grid.kmax_x, rem % ry - self.shift_grid.kmax_y)
        return op, shift


def build_system(samples: FourierSamples, filter_support: FreqRect, ops) -> AnnihilationSystem:
    """Assemble the annihilation system for given samples and filter size."""
    ops = tuple(ops)
    matrix = convolution_rows(samples.values, samples.grid, filter_support, ops)
    return AnnihilationSystem(matrix, filter_support, samples.grid, ops)


class NullspaceResult(NamedTuple):
    coeffs: np.ndarray          # filter coefficients on the filter support
    singular_values: np.ndarray  # descending, min(rows, cols) values
    nullity: int                 # estimated dimension of the nullspace


def nullspace_filter(system: AnnihilationSystem,
                     rel_tol: float = DEFAULT_NULLITY_TOL) -> NullspaceResult:
    """Filter estimate from the least singular vector, plus the spectrum.

    The nullity estimate counts singular values <= rel_tol * sigma_max
    (plus the structural deficit when the system has fewer rows than
    columns).  When several singular values tie near zero the last singular
    vector is returned as-is - averaging the subspace would produce a
    filter vanishing on extra curves - and nullity > 1 flags the tie.
    """
    a = system.matrix
    if not np.any(a):
        raise DegenerateInputError(
            "all-zero annihilation matrix: every filter annihilates, no filter recovered")
    rows, cols = a.shape
    _, svals, vh = np.linalg.svd(a, full_matrices=(rows < cols))
    coeffs = np.conj(vh[-1]).reshape(system.filter_support.shape)
    nullity = int(np.sum(svals <= rel_tol * svals[0])) + max(0, cols - rows)
    return NullspaceResult(coeffs, svals, nullity)


def annihilation_residual(samples: FourierSamples, filt: TrigPoly, ops) -> float:
    """Scale-invariant annihilation error ||T c||_2 / (||T||_F ||c||_2).

    Zero over zero (constant signal, or zero filter) is guarded: returns
    0.0 and emits a degenerate-input warning.
    """
    matrix = convolution_rows(samples.values, samples.grid, filt.support, tuple(ops))
    t_norm = float(np.linalg.norm(matrix))
    c_norm = float(np.linalg.norm(filt.coeffs))
    if t_norm == 0.0 or c_norm == 0.0:
        warnings.warn("degenerate annihilation residual (zero system or zero filter); returning 0",
                      RuntimeWarning, stacklevel=2)
        return 0.0
    return float(np.linalg.norm(matrix @ filt.coeffs.ravel()) / (t_norm * c_norm))


class MinSampleGrid(NamedTuple):
    k_dim: int
    l_dim: int
    margin: int  # kmax growth applied to both dimensions


def min_sample_grid(k_dim: int, l_dim: int) -> MinSampleGrid:
    """Smallest equal-margin odd sample grid meeting the equation count.

    For a K x L filter and first-order gradient operators, a K' x L' grid
    yields 2*(K'-K+1)*(L'-L+1) equations, which must reach the K*L unknowns.
    Equal margins keep the grid growth symmetric; the per-dimension shift
    count 2m+1 is the smallest odd t with 2*t^2 >= K*L.
    """
    if k_dim < 1 or l_dim < 1 or k_dim % 2 == 0 or l_dim % 2 == 0:
        raise ValueError(f"filter dimensions must be odd positive, got {(k_dim, l_dim)}")
    t = max(1, math.isqrt((k_dim * l_dim) // 2))
    while 2 * t * t < k_dim * l_dim:
        t += 1
    if t % 2 == 0:
        t += 1
    margin = (t - 1) // 2
    return MinSampleGrid(k_dim + 2 * margin, l_dim + 2 * margin, margin)


def sufficient_grids(filter_support: FreqRect) -> tuple[FreqRect, FreqRect]:
    """Shift and sample grids guaranteeing a unique filter: the dilations
    by 2 (shifts) and 3 (samples) of the filter support."""
    return filter_support.dilate(2), filter_support.dilate(3)
