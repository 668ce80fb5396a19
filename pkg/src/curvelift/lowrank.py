"""Structured low-rank completion of Fourier data.

Lifting a frequency grid into the stacked convolution matrix (one patch per
valid shift, one block per derivative operator) turns "an annihilating
filter smaller than the patch exists" into "the lifted matrix is low-rank".
Signal recovery then becomes nuclear-norm matrix completion over the full
reconstruction grid, with observed samples enforced by a quadratic penalty:

    minimize ||T(g)||_* + lambda * ||P_observed(g - f)||_2^2

solved SVD-free by writing T(g) = U V^H and alternating closed-form updates
of U, V, g and a scaled dual variable (ADMM).  The key structural fact is
that T*T is diagonal - each lifted entry reads exactly one coordinate of g -
so the g-update is a pointwise division.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError
from .annihilation import DiffOp, convolution_rows
from .phantom import FourierSamples
from .trigpoly import FreqRect


@dataclass(frozen=True)
class LiftingConfig:
    """Geometry of the lifted matrix.

    ``sampling_mask`` marks the observed frequencies inside ``recon_grid``;
    ``filter_support`` is the assumed annihilating-filter size (larger than
    any minimal filter, so the lifted matrix of the true data is rank
    deficient).
    """

    filter_support: FreqRect
    recon_grid: FreqRect
    ops: tuple[DiffOp, ...]
    sampling_mask: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.ops:
            raise ValueError("need at least one differential operator")
        if not self.recon_grid.contains(self.filter_support):
            raise ValueError("filter support must fit inside the reconstruction grid")
        if self.recon_grid.shape == self.filter_support.shape:
            raise ValueError("reconstruction grid must strictly contain the filter support")
        mask = np.asarray(self.sampling_mask, dtype=bool)
        if mask.shape != self.recon_grid.shape:
            raise ValueError(f"mask shape {mask.shape} does not match grid {self.recon_grid.shape}")
        if not mask.any():
            raise ValueError("sampling mask is empty")
        mask = mask.copy()
        mask.flags.writeable = False
        object.__setattr__(self, "sampling_mask", mask)

    @classmethod
    def for_rect_sampling(cls, filter_support: FreqRect, recon_grid: FreqRect,
                          ops, observed_grid: FreqRect) -> "LiftingConfig":
        return cls(filter_support, recon_grid, tuple(ops),
                   rect_mask(recon_grid, observed_grid))

    @property
    def shift_grid(self) -> FreqRect:
        return FreqRect(self.recon_grid.kmax_x - self.filter_support.kmax_x,
                        self.recon_grid.kmax_y - self.filter_support.kmax_y)

    @property
    def lifted_shape(self) -> tuple[int, int]:
        rx, ry = self.shift_grid.shape
        return (len(self.ops) * rx * ry, self.filter_support.size)


@dataclass(frozen=True)
class AdmmConfig:
    """Solver knobs: data weight, penalty, factor width, iteration control."""

    lam: float = 1e6
    beta: float = 1.0
    rank_r: int | None = None  # None: full column count (exact surrogate)
    max_iters: int = 300
    rel_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.lam <= 0 or self.beta <= 0:
            raise ValueError("lam and beta must be positive")
        if self.rank_r is not None and self.rank_r < 1:
            raise ValueError("rank_r must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


def rect_mask(recon_grid: FreqRect, sub: FreqRect) -> np.ndarray:
    """Boolean mask of a centered sub-rectangle inside the grid."""
    if not recon_grid.contains(sub):
        raise ValueError(f"{sub} does not fit inside {recon_grid}")
    mask = np.zeros(recon_grid.shape, dtype=bool)
    x0 = recon_grid.kmax_x - sub.kmax_x
    y0 = recon_grid.kmax_y - sub.kmax_y
    mask[x0:x0 + sub.shape[0], y0:y0 + sub.shape[1]] = True
    return mask


def embed(samples: FourierSamples, recon_grid: FreqRect) -> np.ndarray:
    """Place samples on their centered position inside a larger grid (zeros elsewhere)."""
    if not recon_grid.contains(samples.grid):
        raise ValueError(f"samples on {samples.grid} do not fit inside {recon_grid}")
    out = np.zeros(recon_grid.shape, dtype=np.complex128)
    x0 = recon_grid.kmax_x - samples.grid.kmax_x
    y0 = recon_grid.kmax_y - samples.grid.kmax_y
    out[x0:x0 + samples.grid.shape[0], y0:y0 + samples.grid.shape[1]] = samples.values
    return out


def lift(g_hat: FourierSamples, cfg: LiftingConfig) -> np.ndarray:
    """Lifted matrix of a full reconstruction-grid array (same assembly as
    the annihilation system)."""
    if g_hat.grid != cfg.recon_grid:
        raise ValueError(f"samples on {g_hat.grid} but config expects {cfg.recon_grid}")
    return _lift_values(g_hat.values, cfg)


def _lift_values(values: np.ndarray, cfg: LiftingConfig) -> np.ndarray:
    return convolution_rows(values, cfg.recon_grid, cfg.filter_support, cfg.ops)


def lift_adjoint(matrix: np.ndarray, cfg: LiftingConfig) -> np.ndarray:
    """Adjoint of the lifting map under <A, B> = sum conj(A) * B.

    out[m] = sum over entries reading frequency m of conj(weight(m)) * entry.
    """
    kf, lf = cfg.filter_support.shape
    rx, ry = cfg.shift_grid.shape
    if matrix.shape != cfg.lifted_shape:
        raise ValueError(f"matrix shape {matrix.shape} does not match lift output {cfg.lifted_shape}")
    out = np.zeros(cfg.recon_grid.shape, dtype=np.complex128)
    per_op = rx * ry
    for i, op in enumerate(cfg.ops):
        block = matrix[i * per_op:(i + 1) * per_op].reshape(rx, ry, kf, lf)[:, :, ::-1, ::-1]
        acc = np.zeros(cfg.recon_grid.shape, dtype=np.complex128)
        for p in range(kf):
            for q in range(lf):
                acc[p:p + rx, q:q + ry] += block[:, :, p, q]
        out += np.conj(op.weights_on_grid(cfg.recon_grid)) * acc
    return out


def gram_diagonal(cfg: LiftingConfig) -> np.ndarray:
    """Diagonal of T*T: patch multiplicity times the summed squared weights.

    Diagonal because each lifted entry depends on exactly one frequency;
    this is what makes the ADMM data update closed-form.
    """
    kf, lf = cfg.filter_support.shape
    rx, ry = cfg.shift_grid.shape
    cx = np.convolve(np.ones(rx), np.ones(kf))
    cy = np.convolve(np.ones(ry), np.ones(lf))
    count = np.outer(cx, cy)
    wsum = np.zeros(cfg.recon_grid.shape)
    for op in cfg.ops:
        wsum += np.abs(op.weights_on_grid(cfg.recon_grid)) ** 2
    return count * wsum


def _right_solve(a: np.ndarray, s: np.ndarray) -> np.ndarray:
    """a @ inv(s) for Hermitian positive-definite s."""
    return np.linalg.solve(s, a.conj().T).conj().T


def admm_complete(observed: FourierSamples, cfg: LiftingConfig,
                  acfg: AdmmConfig) -> tuple[FourierSamples, np.ndarray]:
    """Complete Fourier data on the reconstruction grid.

    Iterates, with Z = T(g), scaled dual D, and factor width r:

        U <- beta (Z + D) V (I + beta V^H V)^{-1}
        V <- beta (Z + D)^H U (I + beta U^H U)^{-1}
        g[m] <- (2 lam 1_obs(m) f[m] + beta adj(U V^H - D)[m])
                / (2 lam 1_obs(m) + beta gram[m])
        D <- D + T(g) - U V^H

    Frequencies that are unobserved and carry zero weight under every
    operator (only DC under first-order operators) are unidentifiable;
    they are held at 0 and a warning is emitted.

    Returns the completed samples and a diagnostics array with one row per
    iteration: (iter, objective, constraint_gap, data_residual) where the
    objective is 0.5(||U||_F^2 + ||V||_F^2) + lam ||P_obs(g - f)||^2 and the
    gap is ||T(g) - U V^H||_F.

    Raises DivergenceError if the constraint gap grows tenfold over any
    50-iteration window while still significant.
    """
    mask = cfg.sampling_mask
    f_obs = embed(observed, cfg.recon_grid)
    expected = rect_mask(cfg.recon_grid, observed.grid)
    if not np.array_equal(mask, expected):
        raise ValueError("sampling mask does not match the observed sample grid")

    lam, beta = acfg.lam, acfg.beta
    n_rows, n_cols = cfg.lifted_shape
    r = acfg.rank_r if acfg.rank_r is not None else n_cols
    if r > n_cols:
        raise ValueError(f"rank_r={r} exceeds the lifted column count {n_cols}")

    gram = gram_diagonal(cfg)
    denom = 2.0 * lam * mask + beta * gram
    dead = denom == 0.0
    if dead.any():
        warnings.warn(f"{int(dead.sum())} unobserved zero-weight frequencies held at 0 "
                      "(unidentifiable under the chosen operators)",
                      RuntimeWarning, stacklevel=2)
        denom = np.where(dead, 1.0, denom)

    rng = np.random.default_rng(acfg.seed)
    u = (rng.standard_normal((n_rows, r)) + 1j * rng.standard_normal((n_rows, r))) / np.sqrt(r)
    v = (rng.standard_normal((n_cols, r)) + 1j * rng.standard_normal((n_cols, r))) / np.sqrt(r)

    g = np.where(mask, f_obs, 0.0)
    z = _lift_values(g, cfg)
    dual = np.zeros_like(z)
    eye = np.eye(r)

    diag = np.zeros((acfg.max_iters, 4))
    n_done = 0
    for it in range(1, acfg.max_iters + 1):
        zd = z + dual
        u = _right_solve(beta * (zd @ v), eye + beta * (v.conj().T @ v))
        v = _right_solve(beta * (zd.conj().T @ u), eye + beta * (u.conj().T @ u))
        x = u @ v.conj().T
        rhs = 2.0 * lam * mask * f_obs + beta * lift_adjoint(x - dual, cfg)
        g_new = np.where(dead, 0.0, rhs / denom)
        z = _lift_values(g_new, cfg)
        gap = float(np.linalg.norm(z - x))
        dual = dual + z - x

        data_res = float(np.linalg.norm((g_new - f_obs)[mask]))
        objective = 0.5 * (np.linalg.norm(u) ** 2 + np.linalg.norm(v) ** 2) + lam * data_res ** 2
        diag[it - 1] = (it, objective, gap, data_res)
        n_done = it

        g_prev_norm = float(np.linalg.norm(g))
        rel_change = float(np.linalg.norm(g_new - g)) / max(g_prev_norm, 1e-300)
        g = g_new

        if it > 50:
            ref = diag[it - 51, 2]
            if gap > 10.0 * ref and gap > 1e-6 * diag[0, 2]:
                raise DivergenceError(
                    f"constraint gap grew {gap / max(ref, 1e-300):.2f}x over 50 iterations "
                    f"(iteration {it})", diagnostics=diag[:n_done].copy())
        if rel_change <= acfg.rel_tol:
            break

    return FourierSamples(cfg.recon_grid, g), diag[:n_done].copy()


def ifft_image(g_hat: FourierSamples, n: int) -> np.ndarray:
    """Render samples on an n x n pixel grid by zero-padded inverse DFT.

    Pixel (i, j) holds the Fourier sum at r = (i/n, j/n); normalization
    satisfies ||image||^2 / n^2 = sum |g[k]|^2.  n must be at least the
    grid dimensions (no truncation).
    """
    kdim, ldim = g_hat.grid.shape
    if n < max(kdim, ldim):
        raise ValueError(f"output resolution {n} would truncate a {kdim}x{ldim} grid")
    padded = np.zeros((n, n), dtype=np.complex128)
    kxs = g_hat.grid.kx_range()
    kys = g_hat.grid.ky_range()
    padded[np.ix_(kxs % n, kys % n)] = g_hat.values
    return np.fft.ifft2(padded) * (n * n)
