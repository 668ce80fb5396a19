"""Command-line front end: synthesis, edge recovery, completion, TV.

Subcommands::

    synth     write Fourier samples of a phantom (FSAMPLES text format)
    edge      recover the edge-set polynomial from samples
    lowrank   extrapolate samples by structured low-rank completion
    tv        weighted total-variation recovery on a pixel grid
    spectrum  singular values of the annihilation system

Exit codes: 0 success, 2 validation error, 3 numerical degeneracy.
All randomness (phantom generation, noise, solver init) sits behind a
single --seed flag, so every run is reproducible byte for byte.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import annihilation, lowrank, phantom, trigpoly, tv
from .errors import DegenerateInputError

_OP_TOKENS = {
    "id": annihilation.IDENTITY,
    "dx": annihilation.DX,
    "dy": annihilation.DY,
    "dxx": annihilation.DiffOp(2, 0),
    "dxy": annihilation.DiffOp(1, 1),
    "dyy": annihilation.DiffOp(0, 2),
}


def parse_ops(spec: str, min_order: int = 1) -> tuple[annihilation.DiffOp, ...]:
    """Parse a comma-separated operator list such as ``dx,dy`` or ``dxx,dxy,dyy``."""
    ops = []
    for token in spec.split(","):
        token = token.strip().lower()
        if token not in _OP_TOKENS:
            raise ValueError(f"unknown operator {token!r}; choose from {sorted(_OP_TOKENS)}")
        ops.append(_OP_TOKENS[token])
    if not ops:
        raise ValueError("empty operator list")
    if any(op.order < min_order for op in ops):
        raise ValueError(f"operators of order < {min_order} carry no edge information here")
    return tuple(ops)


def parse_complex(text: str) -> complex:
    try:
        return complex(text)
    except ValueError as exc:
        raise ValueError(f"cannot parse complex number from {text!r}") from exc


# -- file writers -----------------------------------------------------------

def write_pgm(path, image: np.ndarray) -> None:
    """8-bit binary PGM of the real part, affinely windowed to [0, 255].

    The (min, max) window is recorded in a ``<path>.window.txt`` sidecar so
    the mapping is invertible up to quantization.
    """
    img = np.asarray(image)
    if np.iscomplexobj(img):
        img = img.real
    img = img.astype(np.float64)
    lo, hi = float(img.min()), float(img.max())
    if hi > lo:
        scaled = (img - lo) * (255.0 / (hi - lo))
    else:
        scaled = np.zeros_like(img)
    data = np.round(scaled).astype(np.uint8)
    h, w = data.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(data.T.tobytes())  # rows are y-lines
    with open(f"{path}.window.txt", "w") as fh:
        fh.write("%.17g %.17g\n" % (lo, hi))


def read_pgm(path) -> np.ndarray:
    """Read back an 8-bit binary PGM written by :func:`write_pgm`."""
    with open(path, "rb") as fh:
        blob = fh.read()
    parts = blob.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P5" or parts[2] != b"255":
        raise ValueError(f"{path}: not an 8-bit binary PGM from this tool")
    w, h = (int(tok) for tok in parts[1].split())
    raw = np.frombuffer(parts[3], dtype=np.uint8, count=w * h)
    return raw.reshape(h, w).T  # back to [x, y] indexing


def write_sv_csv(path, svals) -> None:
    with open(path, "w") as fh:
        for s in svals:
            fh.write("%.17g\n" % s)


def write_diag_csv(path, rows: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write("iter,objective,constraint_gap,data_residual\n")
        for it, obj, gap, res in rows:
            fh.write("%d,%.17g,%.17g,%.17g\n" % (int(it), obj, gap, res))


def write_tv_csv(path, rows: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write("iter,objective,data_consistency\n")
        for it, obj, cons in rows:
            fh.write("%d,%.17g,%.17g\n" % (int(it), obj, cons))


# -- subcommands --------------------------------------------------------------

def _add_grid_flags(p, prefix: str, help_what: str, required: bool = True):
    p.add_argument(f"--{prefix}-kmax-x", type=int, required=required,
                   help=f"max |kx| of {help_what}")
    p.add_argument(f"--{prefix}-kmax-y", type=int, required=required,
                   help=f"max |ky| of {help_what}")


def cmd_synth(args) -> int:
    grid = trigpoly.FreqRect(args.grid_kmax_x, args.grid_kmax_y)
    rng = np.random.default_rng(args.seed)
    if args.kind == "shepplogan":
        samples = phantom.ellipse_ft(phantom.shepp_logan(), grid)
    elif args.kind == "trigregion":
        if args.mu_file:
            poly = trigpoly.read_trigpoly(args.mu_file)
        else:
            if args.mu_kmax_x is None or args.mu_kmax_y is None:
                raise ValueError("trigregion needs --mu-file or --mu-kmax-x/--mu-kmax-y")
            poly = trigpoly.random_hermitian(
                trigpoly.FreqRect(args.mu_kmax_x, args.mu_kmax_y), rng)
        region = phantom.TrigRegionPhantom(poly, amp_pos=parse_complex(args.amp_plus),
                                           amp_neg=parse_complex(args.amp_minus))
        samples = phantom.raster_dft_oracle(region, args.oracle_n, grid)
        if args.mu_out:
            trigpoly.write_trigpoly(args.mu_out, poly)
    elif args.kind == "diracs":
        if not args.mu_file:
            raise ValueError("diracs needs --mu-file (curve to sample)")
        poly = trigpoly.read_trigpoly(args.mu_file)
        pts = phantom.curve_points(poly, args.n_per_line, args.n_lines)
        if len(pts) == 0:
            raise DegenerateInputError("level set has no curve to sample")
        weights = rng.standard_normal(len(pts)) + 1j * rng.standard_normal(len(pts))
        samples = phantom.dirac_stream_ft(phantom.DiracStream(pts, weights), grid)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown phantom kind {args.kind}")

    if args.noise_sigma > 0:
        noise = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        samples = phantom.FourierSamples(
            grid, samples.values + args.noise_sigma * noise / np.sqrt(2.0))
    phantom.write_fsamples(args.out, samples)
    print(f"wrote {grid.shape[0]}x{grid.shape[1]} samples to {args.out}")
    return 0


def cmd_edge(args) -> int:
    samples = phantom.read_fsamples(args.infile)
    ops = parse_ops(args.ops, min_order=1)
    filter_support = trigpoly.FreqRect(args.filter_kmax_x, args.filter_kmax_y)
    system = annihilation.build_system(samples, filter_support, ops)
    result = annihilation.nullspace_filter(system, rel_tol=args.tol)
    if result.nullity > 1:
        print(f"note: nullspace appears {result.nullity}-dimensional at tol {args.tol:g}; "
              "filter support likely exceeds the minimal one", file=sys.stderr)
    filt = trigpoly.hermitian_project(result.coeffs)
    raster = trigpoly.zero_set_raster(filt, args.raster_n)
    trigpoly.write_trigpoly(args.filter_out, filt)
    write_pgm(args.edge_out, raster.astype(np.float64))
    write_sv_csv(args.sv_out, result.singular_values)
    print(f"recovered {filter_support.shape[0]}x{filter_support.shape[1]} filter "
          f"(nullity {result.nullity}); curve pixels: {int(raster.sum())}")
    return 0


def cmd_lowrank(args) -> int:
    observed = phantom.read_fsamples(args.infile)
    recon_grid = trigpoly.FreqRect(args.recon_kmax_x, args.recon_kmax_y)
    filter_support = trigpoly.FreqRect(args.filter_kmax_x, args.filter_kmax_y)
    ops = parse_ops(args.ops, min_order=1)
    cfg = lowrank.LiftingConfig.for_rect_sampling(filter_support, recon_grid, ops,
                                                  observed.grid)
    acfg = lowrank.AdmmConfig(lam=args.lam, beta=args.beta, rank_r=args.rank,
                              max_iters=args.iters, rel_tol=args.tol, seed=args.seed)
    completed, diag = lowrank.admm_complete(observed, cfg, acfg)

    phantom.write_fsamples(args.samples_out, completed)
    write_diag_csv(args.diag_out, diag)
    write_pgm(args.image_out, lowrank.ifft_image(completed, args.n_out).real)
    write_pgm(args.baseline_out, lowrank.ifft_image(observed, args.n_out).real)
    gap0, gap_end = diag[0, 2], diag[-1, 2]
    print(f"completed {recon_grid.shape[0]}x{recon_grid.shape[1]} grid in {len(diag)} iterations; "
          f"constraint gap {gap0:.3e} -> {gap_end:.3e}")
    return 0


def cmd_tv(args) -> int:
    observed = phantom.read_fsamples(args.infile)
    if args.uniform:
        weights = np.ones((args.n, args.n))
    elif args.mu_file:
        weights = tv.weight_map(trigpoly.read_trigpoly(args.mu_file), args.n)
    else:
        raise ValueError("tv needs --mu-file or --uniform")
    image, trace = tv.weighted_tv_recover(observed, weights, n_iters=args.iters)
    write_pgm(args.image_out, image)
    write_tv_csv(args.obj_out, trace)
    print(f"tv recovery on {args.n}x{args.n} grid: objective {trace[-1, 1]:.6g}, "
          f"consistency {trace[-1, 2]:.3e}")
    return 0


def cmd_spectrum(args) -> int:
    samples = phantom.read_fsamples(args.infile)
    ops = parse_ops(args.ops, min_order=0)
    filter_support = trigpoly.FreqRect(args.filter_kmax_x, args.filter_kmax_y)
    system = annihilation.build_system(samples, filter_support, ops)
    svals = np.linalg.svd(system.matrix, compute_uv=False)
    write_sv_csv(args.sv_out, svals)
    print(f"wrote {len(svals)} singular values to {args.sv_out}")
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvelift",
        description="Recovery of piecewise-smooth images from few Fourier samples")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize phantom Fourier samples")
    p.add_argument("kind", choices=["shepplogan", "trigregion", "diracs"])
    _add_grid_flags(p, "grid", "the sample grid")
    p.add_argument("--out", required=True, help="output FSAMPLES path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-sigma", type=float, default=0.0,
                   help="additive complex Gaussian noise std per sample")
    p.add_argument("--mu-file", help="TRIGPOLY file defining the region level set / curve")
    p.add_argument("--mu-kmax-x", type=int, help="generate a random level set with this kmax")
    p.add_argument("--mu-kmax-y", type=int)
    p.add_argument("--mu-out", help="save the (possibly generated) level set here")
    p.add_argument("--amp-plus", default="1", help="amplitude on the positive region")
    p.add_argument("--amp-minus", default="0", help="amplitude on the negative region")
    p.add_argument("--oracle-n", type=int, default=1024,
                   help="fine-grid size for the quadrature oracle (power of two)")
    p.add_argument("--n-lines", type=int, default=32, help="scan lines for curve sampling")
    p.add_argument("--n-per-line", type=int, default=256, help="bracketing subintervals per line")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("edge", help="recover the edge-set polynomial")
    p.add_argument("--in", dest="infile", required=True, help="input FSAMPLES path")
    _add_grid_flags(p, "filter", "the annihilating filter support")
    p.add_argument("--ops", default="dx,dy", help="comma-separated derivative list")
    p.add_argument("--tol", type=float, default=annihilation.DEFAULT_NULLITY_TOL,
                   help="relative singular-value tolerance for the nullity estimate")
    p.add_argument("--raster-n", type=int, default=512, help="edge raster resolution")
    p.add_argument("--filter-out", required=True, help="output TRIGPOLY path")
    p.add_argument("--edge-out", required=True, help="output edge raster PGM path")
    p.add_argument("--sv-out", required=True, help="output singular-value CSV path")
    p.set_defaults(func=cmd_edge)

    p = sub.add_parser("lowrank", help="extrapolate samples by low-rank completion")
    p.add_argument("--in", dest="infile", required=True, help="input FSAMPLES path")
    _add_grid_flags(p, "recon", "the reconstruction grid")
    _add_grid_flags(p, "filter", "the assumed filter support")
    p.add_argument("--ops", default="dx,dy")
    p.add_argument("--lam", type=float, default=1e6, help="data-fidelity weight")
    p.add_argument("--beta", type=float, default=1.0, help="constraint penalty")
    p.add_argument("--rank", type=int, default=None, help="factor width (default: column count)")
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--tol", type=float, default=1e-9, help="relative-change stopping threshold")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-out", type=int, required=True, help="rendered image resolution")
    p.add_argument("--samples-out", required=True, help="output FSAMPLES path (extrapolated)")
    p.add_argument("--image-out", required=True, help="output reconstruction PGM path")
    p.add_argument("--baseline-out", required=True, help="output zero-padded baseline PGM path")
    p.add_argument("--diag-out", required=True, help="output diagnostics CSV path")
    p.set_defaults(func=cmd_lowrank)

    p = sub.add_parser("tv", help="weighted total-variation recovery")
    p.add_argument("--in", dest="infile", required=True, help="input FSAMPLES path")
    p.add_argument("--mu-file", help="TRIGPOLY level set supplying the weights")
    p.add_argument("--uniform", action="store_true", help="use unit weights (plain TV)")
    p.add_argument("--n", type=int, required=True, help="image resolution")
    p.add_argument("--iters", type=int, default=300)
    p.add_argument("--image-out", required=True)
    p.add_argument("--obj-out", required=True, help="output objective-trace CSV path")
    p.set_defaults(func=cmd_tv)

    p = sub.add_parser("spectrum", help="singular values of the annihilation system")
    p.add_argument("--in", dest="infile", required=True, help="input FSAMPLES path")
    _add_grid_flags(p, "filter", "the filter support")
    p.add_argument("--ops", default="dx,dy")
    p.add_argument("--sv-out", required=True)
    p.set_defaults(func=cmd_spectrum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DegenerateInputError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
