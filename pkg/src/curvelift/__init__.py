"""curvelift: continuous-domain recovery of piecewise-smooth images from
few low-frequency Fourier samples.

Edges are modeled as the zero set of a band-limited trigonometric
polynomial; the polynomial is found from an annihilation system built out
of derivative-weighted Fourier samples, and full images are recovered by
structured low-rank completion of the Fourier data.
"""

from .errors import DegenerateInputError, DivergenceError
from .trigpoly import (FreqRect, TrigPoly, hermitian_project, random_hermitian,
                       read_trigpoly, write_trigpoly, zero_set_raster)
from .phantom import (DiracStream, Ellipse, EllipsePhantom, FourierSamples,
                      TrigRegionPhantom, curve_points, dirac_stream_ft,
                      ellipse_ft, raster_dft_oracle, read_fsamples,
                      sample_image, shepp_logan, write_fsamples)
from .annihilation import (DX, DY, GRADIENT, IDENTITY, SECOND_ORDER,
                           AnnihilationSystem, DiffOp, annihilation_residual,
                           build_system, derivative_weight, min_sample_grid,
                           nullspace_filter, sufficient_grids)
from .lowrank import (AdmmConfig, LiftingConfig, admm_complete, embed,
                      gram_diagonal, ifft_image, lift, lift_adjoint, rect_mask)
from .tv import weight_map, weighted_tv_recover

__version__ = "0.1.0"

__all__ = [
    "AdmmConfig", "AnnihilationSystem", "DegenerateInputError", "DiffOp",
    "DiracStream", "DivergenceError", "DX", "DY", "Ellipse", "EllipsePhantom",
    "FourierSamples", "FreqRect", "GRADIENT", "IDENTITY", "LiftingConfig",
    "SECOND_ORDER", "TrigPoly", "TrigRegionPhantom", "admm_complete",
    "annihilation_residual", "build_system", "curve_points",
    "derivative_weight", "dirac_stream_ft", "ellipse_ft", "embed",
    "gram_diagonal", "hermitian_project", "ifft_image", "lift", "lift_adjoint",
    "min_sample_grid", "nullspace_filter", "random_hermitian",
    "raster_dft_oracle", "read_fsamples", "read_trigpoly", "rect_mask",
    "sample_image", "shepp_logan", "sufficient_grids", "weight_map",
    "weighted_tv_recover", "write_fsamples", "write_trigpoly",
    "zero_set_raster",
]
