"""Dirichlet eigenvalues of planar annuli as zeros of cross-products of Bessel
functions, their regime asymptotics, and the associated shifted-lattice
counting problems, including the two-term Weyl remainder scan."""

__version__ = "0.1.0"

from .counting import (CountReport, ExponentTargets, RhoSumSpec, SpectrumCache,
                       band_count, band_error, eig_count, fit_exponent,
                       lattice_count_slanted, lattice_count_uniform,
                       lattice_count_variable, rho, rho_sum, sandwich_gap,
                       smallest_sandwich_constant, vdc_bound, weyl_remainder,
                       weyl_scan)
from .errors import (DomainError, NumericRangeError, SingularityError,
                     UnsupportedConfigurationError)
from .geometry import (AnnulusGeometry, F, F_partials, G, H, T, ShiftFunctionTable,
                       airy_neg_zeros, beta_gamma, build_shift_table, g, h,
                       h_inverse, psi, psi_prime)
from .specfun import (EvalResult, ZetaBranch, airy, bessel_j, bessel_jp, bessel_y,
                      bessel_yp, olver_jn, olver_yn, oracle_bessel_j,
                      oracle_bessel_y, transitional_jn, transitional_yn, zeta_of_z)
from .zeros import (RegimeConfig, SpectralZero, bracket, f, find_zero,
                    regime_bound, residual_report, scan_zeros, zero_lower_bound,
                    zeros_up_to)

__all__ = [
    "AnnulusGeometry", "CountReport", "DomainError", "EvalResult",
    "ExponentTargets", "F", "F_partials", "G", "H", "NumericRangeError",
    "RegimeConfig", "RhoSumSpec", "ShiftFunctionTable", "SingularityError",
    "SpectralZero", "SpectrumCache", "T", "UnsupportedConfigurationError",
    "ZetaBranch", "airy", "airy_neg_zeros", "band_count", "band_error",
    "bessel_j", "bessel_jp", "bessel_y", "bessel_yp", "beta_gamma", "bracket",
    "build_shift_table", "eig_count", "f", "find_zero", "fit_exponent", "g",
    "h", "h_inverse", "lattice_count_slanted", "lattice_count_uniform",
    "lattice_count_variable", "olver_jn", "olver_yn", "oracle_bessel_j",
    "oracle_bessel_y", "psi", "psi_prime", "regime_bound", "residual_report",
    "rho", "rho_sum", "sandwich_gap", "scan_zeros", "smallest_sandwich_constant",
    "transitional_jn", "transitional_yn", "vdc_bound", "weyl_remainder",
    "weyl_scan", "zero_lower_bound", "zeros_up_to", "zeta_of_z",
]
