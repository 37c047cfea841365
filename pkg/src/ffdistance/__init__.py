"""Fourier analysis of distance sets in F_q^d with exact-counting cross-checks."""

from .char_sums import (SumValue, count_diff_squares, diff_square_counts, gauss_G, gauss_g,
                        kloosterman, sphere_fourier, sphere_fourier_grid, twisted_kloosterman)
from .field import FieldCtx, FieldError, legendre, mod_inverse, unit_root
from .fourier import GridFunction, dft, idft, power_sum
from .mattila import (AnalysisReport, InvariantViolation, LevelSums, bound_report, level_sums,
                      mattila_exact, mattila_fourier, quadruple_count, sigma_bound_check)
from .point_sets import (DistanceStats, PointSet, distance_stats, gen_diagonal, gen_full,
                         gen_paraboloid, gen_random, gen_sphere, load_set, nu_hat, salem_constant,
                         save_set)

__all__ = [
    "AnalysisReport", "DistanceStats", "FieldCtx", "FieldError", "GridFunction",
    "InvariantViolation", "LevelSums", "PointSet", "SumValue", "bound_report",
    "count_diff_squares", "dft", "diff_square_counts", "distance_stats", "gauss_G", "gauss_g",
    "gen_diagonal", "gen_full", "gen_paraboloid", "gen_random", "gen_sphere", "idft",
    "kloosterman", "legendre", "level_sums", "load_set", "mattila_exact", "mattila_fourier",
    "mod_inverse", "nu_hat", "power_sum", "quadruple_count", "salem_constant", "save_set",
    "sigma_bound_check", "sphere_fourier", "sphere_fourier_grid", "twisted_kloosterman",
    "unit_root",
]

__version__ = "0.1.0"
