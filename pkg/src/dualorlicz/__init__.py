"""Dual Orlicz-Brunn-Minkowski functionals on discretized star bodies."""

__version__ = "0.1.0"

from .sphgrid import SphericalGrid, GridFunction, build_grid, integrate, unit_ball_volume
from .bodies import (StarBody, LinearMap, BodyOnGrid, ball, ellipsoid, lp_ball,
                     polytope, cube, cross_polytope, from_grid_values, star_polygon,
                     make_random_star, custom_body, radial_eval, support_eval,
                     polar, convex_hull, transform, centroid, centered_membership)
from .orlicz import (OrliczFunction, FunctionClass, Composition, power, constant,
                     from_expression, compose, classify, parse_function_spec)
from .functionals import (FunctionalValue, volume, vrad, dual_mixed_volume,
                          dual_surface_area, dual_mean_radius, primal_mixed_volume,
                          primal_surface_area, primal_mean_width,
                          multi_dual_mixed_volume, ith_dual_mixed_volume)
from .extremal import (ExtremalProblem, ExtremalResult, estimate,
                       estimate_ellipsoid_restricted, estimate_ith_mixed,
                       estimate_multi, normalize_polar_volume, objective)
from .verify import REGISTRY, CHECK_IDS, run_check, run_suite, get_check

__all__ = [name for name in dir() if not name.startswith("_")]
