"""Exact implicitization of rational parametric surfaces.

Two independent matrix methods adapted to the Newton polygon of the input —
the hybrid resultant matrix and the method of moving planes and quadrics —
plus a classical-resultant oracle for cross checking.
"""

from .chow import (ChowMatrix, ImplicitResult, bezout_block,
                   build_chow_matrix, cross_gcd, implicitize_chow)
from .errors import (AssumptionViolated, DegenerateInput, DegenerateSupport,
                     EliminationCollapse, InjectivityFailure, MissingComponent,
                     NoSuchMinor, NotDivisible, NotImplicitizable, ParseError,
                     SamplingExhausted, SupportOverflow, ToricImplError,
                     UnsupportedVariables, VerificationFailed, WrongVariable)
from .lattice import (DegreeSpec, Edge, EdgeSelection, Polygon,
                      basepoint_free_check, degree_formula_check,
                      ehrhart_counts, interior_points, lattice_points,
                      newton_polygon, polygon_points, select_edge_set)
from .linalg import (PolyMatrix, RationalMatrix, det_poly, generic_rank,
                     kernel_basis, maximal_minor, rank)
from .moving import (MQMatrix, MovingPlane, MovingQuadric, assemble_mq_matrix,
                     build_psi1, build_psi2, implicitize_mq, moving_planes,
                     moving_quadrics_complement)
from .oracle import (SurfaceSample, elim_implicitize, resultant_in,
                     sample_surface, verify_vanishing)
from .polynomials import (Polynomial, format_poly, poly_arith, poly_gcd,
                          poly_power_root)
from .surfaces import (SurfaceInput, format_surface, parse_input,
                       prepare_parameterization)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
