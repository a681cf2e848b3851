"""Schwarz functions of real algebraic curves, rational maps between curves,
and rational maps that preserve the unit circle."""

__version__ = "0.1.0"

from .algebra import gcd, poly_gcd, resultant, root_bound, squarefree_part
from .blaschke import (
    BlaschkeFactorization,
    PSLabel,
    PSResult,
    dagger,
    factor_unimodular,
    is_circle_preserving,
    ps_bound_check,
    unimodular_locus,
)
from .curve import RealCurve, SchwarzForm, complexify, preset_curve, realify, singular_points
from .errors import SchwarzError
from .exact import ExactComplex
from .numeric import INFINITY, roots_numeric
from .parse import ParseError, parse_poly
from .poly import Poly, UniPoly
from .puiseux import (
    AsymptoticClass,
    AsymptoticTag,
    PuiseuxBranch,
    branch_points,
    branches_at_infinity,
    classify,
    condition_a_holds,
)
from .ratmap import RationalMap, compose, eval_map, image_curve, make_map, maps_into, parse_map
from .verify import (
    ContinuationPath,
    MapExpr,
    VerificationReport,
    continue_schwarz,
    eval_expr,
    verify_involution,
    verify_reflection_identity,
)
