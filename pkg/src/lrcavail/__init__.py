"""Locally repairable codes with (r, t)-availability.

Field arithmetic, resolvable-design membership matrices, Cauchy/Gabidulin
MDS codes, the two split-parity constructions with their structured
erasure decoders, and distance bounds with brute-force certification.
"""

from .analysis import (
    asymptotic_report,
    bound_lemma1,
    bound_thm1,
    bound_thm2,
    dmin_exact,
    singleton,
    subcode_bound,
)
from .designs import (
    MembershipMatrix,
    ResolvableDesign,
    ZigzagSpec,
    build_affine_design,
    build_kirkman15,
    build_zigzag_membership,
    check_assumption1,
    design_to_membership,
)
from .errors import GroupUnavailableError, UnrecoverableError
from .gf import FieldElement, FieldSpec, LinearizedPolynomial, frobenius, lin_independent_points, lin_poly_eval
from .lrc import (
    LrcCode,
    construction1,
    construction2,
    decode_generic,
    decode_thm3,
    decode_thm4,
    encode,
    erase,
    repair_symbol,
    verify_availability,
)
from .mds import GabidulinCode, GeneratorMatrix, gabidulin, mds_erasure_decode, systematic_rs

__version__ = "0.1.0"
