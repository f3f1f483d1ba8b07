"""Exact formal affine Hecke algebras over formal group laws.

The package builds, for any supported root datum and formal group law, the
truncated formal group algebra with its Weyl action and divided-difference
operators, the twisted algebra with its Demazure-Lusztig elements, and a
battery of machine-checkable identities: operator relations, braid
deformations, basis conversions, residue conditions, graded degenerations,
classical specializations, the rational transport onto the additive-law
algebra, and the rank-one geometric convolution formula.

Everything is exact: coefficients are rationals (or integers) extended by
free symbolic parameters, and series are truncated with explicit precision
bookkeeping.
"""

from .errors import (
    AxiomViolation,
    ExpressionError,
    GroupTooLarge,
    HeckeForgeError,
    NonNilpotentSubstitution,
    NotAUnit,
    NotDivisible,
    NotIntegral,
    PrecisionExhausted,
    RingMismatch,
    UnsupportedLocalization,
    UnsupportedType,
)
from .fga import AlgebraContext, LocalizedElement, loc_add, loc_eq, loc_mul, reduce
from .fgl import (
    FGL,
    build_fgl,
    exponential,
    formal_difference,
    formal_integer,
    formal_inverse,
    formal_sum,
    kappa,
    logarithm,
    mu,
)
from .geom import Rank1Context, p1_pushforward, rank1_convolution_check
from .hecke import (
    MembershipReport,
    ResidueReport,
    TwistedElement,
    T_of_word,
    delta,
    embed,
    from_T_basis,
    kappa_ij,
    make_J,
    make_T,
    make_X,
    make_Y,
    membership_HF,
    residue_check,
    to_T_basis,
)
from .rootdata import RootDatum, WeylElement, WeylGroup, bruhat_leq, build_root_datum, reflect, weyl_group
from .scalars import QQ, ZZ, Ring, ring_with_params
from .series import Series, divide_exact, invert_unit, revert, substitute
from .verify import (
    SUITES,
    SuiteReport,
    Transport,
    run_pbw,
    run_relations,
    run_specialization_additive,
    run_specialization_multiplicative,
    run_transport,
    transport,
)

__version__ = "0.1.0"
