"""equivk: exact-arithmetic verification of Z/2-equivariant K-theory.

Modules over the representation ring R = Z[t]/(t^2-1), localization across
Spec R, the paired invariant (K*_G, K*_{G,-}, phi, psi), and the two local
Kunneth short exact sequences, all checked against independent oracles on a
catalog of small Z/2-spaces.
"""

__version__ = "0.1.0"

from .linalg import IntMatrix, Partition, SnfResult, lr_extension_feasible, snf, solve_membership
from .rep_ring import (
    Mode,
    PrimeSpot,
    RingElem,
    classify_ideal,
    localization_target,
    maximal,
    minimal_i,
    minimal_j,
)
from .rmod import (
    AbelianGroup,
    FgRModule,
    GradedZpModule,
    NotDvrModule,
    PresentedAb,
    RModuleMap,
    ZpModule,
    homology_at,
    localize,
    tensor_zp,
    tor1_zp,
    validate_module,
)
from .kinv import (
    KInvariant,
    SixTermData,
    forgetful_ses,
    free_space_module,
    localize_kinvariant,
    six_term_verify,
    uniquely_divisible,
    validate_kinvariant,
)
from .kunneth import KunnethResult, Side, doubling_check, kunneth_local, support_g_vanishing
from .spaces import Atom, Cell, DisjointUnion, Product, SuspendR, SuspendV, eval_local, free_oracle

__all__ = [
    "__version__",
    "IntMatrix",
    "Partition",
    "SnfResult",
    "snf",
    "solve_membership",
    "lr_extension_feasible",
    "RingElem",
    "PrimeSpot",
    "Mode",
    "classify_ideal",
    "localization_target",
    "maximal",
    "minimal_i",
    "minimal_j",
    "AbelianGroup",
    "FgRModule",
    "GradedZpModule",
    "NotDvrModule",
    "PresentedAb",
    "RModuleMap",
    "ZpModule",
    "homology_at",
    "localize",
    "tensor_zp",
    "tor1_zp",
    "validate_module",
    "KInvariant",
    "SixTermData",
    "forgetful_ses",
    "free_space_module",
    "localize_kinvariant",
    "six_term_verify",
    "uniquely_divisible",
    "validate_kinvariant",
    "KunnethResult",
    "Side",
    "doubling_check",
    "kunneth_local",
    "support_g_vanishing",
    "Atom",
    "Cell",
    "DisjointUnion",
    "Product",
    "SuspendR",
    "SuspendV",
    "eval_local",
    "free_oracle",
]
