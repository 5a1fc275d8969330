"""Exact verification toolkit for negative dependence on {0,1}^n.

Measures are exact rational mass functions.  The package checks a
hierarchy of negative-dependence notions with certificates, builds
monotone couplings via max-flow with min-cut certificates on failure,
constructs adaptive bounded-difference martingale trees, and compares
concentration bounds against exactly enumerated tails.
"""

__version__ = "1.0.0"

from .bitops import bits_from_mask, cap, mask_from_bits
from .concentration import (
    REL_TOL,
    TailReport,
    TailRow,
    TailSide,
    chain_exponential_moment,
    default_t_grid,
    exact_tail,
    node_exponential_moment,
    theorem_bound,
    verify_theorem,
)
from .coupling import (
    Coupling,
    DominanceCertificate,
    DominanceResult,
    InfeasibilityCut,
    build_monotone_coupling,
    check_dominance,
    coupling_displacement,
)
from .dependence import (
    GeneratingPolynomial,
    Notion,
    NotionReport,
    NOTION_IMPLICATIONS,
    Verdict,
    check_cna,
    check_cylinder,
    check_neg_association,
    check_neg_regression,
    check_pairwise_nc,
    check_stochastic_covering,
    covariance,
    default_rayleigh_grid,
    rayleigh_falsify,
    upset_indicator_cov,
)
from .errors import (
    BadWidth,
    DimensionMismatch,
    DominanceFails,
    EmptyConditioningEvent,
    EmptySubset,
    IntervalViolation,
    InvalidTestFunction,
    LemmaViolated,
    MassNotOne,
    NegativeMass,
    NegdepError,
    NodeIsLeaf,
    NoEligibleIndex,
    TooLarge,
    ZeroProbabilityEvent,
)
from .martingale import (
    MartingaleTree,
    PickLemmaReport,
    PickResult,
    Skeleton,
    TreeNode,
    build_adaptive_tree,
    build_skeleton,
    fixed_order_tree,
    max_step,
    pick_index,
    root_step,
    verify_pick_lemma,
)
from .measure import (
    Assignment,
    ExplicitMeasure,
    TestFunction,
    constant_function,
    family_anti_pair,
    family_balls_bins,
    family_conditioned_sum,
    family_hadamard,
    family_independent,
    family_nand,
    family_pos_pair,
    new_explicit,
    parse_rational,
    format_rational,
    random_lipschitz,
    sum_function,
    xor_function,
)
from .upsets import ENUMERABLE_DIM, is_up_closed, nontrivial_upsets, upset_members
from .zoo import random_measure, zoo

__all__ = [
    "__version__",
    "bits_from_mask",
    "cap",
    "mask_from_bits",
    # measure
    "Assignment",
    "ExplicitMeasure",
    "TestFunction",
    "new_explicit",
    "parse_rational",
    "format_rational",
    "sum_function",
    "constant_function",
    "xor_function",
    "random_lipschitz",
    "family_nand",
    "family_independent",
    "family_conditioned_sum",
    "family_balls_bins",
    "family_hadamard",
    "family_anti_pair",
    "family_pos_pair",
    # dependence
    "Notion",
    "Verdict",
    "NotionReport",
    "NOTION_IMPLICATIONS",
    "GeneratingPolynomial",
    "covariance",
    "upset_indicator_cov",
    "check_pairwise_nc",
    "check_cylinder",
    "check_neg_association",
    "check_neg_regression",
    "check_cna",
    "check_stochastic_covering",
    "rayleigh_falsify",
    "default_rayleigh_grid",
    # coupling
    "Coupling",
    "DominanceCertificate",
    "InfeasibilityCut",
    "DominanceResult",
    "check_dominance",
    "build_monotone_coupling",
    "coupling_displacement",
    # martingale
    "PickResult",
    "PickLemmaReport",
    "pick_index",
    "verify_pick_lemma",
    "Skeleton",
    "TreeNode",
    "MartingaleTree",
    "build_skeleton",
    "build_adaptive_tree",
    "fixed_order_tree",
    "max_step",
    "root_step",
    # concentration
    "REL_TOL",
    "TailSide",
    "TailRow",
    "TailReport",
    "theorem_bound",
    "exact_tail",
    "default_t_grid",
    "verify_theorem",
    "node_exponential_moment",
    "chain_exponential_moment",
    # upsets
    "ENUMERABLE_DIM",
    "nontrivial_upsets",
    "upset_members",
    "is_up_closed",
    # zoo
    "zoo",
    "random_measure",
    # errors
    "NegdepError",
    "BadWidth",
    "NegativeMass",
    "MassNotOne",
    "ZeroProbabilityEvent",
    "EmptySubset",
    "EmptyConditioningEvent",
    "DimensionMismatch",
    "TooLarge",
    "InvalidTestFunction",
    "NoEligibleIndex",
    "LemmaViolated",
    "IntervalViolation",
    "DominanceFails",
    "NodeIsLeaf",
]
