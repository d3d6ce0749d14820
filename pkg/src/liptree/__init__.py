"""Iterated logarithmic Lipschitz spaces on rooted trees and multiplication
operators between them, computed on finite truncations."""

from .exact import NormSolution, exact_operator_norm
from .operators import (
    MuNuProfile,
    OperatorReport,
    TailConfig,
    analyze,
    bounds_distinct,
    bounds_equal,
    classify_tail,
    isometry_defect,
    mu_nu_profile,
)
from .oracle import random_search, random_search_lower_bound
from .spaces import (
    NormReport,
    TreeFunction,
    check_embedding_chain,
    check_point_bound,
    derivative,
    norm,
    norm_k,
)
from .symbols import (
    ExplicitSymbol,
    RadialSymbol,
    TabulatedSymbol,
    eval_symbol,
    load_symbol,
    symbol_from_dict,
)
from .tree import (
    ROOT,
    TreeShape,
    TreeTruncation,
    VertexId,
    build_truncation,
    children,
    distance,
    parent,
    sphere,
)
from .weights import Lambda, ell

__version__ = "0.1.0"
