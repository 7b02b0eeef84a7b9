"""Filter language: AST nodes, parser, and three-valued evaluation."""

from .evaluate import EvalResult, evaluate, matches, selectivity_filter
from .nodes import (
    And,
    Comparison,
    FilterNode,
    Known,
    Length,
    Not,
    Or,
    SetMembership,
    StringMatch,
    ast_depth,
)
from .parser import MAX_FILTER_BYTES, MAX_FILTER_DEPTH, parse_filter

__all__ = [
    "And",
    "Comparison",
    "EvalResult",
    "FilterNode",
    "Known",
    "Length",
    "MAX_FILTER_BYTES",
    "MAX_FILTER_DEPTH",
    "Not",
    "Or",
    "SetMembership",
    "StringMatch",
    "ast_depth",
    "evaluate",
    "matches",
    "parse_filter",
    "selectivity_filter",
]
