"""Three-valued evaluation of filter ASTs against entry attribute mappings.

Absent (or null) property values make predicates evaluate to UNKNOWN rather
than false; AND/OR/NOT combine results with the Kleene tables. Both operands
of a connective are always evaluated so that type errors surface regardless
of the other side's value.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping, Sequence
from typing import Any, TypeVar

from ..errors import FilterTypeError
from .nodes import (
    And,
    Comparison,
    FilterNode,
    Known,
    Length,
    LiteralValue,
    Not,
    Or,
    SetMembership,
    StringMatch,
)


class EvalResult(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"


_MISSING = object()


def _from_bool(flag: bool) -> EvalResult:
    return EvalResult.TRUE if flag else EvalResult.FALSE


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _compare(prop: str, op: str, actual: Any, literal: LiteralValue) -> bool:
    if isinstance(literal, str):
        if not isinstance(actual, str):
            raise FilterTypeError(
                f"{prop}: cannot compare {type(actual).__name__} value with a string"
            )
        if op == "=":
            return actual == literal
        if op == "!=":
            return actual != literal
        raise FilterTypeError(f"{prop}: strings only support = and !=, not {op}")
    if not _is_number(actual):
        raise FilterTypeError(
            f"{prop}: cannot compare {type(actual).__name__} value with a number"
        )
    if op == "=":
        return actual == literal
    if op == "!=":
        return actual != literal
    if op == "<":
        return actual < literal
    if op == "<=":
        return actual <= literal
    if op == ">":
        return actual > literal
    return actual >= literal


def _item_matches(prop: str, item: Any, literal: LiteralValue) -> bool:
    if isinstance(literal, str):
        if not isinstance(item, str):
            raise FilterTypeError(
                f"{prop}: list holds {type(item).__name__} items, not strings"
            )
        return item == literal
    if not _is_number(item):
        raise FilterTypeError(
            f"{prop}: list holds {type(item).__name__} items, not numbers"
        )
    return item == literal


def _is_list(value: Any) -> bool:
    return isinstance(value, Sequence) and not isinstance(value, (str, bytes))


def evaluate(node: FilterNode, values: Mapping[str, Any]) -> EvalResult:
    """Evaluate ``node`` against a property-name → value mapping."""
    if isinstance(node, And):
        left = evaluate(node.left, values)
        right = evaluate(node.right, values)
        if EvalResult.FALSE in (left, right):
            return EvalResult.FALSE
        if EvalResult.UNKNOWN in (left, right):
            return EvalResult.UNKNOWN
        return EvalResult.TRUE
    if isinstance(node, Or):
        left = evaluate(node.left, values)
        right = evaluate(node.right, values)
        if EvalResult.TRUE in (left, right):
            return EvalResult.TRUE
        if EvalResult.UNKNOWN in (left, right):
            return EvalResult.UNKNOWN
        return EvalResult.FALSE
    if isinstance(node, Not):
        result = evaluate(node.operand, values)
        if result is EvalResult.TRUE:
            return EvalResult.FALSE
        if result is EvalResult.FALSE:
            return EvalResult.TRUE
        return EvalResult.UNKNOWN
    if isinstance(node, Known):
        present = values.get(node.property, _MISSING)
        known = present is not _MISSING and present is not None
        return _from_bool(known != node.negated)

    actual = values.get(node.property, _MISSING)
    if actual is _MISSING or actual is None:
        return EvalResult.UNKNOWN

    if isinstance(node, Comparison):
        if _is_list(actual):
            raise FilterTypeError(
                f"{node.property}: cannot compare a list value; use HAS"
            )
        if isinstance(actual, bool):
            raise FilterTypeError(
                f"{node.property}: boolean values cannot be compared in a filter"
            )
        return _from_bool(_compare(node.property, node.op, actual, node.value))
    if isinstance(node, StringMatch):
        if not isinstance(actual, str):
            raise FilterTypeError(
                f"{node.property}: {node.mode} requires a string value"
            )
        if node.mode == "CONTAINS":
            return _from_bool(node.value in actual)
        if node.mode == "STARTS WITH":
            return _from_bool(actual.startswith(node.value))
        return _from_bool(actual.endswith(node.value))
    if isinstance(node, SetMembership):
        if not _is_list(actual):
            raise FilterTypeError(
                f"{node.property}: {node.mode} requires a list value"
            )
        if node.mode in ("HAS", "HAS ALL"):
            return _from_bool(
                all(
                    any(_item_matches(node.property, item, v) for item in actual)
                    for v in node.values
                )
            )
        if node.mode == "HAS ANY":
            return _from_bool(
                any(
                    any(_item_matches(node.property, item, v) for item in actual)
                    for v in node.values
                )
            )
        return _from_bool(
            all(
                any(_item_matches(node.property, item, v) for v in node.values)
                for item in actual
            )
        )
    if isinstance(node, Length):
        if not _is_list(actual):
            raise FilterTypeError(f"{node.property}: LENGTH requires a list value")
        return _from_bool(_compare(node.property, node.op, len(actual), node.value))
    raise TypeError(f"unsupported filter node {type(node).__name__}")


def entry_values(entry: Any) -> dict[str, Any]:
    """Flatten an entry into the mapping the evaluator consumes."""
    values = dict(entry.attributes)
    values["id"] = entry.id
    values["type"] = entry.type
    return values


def matches(node: FilterNode | None, values: Mapping[str, Any]) -> bool:
    """True iff the filter definitely selects the entry (UNKNOWN does not)."""
    if node is None:
        return True
    return evaluate(node, values) is EvalResult.TRUE


_E = TypeVar("_E")


def selectivity_filter(node: FilterNode | None, entries: Iterable[_E]) -> list[_E]:
    """Stable subsequence of ``entries`` whose evaluation is exactly TRUE."""
    if node is None:
        return list(entries)
    return [entry for entry in entries if matches(node, entry_values(entry))]
