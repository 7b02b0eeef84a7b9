"""Immutable filter AST nodes and their canonical text rendering.

Rendering inserts parentheses only where the grammar requires them, so
``parse_filter(node.render())`` reproduces the node exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

ComparisonOp = Literal["=", "!=", "<", "<=", ">", ">="]
StringMode = Literal["CONTAINS", "STARTS WITH", "ENDS WITH"]
SetMode = Literal["HAS", "HAS ALL", "HAS ANY", "HAS ONLY"]
LiteralValue = Union[str, int, float]

# Grammar precedence levels, used to decide where rendering needs parentheses.
_PRECEDENCE_OR = 1
_PRECEDENCE_AND = 2
_PRECEDENCE_ATOM = 3


def render_literal(value: LiteralValue) -> str:
    if isinstance(value, str):
        escaped = value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(value, bool):
        raise TypeError("boolean literals are not part of the filter grammar")
    return repr(value)


def _atom_text(node: FilterNode) -> str:
    """Render ``node`` as a grammar atom, parenthesizing when it is not one.

    Predicates are atoms; ``And``/``Or``/``Not`` are not — ``NOT NOT x`` is not
    grammatical, so a negated operand needs parentheses too.
    """
    if isinstance(node, (And, Or, Not)):
        return f"({node.render()})"
    return node.render()


@dataclass(frozen=True)
class And:
    left: FilterNode
    right: FilterNode

    def precedence(self) -> int:
        return _PRECEDENCE_AND

    def render(self) -> str:
        left = self.left.render()
        right = self.right.render()
        if self.left.precedence() < _PRECEDENCE_AND:
            left = f"({left})"
        # AND chains associate left; a conjunction on the right needs parentheses
        # to survive a round trip as the same tree shape.
        if self.right.precedence() <= _PRECEDENCE_AND:
            right = f"({right})"
        return f"{left} AND {right}"


@dataclass(frozen=True)
class Or:
    left: FilterNode
    right: FilterNode

    def precedence(self) -> int:
        return _PRECEDENCE_OR

    def render(self) -> str:
        left = self.left.render()
        right = self.right.render()
        if self.left.precedence() < _PRECEDENCE_OR:
            left = f"({left})"
        if self.right.precedence() <= _PRECEDENCE_OR:
            right = f"({right})"
        return f"{left} OR {right}"


@dataclass(frozen=True)
class Not:
    operand: FilterNode

    def precedence(self) -> int:
        return _PRECEDENCE_ATOM

    def render(self) -> str:
        return f"NOT {_atom_text(self.operand)}"


@dataclass(frozen=True)
class Comparison:
    property: str
    op: ComparisonOp
    value: LiteralValue

    def precedence(self) -> int:
        return _PRECEDENCE_ATOM

    def render(self) -> str:
        return f"{self.property}{self.op}{render_literal(self.value)}"


@dataclass(frozen=True)
class StringMatch:
    property: str
    mode: StringMode
    value: str

    def precedence(self) -> int:
        return _PRECEDENCE_ATOM

    def render(self) -> str:
        return f"{self.property} {self.mode} {render_literal(self.value)}"


@dataclass(frozen=True)
class SetMembership:
    property: str
    mode: SetMode
    values: tuple[LiteralValue, ...]

    def precedence(self) -> int:
        return _PRECEDENCE_ATOM

    def render(self) -> str:
        rendered = ",".join(render_literal(v) for v in self.values)
        return f"{self.property} {self.mode} {rendered}"


@dataclass(frozen=True)
class Length:
    property: str
    op: ComparisonOp
    value: int

    def precedence(self) -> int:
        return _PRECEDENCE_ATOM

    def render(self) -> str:
        op = "" if self.op == "=" else f"{self.op} "
        return f"{self.property} LENGTH {op}{self.value}"


@dataclass(frozen=True)
class Known:
    property: str
    negated: bool = False

    def precedence(self) -> int:
        return _PRECEDENCE_ATOM

    def render(self) -> str:
        keyword = "UNKNOWN" if self.negated else "KNOWN"
        return f"{self.property} IS {keyword}"


FilterNode = Union[And, Or, Not, Comparison, StringMatch, SetMembership, Length, Known]


def ast_depth(node: FilterNode) -> int:
    """Longest root-to-leaf node count, computed without recursion."""
    deepest = 0
    stack: list[tuple[FilterNode, int]] = [(node, 1)]
    while stack:
        current, depth = stack.pop()
        deepest = max(deepest, depth)
        if isinstance(current, (And, Or)):
            stack.append((current.left, depth + 1))
            stack.append((current.right, depth + 1))
        elif isinstance(current, Not):
            stack.append((current.operand, depth + 1))
    return deepest
