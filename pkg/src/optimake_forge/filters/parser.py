"""Tokenizer and recursive-descent parser for the filter language.

Grammar (keywords are case-sensitive, whitespace between tokens insignificant)::

    filter     = or
    or         = and { "OR" and }
    and        = not { "AND" not }
    not        = [ "NOT" ] atom
    atom       = "(" or ")" | predicate
    predicate  = prop compop value | value compop prop
               | prop ("CONTAINS" | "STARTS WITH" | "ENDS WITH") string
               | prop ("HAS ALL" | "HAS ANY" | "HAS ONLY" | "HAS") valuelist
               | prop "LENGTH" [compop] integer
               | prop "IS" ("KNOWN" | "UNKNOWN")

Comparisons written value-first are normalized by mirroring the operator, so
the AST always carries the property on the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import FilterSyntaxError
from .nodes import (
    And,
    Comparison,
    ComparisonOp,
    FilterNode,
    Known,
    Length,
    LiteralValue,
    Not,
    Or,
    SetMembership,
    StringMatch,
    ast_depth,
)

MAX_FILTER_BYTES = 10_000
MAX_FILTER_DEPTH = 100

_KEYWORDS = frozenset(
    {
        "AND",
        "OR",
        "NOT",
        "CONTAINS",
        "STARTS",
        "ENDS",
        "WITH",
        "HAS",
        "ALL",
        "ANY",
        "ONLY",
        "LENGTH",
        "IS",
        "KNOWN",
        "UNKNOWN",
    }
)

_IDENT_RE = re.compile(r"[a-z_][a-z_0-9]*")
_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_NUMBER_RE = re.compile(
    r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?",
)

# Mirror table for rewriting `value compop prop` as `prop compop value`.
_MIRRORED_OP: dict[str, ComparisonOp] = {
    "=": "=",
    "!=": "!=",
    "<": ">",
    "<=": ">=",
    ">": "<",
    ">=": "<=",
}


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident" | "keyword" | "number" | "string" | "op" | "(" | ")" | "," | "end"
    text: str
    offset: int  # character offset into the filter text
    value: LiteralValue | None = None


def _byte_offset(text: str, char_offset: int) -> int:
    return len(text[:char_offset].encode("utf-8"))


def _error(text: str, offset: int, message: str, expected: str | None = None) -> FilterSyntaxError:
    return FilterSyntaxError(message, _byte_offset(text, offset), expected)


def _scan_string(text: str, start: int) -> tuple[str, int]:
    """Scan a double-quoted string starting at ``start``; only \\" and \\\\ escape."""
    chars: list[str] = []
    i = start + 1
    while i < len(text):
        ch = text[i]
        if ch == '"':
            return "".join(chars), i + 1
        if ch == "\\":
            if i + 1 >= len(text):
                break
            escaped = text[i + 1]
            if escaped not in ('"', "\\"):
                raise _error(text, i, f"invalid escape sequence \\{escaped}", '\\" or \\\\')
            chars.append(escaped)
            i += 2
            continue
        chars.append(ch)
        i += 1
    raise _error(text, start, "unterminated string", '"')


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i = 0
    length = len(text)
    while i < length:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch == "(":
            tokens.append(_Token("(", "(", i))
            i += 1
            continue
        if ch == ")":
            tokens.append(_Token(")", ")", i))
            i += 1
            continue
        if ch == ",":
            tokens.append(_Token(",", ",", i))
            i += 1
            continue
        if ch == '"':
            value, end = _scan_string(text, i)
            tokens.append(_Token("string", text[i:end], i, value))
            i = end
            continue
        if ch in "<>=!":
            pair = text[i : i + 2]
            if pair in ("<=", ">=", "!="):
                tokens.append(_Token("op", pair, i))
                i += 2
                continue
            if ch == "!":
                raise _error(text, i, "stray '!'", "!=")
            tokens.append(_Token("op", ch, i))
            i += 1
            continue
        number = _NUMBER_RE.match(text, i)
        if number and (ch.isdigit() or ch in "+-." ):
            literal = number.group(0)
            if _WORD_RE.match(text, number.end()):
                raise _error(text, number.end(), "number run together with a word")
            is_float = any(mark in literal for mark in (".", "e", "E"))
            if is_float:
                parsed: LiteralValue = float(literal)
                if parsed in (float("inf"), float("-inf")):
                    raise _error(text, i, "number out of range")
            else:
                parsed = int(literal)
            tokens.append(_Token("number", literal, i, parsed))
            i = number.end()
            continue
        word = _WORD_RE.match(text, i)
        if word:
            spelled = word.group(0)
            if _IDENT_RE.fullmatch(spelled):
                tokens.append(_Token("ident", spelled, i))
            elif spelled in _KEYWORDS:
                tokens.append(_Token("keyword", spelled, i))
            else:
                raise _error(
                    text,
                    i,
                    f"unexpected word {spelled!r}",
                    "a lowercase property name, an uppercase keyword, or a quoted string",
                )
            i = word.end()
            continue
        raise _error(text, i, f"unexpected character {ch!r}")
    tokens.append(_Token("end", "", length))
    return tokens


class _Parser:
    def __init__(self, text: str, tokens: list[_Token]):
        self.text = text
        self.tokens = tokens
        self.position = 0
        self.nesting = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.position]

    def advance(self) -> _Token:
        token = self.tokens[self.position]
        self.position += 1
        return token

    def at_keyword(self, spelled: str) -> bool:
        token = self.current
        return token.kind == "keyword" and token.text == spelled

    def expect_keyword(self, spelled: str) -> None:
        if not self.at_keyword(spelled):
            raise self.error(f"unexpected {self.describe(self.current)}", spelled)
        self.advance()

    def describe(self, token: _Token) -> str:
        if token.kind == "end":
            return "end of filter"
        if token.kind in ("(", ")", ","):
            return repr(token.text)
        return f"{token.kind} {token.text!r}"

    def error(self, message: str, expected: str | None = None) -> FilterSyntaxError:
        return _error(self.text, self.current.offset, message, expected)

    def enter(self) -> None:
        self.nesting += 1
        if self.nesting > MAX_FILTER_DEPTH:
            raise self.error(f"filter nesting deeper than {MAX_FILTER_DEPTH}")

    def leave(self) -> None:
        self.nesting -= 1

    def parse(self) -> FilterNode:
        node = self.parse_or()
        if self.current.kind != "end":
            raise self.error(f"unexpected {self.describe(self.current)}", "AND, OR, or end of filter")
        return node

    def parse_or(self) -> FilterNode:
        node = self.parse_and()
        while self.at_keyword("OR"):
            self.advance()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> FilterNode:
        node = self.parse_not()
        while self.at_keyword("AND"):
            self.advance()
            node = And(node, self.parse_not())
        return node

    def parse_not(self) -> FilterNode:
        if self.at_keyword("NOT"):
            self.advance()
            self.enter()
            operand = self.parse_atom()
            self.leave()
            return Not(operand)
        return self.parse_atom()

    def parse_atom(self) -> FilterNode:
        if self.current.kind == "(":
            self.advance()
            self.enter()
            node = self.parse_or()
            self.leave()
            if self.current.kind != ")":
                raise self.error(f"unexpected {self.describe(self.current)}", ")")
            self.advance()
            return node
        return self.parse_predicate()

    def parse_predicate(self) -> FilterNode:
        token = self.current
        if token.kind in ("string", "number"):
            # value compop prop — mirror into property-first form.
            literal = self.advance()
            op = self.expect_compop()
            prop = self.expect_property()
            assert literal.value is not None
            return Comparison(prop, _MIRRORED_OP[op], literal.value)
        if token.kind != "ident":
            raise self.error(
                f"unexpected {self.describe(token)}",
                "a property name, a value, '(', or NOT",
            )
        prop = self.advance().text
        current = self.current
        if current.kind == "op":
            op = self.expect_compop()
            value = self.expect_value()
            return Comparison(prop, op, value)
        if current.kind == "keyword":
            if current.text == "CONTAINS":
                self.advance()
                return StringMatch(prop, "CONTAINS", self.expect_string())
            if current.text == "STARTS":
                self.advance()
                self.expect_keyword("WITH")
                return StringMatch(prop, "STARTS WITH", self.expect_string())
            if current.text == "ENDS":
                self.advance()
                self.expect_keyword("WITH")
                return StringMatch(prop, "ENDS WITH", self.expect_string())
            if current.text == "HAS":
                self.advance()
                mode = "HAS"
                for qualifier in ("ALL", "ANY", "ONLY"):
                    if self.at_keyword(qualifier):
                        self.advance()
                        mode = f"HAS {qualifier}"
                        break
                return SetMembership(prop, mode, self.parse_valuelist())  # type: ignore[arg-type]
            if current.text == "LENGTH":
                self.advance()
                op: ComparisonOp = "="
                if self.current.kind == "op":
                    op = self.expect_compop()
                count = self.expect_integer()
                return Length(prop, op, count)
            if current.text == "IS":
                self.advance()
                if self.at_keyword("KNOWN"):
                    self.advance()
                    return Known(prop, negated=False)
                if self.at_keyword("UNKNOWN"):
                    self.advance()
                    return Known(prop, negated=True)
                raise self.error(f"unexpected {self.describe(self.current)}", "KNOWN or UNKNOWN")
        raise self.error(
            f"unexpected {self.describe(current)}",
            "a comparison operator, CONTAINS, STARTS WITH, ENDS WITH, HAS, LENGTH, or IS",
        )

    def parse_valuelist(self) -> tuple[LiteralValue, ...]:
        values = [self.expect_value()]
        while self.current.kind == ",":
            self.advance()
            values.append(self.expect_value())
        return tuple(values)

    def expect_compop(self) -> ComparisonOp:
        token = self.current
        if token.kind != "op":
            raise self.error(f"unexpected {self.describe(token)}", "=, !=, <, <=, >, or >=")
        self.advance()
        return token.text  # type: ignore[return-value]

    def expect_value(self) -> LiteralValue:
        token = self.current
        if token.kind not in ("string", "number"):
            raise self.error(f"unexpected {self.describe(token)}", "a quoted string or a number")
        self.advance()
        assert token.value is not None
        return token.value

    def expect_string(self) -> str:
        token = self.current
        if token.kind != "string":
            raise self.error(f"unexpected {self.describe(token)}", "a quoted string")
        self.advance()
        assert isinstance(token.value, str)
        return token.value

    def expect_integer(self) -> int:
        token = self.current
        if token.kind != "number" or not isinstance(token.value, int):
            raise self.error(f"unexpected {self.describe(token)}", "an integer")
        self.advance()
        return token.value

    def expect_property(self) -> str:
        token = self.current
        if token.kind != "ident":
            raise self.error(f"unexpected {self.describe(token)}", "a property name")
        self.advance()
        return token.text


def parse_filter(text: str) -> FilterNode:
    """Parse a filter string into an AST, enforcing size and depth limits."""
    if len(text.encode("utf-8")) > MAX_FILTER_BYTES:
        raise FilterSyntaxError(f"filter longer than {MAX_FILTER_BYTES} bytes", 0)
    tokens = _tokenize(text)
    node = _Parser(text, tokens).parse()
    if ast_depth(node) > MAX_FILTER_DEPTH:
        raise FilterSyntaxError(f"filter deeper than {MAX_FILTER_DEPTH} levels", 0)
    return node
