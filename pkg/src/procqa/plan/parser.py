"""Parser for the plan DSL.

One step per line: ``name = Tool(param=value, ...)``. ``#`` starts a comment;
``#!`` starts a metadata pragma (question / qa_type). Literals: double-quoted
strings with JSON-style escapes, integers, reals, true/false, ``[a, b]`` span
literals in seconds, and lists. A bracket group whose elements are exactly two
numbers is a span; anything else bracketed is a list. Parsing is pure: no
registry is consulted and nothing executes.
"""

from __future__ import annotations

import re

from ..dataset.loader import QAType
from ..errors import DuplicateOutput, InvalidSpan, ParseError, UndefinedReference
from ..temporal import span_from_seconds
from .ast import ArgValue, ListValue, Literal, Plan, Ref, ToolCall

_IDENT_RE = re.compile(r"[a-z][a-z0-9_]*")
_TOOL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


class _Cursor:
    def __init__(self, text: str, line_no: int):
        self.text = text
        self.line = line_no
        self.pos = 0

    @property
    def col(self) -> int:
        return self.pos + 1

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.line, self.col)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, expected: str):
        self.skip_ws()
        if not self.text.startswith(expected, self.pos):
            got = self.text[self.pos : self.pos + 1] or "end of line"
            raise self.error(f"expected {expected!r}, got {got!r}")
        self.pos += len(expected)

    def take_regex(self, pattern: re.Pattern, what: str) -> str:
        self.skip_ws()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group(0)

    def take_string(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != '"':
            raise self.error("expected string literal")
        self.pos += 1
        buf: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated string")
            ch = self.text[self.pos]
            if ch == '"':
                self.pos += 1
                return "".join(buf)
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    raise self.error("dangling escape")
                esc = self.text[self.pos + 1]
                if esc not in _ESCAPES:
                    raise self.error(f"unknown escape \\{esc}")
                buf.append(_ESCAPES[esc])
                self.pos += 2
            else:
                buf.append(ch)
                self.pos += 1


def _parse_number(cur: _Cursor) -> int | float:
    raw = cur.take_regex(_NUMBER_RE, "number")
    if re.fullmatch(r"-?\d+", raw):
        return int(raw)
    return float(raw)


def _parse_value(cur: _Cursor, defined: set[str]) -> ArgValue:
    ch = cur.peek()
    if ch == '"':
        return Literal(cur.take_string())
    if ch == "[":
        return _parse_bracket(cur, defined)
    if ch and (ch.isdigit() or ch in "-."):
        return Literal(_parse_number(cur))
    if ch and (ch.isalpha() or ch == "_"):
        cur.skip_ws()
        start_col = cur.col
        name = cur.take_regex(_TOOL_RE, "identifier")
        if name == "true":
            return Literal(True)
        if name == "false":
            return Literal(False)
        if not _IDENT_RE.fullmatch(name):
            raise ParseError(f"invalid reference name {name!r}", cur.line, start_col)
        if name not in defined:
            raise UndefinedReference(
                f"reference to undefined name {name!r}", cur.line, start_col
            )
        return Ref(name)
    raise cur.error("expected a value")


def _parse_bracket(cur: _Cursor, defined: set[str]) -> ArgValue:
    cur.take("[")
    items: list[ArgValue] = []
    if cur.peek() == "]":
        cur.take("]")
        return ListValue(())
    while True:
        items.append(_parse_value(cur, defined))
        ch = cur.peek()
        if ch == ",":
            cur.take(",")
            continue
        cur.take("]")
        break
    if (
        len(items) == 2
        and all(isinstance(v, Literal) for v in items)
        and all(isinstance(v.value, (int, float)) and not isinstance(v.value, bool) for v in items)  # type: ignore[union-attr]
    ):
        start_s, end_s = (v.value for v in items)  # type: ignore[union-attr]
        try:
            return Literal(span_from_seconds([start_s, end_s]))
        except InvalidSpan as exc:
            raise cur.error(f"invalid span literal: {exc}") from exc
    return ListValue(tuple(items))


def _split_comment(line: str) -> str:
    """Strip a # comment, honoring string literals."""
    in_string = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_string:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "#":
            return line[:i]
        i += 1
    return line


def _parse_pragma(body: str, line_no: int, meta: dict):
    cur = _Cursor(body, line_no)
    key = cur.take_regex(_IDENT_RE, "pragma key")
    cur.take(":")
    if key == "question":
        meta["question"] = cur.take_string()
    elif key == "qa_type":
        raw = cur.take_regex(_TOOL_RE, "qa type")
        try:
            meta["qa_type"] = QAType(raw)
        except ValueError:
            raise cur.error(f"unknown qa_type {raw!r}") from None
    else:
        raise cur.error(f"unknown pragma {key!r}")
    if not cur.at_end():
        raise cur.error("trailing input after pragma")


def parse_plan(text: str) -> Plan:
    steps: list[ToolCall] = []
    defined: set[str] = set()
    meta: dict = {}
    # split on \n only: exotic separators (\v, \f, U+2028) may appear inside
    # string literals and must survive a format/parse round trip
    for line_no, raw_line in enumerate(text.split("\n"), start=1):
        raw_line = raw_line.rstrip("\r")
        stripped = raw_line.strip()
        if stripped.startswith("#!"):
            _parse_pragma(stripped[2:].strip(), line_no, meta)
            continue
        line = _split_comment(raw_line)
        if not line.strip():
            continue
        cur = _Cursor(line, line_no)
        cur.skip_ws()
        out_col = cur.col
        output = cur.take_regex(_IDENT_RE, "output name")
        if output in defined:
            raise DuplicateOutput(f"output {output!r} assigned twice", line_no, out_col)
        cur.take("=")
        tool = cur.take_regex(_TOOL_RE, "tool name")
        cur.take("(")
        args: list[tuple[str, ArgValue]] = []
        seen_params: set[str] = set()
        if cur.peek() != ")":
            while True:
                cur.skip_ws()
                param_col = cur.col
                param = cur.take_regex(_IDENT_RE, "parameter name")
                if param in seen_params:
                    raise ParseError(
                        f"parameter {param!r} given twice", line_no, param_col
                    )
                seen_params.add(param)
                cur.take("=")
                args.append((param, _parse_value(cur, defined)))
                if cur.peek() == ",":
                    cur.take(",")
                    continue
                break
        cur.take(")")
        if not cur.at_end():
            raise cur.error("trailing input after call")
        steps.append(ToolCall(output, tool, tuple(args)))
        defined.add(output)
    return Plan(tuple(steps), meta.get("question", ""), meta.get("qa_type"))
