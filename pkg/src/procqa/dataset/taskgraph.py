"""Minimal DOT ingestion for procedural task graphs.

Supported subset::

    digraph [name] {
        "melt butter" -> "add flour";
        a -> b -> c [style=dotted];
        lone_node;
        node [shape=box];     // default-attribute statements are ignored
    }

Attribute lists are skipped entirely. Subgraphs and undirected graphs are out
of scope and rejected explicitly. Statement separators (';') are optional, as
in graphviz. Comments: ``//``, ``#`` to end of line, and ``/* ... */``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidGraph, ParseError, UnsupportedConstruct

_KEYWORDS = {"digraph", "graph", "subgraph", "node", "edge", "strict"}


@dataclass(frozen=True)
class TaskGraph:
    nodes: frozenset[str]
    edges: frozenset[tuple[str, str]]

    def __post_init__(self):
        for src, dst in self.edges:
            if src == dst:
                raise InvalidGraph(f"self-loop on {src!r}")
            if src not in self.nodes or dst not in self.nodes:
                raise InvalidGraph(f"edge ({src!r}, {dst!r}) references unknown node")

    def to_text_lines(self) -> list[str]:
        """Edges as 'A -> B' lines, sorted; the form injected into summaries."""
        return [f"{a} -> {b}" for a, b in sorted(self.edges)]


@dataclass(frozen=True)
class _Token:
    kind: str  # name | string | symbol
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, col = 1, 1
    i, n = 0, len(text)

    def advance(k: int):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and text[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            advance(1)
        elif text.startswith("//", i) or ch == "#":
            while i < n and text[i] != "\n":
                advance(1)
        elif text.startswith("/*", i):
            start_line, start_col = line, col
            advance(2)
            while i < n and not text.startswith("*/", i):
                advance(1)
            if i >= n:
                raise ParseError("unterminated comment", start_line, start_col)
            advance(2)
        elif ch == '"':
            start_line, start_col = line, col
            advance(1)
            buf = []
            while i < n and text[i] != '"':
                if text[i] == "\\" and i + 1 < n and text[i + 1] in '"\\':
                    buf.append(text[i + 1])
                    advance(2)
                else:
                    buf.append(text[i])
                    advance(1)
            if i >= n:
                raise ParseError("unterminated string", start_line, start_col)
            advance(1)
            tokens.append(_Token("string", "".join(buf), start_line, start_col))
        elif text.startswith("->", i):
            tokens.append(_Token("symbol", "->", line, col))
            advance(2)
        elif text.startswith("--", i):
            raise ParseError("undirected edges ('--') are not supported", line, col)
        elif ch in "{};[]=,":
            tokens.append(_Token("symbol", ch, line, col))
            advance(1)
        elif ch.isalnum() or ch in "_.":
            start_line, start_col = line, col
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_."):
                j += 1
            tokens.append(_Token("name", text[i:j], start_line, start_col))
            advance(j - i)
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("symbol", "", 1, 1)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect_symbol(self, sym: str) -> _Token:
        tok = self.next()
        if tok.kind != "symbol" or tok.text != sym:
            raise ParseError(f"expected {sym!r}, got {tok.text!r}", tok.line, tok.col)
        return tok

    def skip_attr_list(self):
        # one or more bracketed groups: [a=b, c="d"] [e=f]
        while True:
            tok = self.peek()
            if tok is None or not (tok.kind == "symbol" and tok.text == "["):
                return
            self.next()
            depth = 1
            while depth:
                tok = self.next()
                if tok.kind == "symbol" and tok.text == "[":
                    depth += 1
                elif tok.kind == "symbol" and tok.text == "]":
                    depth -= 1


def parse_task_graph(dot_text: str) -> TaskGraph:
    parser = _Parser(_tokenize(dot_text))
    tok = parser.next()
    if tok.kind == "name" and tok.text == "strict":
        tok = parser.next()
    if tok.kind == "name" and tok.text == "graph":
        raise ParseError("undirected graphs are not supported", tok.line, tok.col)
    if not (tok.kind == "name" and tok.text == "digraph"):
        raise ParseError(f"expected 'digraph', got {tok.text!r}", tok.line, tok.col)
    tok = parser.next()
    if tok.kind in ("name", "string") and not (
        tok.kind == "symbol"
    ):  # optional graph name
        if tok.kind == "name" and tok.text in _KEYWORDS:
            raise ParseError(f"unexpected keyword {tok.text!r}", tok.line, tok.col)
        tok = parser.next()
    if not (tok.kind == "symbol" and tok.text == "{"):
        raise ParseError(f"expected '{{', got {tok.text!r}", tok.line, tok.col)

    nodes: set[str] = set()
    edges: set[tuple[str, str]] = set()

    def identifier(tok: _Token) -> str:
        if tok.kind == "string":
            return tok.text
        if tok.kind == "name":
            if tok.text == "subgraph":
                raise UnsupportedConstruct("subgraphs are not supported", tok.line, tok.col)
            if tok.text in _KEYWORDS - {"node", "edge", "graph"}:
                raise ParseError(f"unexpected keyword {tok.text!r}", tok.line, tok.col)
            return tok.text
        if tok.kind == "symbol" and tok.text == "{":
            raise UnsupportedConstruct("anonymous subgraphs are not supported", tok.line, tok.col)
        raise ParseError(f"expected identifier, got {tok.text!r}", tok.line, tok.col)

    while True:
        tok = parser.next()
        if tok.kind == "symbol" and tok.text == "}":
            break
        if tok.kind == "symbol" and tok.text == ";":
            continue
        if tok.kind == "name" and tok.text in ("node", "edge", "graph"):
            parser.skip_attr_list()
            continue
        name = identifier(tok)
        chain = [name]
        while True:
            nxt = parser.peek()
            if nxt is not None and nxt.kind == "symbol" and nxt.text == "->":
                parser.next()
                target_tok = parser.next()
                target = identifier(target_tok)
                if target == chain[-1]:
                    raise InvalidGraph(f"self-loop on {target!r}")
                chain.append(target)
            else:
                break
        parser.skip_attr_list()
        nodes.update(chain)
        edges.update(zip(chain, chain[1:]))

    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(
            f"unexpected trailing input {trailing.text!r}", trailing.line, trailing.col
        )
    return TaskGraph(frozenset(nodes), frozenset(edges))
