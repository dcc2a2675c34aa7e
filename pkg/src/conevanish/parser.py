"""Text front end: ring declarations, polynomials, ideal and map statements.

Grammar (one statement per line, ``#`` starts a comment)::

    ring  ::= "ring" [NAME "="] FIELD "[" ident ("," ident)* "]" ORDER
    FIELD ::= "Q" | "F" natural
    ORDER ::= "grevlex" | "lex" | "block" "(" natural ")"
    ideal ::= "ideal" NAME "=" [poly ("," poly)*] ";"
    map   ::= "map" NAME ":" RING "->" RING "=" poly ("," poly)* ";"

Polynomials use ``+ - * ^``, parentheses, integer literals and ``/`` between
constants. ``ideal`` and ``map`` statements may span lines up to the ``;``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from .field import Field, FieldError
from .ring import Polynomial, PolyRing, RingError, RingMap

GRAMMAR_VERSION = "1"


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, column {col}: {message}")
        self.message = message
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<op>[-+*^/()\[\],;=:]))"
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str, line: int = 1, col0: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos]!r}", line, col0 + pos)
        kind = m.lastgroup
        text = m.group(kind)
        start = m.start(kind)
        tokens.append(Token(kind, text, line, col0 + start))
        pos = m.end()
    tokens.append(Token("end", "", line, col0 + n))
    return tokens


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind in ("op", "arrow", "ident"):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.accept(text):
            t = self.tok
            got = t.text or "end of input"
            raise ParseError(f"expected {text!r}, got {got!r}", t.line, t.col)
        return self.tokens[self.i - 1]

    def expect_kind(self, kind: str, what: str) -> Token:
        t = self.tok
        if t.kind != kind:
            raise ParseError(f"expected {what}, got {t.text or 'end of input'!r}", t.line, t.col)
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None):
        t = tok or self.tok
        raise ParseError(message, t.line, t.col)


# -- rings ------------------------------------------------------------------

def _parse_field(cur: _Cursor) -> Field:
    t = cur.expect_kind("ident", "field Q or F<p>")
    if t.text == "Q":
        return Field(0)
    m = re.fullmatch(r"F(\d+)", t.text)
    if not m:
        cur.error(f"unknown field {t.text!r}", t)
    try:
        return Field(int(m.group(1)))
    except FieldError as exc:
        cur.error(str(exc), t)


def _parse_ring_body(cur: _Cursor) -> PolyRing:
    fld = _parse_field(cur)
    cur.expect("[")
    names = [cur.expect_kind("ident", "variable name")]
    while cur.accept(","):
        names.append(cur.expect_kind("ident", "variable name"))
    cur.expect("]")
    seen = set()
    for t in names:
        if t.text in seen:
            cur.error(f"duplicate variable {t.text!r}", t)
        seen.add(t.text)
    t = cur.expect_kind("ident", "monomial order")
    if t.text in ("grevlex", "lex"):
        order = t.text
    elif t.text == "block":
        cur.expect("(")
        k = cur.expect_kind("int", "block size")
        cur.expect(")")
        order = f"block({int(k.text)})"
    else:
        cur.error(f"unknown monomial order {t.text!r}", t)
    try:
        return PolyRing(fld, [t.text for t in names], order)
    except RingError as exc:
        cur.error(str(exc), t)


def parse_ring(decl: str) -> PolyRing:
    """Parse ``ring FIELD[vars] ORDER``."""
    cur = _Cursor(tokenize(decl))
    cur.expect("ring")
    ring = _parse_ring_body(cur)
    if cur.tok.kind != "end":
        cur.error(f"unexpected {cur.tok.text!r} after ring declaration")
    return ring


# -- polynomials ------------------------------------------------------------

def _parse_expr(cur: _Cursor, ring: PolyRing) -> Polynomial:
    neg = False
    if cur.tok.text in ("+", "-") and cur.tok.kind == "op":
        neg = cur.next().text == "-"
    acc = _parse_term(cur, ring)
    if neg:
        acc = -acc
    while cur.tok.kind == "op" and cur.tok.text in ("+", "-"):
        op = cur.next().text
        t = _parse_term(cur, ring)
        acc = acc + t if op == "+" else acc - t
    return acc


def _parse_term(cur: _Cursor, ring: PolyRing) -> Polynomial:
    acc = _parse_factor(cur, ring)
    while cur.tok.kind == "op" and cur.tok.text in ("*", "/"):
        op = cur.next()
        rhs_tok = cur.tok
        rhs = _parse_factor(cur, ring)
        if op.text == "*":
            acc = acc * rhs
        else:
            if not rhs.is_constant():
                cur.error("division only by constants", rhs_tok)
            c = rhs.constant_coefficient()
            if not c:
                cur.error(f"division by zero in {ring.field}", rhs_tok)
            acc = acc.scale(ring.field.inv(c))
    return acc


def _parse_factor(cur: _Cursor, ring: PolyRing) -> Polynomial:
    base = _parse_atom(cur, ring)
    if cur.accept("^"):
        k = cur.expect_kind("int", "exponent")
        base = base ** int(k.text)
    return base


def _parse_atom(cur: _Cursor, ring: PolyRing) -> Polynomial:
    t = cur.tok
    if t.kind == "int":
        cur.next()
        return ring.const(int(t.text))
    if t.kind == "ident":
        cur.next()
        if t.text not in ring._index:
            cur.error(f"unknown variable {t.text!r}", t)
        return ring.var(t.text)
    if cur.accept("("):
        inner = _parse_expr(cur, ring)
        cur.expect(")")
        return inner
    cur.error(f"unexpected {t.text or 'end of input'!r} in polynomial")


def parse_polynomial(ring: PolyRing, src: str, line: int = 1, col: int = 1) -> Polynomial:
    cur = _Cursor(tokenize(src, line, col))
    f = _parse_expr(cur, ring)
    if cur.tok.kind != "end":
        cur.error(f"unexpected {cur.tok.text!r} in polynomial")
    return f


def _parse_poly_list(cur: _Cursor, ring: PolyRing) -> list[Polynomial]:
    polys: list[Polynomial] = []
    if cur.tok.text == ";":
        return polys
    polys.append(_parse_expr(cur, ring))
    while cur.accept(","):
        polys.append(_parse_expr(cur, ring))
    return polys


# -- printing ---------------------------------------------------------------

def format_monomial(ring: PolyRing, exps) -> str:
    parts = []
    for name, a in zip(ring.vars, exps):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    """Canonical text: decreasing monomial order, reduced coefficients."""
    ring = f.ring
    fld = ring.field
    if not f.terms:
        return "0"
    out = []
    for i, (e, c) in enumerate(f.sorted_terms()):
        mono = format_monomial(ring, e)
        neg = not fld.p and c < 0
        a = -c if neg else c
        if not mono:
            body = fld.format(a)
        elif a == 1:
            body = mono
        else:
            body = f"{fld.format(a)}*{mono}"
        if i == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# -- documents --------------------------------------------------------------

@dataclass
class Document:
    """Result of parsing declaration text."""

    rings: dict[str, PolyRing] = dc_field(default_factory=dict)
    ring_order: list[PolyRing] = dc_field(default_factory=list)
    ideals: dict[str, tuple[PolyRing, list[Polynomial]]] = dc_field(default_factory=dict)
    maps: dict[str, RingMap] = dc_field(default_factory=dict)
    ideal_names: list[str] = dc_field(default_factory=list)
    statements: list[tuple[int, str]] = dc_field(default_factory=list)

    @property
    def current_ring(self) -> PolyRing | None:
        return self.ring_order[-1] if self.ring_order else None

    def last_ideal(self) -> str:
        if not self.ideal_names:
            raise ParseError("no ideal declared")
        return self.ideal_names[-1]


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def split_statements(text: str) -> list[tuple[int, str]]:
    """Split into ``(line number, statement text)``; ideal/map run to ``;``."""
    out = []
    pending: list[str] | None = None
    start = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).rstrip()
        if pending is not None:
            pending.append(line)
            if ";" in line:
                out.append((start, "\n".join(pending)))
                pending = None
            continue
        if not line.strip():
            continue
        head = line.split(None, 1)[0]
        if head in ("ideal", "map") and ";" not in line:
            pending = [line]
            start = lineno
        else:
            out.append((lineno, line))
    if pending is not None:
        raise ParseError("unterminated statement (missing ';')", start, 1)
    return out


def _tokenize_statement(lineno: int, text: str) -> list[Token]:
    tokens: list[Token] = []
    for k, line in enumerate(text.split("\n")):
        toks = tokenize(line, lineno + k)
        tokens.extend(toks[:-1])
    last = tokens[-1] if tokens else Token("end", "", lineno, 1)
    tokens.append(Token("end", "", last.line, last.col + len(last.text)))
    return tokens


def parse_statement(doc: Document, lineno: int, text: str, field_override: Field | None = None) -> bool:
    """Apply one declaration to ``doc``; False if the keyword is not a declaration."""
    tokens = _tokenize_statement(lineno, text)
    cur = _Cursor(tokens)
    head = cur.tok.text
    if head == "ring":
        cur.next()
        name = None
        if cur.tok.kind == "ident" and cur.tokens[cur.i + 1].text == "=":
            name = cur.next().text
            cur.next()
        ring = _parse_ring_body(cur)
        if field_override is not None:
            ring = ring.with_field(field_override)
        if cur.tok.kind != "end":
            cur.error(f"unexpected {cur.tok.text!r} after ring declaration")
        if name:
            doc.rings[name] = ring
        doc.ring_order.append(ring)
        return True
    if head == "ideal":
        cur.next()
        ring = doc.current_ring
        if ring is None:
            cur.error("ideal declared before any ring")
        name = cur.expect_kind("ident", "ideal name").text
        cur.expect("=")
        polys = _parse_poly_list(cur, ring)
        cur.expect(";")
        if cur.tok.kind != "end":
            cur.error(f"unexpected {cur.tok.text!r} after ';'")
        doc.ideals[name] = (ring, polys)
        if name not in doc.ideal_names:
            doc.ideal_names.append(name)
        return True
    if head == "map":
        cur.next()
        name = cur.expect_kind("ident", "map name").text
        cur.expect(":")
        src_t = cur.expect_kind("ident", "source ring name")
        cur.expect("->")
        tgt_t = cur.expect_kind("ident", "target ring name")
        for t in (src_t, tgt_t):
            if t.text not in doc.rings:
                cur.error(f"undeclared ring {t.text!r}", t)
        src, tgt = doc.rings[src_t.text], doc.rings[tgt_t.text]
        cur.expect("=")
        images = _parse_poly_list(cur, tgt)
        cur.expect(";")
        try:
            doc.maps[name] = RingMap(src, tgt, images)
        except RingError as exc:
            cur.error(str(exc), src_t)
        return True
    return False


def parse_document(text: str, field_override: Field | None = None) -> Document:
    doc = Document()
    for lineno, stmt in split_statements(text):
        if not parse_statement(doc, lineno, stmt, field_override):
            doc.statements.append((lineno, stmt))
    return doc
