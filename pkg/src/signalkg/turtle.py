"""Tokenizer and parser for the closed Turtle dialect used by knowledge-base files.

The dialect covers prefixed names, IRIs, plain/typed literals, object lists
(``,``), predicate lists (``;``), collections (``( ... )``) and comments.
Blank nodes (other than the implicit ones behind collection syntax) and
multi-line strings are not part of the dialect.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError

# Canonical namespace IRIs. Documents may bind any prefix names; terms are
# matched by full IRI.
SKG = "https://signalkg.visualmodel.org/skg#"
SOSA = "http://www.w3.org/ns/sosa/"
REC = "https://w3id.org/rec/core/"
SKOS = "http://www.w3.org/2004/02/skos/core#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD = "http://www.w3.org/2001/XMLSchema#"

PREFIXES = {
    "rdf": RDF,
    "rec": REC,
    "skg": SKG,
    "skos": SKOS,
    "sosa": SOSA,
    "xsd": XSD,
}

RDF_TYPE = RDF + "type"


@dataclass(frozen=True)
class Iri:
    """A resolved (full) IRI."""

    value: str


@dataclass(frozen=True)
class Literal:
    """A literal value; numbers arrive as float, booleans as bool."""

    value: float | str | bool
    datatype: str | None = None


# A term is an Iri, a Literal, or a tuple of terms (a collection).
Term = Iri | Literal | tuple


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    obj: Term
    line: int = field(default=0, compare=False)


_TOKEN_RES = [
    ("ws", re.compile(r"[ \t\r\n]+")),
    ("comment", re.compile(r"#[^\n]*")),
    ("iriref", re.compile(r"<([^<>\"{}|^`\\\s]*)>")),
    ("number", re.compile(r"[+-]?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)")),
    ("string", re.compile(r'"((?:[^"\\\n]|\\.)*)"')),
    ("dtype", re.compile(r"\^\^")),
    ("at", re.compile(r"@([A-Za-z][A-Za-z0-9-]*)")),
    # prefix part may be empty (":local"); local part allows digits and
    # interior hyphens, never dots
    ("pname", re.compile(r"([A-Za-z_][A-Za-z0-9_.-]*)?:([A-Za-z0-9_](?:[A-Za-z0-9_-]*[A-Za-z0-9_])?)?")),
    ("punct", re.compile(r"[.;,()]")),
    ("word", re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")),
]

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: object
    line: int
    col: int


def _unescape(raw: str, line: int, col: int) -> str:
    out = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        esc = raw[i + 1]
        if esc in _ESCAPES:
            out.append(_ESCAPES[esc])
            i += 2
        elif esc == "u":
            out.append(chr(int(raw[i + 2 : i + 6], 16)))
            i += 6
        else:
            raise ParseError(f"unsupported string escape '\\{esc}'", line, col)
    return "".join(out)


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        col = pos - line_start + 1
        for kind, rx in _TOKEN_RES:
            m = rx.match(text, pos)
            if not m:
                continue
            value = m.group(0)
            if kind == "ws":
                for ch in value:
                    if ch == "\n":
                        line += 1
                        line_start = pos + value.index(ch) + 1
                # recompute precisely (multiple newlines)
                nl = value.rfind("\n")
                if nl >= 0:
                    line_start = pos + nl + 1
            elif kind == "comment":
                pass
            elif kind == "iriref":
                tokens.append(_Token("iriref", m.group(1), line, col))
            elif kind == "number":
                tokens.append(_Token("number", float(value), line, col))
            elif kind == "string":
                tokens.append(_Token("string", _unescape(m.group(1), line, col), line, col))
            elif kind == "dtype":
                tokens.append(_Token("dtype", "^^", line, col))
            elif kind == "at":
                tokens.append(_Token("at", m.group(1), line, col))
            elif kind == "pname":
                tokens.append(_Token("pname", (m.group(1) or "", m.group(2) or ""), line, col))
            elif kind == "punct":
                tokens.append(_Token(value, value, line, col))
            elif kind == "word":
                if value == "a":
                    tokens.append(_Token("a", "a", line, col))
                elif value in ("true", "false"):
                    tokens.append(_Token("boolean", value == "true", line, col))
                else:
                    raise ParseError(f"unexpected bare word '{value}'", line, col)
            pos = m.end()
            break
        else:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
    tokens.append(_Token("eof", None, line, n - line_start + 1))
    return tokens


# Numeric and boolean XSD datatypes are folded into native values on parse.
_XSD_NUMERIC = {XSD + t for t in ("double", "float", "decimal", "integer", "int", "long", "nonNegativeInteger")}


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes: dict[str, str] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.kind!r}", tok.line, tok.col)
        return tok

    def resolve_pname(self, tok: _Token) -> str:
        prefix, local = tok.value
        base = self.prefixes.get(prefix)
        if base is None:
            raise ParseError(f"undeclared prefix '{prefix}:'", tok.line, tok.col)
        return base + local

    def parse(self) -> list[Triple]:
        triples: list[Triple] = []
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return triples
            if tok.kind == "at":
                self.parse_directive()
            else:
                triples.extend(self.parse_statement())

    def parse_directive(self) -> None:
        tok = self.next()
        if tok.value != "prefix":
            raise ParseError(f"unsupported directive '@{tok.value}'", tok.line, tok.col)
        name_tok = self.expect("pname")
        prefix, local = name_tok.value
        if local:
            raise ParseError("prefix declaration must end with ':'", name_tok.line, name_tok.col)
        iri = self.expect("iriref")
        self.expect(".")
        self.prefixes[prefix] = iri.value

    def parse_iri(self) -> str:
        tok = self.next()
        if tok.kind == "iriref":
            return tok.value
        if tok.kind == "pname":
            return self.resolve_pname(tok)
        raise ParseError(f"expected IRI, found {tok.kind!r}", tok.line, tok.col)

    def parse_statement(self) -> list[Triple]:
        tok = self.peek()
        if tok.kind not in ("iriref", "pname"):
            raise ParseError(f"expected subject IRI, found {tok.kind!r}", tok.line, tok.col)
        subject = self.parse_iri()
        triples: list[Triple] = []
        while True:
            verb_tok = self.peek()
            if verb_tok.kind == "a":
                self.next()
                predicate = RDF_TYPE
            else:
                predicate = self.parse_iri()
            for obj in self.parse_object_list():
                triples.append(Triple(subject, predicate, obj, verb_tok.line))
            sep = self.next()
            if sep.kind == ".":
                return triples
            if sep.kind != ";":
                raise ParseError(f"expected ';' or '.', found {sep.kind!r}", sep.line, sep.col)
            # allow a trailing ';' before '.'
            if self.peek().kind == ".":
                self.next()
                return triples

    def parse_object_list(self) -> list[Term]:
        objects = [self.parse_object()]
        while self.peek().kind == ",":
            self.next()
            objects.append(self.parse_object())
        return objects

    def parse_object(self) -> Term:
        tok = self.peek()
        if tok.kind in ("iriref", "pname"):
            return Iri(self.parse_iri())
        if tok.kind == "number":
            self.next()
            return Literal(tok.value)
        if tok.kind == "boolean":
            self.next()
            return Literal(tok.value)
        if tok.kind == "string":
            return self.parse_string_literal()
        if tok.kind == "(":
            return self.parse_collection()
        raise ParseError(f"expected object term, found {tok.kind!r}", tok.line, tok.col)

    def parse_string_literal(self) -> Literal:
        tok = self.expect("string")
        nxt = self.peek()
        if nxt.kind == "dtype":
            self.next()
            datatype = self.parse_iri()
            if datatype in _XSD_NUMERIC:
                try:
                    return Literal(float(tok.value))
                except ValueError:
                    raise ParseError(f"invalid numeric literal {tok.value!r}", tok.line, tok.col) from None
            if datatype == XSD + "boolean":
                return Literal(tok.value == "true")
            if datatype == XSD + "string":
                return Literal(tok.value)
            return Literal(tok.value, datatype)
        if nxt.kind == "at":
            self.next()  # language tag is accepted and dropped
        return Literal(tok.value)

    def parse_collection(self) -> tuple:
        self.expect("(")
        items: list[Term] = []
        while self.peek().kind != ")":
            if self.peek().kind == "eof":
                tok = self.peek()
                raise ParseError("unterminated collection", tok.line, tok.col)
            items.append(self.parse_object())
        self.next()
        return tuple(items)


def parse_turtle(text: str) -> list[Triple]:
    """Parse dialect Turtle into a flat triple list.

    Raises ParseError (with line/column) on any syntax problem.
    """
    return _Parser(text).parse()


# --- serialization helpers -------------------------------------------------

def escape_string(value: str) -> str:
    out = value.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    return f'"{out}"'


def compact_iri(iri: str) -> str:
    """Render an IRI as a prefixed name when a canonical prefix applies."""
    for prefix, base in PREFIXES.items():
        if iri.startswith(base):
            return f"{prefix}:{iri[len(base):]}"
    return f"<{iri}>"


def format_term(term: Term) -> str:
    if isinstance(term, Iri):
        return compact_iri(term.value)
    if isinstance(term, tuple):
        return "(" + " ".join(format_term(t) for t in term) + ")"
    value = term.value
    if isinstance(value, bool):
        rendered = "true" if value else "false"
    elif isinstance(value, float):
        rendered = repr(value)
    else:
        rendered = escape_string(value)
        if term.datatype:
            rendered += "^^" + compact_iri(term.datatype)
    return rendered


def prefix_block() -> str:
    lines = [f"@prefix {p}: <{iri}> ." for p, iri in sorted(PREFIXES.items())]
    return "\n".join(lines) + "\n"


def local_name(iri: str) -> str:
    """Identifier for an IRI: the part after the namespace separator."""
    if iri.startswith(SKG):
        return iri[len(SKG):]
    for base in PREFIXES.values():
        if iri.startswith(base):
            return iri[len(base):]
    if "#" in iri:
        return iri.rsplit("#", 1)[1]
    return iri.rstrip("/").rsplit("/", 1)[-1]
