"""Workspace text format, canonical printers, and certificate JSON.

Grammar (line comments start with '#'):

    ring NAME { char P; vars ID+; weights INT+; ideal POLY ("," POLY)*; }
    module NAME over RINGNAME { degrees INT+; relations { VEC (";" VEC)* } }
    prime NAME in RINGNAME { POLY ("," POLY)* }

where VEC is a sum of POLY * eK terms (eK = the K-th generator, 1-based)
and POLY uses integer coefficients, + - * ^ and parentheses.  ``weights``
and ``ideal`` may be omitted.  Parsing is total: malformed input raises
ParseError with the 1-based line/column of the offending token.
"""

from __future__ import annotations

import json
import os

from . import config
from .errors import HomogeneityError, ParseError
from .modlib import GradedModule, ModuleMap
from .ringkernel import GradedRing, IdealHandle, Polynomial, is_prime, poly_str


class Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self):
        return f"{self.kind}({self.value!r})@{self.line}:{self.column}"


_SYMBOLS = "{};,+-*^()"


def tokenize(text: str):
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _SYMBOLS:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            startcol = col
            while i < n and text[i].isdigit():
                i += 1
                col += 1
            tokens.append(Token("int", int(text[start:i]), line, startcol))
            continue
        if ch.isalpha() or ch == "_":
            start = i
            startcol = col
            while i < n and (text[i].isalnum() or text[i] == "_"):
                i += 1
                col += 1
            tokens.append(Token("ident", text[start:i], line, startcol))
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col, ch)
    tokens.append(Token("eof", None, line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, value=None) -> Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {tok.value!r}", tok.line, tok.column, tok.value)
        return tok

    def expect_keyword(self, word) -> Token:
        tok = self.next()
        if tok.kind != "ident" or tok.value != word:
            raise ParseError(f"expected keyword {word!r}, found {tok.value!r}", tok.line, tok.column, tok.value)
        return tok

    # -- polynomial expressions -------------------------------------------------
    def parse_poly(self, ring: GradedRing) -> Polynomial:
        tok = self.peek()
        poly = self._expr(ring)
        if not poly.is_homogeneous():
            raise ParseError("polynomial is not homogeneous for the ring weights", tok.line, tok.column)
        return poly

    def _expr(self, ring) -> Polynomial:
        acc = self._term(ring)
        while self.peek().kind in "+-":
            op = self.next().kind
            rhs = self._term(ring)
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def _term(self, ring) -> Polynomial:
        acc = self._factor(ring)
        while self.peek().kind == "*":
            self.next()
            acc = acc * self._factor(ring)
        return acc

    def _factor(self, ring) -> Polynomial:
        base = self._base(ring)
        if self.peek().kind == "^":
            self.next()
            tok = self.expect("int")
            out = ring.one()
            for _ in range(tok.value):
                out = out * base
            return out
        return base

    def _base(self, ring) -> Polynomial:
        tok = self.next()
        if tok.kind == "int":
            return ring.const(tok.value)
        if tok.kind == "-":
            return -self._factor(ring)
        if tok.kind == "(":
            inner = self._expr(ring)
            self.expect(")")
            return inner
        if tok.kind == "ident":
            if tok.value not in ring.variables:
                raise ParseError(f"unknown identifier {tok.value!r}", tok.line, tok.column, tok.value)
            return ring.var(tok.value)
        raise ParseError(f"expected a polynomial, found {tok.value!r}", tok.line, tok.column, tok.value)

    # -- vector terms (sum of POLY * eK) -----------------------------------------
    def parse_vector(self, ring: GradedRing, gen_degs):
        column = [ring.zero() for _ in gen_degs]
        first = True
        col_degree = None
        while True:
            tok = self.peek()
            sign = 1
            if tok.kind in "+-":
                self.next()
                sign = -1 if tok.kind == "-" else 1
            elif not first:
                break
            start = self.peek()
            factors = [self._factor(ring)] if not self._at_generator() else []
            while self.peek().kind == "*":
                self.next()
                if self._at_generator():
                    factors.append(None)  # placeholder: generator comes next
                    break
                factors.append(self._factor(ring))
            if factors and factors[-1] is None:
                factors.pop()
                gen_tok = self.next()
                k = self._generator_index(gen_tok, len(gen_degs))
            elif not factors and self._at_generator():
                gen_tok = self.next()
                k = self._generator_index(gen_tok, len(gen_degs))
            else:
                raise ParseError("vector term must end in a generator eK", start.line, start.column, start.value)
            poly = ring.one()
            for f in factors:
                poly = poly * f
            if sign < 0:
                poly = -poly
            if not poly.is_homogeneous():
                raise ParseError("coefficient is not homogeneous", start.line, start.column)
            if not poly.is_zero():
                deg = poly.degree() + gen_degs[k]
                if col_degree is None:
                    col_degree = deg
                elif col_degree != deg:
                    raise ParseError(
                        f"relation mixes degrees: term of degree {deg} after degree {col_degree}",
                        start.line, start.column,
                    )
            column[k] = column[k] + poly
            first = False
            if self.peek().kind not in "+-":
                break
        return column

    def _at_generator(self) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and len(tok.value) > 1 and tok.value[0] == "e" and tok.value[1:].isdigit()

    def _generator_index(self, tok: Token, ngens: int) -> int:
        k = int(tok.value[1:]) - 1
        if k < 0 or k >= ngens:
            raise ParseError(f"generator {tok.value} out of range (1..{ngens})", tok.line, tok.column, tok.value)
        return k


class WorkspaceSpec:
    """Parsed input: named rings, modules, and declared witness primes."""

    def __init__(self):
        self.rings: dict[str, GradedRing] = {}
        self.modules: dict[str, tuple[str, GradedModule]] = {}
        self.primes: dict[str, tuple[str, IdealHandle]] = {}
        self.order: list[tuple[str, str]] = []  # (kind, name) in source order

    def ring_of_module(self, name: str) -> GradedRing:
        ring_name, _ = self.modules[name]
        return self.rings[ring_name]

    def module(self, name: str) -> GradedModule:
        return self.modules[name][1]

    def witness_primes(self, ring_name: str):
        return [h for rn, h in self.primes.values() if rn == ring_name]


def parse_spec(text: str) -> WorkspaceSpec:
    parser = _Parser(text)
    ws = WorkspaceSpec()
    env_prime = os.environ.get("BIGINDEC_PRIME")
    while parser.peek().kind != "eof":
        tok = parser.peek()
        if tok.kind != "ident":
            raise ParseError(f"expected a declaration, found {tok.value!r}", tok.line, tok.column, tok.value)
        if tok.value == "ring":
            _parse_ring(parser, ws, int(env_prime) if env_prime else None)
        elif tok.value == "module":
            _parse_module(parser, ws)
        elif tok.value == "prime":
            _parse_prime(parser, ws)
        else:
            raise ParseError(f"unknown declaration {tok.value!r}", tok.line, tok.column, tok.value)
    return ws


def _parse_ring(parser: _Parser, ws: WorkspaceSpec, env_prime):
    parser.expect_keyword("ring")
    name_tok = parser.expect("ident")
    if name_tok.value in ws.rings:
        raise ParseError(f"ring {name_tok.value!r} declared twice", name_tok.line, name_tok.column)
    parser.expect("{")
    parser.expect_keyword("char")
    char_tok = parser.expect("int")
    char = env_prime if env_prime is not None else char_tok.value
    if not is_prime(char):
        raise ParseError(f"characteristic {char} is not prime", char_tok.line, char_tok.column)
    parser.expect(";")
    parser.expect_keyword("vars")
    names = []
    while parser.peek().kind == "ident":
        names.append(parser.next().value)
    if not names:
        tok = parser.peek()
        raise ParseError("expected at least one variable", tok.line, tok.column)
    parser.expect(";")
    weights = None
    if parser.peek().kind == "ident" and parser.peek().value == "weights":
        parser.next()
        weights = []
        while parser.peek().kind == "int":
            weights.append(parser.next().value)
        if len(weights) != len(names):
            tok = parser.peek()
            raise ParseError("weight count differs from variable count", tok.line, tok.column)
        if any(w < 1 for w in weights):
            tok = parser.peek()
            raise ParseError("weights must be positive", tok.line, tok.column)
        parser.expect(";")
    scratch = GradedRing(char, names, weights)
    ideal_polys = []
    if parser.peek().kind == "ident" and parser.peek().value == "ideal":
        parser.next()
        ideal_polys.append(parser.parse_poly(scratch))
        while parser.peek().kind == ",":
            parser.next()
            ideal_polys.append(parser.parse_poly(scratch))
        parser.expect(";")
    parser.expect("}")
    ring = GradedRing(char, names, weights, ideal=[p.terms for p in ideal_polys])
    ws.rings[name_tok.value] = ring
    ws.order.append(("ring", name_tok.value))


def _parse_module(parser: _Parser, ws: WorkspaceSpec):
    parser.expect_keyword("module")
    name_tok = parser.expect("ident")
    parser.expect_keyword("over")
    ring_tok = parser.expect("ident")
    if ring_tok.value not in ws.rings:
        raise ParseError(f"unknown ring {ring_tok.value!r}", ring_tok.line, ring_tok.column, ring_tok.value)
    ring = ws.rings[ring_tok.value]
    parser.expect("{")
    parser.expect_keyword("degrees")
    degs = []
    while parser.peek().kind == "int" or (parser.peek().kind == "-"):
        neg = False
        if parser.peek().kind == "-":
            parser.next()
            neg = True
        tok = parser.expect("int")
        degs.append(-tok.value if neg else tok.value)
    if not degs:
        tok = parser.peek()
        raise ParseError("expected at least one generator degree", tok.line, tok.column)
    parser.expect(";")
    columns = []
    parser.expect_keyword("relations")
    parser.expect("{")
    if parser.peek().kind != "}":
        columns.append(parser.parse_vector(ring, degs))
        while parser.peek().kind == ";":
            parser.next()
            if parser.peek().kind == "}":
                break
            columns.append(parser.parse_vector(ring, degs))
    parser.expect("}")
    parser.expect("}")
    try:
        module = GradedModule(ring, degs, columns)
    except HomogeneityError as exc:
        raise ParseError(str(exc), name_tok.line, name_tok.column) from exc
    ws.modules[name_tok.value] = (ring_tok.value, module)
    ws.order.append(("module", name_tok.value))


def _parse_prime(parser: _Parser, ws: WorkspaceSpec):
    parser.expect_keyword("prime")
    name_tok = parser.expect("ident")
    parser.expect_keyword("in")
    ring_tok = parser.expect("ident")
    if ring_tok.value not in ws.rings:
        raise ParseError(f"unknown ring {ring_tok.value!r}", ring_tok.line, ring_tok.column, ring_tok.value)
    ring = ws.rings[ring_tok.value]
    parser.expect("{")
    gens = [parser.parse_poly(ring)]
    while parser.peek().kind == ",":
        parser.next()
        gens.append(parser.parse_poly(ring))
    parser.expect("}")
    ws.primes[name_tok.value] = (ring_tok.value, IdealHandle(ring, gens))
    ws.order.append(("prime", name_tok.value))


# ---------------------------------------------------------------------------
# Canonical printing
# ---------------------------------------------------------------------------

def format_ring(name: str, ring: GradedRing) -> str:
    lines = [f"ring {name} {{"]
    lines.append(f"  char {ring.char};")
    lines.append(f"  vars {' '.join(ring.variables)};")
    lines.append(f"  weights {' '.join(str(w) for w in ring.weights)};")
    if ring.ideal_gens:
        lines.append(f"  ideal {', '.join(poly_str(g) for g in ring.ideal_gens)};")
    lines.append("}")
    return "\n".join(lines)


def format_module(name: str, ring_name: str, module: GradedModule) -> str:
    lines = [f"module {name} over {ring_name} {{"]
    lines.append(f"  degrees {' '.join(str(d) for d in module.gen_degs)};")
    cols = []
    for col in module.columns:
        terms = []
        for i, f in enumerate(col):
            if f.is_zero():
                continue
            body = poly_str(f)
            if "+" in body or (body.count("-") and not body.startswith("-")) or " " in body:
                body = f"({body})"
                terms.append(f"{body}*e{i + 1}")
            elif body.startswith("-"):
                terms.append(f"-{body[1:]}*e{i + 1}")
            else:
                terms.append(f"{body}*e{i + 1}")
        cols.append(" + ".join(terms).replace("+ -", "- "))
    if cols:
        lines.append("  relations {")
        for c in cols:
            lines.append(f"    {c};")
        lines.append("  }")
    else:
        lines.append("  relations { }")
    lines.append("}")
    return "\n".join(lines)


def format_prime(name: str, ring_name: str, handle: IdealHandle) -> str:
    return f"prime {name} in {ring_name} {{ {', '.join(poly_str(g) for g in handle.generators)} }}"


def format_workspace(ws: WorkspaceSpec) -> str:
    chunks = []
    for kind, name in ws.order:
        if kind == "ring":
            chunks.append(format_ring(name, ws.rings[name]))
        elif kind == "module":
            ring_name, module = ws.modules[name]
            chunks.append(format_module(name, ring_name, module))
        else:
            ring_name, handle = ws.primes[name]
            chunks.append(format_prime(name, ring_name, handle))
    return "\n\n".join(chunks) + "\n"


# ---------------------------------------------------------------------------
# Certificate serialization
# ---------------------------------------------------------------------------

def _matrix_strings(matrix, nrows, ncols):
    return [[poly_str(matrix[i][j]) for j in range(ncols)] for i in range(nrows)]


def _module_dict(module: GradedModule) -> dict:
    return {
        "degrees": list(module.gen_degs),
        "relations": [[poly_str(module.columns[j][i]) for j in range(module.nrels)]
                      for i in range(module.ngens)],
    }


def serialize_certificate(cert, include_timings: bool = False) -> dict:
    ring = cert.ring
    seq = cert.sequence
    data = {
        "version": "1",
        "config": {
            "p": ring.char,
            "nMax": cert.n_max,
            "truncation": cert.truncation,
            "seed": cert.seed,
            "idempotent_trials": cert.idempotent_trials,
        },
        "ring": {
            "char": ring.char,
            "vars": list(ring.variables),
            "weights": list(ring.weights),
            "ideal": [poly_str(g) for g in ring.ideal_gens],
        },
        "modules": {
            "M": _module_dict(cert.module),
            "T": dict(_module_dict(cert.T), n=cert.n),
            "X": _module_dict(cert.X),
        },
        "maps": {
            "iota": _matrix_strings(seq.iota.matrix, seq.middle.ngens, seq.left.ngens),
            "pi": _matrix_strings(seq.pi.matrix, seq.right.ngens, seq.middle.ngens),
        },
        "choice": {
            "r": cert.r,
            "n": cert.n,
            "s": cert.s,
            "generators": [
                {
                    "degree": g.degree,
                    "matrix": _matrix_strings(g.matrix, len(g.matrix), len(g.matrix[0]) if g.matrix else 0),
                }
                for g in cert.generators
            ],
        },
        "verdicts": {
            "exact": cert.verdicts.get("exact"),
            "nonsplit": cert.verdicts.get("nonsplit"),
            "ann_in_radical": cert.verdicts.get("ann_in_radical"),
            "end0_local": cert.verdicts.get("end0_local"),
            "rank": {
                "t": cert.verdicts.get("rank", {}).get("t"),
                "fitt_low_zero": cert.verdicts.get("rank", {}).get("fitt_low_zero"),
                "fitt_t_m_primary": cert.verdicts.get("rank", {}).get("fitt_t_m_primary"),
                "witnesses": cert.verdicts.get("rank", {}).get("witnesses", []),
            },
        },
        "oracle": {
            "ext_dim_agreement": cert.oracle.get("ext_dim_agreement"),
            "ext_dim_main": cert.oracle.get("ext_dim_main"),
            "ext_dim_oracle": cert.oracle.get("ext_dim_oracle"),
            "split_search": cert.oracle.get("split_search"),
            "idempotent_search": cert.oracle.get("idempotent_search"),
            "idempotent_trials": cert.oracle.get("idempotent_trials"),
        },
        "timings": {k: round(v, 6) for k, v in cert.timings.items()} if include_timings else None,
    }
    return data


def certificate_json(cert, include_timings: bool = False) -> str:
    return json.dumps(serialize_certificate(cert, include_timings), indent=2) + "\n"


def load_certificate(text: str) -> dict:
    return json.loads(text)


def poly_from_string(ring: GradedRing, text: str) -> Polynomial:
    parser = _Parser(text)
    poly = parser.parse_poly(ring)
    parser.expect("eof")
    return poly


def ring_from_dict(data: dict) -> GradedRing:
    scratch = GradedRing(data["char"], data["vars"], data["weights"])
    ideal = [poly_from_string(scratch, s).terms for s in data["ideal"]]
    return GradedRing(data["char"], data["vars"], data["weights"], ideal=ideal)


def module_from_dict(ring: GradedRing, data: dict) -> GradedModule:
    degs = data["degrees"]
    rows = data["relations"]
    ncols = len(rows[0]) if rows and rows[0] else 0
    columns = []
    for j in range(ncols):
        columns.append([poly_from_string(ring, rows[i][j]) for i in range(len(degs))])
    return GradedModule(ring, degs, columns)


def matrix_from_strings(ring: GradedRing, rows) -> list:
    return [[poly_from_string(ring, s) for s in row] for row in rows]
