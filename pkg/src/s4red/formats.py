"""Plain-text instance files.

A file is a block of ``key: value`` header lines followed by the body:

    kind: group-word
    q: 2
    m: 2
    n: 2
    x1 x2 (1 2) x1' x2'

Kinds and bodies:

* ``matrix``: one literal ``[a,b;c,d]``.
* ``group-word``: whitespace-separated tokens ``x3``, ``[v1,v2;a,b,c,d]``
  (vector then matrix entries), or cycle notation ``(1 2)(3 4)`` when
  (q, m) = (2, 2).  A trailing ``'`` inverts the token; for a variable this
  is x^(|G|-1).
* ``restricted-poly``: monomials joined by ``+``, each a run of ``x1`` and
  matrix literals; ``0`` is the empty sum.
* ``p1``: one Z3 polynomial per line, ``c*x1^e1*x2^e2`` terms joined by ``+``.
* ``circuit``: an s-expression ``(mod2 c (term k child) ...)`` with
  ``(in k)`` leaves, plus ``shape`` and ``inputs`` headers.

``serialize`` writes the normal form; ``parse(serialize(x))`` gives back x.
"""

import re

from .algebra import Matrix, field, parse_matrix
from .circuits import CCCircuit, InputWire, ModGate
from .errors import ParseError
from .f4arith import P1Instance, Z3Poly
from .holomorph import GroupWord, HolElement, Perm, hol_group_order, s4_iso
from .respoly import Polynomial

KINDS = ("matrix", "group-word", "restricted-poly", "p1", "circuit")
_HEADER = re.compile(r"([a-z][a-z0-9_-]*)\s*:\s*(.*)")


class Document:
    """Header fields and body lines with their 1-based line numbers."""

    def __init__(self, header, body, body_start):
        self.header = header
        self.body = body
        self.body_start = body_start

    def get_int(self, key, default=None):
        if key not in self.header:
            if default is None:
                raise ParseError(f"missing header field {key!r}", 1, 1)
            return default
        value, line = self.header[key]
        try:
            return int(value)
        except ValueError:
            raise ParseError(f"header {key!r} must be an integer, got {value!r}", line, 1) from None


def split_document(text):
    header = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        raw = lines[i]
        if not raw.strip():
            i += 1
            continue
        mt = _HEADER.fullmatch(raw.strip())
        if not mt:
            break
        key = mt.group(1)
        if key in header:
            raise ParseError(f"duplicate header field {key!r}", i + 1, 1)
        header[key] = (mt.group(2).strip(), i + 1)
        i += 1
    return Document(header, lines[i:], i + 1)


def _check_field(q, m):
    try:
        field(q)
    except ValueError as exc:
        raise ParseError(str(exc), 1, 1) from None
    if m < 1:
        raise ParseError("m must be positive", 1, 1)


# ------------------------------------------------------------------ tokens

_WORD_TOKEN = re.compile(r"\s*(x\d+|\[[^\]]*\]|(?:\([^()]*\))+)('?)")


def _tokens(line, lineno, pattern, what):
    pos = 0
    out = []
    while pos < len(line):
        if line[pos:].strip() == "":
            break
        mt = pattern.match(line, pos)
        if not mt:
            col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
            raise ParseError(f"unexpected text in {what}: {line[col - 1:col + 9]!r}", lineno, col)
        start = mt.start(1) + 1
        out.append((mt.group(1), mt.group(2), start))
        pos = mt.end()
    return out


def _vector_constant(tok, q, m, lineno, col):
    inner = tok[1:-1]
    if inner.count(";") != 1:
        raise ParseError(f"constant {tok} must be [vector;matrix entries]", lineno, col)
    vs, ms = inner.split(";")
    try:
        v = tuple(int(x) for x in vs.split(","))
        entries = tuple(int(x) for x in ms.split(","))
    except ValueError:
        raise ParseError(f"non-integer entry in {tok}", lineno, col) from None
    if len(v) != m or len(entries) != m * m:
        raise ParseError(f"constant {tok} does not fit Hol({q},{m})", lineno, col)
    try:
        return HolElement(v, Matrix(q, m, entries))
    except ValueError as exc:
        raise ParseError(str(exc), lineno, col) from None


# ------------------------------------------------------------------ matrix


def parse_matrix_doc(doc):
    q = doc.get_int("q", 2)
    lines = [(i, s) for i, s in enumerate(doc.body, doc.body_start) if s.strip()]
    if len(lines) != 1:
        raise ParseError("expected exactly one matrix literal", doc.body_start, 1)
    lineno, s = lines[0]
    try:
        return parse_matrix(s, q, doc.get_int("m", None) if "m" in doc.header else None)
    except ParseError as exc:
        raise ParseError(str(exc).split(": ", 1)[-1], lineno, 1) from None


def serialize_matrix(A):
    return f"kind: matrix\nq: {A.q}\nm: {A.m}\n{A}\n"


# ------------------------------------------------------------------ group words


def parse_group_word(doc):
    q, m = doc.get_int("q", 2), doc.get_int("m", 2)
    _check_field(q, m)
    order = hol_group_order(q, m)
    letters = []
    for lineno, line in enumerate(doc.body, doc.body_start):
        for tok, prime, col in _tokens(line, lineno, _WORD_TOKEN, "word"):
            if tok.startswith("x"):
                i = int(tok[1:])
                if i < 1:
                    raise ParseError("variables are numbered from x1", lineno, col)
                letters.extend([i] * ((order - 1) if prime else 1))
                continue
            if tok.startswith("["):
                g = _vector_constant(tok, q, m, lineno, col)
            else:
                if (q, m) != (2, 2):
                    raise ParseError("cycle notation needs q = 2, m = 2", lineno, col)
                try:
                    g = s4_iso(Perm.from_cycles(tok))
                except ValueError as exc:
                    raise ParseError(str(exc), lineno, col) from None
            letters.append(g.inverse() if prime else g)
    top = max([x for x in letters if isinstance(x, int)], default=0)
    n = doc.get_int("n", top) if "n" in doc.header else top
    if n < top:
        raise ParseError(f"word uses x{top} but the header declares n={n}", doc.header["n"][1], 1)
    return GroupWord(tuple(letters), q, m, n)


def serialize_group_word(w):
    return f"kind: group-word\nq: {w.q}\nm: {w.m}\nn: {w.n}\n{w}\n"


# ------------------------------------------------------------------ restricted polynomials

_POLY_TOKEN = re.compile(r"\s*(x\d+|\[[^\]]*\])()")


def parse_restricted_poly(doc):
    q, m = doc.get_int("q", 2), doc.get_int("m", 2)
    _check_field(q, m)
    text_lines = [(i, s) for i, s in enumerate(doc.body, doc.body_start) if s.strip()]
    monos = []
    if len(text_lines) == 1 and text_lines[0][1].strip() == "0":
        text_lines = []
    for lineno, line in text_lines:
        # monomials may continue over lines; each line holds whole monomials
        offset = 0
        for chunk in line.split("+"):
            col0 = offset + 1
            offset += len(chunk) + 1
            if not chunk.strip():
                raise ParseError("empty monomial", lineno, col0)
            mono = []
            for tok, _, col in _tokens(chunk, lineno, _POLY_TOKEN, "monomial"):
                col += col0 - 1
                if tok.startswith("x"):
                    if int(tok[1:]) < 1:
                        raise ParseError("variables are numbered from x1", lineno, col)
                    mono.append(int(tok[1:]))
                else:
                    try:
                        mono.append(parse_matrix(tok, q, m))
                    except ParseError as exc:
                        raise ParseError(str(exc).split(": ", 1)[-1], lineno, col) from None
            monos.append(tuple(mono))
    top = max([x for mono in monos for x in mono if isinstance(x, int)], default=0)
    n = doc.get_int("n", top) if "n" in doc.header else top
    if n < top:
        raise ParseError(f"polynomial uses x{top} but the header declares n={n}", doc.header["n"][1], 1)
    try:
        return Polynomial(monos, q, m, n)
    except ValueError as exc:
        raise ParseError(str(exc), doc.body_start, 1) from None


def serialize_restricted_poly(p):
    return f"kind: restricted-poly\nq: {p.q}\nm: {p.m}\nn: {p.n}\n{p}\n"


# ------------------------------------------------------------------ P1 instances

_TERM = re.compile(r"\s*([0-9]+)?\s*((?:\*?\s*x[0-9]+(?:\^[0-9]+)?\s*)*)\s*")
_FACTOR = re.compile(r"\*?\s*x([0-9]+)(?:\^([0-9]+))?")


def _parse_z3(line, n, lineno):
    if line.strip() == "0":
        return Z3Poly({}, n)
    terms = {}
    offset = 0
    for chunk in line.split("+"):
        col = offset + 1
        offset += len(chunk) + 1
        mt = _TERM.fullmatch(chunk)
        if not mt or not chunk.strip():
            raise ParseError(f"bad term {chunk.strip()!r}", lineno, col)
        c = int(mt.group(1)) if mt.group(1) else 1
        if c not in (1, 2):
            raise ParseError(f"coefficient {c} is not in {{1, 2}}", lineno, col)
        body = mt.group(2)
        if mt.group(1) and body.strip() and not body.lstrip().startswith("*"):
            raise ParseError("expected '*' between coefficient and variable", lineno, col)
        e = [0] * n
        for fm in _FACTOR.finditer(body):
            i = int(fm.group(1))
            k = int(fm.group(2)) if fm.group(2) else 1
            if not 1 <= i <= n:
                raise ParseError(f"variable x{i} outside x1..x{n}", lineno, col)
            if k > 2:
                raise ParseError(f"exponent {k} is not in {{0, 1, 2}}", lineno, col)
            if e[i - 1]:
                raise ParseError(f"x{i} repeated in one term", lineno, col)
            e[i - 1] = k
        key = tuple(e)
        if key in terms:
            raise ParseError("repeated monomial", lineno, col)
        terms[key] = c
    return Z3Poly(terms, n)


def parse_p1(doc):
    n = doc.get_int("n")
    polys = []
    for lineno, line in enumerate(doc.body, doc.body_start):
        if line.strip():
            polys.append(_parse_z3(line, n, lineno))
    return P1Instance(tuple(polys), n)


def serialize_p1(inst):
    body = "".join(f"{p}\n" for p in inst.polys)
    return f"kind: p1\nn: {inst.n}\n{body}"


# ------------------------------------------------------------------ circuits

_SEXP = re.compile(r"\s*(\(|\)|[A-Za-z0-9_-]+)")


def _sexp_tokens(doc):
    out = []
    for lineno, line in enumerate(doc.body, doc.body_start):
        pos = 0
        while pos < len(line):
            if not line[pos:].strip():
                break
            mt = _SEXP.match(line, pos)
            if not mt:
                raise ParseError(f"unexpected character {line[pos:].strip()[0]!r}", lineno,
                                 pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1)
            out.append((mt.group(1), lineno, mt.start(1) + 1))
            pos = mt.end()
    return out


def parse_circuit(doc):
    toks = _sexp_tokens(doc)
    if not toks:
        raise ParseError("empty circuit", doc.body_start, 1)
    pos = 0
    shared = {}

    def expect(what):
        nonlocal pos
        if pos >= len(toks):
            last = toks[-1]
            raise ParseError(f"unexpected end of input, expected {what}", last[1], last[2])
        tok = toks[pos]
        pos += 1
        return tok

    def integer(what):
        tok, line, col = expect(what)
        if not tok.isdigit():
            raise ParseError(f"expected {what}, got {tok!r}", line, col)
        return int(tok)

    def node():
        tok, line, col = expect("'('")
        if tok != "(":
            raise ParseError(f"expected '(', got {tok!r}", line, col)
        head, line, col = expect("gate name")
        if head == "in":
            k = integer("wire index")
            close()
            return InputWire(k)
        mt = re.fullmatch(r"mod([0-9]+)", head)
        if not mt or int(mt.group(1)) < 2:
            raise ParseError(f"expected 'in' or 'modN', got {head!r}", line, col)
        const = integer("gate constant")
        children = []
        while pos < len(toks) and toks[pos][0] == "(":
            tok, line2, col2 = expect("'('")
            name, line2, col2 = expect("'term'")
            if name != "term":
                raise ParseError(f"expected 'term', got {name!r}", line2, col2)
            c = integer("coefficient")
            children.append((c, node()))
            close()
        close()
        g = ModGate(int(mt.group(1)), const, tuple(children))
        return shared.setdefault(g, g)

    def close():
        tok, line, col = expect("')'")
        if tok != ")":
            raise ParseError(f"expected ')', got {tok!r}", line, col)

    root = node()
    if pos != len(toks):
        _, line, col = toks[pos]
        raise ParseError("trailing text after circuit", line, col)
    if not isinstance(root, ModGate):
        raise ParseError("root must be a Mod gate", doc.body_start, 1)
    if "shape" in doc.header:
        raw, line = doc.header["shape"]
        try:
            shape = tuple(int(x) for x in raw.split(","))
        except ValueError:
            raise ParseError(f"bad shape {raw!r}", line, 1) from None
    else:
        shape = _infer_shape(root)
    top = _max_wire(root)
    num = doc.get_int("inputs", top + 1) if "inputs" in doc.header else top + 1
    if num <= top:
        raise ParseError(f"circuit reads wire {top} but declares {num} inputs", doc.header["inputs"][1], 1)
    return CCCircuit(root, shape, num)


def _max_wire(node):
    if isinstance(node, InputWire):
        return node.index
    return max([_max_wire(ch) for _, ch in node.children], default=-1)


def _infer_shape(root):
    shape = []
    level = [root]
    while level:
        shape.append(level[0].modulus)
        level = [ch for g in level for _, ch in g.children if isinstance(ch, ModGate)]
    return tuple(shape)


def sexp(node):
    if isinstance(node, InputWire):
        return f"(in {node.index})"
    parts = [f"mod{node.modulus}", str(node.const)]
    parts += [f"(term {c} {sexp(ch)})" for c, ch in node.children]
    return "(" + " ".join(parts) + ")"


def serialize_circuit(C):
    shape = ",".join(map(str, C.shape))
    return f"kind: circuit\nshape: {shape}\ninputs: {C.num_inputs}\n{sexp(C.root)}\n"


# ------------------------------------------------------------------ dispatch

_PARSERS = {
    "matrix": parse_matrix_doc,
    "group-word": parse_group_word,
    "restricted-poly": parse_restricted_poly,
    "p1": parse_p1,
    "circuit": parse_circuit,
}


def parse(kind, text=None):
    """parse(kind, text), or parse(text) reading ``kind`` from the header."""
    if text is None:
        kind, text = None, kind
    doc = split_document(text)
    declared = doc.header.get("kind")
    if declared and kind and declared[0] != kind:
        raise ParseError(f"file declares kind {declared[0]!r}, expected {kind!r}", declared[1], 1)
    kind = kind or (declared[0] if declared else None)
    if kind not in _PARSERS:
        raise ParseError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", 1, 1)
    return _PARSERS[kind](doc)


def kind_of(obj):
    if isinstance(obj, Matrix):
        return "matrix"
    if isinstance(obj, GroupWord):
        return "group-word"
    if isinstance(obj, P1Instance):
        return "p1"
    if isinstance(obj, CCCircuit):
        return "circuit"
    if hasattr(obj, "monomials"):
        return "restricted-poly"
    raise TypeError(f"no text format for {type(obj).__name__}")


def serialize(obj):
    kind = kind_of(obj)
    if kind == "restricted-poly" and not isinstance(obj, Polynomial):
        obj = obj.expand()
    return {
        "matrix": serialize_matrix,
        "group-word": serialize_group_word,
        "restricted-poly": serialize_restricted_poly,
        "p1": serialize_p1,
        "circuit": serialize_circuit,
    }[kind](obj)


def normalize(kind, text):
    return serialize(parse(kind, text))
