"""Finite presentations of the source category: data model, DSL parser and validator.

A presentation declares objects, generator homs, a total composition table and
the extra structure the construction consumes (direct sums, corner embeddings,
homotopic pairs, split-exact sequences and representative isomorphisms).

Composition is always written in diagrammatic order: ``f ; g`` is ``g o f``.

Hom references are plain strings: a declared name, ``id(A)`` for the identity
of ``A`` or ``0(A,B)`` for the zero hom from ``A`` to ``B``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "ObjectDecl",
    "HomDecl",
    "SumDecl",
    "CornerDecl",
    "HomotopyDecl",
    "SplitExactDecl",
    "CornerLink",
    "SplitExactLink",
    "RepresentativeDecl",
    "Presentation",
    "Violation",
    "ValidationReport",
    "PresentationError",
    "PresentationSyntaxError",
    "DuplicateNameError",
    "UnresolvedReferenceError",
    "CompositionError",
    "identity",
    "zero",
    "parse_presentation",
    "format_presentation",
    "validate_presentation",
    "compose_lookup",
]


_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_ID_RE = re.compile(rf"^id\(({_IDENT})\)$")
_ZERO_RE = re.compile(rf"^0\(({_IDENT}),({_IDENT})\)$")


def identity(obj: str) -> str:
    return f"id({obj})"


def zero(dom: str, cod: str) -> str:
    return f"0({dom},{cod})"


# -- errors -----------------------------------------------------------------


class PresentationError(ValueError):
    """Base class for structural problems found while reading a presentation."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class PresentationSyntaxError(PresentationError):
    pass


class DuplicateNameError(PresentationError):
    pass


class UnresolvedReferenceError(PresentationError):
    def __init__(self, name: str, kind: str, line=None, column=None):
        self.name = name
        super().__init__(f"unresolved {kind} reference {name!r}", line, column)


class CompositionError(ValueError):
    """Raised by compose_lookup on a non-composable pair or a missing entry."""


# -- declarations -----------------------------------------------------------


@dataclass(frozen=True)
class ObjectDecl:
    name: str
    stabilization_of: str | None = None
    is_zero: bool = False


@dataclass(frozen=True)
class HomDecl:
    name: str
    dom: str
    cod: str


@dataclass(frozen=True)
class SumDecl:
    sum_object: str
    left: str
    right: str
    i_left: str
    i_right: str
    p_left: str
    p_right: str


@dataclass(frozen=True)
class CornerDecl:
    # The corner is named after its embedding hom.
    name: str
    emb: str


@dataclass(frozen=True)
class HomotopyDecl:
    f0: str
    f1: str


@dataclass(frozen=True)
class SplitExactDecl:
    name: str
    f: str
    g: str
    s: str
    sum: str  # name of the sum object A (+) B


@dataclass(frozen=True)
class CornerLink:
    corner: str
    target: str
    stab_iso: str


@dataclass(frozen=True)
class SplitExactLink:
    splitexact: str
    target: str
    leg: str  # the iso A'(+)B' -> A(+)B, inverse of pi_A (+) pi_B


@dataclass(frozen=True)
class RepresentativeDecl:
    object: str
    rep: str
    iso: str
    iso_inv: str
    corner_links: tuple[CornerLink, ...] = ()
    splitexact_links: tuple[SplitExactLink, ...] = ()


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


# -- the presentation -------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    objects: tuple[ObjectDecl, ...]
    homs: tuple[HomDecl, ...]
    table: tuple[tuple[tuple[str, str], str], ...]
    sums: tuple[SumDecl, ...] = ()
    corners: tuple[CornerDecl, ...] = ()
    homotopies: tuple[HomotopyDecl, ...] = ()
    splitexacts: tuple[SplitExactDecl, ...] = ()
    representatives: tuple[RepresentativeDecl, ...] = ()
    group_tag: str | None = None
    positions: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        obj = {o.name: o for o in self.objects}
        homs = {h.name: h for h in self.homs}
        set_ = object.__setattr__
        set_(self, "_objects", obj)
        set_(self, "_homs", homs)
        set_(self, "_table", dict(self.table))
        set_(self, "_sums", {d.sum_object: d for d in self.sums})
        set_(self, "_corners", {c.name: c for c in self.corners})
        set_(self, "_splitexacts", {d.name: d for d in self.splitexacts})
        set_(self, "_reps", {r.object: r for r in self.representatives})

    # lookups

    def object(self, name: str) -> ObjectDecl:
        return self._objects[name]

    def has_object(self, name: str) -> bool:
        return name in self._objects

    def is_zero_object(self, name: str) -> bool:
        return self._objects[name].is_zero

    def hom(self, name: str) -> HomDecl:
        return self._homs[name]

    def sum_decl(self, sum_object: str) -> SumDecl:
        return self._sums[sum_object]

    def corner(self, name: str) -> CornerDecl:
        return self._corners[name]

    def splitexact(self, name: str) -> SplitExactDecl:
        return self._splitexacts[name]

    def representative(self, obj: str) -> RepresentativeDecl | None:
        return self._reps.get(obj)

    def table_entry(self, f: str, g: str) -> str | None:
        return self._table.get((f, g))

    @property
    def object_names(self) -> list[str]:
        return [o.name for o in self.objects]

    @property
    def hom_names(self) -> list[str]:
        return [h.name for h in self.homs]

    def generator_homs(self) -> list[str]:
        """Declared homs followed by the identities, in declaration order."""
        return self.hom_names + [identity(o) for o in self.object_names]

    def rep_of(self, obj: str) -> str:
        r = self._reps.get(obj)
        return r.rep if r else obj

    def representative_set(self) -> list[str]:
        seen = []
        for o in self.object_names:
            r = self.rep_of(o)
            if r not in seen:
                seen.append(r)
        return seen

    def is_hom(self, ref: str) -> bool:
        try:
            self.hom_type(ref)
        except KeyError:
            return False
        return True

    def hom_type(self, ref: str) -> tuple[str, str]:
        """(dom, cod) of a hom reference; KeyError if it does not resolve."""
        if ref in self._homs:
            h = self._homs[ref]
            return h.dom, h.cod
        m = _ID_RE.match(ref)
        if m and m.group(1) in self._objects:
            return m.group(1), m.group(1)
        m = _ZERO_RE.match(ref)
        if m and m.group(1) in self._objects and m.group(2) in self._objects:
            return m.group(1), m.group(2)
        raise KeyError(ref)

    def is_identity(self, ref: str) -> bool:
        return bool(_ID_RE.match(ref))

    def is_zero_hom(self, ref: str) -> bool:
        """True for literal zero homs and for any hom touching a zero object."""
        if _ZERO_RE.match(ref):
            return True
        dom, cod = self.hom_type(ref)
        return self.is_zero_object(dom) or self.is_zero_object(cod)

    def normalize_hom(self, ref: str) -> str:
        dom, cod = self.hom_type(ref)
        if self.is_zero_hom(ref):
            return zero(dom, cod)
        return ref


# -- composition ------------------------------------------------------------


def compose_lookup(p: Presentation, f: str, g: str) -> str:
    """Return the hom ``f ; g`` (that is ``g o f``), normalized.

    Identity and zero cases are resolved without consulting the table.
    """
    try:
        fd, fc = p.hom_type(f)
        gd, gc = p.hom_type(g)
    except KeyError as exc:
        raise CompositionError(f"unknown hom {exc.args[0]!r}") from None
    if fc != gd:
        raise CompositionError(f"{f} : {fd} -> {fc} and {g} : {gd} -> {gc} are not composable")
    if p.is_zero_hom(f) or p.is_zero_hom(g):
        return zero(fd, gc)
    if p.is_identity(f):
        return g
    if p.is_identity(g):
        return f
    entry = p.table_entry(f, g)
    if entry is None:
        raise CompositionError(f"missing composition {f} ; {g}")
    return p.normalize_hom(entry)


def _try_compose(p, f, g):
    try:
        return compose_lookup(p, f, g)
    except CompositionError:
        return None


def fold_compose(p: Presentation, refs: Iterable[str]) -> str:
    refs = list(refs)
    acc = refs[0]
    for r in refs[1:]:
        acc = compose_lookup(p, acc, r)
    return acc


# -- lexer / parser ---------------------------------------------------------


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<oplus>\(\+\))
  | (?P<arrow>->)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<zero>0)
  | (?P<sym>[:;=~(),])
    """,
    re.VERBOSE,
)

_KEYWORDS = {"object", "stab", "hom", "compose", "sum", "homotopic", "splitexact", "rep", "group"}


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[list[_Token]]:
    """Split the source into statements (one per line) of tokens."""
    lines: list[list[_Token]] = [[]]
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            lines.append([])
            line += 1
            col = 1
        elif kind not in ("ws", "comment"):
            lines[-1].append(_Token(kind, tok, line, col))
        if kind != "nl":
            col += len(tok)
        pos = m.end()
    return [ln for ln in lines if ln]


class _StatementParser:
    def __init__(self, tokens: list[_Token]):
        self.toks = tokens
        self.i = 0

    def peek(self) -> _Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def _fail(self, expected: str):
        tok = self.peek()
        if tok is None:
            last = self.toks[-1]
            raise PresentationSyntaxError(
                f"expected {expected}, found end of line", last.line, last.column + len(last.text)
            )
        raise PresentationSyntaxError(f"expected {expected}, found {tok.text!r}", tok.line, tok.column)

    def name(self, what="name") -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != "name":
            self._fail(what)
        self.i += 1
        return tok

    def keyword(self, word: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.kind != "name" or tok.text != word:
            self._fail(repr(word))
        self.i += 1
        return tok

    def sym(self, text: str) -> _Token:
        tok = self.peek()
        if tok is None or tok.text != text:
            self._fail(repr(text))
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def end(self):
        if self.at(";"):
            self.i += 1
        if self.peek() is not None:
            self._fail("end of statement")

    def hom_ref(self, allow_zero=True) -> tuple[str, _Token]:
        """NAME | id(OBJ) | 0"""
        tok = self.peek()
        if tok is not None and tok.kind == "zero" and allow_zero:
            self.i += 1
            return "0", tok
        t = self.name("hom name, id(OBJ) or 0" if allow_zero else "hom name or id(OBJ)")
        if t.text == "id" and self.at("("):
            self.sym("(")
            o = self.name("object name")
            self.sym(")")
            return identity(o.text), t
        return t.text, t


class _Builder:
    """Accumulates declarations, then resolves references."""

    def __init__(self):
        self.objects: dict[str, dict] = {}
        self.homs: dict[str, HomDecl] = {}
        self.table: dict[tuple[str, str], str] = {}
        self.sums: list[SumDecl] = []
        self.stabs: list[tuple[str, str, str]] = []
        self.homotopies: list[HomotopyDecl] = []
        self.splitexacts: list[SplitExactDecl] = []
        self.reps: list[RepresentativeDecl] = []
        self.group_tag: str | None = None
        self.pos: dict = {}

    def at(self, key, tok):
        self.pos.setdefault(key, (tok.line, tok.column))

    def add_object(self, tok, zero_flag):
        if tok.text in self.objects:
            raise DuplicateNameError(f"duplicate object {tok.text!r}", tok.line, tok.column)
        self.objects[tok.text] = {"stab": None, "zero": zero_flag}
        self.at(("object", tok.text), tok)

    def add_hom(self, tok, dom, cod):
        if tok.text in self.homs:
            raise DuplicateNameError(f"duplicate hom {tok.text!r}", tok.line, tok.column)
        self.homs[tok.text] = HomDecl(tok.text, dom.text, cod.text)
        self.at(("hom", tok.text), tok)
        self.at(("object-ref", dom.text), dom)
        self.at(("object-ref", cod.text), cod)


def _parse_statement(b: _Builder, toks: list[_Token]) -> None:
    sp = _StatementParser(toks)
    head = sp.peek()
    if head.kind != "name" or head.text not in _KEYWORDS:
        raise PresentationSyntaxError(
            f"expected a statement keyword, found {head.text!r}", head.line, head.column
        )
    sp.i += 1
    kw = head.text
    if kw == "object":
        name = sp.name("object name")
        zero_flag = False
        if sp.at("zero"):
            sp.keyword("zero")
            zero_flag = True
        sp.end()
        b.add_object(name, zero_flag)
    elif kw == "group":
        name = sp.name("group tag")
        sp.end()
        b.group_tag = name.text
    elif kw == "hom":
        name = sp.name("hom name")
        sp.sym(":")
        dom = sp.name("object name")
        sp.sym("->")
        cod = sp.name("object name")
        sp.end()
        b.add_hom(name, dom, cod)
    elif kw == "stab":
        k = sp.name("object name")
        sp.keyword("of")
        a = sp.name("object name")
        sp.keyword("via")
        c = sp.name("hom name")
        sp.end()
        b.stabs.append((k.text, a.text, c.text))
        b.at(("object-ref", k.text), k)
        b.at(("object-ref", a.text), a)
        b.at(("hom-ref", c.text), c)
    elif kw == "compose":
        f = sp.name("hom name")
        sp.sym(";")
        g = sp.name("hom name")
        sp.sym("=")
        res, rtok = sp.hom_ref()
        sp.end()
        key = (f.text, g.text)
        if key in b.table:
            raise DuplicateNameError(f"duplicate composition {f.text} ; {g.text}", f.line, f.column)
        b.table[key] = res
        if res != "0":
            b.at(("hom-ref", res), rtok)
        b.at(("hom-ref", f.text), f)
        b.at(("hom-ref", g.text), g)
        b.at(("compose", key), f)
    elif kw == "sum":
        ab = sp.name("object name")
        sp.sym("=")
        a = sp.name("object name")
        sp.sym("(+)")
        bb = sp.name("object name")
        sp.keyword("inj")
        ia = sp.name("hom name")
        ib = sp.name("hom name")
        sp.keyword("proj")
        pa = sp.name("hom name")
        pb = sp.name("hom name")
        sp.end()
        b.sums.append(SumDecl(ab.text, a.text, bb.text, ia.text, ib.text, pa.text, pb.text))
        for t in (ab, a, bb):
            b.at(("object-ref", t.text), t)
        b.at(("sum", ab.text), ab)
        # Injections and projections are declared implicitly when absent.
        for t, dom, cod in ((ia, a, ab), (ib, bb, ab), (pa, ab, a), (pb, ab, bb)):
            if t.text not in b.homs:
                b.add_hom(t, dom, cod)
            else:
                h = b.homs[t.text]
                if (h.dom, h.cod) != (dom.text, cod.text):
                    raise PresentationError(
                        f"{t.text} is declared {h.dom} -> {h.cod} but the sum needs "
                        f"{dom.text} -> {cod.text}",
                        t.line,
                        t.column,
                    )
    elif kw == "homotopic":
        f0 = sp.name("hom name")
        sp.sym("~")
        f1 = sp.name("hom name")
        sp.end()
        b.homotopies.append(HomotopyDecl(f0.text, f1.text))
        b.at(("hom-ref", f0.text), f0)
        b.at(("hom-ref", f1.text), f1)
    elif kw == "splitexact":
        name = sp.name("split-exact name")
        sp.sym(":")
        f = sp.name("hom name")
        g = sp.name("hom name")
        s = sp.name("hom name")
        sp.keyword("sum")
        ab = sp.name("object name")
        sp.end()
        if any(d.name == name.text for d in b.splitexacts):
            raise DuplicateNameError(f"duplicate split-exact {name.text!r}", name.line, name.column)
        b.splitexacts.append(SplitExactDecl(name.text, f.text, g.text, s.text, ab.text))
        b.at(("splitexact", name.text), name)
        for t in (f, g, s):
            b.at(("hom-ref", t.text), t)
        b.at(("sum-ref", ab.text), ab)
    elif kw == "rep":
        rep = sp.name("object name")
        sp.keyword("for")
        obj = sp.name("object name")
        sp.keyword("via")
        iso, iso_t = sp.hom_ref(allow_zero=False)
        sp.keyword("invvia")
        inv, inv_t = sp.hom_ref(allow_zero=False)
        corner_links, se_links = [], []
        while sp.at("link"):
            sp.keyword("link")
            kind = sp.name("'corner' or 'splitexact'")
            if kind.text == "corner":
                c = sp.name("corner name")
                sp.sym("->")
                c2 = sp.name("corner name")
                sp.keyword("stabiso")
                k, k_t = sp.hom_ref(allow_zero=False)
                corner_links.append(CornerLink(c.text, c2.text, k))
                b.at(("hom-ref", k), k_t)
            elif kind.text == "splitexact":
                s1 = sp.name("split-exact name")
                sp.sym("->")
                s2 = sp.name("split-exact name")
                sp.keyword("leg")
                leg, leg_t = sp.hom_ref(allow_zero=False)
                se_links.append(SplitExactLink(s1.text, s2.text, leg))
                b.at(("hom-ref", leg), leg_t)
            else:
                raise PresentationSyntaxError(
                    f"expected 'corner' or 'splitexact', found {kind.text!r}", kind.line, kind.column
                )
        sp.end()
        if any(r.object == obj.text for r in b.reps):
            raise DuplicateNameError(f"duplicate representative for {obj.text!r}", obj.line, obj.column)
        b.reps.append(
            RepresentativeDecl(obj.text, rep.text, iso, inv, tuple(corner_links), tuple(se_links))
        )
        b.at(("object-ref", rep.text), rep)
        b.at(("object-ref", obj.text), obj)
        b.at(("hom-ref", iso), iso_t)
        b.at(("hom-ref", inv), inv_t)


def _resolve(b: _Builder) -> Presentation:
    pos = b.pos

    def where(key):
        return pos.get(key, (None, None))

    def need_object(name):
        if name not in b.objects:
            raise UnresolvedReferenceError(name, "object", *where(("object-ref", name)))

    def need_hom(name, allow_implicit=True):
        if name in b.homs:
            return
        m = _ID_RE.match(name)
        if allow_implicit and m:
            need_object(m.group(1))
            return
        raise UnresolvedReferenceError(name, "hom", *where(("hom-ref", name)))

    for h in b.homs.values():
        need_object(h.dom)
        need_object(h.cod)

    def htype(name):
        if name in b.homs:
            return b.homs[name].dom, b.homs[name].cod
        o = _ID_RE.match(name).group(1)
        return o, o

    for k, a, c in b.stabs:
        need_object(k)
        need_object(a)
        need_hom(c, allow_implicit=False)
        prev = b.objects[k]["stab"]
        if prev is not None and prev != a:
            raise PresentationError(f"{k} is declared the stabilization of both {prev} and {a}")
        b.objects[k]["stab"] = a
        if htype(c) != (a, k):
            raise PresentationError(
                f"corner embedding {c} must run {a} -> {k}", *where(("hom-ref", c))
            )

    table = {}
    for (f, g), res in b.table.items():
        need_hom(f, False)
        need_hom(g, False)
        if res == "0":
            res = zero(b.homs[f].dom, b.homs[g].cod)
        else:
            need_hom(res)
        table[(f, g)] = res
    for (f, g), res in table.items():
        line, col = where(("compose", (f, g)))
        if b.homs[f].cod != b.homs[g].dom:
            raise PresentationError(f"compose {f} ; {g}: not composable", line, col)
        want = (b.homs[f].dom, b.homs[g].cod)
        if not _ZERO_RE.match(res) and htype(res) != want:
            raise PresentationError(
                f"compose {f} ; {g} = {res}: result must run {want[0]} -> {want[1]}", line, col
            )

    for d in b.sums:
        for o in (d.sum_object, d.left, d.right):
            need_object(o)
    sum_objects = [d.sum_object for d in b.sums]
    if len(set(sum_objects)) != len(sum_objects):
        raise DuplicateNameError("an object is declared as a sum more than once")

    for h in b.homotopies:
        need_hom(h.f0, False)
        need_hom(h.f1, False)
        if htype(h.f0) != htype(h.f1):
            raise PresentationError(
                f"homotopic homs {h.f0} and {h.f1} have different types", *where(("hom-ref", h.f0))
            )

    for d in b.splitexacts:
        for h in (d.f, d.g, d.s):
            need_hom(h, False)
        if d.sum not in sum_objects:
            raise UnresolvedReferenceError(d.sum, "sum object", *where(("sum-ref", d.sum)))
        sd = next(x for x in b.sums if x.sum_object == d.sum)
        a, dd = htype(d.f)
        d2, bb = htype(d.g)
        b2, d3 = htype(d.s)
        line, col = where(("splitexact", d.name))
        if not (dd == d2 == d3 and b2 == bb):
            raise PresentationError(f"split-exact {d.name}: f, g, s do not form A -> D -> B with s : B -> D", line, col)
        if (sd.left, sd.right) != (a, bb):
            raise PresentationError(
                f"split-exact {d.name}: sum {d.sum} is {sd.left} (+) {sd.right}, expected {a} (+) {bb}",
                line,
                col,
            )

    corners = tuple(CornerDecl(c, c) for _, _, c in b.stabs)
    corner_names = {c.name for c in corners}
    se_names = {d.name for d in b.splitexacts}
    for r in b.reps:
        need_object(r.object)
        need_object(r.rep)
        need_hom(r.iso)
        need_hom(r.iso_inv)
        for cl in r.corner_links:
            for c in (cl.corner, cl.target):
                if c not in corner_names:
                    raise UnresolvedReferenceError(c, "corner", *where(("object-ref", r.object)))
            need_hom(cl.stab_iso)
        for sl in r.splitexact_links:
            for s in (sl.splitexact, sl.target):
                if s not in se_names:
                    raise UnresolvedReferenceError(s, "split-exact", *where(("object-ref", r.object)))
            need_hom(sl.leg)

    objects = tuple(
        ObjectDecl(n, d["stab"], d["zero"]) for n, d in b.objects.items()
    )
    return Presentation(
        objects=objects,
        homs=tuple(b.homs.values()),
        table=tuple(table.items()),
        sums=tuple(b.sums),
        corners=corners,
        homotopies=tuple(b.homotopies),
        splitexacts=tuple(b.splitexacts),
        representatives=tuple(b.reps),
        group_tag=b.group_tag,
        positions=dict(pos),
    )


def parse_presentation(text: str) -> Presentation:
    """Parse DSL source into a Presentation.

    Raises PresentationSyntaxError, DuplicateNameError or
    UnresolvedReferenceError (all PresentationError) with line/column info.
    """
    b = _Builder()
    for stmt in _tokenize(text):
        _parse_statement(b, stmt)
    return _resolve(b)


def format_presentation(p: Presentation) -> str:
    """Print a presentation back to DSL source (parse-stable)."""
    out = []
    if p.group_tag:
        out.append(f"group {p.group_tag}")
    for o in p.objects:
        out.append(f"object {o.name}" + (" zero" if o.is_zero else ""))
    sum_homs = set()
    for d in p.sums:
        sum_homs.update((d.i_left, d.i_right, d.p_left, d.p_right))
    for h in p.homs:
        out.append(f"hom {h.name} : {h.dom} -> {h.cod}")
    for d in p.sums:
        out.append(
            f"sum {d.sum_object} = {d.left} (+) {d.right} "
            f"inj {d.i_left} {d.i_right} proj {d.p_left} {d.p_right}"
        )
    for c in p.corners:
        k = p.hom(c.emb).cod
        out.append(f"stab {k} of {p.object(k).stabilization_of} via {c.emb}")
    for h in p.homotopies:
        out.append(f"homotopic {h.f0} ~ {h.f1}")
    for d in p.splitexacts:
        out.append(f"splitexact {d.name} : {d.f} {d.g} {d.s} sum {d.sum}")
    for r in p.representatives:
        line = f"rep {r.rep} for {r.object} via {r.iso} invvia {r.iso_inv}"
        for cl in r.corner_links:
            line += f" link corner {cl.corner} -> {cl.target} stabiso {cl.stab_iso}"
        for sl in r.splitexact_links:
            line += f" link splitexact {sl.splitexact} -> {sl.target} leg {sl.leg}"
        out.append(line)
    for (f, g), res in p.table:
        out.append(f"compose {f} ; {g} = {'0' if _ZERO_RE.match(res) else res}")
    return "\n".join(out) + "\n"


# -- validation -------------------------------------------------------------


def _composable_pairs(p: Presentation, homs: list[str]) -> Iterator[tuple[str, str]]:
    by_dom: dict[str, list[str]] = {}
    for h in homs:
        by_dom.setdefault(p.hom_type(h)[0], []).append(h)
    for f in homs:
        for g in by_dom.get(p.hom_type(f)[1], ()):
            yield f, g


def _same(p, a, b) -> bool:
    return p.normalize_hom(a) == p.normalize_hom(b)


def validate_presentation(p: Presentation) -> ValidationReport:
    """Check every equational invariant the table can witness.

    Semantic assumptions (exactness, the corner formula, the homotopy map
    itself) are not checkable here and are not reported.
    """
    report = ValidationReport()
    gens = p.hom_names

    # totality
    for f, g in _composable_pairs(p, gens):
        if p.is_zero_hom(f) or p.is_zero_hom(g):
            continue
        if p.table_entry(f, g) is None:
            report.add("missing-composition", f"missing composition {f} ; {g}")

    # a declared entry through a zero object must be zero
    for (f, g), res in p.table:
        if p.is_zero_hom(f) or p.is_zero_hom(g):
            if not p.is_zero_hom(res):
                report.add("zero-object", f"{f} ; {g} = {res} factors through a zero object but is not 0")

    # associativity over all composable triples of generators
    for f, g in _composable_pairs(p, gens):
        fg = _try_compose(p, f, g)
        if fg is None:
            continue
        for h in gens:
            if p.hom_type(h)[0] != p.hom_type(g)[1]:
                continue
            gh = _try_compose(p, g, h)
            if gh is None:
                continue
            left = _try_compose(p, fg, h)
            right = _try_compose(p, f, gh)
            if left is None or right is None:
                continue  # already reported by the totality pass
            if left != right:
                report.add(
                    "associativity",
                    f"associativity fails for ({f}, {g}, {h}): ({f};{g});{h} = {left} "
                    f"but {f};({g};{h}) = {right}",
                )

    def fact(code, lhs, expected, label):
        try:
            got = fold_compose(p, lhs)
        except CompositionError as exc:
            report.add(code, f"{label}: {exc}")
            return
        if not _same(p, got, expected):
            report.add(code, f"{label} violated (table gives {got})")

    for d in p.sums:
        fact("sum-fact", [d.i_left, d.p_left], identity(d.left), f"sum fact {d.i_left};{d.p_left} = id({d.left}) for {d.sum_object}")
        fact("sum-fact", [d.i_right, d.p_right], identity(d.right), f"sum fact {d.i_right};{d.p_right} = id({d.right}) for {d.sum_object}")
        fact("sum-fact", [d.i_left, d.p_right], zero(d.left, d.right), f"sum fact {d.i_left};{d.p_right} = 0 for {d.sum_object}")
        fact("sum-fact", [d.i_right, d.p_left], zero(d.right, d.left), f"sum fact {d.i_right};{d.p_left} = 0 for {d.sum_object}")

    for d in p.splitexacts:
        a, dd = p.hom_type(d.f)
        bb = p.hom_type(d.g)[1]
        fact("split-exact-fact", [d.s, d.g], identity(bb), f"split-exact fact {d.s};{d.g} = id({bb}) for {d.name}")
        fact("split-exact-fact", [d.f, d.g], zero(a, bb), f"split-exact fact {d.f};{d.g} = 0 for {d.name}")

    for c in p.corners:
        dom, cod = p.hom_type(c.emb)
        if p.object(cod).stabilization_of != dom:
            report.add("corner", f"corner {c.name}: {cod} is not tagged as the stabilization of {dom}")

    for r in p.representatives:
        _validate_rep(p, r, report, fact)

    return report


def _validate_rep(p, r, report, fact):
    obj, rep = r.object, r.rep
    if p.hom_type(r.iso) != (obj, rep):
        report.add("rep-iso", f"representative iso {r.iso} must run {obj} -> {rep}")
        return
    if p.hom_type(r.iso_inv) != (rep, obj):
        report.add("rep-iso", f"representative inverse {r.iso_inv} must run {rep} -> {obj}")
        return
    if p.rep_of(rep) != rep:
        report.add("rep-iso", f"representative {rep} of {obj} has its own representative")
    fact("rep-iso", [r.iso, r.iso_inv], identity(obj), f"rep fact {r.iso};{r.iso_inv} = id({obj})")
    fact("rep-iso", [r.iso_inv, r.iso], identity(rep), f"rep fact {r.iso_inv};{r.iso} = id({rep})")

    for cl in r.corner_links:
        c, c2 = p.corner(cl.corner), p.corner(cl.target)
        a, k = p.hom_type(c.emb)
        a2, k2 = p.hom_type(c2.emb)
        if a != obj or a2 != rep:
            report.add("rep-square", f"corner link {cl.corner} -> {cl.target} does not run over {obj} -> {rep}")
            continue
        if p.hom_type(cl.stab_iso) != (k, k2):
            report.add("rep-square", f"stabilization iso {cl.stab_iso} must run {k} -> {k2}")
            continue
        try:
            left = fold_compose(p, [r.iso, c2.emb])
            right = fold_compose(p, [c.emb, cl.stab_iso])
        except CompositionError as exc:
            report.add("rep-square", f"corner square for {cl.corner}: {exc}")
            continue
        if not _same(p, left, right):
            report.add(
                "rep-square",
                f"corner square {r.iso};{c2.emb} = {c.emb};{cl.stab_iso} violated ({left} vs {right})",
            )

    for sl in r.splitexact_links:
        s, s2 = p.splitexact(sl.splitexact), p.splitexact(sl.target)
        a, d = p.hom_type(s.f)
        b = p.hom_type(s.g)[1]
        a2, d2 = p.hom_type(s2.f)
        b2 = p.hom_type(s2.g)[1]
        if d != obj or d2 != rep:
            report.add("rep-square", f"split-exact link {s.name} -> {s2.name} must run over {obj} -> {rep}")
            continue
        if p.rep_of(a) != a2 or p.rep_of(b) != b2:
            report.add("rep-square", f"split-exact link {s.name} -> {s2.name}: {a2}, {b2} are not the representatives of {a}, {b}")
            continue
        if p.hom_type(sl.leg) != (s2.sum, s.sum):
            report.add("rep-square", f"leg {sl.leg} must run {s2.sum} -> {s.sum}")
            continue
        pa, pa_inv = _rep_isos(p, a)
        pb, pb_inv = _rep_isos(p, b)
        sd, sd2 = p.sum_decl(s.sum), p.sum_decl(s2.sum)
        checks = [
            ([pa, s2.f], [s.f, r.iso], f"square {pa};{s2.f} = {s.f};{r.iso}"),
            ([pb, s2.s], [s.s, r.iso], f"square {pb};{s2.s} = {s.s};{r.iso}"),
            ([sd2.i_left, sl.leg], [pa_inv, sd.i_left], f"leg fact {sd2.i_left};{sl.leg} = {pa_inv};{sd.i_left}"),
            ([sd2.i_right, sl.leg], [pb_inv, sd.i_right], f"leg fact {sd2.i_right};{sl.leg} = {pb_inv};{sd.i_right}"),
        ]
        for lhs, rhs, label in checks:
            try:
                left, right = fold_compose(p, lhs), fold_compose(p, rhs)
            except CompositionError as exc:
                report.add("rep-square", f"{label} for {s.name}: {exc}")
                continue
            if not _same(p, left, right):
                report.add("rep-square", f"{label} violated for {s.name} ({left} vs {right})")


def _rep_isos(p: Presentation, obj: str) -> tuple[str, str]:
    r = p.representative(obj)
    if r is None:
        return identity(obj), identity(obj)
    return r.iso, r.iso_inv


def rep_isos(p: Presentation, obj: str) -> tuple[str, str]:
    """(pi, pi^-1) for an object; identities when it is its own representative."""
    return _rep_isos(p, obj)


def all_composable_pairs(p: Presentation) -> list[tuple[str, str]]:
    """Composable pairs of generator homs (declared homs and identities)."""
    return list(_composable_pairs(p, p.generator_homs()))

