"""Letters, typed words and signed formal sums, plus the term text syntax.

Words are read left to right as paths: ``f;g`` runs ``A -f-> D -g-> B`` and
stands for ``g o f``. A formal sum with no terms is the zero morphism.
Nothing here simplifies semantically except ``canonical_sum_form``, which
only reorders summands and cancels ``+w -w`` pairs.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .presentation import Presentation, identity

__all__ = [
    "Letter",
    "Word",
    "SignedWord",
    "FormalSum",
    "TermTypeError",
    "TermSyntaxError",
    "gen",
    "corner_inv",
    "theta",
    "alphabet",
    "make_word",
    "embed_hom",
    "concat",
    "product",
    "add",
    "negate",
    "sigma_of",
    "canonical_sum_form",
    "empty_sum",
    "word_sum",
    "parse_term",
    "format_term",
    "enumerate_words",
]

GEN, INV, THETA = "gen", "inv", "theta"


class TermTypeError(ValueError):
    """Two adjacent pieces of a term do not compose, or sum types differ."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        super().__init__(message)


class TermSyntaxError(ValueError):
    def __init__(self, message: str, column: int):
        self.column = column
        super().__init__(f"column {column}: {message}")


@dataclass(frozen=True, order=True)
class Letter:
    kind: str
    name: str
    dom: str
    cod: str

    @property
    def text(self) -> str:
        if self.kind == GEN:
            return self.name
        return f"{self.kind}({self.name})"

    @property
    def synthetic(self) -> bool:
        return self.kind != GEN

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...]
    dom: str
    cod: str

    def __post_init__(self):
        if not self.letters:
            raise TermTypeError("a word needs at least one letter")

    @property
    def text(self) -> str:
        return ";".join(l.text for l in self.letters)

    @property
    def key(self) -> tuple:
        return (len(self.letters), tuple(l.text for l in self.letters))

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.text


@dataclass(frozen=True)
class SignedWord:
    sign: int
    word: Word

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + self.word.text


@dataclass(frozen=True)
class FormalSum:
    terms: tuple[SignedWord, ...]
    dom: str
    cod: str

    def __post_init__(self):
        for t in self.terms:
            if (t.word.dom, t.word.cod) != (self.dom, self.cod):
                raise TermTypeError(
                    f"summand {t.word.text} : {t.word.dom} -> {t.word.cod} "
                    f"in a sum of type {self.dom} -> {self.cod}"
                )

    def coefficients(self) -> Counter:
        c: Counter = Counter()
        for t in self.terms:
            c[t.word] += t.sign
        return c

    @property
    def text(self) -> str:
        return format_term(self)

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return self.text


# -- letters ----------------------------------------------------------------


def gen(p: Presentation, hom: str) -> Letter:
    dom, cod = p.hom_type(hom)
    return Letter(GEN, hom, dom, cod)


def corner_inv(p: Presentation, corner: str) -> Letter:
    c = p.corner(corner)
    dom, cod = p.hom_type(c.emb)
    return Letter(INV, corner, cod, dom)


def theta(p: Presentation, name: str) -> Letter:
    s = p.splitexact(name)
    return Letter(THETA, name, p.hom_type(s.g)[0], s.sum)


def alphabet(p: Presentation) -> list[Letter]:
    """Every letter over p: generators, identities, then synthetic letters."""
    letters = [gen(p, h) for h in p.generator_homs()]
    letters += [corner_inv(p, c.name) for c in p.corners]
    letters += [theta(p, s.name) for s in p.splitexacts]
    return letters


# -- words and sums ---------------------------------------------------------


def make_word(p: Presentation | None, letters: Sequence[Letter]) -> Word:
    if not letters:
        raise TermTypeError("a word needs at least one letter")
    for i in range(1, len(letters)):
        if letters[i - 1].cod != letters[i].dom:
            raise TermTypeError(
                f"type mismatch at position {i + 1}: {letters[i - 1].text} ends at "
                f"{letters[i - 1].cod} but {letters[i].text} starts at {letters[i].dom}",
                position=i + 1,
            )
    return Word(tuple(letters), letters[0].dom, letters[-1].cod)


def concat(w1: Word, w2: Word) -> Word:
    if w1.cod != w2.dom:
        raise TermTypeError(f"cannot concatenate {w1.text} : ..-> {w1.cod} with {w2.text} : {w2.dom} ->..")
    return Word(w1.letters + w2.letters, w1.dom, w2.cod)


def empty_sum(dom: str, cod: str) -> FormalSum:
    return FormalSum((), dom, cod)


def word_sum(w: Word, sign: int = 1) -> FormalSum:
    return FormalSum((SignedWord(sign, w),), w.dom, w.cod)


def embed_hom(p: Presentation, hom: str) -> FormalSum:
    """The functor F on a hom: a single letter, or the empty sum for a literal zero."""
    dom, cod = p.hom_type(hom)
    if hom.startswith("0("):
        return empty_sum(dom, cod)
    return word_sum(Word((gen(p, hom),), dom, cod))


def product(s1: FormalSum, s2: FormalSum) -> FormalSum:
    """Distributive product; terms enumerated as f1g1 .. fng1 f1g2 .. fngm."""
    if s1.cod != s2.dom:
        raise TermTypeError(f"cannot multiply {s1.dom} -> {s1.cod} by {s2.dom} -> {s2.cod}")
    terms = tuple(
        SignedWord(a.sign * b.sign, concat(a.word, b.word)) for b in s2.terms for a in s1.terms
    )
    return FormalSum(terms, s1.dom, s2.cod)


def add(s1: FormalSum, s2: FormalSum) -> FormalSum:
    if (s1.dom, s1.cod) != (s2.dom, s2.cod):
        raise TermTypeError(f"cannot add {s1.dom} -> {s1.cod} and {s2.dom} -> {s2.cod}")
    return FormalSum(s1.terms + s2.terms, s1.dom, s1.cod)


def negate(s: FormalSum) -> FormalSum:
    return FormalSum(tuple(SignedWord(-t.sign, t.word) for t in s.terms), s.dom, s.cod)


def sigma_of(p: Presentation, name: str) -> FormalSum:
    """sigma = pA;f + pB;s : A(+)B -> D for a split-exact sequence."""
    try:
        s = p.splitexact(name)
    except KeyError:
        raise KeyError(f"unknown split-exact sequence {name!r}") from None
    sd = p.sum_decl(s.sum)
    t1 = make_word(p, [gen(p, sd.p_left), gen(p, s.f)])
    t2 = make_word(p, [gen(p, sd.p_right), gen(p, s.s)])
    return FormalSum((SignedWord(1, t1), SignedWord(1, t2)), s.sum, t1.cod)


def from_coefficients(coeffs: Mapping[Word, int], dom: str, cod: str) -> FormalSum:
    terms = []
    for w in sorted((w for w, c in coeffs.items() if c), key=lambda w: w.key):
        c = coeffs[w]
        terms.extend([SignedWord(1 if c > 0 else -1, w)] * abs(c))
    return FormalSum(tuple(terms), dom, cod)


def canonical_sum_form(s: FormalSum) -> FormalSum:
    """Sort summands by (length, letters) and cancel opposite pairs."""
    return from_coefficients(s.coefficients(), s.dom, s.cod)


def is_canonical(s: FormalSum) -> bool:
    return canonical_sum_form(s) == s


# -- text syntax ------------------------------------------------------------


def format_term(s: FormalSum) -> str:
    if not s.terms:
        return f"0({s.dom},{s.cod})"
    parts = []
    for i, t in enumerate(s.terms):
        if i == 0:
            parts.append(("-" if t.sign < 0 else "") + t.word.text)
        else:
            parts.append(("- " if t.sign < 0 else "+ ") + t.word.text)
    return " ".join(parts)


_TERM_TOKEN = re.compile(r"\s*(?:(?P<call>(?:id|inv|theta|0)\s*\([^()]*\))|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[;+-]))")
_CALL = re.compile(r"^(id|inv|theta|0)\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:,\s*([A-Za-z_][A-Za-z0-9_]*)\s*)?\)$")


def _atom(p: Presentation, text: str, col: int) -> Letter | tuple[str, str]:
    """A letter, or the (dom, cod) of a zero atom."""
    m = _CALL.match(text)
    if m:
        kind, a, b = m.groups()
        if kind == "0":
            if b is None or not (p.has_object(a) and p.has_object(b)):
                raise TermSyntaxError(f"bad zero atom {text!r}", col)
            return (a, b)
        if b is not None:
            raise TermSyntaxError(f"{kind} takes one argument", col)
        try:
            if kind == "id":
                if not p.has_object(a):
                    raise KeyError(a)
                return gen(p, identity(a))
            if kind == "inv":
                return corner_inv(p, a)
            return theta(p, a)
        except KeyError:
            raise TermSyntaxError(f"unknown reference in {text!r}", col) from None
    try:
        return gen(p, text)
    except KeyError:
        raise TermSyntaxError(f"unknown hom {text!r}", col) from None


def parse_term(p: Presentation, text: str, dom: str | None = None, cod: str | None = None) -> FormalSum:
    """Parse ``pA;f;theta(S1) + pB;s;theta(S1)``-style text into a FormalSum.

    A word containing a ``0(X,Y)`` atom is typed normally and then dropped.
    The type comes from the summands unless given explicitly; a bare ``0``
    is the empty sum and needs an explicit type.
    """
    if text.strip() == "0":
        if dom is None or cod is None:
            raise TermSyntaxError("a bare 0 needs an explicit domain and codomain", text.index("0") + 1)
        for obj in (dom, cod):
            if not p.has_object(obj):
                raise TermSyntaxError(f"unknown object {obj!r}", text.index("0") + 1)
        return empty_sum(dom, cod)
    pos = 0
    toks = []
    text_len = len(text.rstrip())
    while pos < text_len:
        m = _TERM_TOKEN.match(text, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected {text[pos:pos + 10]!r}", pos + 1)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    if not toks:
        raise TermSyntaxError("empty term", 1)

    summands: list[tuple[int, list]] = []
    sign = 1
    expect_atom = True
    current: list = []
    for kind, val, col in toks:
        if kind == "op" and val in "+-":
            if current:
                summands.append((sign, current))
                current = []
            elif summands or sign != 1:
                raise TermSyntaxError(f"unexpected {val!r}", col)
            sign = 1 if val == "+" else -1
            expect_atom = True
        elif kind == "op":
            if expect_atom:
                raise TermSyntaxError("unexpected ';'", col)
            expect_atom = True
        else:
            if not expect_atom:
                raise TermSyntaxError(f"expected ';' or a sign before {val!r}", col)
            current.append((_atom(p, val, col), col))
            expect_atom = False
    if expect_atom:
        raise TermSyntaxError("term ends unexpectedly", len(text) + 1)
    summands.append((sign, current))

    terms = []
    for sign, atoms in summands:
        types = [a if isinstance(a, tuple) else (a.dom, a.cod) for a, _ in atoms]
        for i in range(1, len(types)):
            if types[i - 1][1] != types[i][0]:
                raise TermTypeError(
                    f"type mismatch at column {atoms[i][1]}: {types[i - 1][1]} then {types[i][0]}",
                    position=i + 1,
                )
        t_dom, t_cod = types[0][0], types[-1][1]
        if dom is None:
            dom, cod = t_dom, t_cod
        elif (t_dom, t_cod) != (dom, cod):
            raise TermTypeError(f"summand of type {t_dom} -> {t_cod} in a sum of type {dom} -> {cod}")
        if any(isinstance(a, tuple) for a, _ in atoms):
            continue
        terms.append(SignedWord(sign, Word(tuple(a for a, _ in atoms), t_dom, t_cod)))
    return FormalSum(tuple(terms), dom, cod)


def enumerate_words(
    p: Presentation, max_len: int, letters: Iterable[Letter] | None = None
) -> dict[tuple[str, str], list[Word]]:
    """All typed words of length 1..max_len, grouped by (dom, cod)."""
    letters = list(letters) if letters is not None else alphabet(p)
    by_dom: dict[str, list[Letter]] = {}
    for l in letters:
        by_dom.setdefault(l.dom, []).append(l)
    out: dict[tuple[str, str], list[Word]] = {}
    layer = [Word((l,), l.dom, l.cod) for l in letters]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            out.setdefault((w.dom, w.cod), []).append(w)
            for l in by_dom.get(w.cod, ()):
                nxt.append(Word(w.letters + (l,), w.dom, l.cod))
        layer = nxt
    return out
