"""Normal forms: push synthetic letters onto representatives, then fuse runs.

A normal word alternates single generator letters with synthetic letters,
``h1 q1 h2 ... q(k-1) hk``, and every synthetic letter runs between
representative objects. ``normalize_trace`` produces an explicit proof
trace from a sum to its normal form, step by elementary step.
"""

from __future__ import annotations

from typing import Sequence

from .presentation import Presentation, compose_lookup, identity, rep_isos
from .rewrite import (
    FORWARD,
    REVERSE,
    ContextApplication,
    ProofTrace,
    RuleSet,
    _transition,
    build_trace,
    instantiate_rules,
)
from .terms import (
    INV,
    FormalSum,
    Letter,
    SignedWord,
    Word,
    canonical_sum_form,
    corner_inv,
    gen,
    make_word,
    theta,
)

__all__ = [
    "LinkageError",
    "desyntheticize",
    "fuse_runs",
    "normalize_word",
    "normalize_sum",
    "is_normal_word",
    "is_normal_sum",
    "normalize_trace",
]


class LinkageError(ValueError):
    """A synthetic letter lies off the representative set and no link says where it goes."""


def _in_reps(p: Presentation, obj: str) -> bool:
    return p.rep_of(obj) == obj


def _on_reps(p: Presentation, q: Letter) -> bool:
    return _in_reps(p, q.dom) and _in_reps(p, q.cod)


def _corner_link(p: Presentation, q: Letter):
    a = p.hom_type(p.corner(q.name).emb)[0]
    r = p.representative(a)
    link = next((cl for cl in r.corner_links if cl.corner == q.name), None) if r else None
    if link is None:
        raise LinkageError(f"no corner link declared for {q.text} ({a} is not a representative)")
    return r, link


def _splitexact_link(p: Presentation, q: Letter):
    s = p.splitexact(q.name)
    d = p.hom_type(s.g)[0]
    r = p.representative(d)
    link = next((sl for sl in r.splitexact_links if sl.splitexact == q.name), None) if r else None
    if link is None:
        raise LinkageError(f"no split-exact link declared for {q.text} ({d} or {s.sum} is not a representative)")
    return r, link


def _substitute(p: Presentation, q: Letter) -> tuple[Letter, ...]:
    """Three letters equivalent to the synthetic letter ``q``."""
    if _on_reps(p, q):
        return gen(p, identity(q.dom)), q, gen(p, identity(q.cod))
    if q.kind == INV:
        r, link = _corner_link(p, q)
        return gen(p, link.stab_iso), corner_inv(p, link.target), gen(p, r.iso_inv)
    r, link = _splitexact_link(p, q)
    return gen(p, r.iso), theta(p, link.target), gen(p, link.leg)


def desyntheticize(p: Presentation, w: Word) -> Word:
    """Replace every synthetic letter by its conjugate through the representatives."""
    letters: list[Letter] = []
    for letter in w.letters:
        if letter.synthetic:
            sub = _substitute(p, letter)
            if not _on_reps(p, sub[1]):
                raise LinkageError(f"{sub[1].text} replacing {letter.text} does not run between representatives")
            letters.extend(sub)
        else:
            letters.append(letter)
    return make_word(p, letters)


def fuse_runs(p: Presentation, w: Word) -> Word | None:
    """Fold each run of generator letters into one; None if some run folds to zero.

    Words that would begin or end with a synthetic letter, or have two
    synthetic letters side by side, get identity letters padded in.
    """
    out: list[Letter] = []
    run: str | None = None
    for letter in w.letters:
        if letter.synthetic:
            if run is not None:
                out.append(gen(p, run))
                run = None
            elif not out or out[-1].synthetic:
                out.append(gen(p, identity(letter.dom)))
            out.append(letter)
        else:
            run = letter.name if run is None else compose_lookup(p, run, letter.name)
            if run.startswith("0("):
                return None
    if run is not None:
        out.append(gen(p, run))
    elif out[-1].synthetic:
        out.append(gen(p, identity(out[-1].cod)))
    return make_word(p, out)


def normalize_word(p: Presentation, w: Word) -> Word | None:
    return fuse_runs(p, desyntheticize(p, w))


def normalize_sum(p: Presentation, s: FormalSum) -> FormalSum:
    """Normalize every summand, drop the ones that vanish, and canonicalize."""
    terms = []
    for t in s.terms:
        nw = normalize_word(p, t.word)
        if nw is not None:
            terms.append(SignedWord(t.sign, nw))
    return canonical_sum_form(FormalSum(tuple(terms), s.dom, s.cod))


def is_normal_word(p: Presentation, w: Word) -> bool:
    letters = w.letters
    if len(letters) % 2 == 0:
        return False
    for i, letter in enumerate(letters):
        if letter.synthetic != (i % 2 == 1):
            return False
        if letter.synthetic and not _on_reps(p, letter):
            return False
    return True


def is_normal_sum(p: Presentation, s: FormalSum) -> bool:
    return all(is_normal_word(p, t.word) for t in s.terms)


# -- explicit derivations ---------------------------------------------------


class DerivationError(RuntimeError):
    """An internal derivation stepped on a pattern that was not there."""


class _Derivation:
    """Applications on a single-summand local state, checked as they go."""

    def __init__(self, p: Presentation, rules: RuleSet, start: FormalSum):
        self.p = p
        self.rules = rules
        self.state = canonical_sum_form(start)
        self.apps: list[ContextApplication] = []

    def word(self, letters: Sequence[Letter]) -> Word | None:
        return make_word(self.p, letters) if letters else None

    def step(self, rule_id: str, direction: str, y: Sequence[Letter] = (), z: Sequence[Letter] = (), sign: int = 1):
        rule = self.rules.get(rule_id)
        if rule is None:
            raise DerivationError(f"rule {rule_id} is not instantiated")
        app = ContextApplication(rule, direction, sign, self.word(y), self.word(z))
        app.check_types(self.state.dom, self.state.cod)
        after, present = _transition(self.state, app)
        if not present:
            raise DerivationError(f"{rule_id} ({direction}) does not match {self.state.text}")
        self.apps.append(app)
        self.state = after

    def fuse(self, x: str, y: str, left=(), right=()):
        self.step(f"R5({x},{y})", FORWARD, left, right)

    def split(self, x: str, y: str, left=(), right=()):
        self.step(f"R5({x},{y})", REVERSE, left, right)


def _single(w: Word) -> FormalSum:
    return FormalSum((SignedWord(1, w),), w.dom, w.cod)


def _corner_derivation(p: Presentation, rules: RuleSet, q: Letter) -> list[ContextApplication]:
    """inv(c)  ~>  stab ; inv(c2) ; pi^-1, via the corner square."""
    r, link = _corner_link(p, q)
    c, c2 = p.corner(q.name).emb, p.corner(link.target).emb
    pi, pii, stab = r.iso, r.iso_inv, link.stab_iso
    k = p.hom_type(c)[1]
    a2 = p.hom_type(c2)[0]
    q2 = corner_inv(p, link.target)
    G = lambda h: gen(p, h)  # noqa: E731
    d = _Derivation(p, rules, _single(make_word(p, [q])))
    d.step(f"R6({q.text},right)", REVERSE)
    d.split(pi, pii, [q])
    d.split(pi, identity(a2), [q], [G(pii)])
    d.step(f"R8({c2},left)", REVERSE, [q, G(pi)], [G(pii)])
    d.fuse(pi, c2, [q], [q2, G(pii)])
    d.split(c, stab, [q], [q2, G(pii)])
    d.step(f"R8({c},right)", FORWARD, (), [G(stab), q2, G(pii)])
    d.fuse(identity(k), stab, (), [q2, G(pii)])
    return d.apps


def _theta_derivation(p: Presentation, rules: RuleSet, q: Letter) -> list[ContextApplication]:
    """theta(S)  ~>  pi_D ; theta(S') ; leg, built backwards and then reversed."""
    r, link = _splitexact_link(p, q)
    s, s2 = p.splitexact(q.name), p.splitexact(link.target)
    sd, sd2 = p.sum_decl(s.sum), p.sum_decl(s2.sum)
    pd, leg = r.iso, link.leg
    d_obj = p.hom_type(s.g)[0]
    q2 = theta(p, link.target)
    G = lambda h: gen(p, h)  # noqa: E731

    d = _Derivation(p, rules, _single(make_word(p, [G(pd), q2, G(leg)])))
    d.split(identity(d_obj), pd, (), [q2, G(leg)])
    d.step(f"R9({s.name},right)", REVERSE, (), [G(pd), q2, G(leg)])

    legs = [
        (sd.p_left, s.f, s2.f, sd.left, sd2.i_left, sd2.p_left, sd2.p_right, s2.s, sd.i_left),
        (sd.p_right, s.s, s2.s, sd.right, sd2.i_right, sd2.p_right, sd2.p_left, s2.f, sd.i_right),
    ]
    for proj, x, x2, obj, inj2, proj2, other_proj2, other_x2, inj in legs:
        pi, pii = rep_isos(p, obj)
        obj2 = p.hom_type(pi)[1]
        # theta;proj;x;pd;theta';leg  ->  theta;proj;pi;x2;theta';leg
        d.fuse(x, pd, [q, G(proj)], [q2, G(leg)])
        d.split(pi, x2, [q, G(proj)], [q2, G(leg)])
        head = [q, G(proj), G(pi)]
        # x2 -> inj2;proj2;x2, and add the vanishing partner inj2;other_proj2;other_x2
        d.split(identity(obj2), x2, head, [q2, G(leg)])
        d.split(inj2, proj2, head, [G(x2), q2, G(leg)])
        d.split(inj2, other_proj2, head, [G(other_x2), q2, G(leg)])
        d.step(f"R9({s2.name},left)", FORWARD, head + [G(inj2)], [G(leg)])
        d.fuse(inj2, identity(s2.sum), head, [G(leg)])
        d.fuse(inj2, leg, head)
        d.split(pii, inj, [q, G(proj), G(pi)])
        d.fuse(pi, pii, [q, G(proj)], [G(inj)])
        d.fuse(proj, identity(obj), [q], [G(inj)])
    d.step(f"R4({s.sum})", FORWARD, [q])
    d.step(f"R6({q.text},right)", FORWARD)
    return [a.reversed() for a in reversed(d.apps)]


def _identity_derivation(p: Presentation, rules: RuleSet, q: Letter) -> list[ContextApplication]:
    d = _Derivation(p, rules, _single(make_word(p, [q])))
    d.step(f"R6({q.text},left)", REVERSE)
    d.step(f"R6({q.text},right)", REVERSE, [gen(p, identity(q.dom))])
    return d.apps


def _letter_derivation(p, rules, q: Letter) -> list[ContextApplication]:
    if _on_reps(p, q):
        return _identity_derivation(p, rules, q)
    if q.kind == INV:
        return _corner_derivation(p, rules, q)
    return _theta_derivation(p, rules, q)


def _lift(p: Presentation, app: ContextApplication, prefix, suffix, sign: int) -> ContextApplication:
    y = tuple(prefix) + (app.y.letters if app.y else ())
    z = (app.z.letters if app.z else ()) + tuple(suffix)
    return ContextApplication(
        app.rule,
        app.direction,
        sign * app.sign,
        make_word(p, y) if y else None,
        make_word(p, z) if z else None,
    )


def _word_apps(p: Presentation, rules: RuleSet, sign: int, w: Word) -> list[ContextApplication]:
    """Applications taking the summand ``sign * w`` to its normal form."""
    apps: list[ContextApplication] = []
    letters = list(w.letters)
    i = 0
    while i < len(letters):
        q = letters[i]
        if q.synthetic:
            for app in _letter_derivation(p, rules, q):
                apps.append(_lift(p, app, letters[:i], letters[i + 1 :], sign))
            letters[i : i + 1] = list(_substitute(p, q))
            i += 3
        else:
            i += 1
    i = 0
    while i < len(letters):
        if letters[i].synthetic or i + 1 >= len(letters) or letters[i + 1].synthetic:
            i += 1
            continue
        x, y = letters[i].name, letters[i + 1].name
        rule = rules.get(f"R5({x},{y})")
        apps.append(_lift(p, ContextApplication(rule, FORWARD), letters[:i], letters[i + 2 :], sign))
        h = compose_lookup(p, x, y)
        if h.startswith("0("):
            return apps
        letters[i : i + 2] = [gen(p, h)]
    return apps


def normalize_trace(p: Presentation, s: FormalSum, rules: RuleSet | None = None) -> ProofTrace:
    """A checkable trace from ``s`` to ``normalize_sum(p, s)``."""
    rules = rules if rules is not None else instantiate_rules(p)
    start = canonical_sum_form(s)
    apps: list[ContextApplication] = []
    for t in start.terms:
        apps.extend(_word_apps(p, rules, t.sign, t.word))
    return build_trace(s, apps)
