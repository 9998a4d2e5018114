"""Elementary equivalences as context-closed rewrite rules, bounded search and proof traces.

Sums are always held in canonical form, so permutation of summands and the
zero-unit law never appear as steps. Every other equivalence is a ``Rule``
with two sides; a step replaces ``sign * y . side . z`` by the other side,
where ``y`` and ``z`` are optional context words.

A step whose source pattern is not present in the current sum is an
*expansion*: it first introduces ``+w - w`` for each pattern summand
(cancellation read backwards) and then rewrites the ``+w`` copies. Reversing a
plain step can produce one, so the checker accepts them when flagged.
"""

from __future__ import annotations

import json
import random
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .presentation import CompositionError, Presentation, all_composable_pairs, compose_lookup
from .terms import (
    FormalSum,
    SignedWord,
    TermSyntaxError,
    TermTypeError,
    Word,
    alphabet,
    canonical_sum_form,
    corner_inv,
    empty_sum,
    enumerate_words,
    from_coefficients,
    gen,
    make_word,
    parse_term,
    product,
    sigma_of,
    theta,
    word_sum,
)

__all__ = [
    "Rule",
    "RuleSet",
    "ContextApplication",
    "ProofStep",
    "ProofTrace",
    "TraceCheck",
    "Budget",
    "Equivalent",
    "Unknown",
    "PatternNotPresent",
    "instantiate_rules",
    "apply_rule",
    "moves",
    "decide_equiv",
    "check_trace",
    "trace_to_json",
    "trace_from_json",
    "random_walk",
]

FORWARD, REVERSE = "forward", "reverse"


class PatternNotPresent(ValueError):
    pass


@dataclass(frozen=True)
class Rule:
    id: str
    lhs: FormalSum
    rhs: FormalSum

    def __post_init__(self):
        if (self.lhs.dom, self.lhs.cod) != (self.rhs.dom, self.rhs.cod):
            raise TermTypeError(f"rule {self.id}: sides have different types")

    @property
    def dom(self) -> str:
        return self.lhs.dom

    @property
    def cod(self) -> str:
        return self.lhs.cod

    def side(self, direction: str) -> tuple[FormalSum, FormalSum]:
        """(source, target) for a direction."""
        return (self.lhs, self.rhs) if direction == FORWARD else (self.rhs, self.lhs)


def _r2_rule(w: Word) -> Rule:
    lhs = FormalSum((SignedWord(1, w), SignedWord(-1, w)), w.dom, w.cod)
    return Rule(f"R2({w.text})", lhs, empty_sum(w.dom, w.cod))


class RuleSet:
    """The instantiated rules of a presentation, in a fixed order.

    Cancellation (R2) is a schema over all words; ``get`` builds its
    instances on demand from ids like ``R2(pA;f)``.
    """

    def __init__(self, p: Presentation, rules: list[Rule]):
        self.presentation = p
        self.rules = list(rules)
        self._by_id = {r.id: r for r in self.rules}
        # anchor index: first letter of the first source summand -> (rule, direction)
        self._anchors: dict = {}
        for r in self.rules:
            for direction in (FORWARD, REVERSE):
                src, _ = r.side(direction)
                if src.terms:
                    first = src.terms[0].word.letters[0]
                    self._anchors.setdefault(first, []).append((r, direction))

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __contains__(self, rule_id: str) -> bool:
        return self.get(rule_id) is not None

    def ids(self) -> list[str]:
        return [r.id for r in self.rules]

    def get(self, rule_id: str) -> Rule | None:
        if rule_id in self._by_id:
            return self._by_id[rule_id]
        m = re.fullmatch(r"R2\((.+)\)", rule_id)
        if m:
            try:
                s = parse_term(self.presentation, m.group(1))
            except (TermSyntaxError, TermTypeError):
                return None
            if len(s.terms) == 1 and s.terms[0].sign == 1:
                return _r2_rule(s.terms[0].word)
        return None

    def anchored(self, letter) -> list:
        return self._anchors.get(letter, [])


def instantiate_rules(p: Presentation) -> RuleSet:
    """Instantiate every elementary equivalence of a valid presentation."""
    rules: list[Rule] = []

    def w(*letters):
        return make_word(p, letters)

    for d in p.sums:
        lhs = FormalSum(
            (
                SignedWord(1, w(gen(p, d.p_left), gen(p, d.i_left))),
                SignedWord(1, w(gen(p, d.p_right), gen(p, d.i_right))),
            ),
            d.sum_object,
            d.sum_object,
        )
        rhs = word_sum(w(gen(p, f"id({d.sum_object})")))
        rules.append(Rule(f"R4({d.sum_object})", lhs, rhs))

    for f, g in all_composable_pairs(p):
        try:
            h = compose_lookup(p, f, g)
        except CompositionError:
            continue
        lhs = word_sum(w(gen(p, f), gen(p, g)))
        if p.is_zero_hom(h):
            rhs = empty_sum(lhs.dom, lhs.cod)
        else:
            rhs = word_sum(w(gen(p, h)))
        rules.append(Rule(f"R5({f},{g})", lhs, rhs))

    synthetic = [corner_inv(p, c.name) for c in p.corners] + [theta(p, s.name) for s in p.splitexacts]
    for q in synthetic:
        rules.append(Rule(f"R6({q.text},left)", word_sum(w(gen(p, f"id({q.dom})"), q)), word_sum(w(q))))
        rules.append(Rule(f"R6({q.text},right)", word_sum(w(q, gen(p, f"id({q.cod})"))), word_sum(w(q))))

    for hd in p.homotopies:
        rules.append(Rule(f"R7({hd.f0},{hd.f1})", word_sum(w(gen(p, hd.f0))), word_sum(w(gen(p, hd.f1)))))

    for c in p.corners:
        a, k = p.hom_type(c.emb)
        ci = corner_inv(p, c.name)
        rules.append(Rule(f"R8({c.name},left)", word_sum(w(gen(p, c.emb), ci)), word_sum(w(gen(p, f"id({a})")))))
        rules.append(Rule(f"R8({c.name},right)", word_sum(w(ci, gen(p, c.emb))), word_sum(w(gen(p, f"id({k})")))))

    for s in p.splitexacts:
        th = word_sum(w(theta(p, s.name)))
        sigma = sigma_of(p, s.name)
        d = p.hom_type(s.g)[0]
        rules.append(Rule(f"R9({s.name},left)", product(sigma, th), word_sum(w(gen(p, f"id({s.sum})")))))
        rules.append(Rule(f"R9({s.name},right)", product(th, sigma), word_sum(w(gen(p, f"id({d})")))))

    return RuleSet(p, rules)


# -- applying rules ---------------------------------------------------------


@dataclass(frozen=True)
class ContextApplication:
    rule: Rule
    direction: str = FORWARD
    sign: int = 1
    y: Word | None = None
    z: Word | None = None

    def check_types(self, dom: str, cod: str) -> None:
        left = self.y.dom if self.y else self.rule.dom
        right = self.z.cod if self.z else self.rule.cod
        if self.y and self.y.cod != self.rule.dom:
            raise TermTypeError(f"left factor {self.y.text} ends at {self.y.cod}, rule {self.rule.id} starts at {self.rule.dom}")
        if self.z and self.z.dom != self.rule.cod:
            raise TermTypeError(f"right factor {self.z.text} starts at {self.z.dom}, rule {self.rule.id} ends at {self.rule.cod}")
        if (left, right) != (dom, cod):
            raise TermTypeError(f"context application has type {left} -> {right}, sum has {dom} -> {cod}")

    def _wrap(self, s: FormalSum) -> Counter:
        out: Counter = Counter()
        for t in s.terms:
            letters = t.word.letters
            if self.y:
                letters = self.y.letters + letters
            if self.z:
                letters = letters + self.z.letters
            wd = Word(letters, letters[0].dom, letters[-1].cod)
            out[wd] += self.sign * t.sign
        return out

    def patterns(self) -> tuple[Counter, Counter]:
        """(source, target) as signed multisets of whole words."""
        src, tgt = self.rule.side(self.direction)
        return self._wrap(src), self._wrap(tgt)

    def reversed(self) -> ContextApplication:
        return ContextApplication(self.rule, REVERSE if self.direction == FORWARD else FORWARD, self.sign, self.y, self.z)


def _present(state: Counter, pattern: Counter) -> bool:
    for w, c in pattern.items():
        have = state.get(w, 0)
        if c == 0:
            continue
        if have * c <= 0 or abs(have) < abs(c):
            return False
    return True


def _matched_indices(s: FormalSum, pattern: Counter) -> list[int]:
    need = {w: c for w, c in pattern.items() if c}
    out = []
    for i, t in enumerate(s.terms):
        c = need.get(t.word, 0)
        if c and (c > 0) == (t.sign > 0):
            out.append(i)
            need[t.word] = c - (1 if c > 0 else -1)
    return out


def _transition(s: FormalSum, app: ContextApplication) -> tuple[FormalSum, bool]:
    """(canonical after-state, whether the source pattern was present)."""
    src, tgt = app.patterns()
    coeffs = s.coefficients()
    present = _present(coeffs, src)
    coeffs.subtract(src)
    coeffs.update(tgt)
    return from_coefficients(coeffs, s.dom, s.cod), present


def apply_rule(s: FormalSum, app: ContextApplication, *, expansion: bool = False) -> FormalSum:
    """Replace the matched ``sign*y.source.z`` summands of canonical ``s`` by the target side.

    With ``expansion=True`` the source pattern need not be present.
    """
    app.check_types(s.dom, s.cod)
    after, present = _transition(canonical_sum_form(s), app)
    if not present and not expansion:
        raise PatternNotPresent(f"pattern of {app.rule.id} ({app.direction}) is not present in {s.text}")
    return after


# -- traces -----------------------------------------------------------------


@dataclass(frozen=True)
class ProofStep:
    rule_id: str
    direction: str
    sign: int
    y: Word | None
    z: Word | None
    matched: tuple[int, ...]
    expansion: bool
    after: FormalSum

    @classmethod
    def from_application(cls, before: FormalSum, app: ContextApplication) -> ProofStep:
        after, present = _transition(before, app)
        matched = tuple(_matched_indices(before, app.patterns()[0])) if present else ()
        return cls(app.rule.id, app.direction, app.sign, app.y, app.z, matched, not present, after)


@dataclass(frozen=True)
class ProofTrace:
    start: FormalSum
    end: FormalSum
    steps: tuple[ProofStep, ...] = ()

    def __len__(self):
        return len(self.steps)

    def states(self) -> list[FormalSum]:
        return [canonical_sum_form(self.start)] + [s.after for s in self.steps]

    def then(self, other: ProofTrace) -> ProofTrace:
        return ProofTrace(self.start, other.end, self.steps + other.steps)


def build_trace(start: FormalSum, apps: list[ContextApplication]) -> ProofTrace:
    """Run a list of applications from ``start`` and record each step."""
    state = canonical_sum_form(start)
    steps = []
    for app in apps:
        step = ProofStep.from_application(state, app)
        steps.append(step)
        state = step.after
    return ProofTrace(start, state, tuple(steps))


@dataclass(frozen=True)
class TraceCheck:
    ok: bool
    index: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_trace(p: Presentation, trace: ProofTrace, rules: RuleSet | None = None) -> TraceCheck:
    """Re-derive every step of ``trace`` independently of the search that produced it."""
    rules = rules if rules is not None else instantiate_rules(p)
    state = canonical_sum_form(trace.start)
    for i, step in enumerate(trace.steps):
        rule = rules.get(step.rule_id)
        if rule is None:
            return TraceCheck(False, i, f"unknown rule {step.rule_id}")
        if step.direction not in (FORWARD, REVERSE) or step.sign not in (1, -1):
            return TraceCheck(False, i, "malformed direction or sign")
        app = ContextApplication(rule, step.direction, step.sign, step.y, step.z)
        try:
            app.check_types(state.dom, state.cod)
        except TermTypeError as exc:
            return TraceCheck(False, i, str(exc))
        src, tgt = app.patterns()
        present = _present(state.coefficients(), src)
        if step.expansion:
            if step.matched:
                return TraceCheck(False, i, "expansion step with matched indices")
        else:
            if not present:
                return TraceCheck(False, i, "pattern not present and step not flagged as expansion")
            idx = list(step.matched)
            if len(set(idx)) != len(idx) or any(not 0 <= j < len(state.terms) for j in idx):
                return TraceCheck(False, i, "matched indices out of range")
            picked: Counter = Counter()
            for j in idx:
                t = state.terms[j]
                picked[t.word] += t.sign
            if +picked != +src or -picked != -src:
                return TraceCheck(False, i, "matched summands differ from the rule pattern")
        coeffs = state.coefficients()
        coeffs.subtract(src)
        coeffs.update(tgt)
        after = from_coefficients(coeffs, state.dom, state.cod)
        if after != step.after:
            return TraceCheck(False, i, f"recorded after-state {step.after.text} but rule gives {after.text}")
        state = after
    if state != canonical_sum_form(trace.end):
        return TraceCheck(False, len(trace.steps), "trace does not end at its declared end")
    return TraceCheck(True)


def trace_to_json(trace: ProofTrace) -> str:
    data = {
        "dom": trace.start.dom,
        "cod": trace.start.cod,
        "start": trace.start.text,
        "end": trace.end.text,
        "steps": [
            {
                "ruleId": s.rule_id,
                "direction": s.direction,
                "sign": s.sign,
                "y": s.y.text if s.y else None,
                "z": s.z.text if s.z else None,
                "matchedIndices": list(s.matched),
                "expansion": s.expansion,
                "after": s.after.text,
            }
            for s in trace.steps
        ],
    }
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _word(p, text):
    if text is None:
        return None
    s = parse_term(p, text)
    if len(s.terms) != 1 or s.terms[0].sign != 1:
        raise TermSyntaxError(f"context {text!r} is not a single word", 1)
    return s.terms[0].word


def trace_from_json(p: Presentation, text: str) -> ProofTrace:
    """Load a serialized trace; raises ValueError on malformed input."""
    data = json.loads(text)
    dom, cod = data["dom"], data["cod"]
    start = parse_term(p, data["start"], dom, cod)
    end = parse_term(p, data["end"], dom, cod)
    steps = []
    for s in data["steps"]:
        steps.append(
            ProofStep(
                s["ruleId"],
                s["direction"],
                int(s.get("sign", 1)),
                _word(p, s.get("y")),
                _word(p, s.get("z")),
                tuple(s.get("matchedIndices", ())),
                bool(s.get("expansion", False)),
                parse_term(p, s["after"], dom, cod),
            )
        )
    return ProofTrace(start, end, tuple(steps))


# -- search -----------------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    depth: int = 4
    max_states: int = 50_000
    max_context: int = 2
    expansions: bool = False


def _key(s: FormalSum) -> str:
    return s.text


def moves(
    rules: RuleSet, s: FormalSum, max_context: int = 2
) -> Iterator[tuple[ContextApplication, FormalSum]]:
    """Every plain rule application to canonical ``s`` with contexts up to ``max_context`` letters.

    Yields (application, after-state) in a deterministic order.
    """
    coeffs = s.coefficients()
    seen = set()
    for t in s.terms:
        letters = t.word.letters
        n = len(letters)
        for i in range(n):
            if i > max_context:
                break
            for rule, direction in rules.anchored(letters[i]):
                src, _ = rule.side(direction)
                anchor = src.terms[0]
                m = len(anchor.word.letters)
                if i + m > n or n - i - m > max_context:
                    continue
                if letters[i:i + m] != anchor.word.letters:
                    continue
                y = Word(letters[:i], letters[0].dom, letters[i - 1].cod) if i else None
                z = Word(letters[i + m:], letters[i + m].dom, letters[-1].cod) if i + m < n else None
                app = ContextApplication(rule, direction, t.sign * anchor.sign, y, z)
                if app in seen:
                    continue
                seen.add(app)
                src_p, tgt_p = app.patterns()
                if not _present(coeffs, src_p):
                    continue
                c = coeffs.copy()
                c.subtract(src_p)
                c.update(tgt_p)
                yield app, from_coefficients(c, s.dom, s.cod)


def _expansion_moves(rules, s, contexts):
    """Applications whose source is absent, with contexts drawn from ``contexts``."""
    for rule in rules:
        for direction in (FORWARD, REVERSE):
            ys = [None] if rule.dom == s.dom else []
            ys += contexts.get((s.dom, rule.dom), [])
            zs = [None] if rule.cod == s.cod else []
            zs += contexts.get((rule.cod, s.cod), [])
            for y in ys:
                for z in zs:
                    for sign in (1, -1):
                        app = ContextApplication(rule, direction, sign, y, z)
                        after, present = _transition(s, app)
                        if not present:
                            yield app, after


@dataclass
class Equivalent:
    trace: ProofTrace
    explored: int = 0

    equivalent = True

    def __str__(self):
        return "Equivalent"


@dataclass
class Unknown:
    reason: str
    explored: int = 0
    frontier: tuple[int, int] = (0, 0)

    equivalent = False

    def __str__(self):
        return "Unknown"


def decide_equiv(
    p: Presentation,
    s1: FormalSum,
    s2: FormalSum,
    budget: Budget | None = None,
    *,
    rules: RuleSet | None = None,
) -> Equivalent | Unknown:
    """Bounded bidirectional breadth-first search for a rewrite chain from s1 to s2.

    Only ever answers Equivalent with a checkable trace, or Unknown.
    """
    budget = budget or Budget()
    if (s1.dom, s1.cod) != (s2.dom, s2.cod):
        raise TermTypeError(f"cannot compare {s1.dom} -> {s1.cod} with {s2.dom} -> {s2.cod}")
    rules = rules if rules is not None else instantiate_rules(p)
    a, b = canonical_sum_form(s1), canonical_sum_form(s2)
    if _key(a) == _key(b):
        return Equivalent(ProofTrace(s1, s2, ()), 1)

    contexts = {}
    if budget.expansions:
        contexts = enumerate_words(p, budget.max_context, alphabet(p)) if budget.max_context else {}

    # visited[side][key] = (state, depth, parent_key, application)
    visited = ({_key(a): (a, 0, None, None)}, {_key(b): (b, 0, None, None)})
    frontier = ([a], [b])
    depth = [0, 0]

    def successors(state):
        yield from moves(rules, state, budget.max_context)
        if budget.expansions:
            yield from _expansion_moves(rules, state, contexts)

    while depth[0] + depth[1] < budget.depth:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        if not frontier[side]:
            side = 1 - side
            if not frontier[side]:
                break
        mine, other = visited[side], visited[1 - side]
        nxt = []
        for state in frontier[side]:
            skey = _key(state)
            for app, after in successors(state):
                k = _key(after)
                if k in mine:
                    continue
                mine[k] = (after, depth[side] + 1, skey, app)
                nxt.append(after)
                if len(visited[0]) + len(visited[1]) > budget.max_states:
                    return Unknown("state budget exhausted", len(visited[0]) + len(visited[1]),
                                   (len(frontier[0]), len(frontier[1])))
        depth[side] += 1
        frontier = (nxt, frontier[1]) if side == 0 else (frontier[0], nxt)
        meets = [k for k in (_key(s) for s in nxt) if k in other]
        if meets:
            best = min(meets, key=lambda k: (visited[0][k][1] + visited[1][k][1], k))
            trace = _assemble(visited, best, s1, s2)
            return Equivalent(trace, len(visited[0]) + len(visited[1]))
        if not frontier[0] and not frontier[1]:
            break
    return Unknown("depth budget exhausted", len(visited[0]) + len(visited[1]),
                   (len(frontier[0]), len(frontier[1])))


def _assemble(visited, meet, s1, s2) -> ProofTrace:
    fwd, bwd = visited
    apps = []
    k = meet
    while fwd[k][2] is not None:
        _, _, parent, app = fwd[k]
        apps.append(app)
        k = parent
    apps.reverse()
    k = meet
    while bwd[k][2] is not None:
        _, _, parent, app = bwd[k]
        apps.append(app.reversed())
        k = parent
    trace = build_trace(s1, apps)
    return ProofTrace(s1, s2, trace.steps)


def random_walk(
    rules: RuleSet, start: FormalSum, length: int, rng: random.Random, max_context: int = 2
) -> ProofTrace:
    """A random chain of up to ``length`` plain rule applications from ``start``."""
    state = canonical_sum_form(start)
    steps = []
    for _ in range(length):
        options = list(moves(rules, state, max_context))
        if not options:
            break
        app, _ = options[rng.randrange(len(options))]
        step = ProofStep.from_application(state, app)
        steps.append(step)
        state = step.after
    return ProofTrace(start, state, tuple(steps))
