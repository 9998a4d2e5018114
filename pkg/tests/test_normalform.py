import random

import pytest

from gkcalc.model import evaluate
from gkcalc import intmat
from gkcalc.normalform import (
    LinkageError,
    fuse_runs,
    is_normal_sum,
    normalize_sum,
    normalize_trace,
)
from gkcalc.presentation import parse_presentation
from gkcalc.rewrite import check_trace
from gkcalc.terms import canonical_sum_form, parse_term
from helpers import load, models, random_sum

P1, P2, P3, P4 = (load(n) for n in ("P1", "P2", "P3", "P4"))


def N(p, text, dom=None, cod=None):
    return normalize_sum(p, parse_term(p, text, dom, cod)).text


def W(p, text):
    return parse_term(p, text).terms[0].word


@pytest.mark.parametrize(
    "p, text, want",
    [
        (P3, "theta(S1)", "u;theta(S1p);id(AB)"),
        (P2, "inv(c)", "id(KA);inv(c);id(A)"),
        (P4, "inv(c)", "pk;inv(c2);pii"),
        (P1, "theta(S1)", "id(D);theta(S1);id(AB)"),
        (P1, "pA;f;theta(S1)", "pA_f;theta(S1);id(AB)"),
        (P1, "pB;s;g", "pB"),
        (P1, "f", "f"),
        (P1, "f;g", "0(A,B)"),
        (P1, "pB;s;g - pB", "0(AB,B)"),
    ],
)
def test_normal_forms(p, text, want):
    assert N(p, text) == want


def test_fuse_runs():
    assert fuse_runs(P1, W(P1, "pB;s;g")).text == "pB"
    assert fuse_runs(P1, W(P1, "f;g")) is None
    assert fuse_runs(P1, W(P1, "id(A);f")).text == "f"
    assert fuse_runs(P2, W(P2, "inv(c);c;inv(c)")).text == "id(KA);inv(c);c;inv(c);id(A)"


def test_missing_link_is_reported():
    p = parse_presentation(
        "object A\nobject A2\nobject KA\n"
        "hom pi : A -> A2\nhom pii : A2 -> A\nhom c : A -> KA\n"
        "stab KA of A via c\nrep A2 for A via pi invvia pii\n"
        "compose pi ; pii = id(A)\ncompose pii ; pi = id(A2)\n"
    )
    with pytest.raises(LinkageError, match="inv\\(c\\)"):
        normalize_sum(p, parse_term(p, "inv(c)"))


@pytest.mark.parametrize("name", ["P1", "P2", "P3", "P4", "PZ"])
def test_normalization_properties(name):
    p = load(name)
    rng = random.Random(11)
    objs = p.object_names
    ms = models(name, count=2)
    for _ in range(25):
        s = random_sum(p, rng, rng.choice(objs), rng.choice(objs), max_len=4)
        n = normalize_sum(p, s)
        assert is_normal_sum(p, n)
        assert normalize_sum(p, n) == n
        for m in ms:
            assert intmat.equal(evaluate(p, m, n), evaluate(p, m, s))
        tr = normalize_trace(p, s)
        assert canonical_sum_form(tr.start) == canonical_sum_form(s)
        assert tr.end == n
        assert check_trace(p, tr).ok
