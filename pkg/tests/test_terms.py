import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gkcalc.terms import (
    FormalSum,
    SignedWord,
    TermSyntaxError,
    TermTypeError,
    add,
    canonical_sum_form,
    concat,
    embed_hom,
    empty_sum,
    format_term,
    gen,
    is_canonical,
    make_word,
    negate,
    parse_term,
    product,
    sigma_of,
    theta,
    word_sum,
)
from helpers import load, words_by_type_cached

P1 = load("P1")


def W(*names):
    return make_word(P1, [theta(P1, n[6:-1]) if n.startswith("theta(") else gen(P1, n) for n in names])


def S(*pairs):
    """S((+1, word), ...) as a FormalSum."""
    w0 = pairs[0][1]
    return FormalSum(tuple(SignedWord(sg, w) for sg, w in pairs), w0.dom, w0.cod)


# -- examples ---------------------------------------------------------------


def test_make_word_types():
    w = W("f", "g")
    assert (w.dom, w.cod) == ("A", "B")
    w = W("pA", "f", "theta(S1)")
    assert (w.dom, w.cod) == ("AB", "AB")


def test_make_word_mismatch_position():
    with pytest.raises(TermTypeError) as exc:
        W("g", "f")
    assert exc.value.position == 2
    assert "B" in str(exc.value) and "A" in str(exc.value)


def test_embed_hom():
    assert embed_hom(P1, "f") == word_sum(W("f"))
    z = embed_hom(P1, "0(A,B)")
    assert z.terms == () and (z.dom, z.cod) == ("A", "B")
    assert embed_hom(P1, "id(A)") == word_sum(W("id(A)"))
    with pytest.raises(KeyError):
        embed_hom(P1, "nope")


def test_concat():
    assert concat(W("f"), W("g")) == W("f", "g")
    assert concat(W("f"), W("id(D)")).text == "f;id(D)"
    assert concat(W("pA", "f"), W("theta(S1)")) == W("pA", "f", "theta(S1)")
    with pytest.raises(TermTypeError):
        concat(W("g"), W("f"))


def test_product_examples():
    f, g = W("f"), W("g")
    fg = W("f", "g")
    assert product(S((1, f), (-1, f)), S((1, g))) == S((1, fg), (-1, fg))
    assert product(empty_sum("A", "D"), S((1, g))) == empty_sum("A", "B")
    assert product(S((1, f)), S((1, g), (-1, g))) == S((1, fg), (-1, fg))


def test_product_enumeration_order():
    a = S((1, W("pA")), (-1, W("pA", "iA", "pA")))
    b = S((1, W("f")), (1, W("id(A)", "f")))
    got = [t.word.text for t in product(a, b).terms]
    assert got == ["pA;f", "pA;iA;pA;f", "pA;id(A);f", "pA;iA;pA;id(A);f"]


def test_add_and_negate():
    f = S((1, W("f")))
    assert add(f, empty_sum("A", "D")) == f
    assert add(f, negate(f)).text == "f - f"
    assert negate(S((1, W("f")), (-1, W("f", "g_s")))).text == "-f + f;g_s"
    with pytest.raises(TermTypeError):
        add(f, S((1, W("g"))))


def test_sigma_of():
    s = sigma_of(P1, "S1")
    assert s.text == "pA;f + pB;s"
    assert (s.dom, s.cod) == ("AB", "D")
    with pytest.raises(KeyError):
        sigma_of(P1, "S9")


def test_canonical_examples():
    f = W("f")
    assert canonical_sum_form(S((1, f), (-1, f))).terms == ()
    unsorted = S((-1, W("f", "g_s")), (1, W("f")))
    assert canonical_sum_form(unsorted).text == "f - f;g_s"
    assert canonical_sum_form(S((1, f), (1, f), (-1, f))) == S((1, f))


def test_parse_and_format():
    s = parse_term(P1, "pA;f;theta(S1) + pB;s;theta(S1)")
    assert s == product(sigma_of(P1, "S1"), word_sum(W("theta(S1)")))
    assert parse_term(P1, format_term(s)) == s
    assert parse_term(P1, "0(A,B)").terms == ()
    assert format_term(empty_sum("A", "B")) == "0(A,B)"
    assert parse_term(P1, "0", "A", "B") == empty_sum("A", "B")
    assert parse_term(P1, "f;g + 0(A,D);g") == S((1, W("f", "g")))


@pytest.mark.parametrize("text", ["f;", "f g", "+", "f;;g", "theta(S9)", "inv(f)", "q", "0"])
def test_parse_errors(text):
    with pytest.raises((TermSyntaxError, TermTypeError)):
        parse_term(P1, text)


def test_parse_type_error():
    with pytest.raises(TermTypeError):
        parse_term(P1, "f + g")


# -- properties -------------------------------------------------------------

WORDS = words_by_type_cached(P1, 3)
TYPES = sorted(WORDS)


@st.composite
def sums(draw, dom, cod, max_terms=4):
    pool = WORDS.get((dom, cod), [])
    if not pool:
        return empty_sum(dom, cod)
    terms = draw(st.lists(st.tuples(st.sampled_from((1, -1)), st.sampled_from(pool)), max_size=max_terms))
    return FormalSum(tuple(SignedWord(sg, w) for sg, w in terms), dom, cod)


@st.composite
def triples(draw):
    objs = P1.object_names
    a, b, c, d = (draw(st.sampled_from(objs)) for _ in range(4))
    return draw(sums(a, b)), draw(sums(b, c)), draw(sums(c, d))


@settings(max_examples=150, deadline=None)
@given(triples())
def test_product_associative_and_bilinear(t):
    x, y, z = t
    C = canonical_sum_form
    assert C(product(product(x, y), z)) == C(product(x, product(y, z)))
    assert C(product(add(x, x), y)) == C(add(product(x, y), product(x, y)))
    assert C(product(x, add(y, negate(y)))).terms == ()


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(TYPES).flatmap(lambda t: sums(*t, max_terms=6)))
def test_canonical_form_properties(s):
    c = canonical_sum_form(s)
    assert canonical_sum_form(c) == c
    assert is_canonical(c)
    assert dict(c.coefficients()) == {w: n for w, n in s.coefficients().items() if n}
    assert negate(negate(s)) == s
    assert canonical_sum_form(add(s, negate(s))).terms == ()
    assert parse_term(P1, format_term(s), s.dom, s.cod) == s
