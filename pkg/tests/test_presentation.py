import itertools

import pytest

from gkcalc.presentation import (
    CompositionError,
    DuplicateNameError,
    PresentationError,
    PresentationSyntaxError,
    UnresolvedReferenceError,
    compose_lookup,
    format_presentation,
    parse_presentation,
    validate_presentation,
)
from helpers import FIXTURES, load

FIXTURE_NAMES = ["P1", "P2", "P3", "P4", "PZ"]


def test_smallest_program():
    p = parse_presentation("object A")
    assert p.object_names == ["A"]
    assert p.hom_names == []
    assert p.hom_type("id(A)") == ("A", "A")
    assert p.hom_type("0(A,A)") == ("A", "A")
    assert compose_lookup(p, "id(A)", "id(A)") == "id(A)"


def test_p1_structure():
    p = load("P1")
    assert p.object_names == ["A", "B", "D", "AB"]
    for h in ("f", "g", "s", "iA", "pA", "iB", "pB"):
        assert h in p.hom_names
    assert p.hom_type("f") == ("A", "D")
    assert p.hom_type("g") == ("D", "B")
    assert p.hom_type("s") == ("B", "D")
    (sd,) = p.sums
    assert (sd.sum_object, sd.left, sd.right) == ("AB", "A", "B")
    assert (sd.i_left, sd.i_right, sd.p_left, sd.p_right) == ("iA", "iB", "pA", "pB")
    (se,) = p.splitexacts
    assert (se.name, se.f, se.g, se.s, se.sum) == ("S1", "f", "g", "s", "AB")


def test_unresolved_reference_names_the_object():
    with pytest.raises(UnresolvedReferenceError) as exc:
        parse_presentation("object A\nhom f : A -> X")
    assert exc.value.name == "X"
    assert exc.value.line == 2


def test_duplicate_name():
    with pytest.raises(DuplicateNameError) as exc:
        parse_presentation("object A\nobject A")
    assert (exc.value.line, exc.value.column) == (2, 8)


@pytest.mark.parametrize(
    "src, line, column",
    [
        ("object A\nhom f A -> A", 2, 7),
        ("object A\nfoo", 2, 1),
        ("object A\nhom f : A -> A\ncompose f ; f =", 3, None),
    ],
)
def test_syntax_errors_carry_positions(src, line, column):
    with pytest.raises(PresentationSyntaxError) as exc:
        parse_presentation(src)
    assert exc.value.line == line
    if column is not None:
        assert exc.value.column == column


def test_comments_and_semicolons():
    p = parse_presentation("# header\nobject A ;\nhom f : A -> A  # trailing\ncompose f ; f = f;\n")
    assert p.table_entry("f", "f") == "f"
    assert validate_presentation(p).ok


def test_group_tag_is_carried():
    p = parse_presentation("group M\nobject A")
    assert p.group_tag == "M"
    assert parse_presentation(format_presentation(p)).group_tag == "M"


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixtures_are_valid(name):
    report = validate_presentation(load(name))
    assert report.ok, str(report)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_round_trip(name):
    p = load(name)
    again = parse_presentation(format_presentation(p))
    assert again == p
    assert format_presentation(again) == format_presentation(p)


def test_split_exact_fact_violation():
    src = (FIXTURES / "P1.gk").read_text().replace("compose s ; g = id(B)", "compose s ; g = 0")
    report = validate_presentation(parse_presentation(src))
    assert "split-exact-fact" in report.codes()
    assert any("split-exact fact s;g = id(B)" in v.message and "S1" in v.message for v in report)


def test_missing_composition():
    src = """
    object A
    object B
    object C
    hom f : A -> B
    hom g : B -> C
    hom h : C -> C
    hom fg : A -> C
    compose f ; g = fg
    compose g ; h = g
    compose h ; h = h
    """
    report = validate_presentation(parse_presentation(src))
    assert report.codes() == {"missing-composition"}
    assert [v.message for v in report] == ["missing composition fg ; h"]


def test_associativity_violation():
    report = validate_presentation(parse_presentation((FIXTURES / "broken.gk").read_text()))
    assert report.codes() == {"associativity"}


def test_rep_square_violation():
    src = (FIXTURES / "P4.gk").read_text().replace("compose c ; pk = h", "compose c ; pk = 0")
    src = src.replace("compose q ; pk = c2", "compose q ; pk = 0")
    assert "rep-square" in validate_presentation(parse_presentation(src)).codes()


def test_corner_must_embed_into_its_stabilization():
    src = "object A\nobject K\nhom c : A -> K\nhom d : K -> A\nstab K of A via d\n"
    with pytest.raises(PresentationError, match="must run A -> K") as exc:
        parse_presentation(src)
    assert exc.value.line == 5


def test_compose_lookup_examples():
    p = load("P1")
    assert compose_lookup(p, "s", "g") == "id(B)"
    assert compose_lookup(p, "id(A)", "f") == "f"
    assert compose_lookup(p, "f", "0(D,B)") == "0(A,B)"
    assert compose_lookup(p, "f", "g") == "0(A,B)"


def test_compose_lookup_rejects_non_composable():
    with pytest.raises(CompositionError):
        compose_lookup(load("P1"), "g", "f")


def test_zero_object_homs_normalize():
    p = load("PZ")
    assert p.normalize_hom("i1") == "0(Z,ZZ)"
    assert compose_lookup(p, "p1", "i1") == "0(ZZ,ZZ)"
    assert compose_lookup(p, "i1", "p1") == "0(Z,Z)"


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_associativity_exhaustive(name):
    p = load(name)
    gens = p.generator_homs()
    for f, g, h in itertools.product(gens, repeat=3):
        if p.hom_type(f)[1] != p.hom_type(g)[0] or p.hom_type(g)[1] != p.hom_type(h)[0]:
            continue
        left = compose_lookup(p, compose_lookup(p, f, g), h)
        right = compose_lookup(p, f, compose_lookup(p, g, h))
        assert left == right, (f, g, h)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_unit_and_zero_laws(name):
    p = load(name)
    for h in p.generator_homs():
        dom, cod = p.hom_type(h)
        assert compose_lookup(p, f"id({dom})", h) == p.normalize_hom(h)
        assert compose_lookup(p, h, f"id({cod})") == p.normalize_hom(h)
        for o in p.object_names:
            assert compose_lookup(p, h, f"0({cod},{o})") == f"0({dom},{o})"
            assert compose_lookup(p, f"0({o},{dom})", h) == f"0({o},{cod})"


def test_representative_set_defaults_to_all_objects():
    assert load("P1").representative_set() == ["A", "B", "D", "AB"]
    p3 = load("P3")
    assert "D" not in p3.representative_set()
    assert p3.rep_of("D") == "Dp"
