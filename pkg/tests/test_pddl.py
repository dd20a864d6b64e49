import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURES
from striprev.benchgen import RandomSpec, gen_random_domain
from striprev.errors import ParseError, UnknownFactError, UnsupportedFeature
from striprev.pddl import (
    PddlSource,
    emit_plasp_facts,
    normalize_asp,
    parse_domain,
    parse_problem,
    pretty_print,
    read_sexprs,
)
from striprev.strips import Domain, validate_domain


def test_parse_example1(example1):
    assert example1.name == "example1"
    assert example1.facts == ("f",)
    del_f, add_f = example1.actions
    assert (del_f.name, del_f.pre, del_f.add, del_f.delete) == ("del-f", {"f"}, set(), {"f"})
    assert (add_f.name, add_f.pre, add_f.add, add_f.delete) == ("add-f", set(), {"f"}, set())


def test_parse_rev2(rev2):
    assert rev2.facts == ("f0", "f1")
    assert [a.name for a in rev2.actions] == ["del-all", "add-f0", "add-f1"]
    d = rev2.action("del-all")
    assert (d.pre, d.add, d.delete) == ({"f0", "f1"}, set(), {"f0", "f1"})
    assert rev2.action("add-f1").pre == {"f0"}


def test_requirements_optional():
    d = parse_domain("(define (domain x) (:predicates (p)) (:action a :effect (p)))")
    assert d.action("a").add == {"p"}


@pytest.mark.parametrize("text, what", [
    ("(define (domain x) (:action a :effect (when (p) (q))))", "conditional"),
    ("(define (domain x) (:requirements :strips :typing))", "requirement"),
    ("(define (domain x) (:requirements :adl))", "requirement"),
    ("(define (domain x) (:predicates (p ?x)))", "arguments"),
    ("(define (domain x) (:predicates (p)) (:action a :precondition (not (p)) :effect (p)))",
     "negative"),
    ("(define (domain x) (:predicates (p)) (:action a :parameters (?x) :effect (p)))", "parameters"),
    ("(define (domain x) (:types block))", "typing"),
])
def test_unsupported_features(text, what):
    with pytest.raises(UnsupportedFeature, match=what):
        parse_domain(text)


def test_parse_error_positions():
    with pytest.raises(ParseError) as exc:
        parse_domain("(define (domain x)\n  (:predicates (p)")
    assert exc.value.line == 2
    with pytest.raises(ParseError) as exc:
        read_sexprs("(a))")
    assert (exc.value.line, exc.value.column) == (1, 4)


def test_unknown_fact_in_action():
    with pytest.raises(UnknownFactError):
        parse_domain("(define (domain x) (:predicates (p)) (:action a :effect (q)))")


def test_ill_formed_rejected():
    text = "(define (domain x) (:predicates (p)) (:action a :effect (and (p) (not (p)))))"
    with pytest.raises(ParseError, match="AddDelOverlap"):
        parse_domain(text)


def test_case_sensitive_names():
    d = parse_domain("(DEFINE (DOMAIN X) (:PREDICATES (P) (p)) (:ACTION A :EFFECT (AND (P))))")
    assert d.facts == ("P", "p")
    assert d.action("A").add == {"P"}


def test_problem_parsing(example1):
    t = parse_problem(PddlSource.from_file(FIXTURES / "example1-init-f.pddl"), example1)
    assert t.init.facts == ("f",) and t.goal.facts == ("f",)
    t = parse_problem(PddlSource.from_file(FIXTURES / "example1-init-empty.pddl"), example1)
    assert t.init.facts == ()
    with pytest.raises(UnknownFactError):
        parse_problem("(define (problem p) (:domain example1) (:init (g)) (:goal (f)))", example1)


def test_emit_plasp_example1_lines(example1):
    lines = emit_plasp_facts(example1).lines
    assert ('postcondition(action("del-f"), effect(unconditional), variable("f"), '
            'value(variable("f"), false)) :- action(action("del-f")).') in lines
    assert all(line.endswith(".") for line in lines)


def test_emit_plasp_rev2_line(rev2):
    assert ('precondition(action("add-f1"), variable("f0"), value(variable("f0"), true)) '
            ':- action(action("add-f1")).') in emit_plasp_facts(rev2).lines


def test_emit_plasp_empty_domain():
    lines = emit_plasp_facts(Domain("empty", [], [])).lines
    assert lines == ("boolean(true).", "boolean(false).", 'type(type("object")).',
                     "contains(X, value(X, B)) :- variable(X), boolean(B).")


def test_golden_rev2_plasp(rev2):
    golden = normalize_asp((FIXTURES / "rev-2.plasp.lp").read_text())
    assert list(emit_plasp_facts(rev2).lines) == golden


def test_golden_example1_plasp(example1):
    golden = normalize_asp((FIXTURES / "example1.plasp.lp").read_text())
    preamble = {"boolean(true).", "boolean(false).", 'type(type("object")).',
                "contains(X, value(X, B)) :- variable(X), boolean(B)."}
    ours = [line for line in emit_plasp_facts(example1).lines if line not in preamble]
    assert ours == golden


def test_pretty_print_rev2_matches_listing(rev2):
    assert pretty_print(rev2) == (FIXTURES / "rev-2.pddl").read_text()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**63), st.floats(0, 1))
def test_round_trip(nf, na, seed, p):
    d = gen_random_domain(RandomSpec(nf, na, seed, p))
    back = parse_domain(pretty_print(d))
    assert back == d
    assert validate_domain(back) == []
