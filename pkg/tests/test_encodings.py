import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import needs_solver
from striprev.benchgen import rev_domain
from striprev.encodings import (
    EncodingKind,
    SolverModel,
    SolverResult,
    compile_phi_hook,
    emit,
    extract_plans,
    hook_derives_violation,
    parse_model_atoms,
    parse_solver_output,
    rule_block,
    run_external_solver,
)
from striprev.errors import InconsistentModel, PhiNotSupported, SolverNotFound, SolverOutputError
from striprev.formula import And, Atom, ByFormula, Not, Or, evaluate, parse_formula
from striprev.pddl import emit_plasp_facts
from striprev.reversibility import SearchConfig, decide_over_set, decide_universal
from striprev.strips import FactUniverse, State

from test_formula import formulas


def test_templates_contain_key_rules():
    elp = rule_block("simple-elp")
    assert "chosen(A) :- action(action(A)), not &k{-chosen(A)}." in elp
    assert "occurs(A, 1) :- chosen(A)." in elp
    asp = rule_block("simple-asp")
    assert "1 {chosen(A) : action(action(A))} 1." in asp
    assert "&k" not in asp
    gasp = rule_block("general-asp")
    assert "reversePlan" in gasp
    assert "opposites(true, false)." in gasp


def test_emit_layout(rev2):
    p = emit("simple-asp", rev2, 2)
    assert p.text.index("\n".join(emit_plasp_facts(rev2).lines)) < p.text.index("#const horizon=2.")
    assert p.text.rstrip().endswith(rule_block("simple-asp").rstrip())
    assert p.text.count("#const horizon") == 1


def test_emit_deterministic(rev2):
    phi = parse_formula("(or f0 (not f1))", rev2)
    for kind in EncodingKind:
        a = emit(kind, rev2, 3, phi if kind.general else None)
        b = emit(kind, rev2, 3, phi if kind.general else None)
        assert a.text == b.text


def test_phi_not_supported_for_simple(example1):
    for kind in ("simple-asp", "simple-elp"):
        with pytest.raises(PhiNotSupported):
            emit(kind, example1, 1, Not(Atom("f")))


def test_hook_heads(example1):
    phi = Not(Atom("f"))
    assert compile_phi_hook("general-elp", phi).endswith(":- phi_violated.\n")
    assert compile_phi_hook("general-asp", phi).endswith("reversePlan :- phi_violated.\n")
    assert "% state set: (not f)" in emit("general-asp", example1, 1, phi).text


def _violations(phi, facts):
    u = FactUniverse(facts)
    hook = compile_phi_hook("general-elp", phi)
    return [State(u, m) for m in range(1 << len(facts)) if hook_derives_violation(hook, State(u, m))]


def test_hook_examples():
    u1 = FactUniverse(["f"])
    assert _violations(Not(Atom("f")), ["f"]) == [State(u1, 1)]
    hook = compile_phi_hook("general-elp", Not(Atom("f")))
    assert 'holds("f",true,0)' in hook
    u2 = FactUniverse(["f0", "f1"])
    # f0 false or f1 false
    assert _violations(And([Atom("f0"), Atom("f1")]), ["f0", "f1"]) == [
        State(u2, 0), State(u2, 1), State(u2, 2)]
    # expected: the single assignment falsifying f0 or not f1, found by enumeration
    phi = Or([Atom("f0"), Not(Atom("f1"))])
    expected = [State(u2, m) for m in range(4) if not evaluate(phi, State(u2, m))]
    assert expected == [State.of(u2, ["f1"])]
    assert _violations(phi, ["f0", "f1"]) == expected


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(list(EncodingKind)[2:]), formulas(["v0", "v1", "v2", "v3"]))
def test_hook_agrees_with_eval(kind, phi):
    u = FactUniverse(["v0", "v1", "v2", "v3"])
    hook = compile_phi_hook(kind, phi)
    for m in range(16):
        s = State(u, m)
        assert hook_derives_violation(hook, s) == (not evaluate(phi, s))


# -- output parsing ------------------------------------------------------------

def test_parse_text_output():
    raw = ("clingo version 5.7.1\nReading from x.lp\nSolving...\nAnswer: 1\n"
           'chosen("del-all") occurs("del-all",1) occurs("add-f1",3) occurs("add-f0",2) '
           '-chosen("add-f0")\nSATISFIABLE\n')
    (m,) = parse_solver_output(raw)
    assert m.chosen == "del-all"
    assert m.occurs == ((1, "del-all"), (2, "add-f0"), (3, "add-f1"))
    assert parse_solver_output("Solving...\nUNSATISFIABLE\n") == []


def test_parse_json_output():
    raw = json.dumps({"Solver": "clingo", "Call": [{"Witnesses": [
        {"Value": ['chosen("del-f")', 'occurs("del-f",1)', 'occurs("add-f",2)']}]}],
        "Result": "SATISFIABLE"})
    assert parse_solver_output(raw) == [SolverModel("del-f", ((1, "del-f"), (2, "add-f")))]


def test_parse_garbage():
    with pytest.raises(SolverOutputError):
        parse_solver_output("segfault")
    with pytest.raises(SolverOutputError):
        parse_solver_output("{not json")


def test_parse_two_chosen():
    with pytest.raises(InconsistentModel):
        parse_model_atoms('chosen("a") chosen("b")')


def test_extract_examples():
    m = SolverModel("del-all", ((1, "del-all"), (2, "add-f0"), (3, "add-f1")))
    assert extract_plans(SolverResult((m,), "", "exit 30", 2)) == [("del-all", ("add-f0", "add-f1"))]
    gap = SolverModel("del-all", ((1, "del-all"), (3, "add-f1")))
    with pytest.raises(InconsistentModel):
        extract_plans(SolverResult((gap,), "", "exit 30", 2))
    wrong = SolverModel("add-f0", ((1, "del-all"), (2, "add-f0"), (3, "add-f1")))
    with pytest.raises(InconsistentModel):
        extract_plans(SolverResult((wrong,), "", "exit 30", 2))
    assert extract_plans(SolverResult((), "", "exit 20", 2)) == []


def test_solver_not_found(example1):
    with pytest.raises(SolverNotFound):
        run_external_solver(emit("simple-asp", example1, 1), "no-such-solver-xyz {program} {all_models}")


# -- against a real solver -------------------------------------------------

def _native_pairs(d, h):
    cfg = SearchConfig(horizon=h, exact=True, max_plans=10**6)
    return {(a.name, w) for a in d.actions for w in decide_universal(a, d, cfg).witness_names()}


def _solver_pairs(kind, d, h, phi=None):
    return set(extract_plans(run_external_solver(emit(kind, d, h, phi))))


@needs_solver
def test_solver_example1(example1):
    assert _solver_pairs("simple-asp", example1, 1) == {("del-f", ("add-f",))}


@needs_solver
@pytest.mark.parametrize("i", range(1, 5))
def test_solver_rev_family(i):
    d = rev_domain(i)
    for h in (i - 1, i):
        assert _solver_pairs("simple-asp", d, h) == _native_pairs(d, h)
        assert _solver_pairs("general-asp", d, h) == _native_pairs(d, h)
    assert _solver_pairs("simple-asp", d, i - 1) == set()


@needs_solver
def test_solver_phi(example1):
    phi = Not(Atom("f"))
    got = {p for p in _solver_pairs("general-asp", example1, 1, phi) if p[0] == "add-f"}
    v = decide_over_set("add-f", example1, ByFormula(phi), SearchConfig(horizon=1, exact=True))
    assert got == {("add-f", w) for w in v.witness_names()} == {("add-f", ("del-f",))}
