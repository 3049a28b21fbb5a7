import random

import pytest

from stratasolve.aas import aas_solve
from stratasolve.firstorder import (
    FaasNodeTrace,
    ProgramError,
    SafetyError,
    check_safe,
    faas_solve,
    ground,
    herbrand_universe,
    is_first_order,
    parse_program,
    predicate_graph,
)
from stratasolve.generators import random_fo_program
from stratasolve.graphs import NEGATIVE, POSITIVE, SuperGraph, build_super_graph
from stratasolve.kb import parse_kb
from stratasolve.semantics import brute_force_stable_models

from conftest import load, program_text


@pytest.fixture
def pi5():
    return parse_program(program_text("pi5"))


def _names(ms):
    return sorted(sorted(s) for s in ms.name_sets())


def test_pi5_is_safe(pi5):
    assert check_safe(pi5) == []
    assert herbrand_universe(pi5) == ["bigbird", "flipper"]


def test_unsafe_rules():
    (v,) = check_safe(parse_program("p(X) :- not q(X)."))
    assert v.variable == "X"
    (v,) = check_safe(parse_program("p(X) :- q(X), not r(X,Y)."))
    assert v.variable == "Y"
    with pytest.raises(SafetyError):
        ground(parse_program("p(X) :- not q(X)."))


def test_arity_must_be_fixed():
    with pytest.raises(ProgramError):
        parse_program("p(a). p(a,b).")


def test_ground_pi5(pi5):
    kb = ground(pi5)
    # eleven one-variable rules over two constants plus two facts
    assert len(kb.rules) == 11 * 2 + 2
    assert ("mammal(flipper)", frozenset({"dolphin(flipper)"}), frozenset()) in kb.named_rules()


def test_ground_small():
    kb = ground(parse_program("p(X) :- q(X). q(a). q(b)."))
    assert len([r for r in kb.named_rules() if r[0].startswith("p(")]) == 2


def test_ground_is_identity_on_ground_programs():
    text = program_text("pi0")
    assert ground(parse_program(text)).same_structure(parse_kb(text))


def test_ground_instance_count():
    prog = parse_program("r(X,Y) :- s(X), s(Y). s(a). s(b). s(c).")
    kb = ground(prog)
    assert len([r for r in kb.rules if kb.name(r.head).startswith("r(")]) == 3 ** 2


def test_is_first_order():
    assert is_first_order("p(X) :- q(X).")
    assert not is_first_order("p(a) :- q(a).")
    assert not is_first_order("a :- b.")


def test_predicate_graph():
    g = predicate_graph(parse_program("p(X) :- p(X)."))
    assert g.edge_set(POSITIVE) == {("p", "p")}
    g = predicate_graph(parse_program("p(X) :- not q(X), r(X)."))
    assert g.edge_set(NEGATIVE) == {("q", "p")} and g.edge_set(POSITIVE) == {("r", "p")}


def test_pi5_predicate_graph_matches_propositional_structure(pi5):
    sg = SuperGraph(predicate_graph(pi5))
    prop = build_super_graph(load("pi3"))
    shape = lambda s: sorted((tuple(s.labels_of(a)), tuple(s.labels_of(b))) for a, b in s.arcs)
    assert shape(sg) == shape(prop)


def test_faas_pi5(pi5):
    models = _names(faas_solve(pi5))
    oracle = _names(brute_force_stable_models(ground(pi5), cap=24))
    assert models == oracle and len(models) == 2
    for m in models:
        assert "fly(bigbird)" in m and "live_on_land(flipper)" not in m
    flip = {frozenset(m) for m in models}
    a, b = flip
    assert a ^ b == {"female(flipper)", "male(flipper)"}


def test_faas_guided_matches_naive(pi5):
    assert _names(faas_solve(pi5, guided=True)) == _names(faas_solve(pi5))
    assert _names(aas_solve(ground(pi5, guided=True))) == _names(aas_solve(ground(pi5)))


def test_faas_mammal_node_is_stratified(pi5):
    trace: list[FaasNodeTrace] = []
    faas_solve(pi5, trace=trace)
    node = [t for t in trace if t.predicates == ("mammal",)][0]
    assert node.inputs == 1 and node.models == 1


def test_faas_grounds_only_closure_predicates(pi5):
    trace: list[FaasNodeTrace] = []
    faas_solve(pi5, guided=True, trace=trace)
    for t in trace:
        assert t.created_predicates <= t.closure_predicates


def test_faas_on_ground_input_equals_aas():
    text = program_text("pi0")
    assert _names(faas_solve(parse_program(text))) == _names(aas_solve(parse_kb(text)))


def test_faas_with_nogoods():
    prog = parse_program(program_text("pi5") + "#nogood female(flipper).\n")
    (m,) = _names(faas_solve(prog))
    assert "male(flipper)" in m


@pytest.mark.parametrize("seed", range(60))
def test_faas_random_programs(seed):
    rng = random.Random(seed)
    prog = random_fo_program(rng, constants=rng.randint(1, 3), predicates=rng.randint(3, 7),
                             rules=rng.randint(1, 8), neg_density=0.5, choice_pairs=rng.randint(0, 3))
    kb = ground(prog)
    assert kb.n <= 14
    oracle = _names(brute_force_stable_models(kb, cap=14))
    assert _names(faas_solve(prog)) == oracle
    assert _names(faas_solve(prog, guided=True)) == oracle
