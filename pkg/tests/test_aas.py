import random

import pytest

from stratasolve.aas import (
    AASSolver,
    NodeCache,
    Nogood,
    aas_solve,
    cartes_prod,
    convert,
    query_atom,
    solve_one,
    update_and_resolve,
)
from stratasolve.generators import random_corpus, random_nogoods
from stratasolve.graphs import build_super_graph, omega_index
from stratasolve.kb import KnowledgeBase, PartialInterpretation, Rule, parse_kb
from stratasolve.models import ModelSet
from stratasolve.semantics import brute_force_stable_models, is_stable

from conftest import S1, S2, load, program_text, true_names


def _rules_about(kb, atoms):
    ids = kb.ids(atoms)
    return [r for r in kb.rules if r.head in ids]


def test_convert_fm_node():
    kb = load("pi0")
    m = PartialInterpretation.total(kb.ids({"lion", "mammal"}), kb.ids({"lion", "mammal", "dolphin"}))
    local = convert(kb, _rules_about(kb, {"female", "male"}), m, kb.ids({"female", "male"}))
    assert set(local.named_rules()) == {
        ("female", frozenset(), frozenset({"male"})),
        ("male", frozenset(), frozenset({"female"})),
    }


def test_convert_source_node_erases_outside_negation():
    kb = parse_kb("a :- not z, a2. a2 :- a.")
    local = convert(kb, list(kb.rules), PartialInterpretation(), kb.ids({"a", "a2"}))
    assert set(local.named_rules()) == {("a", frozenset({"a2"}), frozenset()), ("a2", frozenset({"a"}), frozenset())}


def test_convert_dead_rule_and_strict_mode():
    kb = load("pi2")
    m = PartialInterpretation(kb.ids({"b"}), kb.ids({"a"}))
    rules = _rules_about(kb, {"c"})
    assert convert(kb, rules, m, kb.ids({"c"})).rules == ()
    strict = convert(kb, rules, m, kb.ids({"c"}), strict=True)
    assert strict.named_rules() == [("c", frozenset({"a"}), frozenset({"c"}))]


def test_convert_true_negated_child_kills_rule():
    kb = parse_kb("x :- not y.")
    m = PartialInterpretation(kb.ids({"y"}))
    assert convert(kb, list(kb.rules), m, kb.ids({"x"})).rules == ()


def test_cartes_prod_example():
    names = tuple("abcd")
    Mc = ModelSet.from_sets(names, {0, 1, 2}, [{0, 2}, {1}])
    Md = ModelSet.from_sets(names, {0, 1, 3}, [{1, 3}, {0}])
    out = cartes_prod([Mc, Md])
    assert set(out) == {frozenset({0, 2}), frozenset({1, 3})}
    assert out.domain_ids == {0, 1, 2, 3}


def test_cartes_prod_identities():
    names = tuple("ab")
    M = ModelSet.from_sets(names, {0, 1}, [{0}, {1}])
    assert cartes_prod([M]) == M
    assert len(cartes_prod([ModelSet(names, 0b11, []), M])) == 0
    ident = cartes_prod([], names)
    assert len(ident) == 1 and list(ident) == [frozenset()]


def test_golden_programs():
    assert true_names(aas_solve(load("pi0"))) == {S1, S2}
    assert true_names(aas_solve(load("pi2"))) == {frozenset("b")}
    assert true_names(aas_solve(load("pi4"))) == {frozenset("acf"), frozenset("bd")}
    assert true_names(aas_solve(parse_kb("b :- not a."))) == {frozenset("b")}
    assert len(aas_solve(parse_kb("a :- not a."))) == 0


def test_pi2_intermediate_models_are_pruned():
    kb = load("pi2")
    solver = AASSolver(kb)
    solver.solve()
    ab = solver.M[solver.sg.component_of[kb.id("a")]]
    assert true_names(ab) == {frozenset("a"), frozenset("b")}


def test_pi4_node_models_are_total():
    kb = load("pi4")
    solver = AASSolver(kb)
    solver.solve()
    e = solver.M[solver.sg.component_of[kb.id("e")]]
    assert e.domain_ids == kb.ids("abcde")
    assert true_names(e) == {frozenset("ac"), frozenset("bd")}


def test_nogood_filters_models():
    kb = load("pi0")
    assert true_names(aas_solve(kb, [kb.ids({"female"})])) == {S2}
    assert true_names(aas_solve(kb, [kb.ids({"female", "male"})])) == {S1, S2}


def test_nogood_attached_at_covering_node():
    kb = load("pi0")
    solver = AASSolver(kb, [kb.ids({"lion", "female"}), kb.ids({"warm_blooded", "female"})])
    fm = solver.sg.component_of[kb.id("female")]
    assert len(solver.node_nogoods[fm]) == 1
    assert len(solver.final_nogoods) == 1
    assert true_names(solver.solve()) == {S2}


def test_parsed_nogoods_apply_by_default():
    kb = parse_kb(program_text("pi0") + "#nogood male.\n")
    assert true_names(aas_solve(kb)) == {S1}
    assert true_names(aas_solve(kb, nogoods=())) == {S1, S2}


def test_nogood_rejects_empty():
    with pytest.raises(ValueError):
        Nogood(frozenset())


def test_solve_one():
    kb = load("pi0")
    pi = solve_one(kb)
    assert pi is not None and is_stable(kb, pi.true)
    assert solve_one(parse_kb("a :- not a.")) is None
    kb2 = load("pi2")
    assert kb2.names_of(solve_one(kb2).true) == {"b"}


def test_queries_pi0():
    kb = load("pi0")
    res = query_atom(kb, "mammal", "cautious")
    assert res.answer and res.early_stop
    fm = build_super_graph(kb).component_of[kb.id("female")]
    assert fm not in res.visited
    assert not query_atom(kb, "female", "cautious").answer
    assert query_atom(kb, "female", "brave").answer


def test_query_atom_without_rules():
    kb = parse_kb("a :- not b. c.")
    assert not query_atom(kb, "b", "cautious").answer
    assert not query_atom(kb, "b", "brave").answer


def test_query_on_inconsistent_kb_matches_enumeration():
    kb = parse_kb("x. a :- not a, x.")
    assert query_atom(kb, "x", "cautious").answer
    assert not query_atom(kb, "x", "brave").answer


def test_query_bad_mode():
    with pytest.raises(ValueError):
        query_atom(load("pi0"), "lion", "sceptical")


def test_incremental_pi0_to_pi3():
    cache = NodeCache()
    aas_solve(load("pi0"), cache=cache)
    out = update_and_resolve(cache, load("pi1").named_rules())
    assert out == aas_solve(load("pi3"))
    redone = {st.atoms for st in cache.stats if st.recomputed}
    assert redone == {("penguin",), ("bird",), ("ab2",), ("fly",), ("live_on_land",)}


def test_incremental_nothing_added():
    cache = NodeCache()
    first = aas_solve(load("pi0"), cache=cache)
    assert update_and_resolve(cache, []) == first
    assert not any(st.recomputed for st in cache.stats)


def test_incremental_merging_components():
    cache = NodeCache()
    aas_solve(load("pi4"), cache=cache)
    # e feeds back into a, so {a,b,c,d,e} collapses into one component
    out = update_and_resolve(cache, [("a", ["e"], [])])
    assert out == aas_solve(load("pi4").extend([("a", ["e"], [])]))


def test_parallel_matches_sequential():
    for kb in random_corpus(11, 40, max_n=12):
        assert aas_solve(kb, parallel=True) == aas_solve(kb)


def test_node_stats_recorded():
    cache = NodeCache()
    aas_solve(load("pi0"), cache=cache)
    fm = [st for st in cache.stats if st.atoms == ("female", "male")][0]
    assert fm.models == 2 and fm.inputs == 1 and fm.engine == "as2"
    assert fm.as_dict()["v"] == 4


CORPUS = random_corpus(31337, 200, max_n=11, max_rules=20)


@pytest.mark.parametrize("kb", CORPUS)
def test_aas_matches_brute_force(kb):
    oracle = brute_force_stable_models(kb)
    assert aas_solve(kb) == oracle
    assert aas_solve(kb, strict_convert=True) == oracle
    assert len(oracle) <= omega_index(kb).t_pi
    one = solve_one(kb)
    assert (one is None) == (len(oracle) == 0)
    if one is not None:
        assert one.true in set(oracle)


@pytest.mark.parametrize("engine", ["as1", "as2", "brute"])
def test_forced_engines(engine):
    for kb in CORPUS[:60]:
        assert aas_solve(kb, engine=engine) == brute_force_stable_models(kb)


@pytest.mark.parametrize("kb", CORPUS[:80])
def test_intermediate_sets_are_complete(kb):
    solver = AASSolver(kb)
    final = solver.solve()
    for nd in solver.sg.nodes:
        local = set(solver.M[nd.index].masks)
        for g in final.masks:
            assert g & nd.closure in local


def test_nogoods_randomised():
    rng = random.Random(5)
    for kb in CORPUS[:100]:
        ngs = random_nogoods(rng, kb.n, rng.randint(1, 3))
        expect = brute_force_stable_models(kb).filter(lambda g: all(Nogood(ng).complies(g) for ng in ngs))
        assert aas_solve(kb, ngs) == expect


def test_empty_kb():
    kb = KnowledgeBase([], [])
    assert list(aas_solve(kb)) == [frozenset()]
    kb2 = KnowledgeBase(["a"], [Rule(0, (0,))])
    assert true_names(aas_solve(kb2)) == {frozenset()}
