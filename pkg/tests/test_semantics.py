import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stratasolve.generators import RandomSpec, random_corpus, random_kb
from stratasolve.kb import KnowledgeBase, Rule, parse_kb, satisfies_rule
from stratasolve.semantics import (
    BruteForceCapError,
    brute_force_stable_models,
    gl_transform,
    has_proof,
    horn_minimal_model,
    instability_reason,
    is_minimal_model,
    is_stable,
    naive_fixpoint,
    reduct_model,
)

from conftest import S1, S2, load, true_names


def test_gl_transform_of_pi0_wrt_s1():
    kb = load("pi0")
    reduct = gl_transform(kb, kb.ids(S1))
    heads = sorted(kb.name(r.head) for r in reduct.rules)
    # rule for male is blocked by female; everything else survives without negation
    assert "male" not in heads
    assert reduct.is_horn and len(reduct.rules) == len(kb.rules) - 1


def test_horn_minimal_model_chain():
    kb = parse_kb("a. b :- a. c :- b, d.")
    assert kb.names_of(horn_minimal_model(kb)) == {"a", "b"}


def test_horn_minimal_model_rejects_negation():
    with pytest.raises(ValueError):
        horn_minimal_model(parse_kb("a :- not b."))


def test_stability_on_table_models():
    kb = load("pi0")
    assert is_stable(kb, kb.ids(S1)) and is_stable(kb, kb.ids(S2))
    assert not is_stable(kb, kb.ids(S1 | {"male"}))
    assert not is_stable(kb, kb.ids({"lion"}))


def test_single_negative_rule():
    kb = parse_kb("b :- not a.")
    assert is_stable(kb, kb.ids({"b"}))
    assert not is_stable(kb, set())
    assert not is_stable(kb, kb.ids({"a"}))


def test_odd_loop_has_no_stable_model():
    kb = parse_kb("a :- not a.")
    assert not is_stable(kb, set()) and not is_stable(kb, {0})
    assert len(brute_force_stable_models(kb)) == 0


def test_proofs():
    kb = load("pi0")
    S = kb.ids(S1)
    assert has_proof(kb, S, kb.id("mammal"))
    assert not has_proof(kb, S, kb.id("male"))
    assert not has_proof(kb, S, kb.id("dolphin"))


def test_instability_reasons():
    kb = load("pi0")
    assert instability_reason(kb, kb.ids({"lion"})) == "unsatisfied rule mammal :- lion."
    assert instability_reason(kb, kb.ids(S1 | {"dolphin", "ab1"})) == "atom live_on_land has no proof"
    assert instability_reason(kb, kb.ids(S1)) is None
    empty = parse_kb("")
    assert instability_reason(empty, set()) is None


def test_brute_force_cap():
    kb = KnowledgeBase([f"a{i}" for i in range(21)], [])
    with pytest.raises(BruteForceCapError):
        brute_force_stable_models(kb)
    assert len(brute_force_stable_models(kb, cap=21)) == 1


def test_brute_force_on_pi0():
    assert true_names(brute_force_stable_models(load("pi0"))) == {S1, S2}


def test_unused_atoms_are_false():
    kb = KnowledgeBase(["a", "b"], [Rule(0)])
    (m,) = brute_force_stable_models(kb).true_sets()
    assert m == {0}


def _corpus():
    return random_corpus(4242, 150, max_n=9, max_rules=14)


@pytest.mark.parametrize("kb", _corpus())
def test_kernel_fixpoint_matches_naive(kb):
    rng = random.Random(kb.length)
    for _ in range(4):
        S = {a for a in range(kb.n) if rng.random() < 0.5}
        assert reduct_model(kb, S) == naive_fixpoint(kb, S) == naive_fixpoint(gl_transform(kb, S))


@pytest.mark.parametrize("kb", _corpus()[:60])
def test_stable_iff_satisfied_and_proved(kb):
    # characterisation by satisfaction plus proofs, checked over every subset
    for mask in range(1 << kb.n):
        S = {a for a in range(kb.n) if mask >> a & 1}
        proved = reduct_model(kb, S)
        characterised = all(satisfies_rule(S, r) for r in kb.rules) and all(a in proved for a in S)
        assert is_stable(kb, S) == characterised


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_stable_models_are_minimal_models(seed):
    kb = random_kb(random.Random(seed), RandomSpec(n=7, rules=10))
    for m in brute_force_stable_models(kb).true_sets():
        assert is_minimal_model(kb, m)
        assert is_minimal_model(gl_transform(kb, m), m)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000))
def test_stable_models_form_an_antichain(seed):
    kb = random_kb(random.Random(seed), RandomSpec(n=8, rules=12, neg_density=0.6))
    ms = brute_force_stable_models(kb).true_sets()
    for a in ms:
        for b in ms:
            assert a == b or not a < b
