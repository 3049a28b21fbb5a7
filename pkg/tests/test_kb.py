import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stratasolve.kb import (
    ConflictError,
    DuplicateLiteralWarning,
    KnowledgeBase,
    ParseError,
    PartialInterpretation,
    Rule,
    combine,
    parse_kb,
    satisfies_body,
    satisfies_rule,
)

from conftest import load


def test_parse_single_negative_rule():
    kb = parse_kb("b :- not a.")
    assert kb.names == ("b", "a")
    assert kb.rules == (Rule(0, (), (1,)),)
    assert kb.n == 2 and kb.length == 2


def test_parse_fact():
    kb = parse_kb("lion.")
    assert kb.rules[0].is_unit and kb.names == ("lion",)


def test_parse_empty():
    kb = parse_kb("")
    assert kb.n == 0 and len(kb.rules) == 0 and kb.length == 0


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_kb("a :- b.\nc :- , d.\n")
    assert (info.value.line, info.value.column) == (2, 6)


def test_parse_rejects_unknown_character():
    with pytest.raises(ParseError) as info:
        parse_kb("a :- b & c.")
    assert info.value.column == 8


def test_parse_rejects_variables():
    with pytest.raises(ParseError):
        parse_kb("p(X) :- q(X).")


def test_duplicate_body_literal_warns_and_dedups():
    with pytest.warns(DuplicateLiteralWarning):
        kb = parse_kb("a :- b, b, not c, not c.")
    assert kb.rules[0] == Rule(0, (1,), (2,))


def test_comments_and_nogoods():
    kb = parse_kb("% comment\na :- not b. % trailing\n#nogood a, b.\n#nogood a c.\n")
    assert kb.nogoods == (frozenset({0, 1}), frozenset({0, 2}))


def test_atoms_interned_in_first_appearance_order():
    kb = load("pi0")
    assert kb.names[:4] == ("warm_blooded", "mammal", "live_on_land", "ab1")


def test_length_counts_literal_occurrences():
    kb = load("pi0")
    # 8 heads, 10 body literals
    assert kb.length == 18


def test_satisfaction_predicates():
    r = Rule(0, (1,), (2,))
    assert satisfies_body({1}, r)
    assert not satisfies_body({1, 2}, r)
    assert not satisfies_rule({1}, r)
    assert satisfies_rule({0, 1}, r)
    assert satisfies_rule(set(), r)


def test_unit_rule_body_always_satisfied():
    assert satisfies_body(set(), Rule(3))


def test_rule_make_sorts_and_dedups():
    assert Rule.make(0, [3, 1, 3], [2, 2]) == Rule(0, (1, 3), (2,))


def test_kb_rejects_unknown_ids():
    with pytest.raises(ValueError):
        KnowledgeBase(["a"], [Rule(0, (1,))])


def test_extend_keeps_ids():
    kb = load("pi0")
    kb3 = kb.extend(load("pi1").named_rules())
    assert kb3.names[: kb.n] == kb.names
    assert kb3.rules[: len(kb.rules)] == kb.rules
    assert kb3.same_structure(load("pi3"))


def test_partial_interpretation_disjoint():
    with pytest.raises(ValueError):
        PartialInterpretation({1}, {1})
    pi = PartialInterpretation.total({1}, range(3))
    assert pi.value(1) is True and pi.value(0) is False and pi.is_total_over(range(3))
    assert PartialInterpretation({0}).value(2) is None


def test_combine_consistent_and_conflicting():
    a = PartialInterpretation({0}, {1})
    b = PartialInterpretation({2}, {1})
    assert combine(a, b) == PartialInterpretation({0, 2}, {1})
    with pytest.raises(ConflictError) as info:
        combine(a, PartialInterpretation({1}))
    assert info.value.atom == 1


_names = st.sampled_from(["a", "b", "c", "d", "p(x)", "q(x,y)"])
_rule = st.tuples(_names, st.lists(_names, max_size=3), st.lists(_names, max_size=3))


@settings(max_examples=150, deadline=None)
@given(st.lists(_rule, max_size=8))
def test_render_parse_roundtrip(triples):
    kb = KnowledgeBase.from_named(triples)
    again = parse_kb(kb.render())
    assert again.same_structure(kb)
    assert again.render() == kb.render()
