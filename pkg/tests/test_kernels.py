import random

import pytest

from stratasolve import kernels
from stratasolve.enumerators import WorkingKB, flags_to_mask, neg_unit_inst
from stratasolve.generators import random_corpus
from stratasolve.kb import parse_kb, satisfies_rule
from stratasolve.semantics import naive_fixpoint

BACKENDS = kernels.backends()
CORPUS = random_corpus(99, 80, max_n=10, max_rules=18)


def test_python_backend_always_present():
    assert "python" in BACKENDS
    assert kernels.BACKEND in BACKENDS


@pytest.fixture(params=sorted(BACKENDS))
def impl(request):
    return BACKENDS[request.param]


def test_reduct_fixpoint(impl):
    kb = parse_kb("a. b :- a, not c. d :- b, not e. e :- d.")
    blocked = bytearray(kb.n)
    assert kb.names_of(i for i, v in enumerate(impl.reduct_fixpoint(kb.compiled(), blocked)) if v) == {"a", "b", "d", "e"}
    blocked[kb.id("c")] = 1
    assert kb.names_of(i for i, v in enumerate(impl.reduct_fixpoint(kb.compiled(), blocked)) if v) == {"a"}


def test_reduct_fixpoint_empty_program(impl):
    kb = parse_kb("")
    assert impl.reduct_fixpoint(kb.compiled(), bytearray()) == bytearray()


def test_neg_propagate_conflict(impl):
    # a is forced true by a fact, so instantiating it false conflicts
    kb = parse_kb("a. b :- not a.")
    neg = bytearray(kb.n)
    neg[kb.id("a")] = 1
    assert impl.neg_propagate(kb.compiled(), neg) is None


def test_neg_propagate_values(impl):
    kb = parse_kb("a. c :- a, not b. d :- b.")
    neg = bytearray(kb.n)
    neg[kb.id("b")] = 1
    val = impl.neg_propagate(kb.compiled(), neg)
    assert val[kb.id("a")] == kernels.TRUE
    assert val[kb.id("b")] == kernels.FALSE
    assert val[kb.id("c")] == kernels.TRUE
    assert val[kb.id("d")] == kernels.UNKNOWN


@pytest.mark.parametrize("kb", CORPUS)
def test_backends_agree_with_reference(kb, impl):
    prog = kb.compiled()
    rng = random.Random(kb.length + kb.n)
    for _ in range(5):
        S = {a for a in range(kb.n) if rng.random() < 0.4}
        blocked = bytearray(1 if a in S else 0 for a in range(kb.n))
        derived = impl.reduct_fixpoint(prog, blocked)
        assert {i for i, v in enumerate(derived) if v} == naive_fixpoint(kb, S)

        truth = bytearray(1 if rng.random() < 0.5 else 0 for _ in range(kb.n))
        T = {i for i, v in enumerate(truth) if v}
        assert impl.satisfies_all(prog, truth) == all(satisfies_rule(T, r) for r in kb.rules)

        # propagation agrees with the explicit working-copy implementation
        m: dict[int, bool] = {}
        ok = neg_unit_inst(WorkingKB(kb), S, m)
        val = impl.neg_propagate(prog, blocked)
        assert (val is not None) == ok
        if ok:
            expect = [kernels.UNKNOWN] * kb.n
            for a, v in m.items():
                expect[a] = kernels.TRUE if v else kernels.FALSE
            assert list(val) == expect


@pytest.mark.parametrize("kb", CORPUS[:40])
def test_brute_force_backends_agree(kb):
    results = {name: sorted(mod.brute_force(kb.compiled())) for name, mod in BACKENDS.items()}
    assert len(set(map(tuple, results.values()))) == 1


def test_flags_to_mask():
    assert flags_to_mask(bytearray([1, 0, 1, 1])) == 0b1101
    assert flags_to_mask(bytearray()) == 0
