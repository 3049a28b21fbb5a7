"""GL transform, Horn least models, stability and proof checking, brute force."""

from __future__ import annotations

from typing import Iterable

from . import kernels
from .kb import KnowledgeBase, Rule, satisfies_rule
from .models import ModelSet, bits

DEFAULT_BRUTE_CAP = 20


class BruteForceCapError(ValueError):
    pass


def _flags(n: int, atoms: Iterable[int]) -> bytearray:
    v = bytearray(n)
    for a in atoms:
        v[a] = 1
    return v


def gl_transform(kb: KnowledgeBase, m: Iterable[int]) -> KnowledgeBase:
    """Drop rules blocked by ``m``, strip negative literals from the rest."""
    m = frozenset(m)
    return kb.with_rules(
        Rule(r.head, r.pos) for r in kb.rules if not any(q in m for q in r.neg)
    )


def horn_minimal_model(kb: KnowledgeBase) -> frozenset[int]:
    if not kb.is_horn:
        raise ValueError("horn_minimal_model needs a Horn knowledge base")
    derived = kernels.reduct_fixpoint(kb.compiled(), bytearray(kb.n))
    return frozenset(i for i, v in enumerate(derived) if v)


def naive_fixpoint(kb: KnowledgeBase, S: Iterable[int] = ()) -> frozenset[int]:
    """Round-robin iteration S_0 = ∅, S_{i+1} = S_i ∪ {heads fired w.r.t. S}.

    Reference implementation kept for differential testing of the kernels.
    """
    S = frozenset(S)
    live = [r for r in kb.rules if not any(q in S for q in r.neg)]
    cur: set[int] = set()
    while True:
        nxt = cur | {r.head for r in live if all(p in cur for p in r.pos)}
        if nxt == cur:
            return frozenset(cur)
        cur = nxt


def reduct_model(kb: KnowledgeBase, S: Iterable[int]) -> frozenset[int]:
    """Least model of the GL transform of ``kb`` w.r.t. ``S``: the atoms with a proof."""
    derived = kernels.reduct_fixpoint(kb.compiled(), _flags(kb.n, S))
    return frozenset(i for i, v in enumerate(derived) if v)


def is_stable(kb: KnowledgeBase, S: Iterable[int]) -> bool:
    S = frozenset(S)
    return reduct_model(kb, S) == S


def has_proof(kb: KnowledgeBase, S: Iterable[int], P: int) -> bool:
    return P in reduct_model(kb, S)


def instability_reason(kb: KnowledgeBase, S: Iterable[int]) -> str | None:
    """Why ``S`` is not stable, or None if it is.

    Reports the first rule ``S`` violates, else the smallest atom of ``S``
    without a proof.
    """
    S = frozenset(S)
    nm = kb.names
    for r in kb.rules:
        if not satisfies_rule(S, r):
            body = [nm[p] for p in r.pos] + ["not " + nm[q] for q in r.neg]
            text = nm[r.head] + (" :- " + ", ".join(body) if body else "")
            return f"unsatisfied rule {text}."
    proved = reduct_model(kb, S)
    for a in sorted(S - proved):
        return f"atom {nm[a]} has no proof"
    return None


def brute_force_stable_models(kb: KnowledgeBase, cap: int = DEFAULT_BRUTE_CAP) -> ModelSet:
    """Check every subset of the atoms; the oracle for the real enumerators."""
    if kb.n > cap:
        raise BruteForceCapError(f"{kb.n} atoms exceeds brute-force cap {cap}")
    masks = kernels.brute_force(kb.compiled())
    return ModelSet(kb.names, (1 << kb.n) - 1, masks)


def is_minimal_model(kb: KnowledgeBase, S: Iterable[int]) -> bool:
    """``S`` is a classical model with no model strictly inside it (exhaustive, small n only)."""
    S = frozenset(S)
    if not all(satisfies_rule(S, r) for r in kb.rules):
        return False
    members = sorted(S)
    for sub in range((1 << len(members)) - 1):
        T = {members[i] for i in bits(sub)}
        if all(satisfies_rule(T, r) for r in kb.rules):
            return False
    return True
