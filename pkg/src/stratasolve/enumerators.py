"""Structure-blind stable model enumerators.

``all_stable1`` guesses the truth of every negated atom; ``all_stable2``
guesses which non-Horn rules fire and propagates.  Both return the exact
stable-model set as a ModelSet total over the knowledge base's atoms.
"""

from __future__ import annotations

from typing import MutableMapping

from . import kernels
from .kb import KnowledgeBase, Rule
from .models import ModelSet, bits

_TO_DIGITS = bytes.maketrans(b"\x00\x01\x02", b"010")
_TRUE_ONLY = bytes.maketrans(b"\x00\x01\x02", b"\x00\x01\x00")


def flags_to_mask(flags: bytes | bytearray) -> int:
    """Bitmask of the nonzero positions of a 0/1 vector."""
    if not flags:
        return 0
    return int(bytes(flags).translate(_TO_DIGITS)[::-1], 2)


def all_stable1(kb: KnowledgeBase) -> ModelSet:
    """Enumerate interpretations of the negated atoms; keep those their reduct reproduces."""
    prog = kb.compiled()
    H = kb.negated_atoms()
    found = []
    blocked = bytearray(kb.n)
    for guess in range(1 << len(H)):
        for i, h in enumerate(H):
            blocked[h] = (guess >> i) & 1
        derived = kernels.reduct_fixpoint(prog, blocked)
        # conditions 1 and 2 together: the reduct model agrees with the guess on H
        if all(derived[h] == blocked[h] for h in H):
            found.append(flags_to_mask(derived))
    return ModelSet(kb.names, (1 << kb.n) - 1, found)


def non_horn_rules(kb: KnowledgeBase) -> list[int]:
    return [i for i, r in enumerate(kb.rules) if r.neg]


def neg_unions(kb: KnowledgeBase) -> list[int]:
    """Distinct Neg sets (as masks) over all subsets of the non-Horn rules, in
    order of first appearance under binary counting.  At most min(2^c, 2^k)."""
    seen: dict[int, None] = {0: None}
    for i in non_horn_rules(kb):
        r = 0
        for q in kb.rules[i].neg:
            r |= 1 << q
        for u in list(seen):
            seen.setdefault(u | r)
    return list(seen)


def _subset_negs(kb: KnowledgeBase):
    delta = [kb.rules[i] for i in non_horn_rules(kb)]
    for subset in range(1 << len(delta)):
        u = 0
        for i, r in enumerate(delta):
            if (subset >> i) & 1:
                for q in r.neg:
                    u |= 1 << q
        yield u


def all_stable2(kb: KnowledgeBase, per_subset: bool = False) -> ModelSet:
    """Enumerate subsets of the non-Horn rules, propagate, keep classical models.

    A branch depends on its subset only through Neg, the union of the atoms
    negated in the chosen rules, so by default each distinct Neg is propagated
    once.  ``per_subset`` runs all 2^c branches instead; the output is the same.
    """
    prog = kb.compiled()
    found = []
    for u in (_subset_negs(kb) if per_subset else neg_unions(kb)):
        neg = bytearray(kb.n)
        for q in bits(u):
            neg[q] = 1
        val = kernels.neg_propagate(prog, neg)
        if val is None:
            continue
        # unknown atoms default to false
        truth = val.translate(_TRUE_ONLY)
        if kernels.satisfies_all(prog, truth):
            found.append(flags_to_mask(truth))
    return ModelSet(kb.names, (1 << kb.n) - 1, found)


def choose_engine(k: int, c: int) -> str:
    """Cheaper of the two by guess count; ties go to propagation."""
    return "as1" if k < c else "as2"


def enumerate_stable(kb: KnowledgeBase, engine: str = "auto") -> tuple[ModelSet, str]:
    """Run the requested enumerator and report which one ran.

    Horn input short-circuits to the least model whatever the engine.
    """
    if engine in ("auto", "as1", "as2") and kb.is_horn:
        derived = kernels.reduct_fixpoint(kb.compiled(), bytearray(kb.n))
        return ModelSet(kb.names, (1 << kb.n) - 1, [flags_to_mask(derived)]), "horn"
    if engine == "auto":
        k = len(kb.negated_atoms())
        c = len(non_horn_rules(kb))
        engine = choose_engine(k, c)
    if engine == "as1":
        return all_stable1(kb), engine
    if engine == "as2":
        return all_stable2(kb), engine
    if engine == "brute":
        from .semantics import brute_force_stable_models

        return brute_force_stable_models(kb), engine
    raise ValueError(f"unknown engine {engine!r}")


# ---------------------------------------------------------------------------
# propagation on an explicit working copy


class WorkingKB:
    """Mutable view of a knowledge base for unit instantiation.

    Rules are never physically rewritten.  An erased rule is tombstoned, and
    an erased literal is implied by the atom's status: positive literals of
    atoms instantiated true and negative literals of atoms instantiated false
    are gone.  Copying costs one pass over the rules.
    """

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        rules = kb.rules
        self.alive = [True] * len(rules)
        self.pcnt = [len(r.pos) for r in rules]
        self.ncnt = [len(r.neg) for r in rules]
        self.made_true: set[int] = set()
        self.made_false: set[int] = set()
        n = kb.n
        self.pocc: list[list[int]] = [[] for _ in range(n)]
        self.nocc: list[list[int]] = [[] for _ in range(n)]
        self.hocc: list[list[int]] = [[] for _ in range(n)]
        for i, r in enumerate(rules):
            self.hocc[r.head].append(i)
            for p in r.pos:
                self.pocc[p].append(i)
            for q in r.neg:
                self.nocc[q].append(i)

    def copy(self) -> "WorkingKB":
        other = object.__new__(WorkingKB)
        other.kb = self.kb
        other.alive = list(self.alive)
        other.pcnt = list(self.pcnt)
        other.ncnt = list(self.ncnt)
        other.made_true = set(self.made_true)
        other.made_false = set(self.made_false)
        other.pocc, other.nocc, other.hocc = self.pocc, self.nocc, self.hocc
        return other

    def unit_rules(self) -> list[int]:
        return [
            i for i, ok in enumerate(self.alive)
            if ok and self.pcnt[i] == 0 and self.ncnt[i] == 0
        ]

    def remaining(self) -> list[Rule]:
        """The current rules with erased literals removed, in original order."""
        out = []
        for i, r in enumerate(self.kb.rules):
            if self.alive[i]:
                out.append(Rule(
                    r.head,
                    tuple(p for p in r.pos if p not in self.made_true),
                    tuple(q for q in r.neg if q not in self.made_false),
                ))
        return out

    def set_true(self, p: int) -> list[int]:
        """Erase ``p`` from bodies, then rules about ``p`` and rules with ``not p``.

        Returns rules that became unit.
        """
        self.made_true.add(p)
        fresh = []
        for r in self.pocc[p]:
            self.pcnt[r] -= 1
            if self.pcnt[r] == 0 and self.ncnt[r] == 0 and self.alive[r]:
                fresh.append(r)
        for r in self.hocc[p]:
            self.alive[r] = False
        for r in self.nocc[p]:
            self.alive[r] = False
        return fresh

    def set_false(self, p: int) -> list[int]:
        """Erase rules with ``p`` positive and the literal ``not p`` elsewhere."""
        self.made_false.add(p)
        fresh = []
        for r in self.pocc[p]:
            self.alive[r] = False
        for r in self.nocc[p]:
            self.ncnt[r] -= 1
            if self.pcnt[r] == 0 and self.ncnt[r] == 0 and self.alive[r]:
                fresh.append(r)
        return fresh


def unit_inst(work: WorkingKB, m: MutableMapping[int, bool]) -> bool:
    """Instantiate unit rules to fixpoint; False on a unit rule about a false atom."""
    queue = work.unit_rules()
    heads = work.kb.rules
    while queue:
        r = queue.pop()
        if not work.alive[r]:
            continue
        p = heads[r].head
        if m.get(p) is False:
            return False
        m[p] = True
        queue.extend(work.set_true(p))
    return True


def neg_unit_inst(work: WorkingKB, neg, m: MutableMapping[int, bool]) -> bool:
    """Instantiate ``neg`` to false, update the rules, then run unit_inst."""
    for p in sorted(neg):
        if m.get(p) is True:
            return False
        m[p] = False
        work.set_false(p)
    return unit_inst(work, m)
