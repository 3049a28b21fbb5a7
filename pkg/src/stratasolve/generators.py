"""Seeded random program generators for tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .firstorder import FoAtom, FoProgram, FoRule
from .kb import KnowledgeBase, Rule


@dataclass(frozen=True)
class RandomSpec:
    """Shape of a random propositional program.

    ``neg_density`` is the chance that a body literal is negative.
    """

    n: int = 8
    rules: int = 12
    max_body: int = 3
    neg_density: float = 0.4
    fact_density: float = 0.1
    choice_pairs: int = 0  # extra "a :- not b. b :- not a." gadgets


def atom_names(n: int) -> tuple[str, ...]:
    return tuple(f"p{i}" for i in range(n))


def random_kb(rng: random.Random, spec: RandomSpec = RandomSpec()) -> KnowledgeBase:
    """Uniform heads, bodies of 0..max_body distinct atoms; all n atoms are interned."""
    names = atom_names(spec.n)
    rules = []
    if spec.n == 0:
        return KnowledgeBase(names, ())
    for _ in range(spec.rules):
        head = rng.randrange(spec.n)
        if rng.random() < spec.fact_density:
            rules.append(Rule(head))
            continue
        size = rng.randint(1, min(spec.max_body, spec.n))
        body = rng.sample(range(spec.n), size)
        pos, neg = [], []
        for a in body:
            (neg if rng.random() < spec.neg_density else pos).append(a)
        rules.append(Rule.make(head, pos, neg))
    for _ in range(spec.choice_pairs if spec.n > 1 else 0):
        a, b = rng.sample(range(spec.n), 2)
        rules.append(Rule(a, (), (b,)))
        rules.append(Rule(b, (), (a,)))
    return KnowledgeBase(names, rules)


def random_corpus(seed: int, count: int, max_n: int = 12, max_rules: int = 25) -> list[KnowledgeBase]:
    """``count`` programs with sizes and negation density drawn per instance."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(1, max_n)
        pairs = rng.choice((0, 0, 1, 2, 3)) if n > 1 else 0
        spec = RandomSpec(
            n=n,
            rules=rng.randint(0, max_rules - 2 * pairs),
            max_body=rng.randint(1, 4),
            neg_density=rng.choice((0.0, 0.2, 0.4, 0.6, 0.9)),
            fact_density=rng.choice((0.0, 0.05, 0.15, 0.3)),
            choice_pairs=pairs,
        )
        out.append(random_kb(rng, spec))
    return out


def stratified_kb(rng: random.Random, n: int, rules: int, max_body: int = 3, neg_density: float = 0.4) -> KnowledgeBase:
    """A stratified program: atoms get random levels, positive bodies stay at or
    below the head's level and negative bodies strictly below it."""
    names = atom_names(n)
    level = sorted(rng.randrange(max(1, n // 4 + 1)) for _ in range(n))
    out = []
    for _ in range(rules):
        head = rng.randrange(n)
        lower = [a for a in range(n) if level[a] < level[head]]
        same = [a for a in range(n) if level[a] <= level[head]]
        body_size = rng.randint(0, max_body)
        pos, neg = [], []
        for _ in range(body_size):
            if lower and rng.random() < neg_density:
                neg.append(rng.choice(lower))
            else:
                pos.append(rng.choice(same))
        out.append(Rule.make(head, pos, neg))
    return KnowledgeBase(names, out)


def layered_stratified_kb(length: int, seed: int = 0, width: int = 8) -> KnowledgeBase:
    """Stratified program of roughly ``length`` literal occurrences.

    Layers of ``width`` atoms; each rule reads one or two atoms of the layer
    below, half of them negatively.  Used for linear scaling checks.
    """
    rng = random.Random(seed)
    names: list[str] = []
    rules: list[Rule] = []
    total = 0
    prev: list[int] = []
    layer = 0
    while total < length:
        cur = list(range(len(names), len(names) + width))
        names.extend(f"l{layer}_{j}" for j in range(width))
        for a in cur:
            if not prev:
                if rng.random() < 0.5:
                    rules.append(Rule(a))
                    total += 1
                continue
            pos = [rng.choice(prev)]
            neg = [rng.choice(prev)] if rng.random() < 0.5 else []
            if neg and neg[0] == pos[0]:
                neg = []
            r = Rule.make(a, pos, neg)
            rules.append(r)
            total += len(r)
        prev = cur
        layer += 1
    return KnowledgeBase(names, rules)


def random_nogoods(rng: random.Random, n: int, count: int, max_size: int = 3) -> list[frozenset[int]]:
    if n == 0:
        return []
    return [frozenset(rng.sample(range(n), rng.randint(1, min(max_size, n)))) for _ in range(count)]


def random_fo_program(
    rng: random.Random,
    constants: int = 2,
    predicates: int = 5,
    rules: int = 6,
    neg_density: float = 0.35,
    max_arity: int = 2,
    herbrand_cap: int = 14,
    choice_pairs: int = 0,
) -> FoProgram:
    """A safe function-free program whose Herbrand base has at most ``herbrand_cap`` atoms.

    Every rule has one positive body atom binding all of its variables, so
    safety holds by construction.
    """
    consts = [f"c{i}" for i in range(max(1, constants))]
    arity: dict[str, int] = {}
    budget = herbrand_cap
    for i in range(predicates):
        choices = [a for a in range(max_arity + 1) if len(consts) ** a <= budget]
        if not choices:
            break
        # repeat the previous arity often so that same-arity predicates exist
        prev = list(arity.values())[-1:]
        a = prev[0] if prev and prev[0] in choices and rng.random() < 0.6 else rng.choice(choices)
        arity[f"q{i}"] = a
        budget -= len(consts) ** a
    preds = list(arity)
    variables = ["X", "Y"]

    def atom_over(pred: str, pool: list[str]) -> FoAtom:
        return FoAtom(pred, tuple(rng.choice(pool) for _ in range(arity[pred])))

    out: list[FoRule] = []
    for _ in range(rules):
        head_pred = rng.choice(preds)
        if rng.random() < 0.3:
            out.append(FoRule(FoAtom(head_pred, tuple(rng.choice(consts) for _ in range(arity[head_pred])))))
            continue
        # the binder: a positive atom carrying the rule's variables
        binder_pred = rng.choice(preds)
        k = arity[binder_pred]
        binder = FoAtom(binder_pred, tuple(rng.choice(variables + consts) for _ in range(k)))
        bound = [t for t in binder.args if t in variables]
        pool = bound + consts
        head = atom_over(head_pred, pool)
        pos, neg = [binder], []
        for _ in range(rng.randint(0, 2)):
            lit = atom_over(rng.choice(preds), pool)
            (neg if rng.random() < neg_density else pos).append(lit)
        out.append(FoRule(head, tuple(pos), tuple(neg)))
    # even loops p(V) :- d(V), not q(V).  q(V) :- d(V), not p(V).
    for _ in range(choice_pairs):
        d = rng.choice(preds)
        same = [p for p in preds if arity[p] == arity[d] and p != d]
        if len(same) < 2:
            continue
        p, q = rng.sample(same, 2)
        vs = tuple(variables[: arity[d]])
        out.append(FoRule(FoAtom(p, vs), (FoAtom(d, vs),), (FoAtom(q, vs),)))
        out.append(FoRule(FoAtom(q, vs), (FoAtom(d, vs),), (FoAtom(p, vs),)))
        out.append(FoRule(FoAtom(d, tuple(rng.choice(consts) for _ in vs))))
    # facts so that something gets derived
    for _ in range(rng.randint(1, 3)):
        p = rng.choice(preds)
        out.append(FoRule(FoAtom(p, tuple(rng.choice(consts) for _ in range(arity[p])))))
    return FoProgram(out)
