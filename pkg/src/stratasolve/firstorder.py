"""Function-free first-order programs: safety, grounding, and per-component solving.

Variables start with an uppercase letter or underscore; everything else in
argument position is a constant.  A ground atom is named ``pred(c1,c2)``
with no whitespace, which is also legal propositional syntax, so ground
programs round-trip through :func:`stratasolve.kb.parse_kb`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .aas import Nogood, _product, aas_solve
from .graphs import DependencyGraph, SuperGraph, signed_edges
from .kb import KnowledgeBase, Rule, is_variable, parse_statements
from .models import ModelSet, bits


class ProgramError(ValueError):
    pass


class SafetyError(ProgramError):
    def __init__(self, violations: list["SafetyViolation"]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations


@dataclass(frozen=True)
class FoAtom:
    pred: str
    args: tuple[str, ...] = ()

    def variables(self) -> list[str]:
        return [t for t in self.args if is_variable(t)]

    @property
    def is_ground(self) -> bool:
        return not self.variables()

    def substitute(self, theta: dict[str, str]) -> "FoAtom":
        return FoAtom(self.pred, tuple(theta.get(t, t) for t in self.args))

    def __str__(self) -> str:
        return self.pred if not self.args else f"{self.pred}({','.join(self.args)})"


@dataclass(frozen=True)
class FoRule:
    head: FoAtom
    pos: tuple[FoAtom, ...] = ()
    neg: tuple[FoAtom, ...] = ()

    def variables(self) -> list[str]:
        """Distinct variables in order of first appearance."""
        seen: dict[str, None] = {}
        for a in (self.head, *self.pos, *self.neg):
            for v in a.variables():
                seen.setdefault(v)
        return list(seen)

    def __str__(self) -> str:
        body = [str(a) for a in self.pos] + ["not " + str(a) for a in self.neg]
        return f"{self.head} :- {', '.join(body)}." if body else f"{self.head}."


@dataclass(frozen=True)
class SafetyViolation:
    rule: int
    variable: str
    text: str

    def __str__(self) -> str:
        return f"rule {self.rule + 1} ({self.text}): variable {self.variable} is unsafe"


class FoProgram:
    """Rules plus ground nogoods, with fixed arity per predicate."""

    def __init__(self, rules: Iterable[FoRule], nogoods: Iterable[Iterable[FoAtom]] = ()):
        self.rules = tuple(rules)
        self.nogoods = tuple(tuple(ng) for ng in nogoods)
        arity: dict[str, int] = {}
        for a in self.all_atoms():
            if arity.setdefault(a.pred, len(a.args)) != len(a.args):
                raise ProgramError(
                    f"predicate {a.pred!r} used with arities {arity[a.pred]} and {len(a.args)}"
                )
        self.arity = arity
        for ng in self.nogoods:
            for a in ng:
                if not a.is_ground:
                    raise ProgramError(f"nogood atom {a} is not ground")

    def all_atoms(self) -> Iterable[FoAtom]:
        for r in self.rules:
            yield r.head
            yield from r.pos
            yield from r.neg
        for ng in self.nogoods:
            yield from ng

    @property
    def predicates(self) -> list[str]:
        """Predicate names in order of first appearance."""
        return list(self.arity)

    @property
    def is_ground(self) -> bool:
        return all(not r.variables() for r in self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)


def parse_program(text: str) -> FoProgram:
    rules = []
    nogoods = []

    def conv(raw) -> FoAtom:
        return FoAtom(raw.pred, raw.args)

    for st in parse_statements(text):
        if st.kind == "nogood":
            nogoods.append([conv(a) for a in st.pos])
            continue
        pos = list(dict.fromkeys(conv(a) for a in st.pos))
        neg = list(dict.fromkeys(conv(a) for a in st.neg))
        rules.append(FoRule(conv(st.head), tuple(pos), tuple(neg)))
    return FoProgram(rules, nogoods)


def is_first_order(text: str) -> bool:
    """Whether the source uses variables (otherwise it is a propositional program)."""
    return any(
        is_variable(t)
        for st in parse_statements(text)
        for a in ((st.head,) if st.head else ()) + st.pos + st.neg
        for t in a.args
    )


def check_safe(program: FoProgram | Iterable[FoRule]) -> list[SafetyViolation]:
    """Every head or negative-body variable must occur in a positive body atom."""
    rules = program.rules if isinstance(program, FoProgram) else tuple(program)
    out = []
    for i, r in enumerate(rules):
        bound = {v for a in r.pos for v in a.variables()}
        needed: dict[str, None] = {}
        for a in (r.head, *r.neg):
            for v in a.variables():
                needed.setdefault(v)
        for v in needed:
            if v not in bound:
                out.append(SafetyViolation(i, v, str(r)))
    return out


def herbrand_universe(program: FoProgram) -> list[str]:
    return sorted({t for a in program.all_atoms() for t in a.args if not is_variable(t)})


def predicate_graph(program: FoProgram) -> DependencyGraph:
    """Predicate-level signed dependency graph."""
    preds = program.predicates
    where = {p: i for i, p in enumerate(preds)}
    triples = (
        (where[r.head.pred], [where[a.pred] for a in r.pos], [where[a.pred] for a in r.neg])
        for r in program.rules
    )
    return DependencyGraph(tuple(preds), signed_edges(triples))


# ---------------------------------------------------------------------------
# grounding


def _instances(rule: FoRule, constants: Sequence[str]) -> Iterable[dict[str, str]]:
    vs = rule.variables()
    for combo in itertools.product(constants, repeat=len(vs)):
        yield dict(zip(vs, combo))


def _guided_instances(rule: FoRule, possible: dict[str, list[tuple[str, ...]]]) -> Iterable[dict[str, str]]:
    """Substitutions under which every positive body atom is in ``possible``."""
    body = rule.pos

    def extend(i: int, theta: dict[str, str]):
        if i == len(body):
            yield dict(theta)
            return
        atom = body[i]
        for args in possible.get(atom.pred, ()):
            new = dict(theta)
            ok = True
            for t, c in zip(atom.args, args):
                if is_variable(t):
                    if new.setdefault(t, c) != c:
                        ok = False
                        break
                elif t != c:
                    ok = False
                    break
            if ok:
                yield from extend(i + 1, new)

    seen = set()
    for theta in extend(0, {}):
        key = tuple(sorted(theta.items()))
        if key not in seen:
            seen.add(key)
            yield theta


def ground_rules(
    rules: Sequence[FoRule],
    constants: Sequence[str],
    facts: Iterable[FoAtom] | None = None,
) -> list[tuple[str, list[str], list[str]]]:
    """Ground instances as ``(head, pos, neg)`` name triples.

    Without ``facts`` every substitution over ``constants`` is produced.
    With ``facts`` (ground atoms that may be true outside ``rules``) only
    instances whose positive body is possibly derivable are produced; the
    set of possibly derivable atoms is the least fixpoint ignoring negation.
    """
    out = []
    if facts is None:
        for r in rules:
            for theta in _instances(r, constants):
                out.append((
                    str(r.head.substitute(theta)),
                    [str(a.substitute(theta)) for a in r.pos],
                    [str(a.substitute(theta)) for a in r.neg],
                ))
        return out
    possible: dict[str, list[tuple[str, ...]]] = {}
    known: set[FoAtom] = set()

    def add(a: FoAtom) -> bool:
        if a in known:
            return False
        known.add(a)
        possible.setdefault(a.pred, []).append(a.args)
        return True

    for f in facts:
        add(f)
    changed = True
    while changed:
        changed = False
        for r in rules:
            for theta in list(_guided_instances(r, possible)):
                if add(r.head.substitute(theta)):
                    changed = True
    for r in rules:
        for theta in _guided_instances(r, possible):
            out.append((
                str(r.head.substitute(theta)),
                [str(a.substitute(theta)) for a in r.pos],
                [str(a.substitute(theta)) for a in r.neg],
            ))
    return out


def ground(program: FoProgram, guided: bool = False) -> KnowledgeBase:
    """Propositional image: every ground instance of every rule.

    ``guided`` keeps only instances whose positive body is possibly
    derivable, which yields the same stable models.
    """
    violations = check_safe(program)
    if violations:
        raise SafetyError(violations)
    constants = herbrand_universe(program)
    triples = ground_rules(program.rules, constants, facts=[] if guided else None)
    nogoods = [[str(a) for a in ng] for ng in program.nogoods]
    return KnowledgeBase.from_named(triples, nogoods=nogoods)


# ---------------------------------------------------------------------------
# FAAS


@dataclass
class FaasNodeTrace:
    predicates: tuple[str, ...]
    closure_predicates: frozenset[str]
    created_predicates: frozenset[str]
    inputs: int
    models: int


class _Table:
    """Growing table of ground atom names, with per-predicate id masks."""

    def __init__(self):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.pred_mask: dict[str, int] = {}

    def intern(self, name: str) -> int:
        i = self.index.get(name)
        if i is None:
            i = self.index[name] = len(self.names)
            self.names.append(name)
            pred = name.split("(", 1)[0]
            self.pred_mask[pred] = self.pred_mask.get(pred, 0) | (1 << i)
        return i


def faas_solve(
    program: FoProgram,
    guided: bool = False,
    engine: str = "auto",
    trace: list[FaasNodeTrace] | None = None,
) -> ModelSet:
    """Stable models of a first-order program, grounding one component at a time.

    At each predicate component the rules about it are grounded and solved
    together with unit facts for the true atoms of each child model.  The
    result is a ModelSet over the ground atoms met along the way.
    """
    violations = check_safe(program)
    if violations:
        raise SafetyError(violations)
    constants = herbrand_universe(program)
    pg = predicate_graph(program)
    sg = SuperGraph(pg)
    preds = pg.labels
    where = {p: i for i, p in enumerate(preds)}
    rules_of: list[list[FoRule]] = [[] for _ in sg.nodes]
    for r in program.rules:
        rules_of[sg.component_of[where[r.head.pred]]].append(r)
    table = _Table()
    closure_preds: list[frozenset[str]] = []
    M: list[ModelSet] = []
    for nd in sg.nodes:
        cp = frozenset(preds[a] for a in nd.atoms).union(*(closure_preds[c] for c in nd.children))
        closure_preds.append(cp)
        before = len(table.names)
        _, inputs = _product([M[c] for c in nd.children])
        local = rules_of[nd.index]
        fixed = None if guided else ground_rules(local, constants)
        found = []
        for m in inputs:
            facts = [table.names[a] for a in bits(m)]
            if fixed is None:
                fo_facts = [_parse_ground(f) for f in facts]
                triples = ground_rules(local, constants, facts=fo_facts)
            else:
                triples = fixed
            frag = KnowledgeBase.from_named(
                [(f, (), ()) for f in facts] + triples
            )
            to_global = [table.intern(name) for name in frag.names]
            for lm in aas_solve(frag, nogoods=(), engine=engine).masks:
                g = 0
                for b in bits(lm):
                    g |= 1 << to_global[b]
                found.append(g)
        domain = 0
        for p in cp:
            domain |= table.pred_mask.get(p, 0)
        ms = ModelSet(table.names, domain, found, presorted=True)
        M.append(ms)
        if trace is not None:
            created = frozenset(n.split("(", 1)[0] for n in table.names[before:])
            trace.append(FaasNodeTrace(
                tuple(preds[a] for a in sorted(nd.atoms)), cp, created, len(inputs), len(ms)
            ))
    # atoms mentioned by the program but never grounded still belong to the base
    for a in program.all_atoms():
        if a.is_ground:
            table.intern(str(a))
    _, masks = _product([M[i] for i in sg.sinks()])
    for ng in program.nogoods:
        ngm = 0
        for a in ng:
            ngm |= 1 << table.intern(str(a))
        masks = [g for g in masks if g & ngm != ngm]
    names = tuple(table.names)
    return ModelSet(names, (1 << len(names)) - 1, masks)


def _parse_ground(name: str) -> FoAtom:
    if "(" not in name:
        return FoAtom(name)
    pred, rest = name.split("(", 1)
    return FoAtom(pred, tuple(rest[:-1].split(",")))


def ground_nogoods(program: FoProgram, kb: KnowledgeBase) -> list[Nogood]:
    return [Nogood(kb.ids(str(a) for a in ng)) for ng in program.nogoods]
