"""Bottom-up stable model computation over the super dependency graph.

Each component ``s`` is solved once per model of its children: the rules
about ``s`` are simplified against the child model (``convert``), the
result is handed to a flat enumerator, and every local model is glued onto
the child model.  ``M_s`` then holds models total over the closure ``A_s``.
Models are integer bitmasks over the global atom table throughout.
"""

from __future__ import annotations

import hashlib
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .enumerators import choose_engine, enumerate_stable
from .graphs import SuperGraph, build_super_graph
from .kb import KnowledgeBase, PartialInterpretation, Rule
from .models import ModelSet, bits, mask_of

__all__ = [
    "Nogood",
    "NodeStats",
    "NodeCache",
    "AASSolver",
    "QueryResult",
    "convert",
    "cartes_prod",
    "aas_solve",
    "solve_one",
    "query_atom",
    "update_and_resolve",
]


@dataclass(frozen=True)
class Nogood:
    """At least one member atom must be false in every accepted model."""

    atoms: frozenset[int]

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("empty nogood")

    @property
    def mask(self) -> int:
        return mask_of(self.atoms)

    def complies(self, model: int | Iterable[int]) -> bool:
        m = model if isinstance(model, int) else mask_of(model)
        return (m & self.mask) != self.mask


@dataclass
class NodeStats:
    index: int
    atoms: tuple[str, ...]
    v: int
    k: int
    c: int
    t: int
    engine: str
    inputs: int = 0
    models: int = 0
    recomputed: bool = True
    nogoods: int = 0

    def as_dict(self) -> dict:
        return {
            "atoms": list(self.atoms),
            "v": self.v,
            "k": self.k,
            "c": self.c,
            "t": self.t,
            "engine": self.engine,
            "inputs": self.inputs,
            "models": self.models,
            "recomputed": self.recomputed,
            "nogoods": self.nogoods,
        }


# ---------------------------------------------------------------------------
# Convert and CartesProd


def _convert(
    kb: KnowledgeBase,
    rule_ids: Sequence[int],
    m: int,
    s: frozenset[int],
    strict: bool = False,
) -> tuple[KnowledgeBase, list[int]]:
    """Simplify the rules about ``s`` against the child model ``m`` (a bitmask).

    Returns the result over a local atom table and the local-to-global id map.
    The local table lists ``s`` first (ascending id).
    """
    local_of: dict[int, int] = {}
    to_global: list[int] = []

    def local(a: int) -> int:
        i = local_of.get(a)
        if i is None:
            i = local_of[a] = len(to_global)
            to_global.append(a)
        return i

    for a in sorted(s):
        local(a)
    out = []
    rules = kb.rules
    for ri in rule_ids:
        r = rules[ri]
        pos = []
        dead = False
        for p in r.pos:
            if p in s:
                pos.append(local(p))
            elif (m >> p) & 1:
                continue
            elif strict:
                pos.append(local(p))
            else:
                dead = True
                break
        if dead:
            continue
        neg = []
        for q in r.neg:
            if q in s:
                neg.append(local(q))
            elif (m >> q) & 1:
                dead = True
                break
        if dead:
            continue
        out.append(Rule(local_of[r.head], tuple(pos), tuple(neg)))
    names = kb.names
    return KnowledgeBase([names[a] for a in to_global], out), to_global


def convert(
    kb: KnowledgeBase,
    rules: Iterable[Rule],
    m: PartialInterpretation,
    s: Iterable[int],
    strict: bool = False,
) -> KnowledgeBase:
    """Public form of the per-node simplification.

    ``rules`` must be rules of ``kb`` about atoms of ``s``; ``m`` gives the
    child atoms' values (atoms it leaves unknown count as false).
    """
    index = {r: i for i, r in enumerate(kb.rules)}
    rule_ids = [index[r] for r in rules]
    local_kb, _ = _convert(kb, rule_ids, mask_of(m.true), frozenset(s), strict)
    return local_kb


def _product(sets: Sequence[ModelSet]) -> tuple[int, list[int]]:
    """Consistent combinations, one model per input set; unsorted."""
    domain = 0
    acc = [0]
    for ms in sets:
        E = ms.domain
        D = domain
        nxt = []
        for a in acc:
            a_e = a & E
            for b in ms.masks:
                if a_e == b & D:
                    nxt.append(a | b)
        acc = nxt
        domain |= E
        if not acc:
            break
    return domain, acc


def cartes_prod(sets: Sequence[ModelSet], names: Sequence[str] | None = None) -> ModelSet:
    """Consistent part of the Cartesian product; ``{∅}`` for no inputs."""
    if names is None:
        names = sets[0].names if sets else ()
    domain = 0
    for ms in sets:
        domain |= ms.domain
    _, masks = _product(sets)
    return ModelSet(names, domain, masks)


# ---------------------------------------------------------------------------
# per-node cache for incremental recomputation


class NodeCache:
    """Solved ``M_s`` sets keyed by a digest of the node's rooted subgraph.

    A digest covers the component's atoms, its rules, the nogoods attached
    to it, and (recursively) the digests of its children, so a hit means the
    whole rooted subgraph is unchanged.
    """

    def __init__(self):
        self.entries: dict[str, ModelSet] = {}
        self.kb: KnowledgeBase | None = None
        self.nogoods: list[Nogood] = []
        self.stats: list[NodeStats] = []
        self.lock = threading.Lock()

    def __len__(self) -> int:
        return len(self.entries)


def _rule_text(kb: KnowledgeBase, r: Rule) -> str:
    nm = kb.names
    return "{}:{}:{}".format(
        nm[r.head], ",".join(sorted(nm[p] for p in r.pos)), ",".join(sorted(nm[q] for q in r.neg))
    )


# ---------------------------------------------------------------------------
# the solver


class AASSolver:
    """Bottom-up traversal state for one knowledge base.

    ``engine`` is ``auto`` (cheaper enumerator per node), ``as1``, ``as2``
    or ``brute``.  ``strict_convert`` keeps rules whose positive body holds
    a false child atom instead of dropping them.
    """

    def __init__(
        self,
        kb: KnowledgeBase,
        nogoods: Iterable[Nogood | Iterable[int]] | None = None,
        engine: str = "auto",
        strict_convert: bool = False,
        parallel: bool = False,
        cache: NodeCache | None = None,
        sg: SuperGraph | None = None,
    ):
        self.kb = kb
        self.sg = sg if sg is not None else build_super_graph(kb)
        self.engine = engine
        self.strict = strict_convert
        self.parallel = parallel
        self.cache = cache
        if nogoods is None:
            nogoods = kb.nogoods
        self.nogoods = [ng if isinstance(ng, Nogood) else Nogood(frozenset(ng)) for ng in nogoods]
        nodes = self.sg.nodes
        self.M: list[ModelSet | None] = [None] * len(nodes)
        self.stats: list[NodeStats | None] = [None] * len(nodes)
        self.node_nogoods: list[list[Nogood]] = [[] for _ in nodes]
        self.final_nogoods: list[Nogood] = []
        for ng in self.nogoods:
            ngm = ng.mask
            for nd in nodes:
                if nd.closure & ngm == ngm:
                    self.node_nogoods[nd.index].append(ng)
                    break
            else:
                self.final_nogoods.append(ng)
        self._digests: list[str] | None = None

    # -- helpers ----------------------------------------------------------

    def node_engine(self, i: int) -> str:
        nd = self.sg.nodes[i]
        if self.engine != "auto":
            return self.engine
        if nd.c == 0:
            return "horn"
        return choose_engine(nd.k, nd.c)

    def digests(self) -> list[str]:
        if self._digests is None:
            kb = self.kb
            out: list[str] = []
            for nd in self.sg.nodes:
                h = hashlib.sha1()
                h.update(" ".join(sorted(kb.names[a] for a in nd.atoms)).encode())
                h.update(b"|")
                h.update("\n".join(sorted(_rule_text(kb, kb.rules[r]) for r in nd.rules)).encode())
                h.update(b"|")
                for ng in self.node_nogoods[nd.index]:
                    h.update((" ".join(sorted(kb.names[a] for a in ng.atoms)) + ";").encode())
                h.update(b"|")
                h.update(",".join(sorted(out[c] for c in nd.children)).encode())
                out.append(h.hexdigest())
            self._digests = out
        return self._digests

    def local_models(self, i: int, m: int) -> list[int]:
        """Models of node ``i`` extending child model ``m``, nogoods of the node applied."""
        nd = self.sg.nodes[i]
        engine = self.node_engine(i)
        local_kb, to_global = _convert(self.kb, nd.rules, m, nd.atoms, self.strict)
        found, _ = enumerate_stable(local_kb, "auto" if engine == "horn" else engine)
        out = []
        for lm in found.masks:
            g = m
            for b in bits(lm):
                g |= 1 << to_global[b]
            out.append(g)
        for ng in self.node_nogoods[i]:
            ngm = ng.mask
            out = [g for g in out if g & ngm != ngm]
        return out

    # -- full enumeration ---------------------------------------------------

    def solve_node(self, i: int) -> ModelSet:
        nd = self.sg.nodes[i]
        st = NodeStats(
            i, tuple(self.sg.labels_of(i)), nd.v, nd.k, nd.c, nd.t, self.node_engine(i)
        )
        key = None
        if self.cache is not None:
            key = self.digests()[i]
            with self.cache.lock:
                hit = self.cache.entries.get(key)
            if hit is not None:
                ms = ModelSet(self.kb.names, hit.domain, hit.masks, presorted=True)
                st.recomputed = False
                st.models = len(ms)
                st.nogoods = len(self.node_nogoods[i])
                self.M[i], self.stats[i] = ms, st
                return ms
        children = [self.M[c] for c in nd.children]
        if any(ch is None for ch in children):
            raise RuntimeError(f"node {i} visited before its children")
        _, inputs = _product(children)
        st.inputs = len(inputs)
        found = []
        for m in inputs:
            found.extend(self.local_models(i, m))
        ms = ModelSet(self.kb.names, nd.closure, found, presorted=True)
        st.models = len(ms)
        st.nogoods = len(self.node_nogoods[i])
        self.M[i], self.stats[i] = ms, st
        if key is not None:
            with self.cache.lock:
                self.cache.entries[key] = ms
        return ms

    def solve_nodes(self, indices: Iterable[int]) -> None:
        """Solve the given nodes (closed under children) bottom-up, skipping solved ones."""
        todo = [i for i in sorted(indices) if self.M[i] is None]
        if not self.parallel or len(todo) < 2:
            for i in todo:
                self.solve_node(i)
            return
        # level = longest path from a source; nodes of one level are independent
        level: dict[int, int] = {}
        for i in todo:
            level[i] = 1 + max((level.get(c, -1) for c in self.sg.nodes[i].children), default=-1)
        by_level: dict[int, list[int]] = {}
        for i, lv in level.items():
            by_level.setdefault(lv, []).append(i)
        with ThreadPoolExecutor() as pool:
            for lv in sorted(by_level):
                list(pool.map(self.solve_node, by_level[lv]))

    def solve(self) -> ModelSet:
        self.solve_nodes(self.sg.order)
        sinks = [self.M[i] for i in self.sg.sinks()]
        _, masks = _product(sinks)
        for ng in self.final_nogoods:
            ngm = ng.mask
            masks = [g for g in masks if g & ngm != ngm]
        if self.cache is not None:
            live = set(self.digests())
            with self.cache.lock:
                for k in [k for k in self.cache.entries if k not in live]:
                    del self.cache.entries[k]
            self.cache.kb = self.kb
            self.cache.nogoods = list(self.nogoods)
            self.cache.stats = list(self.stats)
        return ModelSet(self.kb.names, (1 << self.kb.n) - 1, masks)

    # -- one model -------------------------------------------------------

    def solve_one(self) -> int | None:
        """Depth-first: one model per node, chronological backtracking on dead ends."""
        nodes = self.sg.nodes
        count = len(nodes)
        chosen = [0] * count
        frames: list[list[int]] = []
        pos = 0
        while True:
            if pos == count:
                g = 0
                for i in self.sg.sinks():
                    g |= chosen[i]
                if all(ng.complies(g) for ng in self.final_nogoods):
                    return g
                pos -= 1
            else:
                m = 0
                for c in nodes[pos].children:
                    m |= chosen[c]
                frames.append(self.local_models(pos, m)[::-1])
            # take the next untried model, backtracking over exhausted nodes
            while frames and not frames[-1]:
                frames.pop()
            if not frames:
                return None
            pos = len(frames) - 1
            chosen[pos] = frames[-1].pop()
            pos += 1


def aas_solve(
    kb: KnowledgeBase,
    nogoods: Iterable[Nogood | Iterable[int]] | None = None,
    engine: str = "auto",
    strict_convert: bool = False,
    parallel: bool = False,
    cache: NodeCache | None = None,
) -> ModelSet:
    """All stable models (complying with ``nogoods``; defaults to the kb's own)."""
    return AASSolver(kb, nogoods, engine, strict_convert, parallel, cache).solve()


def solve_one(
    kb: KnowledgeBase,
    nogoods: Iterable[Nogood | Iterable[int]] | None = None,
    engine: str = "auto",
    strict_convert: bool = False,
) -> PartialInterpretation | None:
    g = AASSolver(kb, nogoods, engine, strict_convert).solve_one()
    if g is None:
        return None
    return PartialInterpretation.total(bits(g), range(kb.n))


@dataclass
class QueryResult:
    answer: bool
    early_stop: bool
    visited: list[int] = field(default_factory=list)
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.answer


def query_atom(
    kb: KnowledgeBase,
    atom: int | str,
    mode: str = "cautious",
    nogoods: Iterable[Nogood | Iterable[int]] | None = None,
    engine: str = "auto",
) -> QueryResult:
    """Cautious (true in every stable model) or brave (true in some) query.

    Only the subgraph rooted at the atom's component is solved first.  Every
    stable model projects onto a model of that node, so ``cautious`` can
    answer yes, and ``brave`` no, from that node alone; otherwise the rest of
    the graph is solved.  A kb without stable models answers every cautious
    query yes and every brave query no.
    """
    if mode not in ("cautious", "brave"):
        raise ValueError(f"unknown query mode {mode!r}")
    P = kb.id(atom) if isinstance(atom, str) else atom
    solver = AASSolver(kb, nogoods, engine)
    sg = solver.sg
    home = sg.component_of[P]
    sub = sg.rooted(home)
    solver.solve_nodes(sub)
    local = solver.M[home]
    bit = 1 << P
    holds = [bool(g & bit) for g in local.masks]
    final_ng = bool(solver.final_nogoods)
    if not final_ng:
        if mode == "cautious" and all(holds):
            return QueryResult(True, True, sub, len(sg.nodes))
        if mode == "brave" and not any(holds):
            return QueryResult(False, True, sub, len(sg.nodes))
    models = solver.solve()
    visited = [i for i in sg.order]
    if mode == "cautious":
        return QueryResult(all(g & bit for g in models.masks), False, visited, len(sg.nodes))
    return QueryResult(any(g & bit for g in models.masks), False, visited, len(sg.nodes))


def update_and_resolve(
    cache: NodeCache,
    added_rules: Iterable[Rule | tuple[str, Iterable[str], Iterable[str]]] = (),
    kb: KnowledgeBase | None = None,
    engine: str = "auto",
    strict_convert: bool = False,
) -> ModelSet:
    """Re-solve after adding rules, reusing every cached node whose rooted subgraph is intact.

    ``added_rules`` are name triples (or Rules over the cached kb's ids).
    Alternatively pass the full new ``kb`` directly.  Per-node ``recomputed``
    flags land in ``cache.stats``.
    """
    if kb is None:
        if cache.kb is None:
            raise ValueError("cache holds no knowledge base; pass kb")
        base = cache.kb
        named = []
        for r in added_rules:
            if isinstance(r, Rule):
                named.append((base.name(r.head), [base.name(p) for p in r.pos], [base.name(q) for q in r.neg]))
            else:
                named.append(r)
        kb = base.extend(named)
    old_names = cache.kb.names if cache.kb is not None else ()
    if tuple(kb.names[: len(old_names)]) != tuple(old_names):
        _remap_cache(cache, old_names, kb)
    nogoods = [Nogood(kb.ids(cache.kb.names_of(ng.atoms))) for ng in cache.nogoods] if cache.kb is not None else None
    return AASSolver(kb, nogoods, engine, strict_convert, cache=cache).solve()


def _remap_cache(cache: NodeCache, old_names: Sequence[str], kb: KnowledgeBase) -> None:
    """Translate cached bitmasks when atom ids moved between knowledge bases."""
    where = {name: i for i, name in enumerate(kb.names)}
    out = {}
    for key, ms in cache.entries.items():
        if not all(old_names[a] in where for a in bits(ms.domain)):
            continue

        def move(mask: int) -> int:
            g = 0
            for a in bits(mask):
                g |= 1 << where[old_names[a]]
            return g

        out[key] = ModelSet(kb.names, move(ms.domain), [move(x) for x in ms.masks], presorted=True)
    cache.entries = out
