"""Dependency graphs, their SCC condensation, and the Omega index.

Edges run from body atoms to head atoms.  In the condensation a node's
*children* are the components with an arc into it, so a bottom-up traversal
visits children before parents.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .kb import KnowledgeBase, Rule
from .models import bits

POSITIVE = "+"
NEGATIVE = "-"

DEFAULT_OMEGA_CAP = 1 << 62


@dataclass(frozen=True)
class DependencyGraph:
    """Signed digraph over nodes ``0..len(labels)-1``."""

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int, str], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def successors(self) -> list[list[int]]:
        succ: list[list[int]] = [[] for _ in range(self.n)]
        seen = set()
        for u, v, _ in self.edges:
            if (u, v) not in seen:
                seen.add((u, v))
                succ[u].append(v)
        return succ

    def edge_set(self, sign: str | None = None) -> set[tuple[str, str]]:
        lb = self.labels
        return {(lb[u], lb[v]) for u, v, s in self.edges if sign is None or s == sign}


def signed_edges(pairs: Iterable[tuple[int, Iterable[int], Iterable[int]]]) -> tuple[tuple[int, int, str], ...]:
    """Deduplicated edges from ``(head, pos, neg)`` triples, in first-seen order."""
    seen: dict[tuple[int, int, str], None] = {}
    for head, pos, neg in pairs:
        for p in pos:
            seen.setdefault((p, head, POSITIVE))
        for q in neg:
            seen.setdefault((q, head, NEGATIVE))
    return tuple(seen)


def build_dependency_graph(kb: KnowledgeBase) -> DependencyGraph:
    return DependencyGraph(kb.names, signed_edges((r.head, r.pos, r.neg) for r in kb.rules))


def tarjan_scc(n: int, succ: Sequence[Sequence[int]]) -> list[list[int]]:
    """Strongly connected components, iteratively.

    Components come out in reverse topological order: every component is
    emitted after all components reachable from it.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            nbrs = succ[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                comps.append(comp)
    return comps


@dataclass
class ComponentNode:
    """One SCC of the dependency graph.

    ``rules`` indexes the rules about atoms of the component; ``closure`` is
    the bitmask of every atom in the subgraph rooted here (this component
    and everything with a path into it).
    """

    index: int
    atoms: frozenset[int]
    rules: tuple[int, ...]
    mask: int = 0
    closure: int = 0
    children: list[int] = field(default_factory=list)
    parents: list[int] = field(default_factory=list)
    k: int = 0
    c: int = 0
    v: int = 1
    t: int = 1
    t_saturated: bool = False

    @property
    def closure_ids(self) -> frozenset[int]:
        return frozenset(bits(self.closure))

    @property
    def is_horn(self) -> bool:
        return self.c == 0


class SuperGraph:
    """Condensation of a dependency graph, nodes stored in topological order."""

    def __init__(self, graph: DependencyGraph, comps: list[list[int]] | None = None):
        n = graph.n
        succ = graph.successors()
        if comps is None:
            comps = tarjan_scc(n, succ)[::-1]
        self.graph = graph
        self.component_of = [0] * n
        for ci, comp in enumerate(comps):
            for a in comp:
                self.component_of[a] = ci
        self.nodes = [ComponentNode(ci, frozenset(comp), ()) for ci, comp in enumerate(comps)]
        arcs: dict[tuple[int, int], None] = {}
        for u in range(n):
            cu = self.component_of[u]
            for w in succ[u]:
                cw = self.component_of[w]
                if cu != cw:
                    arcs.setdefault((cu, cw))
        self.arcs = tuple(arcs)
        for cu, cw in self.arcs:
            if cu >= cw:
                raise AssertionError("condensation order is not topological")
            self.nodes[cw].children.append(cu)
            self.nodes[cu].parents.append(cw)
        for node in self.nodes:
            m = 0
            for a in node.atoms:
                m |= 1 << a
            node.mask = m
            for ch in node.children:
                m |= self.nodes[ch].closure
            node.closure = m

    @property
    def order(self) -> range:
        return range(len(self.nodes))

    def sinks(self) -> list[int]:
        return [nd.index for nd in self.nodes if not nd.parents]

    def sources(self) -> list[int]:
        return [nd.index for nd in self.nodes if not nd.children]

    def rooted(self, node: int) -> list[int]:
        """Indices of the subgraph rooted at ``node`` (nodes with a path to it), topologically."""
        seen = {node}
        todo = [node]
        while todo:
            for ch in self.nodes[todo.pop()].children:
                if ch not in seen:
                    seen.add(ch)
                    todo.append(ch)
        return sorted(seen)

    def node_of(self, atom: int) -> ComponentNode:
        return self.nodes[self.component_of[atom]]

    def labels_of(self, node: int) -> list[str]:
        return [self.graph.labels[a] for a in sorted(self.nodes[node].atoms)]

    def to_dot(self) -> str:
        return to_dot(self.graph, self)


def scc_condense(g: DependencyGraph) -> SuperGraph:
    return SuperGraph(g)


def build_super_graph(kb: KnowledgeBase, cap: int = DEFAULT_OMEGA_CAP) -> SuperGraph:
    """Condense and annotate every node with its rules and v/k/c/t values."""
    sg = SuperGraph(build_dependency_graph(kb))
    per_node: list[list[int]] = [[] for _ in sg.nodes]
    for i, r in enumerate(kb.rules):
        per_node[sg.component_of[r.head]].append(i)
    for node, rule_ids in zip(sg.nodes, per_node):
        node.rules = tuple(rule_ids)
        _annotate(node, [kb.rules[i] for i in rule_ids], sg, cap)
    return sg


def _annotate(node: ComponentNode, rules: list[Rule], sg: SuperGraph, cap: int) -> None:
    s = node.atoms
    inner_neg = set()
    c = 0
    for r in rules:
        hits = [q for q in r.neg if q in s]
        if hits:
            c += 1
            inner_neg.update(hits)
    node.k, node.c = len(inner_neg), c
    e = min(node.k, c)
    node.v, sat = (1 << e, False) if (1 << e) < cap else (cap, True)
    t = node.v
    for ch in node.children:
        child = sg.nodes[ch]
        t, sat = _sat_mul(t, child.t, cap, sat or child.t_saturated)
    node.t, node.t_saturated = t, sat


def _sat_mul(a: int, b: int, cap: int, sat: bool) -> tuple[int, bool]:
    p = a * b
    if p >= cap:
        return cap, True
    return p, sat


def is_stratified(kb: KnowledgeBase) -> bool:
    """No cycle through a negative edge: every negative edge crosses components."""
    g = build_dependency_graph(kb)
    sg = SuperGraph(g)
    comp = sg.component_of
    return all(comp[u] != comp[v] for u, v, s in g.edges if s == NEGATIVE)


def restrict_hat(kb: KnowledgeBase, s: Iterable[int]) -> KnowledgeBase:
    """Erase every negative occurrence of an atom outside ``s``."""
    s = frozenset(s)
    return kb.with_rules(Rule(r.head, r.pos, tuple(q for q in r.neg if q in s)) for r in kb.rules)


@dataclass(frozen=True)
class NodeIndex:
    atoms: tuple[str, ...]
    v: int
    k: int
    c: int
    t: int
    saturated: bool


@dataclass(frozen=True)
class OmegaIndex:
    """The class index ``t_Pi`` of a knowledge base plus its per-node breakdown."""

    t_pi: int
    saturated: bool
    per_node: tuple[NodeIndex, ...]

    @property
    def stratified(self) -> bool:
        return self.t_pi == 1


def omega_index(kb: KnowledgeBase, cap: int = DEFAULT_OMEGA_CAP, sg: SuperGraph | None = None) -> OmegaIndex:
    if sg is None:
        sg = build_super_graph(kb, cap)
    t, sat = 1, False
    for i in sg.sinks():
        nd = sg.nodes[i]
        t, sat = _sat_mul(t, nd.t, cap, sat or nd.t_saturated)
    per = tuple(
        NodeIndex(tuple(sg.labels_of(nd.index)), nd.v, nd.k, nd.c, nd.t, nd.t_saturated)
        for nd in sg.nodes
    )
    return OmegaIndex(t, sat, per)


def to_dot(g: DependencyGraph, sg: SuperGraph | None = None) -> str:
    """Graphviz text: one cluster per multi-atom component, dashed negative edges."""
    lines = ["digraph dependencies {"]
    if sg is not None:
        for nd in sg.nodes:
            if len(nd.atoms) > 1:
                lines.append(f"  subgraph cluster_{nd.index} {{")
                lines.append(f'    label="scc {nd.index} v={nd.v}";')
                for a in sorted(nd.atoms):
                    lines.append(f'    "{g.labels[a]}";')
                lines.append("  }")
    for a, lb in enumerate(g.labels):
        lines.append(f'  "{lb}";')
    for u, v, s in g.edges:
        style = ' [style=dashed, label="not"]' if s == NEGATIVE else ""
        lines.append(f'  "{g.labels[u]}" -> "{g.labels[v]}"{style};')
    lines.append("}")
    return "\n".join(lines) + "\n"


def label_graph(labels: Sequence[Hashable], edges: Iterable[tuple[int, int, str]]) -> DependencyGraph:
    return DependencyGraph(tuple(str(x) for x in labels), tuple(edges))
