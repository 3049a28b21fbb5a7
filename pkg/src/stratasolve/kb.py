"""Rule-language data model and parser.

A knowledge base is an ordered list of normal rules ``head :- pos, not neg``
over interned propositional atoms.  Atoms are identified by dense integer ids
assigned in order of first appearance in the source text; every deterministic
ordering in the package (model output, conflict reporting) is by atom id.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Atom",
    "Rule",
    "KnowledgeBase",
    "PartialInterpretation",
    "ParseError",
    "ConflictError",
    "DuplicateLiteralWarning",
    "parse_kb",
    "satisfies_body",
    "satisfies_rule",
    "combine",
]


class ParseError(ValueError):
    """Syntax error in rule-language source, carrying a 1-based position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ConflictError(ValueError):
    """Two interpretations disagree on an atom."""

    def __init__(self, atom: int):
        super().__init__(f"interpretations disagree on atom {atom}")
        self.atom = atom


class DuplicateLiteralWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Atom:
    id: int
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Rule:
    """A normal rule.  ``pos`` and ``neg`` hold atom ids, duplicate free and sorted."""

    head: int
    pos: tuple[int, ...] = ()
    neg: tuple[int, ...] = ()

    @classmethod
    def make(cls, head: int, pos: Iterable[int] = (), neg: Iterable[int] = ()) -> "Rule":
        return cls(head, tuple(sorted(set(pos))), tuple(sorted(set(neg))))

    @property
    def is_horn(self) -> bool:
        return not self.neg

    @property
    def is_unit(self) -> bool:
        return not self.pos and not self.neg

    def atoms(self) -> set[int]:
        return {self.head, *self.pos, *self.neg}

    def __len__(self) -> int:
        return 1 + len(self.pos) + len(self.neg)


class KnowledgeBase:
    """An immutable set of rules over an atom table.

    The atom table may contain atoms that occur in no rule; such atoms are
    false in every stable model.  ``nogoods`` carries ``#nogood`` statements
    read by the parser; it has no effect on the stable models themselves.
    """

    __slots__ = ("_names", "_index", "_rules", "_nogoods", "_length", "_compiled")

    def __init__(
        self,
        names: Sequence[str],
        rules: Iterable[Rule],
        nogoods: Iterable[Iterable[int]] = (),
    ):
        self._names = tuple(names)
        self._index = {name: i for i, name in enumerate(self._names)}
        if len(self._index) != len(self._names):
            raise ValueError("duplicate atom name in atom table")
        self._rules = tuple(rules)
        n = len(self._names)
        for r in self._rules:
            for a in (r.head, *r.pos, *r.neg):
                if not 0 <= a < n:
                    raise ValueError(f"rule references unknown atom id {a}")
        ngs = []
        for ng in nogoods:
            ng = frozenset(ng)
            if not ng or any(not 0 <= a < n for a in ng):
                raise ValueError("nogood must be a nonempty set of known atoms")
            ngs.append(ng)
        self._nogoods = tuple(ngs)
        self._length = sum(len(r) for r in self._rules)
        self._compiled = None

    @classmethod
    def from_named(
        cls,
        rules: Iterable[tuple[str, Iterable[str], Iterable[str]]],
        names: Iterable[str] = (),
        nogoods: Iterable[Iterable[str]] = (),
    ) -> "KnowledgeBase":
        """Build from ``(head, pos, neg)`` name triples, interning by first appearance."""
        table: dict[str, int] = {}

        def intern(name: str) -> int:
            if name not in table:
                table[name] = len(table)
            return table[name]

        for name in names:
            intern(name)
        built = []
        for head, pos, neg in rules:
            h = intern(head)
            built.append(Rule.make(h, [intern(p) for p in pos], [intern(q) for q in neg]))
        ng_ids = [[intern(a) for a in ng] for ng in nogoods]
        return cls(list(table), built, ng_ids)

    # -- accessors ---------------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def atoms(self) -> tuple[Atom, ...]:
        return tuple(Atom(i, name) for i, name in enumerate(self._names))

    @property
    def rules(self) -> tuple[Rule, ...]:
        return self._rules

    @property
    def nogoods(self) -> tuple[frozenset[int], ...]:
        return self._nogoods

    @property
    def n(self) -> int:
        return len(self._names)

    @property
    def length(self) -> int:
        """Total literal occurrences, heads included."""
        return self._length

    def id(self, name: str) -> int:
        return self._index[name]

    def name(self, atom: int) -> str:
        return self._names[atom]

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __len__(self) -> int:
        return len(self._rules)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self._rules)

    def __repr__(self) -> str:
        return f"KnowledgeBase(n={self.n}, rules={len(self._rules)}, l={self._length})"

    def ids(self, names: Iterable[str]) -> frozenset[int]:
        return frozenset(self._index[x] for x in names)

    def names_of(self, ids: Iterable[int]) -> frozenset[str]:
        return frozenset(self._names[i] for i in ids)

    @property
    def is_horn(self) -> bool:
        return all(r.is_horn for r in self._rules)

    def negated_atoms(self) -> list[int]:
        """Atoms appearing negatively somewhere, ascending."""
        return sorted({q for r in self._rules for q in r.neg})

    def compiled(self):
        """Flat array form used by the kernels (built once, cached)."""
        if self._compiled is None:
            from ._program import CompiledProgram

            self._compiled = CompiledProgram(self)
        return self._compiled

    # -- derived knowledge bases ------------------------------------------

    def with_rules(self, rules: Iterable[Rule]) -> "KnowledgeBase":
        """Same atom table, different rules (nogoods dropped)."""
        return KnowledgeBase(self._names, rules)

    def extend(
        self,
        rules: Iterable[tuple[str, Iterable[str], Iterable[str]]],
    ) -> "KnowledgeBase":
        """Append named rules; existing atom ids are preserved, new atoms go last."""
        table = dict(self._index)
        names = list(self._names)

        def intern(name: str) -> int:
            if name not in table:
                table[name] = len(names)
                names.append(name)
            return table[name]

        added = [
            Rule.make(intern(h), [intern(p) for p in pos], [intern(q) for q in neg])
            for h, pos, neg in rules
        ]
        return KnowledgeBase(names, self._rules + tuple(added), self._nogoods)

    def named_rules(self) -> list[tuple[str, frozenset[str], frozenset[str]]]:
        nm = self._names
        return [
            (nm[r.head], frozenset(nm[p] for p in r.pos), frozenset(nm[q] for q in r.neg))
            for r in self._rules
        ]

    def same_structure(self, other: "KnowledgeBase") -> bool:
        """Equal up to atom numbering: same atoms by name, same rules in the same order."""
        return (
            set(self._names) == set(other._names)
            and self.named_rules() == other.named_rules()
            and sorted(map(sorted, map(self.names_of, self._nogoods)))
            == sorted(map(sorted, map(other.names_of, other._nogoods)))
        )

    def render(self) -> str:
        """Canonical text: rules in stored order, positive literals then negative, by id."""
        nm = self._names
        lines = []
        for r in self._rules:
            body = [nm[p] for p in r.pos] + ["not " + nm[q] for q in r.neg]
            if body:
                lines.append(f"{nm[r.head]} :- {', '.join(body)}.")
            else:
                lines.append(f"{nm[r.head]}.")
        for ng in self._nogoods:
            lines.append("#nogood " + " ".join(nm[a] for a in sorted(ng)) + ".")
        return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# satisfaction


def satisfies_body(S, r: Rule) -> bool:
    """``S`` (any container of atom ids) makes every positive literal true and every negative one false."""
    return all(p in S for p in r.pos) and not any(q in S for q in r.neg)


def satisfies_rule(S, r: Rule) -> bool:
    return r.head in S or not satisfies_body(S, r)


# ---------------------------------------------------------------------------
# partial interpretations


@dataclass(frozen=True)
class PartialInterpretation:
    """Three-valued assignment: atoms in ``true``, atoms in ``false``, the rest unknown."""

    true: frozenset[int] = frozenset()
    false: frozenset[int] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "true", frozenset(self.true))
        object.__setattr__(self, "false", frozenset(self.false))
        if self.true & self.false:
            raise ValueError(f"atoms both true and false: {sorted(self.true & self.false)}")

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, bool | None]) -> "PartialInterpretation":
        return cls(
            frozenset(a for a, v in mapping.items() if v is True),
            frozenset(a for a, v in mapping.items() if v is False),
        )

    @classmethod
    def total(cls, true: Iterable[int], domain: Iterable[int]) -> "PartialInterpretation":
        true = frozenset(true)
        return cls(true, frozenset(domain) - true)

    @property
    def domain(self) -> frozenset[int]:
        return self.true | self.false

    def value(self, atom: int) -> bool | None:
        if atom in self.true:
            return True
        if atom in self.false:
            return False
        return None

    def is_total_over(self, atoms: Iterable[int]) -> bool:
        dom = self.domain
        return all(a in dom for a in atoms)

    def as_dict(self) -> dict[int, bool]:
        d = {a: True for a in self.true}
        d.update((a, False) for a in self.false)
        return dict(sorted(d.items()))


def combine(I: PartialInterpretation, J: PartialInterpretation) -> PartialInterpretation:
    """``I + J``; raises ConflictError naming the smallest atom id they disagree on."""
    clash = (I.true & J.false) | (I.false & J.true)
    if clash:
        raise ConflictError(min(clash))
    return PartialInterpretation(I.true | J.true, I.false | J.false)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>%.*)
  | (?P<directive>\#[a-z]+)
  | (?P<neck>:-)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<number>[0-9]+)
  | (?P<punct>[(),.])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class RawAtom:
    """An atom as written: predicate name plus argument terms."""

    pred: str
    args: tuple[str, ...]
    line: int
    column: int

    def text(self) -> str:
        return self.pred if not self.args else f"{self.pred}({','.join(self.args)})"


@dataclass(frozen=True)
class RawStatement:
    kind: str  # "rule" or "nogood"
    head: RawAtom | None
    pos: tuple[RawAtom, ...]
    neg: tuple[RawAtom, ...]
    line: int


def is_variable(term: str) -> bool:
    return term[0].isupper() or term[0] == "_"


def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        pos = 0
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            if m is None:
                raise ParseError(f"unexpected character {line[pos]!r}", lineno, pos + 1)
            kind = m.lastgroup
            if kind not in ("ws", "comment"):
                yield kind, m.group(), lineno, pos + 1
            pos = m.end()
    yield "eof", "", len(text.splitlines()) + 1, 1


class _Parser:
    def __init__(self, text: str):
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: str | None = None, value: str | None = None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def atom(self) -> RawAtom:
        kind, name, line, col = self.peek()
        if kind != "ident" or name == "not":
            raise ParseError(f"expected atom, found {name or 'end of input'!r}", line, col)
        self.i += 1
        if is_variable(name) and self.peek()[1] == "(":
            raise ParseError(f"predicate name {name!r} must not look like a variable", line, col)
        args: list[str] = []
        if self.peek()[1] == "(":
            self.i += 1
            while True:
                k, term, tl, tc = self.peek()
                if k not in ("ident", "number") or term == "not":
                    raise ParseError(f"expected term, found {term or 'end of input'!r}", tl, tc)
                self.i += 1
                args.append(term)
                if self.peek()[1] == ",":
                    self.i += 1
                    continue
                self.take(value=")")
                break
        return RawAtom(name, tuple(args), line, col)

    def statements(self) -> list[RawStatement]:
        out = []
        while self.peek()[0] != "eof":
            kind, value, line, col = self.peek()
            if kind == "directive":
                if value != "#nogood":
                    raise ParseError(f"unknown directive {value!r}", line, col)
                self.i += 1
                members = [self.atom()]
                while self.peek()[1] != ".":
                    if self.peek()[1] == ",":
                        self.i += 1
                    members.append(self.atom())
                self.take(value=".")
                out.append(RawStatement("nogood", None, tuple(members), (), line))
                continue
            head = self.atom()
            pos: list[RawAtom] = []
            neg: list[RawAtom] = []
            if self.peek()[0] == "neck":
                self.i += 1
                while True:
                    if self.peek()[1] == "not" and self.toks[self.i + 1][0] == "ident":
                        self.i += 1
                        neg.append(self.atom())
                    else:
                        pos.append(self.atom())
                    if self.peek()[1] == ",":
                        self.i += 1
                        continue
                    break
            self.take(value=".")
            out.append(RawStatement("rule", head, tuple(pos), tuple(neg), line))
        return out


def parse_statements(text: str) -> list[RawStatement]:
    """Tokenize and parse into raw statements (shared with the first-order front end)."""
    return _Parser(text).statements()


def _dedup(atoms: Sequence[RawAtom], line: int) -> list[str]:
    seen: list[str] = []
    for a in atoms:
        t = a.text()
        if t in seen:
            warnings.warn(
                f"line {line}: duplicate literal {t!r} in body removed",
                DuplicateLiteralWarning,
                stacklevel=4,
            )
        else:
            seen.append(t)
    return seen


def parse_kb(text: str) -> KnowledgeBase:
    """Parse propositional rule-language source.

    Ground atoms such as ``p(a,b)`` are accepted as opaque propositional
    symbols so that the output of the grounder can be read back.
    """
    table: dict[str, int] = {}

    def intern(a: RawAtom) -> int:
        for t in a.args:
            if is_variable(t):
                raise ParseError(f"variable {t!r} in propositional input", a.line, a.column)
        name = a.text()
        if name not in table:
            table[name] = len(table)
        return table[name]

    rules = []
    nogoods = []
    for st in parse_statements(text):
        if st.kind == "nogood":
            nogoods.append([intern(a) for a in st.pos])
            continue
        h = intern(st.head)
        # intern in textual order before deduplication so ids follow first appearance
        ordered = sorted(st.pos + st.neg, key=lambda a: (a.line, a.column))
        for a in ordered:
            intern(a)
        pos = [table[t] for t in _dedup(st.pos, st.line)]
        neg = [table[t] for t in _dedup(st.neg, st.line)]
        rules.append(Rule.make(h, pos, neg))
    return KnowledgeBase(list(table), rules, nogoods)
