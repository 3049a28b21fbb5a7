"""Sets of total interpretations, stored as integer bitmasks over an atom table."""

from __future__ import annotations

from typing import Callable, Iterable, Iterator, Sequence

from .kb import PartialInterpretation


def bits(mask: int) -> Iterator[int]:
    """Indices of set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(ids: Iterable[int]) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


class ModelSet:
    """Duplicate-free, sorted collection of models, each total over ``domain``.

    A model is the bitmask of its true atoms; atoms of the domain outside the
    mask are false.  Order is lexicographic on the truth vector read in
    ascending atom id, false before true.
    """

    __slots__ = ("names", "domain", "masks")

    def __init__(self, names: Sequence[str], domain: int, masks: Iterable[int] = (), *, presorted=False):
        self.names = names
        self.domain = domain
        uniq = dict.fromkeys(masks)
        for m in uniq:
            if m & ~domain:
                raise ValueError("model assigns atoms outside its domain")
        if presorted:
            self.masks = tuple(uniq)
        else:
            width = max(len(names), 1)
            self.masks = tuple(sorted(uniq, key=lambda m: format(m, f"0{width}b")[::-1]))

    @classmethod
    def from_sets(cls, names: Sequence[str], domain: Iterable[int], models: Iterable[Iterable[int]]) -> "ModelSet":
        return cls(names, mask_of(domain), [mask_of(m) for m in models])

    @classmethod
    def identity(cls, names: Sequence[str]) -> "ModelSet":
        """``{∅}``: the single empty model over the empty domain."""
        return cls(names, 0, [0])

    def __len__(self) -> int:
        return len(self.masks)

    def __bool__(self) -> bool:
        return bool(self.masks)

    def __iter__(self) -> Iterator[frozenset[int]]:
        for m in self.masks:
            yield frozenset(bits(m))

    def __contains__(self, model) -> bool:
        if isinstance(model, int):
            return model in self.masks
        return mask_of(model) in self.masks

    @property
    def domain_ids(self) -> frozenset[int]:
        return frozenset(bits(self.domain))

    def true_sets(self) -> list[frozenset[int]]:
        return list(self)

    def name_sets(self) -> list[frozenset[str]]:
        nm = self.names
        return [frozenset(nm[i] for i in bits(m)) for m in self.masks]

    def interpretations(self) -> list[PartialInterpretation]:
        dom = self.domain_ids
        return [PartialInterpretation.total(s, dom) for s in self]

    def filter(self, keep: Callable[[int], bool]) -> "ModelSet":
        return ModelSet(self.names, self.domain, [m for m in self.masks if keep(m)], presorted=True)

    def _key(self):
        nm = self.names
        return (
            frozenset(nm[i] for i in bits(self.domain)),
            frozenset(frozenset(nm[i] for i in bits(m)) for m in self.masks),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModelSet):
            return NotImplemented
        if self.names is other.names:
            return self.domain == other.domain and set(self.masks) == set(other.masks)
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        shown = ["{" + ", ".join(sorted(s)) + "}" for s in self.name_sets()[:8]]
        more = "" if len(self) <= 8 else f", ... ({len(self)} total)"
        return f"ModelSet([{', '.join(shown)}{more}])"
