"""Flat array encoding of a knowledge base consumed by the kernels."""

from __future__ import annotations

from array import array

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .kb import KnowledgeBase


def _csr(rows: list[list[int]]) -> tuple[array, array]:
    ptr = array("i", [0])
    idx = array("i")
    for row in rows:
        idx.extend(row)
        ptr.append(len(idx))
    return ptr, idx


class CompiledProgram:
    """CSR layout of rule bodies plus per-atom occurrence lists.

    ``pocc``/``nocc``/``hocc`` list, for each atom, the rules in which it
    occurs positively, negatively, and as head.
    """

    __slots__ = (
        "n", "m", "head",
        "pos_ptr", "pos_idx", "neg_ptr", "neg_idx",
        "pocc_ptr", "pocc_idx", "nocc_ptr", "nocc_idx", "hocc_ptr", "hocc_idx",
    )

    def __init__(self, kb: KnowledgeBase):
        n = kb.n
        rules = kb.rules
        self.n = n
        self.m = len(rules)
        self.head = array("i", [r.head for r in rules])
        self.pos_ptr, self.pos_idx = _csr([list(r.pos) for r in rules])
        self.neg_ptr, self.neg_idx = _csr([list(r.neg) for r in rules])
        pocc: list[list[int]] = [[] for _ in range(n)]
        nocc: list[list[int]] = [[] for _ in range(n)]
        hocc: list[list[int]] = [[] for _ in range(n)]
        for i, r in enumerate(rules):
            hocc[r.head].append(i)
            for p in r.pos:
                pocc[p].append(i)
            for q in r.neg:
                nocc[q].append(i)
        self.pocc_ptr, self.pocc_idx = _csr(pocc)
        self.nocc_ptr, self.nocc_idx = _csr(nocc)
        self.hocc_ptr, self.hocc_idx = _csr(hocc)
