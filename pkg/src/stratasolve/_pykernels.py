"""Pure-Python kernels.  Must stay behaviourally identical to ``_ckernels.pyx``.

Truth vectors are ``bytearray``s indexed by atom id.  For ``neg_propagate``
the encoding is 0 unknown, 1 true, 2 false.
"""

from __future__ import annotations

UNKNOWN, TRUE, FALSE = 0, 1, 2


def reduct_fixpoint(prog, blocked) -> bytearray:
    """Least model of the reduct of ``prog`` w.r.t. the atoms flagged in ``blocked``.

    Rules with a negative literal over a blocked atom are dropped, the
    remaining negative literals ignored.  Counter/worklist, linear in size.
    """
    n, m = prog.n, prog.m
    head = prog.head
    pos_ptr, neg_ptr, neg_idx = prog.pos_ptr, prog.neg_ptr, prog.neg_idx
    pocc_ptr, pocc_idx = prog.pocc_ptr, prog.pocc_idx
    derived = bytearray(n)
    count = [pos_ptr[r + 1] - pos_ptr[r] for r in range(m)]
    active = bytearray(m)
    stack = []
    for r in range(m):
        ok = 1
        for j in range(neg_ptr[r], neg_ptr[r + 1]):
            if blocked[neg_idx[j]]:
                ok = 0
                break
        active[r] = ok
        if ok and count[r] == 0:
            a = head[r]
            if not derived[a]:
                derived[a] = 1
                stack.append(a)
    while stack:
        a = stack.pop()
        for j in range(pocc_ptr[a], pocc_ptr[a + 1]):
            r = pocc_idx[j]
            count[r] -= 1
            if count[r] == 0 and active[r]:
                h = head[r]
                if not derived[h]:
                    derived[h] = 1
                    stack.append(h)
    return derived


def neg_propagate(prog, neg):
    """Set the flagged atoms false, then run unit instantiation to fixpoint.

    Returns the resulting three-valued vector, or None on conflict.
    Rule erasure is by tombstone: ``alive`` flags plus remaining-literal counts.
    """
    n, m = prog.n, prog.m
    head = prog.head
    pos_ptr, neg_ptr = prog.pos_ptr, prog.neg_ptr
    pocc_ptr, pocc_idx = prog.pocc_ptr, prog.pocc_idx
    nocc_ptr, nocc_idx = prog.nocc_ptr, prog.nocc_idx
    hocc_ptr, hocc_idx = prog.hocc_ptr, prog.hocc_idx
    val = bytearray(n)
    alive = bytearray(b"\x01") * m
    pcnt = [pos_ptr[r + 1] - pos_ptr[r] for r in range(m)]
    ncnt = [neg_ptr[r + 1] - neg_ptr[r] for r in range(m)]

    for p in range(n):
        if not neg[p]:
            continue
        if val[p] == TRUE:
            return None
        val[p] = FALSE
        for j in range(pocc_ptr[p], pocc_ptr[p + 1]):
            alive[pocc_idx[j]] = 0
        for j in range(nocc_ptr[p], nocc_ptr[p + 1]):
            ncnt[nocc_idx[j]] -= 1

    queue = [r for r in range(m) if alive[r] and pcnt[r] == 0 and ncnt[r] == 0]
    while queue:
        r = queue.pop()
        if not alive[r]:
            continue
        p = head[r]
        if val[p] == FALSE:
            return None
        val[p] = TRUE
        for j in range(pocc_ptr[p], pocc_ptr[p + 1]):
            r2 = pocc_idx[j]
            pcnt[r2] -= 1
            if pcnt[r2] == 0 and ncnt[r2] == 0 and alive[r2]:
                queue.append(r2)
        for j in range(hocc_ptr[p], hocc_ptr[p + 1]):
            alive[hocc_idx[j]] = 0
        for j in range(nocc_ptr[p], nocc_ptr[p + 1]):
            alive[nocc_idx[j]] = 0
    return val


def satisfies_all(prog, truth) -> bool:
    """Every rule is satisfied by the atoms flagged nonzero in ``truth``."""
    head = prog.head
    pos_ptr, pos_idx, neg_ptr, neg_idx = prog.pos_ptr, prog.pos_idx, prog.neg_ptr, prog.neg_idx
    for r in range(prog.m):
        if truth[head[r]]:
            continue
        fires = True
        for j in range(pos_ptr[r], pos_ptr[r + 1]):
            if not truth[pos_idx[j]]:
                fires = False
                break
        if fires:
            for j in range(neg_ptr[r], neg_ptr[r + 1]):
                if truth[neg_idx[j]]:
                    fires = False
                    break
        if fires:
            return False
    return True


def brute_force(prog) -> list[int]:
    """All stable subsets as bitmasks (bit i = atom i), ascending by mask."""
    n = prog.n
    found = []
    for mask in range(1 << n):
        cand = bytearray((mask >> i) & 1 for i in range(n))
        if not satisfies_all(prog, cand):
            continue
        if reduct_fixpoint(prog, cand) == cand:
            found.append(mask)
    return found
