# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernels.  Mirrors ``_pykernels`` function for function."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset, memcpy

cdef enum:
    UNKNOWN = 0
    TRUE = 1
    FALSE = 2


cdef int _fixpoint(int n, int m,
                   const int[::1] head,
                   const int[::1] pos_ptr,
                   const int[::1] neg_ptr, const int[::1] neg_idx,
                   const int[::1] pocc_ptr, const int[::1] pocc_idx,
                   const unsigned char* blocked,
                   unsigned char* derived,
                   int* count, unsigned char* active, int* stack) noexcept nogil:
    cdef int r, j, a, h, top = 0
    memset(derived, 0, n)
    for r in range(m):
        count[r] = pos_ptr[r + 1] - pos_ptr[r]
        active[r] = 1
        for j in range(neg_ptr[r], neg_ptr[r + 1]):
            if blocked[neg_idx[j]]:
                active[r] = 0
                break
        if active[r] and count[r] == 0:
            a = head[r]
            if not derived[a]:
                derived[a] = 1
                stack[top] = a
                top += 1
    while top > 0:
        top -= 1
        a = stack[top]
        for j in range(pocc_ptr[a], pocc_ptr[a + 1]):
            r = pocc_idx[j]
            count[r] -= 1
            if count[r] == 0 and active[r]:
                h = head[r]
                if not derived[h]:
                    derived[h] = 1
                    stack[top] = h
                    top += 1
    return 0


cdef bint _satisfies_all(int m,
                         const int[::1] head,
                         const int[::1] pos_ptr, const int[::1] pos_idx,
                         const int[::1] neg_ptr, const int[::1] neg_idx,
                         const unsigned char* truth) noexcept nogil:
    cdef int r, j
    cdef bint fires
    for r in range(m):
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


def reduct_fixpoint(prog, const unsigned char[::1] blocked):
    cdef int n = prog.n, m = prog.m
    cdef const int[::1] head = prog.head
    cdef const int[::1] pos_ptr = prog.pos_ptr
    cdef const int[::1] neg_ptr = prog.neg_ptr
    cdef const int[::1] neg_idx = prog.neg_idx
    cdef const int[::1] pocc_ptr = prog.pocc_ptr
    cdef const int[::1] pocc_idx = prog.pocc_idx
    out = bytearray(n)
    if n == 0:
        return out
    cdef unsigned char[::1] outv = out
    cdef int* count = <int*> malloc((m + 1) * sizeof(int))
    cdef unsigned char* active = <unsigned char*> malloc(m + 1)
    cdef int* stack = <int*> malloc((n + 1) * sizeof(int))
    try:
        _fixpoint(n, m, head, pos_ptr, neg_ptr, neg_idx, pocc_ptr, pocc_idx,
                  &blocked[0], &outv[0], count, active, stack)
    finally:
        free(count)
        free(active)
        free(stack)
    return out


def neg_propagate(prog, const unsigned char[::1] neg):
    cdef int n = prog.n, m = prog.m
    cdef const int[::1] head = prog.head
    cdef const int[::1] pos_ptr = prog.pos_ptr
    cdef const int[::1] neg_ptr = prog.neg_ptr
    cdef const int[::1] pocc_ptr = prog.pocc_ptr
    cdef const int[::1] pocc_idx = prog.pocc_idx
    cdef const int[::1] nocc_ptr = prog.nocc_ptr
    cdef const int[::1] nocc_idx = prog.nocc_idx
    cdef const int[::1] hocc_ptr = prog.hocc_ptr
    cdef const int[::1] hocc_idx = prog.hocc_idx
    out = bytearray(n)
    if n == 0:
        return out
    cdef unsigned char[::1] val = out
    cdef unsigned char* alive = <unsigned char*> malloc(m + 1)
    cdef int* pcnt = <int*> malloc((m + 1) * sizeof(int))
    cdef int* ncnt = <int*> malloc((m + 1) * sizeof(int))
    cdef int* queue = <int*> malloc((m + 1) * sizeof(int))
    cdef int r, r2, j, p, top = 0
    cdef bint conflict = False
    try:
        for r in range(m):
            alive[r] = 1
            pcnt[r] = pos_ptr[r + 1] - pos_ptr[r]
            ncnt[r] = neg_ptr[r + 1] - neg_ptr[r]
        for p in range(n):
            if not neg[p]:
                continue
            if val[p] == TRUE:
                conflict = True
                break
            val[p] = FALSE
            for j in range(pocc_ptr[p], pocc_ptr[p + 1]):
                alive[pocc_idx[j]] = 0
            for j in range(nocc_ptr[p], nocc_ptr[p + 1]):
                ncnt[nocc_idx[j]] -= 1
        if not conflict:
            for r in range(m):
                if alive[r] and pcnt[r] == 0 and ncnt[r] == 0:
                    queue[top] = r
                    top += 1
            # each rule is enqueued at most once: when its last literal goes
            while top > 0:
                top -= 1
                r = queue[top]
                if not alive[r]:
                    continue
                p = head[r]
                if val[p] == FALSE:
                    conflict = True
                    break
                val[p] = TRUE
                for j in range(pocc_ptr[p], pocc_ptr[p + 1]):
                    r2 = pocc_idx[j]
                    pcnt[r2] -= 1
                    if pcnt[r2] == 0 and ncnt[r2] == 0 and alive[r2]:
                        queue[top] = r2
                        top += 1
                for j in range(hocc_ptr[p], hocc_ptr[p + 1]):
                    alive[hocc_idx[j]] = 0
                for j in range(nocc_ptr[p], nocc_ptr[p + 1]):
                    alive[nocc_idx[j]] = 0
    finally:
        free(alive)
        free(pcnt)
        free(ncnt)
        free(queue)
    if conflict:
        return None
    return out


def satisfies_all(prog, const unsigned char[::1] truth):
    if prog.m == 0:
        return True
    return _satisfies_all(prog.m, prog.head, prog.pos_ptr, prog.pos_idx,
                          prog.neg_ptr, prog.neg_idx, &truth[0])


def brute_force(prog):
    cdef int n = prog.n, m = prog.m
    if n > 62:
        raise ValueError("brute force limited to 62 atoms")
    cdef const int[::1] head = prog.head
    cdef const int[::1] pos_ptr = prog.pos_ptr
    cdef const int[::1] pos_idx = prog.pos_idx
    cdef const int[::1] neg_ptr = prog.neg_ptr
    cdef const int[::1] neg_idx = prog.neg_idx
    cdef const int[::1] pocc_ptr = prog.pocc_ptr
    cdef const int[::1] pocc_idx = prog.pocc_idx
    cdef unsigned long long mask, total = (<unsigned long long> 1) << n
    cdef int i
    cdef unsigned char* cand = <unsigned char*> malloc(n + 1)
    cdef unsigned char* derived = <unsigned char*> malloc(n + 1)
    cdef int* count = <int*> malloc((m + 1) * sizeof(int))
    cdef unsigned char* active = <unsigned char*> malloc(m + 1)
    cdef int* stack = <int*> malloc((n + 1) * sizeof(int))
    found = []
    try:
        mask = 0
        while mask < total:
            for i in range(n):
                cand[i] = (mask >> i) & 1
            if m == 0 or _satisfies_all(m, head, pos_ptr, pos_idx, neg_ptr, neg_idx, cand):
                if m == 0:
                    memset(derived, 0, n)
                else:
                    _fixpoint(n, m, head, pos_ptr, neg_ptr, neg_idx, pocc_ptr, pocc_idx,
                              cand, derived, count, active, stack)
                if n == 0 or memcmp_eq(cand, derived, n):
                    found.append(mask)
            mask += 1
    finally:
        free(cand)
        free(derived)
        free(count)
        free(active)
        free(stack)
    return found


cdef inline bint memcmp_eq(const unsigned char* a, const unsigned char* b, int n) noexcept nogil:
    cdef int i
    for i in range(n):
        if a[i] != b[i]:
            return False
    return True
