# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors ``_pykernels`` function for function."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free
from libc.string cimport memcpy, memset

cnp.import_array()

NAME = "cython"

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32
ctypedef cnp.int8_t i8
ctypedef unsigned char u8


def force(const i64[::1] succ_ptr, const i32[::1] succ_idx, const i8[::1] owner,
          int player, target):
    cdef Py_ssize_t n = owner.shape[0], v, j
    cdef const u8[::1] tg = target.view(np.uint8)
    out = np.zeros(n, dtype=bool)
    cdef u8[::1] res = out.view(np.uint8)
    cdef u8 r
    with nogil:
        for v in range(n):
            if owner[v] == player:
                # some successor in target
                r = 0
                for j in range(succ_ptr[v], succ_ptr[v + 1]):
                    if tg[succ_idx[j]]:
                        r = 1
                        break
            else:
                # all successors in target
                r = 1
                for j in range(succ_ptr[v], succ_ptr[v + 1]):
                    if not tg[succ_idx[j]]:
                        r = 0
                        break
            res[v] = r
    return out


def attractor(const i64[::1] succ_ptr, const i32[::1] succ_idx,
              const i64[::1] pred_ptr, const i32[::1] pred_idx,
              const i8[::1] owner, int player, target, alive):
    cdef Py_ssize_t n = owner.shape[0], v, w, u, k, j, head = 0, tail = 0
    cdef const u8[::1] tg = target.view(np.uint8)
    cdef const u8[::1] live = alive.view(np.uint8)
    out = np.zeros(n, dtype=bool)
    rank_arr = np.full(n, -1, dtype=np.int32)
    cdef u8[::1] inside = out.view(np.uint8)
    cdef i32[::1] rank = rank_arr
    cdef i32 *queue = <i32 *> malloc(max(n, 1) * sizeof(i32))
    cdef i64 *count = <i64 *> malloc(max(n, 1) * sizeof(i64))
    cdef i64 c
    if queue == NULL or count == NULL:
        free(queue)
        free(count)
        raise MemoryError()
    with nogil:
        for v in range(n):
            count[v] = -1
            if tg[v] and live[v]:
                inside[v] = 1
                rank[v] = tail
                queue[tail] = v
                tail += 1
        while head < tail:
            w = queue[head]
            head += 1
            for k in range(pred_ptr[w], pred_ptr[w + 1]):
                u = pred_idx[k]
                if inside[u] or not live[u]:
                    continue
                if owner[u] != player:
                    if count[u] < 0:
                        c = 0
                        for j in range(succ_ptr[u], succ_ptr[u + 1]):
                            if live[succ_idx[j]]:
                                c += 1
                        count[u] = c
                    count[u] -= 1
                    if count[u] != 0:
                        continue
                inside[u] = 1
                rank[u] = tail
                queue[tail] = u
                tail += 1
    free(queue)
    free(count)
    return out, rank_arr


def attractor_strategy(const i64[::1] succ_ptr, const i32[::1] succ_idx,
                       const i8[::1] owner, int player, const i32[::1] rank, target):
    cdef Py_ssize_t n = owner.shape[0], v, j, w, best
    cdef const u8[::1] tg = target.view(np.uint8)
    out_arr = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] out = out_arr
    with nogil:
        for v in range(n):
            if owner[v] != player or rank[v] < 0 or tg[v]:
                continue
            best = -1
            for j in range(succ_ptr[v], succ_ptr[v + 1]):
                w = succ_idx[j]
                if rank[w] >= 0 and rank[w] < rank[v] and (best < 0 or w < best):
                    best = w
            out[v] = best
    return out_arr


cdef inline bint _prog(i64 prio, const i32 *rho_w, bint top_w, const i32 *bounds,
                       Py_ssize_t c, i32 *out) noexcept nogil:
    """Write the least measure >=_prio rho_w (strict for odd prio); return top."""
    cdef Py_ssize_t length = (prio + 1) // 2, j
    if top_w:
        return True
    if length > c:
        length = c
    for j in range(length):
        out[j] = rho_w[j]
    for j in range(length, c):
        out[j] = 0
    if prio % 2:
        j = length - 1
        while j >= 0:
            if out[j] < bounds[j]:
                out[j] += 1
                return False
            out[j] = 0
            j -= 1
        return True
    return False


cdef inline int _cmp(const i32 *a, bint ta, const i32 *b, bint tb, Py_ssize_t c) noexcept nogil:
    cdef Py_ssize_t j
    if ta or tb:
        return <int> ta - <int> tb
    for j in range(c):
        if a[j] != b[j]:
            return 1 if a[j] > b[j] else -1
    return 0


def spm_run(const i64[::1] succ_ptr, const i32[::1] succ_idx,
            const i64[::1] pred_ptr, const i32[::1] pred_idx,
            const i8[::1] owner, const i64[::1] priority, const i32[::1] bounds,
            i32[::1] measures, u8[::1] top, i32[::1] queue, u8[::1] inq,
            i64[::1] state, i64 max_steps):
    cdef Py_ssize_t n = owner.shape[0], c = bounds.shape[0]
    cdef Py_ssize_t v, j, k, u, w
    cdef i64 head = state[0], size = state[1], lifts = state[2], steps = 0
    cdef i32 *best = <i32 *> malloc((c + 1) * sizeof(i32))
    cdef i32 *cand = <i32 *> malloc((c + 1) * sizeof(i32))
    cdef i32 *swap
    cdef bint best_top, cand_top, first
    cdef i32 *mbase = &measures[0] if measures.shape[0] else NULL
    cdef const i32 *bbase = &bounds[0] if c else NULL
    if best == NULL or cand == NULL:
        free(best)
        free(cand)
        raise MemoryError()
    with nogil:
        while size > 0 and steps < max_steps:
            v = queue[head]
            head = (head + 1) % n
            size -= 1
            inq[v] = 0
            steps += 1
            if top[v]:
                continue
            first = True
            best_top = False
            for j in range(succ_ptr[v], succ_ptr[v + 1]):
                w = succ_idx[j]
                cand_top = _prog(priority[v], mbase + w * c, top[w], bbase, c, cand)
                if first or (owner[v] == 0 and _cmp(cand, cand_top, best, best_top, c) < 0) \
                        or (owner[v] == 1 and _cmp(cand, cand_top, best, best_top, c) > 0):
                    swap = best
                    best = cand
                    cand = swap
                    best_top = cand_top
                    first = False
                    if owner[v] == 1 and best_top:
                        break
            if _cmp(best, best_top, mbase + v * c, False, c) > 0:
                lifts += 1
                if best_top:
                    top[v] = 1
                else:
                    memcpy(mbase + v * c, best, c * sizeof(i32))
                for k in range(pred_ptr[v], pred_ptr[v + 1]):
                    u = pred_idx[k]
                    if not inq[u] and not top[u]:
                        inq[u] = 1
                        queue[(head + size) % n] = u
                        size += 1
    free(best)
    free(cand)
    state[0] = head
    state[1] = size
    state[2] = lifts
    return size == 0
