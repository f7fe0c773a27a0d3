"""Pure-Python / numpy implementations of the hot kernels.

Signatures mirror the compiled ``_ckernels`` module exactly; see
:mod:`paritybench.kernels` for the contracts.
"""

from collections import deque

import numpy as np

NAME = "python"


def force(succ_ptr, succ_idx, owner, player, target):
    n = owner.shape[0]
    if n == 0:
        return np.zeros(0, dtype=bool)
    hit = target[succ_idx]
    starts = succ_ptr[:-1]
    some = np.logical_or.reduceat(hit, starts)
    every = np.logical_and.reduceat(hit, starts)
    return np.where(owner == player, some, every)


def attractor(succ_ptr, succ_idx, pred_ptr, pred_idx, owner, player, target, alive):
    n = owner.shape[0]
    sp = succ_ptr.tolist()
    si = succ_idx.tolist()
    pp = pred_ptr.tolist()
    pi = pred_idx.tolist()
    own = owner.tolist()
    live = alive.tolist()
    inside = [False] * n
    rank = [-1] * n
    count = [-1] * n
    queue = deque()
    r = 0
    for v in np.flatnonzero(target & alive).tolist():
        inside[v] = True
        rank[v] = r
        r += 1
        queue.append(v)
    while queue:
        w = queue.popleft()
        for k in range(pp[w], pp[w + 1]):
            u = pi[k]
            if inside[u] or not live[u]:
                continue
            if own[u] == player:
                attract = True
            else:
                if count[u] < 0:
                    count[u] = sum(1 for j in range(sp[u], sp[u + 1]) if live[si[j]])
                count[u] -= 1
                attract = count[u] == 0
            if attract:
                inside[u] = True
                rank[u] = r
                r += 1
                queue.append(u)
    return np.array(inside, dtype=bool), np.array(rank, dtype=np.int32)


def attractor_strategy(succ_ptr, succ_idx, owner, player, rank, target):
    n = owner.shape[0]
    sp = succ_ptr.tolist()
    si = succ_idx.tolist()
    rk = rank.tolist()
    tg = target.tolist()
    own = owner.tolist()
    out = [-1] * n
    for v in range(n):
        if own[v] != player or rk[v] < 0 or tg[v]:
            continue
        best = -1
        for j in range(sp[v], sp[v + 1]):
            w = si[j]
            if 0 <= rk[w] < rk[v] and (best < 0 or w < best):
                best = w
        out[v] = best
    return np.array(out, dtype=np.int64)


def _prog(priority_v, rho_w, bounds):
    """Least measure >= rho_w on the prefix for ``priority_v``; None is top."""
    if rho_w is None:
        return None
    length = (priority_v + 1) // 2
    m = list(rho_w[:length]) + [0] * (len(rho_w) - length)
    if priority_v % 2:
        j = length - 1
        while j >= 0:
            if m[j] < bounds[j]:
                m[j] += 1
                break
            m[j] = 0
            j -= 1
        if j < 0:
            return None
    return tuple(m)


def _greater(a, b):
    if a is None:
        return b is not None
    if b is None:
        return False
    return a > b


def spm_run(succ_ptr, succ_idx, pred_ptr, pred_idx, owner, priority, bounds,
            measures, top, queue, inq, state, max_steps):
    n = owner.shape[0]
    c = bounds.shape[0]
    sp = succ_ptr.tolist()
    si = succ_idx.tolist()
    pp = pred_ptr.tolist()
    pi = pred_idx.tolist()
    own = owner.tolist()
    pr = priority.tolist()
    bd = bounds.tolist()
    flat = measures.tolist()
    rho = [None if top[v] else tuple(flat[v * c:(v + 1) * c]) for v in range(n)]
    inq_l = inq.tolist()
    q = deque()
    head, size = int(state[0]), int(state[1])
    for k in range(size):
        q.append(int(queue[(head + k) % n]))
    lifts = int(state[2])
    steps = 0
    while q and steps < max_steps:
        v = q.popleft()
        inq_l[v] = 0
        steps += 1
        if rho[v] is None:
            continue
        best = "unset"
        for j in range(sp[v], sp[v + 1]):
            cand = _prog(pr[v], rho[si[j]], bd)
            if best == "unset":
                best = cand
            elif own[v] == 0 and _greater(best, cand):
                best = cand
            elif own[v] == 1 and _greater(cand, best):
                best = cand
        if _greater(best, rho[v]):
            rho[v] = best
            lifts += 1
            for k in range(pp[v], pp[v + 1]):
                u = pi[k]
                if not inq_l[u] and rho[u] is not None:
                    inq_l[u] = 1
                    q.append(u)
    # write state back
    for v in range(n):
        if rho[v] is None:
            top[v] = 1
        else:
            measures[v * c:(v + 1) * c] = rho[v]
    inq[:] = inq_l
    size = len(q)
    for k in range(size):
        queue[k] = q[k]
    state[0], state[1], state[2] = 0, size, lifts
    return size == 0
