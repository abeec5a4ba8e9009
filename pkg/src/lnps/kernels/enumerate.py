"""Exhaustive enumeration over all 2**n assignments.

Clauses and objective terms are pre-packed into bitmasks: bit ``v`` of an
assignment word is the value of variable ``v`` (0-based).  A clause holds
iff ``(a & pos) | (~a & neg)`` is nonzero.
"""

import numpy as np

from ._jit import JIT_ENABLED, kernel

MAX_VARS = 24
_CHUNK = 1 << 15


def pack_clauses(num_vars, clauses):
    pos = np.zeros(len(clauses), dtype=np.int64)
    neg = np.zeros(len(clauses), dtype=np.int64)
    for i, clause in enumerate(clauses):
        for lit in clause:
            if lit > 0:
                pos[i] |= 1 << (lit - 1)
            else:
                neg[i] |= 1 << (-lit - 1)
    return pos, neg


def pack_objective(objective):
    bit = np.array([abs(lit) - 1 for _, lit in objective], dtype=np.int64)
    polarity = np.array([1 if lit > 0 else 0 for _, lit in objective], dtype=np.int64)
    weight = np.array([w for w, _ in objective], dtype=np.int64)
    return bit, polarity, weight


@kernel
def _scan_loop(n, pos, neg, bit, polarity, weight):
    full = (1 << n) - 1
    best = -1
    arg = -1
    count = 0
    for a in range(1 << n):
        ok = True
        na = ~a & full
        for i in range(pos.shape[0]):
            if (a & pos[i]) == 0 and (na & neg[i]) == 0:
                ok = False
                break
        if not ok:
            continue
        count += 1
        cost = 0
        for j in range(bit.shape[0]):
            if ((a >> bit[j]) & 1) == polarity[j]:
                cost += weight[j]
        if best < 0 or cost < best:
            best = cost
            arg = a
    return best, arg, count


def _scan_numpy(n, pos, neg, bit, polarity, weight):
    full = (1 << n) - 1
    best = -1
    arg = -1
    count = 0
    for lo in range(0, 1 << n, _CHUNK):
        a = np.arange(lo, min(lo + _CHUNK, 1 << n), dtype=np.int64)
        na = ~a & full
        ok = np.all(((a[:, None] & pos[None, :]) != 0) | ((na[:, None] & neg[None, :]) != 0), axis=1)
        if not ok.any():
            continue
        a = a[ok]
        count += a.shape[0]
        hits = ((a[:, None] >> bit[None, :]) & 1) == polarity[None, :]
        cost = hits.astype(np.int64) @ weight if bit.shape[0] else np.zeros(a.shape[0], np.int64)
        k = int(np.argmin(cost))
        if best < 0 or cost[k] < best:
            best = int(cost[k])
            arg = int(a[k])
    return best, arg, count


def scan(num_vars, clauses, objective, use_jit=None):
    """Return ``(min_cost, argmin_word, model_count)``; cost -1 when infeasible."""
    if num_vars > MAX_VARS:
        raise ValueError(f"enumeration guard: {num_vars} variables > {MAX_VARS}")
    pos, neg = pack_clauses(num_vars, clauses)
    bit, polarity, weight = pack_objective(objective)
    if use_jit is None:
        use_jit = JIT_ENABLED
    if use_jit:
        best, arg, count = _scan_loop(num_vars, pos, neg, bit, polarity, weight)
    else:
        best, arg, count = _scan_numpy(num_vars, pos, neg, bit, polarity, weight)
    return int(best), int(arg), int(count)
