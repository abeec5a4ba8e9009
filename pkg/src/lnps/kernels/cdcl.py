"""Conflict-driven branch-and-improve search over flat numpy arrays.

Literal codes: variable ``v`` (0-based) has positive literal ``2*v`` and
negative literal ``2*v + 1``; ``l ^ 1`` negates.  Variable values are
``-1`` (free), ``0`` (false) or ``1`` (true).

The objective ``sum w_i [l_i] < bound`` is handled by a native propagator.
Its implications carry the pseudo reason ``REASON_OBJ`` and are explained
lazily from the trail during conflict analysis.

Scalar search state lives in a small int64 array ``S`` so the helpers can
mutate it in place under numba:

    S[0] trail length     S[1] propagation head   S[2] decision level
    S[3] objective sum    S[4] strict cost bound  S[5] heap size
"""

import numpy as np

from ._jit import kernel, now

REASON_NONE = -1
REASON_OBJ = -2
NO_CONFLICT = -1
CONFLICT_OBJ = -2

STATUS_OPTIMUM = 0
STATUS_SATISFIABLE = 1
STATUS_UNSATISFIABLE = 2
STATUS_BUDGET_EXHAUSTED = 3

NO_BOUND = 1 << 62

_TL, _QHEAD, _DL, _LB, _BOUND, _HSIZE = 0, 1, 2, 3, 4, 5


@kernel
def lit_value(val, lit):
    x = val[lit >> 1]
    if x < 0:
        return -1
    return x ^ (lit & 1)


@kernel
def luby(y, x):
    size = 1
    seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y**seq


@kernel
def _better(a, b, dlev, act):
    # branching order: directive level, then activity, then lower index
    if dlev[a] != dlev[b]:
        return dlev[a] > dlev[b]
    if act[a] != act[b]:
        return act[a] > act[b]
    return a < b


@kernel
def _heap_up(i, heap, hpos, dlev, act):
    v = heap[i]
    while i > 0:
        p = (i - 1) >> 1
        u = heap[p]
        if _better(v, u, dlev, act):
            heap[i] = u
            hpos[u] = i
            i = p
        else:
            break
    heap[i] = v
    hpos[v] = i


@kernel
def _heap_down(i, heap, hpos, n, dlev, act):
    v = heap[i]
    while True:
        c = 2 * i + 1
        if c >= n:
            break
        if c + 1 < n and _better(heap[c + 1], heap[c], dlev, act):
            c += 1
        if _better(heap[c], v, dlev, act):
            heap[i] = heap[c]
            hpos[heap[i]] = i
            i = c
        else:
            break
    heap[i] = v
    hpos[v] = i


@kernel
def _heap_insert(v, heap, hpos, S, dlev, act):
    if hpos[v] >= 0:
        return
    n = S[_HSIZE]
    heap[n] = v
    hpos[v] = n
    S[_HSIZE] = n + 1
    _heap_up(n, heap, hpos, dlev, act)


@kernel
def _heap_pop(heap, hpos, S, dlev, act):
    v = heap[0]
    n = S[_HSIZE] - 1
    S[_HSIZE] = n
    hpos[v] = -1
    if n > 0:
        heap[0] = heap[n]
        hpos[heap[0]] = 0
        _heap_down(0, heap, hpos, n, dlev, act)
    return v


@kernel
def _bump(v, act, F, heap, hpos, dlev):
    act[v] += F[0]
    if act[v] > 1e100:
        for u in range(act.shape[0]):
            act[u] *= 1e-100
        F[0] *= 1e-100
    if hpos[v] >= 0:
        _heap_up(hpos[v], heap, hpos, dlev, act)


@kernel
def _enqueue(lit, r, val, level, reason, tpos, trail, S, objw):
    v = lit >> 1
    val[v] = 1 - (lit & 1)
    level[v] = S[_DL]
    reason[v] = r
    tpos[v] = S[_TL]
    trail[S[_TL]] = lit
    S[_TL] += 1
    S[_LB] += objw[lit]


@kernel
def _new_level(trail_lim, S):
    trail_lim[S[_DL]] = S[_TL]
    S[_DL] += 1


@kernel
def _backtrack(lvl, val, reason, trail, trail_lim, S, objw, saved, phase_saving,
               heap, hpos, dlev, act):
    if S[_DL] <= lvl:
        return
    stop = trail_lim[lvl]
    for i in range(S[_TL] - 1, stop - 1, -1):
        lit = trail[i]
        v = lit >> 1
        S[_LB] -= objw[lit]
        if phase_saving:
            saved[v] = val[v]
        val[v] = -1
        reason[v] = REASON_NONE
        _heap_insert(v, heap, hpos, S, dlev, act)
    S[_TL] = stop
    S[_QHEAD] = stop
    S[_DL] = lvl


@kernel
def _objective_check(obj_lit, obj_w, objw, val, level, reason, tpos, trail, S):
    """Enforce ``sum < bound``; returns True on conflict."""
    if S[_LB] >= S[_BOUND]:
        return True
    slack = S[_BOUND] - S[_LB]
    for j in range(obj_lit.shape[0]):
        if obj_w[j] < slack:
            break
        lit = obj_lit[j]
        if lit_value(val, lit) == -1:
            _enqueue(lit ^ 1, REASON_OBJ, val, level, reason, tpos, trail, S, objw)
    return False


@kernel
def _propagate(lits, cstart, csize, cdel, whead, wnext, obj_lit, obj_w, objw,
               val, level, reason, tpos, trail, S):
    while S[_QHEAD] < S[_TL]:
        p = trail[S[_QHEAD]]
        S[_QHEAD] += 1
        f = p ^ 1
        prev = -1
        s = whead[f]
        while s != -1:
            nxt = wnext[s]
            c = s >> 1
            if cdel[c]:
                if prev == -1:
                    whead[f] = nxt
                else:
                    wnext[prev] = nxt
                s = nxt
                continue
            i = s & 1
            st = cstart[c]
            other = lits[st + 1 - i]
            ov = lit_value(val, other)
            if ov == 1:
                prev = s
                s = nxt
                continue
            moved = False
            for k in range(st + 2, st + csize[c]):
                lk = lits[k]
                if lit_value(val, lk) != 0:
                    lits[st + i] = lk
                    lits[k] = f
                    if prev == -1:
                        whead[f] = nxt
                    else:
                        wnext[prev] = nxt
                    wnext[s] = whead[lk]
                    whead[lk] = s
                    moved = True
                    break
            if moved:
                s = nxt
                continue
            prev = s
            if ov == 0:
                return c
            _enqueue(other, c, val, level, reason, tpos, trail, S, objw)
            s = nxt
        if objw[p] > 0:
            if _objective_check(obj_lit, obj_w, objw, val, level, reason, tpos, trail, S):
                return CONFLICT_OBJ
    return NO_CONFLICT


@kernel
def _explain(kind, ref, lits, cstart, csize, obj_lit, val, tpos, buf):
    """Write the false literals of a conflict or reason into ``buf``.

    kind 0: clause ``ref``; kind 1: objective conflict; kind 2: objective
    implication of variable ``ref``.
    """
    n = 0
    if kind == 0:
        st = cstart[ref]
        for k in range(st, st + csize[ref]):
            buf[n] = lits[k]
            n += 1
    else:
        for j in range(obj_lit.shape[0]):
            t = obj_lit[j]
            if lit_value(val, t) == 1:
                if kind == 1 or tpos[t >> 1] < tpos[ref]:
                    buf[n] = t ^ 1
                    n += 1
    return n


@kernel
def _grow_i64(a, need):
    cap = a.shape[0]
    while cap < need:
        cap *= 2
    b = np.empty(cap, dtype=np.int64)
    b[: a.shape[0]] = a
    return b


@kernel
def search(n_vars, cl_lits, cl_start, obj_lit, obj_w, assumptions, dlev, dsign,
           default_phase, phase_saving, max_conflicts, bound, deadline,
           restart_base):
    """Branch-and-improve CDCL search.

    ``bound`` is a strict upper bound on model cost (``NO_BOUND`` for none).
    ``dlev``/``dsign`` give per-variable directive level (0 = undirected) and
    preferred sign (1, 0, or -1 for the default policy).  ``max_conflicts``
    < 0 means unlimited; ``deadline`` is a ``perf_counter`` timestamp.

    Returns ``(status, model, cost, conflicts, first_decision, model_costs,
    decisions, timed_out)``.
    """
    nv = n_vars
    nl = 2 * nv
    S = np.zeros(8, dtype=np.int64)
    S[_BOUND] = bound
    F = np.ones(1, dtype=np.float64)

    val = np.full(nv, -1, dtype=np.int8)
    saved = np.full(nv, -1, dtype=np.int8)
    level = np.zeros(nv, dtype=np.int64)
    reason = np.full(nv, REASON_NONE, dtype=np.int64)
    tpos = np.zeros(nv, dtype=np.int64)
    trail = np.zeros(nv + 1, dtype=np.int64)
    trail_lim = np.zeros(nv + 1, dtype=np.int64)
    seen = np.zeros(nv, dtype=np.int8)
    act = np.zeros(nv, dtype=np.float64)
    heap = np.zeros(nv + 1, dtype=np.int64)
    hpos = np.full(nv, -1, dtype=np.int64)
    stamp = np.zeros(nv + 2, dtype=np.int64)

    objw = np.zeros(nl + 1, dtype=np.int64)
    for j in range(obj_lit.shape[0]):
        objw[obj_lit[j]] += obj_w[j]

    n_in = cl_start.shape[0] - 1
    ccap = max(16, 2 * n_in)
    cstart = np.zeros(ccap, dtype=np.int64)
    csize = np.zeros(ccap, dtype=np.int64)
    clbd = np.zeros(ccap, dtype=np.int64)
    clearnt = np.zeros(ccap, dtype=np.bool_)
    cdel = np.zeros(ccap, dtype=np.bool_)
    wnext = np.full(2 * ccap, -1, dtype=np.int64)
    whead = np.full(nl + 1, -1, dtype=np.int64)
    lits = np.zeros(max(64, 2 * cl_lits.shape[0]), dtype=np.int64)
    used = 0
    ncl = 0

    buf = np.zeros(nv + obj_lit.shape[0] + 2, dtype=np.int64)
    out = np.zeros(nv + 2, dtype=np.int64)
    model = np.zeros(nv, dtype=np.int8)
    costs = np.zeros(16, dtype=np.int64)
    n_models = 0
    best_cost = -1
    conflicts = 0
    decisions = 0
    first_dec = -1
    timed_out = False
    exhausted = False

    for v in range(nv):
        _heap_insert(v, heap, hpos, S, dlev, act)

    units = np.zeros(n_in + 1, dtype=np.int64)
    n_units = 0
    for c in range(n_in):
        a = cl_start[c]
        b = cl_start[c + 1]
        if b - a == 1:
            units[n_units] = cl_lits[a]
            n_units += 1
            continue
        for k in range(a, b):
            lits[used + k - a] = cl_lits[k]
        cstart[ncl] = used
        csize[ncl] = b - a
        wnext[2 * ncl] = whead[lits[used]]
        whead[lits[used]] = 2 * ncl
        wnext[2 * ncl + 1] = whead[lits[used + 1]]
        whead[lits[used + 1]] = 2 * ncl + 1
        used += b - a
        ncl += 1
    n_learnt = 0
    max_learnt = max(1000, ncl // 2)

    for k in range(n_units):
        u = units[k]
        uv = lit_value(val, u)
        if uv == 0:
            exhausted = True
            break
        if uv == -1:
            _enqueue(u, REASON_NONE, val, level, reason, tpos, trail, S, objw)
    if not exhausted:
        if _objective_check(obj_lit, obj_w, objw, val, level, reason, tpos, trail, S):
            exhausted = True

    restarts = 0
    next_restart = conflicts + int(luby(2.0, restarts) * restart_base)

    while not exhausted:
        conf = _propagate(lits, cstart, csize, cdel, whead, wnext, obj_lit, obj_w,
                          objw, val, level, reason, tpos, trail, S)
        if conf != NO_CONFLICT:
            conflicts += 1
            if conf == CONFLICT_OBJ:
                kind = 1
            else:
                kind = 0
            n = _explain(kind, conf, lits, cstart, csize, obj_lit, val, tpos, buf)
            maxlvl = 0
            for k in range(n):
                lv = level[buf[k] >> 1]
                if lv > maxlvl:
                    maxlvl = lv
            if maxlvl == 0:
                exhausted = True
                break
            if maxlvl < S[_DL]:
                _backtrack(maxlvl, val, reason, trail, trail_lim, S, objw, saved,
                           phase_saving, heap, hpos, dlev, act)

            # first-UIP analysis
            out_len = 1
            path = 0
            p = -1
            idx = S[_TL] - 1
            while True:
                for k in range(n):
                    q = buf[k]
                    v = q >> 1
                    if p >= 0 and v == (p >> 1):
                        continue
                    if seen[v] == 0 and level[v] > 0:
                        _bump(v, act, F, heap, hpos, dlev)
                        seen[v] = 1
                        if level[v] >= S[_DL]:
                            path += 1
                        else:
                            out[out_len] = q
                            out_len += 1
                while seen[trail[idx] >> 1] == 0:
                    idx -= 1
                p = trail[idx]
                idx -= 1
                seen[p >> 1] = 0
                path -= 1
                if path <= 0:
                    break
                r = reason[p >> 1]
                if r == REASON_OBJ:
                    n = _explain(2, p >> 1, lits, cstart, csize, obj_lit, val, tpos, buf)
                else:
                    n = _explain(0, r, lits, cstart, csize, obj_lit, val, tpos, buf)
            out[0] = p ^ 1
            for k in range(1, out_len):
                seen[out[k] >> 1] = 0

            bj = 0
            if out_len > 1:
                mi = 1
                for k in range(2, out_len):
                    if level[out[k] >> 1] > level[out[mi] >> 1]:
                        mi = k
                tmp = out[1]
                out[1] = out[mi]
                out[mi] = tmp
                bj = level[out[1] >> 1]
            _backtrack(bj, val, reason, trail, trail_lim, S, objw, saved, phase_saving,
                       heap, hpos, dlev, act)
            if out_len == 1:
                _enqueue(out[0], REASON_NONE, val, level, reason, tpos, trail, S, objw)
            else:
                if used + out_len > lits.shape[0]:
                    lits = _grow_i64(lits, used + out_len)
                if ncl == cstart.shape[0]:
                    cap = 2 * ncl
                    cstart = _grow_i64(cstart, cap)
                    csize = _grow_i64(csize, cap)
                    clbd = _grow_i64(clbd, cap)
                    grown = np.zeros(cap, dtype=np.bool_)
                    grown[:ncl] = clearnt[:ncl]
                    clearnt = grown
                    grown = np.zeros(cap, dtype=np.bool_)
                    grown[:ncl] = cdel[:ncl]
                    cdel = grown
                    wgrown = np.full(2 * cap, -1, dtype=np.int64)
                    wgrown[: 2 * ncl] = wnext[: 2 * ncl]
                    wnext = wgrown
                stamp[0] += 1
                lbd = 0
                for k in range(out_len):
                    lits[used + k] = out[k]
                    lv = level[out[k] >> 1]
                    if stamp[lv + 1] != stamp[0]:
                        stamp[lv + 1] = stamp[0]
                        lbd += 1
                c = ncl
                cstart[c] = used
                csize[c] = out_len
                clbd[c] = lbd
                clearnt[c] = True
                cdel[c] = False
                wnext[2 * c] = whead[out[0]]
                whead[out[0]] = 2 * c
                wnext[2 * c + 1] = whead[out[1]]
                whead[out[1]] = 2 * c + 1
                used += out_len
                ncl += 1
                n_learnt += 1
                _enqueue(out[0], c, val, level, reason, tpos, trail, S, objw)
            F[0] *= 1.0 / 0.95

            if max_conflicts >= 0 and conflicts >= max_conflicts:
                break
            if (conflicts & 31) == 0 and now() > deadline:
                timed_out = True
                break
            if conflicts >= next_restart:
                restarts += 1
                next_restart = conflicts + int(luby(2.0, restarts) * restart_base)
                _backtrack(0, val, reason, trail, trail_lim, S, objw, saved,
                           phase_saving, heap, hpos, dlev, act)
                if n_learnt >= max_learnt:
                    # drop the half of deletable learnt clauses with worst LBD
                    cand = np.zeros(ncl, dtype=np.int64)
                    m = 0
                    for c in range(ncl):
                        if clearnt[c] and not cdel[c] and csize[c] > 2:
                            v0 = lits[cstart[c]] >> 1
                            if not (val[v0] >= 0 and reason[v0] == c):
                                cand[m] = c
                                m += 1
                    keys = np.zeros(m, dtype=np.int64)
                    for k in range(m):
                        keys[k] = -clbd[cand[k]]
                    order = np.argsort(keys, kind="mergesort")
                    for k in range(m // 2):
                        cdel[cand[order[k]]] = True
                        n_learnt -= 1
                    max_learnt = max_learnt + max_learnt // 10
            continue

        if (decisions & 1023) == 1023 and now() > deadline:
            timed_out = True
            break

        if S[_DL] < assumptions.shape[0]:
            a = assumptions[S[_DL]]
            av = lit_value(val, a)
            if av == 1:
                _new_level(trail_lim, S)
            elif av == 0:
                exhausted = True
            else:
                _new_level(trail_lim, S)
                _enqueue(a, REASON_NONE, val, level, reason, tpos, trail, S, objw)
            continue

        nxt = -1
        while S[_HSIZE] > 0:
            u = _heap_pop(heap, hpos, S, dlev, act)
            if val[u] < 0:
                nxt = u
                break
        if nxt == -1:
            cost = S[_LB]
            for v in range(nv):
                model[v] = val[v]
            if n_models == costs.shape[0]:
                costs = _grow_i64(costs, 2 * n_models)
            costs[n_models] = cost
            n_models += 1
            best_cost = cost
            if cost == 0:
                exhausted = True
                break
            S[_BOUND] = cost
            _backtrack(0, val, reason, trail, trail_lim, S, objw, saved, phase_saving,
                       heap, hpos, dlev, act)
            if _objective_check(obj_lit, obj_w, objw, val, level, reason, tpos, trail, S):
                exhausted = True
            continue

        if dsign[nxt] >= 0:
            ph = dsign[nxt]
        elif phase_saving and saved[nxt] >= 0:
            ph = saved[nxt]
        else:
            ph = default_phase
        lit = 2 * nxt + (1 - ph)
        decisions += 1
        if first_dec < 0 and n_models == 0 and conflicts == 0:
            first_dec = lit
        _new_level(trail_lim, S)
        _enqueue(lit, REASON_NONE, val, level, reason, tpos, trail, S, objw)

    if exhausted:
        status = STATUS_OPTIMUM if n_models > 0 else STATUS_UNSATISFIABLE
    else:
        status = STATUS_SATISFIABLE if n_models > 0 else STATUS_BUDGET_EXHAUSTED
    return (status, model, best_cost, conflicts, first_dec, costs[:n_models].copy(),
            decisions, timed_out)
