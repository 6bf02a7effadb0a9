"""Pure-Python kernels.

Semantics must match ``_ckernels.pyx`` exactly; ``tests/test_kernels.py``
runs both on the same inputs.
"""

import numpy as np

FREE, ON_PATH, RETAINED, BURNED = 0, 1, 2, 3
SEG_NONE, SEG_HEAD, SEG_TAIL = 0, 1, 2


def grow_forest(indptr, indices, allowed, start_order, rank, L):
    """One restart of greedy induced path growth.

    A path grows from its end until stuck, then from its start.  Returns a
    flat int64 array of committed paths, ``L`` vertices each, in the order
    they were grown.
    """
    ptr = indptr.tolist()
    ind = indices.tolist()
    ok = allowed.tolist()
    rk = rank.tolist()
    n = len(ptr) - 1
    status = [FREE] * n
    touch = [0] * n
    out = []
    starts = start_order.tolist()
    started = True
    while started:
        started = False
        for s in starts:
            if status[s] != FREE or touch[s] != 0 or not ok[s]:
                continue
            started = True
            tail = [s]
            head = []
            status[s] = ON_PATH
            for w in ind[ptr[s]:ptr[s + 1]]:
                touch[w] += 1
            for side in (tail, head):
                end = side[-1] if side else s
                while len(tail) + len(head) < L:
                    best = -1
                    for w in ind[ptr[end]:ptr[end + 1]]:
                        if ok[w] and status[w] == FREE and touch[w] == 1:
                            if best < 0 or rk[w] < rk[best]:
                                best = w
                    if best < 0:
                        break
                    side.append(best)
                    status[best] = ON_PATH
                    for w in ind[ptr[best]:ptr[best + 1]]:
                        touch[w] += 1
                    end = best
            path = head[::-1] + tail
            if len(path) == L:
                for x in path:
                    status[x] = RETAINED
                out.extend(path)
            else:
                for x in path:
                    status[x] = BURNED
                    for w in ind[ptr[x]:ptr[x + 1]]:
                        touch[w] -= 1
    return np.asarray(out, dtype=np.int64)


def classify_connectors(indptr, indices, candidates, comp_of, seg_of):
    """Find candidates with exactly two forest neighbors: a tail-segment vertex
    of one component and a head-segment vertex of another.

    Returns int64 arrays ``(a, source, target, attach_tail, attach_head)``.
    """
    ptr = indptr.tolist()
    ind = indices.tolist()
    comp = comp_of.tolist()
    seg = seg_of.tolist()
    res = ([], [], [], [], [])
    for a in candidates.tolist():
        hits = []
        for w in ind[ptr[a]:ptr[a + 1]]:
            if comp[w] >= 0:
                hits.append(w)
                if len(hits) > 2:
                    break
        if len(hits) != 2:
            continue
        x, y = hits
        if seg[x] == SEG_HEAD and seg[y] == SEG_TAIL:
            x, y = y, x
        if seg[x] != SEG_TAIL or seg[y] != SEG_HEAD or comp[x] == comp[y]:
            continue
        for col, val in zip(res, (a, comp[x], comp[y], x, y)):
            col.append(val)
    return tuple(np.asarray(col, dtype=np.int64) for col in res)


def conflict_dfs(n_vertices, dptr, dind, rptr, reps, cptr, cind, n_reps):
    """Depth-first search that picks conflict-free representatives.

    Candidates (v, y) at the stack top are taken in lexicographic order.  A
    pair that is ineligible stays ineligible (T only shrinks, X only grows),
    so each stack vertex keeps a resumable cursor.

    Returns ``(best_vertices, best_reps, steps, balanced)`` where ``balanced``
    records whether |S| == |T| held after some round.
    """
    dptr = dptr.tolist()
    dind = dind.tolist()
    rptr = rptr.tolist()
    reps = reps.tolist()
    cptr = cptr.tolist()
    cind = cind.tolist()
    where = [0] * n_vertices  # 0 unvisited, 1 stack, 2 explored
    blocked = [False] * n_reps
    cur_edge = dptr[:-1]
    cur_rep = [0] * n_vertices
    stack = []
    stack_reps = []
    best = []
    best_reps = []
    n_s, n_t = 0, n_vertices
    next_t = 0
    steps = 0
    balanced = n_s == n_t
    while n_s < n_vertices:
        if not stack:
            while where[next_t] != 0:
                next_t += 1
            where[next_t] = 1
            stack.append(next_t)
            n_t -= 1
        else:
            u = stack[-1]
            e = cur_edge[u]
            r = cur_rep[u]
            found = -1
            stop = dptr[u + 1]
            while e < stop:
                v = dind[e]
                if where[v] == 0:
                    hi = rptr[e + 1]
                    i = rptr[e] + r
                    while i < hi:
                        if not blocked[reps[i]]:
                            found = reps[i]
                            break
                        i += 1
                    if found >= 0:
                        r = i - rptr[e]
                        break
                e += 1
                r = 0
            cur_edge[u] = e
            cur_rep[u] = r
            if found >= 0:
                v = dind[e]
                where[v] = 1
                stack.append(v)
                stack_reps.append(found)
                n_t -= 1
                blocked[found] = True
                for z in cind[cptr[found]:cptr[found + 1]]:
                    blocked[z] = True
            else:
                where[u] = 2
                stack.pop()
                if stack_reps:
                    stack_reps.pop()
                n_s += 1
        steps += 1
        if len(stack) > len(best):
            best = list(stack)
            best_reps = list(stack_reps)
        if n_s == n_t:
            balanced = True
    return (np.asarray(best, dtype=np.int64), np.asarray(best_reps, dtype=np.int64),
            steps, balanced)
