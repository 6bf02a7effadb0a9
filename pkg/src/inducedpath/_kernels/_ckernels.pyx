# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; line-for-line twins of ``_pure.py``."""

import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64
ctypedef cnp.int32_t i32
ctypedef cnp.uint8_t u8
ctypedef cnp.int8_t i8

cdef enum:
    FREE = 0
    ON_PATH = 1
    RETAINED = 2
    BURNED = 3
    SEG_HEAD = 1
    SEG_TAIL = 2


def grow_forest(const i64[::1] indptr, const i32[::1] indices, const u8[::1] allowed,
                const i64[::1] start_order, const i64[::1] rank, Py_ssize_t L):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef cnp.ndarray[i8, ndim=1] status_arr = np.zeros(n, dtype=np.int8)
    cdef cnp.ndarray[i32, ndim=1] touch_arr = np.zeros(n, dtype=np.int32)
    # the path lives in buf[lo:hi]; it grows right first, then left
    cdef cnp.ndarray[i64, ndim=1] buf_arr = np.empty(2 * max(L, 1), dtype=np.int64)
    cdef i8[::1] status = status_arr
    cdef i32[::1] touch = touch_arr
    cdef i64[::1] buf = buf_arr
    cdef Py_ssize_t n_starts = start_order.shape[0]
    cdef Py_ssize_t si, lo, hi, j, side
    cdef i64 s, end, best, w, x, e
    cdef bint started = True
    out = []
    while started:
        started = False
        for si in range(n_starts):
            s = start_order[si]
            if status[s] != FREE or touch[s] != 0 or not allowed[s]:
                continue
            started = True
            lo = L
            hi = L + 1
            buf[lo] = s
            status[s] = ON_PATH
            for e in range(indptr[s], indptr[s + 1]):
                touch[indices[e]] += 1
            for side in range(2):
                end = buf[hi - 1] if side == 0 else buf[lo]
                while hi - lo < L:
                    best = -1
                    for e in range(indptr[end], indptr[end + 1]):
                        w = indices[e]
                        if allowed[w] and status[w] == FREE and touch[w] == 1:
                            if best < 0 or rank[w] < rank[best]:
                                best = w
                    if best < 0:
                        break
                    if side == 0:
                        buf[hi] = best
                        hi += 1
                    else:
                        lo -= 1
                        buf[lo] = best
                    status[best] = ON_PATH
                    for e in range(indptr[best], indptr[best + 1]):
                        touch[indices[e]] += 1
                    end = best
            if hi - lo == L:
                for j in range(lo, hi):
                    status[buf[j]] = RETAINED
                out.append(buf_arr[lo:hi].copy())
            else:
                for j in range(lo, hi):
                    x = buf[j]
                    status[x] = BURNED
                    for e in range(indptr[x], indptr[x + 1]):
                        touch[indices[e]] -= 1
    if out:
        return np.concatenate(out)
    return np.zeros(0, dtype=np.int64)


def classify_connectors(const i64[::1] indptr, const i32[::1] indices, const i64[::1] candidates,
                        const i32[::1] comp_of, const i8[::1] seg_of):
    cdef Py_ssize_t nc = candidates.shape[0]
    res_arr = np.empty((5, nc), dtype=np.int64)
    cdef i64[:, ::1] res = res_arr
    cdef Py_ssize_t ci, cnt = 0, hits
    cdef i64 a, e, w, x, y, t
    for ci in range(nc):
        a = candidates[ci]
        hits = 0
        x = -1
        y = -1
        for e in range(indptr[a], indptr[a + 1]):
            w = indices[e]
            if comp_of[w] >= 0:
                hits += 1
                if hits == 1:
                    x = w
                elif hits == 2:
                    y = w
                else:
                    break
        if hits != 2:
            continue
        if seg_of[x] == SEG_HEAD and seg_of[y] == SEG_TAIL:
            t = x
            x = y
            y = t
        if seg_of[x] != SEG_TAIL or seg_of[y] != SEG_HEAD or comp_of[x] == comp_of[y]:
            continue
        res[0, cnt] = a
        res[1, cnt] = comp_of[x]
        res[2, cnt] = comp_of[y]
        res[3, cnt] = x
        res[4, cnt] = y
        cnt += 1
    return tuple([res_arr[i, :cnt].copy() for i in range(5)])


def conflict_dfs(Py_ssize_t n_vertices, const i64[::1] dptr, const i64[::1] dind,
                 const i64[::1] rptr, const i64[::1] reps, const i64[::1] cptr,
                 const i32[::1] cind, Py_ssize_t n_reps):
    cdef cnp.ndarray[i8, ndim=1] where_arr = np.zeros(n_vertices, dtype=np.int8)
    cdef cnp.ndarray[u8, ndim=1] blocked_arr = np.zeros(max(n_reps, 1), dtype=np.uint8)
    cdef cnp.ndarray[i64, ndim=1] cur_edge_arr = np.array(dptr[:n_vertices], dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] cur_rep_arr = np.zeros(n_vertices, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] stack_arr = np.empty(max(n_vertices, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] sreps_arr = np.empty(max(n_vertices, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] best_arr = np.empty(max(n_vertices, 1), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] breps_arr = np.empty(max(n_vertices, 1), dtype=np.int64)
    cdef i8[::1] where = where_arr
    cdef u8[::1] blocked = blocked_arr
    cdef i64[::1] cur_edge = cur_edge_arr
    cdef i64[::1] cur_rep = cur_rep_arr
    cdef i64[::1] stack = stack_arr
    cdef i64[::1] sreps = sreps_arr
    cdef i64[::1] best = best_arr
    cdef i64[::1] breps = breps_arr
    cdef Py_ssize_t top = 0, best_len = 0, n_s = 0, n_t = n_vertices, next_t = 0, j
    cdef long long steps = 0
    cdef bint balanced = (n_s == n_t)
    cdef i64 u, v, e, r, i, hi, stop, found, z
    while n_s < n_vertices:
        if top == 0:
            while where[next_t] != 0:
                next_t += 1
            where[next_t] = 1
            stack[0] = next_t
            top = 1
            n_t -= 1
        else:
            u = stack[top - 1]
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
                stack[top] = v
                sreps[top - 1] = found
                top += 1
                n_t -= 1
                blocked[found] = 1
                for j in range(cptr[found], cptr[found + 1]):
                    blocked[cind[j]] = 1
            else:
                where[u] = 2
                top -= 1
                n_s += 1
        steps += 1
        if top > best_len:
            best_len = top
            for j in range(top):
                best[j] = stack[j]
            for j in range(top - 1):
                breps[j] = sreps[j]
        if n_s == n_t:
            balanced = True
    return (best_arr[:best_len].copy(), breps_arr[:max(best_len - 1, 0)].copy(),
            steps, bool(balanced))
