"""Exhaustive ground truth for small instances.

Everything here is brute force with hard size guards.  These functions are
the reference the fast code and the closed-form bounds are checked against.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conflict_dfs import AdmissiblePath, ConflictSystem, Digraph
from .graph_core import Graph

MAX_PATH_N = 16
MAX_TMATCHING_N = 14
MAX_COPIES_N = 12
MAX_COPIES_K = 8
MAX_PROFILE_K = 7
MAX_PROFILE_N = 12
MAX_SUBTREE_N = 12
MAX_ADMISSIBLE_N = 8
MAX_ADMISSIBLE_REPS = 12


class InstanceTooLarge(ValueError):
    pass


def _guard(cond: bool, what: str) -> None:
    if not cond:
        raise InstanceTooLarge(what)


def _masks(g: Graph) -> list[int]:
    return [sum(1 << w for w in g.neighbors(v).tolist()) for v in range(g.n)]


def _popcount(x: int) -> int:
    return bin(x).count("1")


# -- longest induced path ------------------------------------------------------


def max_induced_path_exact(g: Graph) -> tuple[int, list[int]]:
    """Longest induced path by exhaustive path extension.

    Returns ``(edge_length, witness)``.  The empty graph gives ``(0, [])``.
    """
    _guard(g.n <= MAX_PATH_N, f"n={g.n} exceeds {MAX_PATH_N}")
    adj = _masks(g)
    best: list[int] = []

    def extend(path: list[int], used: int) -> None:
        nonlocal best
        if len(path) > len(best):
            best = list(path)
        end = path[-1]
        end_bit = 1 << end
        cand = adj[end] & ~used
        while cand:
            w = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            # w may touch the path only at its current end
            if adj[w] & used == end_bit:
                path.append(w)
                extend(path, used | 1 << w)
                path.pop()

    for s in range(g.n):
        extend([s], 1 << s)
        if len(best) == g.n:
            break
    return max(len(best) - 1, 0), best


def _order_path(vertices: list[int], adj: list[int]) -> list[int]:
    if len(vertices) <= 1:
        return list(vertices)
    vmask = sum(1 << v for v in vertices)
    start = next(v for v in vertices if _popcount(adj[v] & vmask) == 1)
    order, seen = [start], 1 << start
    while len(order) < len(vertices):
        nxt = adj[order[-1]] & vmask & ~seen
        w = (nxt & -nxt).bit_length() - 1
        order.append(w)
        seen |= 1 << w
    return order


def _is_connected(vertices: list[int], vmask: int, adj: list[int]) -> bool:
    if not vertices:
        return True
    seen = 1 << vertices[0]
    frontier = seen
    while frontier:
        v = (frontier & -frontier).bit_length() - 1
        frontier &= frontier - 1
        new = adj[v] & vmask & ~seen
        seen |= new
        frontier |= new
    return seen == vmask


def max_induced_path_by_subsets(g: Graph) -> tuple[int, list[int]]:
    """Independent second method: test every vertex subset for inducing a path.

    A subset induces a path iff it is connected, has |U| - 1 induced edges and
    maximum induced degree at most 2.
    """
    _guard(g.n <= MAX_PATH_N, f"n={g.n} exceeds {MAX_PATH_N}")
    adj = _masks(g)
    best_mask, best_size = 0, 0
    for mask in range(1, 1 << g.n):
        size = _popcount(mask)
        if size <= best_size:
            continue
        vs = [v for v in range(g.n) if mask >> v & 1]
        degs = [_popcount(adj[v] & mask) for v in vs]
        if max(degs) > 2 or sum(degs) != 2 * (size - 1):
            continue
        if _is_connected(vs, mask, adj):
            best_mask, best_size = mask, size
    vs = [v for v in range(g.n) if best_mask >> v & 1]
    return max(best_size - 1, 0), _order_path(vs, adj)


# -- T-matchings -----------------------------------------------------------------


def tree_canonical_form(adj: dict[int, set[int]]) -> str:
    """Canonical string of an unrooted tree (AHU encoding rooted at the center(s))."""
    verts = list(adj)
    if not verts:
        return ""
    deg = {v: len(adj[v]) for v in verts}
    leaves = [v for v in verts if deg[v] <= 1]
    remaining = len(verts)
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for leaf in leaves:
            for w in adj[leaf]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
            deg[leaf] = 0
        leaves = nxt
    centers = leaves

    def encode(v: int, parent: int) -> str:
        return "(" + "".join(sorted(encode(w, v) for w in adj[v] if w != parent)) + ")"

    return min(encode(c, -1) for c in centers)


def is_tree(g: Graph) -> bool:
    if g.n == 0:
        return False
    adj = _masks(g)
    return g.edge_count == g.n - 1 and _is_connected(list(range(g.n)), (1 << g.n) - 1, adj)


def _graph_as_dict(g: Graph) -> dict[int, set[int]]:
    return {v: set(g.neighbors(v).tolist()) for v in range(g.n)}


def _components(vs: list[int], vmask: int, adj: list[int]) -> list[list[int]]:
    comps, left = [], vmask
    while left:
        root = (left & -left).bit_length() - 1
        seen = frontier = 1 << root
        while frontier:
            v = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            new = adj[v] & vmask & ~seen
            seen |= new
            frontier |= new
        comps.append([v for v in vs if seen >> v & 1])
        left &= ~seen
    return comps


def max_induced_tmatching_exact(g: Graph, t_order: int, t_pattern: Graph) -> int:
    """Largest order of a vertex set inducing disjoint copies of the tree ``t_pattern``.

    Candidate sizes are tried from the largest multiple of ``t_order`` down.
    """
    _guard(g.n <= MAX_TMATCHING_N, f"n={g.n} exceeds {MAX_TMATCHING_N}")
    if t_pattern.n != t_order:
        raise ValueError("t_order must equal the pattern's vertex count")
    if not is_tree(t_pattern):
        raise ValueError("pattern is not a tree")
    target = tree_canonical_form(_graph_as_dict(t_pattern))
    adj = _masks(g)
    for size in range(g.n - g.n % t_order, 0, -t_order):
        for vs in itertools.combinations(range(g.n), size):
            mask = sum(1 << v for v in vs)
            edges = sum(_popcount(adj[v] & mask) for v in vs) // 2
            if edges != (size // t_order) * (t_order - 1):
                continue
            comps = _components(list(vs), mask, adj)
            if len(comps) * t_order != size or any(len(c) != t_order for c in comps):
                continue
            if all(tree_canonical_form({v: {w for w in c if adj[v] >> w & 1} for v in c}) == target
                   for c in comps):
                return size
    return 0


def max_induced_matching_by_edges(g: Graph) -> int:
    """Maximum number of edges in an induced matching, by include/exclude over edges.

    Shares no code with the subset search above.
    """
    _guard(g.n <= MAX_TMATCHING_N, f"n={g.n} exceeds {MAX_TMATCHING_N}")
    adj = _masks(g)
    edges = [(u, v) for u, v in g.edges().tolist()]
    best = 0

    def go(i: int, blocked: int, count: int) -> None:
        nonlocal best
        if count + (len(edges) - i) <= best:
            return
        if i == len(edges):
            best = max(best, count)
            return
        u, v = edges[i]
        if not (blocked >> u & 1 or blocked >> v & 1):
            # endpoints and all their neighbors become unusable
            go(i + 1, blocked | adj[u] | adj[v] | 1 << u | 1 << v, count + 1)
        go(i + 1, blocked, count)

    go(0, 0, 0)
    return best


# -- labelled copies and compatibility profiles -------------------------------------


def count_labelled_induced_copies(g: Graph, pattern: Graph) -> int:
    """Number of injections V(pattern) -> V(g) that are induced embeddings."""
    _guard(g.n <= MAX_COPIES_N and pattern.n <= MAX_COPIES_K, "instance too large")
    adj = _masks(g)
    pat = _masks(pattern)
    k = pattern.n
    count = 0

    def go(i: int, images: list[int], used: int) -> None:
        nonlocal count
        if i == k:
            count += 1
            return
        for w in range(g.n):
            if used >> w & 1:
                continue
            if all((pat[i] >> j & 1) == (adj[w] >> images[j] & 1) for j in range(i)):
                images.append(w)
                go(i + 1, images, used | 1 << w)
                images.pop()

    go(0, [], 0)
    return count


def count_labelled_induced_copies_batch(adj: np.ndarray, pattern: Graph) -> np.ndarray:
    """Per-sample counts for a batch of adjacency matrices, shape (B, n, n)."""
    n = adj.shape[1]
    k = pattern.n
    _guard(n <= MAX_COPIES_N and k <= MAX_COPIES_K, "instance too large")
    inj = np.array(list(itertools.permutations(range(n), k)), dtype=np.intp).reshape(-1, k)
    pat = pattern.adjacency_matrix()
    ok = np.ones((adj.shape[0], inj.shape[0]), dtype=bool)
    for a in range(k):
        for b in range(a + 1, k):
            ok &= adj[:, inj[:, a], inj[:, b]] == pat[a, b]
    return ok.sum(axis=1)


@dataclass(frozen=True, order=True)
class IntersectionProfile:
    s: int
    c: int

    def __post_init__(self):
        if not 0 <= self.c <= self.s or (self.s > 0 and self.c < 1):
            raise ValueError(f"invalid profile (s={self.s}, c={self.c})")


def falling_factorial(n: int, k: int) -> int:
    if k < 0:
        return 0
    return math.perm(n, k) if n >= 0 else 0


def _check_sigma0(pattern: Graph, sigma0: Sequence[int], n: int) -> None:
    if len(sigma0) != pattern.n or len(set(sigma0)) != pattern.n:
        raise ValueError("sigma0 must be an injection defined on all pattern vertices")
    if any(not 0 <= x < n for x in sigma0):
        raise ValueError("sigma0 maps outside [n]")


def enumerate_compatible_by_profile(pattern: Graph, sigma0: Sequence[int], n: int) -> dict[IntersectionProfile, int]:
    """Count injections compatible with ``sigma0``, grouped by intersection profile.

    An injection is determined, up to the (n-k)_{k-s} ways of placing the
    non-overlapping pattern vertices outside the image of ``sigma0``, by the
    partial map recording which pattern vertex lands on which image vertex.
    Those partial maps are enumerated exhaustively; compatibility and the
    profile depend only on them.
    """
    k = pattern.n
    _guard(k <= MAX_PROFILE_K and n <= MAX_PROFILE_N, "instance too large")
    _check_sigma0(pattern, sigma0, n)
    adj = _masks(pattern)
    counts: Counter = Counter()
    # tau[x] = pattern vertex whose sigma0-image receives x, or -1 for "outside"
    tau = [-1] * k

    def go(x: int, used: int) -> None:
        if x == k:
            targets = [t for t in tau if t >= 0]
            s = len(targets)
            tmask = sum(1 << t for t in targets)
            c = len(_components(targets, tmask, adj)) if s else 0
            ways = falling_factorial(n - k, k - s)
            if ways:
                counts[IntersectionProfile(s, c)] += ways
            return
        tau[x] = -1
        go(x + 1, used)
        for t in range(k):
            if used >> t & 1:
                continue
            if all(tau[y] < 0 or (adj[x] >> y & 1) == (adj[t] >> tau[y] & 1) for y in range(x)):
                tau[x] = t
                go(x + 1, used | 1 << t)
        tau[x] = -1

    go(0, 0)
    return dict(counts)


def count_compatible_direct(pattern: Graph, sigma0: Sequence[int], n: int) -> dict[IntersectionProfile, int]:
    """Same quantity by iterating over every injection into [n]; tiny n only."""
    k = pattern.n
    _guard(math.perm(n, k) <= 2_000_000, "too many injections for direct enumeration")
    _check_sigma0(pattern, sigma0, n)
    adj = _masks(pattern)
    pre = {img: x for x, img in enumerate(sigma0)}
    counts: Counter = Counter()
    for sigma in itertools.permutations(range(n), k):
        shared = [(x, pre[img]) for x, img in enumerate(sigma) if img in pre]
        compatible = all((adj[x] >> y & 1) == (adj[tx] >> ty & 1)
                         for (x, tx), (y, ty) in itertools.combinations(shared, 2))
        if not compatible:
            continue
        targets = [t for _, t in shared]
        tmask = sum(1 << t for t in targets)
        c = len(_components(targets, tmask, adj)) if targets else 0
        counts[IntersectionProfile(len(targets), c)] += 1
    return dict(counts)


def count_subtrees_containing(h: Graph, v: int, s: int) -> int:
    """Number of s-vertex sets containing ``v`` that induce a tree in ``h``."""
    _guard(h.n <= MAX_SUBTREE_N, f"n={h.n} exceeds {MAX_SUBTREE_N}")
    if not 0 <= v < h.n:
        raise ValueError("vertex out of range")
    if s < 1:
        return 0
    adj = _masks(h)
    others = [w for w in range(h.n) if w != v]
    total = 0
    for rest in itertools.combinations(others, s - 1):
        vs = [v, *rest]
        mask = sum(1 << w for w in vs)
        if sum(_popcount(adj[w] & mask) for w in vs) != 2 * (s - 1):
            continue
        if _is_connected(vs, mask, adj):
            total += 1
    return total


# -- admissible paths -----------------------------------------------------------------


def _pick_representatives(cands: list[tuple[int, ...]], closed: list[int]) -> list[int] | None:
    """Distinct, pairwise conflict-free representatives, one per candidate list."""
    chosen: list[int] = []

    def go(i: int, spoiled: int) -> bool:
        if i == len(cands):
            return True
        for y in cands[i]:
            if not spoiled >> y & 1:
                chosen.append(y)
                if go(i + 1, spoiled | closed[y]):
                    return True
                chosen.pop()
        return False

    return chosen if go(0, 0) else None


def longest_admissible_path_exact(d: Digraph, cs: ConflictSystem) -> AdmissiblePath:
    """Maximum admissible path over all directed paths and representative choices."""
    _guard(d.n <= MAX_ADMISSIBLE_N and cs.n_reps <= MAX_ADMISSIBLE_REPS, "instance too large")
    nbrs = cs.conflict_graph.neighbor_sets()
    closed = [(1 << y) | sum(1 << z for z in nbrs[y]) for y in range(cs.n_reps)]
    best = AdmissiblePath((0,), ()) if d.n else AdmissiblePath((), ())

    def go(path: list[int], used: int) -> None:
        nonlocal best
        u = path[-1]
        for v in d.out_neighbors(u).tolist():
            if used >> v & 1:
                continue
            path.append(v)
            cands = [cs.candidates(a, b) for a, b in zip(path, path[1:])]
            reps = _pick_representatives(cands, closed)
            if reps is not None:
                if len(path) > len(best.vertices):
                    best = AdmissiblePath(tuple(path), tuple(reps))
                go(path, used | 1 << v)
            path.pop()

    for s in range(d.n):
        go([s], 1 << s)
    return best
