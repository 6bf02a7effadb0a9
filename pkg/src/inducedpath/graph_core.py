"""Sparse undirected graphs, G(n, p) sampling and induced-structure predicates.

Graphs are stored in CSR form: ``indptr`` (int64, length n + 1) and
``indices`` (int32), with each neighbor list strictly increasing.  Vertices
are the dense integers ``0 .. n-1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import rng as _rng

# below this edge probability the sampler skips geometrically over pairs
SPARSE_THRESHOLD = 0.01
_BLOCK = 1 << 22


class GraphError(ValueError):
    """Raised for malformed graphs, bad vertex indices or bad edge-list files."""


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    indptr: np.ndarray
    indices: np.ndarray
    _sets: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "indptr", np.ascontiguousarray(self.indptr, dtype=np.int64))
        object.__setattr__(self, "indices", np.ascontiguousarray(self.indices, dtype=np.int32))
        self.indptr.flags.writeable = False
        self.indices.flags.writeable = False

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int32))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray) -> "Graph":
        """Build a graph from undirected edges; duplicates and self-loops raise."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        if arr.size == 0:
            return cls.empty(n)
        arr = arr.reshape(-1, 2)
        if arr.min() < 0 or arr.max() >= n:
            raise GraphError(f"edge endpoint out of range for n={n}")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise GraphError("self-loop")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        key = lo * n + hi
        order = np.argsort(key, kind="stable")
        key = key[order]
        if np.any(key[1:] == key[:-1]):
            raise GraphError("duplicate edge")
        return _from_sorted_upper(n, lo[order], hi[order])

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj, dtype=bool)
        u, v = np.nonzero(np.triu(adj, 1))
        return _from_sorted_upper(adj.shape[0], u, v)

    @property
    def edge_count(self) -> int:
        return int(self.indptr[-1]) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def neighbor_sets(self) -> list[set[int]]:
        """Per-vertex neighbor sets, built once and cached."""
        if self._sets is None:
            ind = self.indices.tolist()
            ptr = self.indptr.tolist()
            object.__setattr__(self, "_sets", [set(ind[ptr[v]:ptr[v + 1]]) for v in range(self.n)])
        return self._sets

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = int(np.searchsorted(row, v))
        return i < row.size and int(row[i]) == v

    def edges(self) -> np.ndarray:
        """Edges as an (m, 2) array with u < v, sorted."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        cols = self.indices.astype(np.int64)
        keep = rows < cols
        return np.column_stack([rows[keep], cols[keep]])

    def adjacency_matrix(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=bool)
        e = self.edges()
        adj[e[:, 0], e[:, 1]] = True
        adj[e[:, 1], e[:, 0]] = True
        return adj

    def validate(self) -> None:
        """Check symmetry, sortedness, range and absence of self-loops."""
        if self.indptr.shape != (self.n + 1,) or self.indptr[0] != 0:
            raise GraphError("bad indptr")
        if np.any(np.diff(self.indptr) < 0) or self.indptr[-1] != self.indices.size:
            raise GraphError("bad indptr")
        if self.indices.size == 0:
            return
        if self.indices.min() < 0 or self.indices.max() >= self.n:
            raise GraphError("neighbor index out of range")
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        cols = self.indices.astype(np.int64)
        if np.any(rows == cols):
            raise GraphError("self-loop")
        same_row = rows[1:] == rows[:-1]
        if np.any(same_row & (cols[1:] <= cols[:-1])):
            raise GraphError("neighbor lists must be strictly increasing")
        fwd = np.sort(rows * self.n + cols)
        bwd = np.sort(cols * self.n + rows)
        if not np.array_equal(fwd, bwd):
            raise GraphError("adjacency is not symmetric")


def _from_sorted_upper(n: int, lo: np.ndarray, hi: np.ndarray) -> Graph:
    """CSR from edges (lo < hi) sorted by (lo, hi).

    Row r holds its smaller neighbors (entries where r is ``hi``) followed by
    its larger ones (entries where r is ``lo``); both runs are already sorted
    once the ``hi`` side is stably grouped by row.
    """
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    m = lo.size
    deg_up = np.bincount(lo, minlength=n)
    deg_low = np.bincount(hi, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg_up + deg_low, out=indptr[1:])
    indices = np.empty(2 * m, dtype=np.int32)

    up_start = np.zeros(n, dtype=np.int64)
    np.cumsum(deg_up[:-1], out=up_start[1:])
    pos_up = indptr[lo] + deg_low[lo] + (np.arange(m, dtype=np.int64) - up_start[lo])
    indices[pos_up] = hi

    order = np.argsort(hi, kind="stable")
    hs = hi[order]
    low_start = np.zeros(n, dtype=np.int64)
    np.cumsum(deg_low[:-1], out=low_start[1:])
    pos_low = indptr[hs] + (np.arange(m, dtype=np.int64) - low_start[hs])
    indices[pos_low] = lo[order]
    return Graph(n, indptr, indices)


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @classmethod
    def from_degree(cls, n: int, d: float) -> "GnpParams":
        return cls(n, d / n)

    @property
    def d(self) -> float:
        return self.n * self.p

    @property
    def q(self) -> float:
        if self.p == 1.0:
            raise ZeroDivisionError("q = 1/(1-p) is undefined at p = 1")
        return 1.0 / (1.0 - self.p)


def _decode_pairs(pos: np.ndarray, row_start: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map linear indices over pairs u < v (row-major) to (u, v)."""
    u = np.searchsorted(row_start, pos, side="right") - 1
    v = pos - row_start[u] + u + 1
    return u, v


def sample_gnp(params: GnpParams, seed: int) -> Graph:
    """Sample G(n, p) from stream ``(seed, GRAPH, 0)``.

    For p < 0.01 the pair enumeration is traversed with geometric gaps;
    otherwise every pair gets a uniform draw.  The pair order is row-major
    over u < v in both branches.
    """
    n, p = params.n, params.p
    total = n * (n - 1) // 2
    if p == 0.0 or total == 0:
        return Graph.empty(n)
    gen = _rng.make_rng(seed, _rng.GRAPH, 0)
    rows = np.arange(n, dtype=np.int64)
    row_start = rows * (2 * n - rows - 1) // 2

    chunks = []
    if p < SPARSE_THRESHOLD:
        expected = total * p
        size = int(min(max(expected + 6.0 * math.sqrt(expected) + 64, 64), _BLOCK))
        last = -1
        while True:
            gaps = gen.geometric(p, size=size)
            pos = last + np.cumsum(gaps, dtype=np.int64)
            if pos[-1] >= total:
                chunks.append(pos[pos < total])
                break
            chunks.append(pos)
            last = int(pos[-1])
    else:
        for start in range(0, total, _BLOCK):
            stop = min(start + _BLOCK, total)
            hit = gen.random(stop - start) < p
            chunks.append(np.flatnonzero(hit).astype(np.int64) + start)
    pos = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    u, v = _decode_pairs(pos, row_start, n)
    return _from_sorted_upper(n, u, v)


def sample_gnp_adjacency(n: int, p: float, size: int, gen: np.random.Generator) -> np.ndarray:
    """Batch of ``size`` symmetric boolean adjacency matrices of G(n, p)."""
    iu, ju = np.triu_indices(n, 1)
    draws = gen.random((size, iu.size)) < p
    adj = np.zeros((size, n, n), dtype=bool)
    adj[:, iu, ju] = draws
    adj[:, ju, iu] = draws
    return adj


def _check_vertices(n: int, vertices: Iterable[int]) -> list[int]:
    vs = [int(v) for v in vertices]
    for v in vs:
        if not 0 <= v < n:
            raise GraphError(f"vertex {v} out of range for n={n}")
    return vs


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Return ``(g[U], labels)`` where new vertex i is old vertex ``labels[i]``.

    Vertices are relabeled in increasing order of their old index.
    """
    vs = sorted(set(_check_vertices(g.n, vertices)))
    labels = np.asarray(vs, dtype=np.int64)
    k = labels.size
    if k == 0:
        return Graph.empty(0), labels
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[labels] = np.arange(k)
    deg = g.degrees()[labels]
    rows = np.repeat(np.arange(k, dtype=np.int64), deg)
    if rows.size:
        cols = np.concatenate([g.neighbors(v) for v in labels]).astype(np.int64)
    else:
        cols = np.zeros(0, dtype=np.int64)
    cols = new_id[cols]
    keep = cols > rows
    return _from_sorted_upper(k, rows[keep], cols[keep]), labels


def is_induced_copy(g: Graph, pattern: Graph, mapping: Sequence[int]) -> bool:
    """Whether ``mapping`` (pattern vertex i -> g vertex mapping[i]) is an induced embedding."""
    images = _check_vertices(g.n, mapping)
    if len(images) != pattern.n:
        raise GraphError("mapping must be defined on every pattern vertex")
    if len(set(images)) != len(images):
        raise GraphError("mapping is not injective")
    for i in range(pattern.n):
        for j in range(i + 1, pattern.n):
            if pattern.has_edge(i, j) != g.has_edge(images[i], images[j]):
                return False
    return True


def is_independent_set(g: Graph, vertices: Iterable[int]) -> bool:
    vs = np.unique(np.asarray(_check_vertices(g.n, vertices), dtype=np.int64))
    if vs.size < 2:
        return True
    member = np.zeros(g.n, dtype=bool)
    member[vs] = True
    nb = np.concatenate([g.indices[g.indptr[v]:g.indptr[v + 1]] for v in vs.tolist()])
    return not member[nb].any()


@dataclass(frozen=True)
class VertexSplit:
    part_one: np.ndarray
    part_two: np.ndarray


def split_vertices(n: int, seed: int) -> VertexSplit:
    """Random partition with |V1| = ceil(n/2), from stream ``(seed, SPLIT, 0)``."""
    if n < 2:
        raise ValueError("need n >= 2 to split")
    perm = _rng.make_rng(seed, _rng.SPLIT, 0).permutation(n)
    half = (n + 1) // 2
    return VertexSplit(np.sort(perm[:half]), np.sort(perm[half:]))


def is_induced_path(g: Graph, sequence: Sequence[int]) -> bool:
    """True iff ``sequence`` lists distinct vertices of a chordless path in order.

    The empty sequence and single vertices count as (trivial) induced paths.
    Runs in O(sum of degrees along the path).
    """
    seq = np.asarray(sequence, dtype=np.int64)
    k = seq.size
    if k == 0:
        return True
    if seq.min() < 0 or seq.max() >= g.n:
        return False
    pos = np.full(g.n, -1, dtype=np.int64)
    pos[seq] = np.arange(k)
    if np.unique(seq).size != k:
        return False
    deg = g.indptr[seq + 1] - g.indptr[seq]
    src = np.repeat(np.arange(k, dtype=np.int64), deg)
    if src.size:
        nb = np.concatenate([g.indices[g.indptr[v]:g.indptr[v + 1]] for v in seq.tolist()])
    else:
        nb = np.zeros(0, dtype=np.int64)
    at = pos[nb]
    inside = at >= 0
    # every in-path neighbor must be a path neighbor, and each consecutive pair must occur
    if np.any(np.abs(at[inside] - src[inside]) != 1):
        return False
    return int(inside.sum()) == 2 * (k - 1)


def write_edge_list(g: Graph, path: str | Path) -> None:
    e = g.edges()
    lines = [f"{g.n} {e.shape[0]}"]
    lines.extend(f"{u} {v}" for u, v in e.tolist())
    Path(path).write_text("\n".join(lines) + "\n")


def parse_edge_list(lines: Sequence[str]) -> Graph:
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise GraphError("empty edge list")
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphError(f"bad header line: {lines[0]!r}") from None
    if len(lines) - 1 != m:
        raise GraphError(f"header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"bad edge line: {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if u >= v:
            raise GraphError(f"edge lines need u < v: {ln!r}")
        edges.append((u, v))
    return Graph.from_edges(n, edges)


def read_edge_list(path: str | Path) -> Graph:
    return parse_edge_list(Path(path).read_text().splitlines())


def path_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])


def cycle_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])


def complete_graph(k: int) -> Graph:
    return Graph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])
