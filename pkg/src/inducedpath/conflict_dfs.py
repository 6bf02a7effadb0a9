"""Admissible paths in a digraph under a conflict system.

A conflict system on the edges of a digraph is a conflict graph ``C`` plus an
assignment of candidate representatives (vertices of ``C``) to every edge.  A
directed path is admissible when each of its edges can be given a
representative from its own candidate set so that the chosen representatives
are distinct and pairwise non-adjacent in ``C``.

``find_admissible_path`` runs a depth-first search that carries a growing set
``X`` of used representatives and only advances along an edge whose candidate
set still holds a representative outside ``X`` with no ``C``-edge into ``X``.
If every pair of disjoint vertex sets of size ``k`` is joined by such an
edge, whatever ``X`` is, the search stack reaches ``N - 2k + 2`` vertices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .graph_core import Graph, GraphError, parse_edge_list

# exhaustive hypothesis check limits
MAX_CHECK_VERTICES = 8
MAX_CHECK_REPS = 12


@dataclass(frozen=True, eq=False)
class Digraph:
    n: int
    indptr: np.ndarray
    indices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "indptr", np.ascontiguousarray(self.indptr, dtype=np.int64))
        object.__setattr__(self, "indices", np.ascontiguousarray(self.indices, dtype=np.int64))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Digraph":
        arr = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise GraphError("arc endpoint out of range")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise GraphError("self-loop")
        key = np.unique(arr[:, 0] * n + arr[:, 1]) if arr.size else np.zeros(0, dtype=np.int64)
        if key.size != arr.shape[0]:
            raise GraphError("duplicate arc")
        src, dst = key // max(n, 1), key % max(n, 1)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst)

    @property
    def edge_count(self) -> int:
        return int(self.indices.size)

    def out_neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, int(v)) for u in range(self.n) for v in self.out_neighbors(u)]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.out_neighbors(u)
        i = int(np.searchsorted(row, v))
        return i < row.size and int(row[i]) == v


@dataclass(frozen=True)
class ConflictSystem:
    """Conflict graph plus ``assignment[(u, v)]`` = candidate representatives.

    Edges absent from ``assignment`` have no candidates.
    """

    conflict_graph: Graph
    assignment: Mapping[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (u, v), reps in self.assignment.items():
            rs = tuple(sorted({int(y) for y in reps}))
            if rs and (rs[0] < 0 or rs[-1] >= self.conflict_graph.n):
                raise GraphError(f"representative out of range on arc {(u, v)}")
            clean[(int(u), int(v))] = rs
        object.__setattr__(self, "assignment", clean)

    @property
    def n_reps(self) -> int:
        return self.conflict_graph.n

    def candidates(self, u: int, v: int) -> tuple[int, ...]:
        return self.assignment.get((u, v), ())

    def aligned(self, d: Digraph) -> tuple[np.ndarray, np.ndarray]:
        """Candidate lists as CSR aligned with ``d``'s arc order."""
        for (u, v) in self.assignment:
            if not d.has_edge(u, v):
                raise GraphError(f"assignment names a non-arc {(u, v)}")
        lists = [self.candidates(u, v) for u, v in d.edges()]
        rptr = np.zeros(len(lists) + 1, dtype=np.int64)
        np.cumsum([len(r) for r in lists], out=rptr[1:])
        reps = np.fromiter(itertools.chain.from_iterable(lists), dtype=np.int64, count=int(rptr[-1]))
        return rptr, reps


@dataclass(frozen=True)
class AdmissiblePath:
    vertices: tuple[int, ...]
    representatives: tuple[int, ...]

    @property
    def edge_length(self) -> int:
        return max(len(self.vertices) - 1, 0)

    def __len__(self):
        return len(self.vertices)


def is_admissible(d: Digraph, cs: ConflictSystem, path: AdmissiblePath) -> bool:
    """Re-validate a path and its representatives from scratch."""
    vs, rs = list(path.vertices), list(path.representatives)
    if not vs:
        return not rs
    if len(rs) != len(vs) - 1 or len(set(vs)) != len(vs):
        return False
    if any(not 0 <= v < d.n for v in vs):
        return False
    for (u, v), y in zip(zip(vs, vs[1:]), rs):
        if not d.has_edge(u, v) or y not in cs.candidates(u, v):
            return False
    if len(set(rs)) != len(rs):
        return False
    nbrs = cs.conflict_graph.neighbor_sets()
    chosen = set(rs)
    return all(nbrs[y].isdisjoint(chosen) for y in rs)


@dataclass
class DfsState:
    """Explored ``S``, unvisited ``T``, stack ``U`` and used representatives ``X``.

    ``stack_reps[i]`` is the representative of arc ``stack[i] -> stack[i+1]``.
    ``chosen`` keeps every representative ever used, including those of arcs
    that have since left the stack.
    """

    explored: set[int]
    unvisited: set[int]
    stack: list[int]
    stack_reps: list[int]
    chosen: set[int]

    @classmethod
    def initial(cls, d: Digraph) -> "DfsState":
        return cls(set(), set(range(d.n)), [], [], set())

    @property
    def terminated(self) -> bool:
        return not self.unvisited and not self.stack

    def as_path(self) -> AdmissiblePath:
        return AdmissiblePath(tuple(self.stack), tuple(self.stack_reps))

    def check(self, d: Digraph, cs: ConflictSystem) -> None:
        """Assert the state invariants."""
        on_stack = set(self.stack)
        assert len(on_stack) == len(self.stack)
        assert not (self.explored & self.unvisited or self.explored & on_stack or self.unvisited & on_stack)
        assert len(self.explored) + len(self.unvisited) + len(self.stack) == d.n
        assert len(self.stack_reps) == max(len(self.stack) - 1, 0)
        assert set(self.stack_reps) <= self.chosen
        assert is_admissible(d, cs, self.as_path())


class TerminatedError(RuntimeError):
    pass


def _blocked(cs: ConflictSystem, chosen: set[int], y: int) -> bool:
    return y in chosen or not cs.conflict_graph.neighbor_sets()[y].isdisjoint(chosen)


def step(state: DfsState, d: Digraph, cs: ConflictSystem) -> DfsState:
    """One round of the search; returns a new state, ``state`` is untouched.

    With an empty stack the lowest unvisited vertex is pushed.  Otherwise the
    first out-neighbor ``v`` of the stack top (ascending) that is unvisited
    and has a free representative ``y`` (ascending, not in X, no conflict
    with X) is pushed and ``y`` joins X; failing that, the top is retired to
    the explored set.
    """
    if state.terminated:
        raise TerminatedError("search already finished")
    new = DfsState(set(state.explored), set(state.unvisited), list(state.stack),
                   list(state.stack_reps), set(state.chosen))
    if not new.stack:
        v = min(new.unvisited)
        new.unvisited.remove(v)
        new.stack.append(v)
        return new
    u = new.stack[-1]
    for v in d.out_neighbors(u).tolist():
        if v not in new.unvisited:
            continue
        for y in cs.candidates(u, v):
            if not _blocked(cs, new.chosen, y):
                new.unvisited.remove(v)
                new.stack.append(v)
                new.stack_reps.append(y)
                new.chosen.add(y)
                return new
    new.stack.pop()
    if new.stack_reps:
        new.stack_reps.pop()
    new.explored.add(u)
    return new


def trace(d: Digraph, cs: ConflictSystem) -> Iterable[DfsState]:
    """Yield every state of a full run, starting with the initial one."""
    state = DfsState.initial(d)
    yield state
    while not state.terminated:
        state = step(state, d, cs)
        yield state


@dataclass(frozen=True)
class DfsResult:
    path: AdmissiblePath
    steps: int
    balanced: bool


def run_dfs(d: Digraph, cs: ConflictSystem) -> DfsResult:
    """Full search via the compiled kernel, with run statistics."""
    rptr, reps = cs.aligned(d)
    g = cs.conflict_graph
    best, best_reps, steps, balanced = _kernels.conflict_dfs(
        d.n, d.indptr, d.indices, rptr, reps, g.indptr, g.indices, g.n)
    path = AdmissiblePath(tuple(best.tolist()), tuple(best_reps.tolist()))
    return DfsResult(path, int(steps), bool(balanced))


def find_admissible_path(d: Digraph, cs: ConflictSystem) -> AdmissiblePath:
    """Longest stack seen during the search (first one on ties)."""
    return run_dfs(d, cs).path


def _closed_masks(cs: ConflictSystem) -> list[int]:
    nbrs = cs.conflict_graph.neighbor_sets()
    return [(1 << y) | sum(1 << z for z in nbrs[y]) for y in range(cs.n_reps)]


def check_expansion_hypothesis(d: Digraph, cs: ConflictSystem, k: int, x_cap: int | None = None) -> bool:
    """Exhaustively test the expansion condition for parameter ``k``.

    True iff for all disjoint S, T of size k and every X with |X| <= x_cap,
    some arc S -> T has a representative outside X with no conflict into X.
    ``x_cap`` defaults to N - 1 and is clamped to |V(C)|.

    A representative y is spoiled by X exactly when X meets the closed
    neighborhood N[y], so the union over x in X of N[x] is the spoiled set;
    all such unions are tabulated once.
    """
    n, r = d.n, cs.n_reps
    if n > MAX_CHECK_VERTICES or r > MAX_CHECK_REPS:
        raise ValueError(f"instance too large for exhaustive check (N={n}, |V(C)|={r})")
    if x_cap is None:
        x_cap = n - 1
    if x_cap > n - 1:
        raise ValueError("x_cap may not exceed N - 1")
    x_cap = min(x_cap, r)
    if k < 1:
        return False  # S = T = {} are joined by no arc
    if 2 * k > n:
        return True  # no disjoint pair exists
    closed = _closed_masks(cs)
    spoiled = {0}
    frontier = {0: 0}  # X mask -> spoiled mask, by increasing |X|
    for _ in range(x_cap):
        nxt = {}
        for xm, sm in frontier.items():
            for y in range(r):
                if not xm >> y & 1:
                    nxt[xm | 1 << y] = sm | closed[y]
        frontier = nxt
        spoiled.update(nxt.values())
    spoiled = _maximal(spoiled)
    arc_reps = {}
    for u, v in d.edges():
        arc_reps[(u, v)] = sum(1 << y for y in cs.candidates(u, v))
    verts = range(n)
    for s_set in itertools.combinations(verts, k):
        rest = [v for v in verts if v not in s_set]
        for t_set in itertools.combinations(rest, k):
            want = 0
            for u in s_set:
                for v in t_set:
                    want |= arc_reps.get((u, v), 0)
            if want == 0 or any(want & ~sm == 0 for sm in spoiled):
                return False
    return True


def _maximal(masks: set[int]) -> list[int]:
    out = []
    for m in sorted(masks, key=lambda z: -bin(z).count("1")):
        if not any(m & ~o == 0 for o in out):
            out.append(m)
    return out


# -- interchange format -----------------------------------------------------


def format_instance(d: Digraph, cs: ConflictSystem) -> str:
    """Header ``N M R``, M lines ``u v r1 r2 ...``, then C as an edge list."""
    arcs = d.edges()
    lines = [f"{d.n} {len(arcs)} {cs.n_reps}"]
    for u, v in arcs:
        lines.append(" ".join(str(x) for x in (u, v, *cs.candidates(u, v))))
    ce = cs.conflict_graph.edges()
    lines.append(f"{cs.n_reps} {ce.shape[0]}")
    lines.extend(f"{a} {b}" for a, b in ce.tolist())
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> tuple[Digraph, ConflictSystem]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    try:
        n, m, r = (int(x) for x in lines[0].split())
    except (ValueError, IndexError):
        raise GraphError("bad instance header") from None
    arcs, assignment = [], {}
    for ln in lines[1:1 + m]:
        parts = [int(x) for x in ln.split()]
        if len(parts) < 2:
            raise GraphError(f"bad arc line: {ln!r}")
        u, v = parts[0], parts[1]
        arcs.append((u, v))
        assignment[(u, v)] = tuple(parts[2:])
    cg = parse_edge_list(lines[1 + m:])
    if cg.n != r:
        raise GraphError(f"conflict graph has {cg.n} vertices, header says {r}")
    d = Digraph.from_edges(n, arcs)
    return d, ConflictSystem(cg, assignment)


def read_instance(path: str | Path) -> tuple[Digraph, ConflictSystem]:
    return parse_instance(Path(path).read_text())


def write_instance(d: Digraph, cs: ConflictSystem, path: str | Path) -> None:
    Path(path).write_text(format_instance(d, cs))


def random_instance(gen: np.random.Generator, n: int, n_reps: int, arc_p: float,
                    rep_p: float, conflict_p: float) -> tuple[Digraph, ConflictSystem]:
    """Small random instance for fuzzing."""
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and gen.random() < arc_p]
    assignment = {a: tuple(int(y) for y in np.flatnonzero(gen.random(n_reps) < rep_p)) for a in arcs}
    cedges = [(a, b) for a in range(n_reps) for b in range(a + 1, n_reps) if gen.random() < conflict_p]
    return Digraph.from_edges(n, arcs), ConflictSystem(Graph.from_edges(n_reps, cedges), assignment)


def digraph_from_lists(n: int, out: Sequence[Sequence[int]]) -> Digraph:
    return Digraph.from_edges(n, [(u, v) for u in range(n) for v in out[u]])
