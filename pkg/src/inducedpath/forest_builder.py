"""Greedy construction of induced linear forests with equal-order components.

Paths are grown one at a time inside an allowed vertex set.  A path may be
extended at an end by a free neighbor of that end with no other neighbor on
the path or in the forest built so far; among such neighbors the one with the
smallest random rank is taken.  Growth continues at the last vertex until it
gets stuck, then at the first.  A path that reaches order ``L`` is kept; a
path that gets stuck is discarded and its vertices are burned for the rest
of the restart.  Each restart draws a fresh start order and fresh ranks, and
the largest forest over all restarts is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from . import rng as _rng
from .graph_core import Graph

HEAD = "head"
TAIL = "tail"


@dataclass(frozen=True)
class LinearForest:
    """Directed vertex-disjoint paths, each listed from one end to the other."""

    components: tuple[tuple[int, ...], ...]
    host: Graph | None = field(default=None, repr=False, compare=False)
    restart_orders: tuple[int, ...] = field(default=(), compare=False)

    @property
    def order(self) -> int:
        return sum(len(c) for c in self.components)

    def __len__(self):
        return len(self.components)

    def vertices(self) -> list[int]:
        return [v for c in self.components for v in c]

    def normalized_order(self, p: float, n: int | None = None) -> float:
        """Order divided by log(n p) / p, the scale of the largest such forests."""
        if n is None:
            if self.host is None:
                raise ValueError("need n when the forest has no host graph")
            n = self.host.n
        return self.order * p / math.log(n * p)

    def truncated(self, count: int) -> "LinearForest":
        return LinearForest(self.components[:count], self.host, self.restart_orders)


def segment(component: Sequence[int], which: str, m: int) -> tuple[int, ...]:
    """First (``head``) or last (``tail``) ``m`` vertices of a directed path.

    Requires 2m < len(component) so the two segments are disjoint and the
    path keeps at least one vertex between them.
    """
    if m < 1 or 2 * m >= len(component):
        raise ValueError(f"segment length {m} too large for a path of order {len(component)}")
    if which == HEAD:
        return tuple(component[:m])
    if which == TAIL:
        return tuple(component[-m:])
    raise ValueError(f"which must be {HEAD!r} or {TAIL!r}")


def _allowed_mask(n: int, allowed: Iterable[int] | None) -> np.ndarray:
    mask = np.zeros(n, dtype=np.uint8)
    if allowed is None:
        mask[:] = 1
        return mask
    idx = np.asarray(list(allowed) if not isinstance(allowed, np.ndarray) else allowed, dtype=np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ValueError("allowed vertex out of range")
    mask[idx] = 1
    return mask


def build_induced_linear_forest(g: Graph, allowed: Iterable[int] | None, L: int,
                                max_rounds: int = 1, seed: int = 0) -> LinearForest:
    """Best forest over ``max_rounds`` restarts; restart i uses stream (seed, FOREST, i).

    Earlier restarts win ties, so raising ``max_rounds`` never lowers the result.
    """
    if L < 2:
        raise ValueError("component order L must be at least 2")
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    mask = _allowed_mask(g.n, allowed)
    verts = np.flatnonzero(mask).astype(np.int64)
    best = np.zeros(0, dtype=np.int64)
    orders = []
    for i in range(max_rounds):
        gen = _rng.make_rng(seed, _rng.FOREST, i)
        start_order = gen.permutation(verts)
        rank = gen.permutation(g.n).astype(np.int64)
        flat = _kernels.grow_forest(g.indptr, g.indices, mask, start_order, rank, L)
        orders.append(int(flat.size))
        if flat.size > best.size:
            best = flat
    comps = tuple(tuple(row) for row in best.reshape(-1, L).tolist())
    return LinearForest(comps, g, tuple(orders))


def verify_induced_forest(g: Graph, f: LinearForest, L: int | None = None) -> bool:
    """Check every linear-forest invariant of ``f`` against ``g``.

    Components must be vertex-disjoint paths of ``g`` and their union must
    induce no edge besides the path edges.  With ``L`` given, every
    component must have exactly that order.
    """
    comps = f.components
    if L is not None and any(len(c) != L for c in comps):
        return False
    flat = np.asarray([v for c in comps for v in c], dtype=np.int64)
    if flat.size == 0:
        return True
    if any(len(c) == 0 for c in comps):
        return False
    if flat.min() < 0 or flat.max() >= g.n or np.unique(flat).size != flat.size:
        return False
    comp_of = np.full(g.n, -1, dtype=np.int64)
    pos = np.zeros(g.n, dtype=np.int64)
    comp_of[flat] = np.repeat(np.arange(len(comps)), [len(c) for c in comps])
    pos[flat] = np.concatenate([np.arange(len(c)) for c in comps])
    deg = g.indptr[flat + 1] - g.indptr[flat]
    src = np.repeat(flat, deg)
    nb = np.concatenate([g.indices[g.indptr[v]:g.indptr[v + 1]] for v in flat.tolist()]).astype(np.int64)
    inside = comp_of[nb] >= 0
    src, nb = src[inside], nb[inside]
    if np.any(comp_of[src] != comp_of[nb]) or np.any(np.abs(pos[src] - pos[nb]) != 1):
        return False
    return src.size == 2 * sum(len(c) - 1 for c in comps)
