"""End-to-end construction of a long induced path in G(n, d/n).

1. Split the vertices into halves V1, V2 and sample the graph.
2. Grow an induced linear forest with components of order L inside V1.
3. Build the auxiliary digraph on the components: (P1, P2) is an arc when
   some a in V2 has exactly one neighbor among the last m vertices of P1,
   exactly one among the first m vertices of P2, and no other neighbor in
   the forest.  Every such a is a candidate representative of the arc, and
   two candidates conflict when they are adjacent in G[V2].
4. Run the conflict-aware DFS for an admissible path and splice the
   components together through the chosen connectors.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .conflict_dfs import AdmissiblePath, ConflictSystem, Digraph, run_dfs
from .forest_builder import LinearForest, build_induced_linear_forest, verify_induced_forest
from .graph_core import (GnpParams, Graph, induced_subgraph, is_independent_set, is_induced_path,
                         sample_gnp, split_vertices)
from .moment_calc import FeasibilityReport, connection_feasibility_report

PAPER = "paper-faithful"
PRACTICAL = "practical"
MODES = (PAPER, PRACTICAL)

SEG_HEAD, SEG_TAIL = 1, 2


class PipelineError(RuntimeError):
    pass


@dataclass(frozen=True)
class PipelineParams:
    n: int
    d: float
    eps: float
    L: int
    m: int
    k_target: int
    N: int
    mode: str
    # unrounded values of the paper-faithful formulas
    L_real: float = 0.0
    m_real: float = 0.0
    k_real: float = 0.0
    degenerate: bool = False

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.N * self.L != self.k_target:
            raise ValueError("k_target must equal N * L")
        if not self.degenerate and (self.m < 1 or 2 * self.m >= self.L):
            raise ValueError("need m >= 1 and 2m < L")

    @property
    def p(self) -> float:
        return self.d / self.n

    def feasibility(self, forest_order: float | None = None, x_size: float | None = None) -> FeasibilityReport:
        order = self.k_target if forest_order is None else forest_order
        return connection_feasibility_report(self.n, self.d, self.eps, self.m, self.N, order, x_size)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def pipeline_params(n: int, d: float, eps: float, mode: str = PRACTICAL) -> PipelineParams:
    """Scalar knobs for a run.

    Faithful mode: L = sqrt(d)/log^5 d, m = eps L/8, k = (3/2 - eps/4)(n/d) log d,
    N = k/L, floored to integers; L < 3 (or no room for segments) is flagged
    as degenerate with a warning.  Practical: L = max(3, round(sqrt d)),
    m = max(1, round(eps L/8)) reduced until 2m < L, and k rounded to a
    multiple of L.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    ld = math.log(d)
    k_real = (1.5 - eps / 4) * (n / d) * ld
    L_real = math.sqrt(d) / ld ** 5
    m_real = eps * L_real / 8
    if mode == PAPER:
        L = int(math.floor(L_real))
        m = int(math.floor(m_real))
        N = int(math.floor(k_real / L)) if L >= 1 else 0
        degenerate = L < 3 or m < 1 or 2 * m >= L
        if degenerate:
            warnings.warn(f"paper-faithful parameters are degenerate at d={d}: L={L_real:.4g}, m={m_real:.4g}",
                          stacklevel=2)
    else:
        L = max(3, _round_half_up(math.sqrt(d)))
        m = max(1, _round_half_up(eps * L / 8))
        while 2 * m >= L:
            m -= 1
        N = _round_half_up(k_real / L)
        degenerate = False
    return PipelineParams(n, d, eps, L, m, N * L, N, mode, L_real, m_real, k_real, degenerate)


@dataclass(frozen=True)
class AuxEdgeWitness:
    source_component: int
    target_component: int
    connector: int
    attach_tail: int
    attach_head: int


@dataclass(frozen=True)
class AuxiliaryDigraph:
    digraph: Digraph
    conflicts: ConflictSystem
    # (source, target) -> {representative id -> witness}
    witnesses: dict = field(repr=False)
    # representative id -> vertex of g
    rep_vertices: np.ndarray = field(repr=False)

    @property
    def connector_count(self) -> int:
        return sum(len(w) for w in self.witnesses.values())


def _segment_index(g: Graph, f: LinearForest, m: int) -> tuple[np.ndarray, np.ndarray]:
    comp_of = np.full(g.n, -1, dtype=np.int32)
    seg_of = np.zeros(g.n, dtype=np.int8)
    for i, c in enumerate(f.components):
        idx = np.asarray(c, dtype=np.int64)
        comp_of[idx] = i
        seg_of[idx[:m]] = SEG_HEAD
        seg_of[idx[-m:]] = SEG_TAIL
    return comp_of, seg_of


def build_aux_digraph(g: Graph, f: LinearForest, v2: Sequence[int], m: int) -> AuxiliaryDigraph:
    """Auxiliary digraph on forest components, its conflict system and witnesses.

    One pass over the candidates, each classified by scanning its neighbors
    against a vertex -> (component, segment) table.
    """
    if not verify_induced_forest(g, f):
        raise PipelineError("forest is not an induced linear forest of g")
    if m < 1 or any(2 * m >= len(c) for c in f.components):
        raise PipelineError(f"segments of length {m} do not fit every component")
    cand = np.unique(np.asarray(v2, dtype=np.int64))
    forest_vs = np.asarray(f.vertices(), dtype=np.int64)
    if np.intersect1d(cand, forest_vs).size:
        raise PipelineError("connector candidates overlap the forest")
    comp_of, seg_of = _segment_index(g, f, m)
    a, src, tgt, tail_v, head_v = _kernels.classify_connectors(g.indptr, g.indices, cand, comp_of, seg_of)

    conflict_graph, labels = induced_subgraph(g, cand)
    rep_id = np.searchsorted(labels, a)
    witnesses: dict = {}
    for r, av, s, t, x, y in zip(rep_id.tolist(), a.tolist(), src.tolist(), tgt.tolist(),
                                 tail_v.tolist(), head_v.tolist()):
        witnesses.setdefault((s, t), {})[r] = AuxEdgeWitness(s, t, av, x, y)
    digraph = Digraph.from_edges(len(f.components), list(witnesses))
    assignment = {arc: tuple(sorted(w)) for arc, w in witnesses.items()}
    return AuxiliaryDigraph(digraph, ConflictSystem(conflict_graph, assignment), witnesses, labels)


def assemble_induced_path(g: Graph, f: LinearForest, ap: AdmissiblePath, witnesses: dict, m: int) -> list[int]:
    """Splice the components of ``ap`` through their connectors.

    Each component is kept from the vertex its incoming connector attaches
    to (its first vertex for the first component) up to the vertex its
    outgoing connector attaches to (its last vertex for the last one).
    """
    comps = list(ap.vertices)
    reps = list(ap.representatives)
    if len(reps) != max(len(comps) - 1, 0) or len(set(reps)) != len(reps) or len(set(comps)) != len(comps):
        raise PipelineError("invalid admissible path")
    if not comps:
        return []
    links = []
    for (s, t), r in zip(zip(comps, comps[1:]), reps):
        w = witnesses.get((s, t), {}).get(r)
        if w is None:
            raise PipelineError(f"no witness for arc {(s, t)} with representative {r}")
        links.append(w)
    if not is_independent_set(g, [w.connector for w in links]):
        raise PipelineError("connectors are not independent")
    out: list[int] = []
    last = len(comps) - 1
    for j, c in enumerate(comps):
        path = f.components[c]
        L = len(path)
        start = 0
        if j > 0:
            start = path.index(links[j - 1].attach_head)
            if start >= m:
                raise PipelineError("head attachment outside the head segment")
        end = L - 1
        if j < last:
            end = path.index(links[j].attach_tail)
            if end < L - m:
                raise PipelineError("tail attachment outside the tail segment")
        out.extend(path[start:end + 1])
        if j < last:
            out.append(links[j].connector)
    return out


@dataclass
class PipelineResult:
    path: list[int]
    certified: bool
    params: PipelineParams
    stats: dict
    graph: Graph | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {"certified": self.certified, "params": asdict(self.params), "stats": dict(self.stats),
                "path": list(self.path)}


def full_pipeline(n: int, d: float, eps: float, seed: int, mode: str = PRACTICAL,
                  forest_rounds: int = 1, keep_graph: bool = False) -> PipelineResult:
    """Split, sample, grow the forest in V1, connect through V2, certify.

    Degenerate parameters, fewer than two components, or an arcless
    auxiliary digraph all fall back to the single first (longest) component.
    """
    params = pipeline_params(n, d, eps, mode)
    split = split_vertices(n, seed)
    g = sample_gnp(GnpParams.from_degree(n, d), seed)

    L = params.L if not params.degenerate else max(2, params.L)
    forest = build_induced_linear_forest(g, split.part_one, L, forest_rounds, seed)
    if not params.degenerate:
        forest = forest.truncated(params.N)

    aux_edges = 0
    connectors = 0
    adm = AdmissiblePath((0,) if len(forest) else (), ())
    dfs_steps = 0
    if not params.degenerate and len(forest) >= 2:
        aux = build_aux_digraph(g, forest, split.part_two, params.m)
        aux_edges = aux.digraph.edge_count
        connectors = aux.connector_count
        res = run_dfs(aux.digraph, aux.conflicts)
        adm, dfs_steps = res.path, res.steps
        path = assemble_induced_path(g, forest, adm, aux.witnesses, params.m)
    else:
        path = list(forest.components[0]) if len(forest) else []

    certified = is_induced_path(g, path)
    final = len(path)
    stats = {
        "forest_order": forest.order,
        "n_components": len(forest),
        "aux_edge_count": aux_edges,
        "connector_count": connectors,
        "admissible_edge_length": adm.edge_length,
        "final_vertex_length": final,
        "normalized_constant": final * d / (n * math.log(d)),
        "dfs_steps": dfs_steps,
        "backend": _kernels.BACKEND,
    }
    return PipelineResult(path, certified, params, stats, g if keep_graph else None)
