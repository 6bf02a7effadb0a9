"""Seeded experiment campaigns, reports and regression baselines."""

from __future__ import annotations

import csv
import io
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .connector_pipeline import MODES, PRACTICAL, full_pipeline
from .graph_core import Graph

SCHEMA_VERSION = 1
DEFAULT_TOLERANCE = 0.05


class CampaignError(RuntimeError):
    pass


class BaselineError(RuntimeError):
    pass


@dataclass(frozen=True)
class GridPoint:
    n: int
    d: float
    eps: float
    mode: str = PRACTICAL

    @property
    def key(self) -> tuple:
        return (self.n, float(self.d), float(self.eps), self.mode)

    def label(self) -> str:
        return f"n={self.n} d={_fmt(float(self.d))} eps={_fmt(float(self.eps))} mode={self.mode}"


@dataclass(frozen=True)
class ExperimentConfig:
    grid: tuple[GridPoint, ...]
    seeds: int = 1
    base_seed: int = 0
    output: str | None = None
    fmt: str = "csv"
    forest_rounds: int = 1
    record_timing: bool = False
    workers: int = 1

    def __post_init__(self):
        if not self.grid:
            raise ValueError("experiment grid is empty")
        if self.seeds < 1:
            raise ValueError("need at least one seed")
        if self.fmt not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        for pt in self.grid:
            if pt.mode not in MODES:
                raise ValueError(f"unknown mode {pt.mode!r}")

    @classmethod
    def product(cls, ns: Iterable[int], ds: Iterable[float], epss: Iterable[float],
                modes: Iterable[str] = (PRACTICAL,), **kw) -> "ExperimentConfig":
        grid = tuple(GridPoint(n, d, e, mo) for n in ns for d in ds for e in epss for mo in modes)
        return cls(grid, **kw)

    def seed_list(self) -> list[int]:
        return [self.base_seed + i for i in range(self.seeds)]


@dataclass(frozen=True)
class ReportRow:
    seed: int
    n: int
    d: float
    eps: float
    L: int
    m: int
    N_components: int
    forest_order: int
    aux_edge_count: int
    admissible_edge_length: int
    final_vertex_length: int
    normalized_constant: float
    certified: bool
    runtime_ms: float
    mode: str = PRACTICAL
    schema_version: int = SCHEMA_VERSION

    @property
    def key(self) -> tuple:
        return (self.n, float(self.d), float(self.eps), self.mode)


COLUMNS = [f.name for f in fields(ReportRow)]


@dataclass
class Report:
    rows: list[ReportRow]
    summary: list[dict] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow([_fmt(getattr(r, c)) for c in COLUMNS])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"schema_version": SCHEMA_VERSION, "rows": [asdict(r) for r in self.rows],
                           "summary": self.summary}, indent=2, sort_keys=True) + "\n"

    def write(self, path: str | Path, fmt: str = "csv") -> None:
        Path(path).write_text(self.to_csv() if fmt == "csv" else self.to_json())


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".9g")
    return str(x)


def path_is_induced_by_pairs(g: Graph, path: Sequence[int]) -> bool:
    """Independent induced-path check: each path vertex must see exactly its
    predecessor and successor among the path vertices."""
    members = set(path)
    if len(members) != len(path):
        return False
    for i, v in enumerate(path):
        if not 0 <= v < g.n:
            return False
        expect = set()
        if i > 0:
            expect.add(path[i - 1])
        if i + 1 < len(path):
            expect.add(path[i + 1])
        seen = {w for w in g.indices[g.indptr[v]:g.indptr[v + 1]].tolist() if w in members}
        if seen != expect:
            return False
    return True


def _run_one(args: tuple) -> tuple[ReportRow, list[int]]:
    pt, seed, rounds, timing = args
    t0 = time.perf_counter()
    res = full_pipeline(pt.n, pt.d, pt.eps, seed, pt.mode, forest_rounds=rounds, keep_graph=True)
    elapsed = (time.perf_counter() - t0) * 1000.0
    certified = res.certified and path_is_induced_by_pairs(res.graph, res.path)
    s = res.stats
    row = ReportRow(
        seed=seed, n=pt.n, d=float(pt.d), eps=float(pt.eps), L=res.params.L, m=res.params.m,
        N_components=s["n_components"], forest_order=s["forest_order"],
        aux_edge_count=s["aux_edge_count"], admissible_edge_length=s["admissible_edge_length"],
        final_vertex_length=s["final_vertex_length"], normalized_constant=float(s["normalized_constant"]),
        certified=certified, runtime_ms=round(elapsed, 3) if timing else 0.0, mode=pt.mode)
    return row, res.path


def summarize(rows: Sequence[ReportRow]) -> list[dict]:
    """Per grid point statistics of the normalized constant, certified rows only."""
    groups: dict[tuple, list[float]] = {}
    for r in rows:
        if r.certified:
            groups.setdefault(r.key, []).append(r.normalized_constant)
    out = []
    for (n, d, eps, mode), vals in groups.items():
        out.append({"n": n, "d": d, "eps": eps, "mode": mode, "rows": len(vals),
                    "mean_normalized_constant": statistics.fmean(vals),
                    "min_normalized_constant": min(vals), "max_normalized_constant": max(vals)})
    return out


def run_experiment(config: ExperimentConfig) -> Report:
    """One row per (grid point, seed), ordered by grid index then seed.

    Any row failing certification aborts the campaign after dumping the
    offending run next to the output (or in the working directory).
    """
    jobs = [(pt, s, config.forest_rounds, config.record_timing)
            for pt in config.grid for s in config.seed_list()]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]
    rows = []
    for row, path in results:
        if not row.certified:
            dump = Path(config.output or "experiment").with_suffix(".failure.json")
            dump.write_text(json.dumps({"row": asdict(row), "path": path}, indent=2))
            raise CampaignError(f"uncertified output at seed {row.seed}, n={row.n}, d={row.d}; dump in {dump}")
        rows.append(row)
    report = Report(rows, summarize(rows))
    if config.output:
        report.write(config.output, config.fmt)
    return report


def _parse_value(col: str, text: str):
    typ = ReportRow.__dataclass_fields__[col].type
    if typ == "bool":
        return text == "true"
    if typ == "int":
        return int(text)
    if typ == "float":
        return float(text)
    return text


def read_report(path: str | Path) -> Report:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        rows = [ReportRow(**r) for r in data["rows"]]
    else:
        reader = csv.DictReader(io.StringIO(text))
        if reader.fieldnames != COLUMNS:
            raise BaselineError(f"report columns {reader.fieldnames} do not match schema v{SCHEMA_VERSION}")
        rows = [ReportRow(**{c: _parse_value(c, rec[c]) for c in COLUMNS}) for rec in reader]
    return Report(rows, summarize(rows))


def bundled_baseline(name: str = "baseline_n100000.json") -> Path:
    """Path of a baseline shipped with the package."""
    return Path(str(resources.files("inducedpath") / "data" / name))


def write_baseline(report: Report, path: str | Path, tolerance: float = DEFAULT_TOLERANCE) -> None:
    points = sorted(report.summary, key=lambda p: (p["n"], p["d"], p["eps"], p["mode"]))
    data = {"schema_version": SCHEMA_VERSION, "tolerance": tolerance,
            "points": [{k: p[k] for k in ("n", "d", "eps", "mode", "rows", "mean_normalized_constant")}
                       for p in points]}
    Path(path).write_text(json.dumps(data, indent=2) + "\n")


def load_baseline(path: str | Path) -> dict:
    p = Path(path)
    if not p.exists():
        raise BaselineError(f"baseline {p} not found")
    try:
        data = json.loads(p.read_text())
        points = data["points"]
        version = data["schema_version"]
        for pt in points:
            float(pt["mean_normalized_constant"])
            (pt["n"], pt["d"], pt["eps"], pt["mode"])
    except (ValueError, KeyError, TypeError) as exc:
        raise BaselineError(f"corrupt baseline {p}: {exc}") from None
    if version != SCHEMA_VERSION:
        raise BaselineError(f"baseline schema v{version}, expected v{SCHEMA_VERSION}")
    return data


@dataclass
class RegressionResult:
    passed: bool
    diffs: list[str]

    def __bool__(self):
        return self.passed


def regression_check(report: Report | Sequence[ReportRow], baseline_path: str | Path,
                     tolerance: float | None = None) -> RegressionResult:
    """Compare per-point mean normalized constants with the baseline.

    Fails on any uncertified row, on a grid point missing from the report,
    or on relative drift beyond ``tolerance`` (default: the baseline's own).
    """
    rows = report.rows if isinstance(report, Report) else list(report)
    base = load_baseline(baseline_path)
    tol = base.get("tolerance", DEFAULT_TOLERANCE) if tolerance is None else tolerance
    diffs = []
    for r in rows:
        if r.schema_version != SCHEMA_VERSION:
            diffs.append(f"row seed={r.seed} has schema v{r.schema_version}")
        if not r.certified:
            diffs.append(f"uncertified row: seed={r.seed} {GridPoint(r.n, r.d, r.eps, r.mode).label()}")
    current = {(p["n"], p["d"], p["eps"], p["mode"]): p["mean_normalized_constant"] for p in summarize(rows)}
    for pt in base["points"]:
        key = (int(pt["n"]), float(pt["d"]), float(pt["eps"]), pt["mode"])
        label = GridPoint(*key).label()
        want = float(pt["mean_normalized_constant"])
        got = current.get(key)
        if got is None:
            diffs.append(f"{label}: missing from report")
            continue
        drift = (got - want) / want if want else (0.0 if got == want else math.inf)
        if abs(drift) > tol:
            diffs.append(f"{label}: mean normalized constant {got:.6g} vs baseline {want:.6g} "
                         f"({drift:+.2%}, tolerance {tol:.2%})")
    return RegressionResult(not diffs, diffs)
