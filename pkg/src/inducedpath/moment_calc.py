"""Closed-form moment and probability evaluators.

Quantities that under- or overflow at realistic sizes are computed as natural
logarithms; ``log=False`` variants evaluate the same product directly in
floating point (or exact integers) and exist mainly for cross-checking.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping

from .exact_oracles import IntersectionProfile, _components, _masks
from .graph_core import Graph

# exact summation of logs below this many factors, log-gamma above
_LGAMMA_CUTOVER = 50


def log_falling_factorial(n: float, k: int) -> float:
    """log of n (n-1) ... (n-k+1); -inf when the product is zero."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return 0.0
    if n - k + 1 <= 0:
        if float(n).is_integer():
            return -math.inf
        raise ValueError("falling factorial of a non-integer below its length")
    if k <= _LGAMMA_CUTOVER:
        return math.fsum(math.log(n - i) for i in range(k))
    return math.lgamma(n + 1) - math.lgamma(n - k + 1)


def _xlogy(x: float, y: float) -> float:
    # 0 * log(0) = 0
    if x == 0:
        return 0.0
    return x * math.log(y) if y > 0 else -math.inf


def _xlog1my(x: float, y: float) -> float:
    if x == 0:
        return 0.0
    return x * math.log1p(-y) if y < 1 else -math.inf


@dataclass(frozen=True)
class ForestShape:
    k: int
    edges: int
    components: int
    max_degree: int

    def __post_init__(self):
        if self.edges != self.k - self.components:
            raise ValueError("a forest has exactly k - components edges")
        if self.k >= 1 and self.components < 1:
            raise ValueError("nonempty forest needs at least one component")
        if self.k >= 2 and self.edges > 0 and self.max_degree < 1:
            raise ValueError("forest with edges needs max_degree >= 1")

    @classmethod
    def from_graph(cls, f: Graph) -> "ForestShape":
        adj = _masks(f)
        comps = len(_components(list(range(f.n)), (1 << f.n) - 1, adj)) if f.n else 0
        return cls(f.n, f.edge_count, comps, f.max_degree())

    @classmethod
    def path(cls, k: int) -> "ForestShape":
        return cls(k, max(k - 1, 0), 1 if k else 0, min(max(k - 1, 0), 2))

    @property
    def pairs(self) -> int:
        return self.k * (self.k - 1) // 2


def expected_labelled_copies(n: int, p: float, shape: ForestShape, log: bool = False) -> float:
    """Expected number of labelled induced copies of a forest in G(n, p).

    (n)_k p^e (1-p)^(C(k,2) - e).
    """
    if shape.k > n:
        raise ValueError("forest larger than the host")
    if not 0.0 <= p < 1.0:
        raise ValueError("p must lie in [0, 1)")
    e = shape.edges
    non = shape.pairs - e
    out = log_falling_factorial(n, shape.k) + _xlogy(e, p) + _xlog1my(non, p)
    if log:
        return out
    try:
        return float(math.perm(n, shape.k)) * p ** e * (1.0 - p) ** non
    except OverflowError:
        # the falling factorial alone leaves double range
        return math.exp(out) if out < 709 else math.inf


def conditional_exponents(shape: ForestShape, profile: IntersectionProfile) -> tuple[int, int]:
    """Exponents of p and of (1-p) in P(A_sigma | A_sigma0) for a profile."""
    s, c = profile.s, profile.c
    if s > shape.k:
        raise ValueError("intersection larger than the forest")
    ep = shape.edges - s + c
    eq = shape.pairs - s * (s - 1) // 2 - shape.edges + s - c
    if ep < 0 or eq < 0:
        raise ValueError(f"profile (s={s}, c={c}) is infeasible for this forest")
    return ep, eq


def conditional_copy_prob(p: float, shape: ForestShape, profile: IntersectionProfile, log: bool = False) -> float:
    ep, eq = conditional_exponents(shape, profile)
    if log:
        return _xlogy(ep, p) + _xlog1my(eq, p)
    return p ** ep * (1.0 - p) ** eq


def paley_zygmund_lower_bound(n: int, p: float, shape: ForestShape,
                              profile_counts: Mapping[IntersectionProfile, float], log: bool = False) -> float:
    """E[Y] / sum_sigma P(A_sigma | A_sigma0), a lower bound on P(Y > 0).

    ``profile_counts`` gives the number of compatible injections per profile,
    exact (from the oracle) or an upper bound (which only weakens the result).
    """
    terms = [math.log(cnt) + conditional_copy_prob(p, shape, prof, log=True)
             for prof, cnt in profile_counts.items() if cnt > 0]
    if not terms:
        raise ValueError("no compatible injections")
    top = max(terms)
    log_sum = top + math.log(math.fsum(math.exp(t - top) for t in terms))
    out = expected_labelled_copies(n, p, shape, log=True) - log_sum
    return out if log else math.exp(out)


def _check_order(k: int, s: int, c: int, n: int) -> None:
    if not 0 <= c <= s <= k <= n:
        raise ValueError(f"need 0 <= c <= s <= k <= n, got c={c} s={s} k={k} n={n}")


def compatible_count_bound(k: int, s: int, c: int, delta: int, n: int, log: bool = False):
    """C(k,c) k^c (6 delta^2)^s (n-k)_(k-s); exact integer unless ``log``."""
    _check_order(k, s, c, n)
    if log:
        if delta == 0 and s > 0:
            return -math.inf
        return (math.log(math.comb(k, c)) + _xlogy(c, k) + _xlogy(s, 6 * delta * delta)
                + log_falling_factorial(n - k, k - s))
    return math.comb(k, c) * k ** c * (6 * delta * delta) ** s * math.perm(n - k, k - s)


def subtree_count_bound(delta: float, s: int) -> float:
    """(e * delta)^(s-1)."""
    if s < 1:
        raise ValueError("s must be at least 1")
    return (math.e * delta) ** (s - 1)


def induced_copy_prob_lower_log(n: float, d: float, delta: float, eps: float) -> float:
    """log of exp(-1e4 delta^2 n log^2 d / d^2 - 2 d^(-eps/7))."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if delta > d ** (eps / 6):
        warnings.warn("max degree exceeds d^(eps/6); the bound is not guaranteed here", stacklevel=2)
    ld = math.log(d)
    return -1e4 * delta * delta * n * ld * ld / (d * d) - 2.0 * d ** (-eps / 7)


def tmatching_first_moment_log(n: int, p: float, t_order: int, r: int) -> float:
    """log of (n^(rL) / r!) p^(r(L-1)) (1-p)^(C(rL,2) - r(L-1)), with L = t_order."""
    rl = r * t_order
    if rl > n:
        raise ValueError("r * L exceeds n")
    if r == 0:
        return 0.0
    e = r * (t_order - 1)
    non = rl * (rl - 1) // 2 - e
    return rl * math.log(n) - math.lgamma(r + 1) + _xlogy(e, p) + _xlog1my(non, p)


@dataclass(frozen=True)
class TalagrandParams:
    b: float
    t: float
    lipschitz: float
    certifiable_offset: float | None = None

    def __post_init__(self):
        vals = (self.b, self.t, self.lipschitz, self.offset)
        if any(v < 0 for v in vals):
            raise ValueError("Talagrand parameters must be nonnegative")

    @property
    def offset(self) -> float:
        # f(s) = s + offset, offset defaults to the Lipschitz constant
        return self.lipschitz if self.certifiable_offset is None else self.certifiable_offset


def talagrand_tail(params: TalagrandParams) -> tuple[float, float]:
    """``(b - t L sqrt(f(b)), exp(-t^2/4))``.

    The product P(X <= threshold) * P(X >= b) is at most ``tail``.
    """
    f_b = params.b + params.offset
    threshold = params.b - params.t * params.lipschitz * math.sqrt(f_b)
    return threshold, math.exp(-params.t ** 2 / 4)


@dataclass(frozen=True)
class ConnectionStats:
    m: int
    p: float
    forest_order: int
    x_size: int

    @property
    def log_alpha(self) -> float:
        return 2 * math.log(self.m) + 2 * math.log(self.p) + _xlog1my(self.forest_order - 2 + self.x_size, self.p)

    @property
    def alpha(self) -> float:
        """Probability that one vertex joins a fixed tail segment and head
        segment by exactly one edge each and misses the rest of the forest
        and the set X."""
        return math.exp(self.log_alpha)


@dataclass(frozen=True)
class FeasibilityReport:
    alpha: float
    log_alpha: float
    per_triple_failure_log: float
    union_bound_log: float
    margin: float

    @property
    def closes(self) -> bool:
        return self.margin < 0


def connection_feasibility_report(n: float, d: float, eps: float, m: int, n_components: float,
                                  forest_order: float, x_size: float | None = None) -> FeasibilityReport:
    """Union bound over (S, T, X) against the per-triple failure bound.

    ``x_size`` defaults to N - 1, the largest X the DFS can accumulate.
    """
    p = d / n
    if x_size is None:
        x_size = n_components - 1
    stats = ConnectionStats(m, p, forest_order, x_size)
    la = stats.log_alpha
    side = eps * n_components / 8
    failure = -math.exp(2 * math.log(side) + la + math.log(n / 4)) if side > 0 else 0.0
    union = 2 * n_components * math.log(2) + 4 * n_components * math.log(d)
    return FeasibilityReport(math.exp(la), la, failure, union, union + failure)
