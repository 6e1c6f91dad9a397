"""Total causal effects via binary search over the sorted edge prefix.

The total effect T(i, j) is the largest, over all directed paths from i to j,
of the smallest weight on the path. Adding edges to an empty copy of the map in
descending weight order, the first edge whose arrival makes j reachable from i
is that bottleneck weight. Reachability of prefix k is monotone in k, so the
minimal prefix can be found by binary search (O(log e) BFS probes) or by a
linear scan (the slower variant used for comparison).
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional
import logging
import time

import numpy as np
from joblib import Parallel, delayed
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .errors import BudgetExceeded, SameConcept
from .graph import FcmGraph, SortedEdgeList, check_concept

logger = logging.getLogger(__name__)

METHODS = ("binary", "linear", "exhaustive")


@dataclass(frozen=True)
class TotalEffectResult:
    source: int
    target: int
    value: float
    critical_index: Optional[int]  # 1-based prefix length
    path_found: bool
    probes: int = 0

    def as_row(self) -> dict:
        return {
            "source": self.source,
            "value": self.value,
            "critical_index": self.critical_index,
            "path_found": self.path_found,
        }


def _no_path(source: int, target: int, probes: int = 0) -> TotalEffectResult:
    return TotalEffectResult(source, target, 0.0, None, False, probes)


class PrefixSubgraphView:
    """The map restricted to the k highest-ranked edges of a SortedEdgeList."""

    def __init__(self, base: SortedEdgeList, k: int):
        if not 0 <= k <= len(base):
            raise ValueError(f"Prefix length {k} outside [0, {len(base)}]")
        self.base = base
        self.k = k
        n = base.n
        sources = base.sources[:k]
        order = np.argsort(sources, kind="stable")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(sources, minlength=n), out=indptr[1:])
        self.csr = csr_matrix((np.ones(k), base.targets[:k][order], indptr), shape=(n, n))

    @property
    def out_adjacency(self) -> List[List[int]]:
        indptr, indices = self.csr.indptr, self.csr.indices
        return [sorted(int(t) for t in indices[indptr[i]:indptr[i + 1]]) for i in range(self.base.n)]

    def __repr__(self) -> str:
        return f"PrefixSubgraphView(k={self.k}, e={len(self.base)})"


def reachable(view: PrefixSubgraphView, source: int, target: int) -> bool:
    """True iff `target` can be reached from `source` using only the view's edges."""
    if source == target:
        raise SameConcept(source)
    if view.k == 0:
        return False
    order = breadth_first_order(view.csr, source, directed=True, return_predecessors=False)
    return bool(np.any(order == target))


class _Views:
    """Builds prefix views, optionally memoised by k for reuse across probes and sources."""

    def __init__(self, base: SortedEdgeList, reuse: bool = False):
        self.base = base
        self.reuse = reuse
        self._cache: Dict[int, PrefixSubgraphView] = {}

    def __call__(self, k: int) -> PrefixSubgraphView:
        if not self.reuse:
            return PrefixSubgraphView(self.base, k)
        view = self._cache.get(k)
        if view is None:
            view = self._cache[k] = PrefixSubgraphView(self.base, k)
        return view


def _search_binary(views: _Views, source: int, target: int) -> TotalEffectResult:
    base = views.base
    upper, lower = 1, len(base)
    critical = None
    probes = 0
    while upper <= lower:
        mid = (upper + lower) // 2
        probes += 1
        if reachable(views(mid), source, target):
            critical = mid
            lower = mid - 1
        else:
            upper = mid + 1
    if critical is None:
        return _no_path(source, target, probes)
    return TotalEffectResult(source, target, base.weight_at(critical), critical, True, probes)


def _search_linear(views: _Views, source: int, target: int) -> TotalEffectResult:
    base = views.base
    for k in range(1, len(base) + 1):
        if reachable(views(k), source, target):
            return TotalEffectResult(source, target, base.weight_at(k), k, True, k)
    return _no_path(source, target, len(base))


def _search_linear_incremental(base: SortedEdgeList, source: int, target: int) -> TotalEffectResult:
    # Reached set grows as edges are appended; after step k it is exactly
    # the set reachable from source in prefix(k).
    adjacency: Dict[int, List[int]] = {}
    reached = {source}
    for k, (u, v) in enumerate(zip(base.sources.tolist(), base.targets.tolist()), start=1):
        adjacency.setdefault(u, []).append(v)
        if u in reached and v not in reached:
            reached.add(v)
            frontier = [v]
            while frontier:
                node = frontier.pop()
                for nxt in adjacency.get(node, ()):
                    if nxt not in reached:
                        reached.add(nxt)
                        frontier.append(nxt)
        if target in reached:
            return TotalEffectResult(source, target, base.weight_at(k), k, True, k)
    return _no_path(source, target, len(base))


def _check_pair(graph: FcmGraph, source: int, target: int):
    source = check_concept(source, graph.n)
    target = check_concept(target, graph.n)
    if source == target:
        raise SameConcept(source)
    return source, target


def total_effect_binary(graph: FcmGraph, source: int, target: int,
                        reuse_views: bool = False) -> TotalEffectResult:
    source, target = _check_pair(graph, source, target)
    return _search_binary(_Views(graph.sorted_edges, reuse_views), source, target)


def total_effect_linear(graph: FcmGraph, source: int, target: int,
                        incremental: bool = False) -> TotalEffectResult:
    source, target = _check_pair(graph, source, target)
    if incremental:
        return _search_linear_incremental(graph.sorted_edges, source, target)
    return _search_linear(_Views(graph.sorted_edges), source, target)


def _pair_solver(graph: FcmGraph, method: str, deadline: Optional[float] = None,
                 reuse_views: bool = False, incremental: bool = False,
                 prune: bool = False, path_budget: Optional[int] = None) -> Callable[[int, int], TotalEffectResult]:
    """Return f(source, target) for `method`, sharing one sorted edge list across calls."""
    if method == "binary":
        views = _Views(graph.sorted_edges, reuse_views)
        return lambda s, t: _search_binary(views, s, t)
    if method == "linear":
        if incremental:
            return lambda s, t: _search_linear_incremental(graph.sorted_edges, s, t)
        views = _Views(graph.sorted_edges)
        return lambda s, t: _search_linear(views, s, t)
    if method == "exhaustive":
        from .oracle import total_effect_exhaustive
        return lambda s, t: total_effect_exhaustive(graph, s, t, prune=prune,
                                                    path_budget=path_budget, deadline=deadline)
    raise ValueError(f"Unknown method {method!r}; expected one of {METHODS}")


def total_effect(graph: FcmGraph, source: int, target: int, method: str = "binary",
                 **options) -> TotalEffectResult:
    """T(source, target) by `method` ("binary", "linear" or "exhaustive")."""
    source, target = _check_pair(graph, source, target)
    return _pair_solver(graph, method, **options)(source, target)


def _check_deadline(deadline: Optional[float]):
    if deadline is not None and time.monotonic() > deadline:
        raise BudgetExceeded("time budget exhausted")


def total_effects_to_target(graph: FcmGraph, target: int, method: str = "binary",
                            n_jobs: int = 1, deadline: Optional[float] = None,
                            **options) -> List[TotalEffectResult]:
    """Total effect of every other concept on `target`, ordered by source index.

    `deadline` is a time.monotonic() instant; passing it aborts the run with
    BudgetExceeded. Remaining keyword options go to the per-pair method.
    """
    target = check_concept(target, graph.n)
    solve = _pair_solver(graph, method, deadline=deadline, **options)

    def one(source: int) -> TotalEffectResult:
        _check_deadline(deadline)
        return solve(source, target)

    sources = [s for s in range(graph.n) if s != target]
    if n_jobs == 1:
        results = [one(s) for s in sources]
    else:
        results = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(one)(s) for s in sources)
    logger.debug(f"Solved {len(results)} sources -> {target} with {method}")
    return list(results)


def total_effects_all_pairs(graph: FcmGraph, method: str = "binary", n_jobs: int = 1,
                            deadline: Optional[float] = None, **options) -> np.ndarray:
    """n x n matrix of total effects; entry (i, j) is T(i, j), the diagonal is 0."""
    solve = _pair_solver(graph, method, deadline=deadline, **options)

    def row(source: int) -> np.ndarray:
        values = np.zeros(graph.n, dtype=np.float64)
        for target in range(graph.n):
            if target != source:
                _check_deadline(deadline)
                values[target] = solve(source, target).value
        return values

    if n_jobs == 1:
        rows = [row(s) for s in range(graph.n)]
    else:
        rows = Parallel(n_jobs=n_jobs, prefer="threads")(delayed(row)(s) for s in range(graph.n))
    if not rows:
        return np.zeros((0, 0), dtype=np.float64)
    return np.vstack(rows)


def strongest_influences(graph: FcmGraph, target: int, top: Optional[int] = None,
                         method: str = "binary") -> List[TotalEffectResult]:
    """Sources ranked by their total effect on `target` (strongest first), no-path pairs dropped."""
    results = [r for r in total_effects_to_target(graph, target, method) if r.path_found]
    results.sort(key=lambda r: (-r.value, r.source))
    return results[:top] if top is not None else results


def is_critical_prefix(graph: FcmGraph, result: TotalEffectResult) -> bool:
    """Check that the target is reachable at prefix k* and not at k* - 1."""
    if not result.path_found:
        return not reachable(PrefixSubgraphView(graph.sorted_edges, graph.e), result.source, result.target)
    k = result.critical_index
    base = graph.sorted_edges
    return (reachable(PrefixSubgraphView(base, k), result.source, result.target)
            and not reachable(PrefixSubgraphView(base, k - 1), result.source, result.target)
            and base.weight_at(k) == result.value)
