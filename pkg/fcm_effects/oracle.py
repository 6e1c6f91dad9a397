"""Exhaustive path enumeration: the reference for total effects and the slow baseline.

Every simple directed path from source to target is walked by depth-first
search with backtracking. The indirect effect of a path is its smallest
weight, the total effect is the largest indirect effect. Neighbours are
visited in ascending concept index, so enumeration order is fixed.
"""
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple
import logging
import time

from .config import PATH_BUDGET
from .errors import BudgetExceeded
from .graph import FcmGraph
from .solver import TotalEffectResult, _check_pair

logger = logging.getLogger(__name__)

_DEADLINE_EVERY = 4096


@dataclass(frozen=True)
class PathEffect:
    path: Tuple[int, ...]
    indirect_effect: float


class _Budget:
    def __init__(self, path_budget: Optional[int], deadline: Optional[float]):
        self.limit = PATH_BUDGET if path_budget is None else path_budget
        self.deadline = deadline
        self.used = 0

    def spend(self):
        self.used += 1
        if self.used > self.limit:
            raise BudgetExceeded(f"path budget of {self.limit} exhausted")
        if self.deadline is not None and self.used % _DEADLINE_EVERY == 0 and time.monotonic() > self.deadline:
            raise BudgetExceeded("time budget exhausted")


def enumerate_path_effects(graph: FcmGraph, source: int, target: int,
                           path_budget: Optional[int] = None,
                           deadline: Optional[float] = None) -> Iterator[PathEffect]:
    """Yield every simple path from `source` to `target` with its smallest weight.

    `path_budget` caps the number of (partial) paths extended before
    BudgetExceeded is raised.
    """
    source, target = _check_pair(graph, source, target)
    return _enumerate(graph, source, target, _Budget(path_budget, deadline))


def _enumerate(graph: FcmGraph, source: int, target: int, budget: _Budget) -> Iterator[PathEffect]:
    adjacency = graph.out_adjacency
    path: List[int] = [source]
    mins: List[float] = [float("inf")]
    on_path = {source}
    stack = [iter(adjacency[source])]
    while stack:
        for nxt, weight in stack[-1]:
            if nxt in on_path:
                continue
            budget.spend()
            effect = weight if weight < mins[-1] else mins[-1]
            if nxt == target:
                yield PathEffect(tuple(path) + (target,), effect)
                continue
            path.append(nxt)
            on_path.add(nxt)
            mins.append(effect)
            stack.append(iter(adjacency[nxt]))
            break
        else:
            stack.pop()
            on_path.discard(path.pop())
            mins.pop()


def count_simple_paths(graph: FcmGraph, source: int, target: int,
                       path_budget: Optional[int] = None) -> int:
    return sum(1 for _ in enumerate_path_effects(graph, source, target, path_budget))


def total_effect_exhaustive(graph: FcmGraph, source: int, target: int, prune: bool = False,
                            path_budget: Optional[int] = None,
                            deadline: Optional[float] = None) -> TotalEffectResult:
    """Maximum over all simple paths of the path's smallest weight.

    critical_index is the smallest, over all paths, of the largest sorted-list
    rank on the path; that edge carries the path's smallest weight. With
    `prune`, a branch is cut once its largest rank reaches the best rank found
    so far: its smallest weight can no longer beat the best total.
    """
    source, target = _check_pair(graph, source, target)
    ranks = graph.sorted_edges.ranks
    adjacency = [[(t, w, ranks[(s, t)]) for t, w in graph.out_adjacency[s]] for s in range(graph.n)]
    budget = _Budget(path_budget, deadline)
    visited = [False] * graph.n
    visited[source] = True
    best_value = None
    best_rank = None

    def dfs(node: int, running_min: float, running_rank: int):
        nonlocal best_value, best_rank
        for nxt, weight, rank in adjacency[node]:
            if visited[nxt]:
                continue
            m = weight if weight < running_min else running_min
            r = rank if rank > running_rank else running_rank
            if prune and best_rank is not None and r >= best_rank:
                continue
            budget.spend()
            if nxt == target:
                if best_value is None or m > best_value:
                    best_value = m
                if best_rank is None or r < best_rank:
                    best_rank = r
                continue
            visited[nxt] = True
            dfs(nxt, m, r)
            visited[nxt] = False

    dfs(source, float("inf"), 0)
    logger.debug(f"Exhaustive {source}->{target}: {budget.used} path extensions, prune={prune}")
    if best_value is None:
        return TotalEffectResult(source, target, 0.0, None, False)
    return TotalEffectResult(source, target, best_value, best_rank, True)
