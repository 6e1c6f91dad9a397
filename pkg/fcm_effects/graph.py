"""FCM data model: concepts, signed causal weights and the sorted edge list.

A graph is built once (from a dense weight matrix or an edge list), validated,
and never mutated afterwards, so it can be shared freely between threads.
Weights are only ever compared and copied by the algorithms in this package,
never combined arithmetically, which keeps solver/oracle comparisons exact.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Sequence, Tuple
import logging

import numpy as np

from .errors import (
    ConceptOutOfRange,
    DuplicateEdge,
    InvalidEdge,
    NonSquareMatrix,
    NonzeroDiagonal,
    TooFewConcepts,
    WeightOutOfRange,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Edge:
    source: int
    target: int
    weight: float


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def check_concept(index, n: int) -> int:
    """Return `index` as an int, raising ConceptOutOfRange unless 0 <= index < n."""
    if isinstance(index, (bool, np.bool_)) or not isinstance(index, (int, np.integer)):
        raise ConceptOutOfRange(index, n)
    if not 0 <= index < n:
        raise ConceptOutOfRange(index, n)
    return int(index)


class FcmGraph:
    """n concepts joined by signed weighted directed edges.

    Edges are kept ordered by (source, target). `out_adjacency[i]` lists the
    (target, weight) pairs leaving concept i in ascending target order.
    """

    def __init__(self, n: int, edges: Sequence[Edge], labels: Optional[Sequence[str]] = None):
        # Callers go through from_edges / from_dense_matrix, which validate.
        self.n = int(n)
        self.edges: Tuple[Edge, ...] = tuple(sorted(edges, key=lambda ed: (ed.source, ed.target)))
        self.labels: Optional[Tuple[str, ...]] = tuple(labels) if labels is not None else None

        adjacency: List[List[Tuple[int, float]]] = [[] for _ in range(self.n)]
        for ed in self.edges:
            adjacency[ed.source].append((ed.target, ed.weight))
        self.out_adjacency: Tuple[Tuple[Tuple[int, float], ...], ...] = tuple(tuple(a) for a in adjacency)

    @property
    def e(self) -> int:
        return len(self.edges)

    # -- construction -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable, labels: Optional[Sequence[str]] = None) -> "FcmGraph":
        """Build a graph from (source, target, weight) triples or Edge objects."""
        n = int(n)
        if n < 0:
            raise InvalidEdge(f"Concept count must be non-negative, got {n}")
        if labels is not None and len(labels) != n:
            raise InvalidEdge(f"Expected {n} labels, got {len(labels)}")
        seen = set()
        checked = []
        for item in edges:
            if isinstance(item, Edge):
                source, target, weight = item.source, item.target, item.weight
            else:
                source, target, weight = item
            source = check_concept(source, n)
            target = check_concept(target, n)
            weight = float(weight)
            if not -1.0 <= weight <= 1.0:
                raise WeightOutOfRange(source, target, weight)
            if source == target:
                raise NonzeroDiagonal(source, weight)
            if weight == 0.0:
                raise InvalidEdge(f"Edge {source}->{target} has zero weight; zero means no edge")
            if (source, target) in seen:
                raise DuplicateEdge(source, target)
            seen.add((source, target))
            checked.append(Edge(source, target, weight))
        return cls(n, checked, labels)

    @classmethod
    def from_dense_matrix(cls, matrix, labels: Optional[Sequence[str]] = None) -> "FcmGraph":
        """Build a graph with one edge per non-zero off-diagonal entry of `matrix`."""
        m = np.asarray(matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NonSquareMatrix(m.shape)
        n = m.shape[0]
        if labels is not None and len(labels) != n:
            raise InvalidEdge(f"Expected {n} labels, got {len(labels)}")

        # NaN fails both comparisons and is reported as out of range
        bad = np.argwhere(~((m >= -1.0) & (m <= 1.0)))
        if len(bad):
            i, j = (int(v) for v in bad[0])
            raise WeightOutOfRange(i, j, float(m[i, j]))
        diag = np.flatnonzero(np.diagonal(m))
        if len(diag):
            i = int(diag[0])
            raise NonzeroDiagonal(i, float(m[i, i]))

        rows, cols = np.nonzero(m)
        edges = [Edge(int(i), int(j), float(m[i, j])) for i, j in zip(rows, cols)]
        return cls(n, edges, labels)

    def to_dense_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.float64)
        for ed in self.edges:
            m[ed.source, ed.target] = ed.weight
        return m

    def with_labels(self, labels: Optional[Sequence[str]]) -> "FcmGraph":
        return FcmGraph.from_edges(self.n, self.edges, labels)

    # -- views --------------------------------------------------------------

    @cached_property
    def edge_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(sources, targets, weights) as read-only numpy arrays in (source, target) order."""
        sources = np.fromiter((ed.source for ed in self.edges), dtype=np.int64, count=self.e)
        targets = np.fromiter((ed.target for ed in self.edges), dtype=np.int64, count=self.e)
        weights = np.fromiter((ed.weight for ed in self.edges), dtype=np.float64, count=self.e)
        return _readonly(sources), _readonly(targets), _readonly(weights)

    @cached_property
    def sorted_edges(self) -> "SortedEdgeList":
        return SortedEdgeList.from_graph(self)

    def sign_counts(self) -> dict:
        """Count positive and negative causal relations, plus absent (zero) ones."""
        positive = sum(1 for ed in self.edges if ed.weight > 0)
        negative = self.e - positive
        return {"positive": positive, "negative": negative, "zero": self.n * (self.n - 1) - self.e}

    def label(self, index: int) -> str:
        if self.labels is not None:
            return self.labels[index]
        return f"C{index}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, FcmGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"FcmGraph(n={self.n}, e={self.e})"


class SortedEdgeList:
    """Edges in non-increasing weight order, ties broken by (source, target) ascending.

    Position k (0-based) holds the edge of rank k + 1; a prefix of length k is
    the k highest-ranked edges.
    """

    def __init__(self, n: int, sources: np.ndarray, targets: np.ndarray, weights: np.ndarray):
        self.n = n
        self.sources = _readonly(np.asarray(sources, dtype=np.int64))
        self.targets = _readonly(np.asarray(targets, dtype=np.int64))
        self.weights = _readonly(np.asarray(weights, dtype=np.float64))

    @classmethod
    def from_graph(cls, graph: FcmGraph) -> "SortedEdgeList":
        sources, targets, weights = graph.edge_arrays
        # lexsort: last key is primary
        order = np.lexsort((targets, sources, -weights))
        logger.debug(f"Sorted {graph.e} edges of {graph!r}")
        return cls(graph.n, sources[order], targets[order], weights[order])

    @cached_property
    def ranks(self) -> dict:
        """(source, target) -> 1-based rank."""
        return {(int(s), int(t)): k + 1 for k, (s, t) in enumerate(zip(self.sources, self.targets))}

    @property
    def entries(self) -> List[Tuple[int, int, float]]:
        return [(int(s), int(t), float(w)) for s, t, w in zip(self.sources, self.targets, self.weights)]

    def weight_at(self, rank: int) -> float:
        """Weight of the edge with 1-based `rank`."""
        return float(self.weights[rank - 1])

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, k):
        return (int(self.sources[k]), int(self.targets[k]), float(self.weights[k]))

    def __iter__(self):
        return iter(self.entries)


def from_dense_matrix(matrix, labels: Optional[Sequence[str]] = None) -> FcmGraph:
    return FcmGraph.from_dense_matrix(matrix, labels)


def to_dense_matrix(graph: FcmGraph) -> np.ndarray:
    return graph.to_dense_matrix()


def sorted_edges(graph: FcmGraph) -> SortedEdgeList:
    return graph.sorted_edges


def density(graph: FcmGraph) -> float:
    """Fraction of the n(n-1) possible directed edges that are present."""
    if graph.n < 2:
        raise TooFewConcepts(graph.n)
    return graph.e / (graph.n * (graph.n - 1))
