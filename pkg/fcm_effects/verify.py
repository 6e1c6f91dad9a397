"""Equivalence check of every solver against unpruned exhaustive enumeration."""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence
import logging

import numpy as np

from .generator import GenSpec, derive_seed, generate, make_spec
from .graph import FcmGraph
from .oracle import total_effect_exhaustive
from .solver import TotalEffectResult, is_critical_prefix, total_effect_binary, total_effect_linear

logger = logging.getLogger(__name__)

CORPUS_DENSITIES = (0.2, 0.4, 0.6, 0.8, 1.0)

Solver = Callable[[FcmGraph, int, int], TotalEffectResult]


def default_solvers() -> Dict[str, Solver]:
    return {
        "binary": total_effect_binary,
        "linear": total_effect_linear,
        "linear_incremental": lambda g, s, t: total_effect_linear(g, s, t, incremental=True),
        "exhaustive_pruned": lambda g, s, t: total_effect_exhaustive(g, s, t, prune=True),
    }


def reference_solver(graph: FcmGraph, source: int, target: int) -> TotalEffectResult:
    return total_effect_exhaustive(graph, source, target, prune=False)


@dataclass(frozen=True)
class Mismatch:
    spec: GenSpec
    solver: str
    source: int
    target: int
    expected: TotalEffectResult
    actual: Optional[TotalEffectResult]
    reason: str

    def describe(self) -> str:
        got = "n/a" if self.actual is None else f"value={self.actual.value!r} k={self.actual.critical_index}"
        return (f"seed={self.spec.seed} n={self.spec.n} density={self.spec.density} "
                f"{self.solver} {self.source}->{self.target}: {self.reason} "
                f"(expected value={self.expected.value!r} k={self.expected.critical_index}, got {got})")


@dataclass
class VerifyReport:
    graphs: int = 0
    pairs: int = 0
    mismatches: List[Mismatch] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def corpus_specs(count: int, seed: int = 0, min_n: int = 3, max_n: int = 9,
                 densities: Sequence[float] = CORPUS_DENSITIES) -> List[GenSpec]:
    """`count` reproducible random-map specs with n in [min_n, max_n]."""
    rng = np.random.Generator(np.random.PCG64(seed))
    sizes = rng.integers(min_n, max_n + 1, size=count).tolist()
    specs = []
    for r, n in enumerate(sizes):
        density = densities[r % len(densities)]
        specs.append(make_spec(n, density, derive_seed(seed, n, density, r)))
    return specs


def _compare(expected: TotalEffectResult, actual: TotalEffectResult) -> Optional[str]:
    if actual.path_found != expected.path_found:
        return "path_found differs"
    if actual.value != expected.value:
        return "value differs"
    if actual.critical_index != expected.critical_index:
        return "critical index differs"
    return None


def verify_graph(graph: FcmGraph, spec: GenSpec, solvers: Dict[str, Solver], report: VerifyReport):
    for source in range(graph.n):
        for target in range(graph.n):
            if source == target:
                continue
            report.pairs += 1
            expected = reference_solver(graph, source, target)
            if not is_critical_prefix(graph, expected):
                report.mismatches.append(Mismatch(spec, "exhaustive", source, target, expected, expected,
                                                  "not the minimal reaching prefix"))
            for name, solve in solvers.items():
                actual = solve(graph, source, target)
                reason = _compare(expected, actual)
                if reason is not None:
                    report.mismatches.append(Mismatch(spec, name, source, target, expected, actual, reason))


def verify_equivalence(count: int = 200, seed: int = 0, max_n: int = 9,
                       solvers: Optional[Dict[str, Solver]] = None) -> VerifyReport:
    """Run every solver on all ordered pairs of `count` random maps and collect disagreements."""
    solvers = default_solvers() if solvers is None else solvers
    report = VerifyReport()
    for spec in corpus_specs(count, seed, max_n=max_n):
        graph = generate(spec)
        verify_graph(graph, spec, solvers, report)
        report.graphs += 1
    if report.ok:
        logger.info(f"Verified {report.graphs} graphs, {report.pairs} pairs: no mismatches")
    else:
        logger.warning(f"{len(report.mismatches)} mismatches over {report.graphs} graphs")
    return report
