"""Seeded random FCMs with an exact edge count.

Bit generator: numpy PCG64 (``numpy.random.Generator(PCG64(seed))``). Pair
selection is a partial Fisher-Yates shuffle of the n(n-1) off-diagonal slots,
weights are uniform in [-1, -delta] U [delta, 1].
"""
import math
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .config import MIN_MAGNITUDE
from .errors import InvalidSpec
from .formats import write_edge_list
from .graph import FcmGraph

logger = logging.getLogger(__name__)

BIT_GENERATOR = "numpy.random.PCG64"
SEED_BITS = 63


class GenSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=2, description="Concept count")
    density: float = Field(..., gt=0, le=1, description="Fraction of the n(n-1) possible edges")
    seed: int = Field(..., ge=0, lt=2 ** 64)
    min_magnitude: float = Field(default=MIN_MAGNITUDE, gt=0, le=1, description="delta, smallest |w|")

    @property
    def edge_count(self) -> int:
        # round half up, independent of the host language's rounding mode
        return int(math.floor(self.density * self.n * (self.n - 1) + 0.5))

    @model_validator(mode="after")
    def check_edge_count(self):
        if not 1 <= self.edge_count <= self.n * (self.n - 1):
            raise ValueError(f"density {self.density} gives {self.edge_count} edges for n={self.n}")
        return self


def make_spec(n: int, density: float, seed: int, min_magnitude: float = None) -> GenSpec:
    """Build a GenSpec, reporting validation failures as InvalidSpec."""
    fields = {"n": n, "density": density, "seed": seed}
    if min_magnitude is not None:
        fields["min_magnitude"] = min_magnitude
    try:
        return GenSpec(**fields)
    except ValidationError as e:
        raise InvalidSpec(str(e))


def derive_seed(base_seed: int, n: int, density: float, trial: int) -> int:
    """Per-cell seed from numpy's SeedSequence hash of (base_seed, n, density in ppm, trial)."""
    entropy = [int(base_seed), int(n), int(round(density * 1_000_000)), int(trial)]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)[0]
    return int(state) >> (64 - SEED_BITS)


def _pick_slots(rng: np.random.Generator, total: int, m: int) -> np.ndarray:
    """First m positions of a Fisher-Yates shuffle of range(total)."""
    draws = rng.integers(np.arange(m, dtype=np.int64), total).tolist()
    swapped = {}
    chosen = np.empty(m, dtype=np.int64)
    for k, j in enumerate(draws):
        at_k = swapped.get(k, k)
        chosen[k] = swapped.get(j, j)
        swapped[j] = at_k
    return chosen


def generate(spec: GenSpec) -> FcmGraph:
    n, m = spec.n, spec.edge_count
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    slots = _pick_slots(rng, n * (n - 1), m)
    rows = slots // (n - 1)
    cols = slots % (n - 1)
    cols = cols + (cols >= rows)  # skip the diagonal

    magnitudes = rng.uniform(spec.min_magnitude, 1.0, size=m)
    signs = rng.integers(0, 2, size=m) * 2 - 1
    weights = signs * magnitudes

    graph = FcmGraph.from_edges(n, zip(rows.tolist(), cols.tolist(), weights.tolist()))
    logger.debug(f"Generated {graph!r} from seed {spec.seed} (density {spec.density})")
    return graph


def write_generated(graph: FcmGraph, spec: GenSpec, path: str):
    """Edge-list CSV plus a JSON sidecar recording the GenSpec fields and the bit generator."""
    sidecar = spec.model_dump()
    sidecar["generator"] = BIT_GENERATOR
    sidecar["edge_count"] = graph.e
    write_edge_list(graph, path, sidecar)
    logger.info(f"Wrote generated {graph!r} to {path}")
