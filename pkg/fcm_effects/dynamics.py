"""FCM inference: the recurrent reasoning rule and fixed-point detection.

Each step sets A_i <- f(sum over j != i of A_j * w_ji). The diagonal of W is
structurally zero, so the edge-list form and the matrix form W^T A agree.
"""
from dataclasses import dataclass, field
from typing import List, Literal, Optional, Tuple
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator
from scipy.special import expit

from .config import MAX_ITER, TOLERANCE
from .errors import DimensionMismatch, InvalidSpec
from .graph import FcmGraph

logger = logging.getLogger(__name__)

FIXED_POINT = "fixed_point"
NOT_CONVERGED = "not_converged"

_KIND_ALIASES = {"tanh": "hyperbolic_tangent", "hyperbolic-tangent": "hyperbolic_tangent"}
_RANGES = {
    "sigmoid": (0.0, 1.0),
    "hyperbolic_tangent": (-1.0, 1.0),
    "bivalent": (0.0, 1.0),
    "trivalent": (-1.0, 1.0),
}


class ActivationSpec(BaseModel):
    """Squashing function f with steepness lambda (ignored by the threshold kinds)."""
    model_config = ConfigDict(frozen=True)

    kind: Literal["sigmoid", "hyperbolic_tangent", "bivalent", "trivalent"] = "sigmoid"
    steepness: float = Field(default=1.0, gt=0, description="lambda for sigmoid / tanh")

    @field_validator("kind", mode="before")
    @classmethod
    def normalize_kind(cls, v):
        if isinstance(v, str):
            v = v.strip().lower()
            return _KIND_ALIASES.get(v, v)
        return v

    @property
    def value_range(self) -> Tuple[float, float]:
        return _RANGES[self.kind]

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if self.kind == "sigmoid":
            return expit(self.steepness * x)
        if self.kind == "hyperbolic_tangent":
            return np.tanh(self.steepness * x)
        if self.kind == "bivalent":
            return (x > 0).astype(np.float64)
        return np.sign(x)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.apply(x)


class SimulationConfig(BaseModel):
    activation: ActivationSpec = Field(default_factory=ActivationSpec)
    max_iter: int = Field(default=MAX_ITER, ge=1, description="T, the iteration cap")
    tolerance: float = Field(default=TOLERANCE, gt=0, description="max-norm convergence threshold")


def make_activation(kind: str = "sigmoid", steepness: float = 1.0) -> ActivationSpec:
    try:
        return ActivationSpec(kind=kind, steepness=steepness)
    except ValidationError as e:
        raise InvalidSpec(str(e))


@dataclass
class SimulationOutcome:
    trajectory: List[np.ndarray]
    status: str
    iterations_run: int
    fixed_point_at: Optional[int] = None
    activation: ActivationSpec = field(default_factory=ActivationSpec)

    @property
    def converged(self) -> bool:
        return self.status == FIXED_POINT

    @property
    def final_state(self) -> np.ndarray:
        return self.trajectory[-1]


def check_state(graph: FcmGraph, state, activation: Optional[ActivationSpec] = None) -> np.ndarray:
    """Return `state` as a float array, checking its length (and range if `activation` is given)."""
    values = np.asarray(state, dtype=np.float64)
    if values.ndim != 1 or len(values) != graph.n:
        raise DimensionMismatch(f"State has shape {values.shape}, graph has {graph.n} concepts")
    if activation is not None:
        lo, hi = activation.value_range
        bad = np.flatnonzero(~((values >= lo) & (values <= hi)))
        if len(bad):
            i = int(bad[0])
            raise InvalidSpec(f"Activation of concept {i} is {values[i]!r}, outside [{lo}, {hi}] for {activation.kind}")
    return values


def weighted_inputs(graph: FcmGraph, state: np.ndarray, form: str = "adjacency") -> np.ndarray:
    """Sum over j != i of A_j * w_ji for every concept i."""
    if form == "matrix":
        return graph.to_dense_matrix().T @ state
    if form != "adjacency":
        raise ValueError(f"Unknown form {form!r}; expected 'adjacency' or 'matrix'")
    sources, targets, weights = graph.edge_arrays
    acc = np.zeros(graph.n, dtype=np.float64)
    np.add.at(acc, targets, state[sources] * weights)
    return acc


def step(graph: FcmGraph, state, activation: ActivationSpec = None, form: str = "adjacency") -> np.ndarray:
    if activation is None:
        activation = ActivationSpec()
    values = check_state(graph, state)
    return activation(weighted_inputs(graph, values, form))


def simulate(graph: FcmGraph, initial, activation: ActivationSpec = None,
             max_iter: int = MAX_ITER, tolerance: float = TOLERANCE,
             form: str = "adjacency") -> SimulationOutcome:
    """Apply `step` until the max-norm change drops below `tolerance` or `max_iter` steps ran.

    Cyclic and chaotic behaviour are both reported as not converged.
    """
    if activation is None:
        activation = ActivationSpec()
    try:
        SimulationConfig(activation=activation, max_iter=max_iter, tolerance=tolerance)
    except ValidationError as e:
        raise InvalidSpec(str(e))

    state = check_state(graph, initial, activation)
    trajectory = [state]
    for t in range(1, max_iter + 1):
        nxt = activation(weighted_inputs(graph, state, form))
        trajectory.append(nxt)
        if np.max(np.abs(nxt - state), initial=0.0) < tolerance:
            logger.debug(f"Fixed point after {t} iterations")
            return SimulationOutcome(trajectory, FIXED_POINT, t, t, activation)
        state = nxt
    logger.debug(f"No fixed point within {max_iter} iterations")
    return SimulationOutcome(trajectory, NOT_CONVERGED, max_iter, None, activation)
