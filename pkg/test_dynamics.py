import math

import numpy as np
import pytest

from conftest import EXAMPLE_MATRIX
from fcm_effects.dynamics import (
    FIXED_POINT,
    NOT_CONVERGED,
    ActivationSpec,
    make_activation,
    simulate,
    step,
)
from fcm_effects.errors import DimensionMismatch, InvalidSpec
from fcm_effects.generator import generate, make_spec
from fcm_effects.graph import FcmGraph


def loop_step(matrix, state, f):
    n = len(state)
    return [f(sum(state[j] * matrix[j][i] for j in range(n) if j != i)) for i in range(n)]


def test_zero_matrix_goes_to_one_half():
    g = FcmGraph.from_edges(3, [])
    np.testing.assert_array_equal(step(g, [1.0, 0.0, 0.3]), [0.5, 0.5, 0.5])
    outcome = simulate(g, [1.0, 0.0, 0.3])
    assert outcome.status == FIXED_POINT
    assert outcome.fixed_point_at == 2
    assert simulate(g, [0.5, 0.5, 0.5]).fixed_point_at == 1


def test_tanh_step_on_example_map(example_map):
    out = step(example_map, [1.0, 0.0, 0.0, 0.0], ActivationSpec(kind="tanh"))
    np.testing.assert_allclose(out, [0.0, 0.0, math.tanh(0.6), 0.0], rtol=0, atol=1e-15)


def test_bivalent_and_trivalent_outputs(example_map):
    rng = np.random.default_rng(7)
    for _ in range(20):
        state = rng.uniform(-1, 1, size=4)
        assert set(step(example_map, state, make_activation("bivalent"))) <= {0.0, 1.0}
        assert set(step(example_map, state, make_activation("trivalent"))) <= {-1.0, 0.0, 1.0}


@pytest.mark.parametrize("initial", [[1.0, 1.0, 1.0, 1.0], [1.0, 0.0, 0.0, 0.0]])
def test_example_map_sigmoid_matches_plain_loop(example_map, initial):
    outcome = simulate(example_map, initial, max_iter=100, tolerance=1e-5)
    assert outcome.converged
    assert np.max(np.abs(step(example_map, outcome.final_state) - outcome.final_state)) < 1e-5

    sigmoid = lambda x: 1.0 / (1.0 + math.exp(-x))
    state = list(initial)
    for t in range(1, outcome.fixed_point_at + 1):
        state = loop_step(EXAMPLE_MATRIX, state, sigmoid)
        np.testing.assert_allclose(outcome.trajectory[t], state, rtol=0, atol=1e-12)
    assert len(outcome.trajectory) == outcome.fixed_point_at + 1


def test_single_iteration_cap_not_converged(example_map):
    outcome = simulate(example_map, [1.0, 0.0, 0.0, 0.0], max_iter=1)
    assert outcome.status == NOT_CONVERGED
    assert outcome.iterations_run == 1
    assert len(outcome.trajectory) == 2


def test_matrix_form_agrees_with_edge_list_form():
    rng = np.random.default_rng(11)
    for trial in range(100):
        n = int(rng.integers(3, 12))
        g = generate(make_spec(n, float(rng.uniform(0.1, 1.0)), trial))
        state = rng.uniform(0, 1, size=n)
        for kind in ("sigmoid", "tanh"):
            act = make_activation(kind, 2.0)
            np.testing.assert_allclose(step(g, state, act, form="matrix"), step(g, state, act),
                                       rtol=0, atol=1e-12)


def test_state_checks(example_map):
    with pytest.raises(DimensionMismatch):
        step(example_map, [0.5, 0.5])
    with pytest.raises(InvalidSpec):
        simulate(example_map, [1.5, 0.0, 0.0, 0.0])
    with pytest.raises(InvalidSpec):
        simulate(example_map, [-0.5, 0.0, 0.0, 0.0])
    simulate(example_map, [-0.5, 0.0, 0.0, 0.0], make_activation("tanh"))


def test_invalid_settings(example_map):
    with pytest.raises(InvalidSpec):
        make_activation("relu")
    with pytest.raises(InvalidSpec):
        make_activation("sigmoid", 0.0)
    with pytest.raises(InvalidSpec):
        simulate(example_map, [0.0] * 4, max_iter=0)
    with pytest.raises(InvalidSpec):
        simulate(example_map, [0.0] * 4, tolerance=0.0)
