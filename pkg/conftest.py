import pytest

from fcm_effects.graph import FcmGraph

# Four-concept example map. Concepts C1..C4 are indices 0..3.
EXAMPLE_MATRIX = [
    [0.0, 0.0, 0.6, 0.0],
    [0.68, 0.0, 0.0, -0.7],
    [0.15, 0.0, 0.0, 0.0],
    [0.0, -0.25, 0.36, 0.0],
]


@pytest.fixture
def example_map():
    return FcmGraph.from_dense_matrix(EXAMPLE_MATRIX)


@pytest.fixture
def example_csv(tmp_path):
    path = tmp_path / "example_map.csv"
    path.write_text("\n".join(",".join(repr(v) for v in row) for row in EXAMPLE_MATRIX) + "\n")
    return str(path)


@pytest.fixture(autouse=True)
def _log_to_tmp(tmp_path, monkeypatch):
    monkeypatch.setattr("fcm_effects.config.LOG_FILE", str(tmp_path / "logs" / "fcm_effects.log"))
