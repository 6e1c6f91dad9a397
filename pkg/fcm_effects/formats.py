"""CSV readers and writers for graphs, state vectors and trajectories.

Two graph formats are supported:

* ``matrix``   - n header-less rows of n comma-separated reals (the weight matrix W).
* ``edgelist`` - header ``source,target,weight`` with 0-based concept indices.

Cells are parsed with ``float()`` from their text, so any value printed with
17 significant digits (or Python's shortest round-trip repr, which is what the
writers emit) reads back bit-for-bit.
"""
import json
import os
import re
import logging
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from .errors import FcmError, GraphFormatError, NonSquareMatrix, NonzeroDiagonal, WeightOutOfRange
from .graph import FcmGraph

logger = logging.getLogger(__name__)

EDGELIST_HEADER = ["source", "target", "weight"]
FORMATS = ("matrix", "edgelist")

_PARSER_LINE = re.compile(r"line (\d+)")


def _require_file(path: str):
    if not os.path.exists(path):
        raise FileNotFoundError(f"File not found: {path}")


def _read_cells(path: str, header) -> pd.DataFrame:
    """Read a CSV as raw strings, turning pandas parse failures into GraphFormatError."""
    _require_file(path)
    try:
        return pd.read_csv(path, header=header, dtype=str, keep_default_na=False,
                           skip_blank_lines=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        return pd.DataFrame()
    except pd.errors.ParserError as e:
        m = _PARSER_LINE.search(str(e))
        raise GraphFormatError(path, f"malformed CSV ({e})", int(m.group(1)) if m else None)


def _drop_trailing_blank(frame: pd.DataFrame) -> pd.DataFrame:
    while len(frame) and all(_is_blank(v) for v in frame.iloc[-1]):
        frame = frame.iloc[:-1]
    return frame


def _is_blank(value) -> bool:
    return not isinstance(value, str) or value.strip() == ""


def _parse_float(path: str, value, line: int) -> float:
    if _is_blank(value):
        raise GraphFormatError(path, "missing value", line)
    try:
        return float(value)
    except ValueError:
        raise GraphFormatError(path, f"not a number: {value!r}", line)


def _parse_index(path: str, value, line: int) -> int:
    if _is_blank(value):
        raise GraphFormatError(path, "missing concept index", line)
    try:
        return int(value.strip())
    except ValueError:
        raise GraphFormatError(path, f"not an integer concept index: {value!r}", line)


# -- dense matrix -----------------------------------------------------------

def read_matrix(path: str) -> np.ndarray:
    frame = _drop_trailing_blank(_read_cells(path, header=None))
    rows = []
    for r, values in enumerate(frame.itertuples(index=False, name=None)):
        rows.append([_parse_float(path, v, r + 1) for v in values])
    matrix = np.array(rows, dtype=np.float64).reshape(len(rows), -1 if rows else 0)
    logger.debug(f"Read {matrix.shape} matrix from {path}")
    return matrix


def read_matrix_graph(path: str, labels: Optional[Sequence[str]] = None) -> FcmGraph:
    matrix = read_matrix(path)
    if matrix.shape[0] == 0:
        raise GraphFormatError(path, "empty matrix file", 1)
    try:
        return FcmGraph.from_dense_matrix(matrix, labels)
    except NonSquareMatrix as e:
        raise GraphFormatError(path, str(e), matrix.shape[1] + 1 if matrix.shape[0] > matrix.shape[1] else None)
    except (WeightOutOfRange, NonzeroDiagonal) as e:
        raise GraphFormatError(path, str(e), e.i + 1)


def write_matrix(matrix: np.ndarray, path: str):
    ensure_parent(path)
    pd.DataFrame(np.asarray(matrix, dtype=np.float64)).to_csv(
        path, header=False, index=False, lineterminator="\n")


# -- edge list --------------------------------------------------------------

def read_edge_list(path: str, n: Optional[int] = None, labels: Optional[Sequence[str]] = None) -> FcmGraph:
    """Read an edge-list CSV.

    The concept count comes from `n`, else from the ``<path>.json`` sidecar,
    else from the largest index seen.
    """
    frame = _read_cells(path, header=0)
    if list(frame.columns) != EDGELIST_HEADER:
        raise GraphFormatError(path, f"expected header {','.join(EDGELIST_HEADER)}, got {','.join(map(str, frame.columns))}", 1)
    frame = _drop_trailing_blank(frame)

    edges, lines = [], []
    for r, (s, t, w) in enumerate(frame.itertuples(index=False, name=None)):
        line = r + 2
        edges.append((_parse_index(path, s, line), _parse_index(path, t, line), _parse_float(path, w, line)))
        lines.append(line)

    if n is None:
        n = read_sidecar(path).get("n")
    if n is None:
        n = max((max(s, t) for s, t, _ in edges), default=-1) + 1

    try:
        graph = FcmGraph.from_edges(n, edges, labels)
    except FcmError as e:
        raise GraphFormatError(path, str(e), _offending_line(edges, lines, n))
    logger.debug(f"Read {graph!r} from {path}")
    return graph


def _offending_line(edges, lines, n: int) -> Optional[int]:
    """Line of the first edge that fails validation on its own or repeats a pair."""
    seen = set()
    for (s, t, w), line in zip(edges, lines):
        if not (0 <= s < n and 0 <= t < n) or s == t or w == 0.0 or not -1.0 <= w <= 1.0:
            return line
        if (s, t) in seen:
            return line
        seen.add((s, t))
    return None


def write_edge_list(graph: FcmGraph, path: str, sidecar: Optional[dict] = None):
    """Write `graph` as an edge-list CSV plus a ``<path>.json`` sidecar holding n."""
    ensure_parent(path)
    frame = pd.DataFrame({
        "source": [ed.source for ed in graph.edges],
        "target": [ed.target for ed in graph.edges],
        "weight": [ed.weight for ed in graph.edges],
    }, columns=EDGELIST_HEADER).astype({"source": "int64", "target": "int64", "weight": "float64"})
    frame.to_csv(path, index=False, lineterminator="\n")
    meta = {"n": graph.n}
    meta.update(sidecar or {})
    write_sidecar(path, meta)


def sidecar_path(path: str) -> str:
    return f"{path}.json"


def read_sidecar(path: str) -> dict:
    sp = sidecar_path(path)
    if not os.path.exists(sp):
        return {}
    with open(sp, "r", encoding="utf-8") as f:
        try:
            meta = json.load(f)
        except json.JSONDecodeError as e:
            raise GraphFormatError(sp, f"malformed JSON sidecar ({e.msg})", e.lineno)
    if not isinstance(meta, dict):
        raise GraphFormatError(sp, "sidecar must hold a JSON object", 1)
    return meta


def write_sidecar(path: str, meta: dict):
    with open(sidecar_path(path), "w", encoding="utf-8") as f:
        json.dump(meta, f, indent=2, sort_keys=True)
        f.write("\n")


# -- dispatch ---------------------------------------------------------------

def detect_format(path: str) -> str:
    """Guess the graph format from the first line of the file."""
    _require_file(path)
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().strip().replace(" ", "")
    return "edgelist" if first == ",".join(EDGELIST_HEADER) else "matrix"


def read_graph(path: str, fmt: Optional[str] = None) -> FcmGraph:
    fmt = fmt or detect_format(path)
    labels = read_labels(path)
    if fmt == "matrix":
        graph = read_matrix_graph(path, labels)
    elif fmt == "edgelist":
        graph = read_edge_list(path, labels=labels)
    else:
        raise ValueError(f"Unknown graph format {fmt!r}; expected one of {FORMATS}")
    logger.info(f"Loaded {graph!r} from {path} ({fmt})")
    return graph


def write_graph(graph: FcmGraph, path: str, fmt: str = "edgelist", sidecar: Optional[dict] = None):
    if fmt == "matrix":
        write_matrix(graph.to_dense_matrix(), path)
    elif fmt == "edgelist":
        write_edge_list(graph, path, sidecar)
    else:
        raise ValueError(f"Unknown graph format {fmt!r}; expected one of {FORMATS}")
    if graph.labels is not None:
        write_labels(graph.labels, path)
    logger.info(f"Wrote {graph!r} to {path} ({fmt})")


# -- concept labels ---------------------------------------------------------

def labels_path(path: str) -> str:
    return f"{path}.labels"


def read_labels(path: str) -> Optional[List[str]]:
    lp = labels_path(path)
    if not os.path.exists(lp):
        return None
    with open(lp, "r", encoding="utf-8") as f:
        return [line.rstrip("\n") for line in f if line.strip()]


def write_labels(labels: Sequence[str], path: str):
    with open(labels_path(path), "w", encoding="utf-8") as f:
        for label in labels:
            f.write(f"{label}\n")


# -- state vectors ----------------------------------------------------------

def read_state(path: str) -> np.ndarray:
    """Read a single-row, header-less CSV of activation values."""
    frame = _drop_trailing_blank(_read_cells(path, header=None))
    if len(frame) != 1:
        raise GraphFormatError(path, f"expected exactly one row of activation values, got {len(frame)}",
                               2 if len(frame) > 1 else None)
    return np.array([_parse_float(path, v, 1) for v in frame.iloc[0]], dtype=np.float64)


def write_state(state: Sequence[float], path: str):
    ensure_parent(path)
    pd.DataFrame([np.asarray(state, dtype=np.float64)]).to_csv(
        path, header=False, index=False, lineterminator="\n")


def write_trajectory(trajectory: Sequence[np.ndarray], path: str):
    """One row per iteration: ``t,c0,...,c{n-1}``."""
    ensure_parent(path)
    values = np.asarray(trajectory, dtype=np.float64)
    n = values.shape[1] if values.ndim == 2 else 0
    frame = pd.DataFrame(values.reshape(len(values), n), columns=[f"c{i}" for i in range(n)])
    frame.insert(0, "t", np.arange(len(values)))
    frame.to_csv(path, index=False, lineterminator="\n")


def ensure_parent(path: str):
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
