"""File formats shared by the CLI and the generators.

binary matrix: headerless CSV of 0/1, rows are objects
graph:         whitespace edge list ``u v [w]``, 0-indexed, weight default 1
points:        headerless CSV of reals, rows are objects
labels:        single-column integers

Lines starting with ``#`` are comments everywhere.
"""

import numpy as np

from .cutgen import Graph
from .errors import DataFormatError
from .util import fmt_float


def read_binary_matrix(path) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", dtype=np.int64, ndmin=2)
    except (ValueError, OSError) as exc:
        raise DataFormatError(f"cannot parse binary matrix {path}: {exc}") from exc
    if not np.isin(data, (0, 1)).all():
        raise DataFormatError(f"{path} contains entries other than 0/1")
    return data.astype(np.int8)


def write_binary_matrix(matrix, path) -> None:
    np.savetxt(path, np.asarray(matrix, dtype=np.int64), delimiter=",", fmt="%d")


def read_points(path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", dtype=np.float64, ndmin=2)
    except (ValueError, OSError) as exc:
        raise DataFormatError(f"cannot parse point CSV {path}: {exc}") from exc


def write_points(points, path) -> None:
    pts = np.asarray(points, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        for row in pts:
            fh.write(",".join(fmt_float(x) for x in row) + "\n")


def read_labels(path) -> np.ndarray:
    try:
        return np.loadtxt(path, dtype=np.int64, ndmin=1)
    except (ValueError, OSError) as exc:
        raise DataFormatError(f"cannot parse labels {path}: {exc}") from exc


def write_labels(labels, path) -> None:
    np.savetxt(path, np.asarray(labels, dtype=np.int64), fmt="%d")


def read_edge_list(path, n=None) -> Graph:
    edges = []
    max_node = -1
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if n is None and line.startswith("# nodes:"):
                    n = int(line.split(":", 1)[1])
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) not in (2, 3):
                    raise DataFormatError(
                        f"{path}:{lineno}: expected 'u v [w]', got {line!r}")
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
                edges.append((u, v, w))
                max_node = max(max_node, u, v)
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise DataFormatError(f"cannot parse edge list {path}: {exc}") from exc
    if n is None:
        n = max_node + 1
    if n < 1:
        raise DataFormatError(f"{path}: empty graph")
    try:
        return Graph(n=n, edges=tuple(edges))
    except Exception as exc:
        raise DataFormatError(f"{path}: invalid graph: {exc}") from exc


def write_edge_list(graph: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# nodes: {graph.n}\n")
        for u, v, w in graph.edges:
            if w == 1.0:
                fh.write(f"{u} {v}\n")
            else:
                fh.write(f"{u} {v} {fmt_float(w)}\n")
