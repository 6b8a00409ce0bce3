"""Attributed-graph storage: plain-text ingestion, CSR adjacency, and the
symmetrically normalized adjacency operator shared by feature propagation
and the GCN."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp


class GraphLoadError(ValueError):
    """Raised when graph input files are malformed or inconsistent."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AttributedGraph:
    """Immutable undirected graph in CSR form with node features and labels.

    Adjacency is symmetric, self-loop free and duplicate free; neighbor
    lists (``csr_targets`` slices) are sorted. All arrays are read-only,
    so instances are safe to share across workers.
    """

    num_nodes: int
    num_edges: int  # undirected edge count; csr_targets has 2 * num_edges entries
    csr_offsets: np.ndarray
    csr_targets: np.ndarray
    features: np.ndarray
    labels: np.ndarray
    num_classes: int
    self_loops_dropped: int = 0
    duplicates_dropped: int = 0

    def __post_init__(self) -> None:
        for a in (self.csr_offsets, self.csr_targets, self.features, self.labels):
            _readonly(a)

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.csr_offsets)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted open neighborhood of ``v`` (read-only view, ``v`` excluded)."""
        if not 0 <= v < self.num_nodes:
            raise IndexError(f"node id {v} out of range [0, {self.num_nodes})")
        return self.csr_targets[self.csr_offsets[v] : self.csr_offsets[v + 1]]


def neighbors(g: AttributedGraph, v: int) -> np.ndarray:
    return g.neighbors(v)


def from_edges(
    edges: np.ndarray,
    features: np.ndarray,
    labels: np.ndarray,
    *,
    self_loops_dropped: int = 0,
) -> AttributedGraph:
    """Build a validated graph from an (k, 2) int array of undirected edges.

    Edges are symmetrized and deduplicated; ``edges`` must already be free
    of self-loops (the loaders strip and count them).
    """
    features = np.ascontiguousarray(features, dtype=np.float64)
    if features.ndim == 1:
        features = features.reshape(-1, 1)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    n = features.shape[0]
    if n == 0:
        raise GraphLoadError("empty graph: no nodes")
    if labels.shape[0] != n:
        raise GraphLoadError(
            f"row-count mismatch: {n} feature rows vs {labels.shape[0]} labels"
        )
    if labels.min() < 0:
        raise GraphLoadError("labels must be non-negative integers")

    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.shape[0] == 0:
        raise GraphLoadError("empty graph: no edges")
    if edges.min() < 0 or edges.max() >= n:
        bad = edges[(edges < 0).any(axis=1) | (edges >= n).any(axis=1)][0]
        raise GraphLoadError(f"edge ({bad[0]}, {bad[1]}) references node id >= {n}")
    if (edges[:, 0] == edges[:, 1]).any():
        raise GraphLoadError("self-loops must be stripped before construction")

    # canonicalize as (min, max), dedup, then store both directions
    canon = np.sort(edges, axis=1)
    unique = np.unique(canon, axis=0)
    dupes = canon.shape[0] - unique.shape[0]
    m = unique.shape[0]
    directed = np.concatenate([unique, unique[:, ::-1]], axis=0)
    order = np.lexsort((directed[:, 1], directed[:, 0]))
    directed = directed[order]
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(directed[:, 0], minlength=n), out=offsets[1:])

    return AttributedGraph(
        num_nodes=n,
        num_edges=m,
        csr_offsets=offsets,
        csr_targets=np.ascontiguousarray(directed[:, 1]),
        features=features,
        labels=labels,
        num_classes=int(labels.max()) + 1,
        self_loops_dropped=self_loops_dropped,
        duplicates_dropped=dupes,
    )


def _parse_edge_file(path: Path) -> tuple[np.ndarray, int]:
    pairs: list[tuple[int, int]] = []
    self_loops = 0
    with path.open("r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise GraphLoadError(
                    f"{path}:{lineno}: expected 'u v', got {line!r}"
                )
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise GraphLoadError(
                    f"{path}:{lineno}: non-integer node id in {line!r}"
                ) from None
            if u < 0 or v < 0:
                raise GraphLoadError(f"{path}:{lineno}: negative node id")
            if u == v:
                self_loops += 1
                continue
            pairs.append((u, v))
    return np.array(pairs, dtype=np.int64).reshape(-1, 2), self_loops


def load_graph(
    edge_list_path: str | Path,
    features_path: str | Path,
    labels_path: str | Path,
    *,
    normalize_features: bool = False,
) -> AttributedGraph:
    """Load an attributed graph from plain-text exports.

    Edge list: one ``u v`` pair per line (whitespace separated, ``#``
    comments ignored). Features: one CSV row per node, no header. Labels:
    one non-negative integer per line. Duplicate and reversed edges are
    deduplicated; self-loop lines are dropped and counted in
    ``self_loops_dropped``. With ``normalize_features`` each feature row is
    scaled to unit L1 norm (zero rows left untouched).
    """
    edges, self_loops = _parse_edge_file(Path(edge_list_path))
    try:
        features = np.loadtxt(features_path, delimiter=",", dtype=np.float64, ndmin=2)
    except ValueError as e:
        raise GraphLoadError(f"{features_path}: malformed feature row ({e})") from None
    try:
        labels = np.loadtxt(labels_path, dtype=np.int64, ndmin=1)
    except ValueError as e:
        raise GraphLoadError(f"{labels_path}: malformed label line ({e})") from None
    if normalize_features:
        features = features.copy()
        norms = np.abs(features).sum(axis=1, keepdims=True)
        np.divide(features, norms, out=features, where=norms > 0)
    return from_edges(edges, features, labels, self_loops_dropped=self_loops)


class NormalizedAdjacency:
    """Symmetric renormalized adjacency with virtual self-loops.

    Applies D^{-1/2} (A + I) D^{-1/2} (D the degree matrix of A + I) as a
    sparse-times-dense product. The stored graph is never mutated.
    """

    def __init__(self, g: AttributedGraph):
        self.graph = g
        n = g.num_nodes
        inv_sqrt = 1.0 / np.sqrt(g.degrees + 1.0)
        src = np.repeat(np.arange(n, dtype=np.int64), g.degrees)
        dst = g.csr_targets
        rows = np.concatenate([src, np.arange(n, dtype=np.int64)])
        cols = np.concatenate([dst, np.arange(n, dtype=np.int64)])
        data = np.concatenate([inv_sqrt[src] * inv_sqrt[dst], inv_sqrt * inv_sqrt])
        self._matrix = sp.csr_matrix((data, (rows, cols)), shape=(n, n))

    def apply(self, M: np.ndarray) -> np.ndarray:
        M = np.asarray(M, dtype=np.float64)
        if M.shape[0] != self.graph.num_nodes:
            raise ValueError(
                f"matrix has {M.shape[0]} rows, graph has {self.graph.num_nodes} nodes"
            )
        return self._matrix @ M

    def dense(self) -> np.ndarray:
        return self._matrix.toarray()

    __matmul__ = apply


def propagate(g: AttributedGraph, M: np.ndarray, steps: int) -> np.ndarray:
    """Repeatedly apply the normalized adjacency: returns A_norm^steps @ M."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    M = np.asarray(M, dtype=np.float64)
    if M.shape[0] != g.num_nodes:
        raise ValueError(f"matrix has {M.shape[0]} rows, graph has {g.num_nodes} nodes")
    if steps == 0:
        return M.copy()
    op = NormalizedAdjacency(g)
    out = M
    for _ in range(steps):
        out = op.apply(out)
    return out
