"""Shortest rho-length paths between the source and sink nodes of a grid."""

import math
from abc import ABC, abstractmethod
from typing import List, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from modlim.core.config import settings
from modlim.core.errors import InfeasibleEta
from modlim.core.logging import get_logger
from modlim.models.discrete import DiscreteDomain

logger = get_logger(__name__)

# smallest weight per unit Euclidean length that breaks ties between equal rho-lengths
TIE_BREAK = 1e-12

Path = Tuple[int, ...]


class PathOracle(ABC):
    """Base class for shortest-path oracles over a fixed grid."""

    def __init__(self, g: DiscreteDomain, seed: Optional[int] = None):
        self.g = g
        n = g.n_nodes
        m = len(g.edge_length)
        rng = np.random.default_rng(settings.seed if seed is None else seed)
        # per-edge tie-break in [TIE_BREAK, 2 TIE_BREAK); the seed picks among equal paths
        self._tie = TIE_BREAK * (1.0 + rng.random(m))
        tails = np.concatenate([g.edge_tail, g.edge_head])
        heads = np.concatenate([g.edge_head, g.edge_tail])
        # store edge ids + 1 so the CSR layout tells where every edge landed
        ids = np.arange(1, 2 * m + 1, dtype=float)
        self._graph = csr_matrix((ids, (tails, heads)), shape=(n, n))
        self._slot_edge = (self._graph.data.astype(np.int64) - 1) % m
        self._lengths = g.edge_length

    def reweight(self, rho: np.ndarray) -> csr_matrix:
        """Set every edge weight to len * (rho_u + rho_v) / 2, plus the tie-break."""
        g = self.g
        w = self._lengths * ((rho[g.edge_tail] + rho[g.edge_head]) / 2.0 + self._tie)
        self._graph.data = w[self._slot_edge]
        return self._graph

    @staticmethod
    def _walk(pred: np.ndarray, sink: int, offset: int = 0) -> Path:
        path = [sink]
        node = sink - offset
        while pred[node] >= 0:
            node = pred[node]
            path.append(node + offset)
        return tuple(reversed(path))

    @abstractmethod
    def sink_distances(self, rho: np.ndarray) -> Tuple[np.ndarray, List[Optional[Path]]]:
        """Shortest distance and one shortest path to every sink node."""
        pass

    def shortest(self, rho: np.ndarray, limit: int = 1) -> List[Tuple[float, Path]]:
        """Up to `limit` distinct paths to the nearest sinks, nearest first."""
        dist, paths = self.sink_distances(rho)
        order = np.lexsort((self.g.sinks, dist))
        found, seen = [], set()
        for k in order:
            if not math.isfinite(dist[k]) or paths[k] is None:
                break
            if paths[k] in seen:
                continue
            seen.add(paths[k])
            found.append((float(dist[k]), paths[k]))
            if len(found) >= limit:
                break
        return found


class FullOracle(PathOracle):
    """Multi-source Dijkstra over the whole grid."""

    def sink_distances(self, rho):
        graph = self.reweight(rho)
        dist, pred, _ = dijkstra(
            graph,
            directed=True,
            indices=self.g.sources,
            return_predecessors=True,
            min_only=True,
        )
        sinks = self.g.sinks
        paths = [
            self._walk(pred, int(s)) if math.isfinite(dist[s]) else None for s in sinks
        ]
        return dist[sinks], paths


class WindowedOracle(PathOracle):
    """
    Paths whose horizontal extent stays below eta.

    The extent is measured in columns: a path may use at most
    `ceil(eta / h) - 1` consecutive column gaps, and the search runs once per
    window of that many columns.
    """

    def __init__(self, g: DiscreteDomain, eta: float, seed: Optional[int] = None):
        if eta < g.h * (1 - 1e-9):
            raise InfeasibleEta(f"eta={eta} is below the cell size h={g.h}")
        super().__init__(g, seed)
        self.eta = eta
        self.span = max(0, math.ceil(eta / g.h - 1e-9) - 1)
        last = g.n_columns - 1
        starts = range(0, max(1, last - self.span + 1))
        self.windows = [(s, min(s + self.span, last)) for s in starts]
        logger.debug(
            f"eta={eta} allows {self.span} column gaps over {len(self.windows)} windows"
        )

    def sink_distances(self, rho):
        graph = self.reweight(rho)
        g = self.g
        sinks = g.sinks
        best = np.full(len(sinks), np.inf)
        paths: List[Optional[Path]] = [None] * len(sinks)
        for first, last in self.windows:
            lo, hi = int(g.column_start[first]), int(g.column_start[last + 1])
            src = g.sources[(g.sources >= lo) & (g.sources < hi)]
            in_window = np.flatnonzero((sinks >= lo) & (sinks < hi))
            if len(src) == 0 or len(in_window) == 0:
                continue
            dist, pred, _ = dijkstra(
                graph[lo:hi, lo:hi],
                directed=True,
                indices=src - lo,
                return_predecessors=True,
                min_only=True,
            )
            for k in in_window:
                dk = dist[sinks[k] - lo]
                if dk < best[k]:
                    best[k] = dk
                    paths[k] = self._walk(pred, int(sinks[k]), offset=lo)
        return best, paths


def make_oracle(
    g: DiscreteDomain, eta: Optional[float] = None, seed: Optional[int] = None
) -> PathOracle:
    return FullOracle(g, seed) if eta is None else WindowedOracle(g, eta, seed)
