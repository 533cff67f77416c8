"""
Restricted quadratic program over a set of path constraints.

    min  sum_v area_v rho_v^2   s.t.  p_k . rho >= 1  for every stored path k

is solved through its dual, max 1.lam - lam.M.lam / 4 over lam >= 0 with
M = P A^-1 P^T, by projected coordinate ascent. The primal density is
rho = A^-1 P^T lam / 2 and is nonnegative because P is.
"""

from typing import List, Optional, Tuple

import numpy as np
from scipy.sparse import csr_matrix, diags

from modlim.core.logging import get_logger

logger = get_logger(__name__)


class PathProgram:
    """Path constraints of the discrete modulus problem and their dual multipliers."""

    def __init__(self, node_area: np.ndarray, tail: np.ndarray, head: np.ndarray, length: np.ndarray):
        self.inv_area = 1.0 / node_area
        self.n = len(node_area)
        self._edge_of = {}
        for e, (u, v) in enumerate(zip(tail.tolist(), head.tolist())):
            self._edge_of[(u, v)] = e
            self._edge_of[(v, u)] = e
        self._length = length
        self.paths: List[Tuple[int, ...]] = []
        self.lam = np.zeros(0)
        self._rows: List[Tuple[np.ndarray, np.ndarray]] = []
        self._p: Optional[csr_matrix] = None
        self._m = np.zeros((0, 0))

    def coefficients(self, path: Tuple[int, ...]) -> Tuple[np.ndarray, np.ndarray]:
        """Sparse p (nodes, weights) with p . rho the rho-length of the path."""
        halves = np.array(
            [self._length[self._edge_of[(u, v)]] / 2.0 for u, v in zip(path, path[1:])]
        )
        nodes = np.asarray(path, dtype=np.int64)
        weights = np.zeros(len(path))
        weights[:-1] += halves
        weights[1:] += halves
        return nodes, weights

    def add(self, paths: List[Tuple[int, ...]]) -> None:
        for path in paths:
            self.paths.append(path)
            self._rows.append(self.coefficients(path))
        self.lam = np.concatenate([self.lam, np.zeros(len(paths))])
        self._rebuild()

    def drop(self, keep: np.ndarray) -> int:
        """Keep only the constraints flagged in `keep`; returns the number dropped."""
        dropped = int(len(keep) - keep.sum())
        if dropped:
            self.paths = [p for p, k in zip(self.paths, keep) if k]
            self._rows = [r for r, k in zip(self._rows, keep) if k]
            self.lam = self.lam[keep]
            self._rebuild()
        return dropped

    def _rebuild(self) -> None:
        if not self._rows:
            self._p = None
            self._m = np.zeros((0, 0))
            return
        indptr = np.concatenate([[0], np.cumsum([len(r[0]) for r in self._rows])])
        self._p = csr_matrix(
            (
                np.concatenate([r[1] for r in self._rows]),
                np.concatenate([r[0] for r in self._rows]),
                indptr,
            ),
            shape=(len(self._rows), self.n),
        )
        self._m = (self._p @ diags(self.inv_area) @ self._p.T).toarray()

    def lengths(self, rho: np.ndarray) -> np.ndarray:
        """rho-length of every stored path."""
        return np.zeros(0) if self._p is None else self._p @ rho

    def lengths_of(self, paths: List[Tuple[int, ...]], rho: np.ndarray) -> np.ndarray:
        """rho-length of arbitrary paths of the grid."""
        out = []
        for path in paths:
            nodes, weights = self.coefficients(path)
            out.append(float(weights @ rho[nodes]))
        return np.asarray(out)

    def density(self) -> np.ndarray:
        if self._p is None:
            return np.zeros(self.n)
        return self.inv_area * (self._p.T @ self.lam) / 2.0

    def solve(self, sweeps: int, tol: float) -> int:
        """Projected coordinate ascent on the dual; returns the sweeps used."""
        m, lam = self._m, self.lam
        if len(lam) == 0:
            return 0
        m_lam = m @ lam
        diag = np.diag(m).copy()
        for sweep in range(1, sweeps + 1):
            largest = 0.0
            for k in range(len(lam)):
                new = max(0.0, lam[k] + 2.0 * (1.0 - 0.5 * m_lam[k]) / diag[k])
                step = new - lam[k]
                if step != 0.0:
                    m_lam += m[:, k] * step
                    lam[k] = new
                    largest = max(largest, abs(step))
            if largest <= tol * max(lam.max(), 1e-300):
                break
        self.lam = lam
        return sweep

    def dual_terms(self) -> Tuple[float, float]:
        """(1 . lam, lam . M . lam)"""
        return float(self.lam.sum()), float(self.lam @ self._m @ self.lam)
