"""Rasterization of graph domains into weighted 8-neighbour grids."""

import math
from typing import Dict, List, Tuple

import numpy as np

from modlim.core.errors import EmptyFamily, InvalidQuadruple, ResolutionTooCoarse
from modlim.core.logging import get_logger
from modlim.domain.graph import minimum_on, step_pieces, validate_quadruple
from modlim.models.discrete import DiscreteDomain
from modlim.models.domain import (
    BoundaryArc,
    BoundaryQuadruple,
    GraphDomain,
)

logger = get_logger(__name__)

# a column top closer than this fraction of h to a lattice row is that row
_TOP_SLACK = 1e-6
_ROW_SLACK = 1e-9


def _columns(d: GraphDomain, h: float) -> Tuple[np.ndarray, np.ndarray, float, Dict[int, float]]:
    """Column positions, heights, the effective cell size and snapped jumps."""
    lo, hi = d.interval.lo, d.interval.hi
    # h_eff <= h, so the resolution checks on h also hold on the grid
    n = max(1, math.ceil((hi - lo) / h - _ROW_SLACK))
    h_eff = (hi - lo) / n
    xs = lo + h_eff * np.arange(n + 1)
    xs[-1] = hi
    f = d.f
    if f.kind != "step":
        return xs, np.asarray(f(xs), dtype=float), h_eff, {}

    # breakpoints snap to the nearest column, which takes the stored (minimal) value
    snapped = [int(round((b - lo) / h_eff)) for b in f.breakpoints]
    # every piece keeps at least one column of its own value
    bounds = [-1, *snapped, n + 1]
    edges = [lo, *f.breakpoints, hi]
    for k in range(len(bounds) - 1):
        if bounds[k + 1] - bounds[k] < 2:
            raise ResolutionTooCoarse("piece width", edges[k + 1] - edges[k], h_eff)
    heights = np.empty(n + 1)
    piece = 0
    for i in range(n + 1):
        while piece < len(snapped) and snapped[piece] < i:
            piece += 1
        if piece < len(snapped) and snapped[piece] == i:
            heights[i] = f.stored_breakpoint_values[piece]
        else:
            heights[i] = f.values[piece]
    jumps = {
        k: b
        for k, b in zip(snapped, f.breakpoints)
        if any(abs(b - j) <= 1e-12 for j in f.jumps())
    }
    return xs, heights, h_eff, jumps


def _check_resolution(d: GraphDomain, h: float) -> None:
    f = d.f
    if h >= d.interval.width:
        raise ResolutionTooCoarse("interval width", d.interval.width, h)
    min_f = minimum_on(f, d.interval.lo, d.interval.hi)
    if h >= min_f:
        raise ResolutionTooCoarse("minimum height", min_f, h)
    if f.kind == "step":
        widths = [b - a for a, b, _ in step_pieces(f, d.interval)]
        if min(widths) <= h:
            raise ResolutionTooCoarse("piece width", min(widths), h)


def _in_arc(x: float, arc: BoundaryArc, tol: float) -> bool:
    return arc.lo - tol <= x <= arc.hi + tol


def rasterize_arcs(
    d: GraphDomain, h: float, source: BoundaryArc, sink: BoundaryArc
) -> DiscreteDomain:
    """
    Rasterize d at cell size h and mark the boundary nodes of two arcs.

    Columns whose height is not a lattice multiple get an extra top node on the
    graph of f. Step jumps produce risers (the nodes of the taller column above
    the shorter one), which belong to the top edge.
    """
    if not h > 0:
        raise ResolutionTooCoarse("cell size", h, h)
    _check_resolution(d, h)
    xs, heights, h_eff, jumps = _columns(d, h)
    n_cols = len(xs)

    col_y: List[np.ndarray] = []
    rows = np.floor(heights / h_eff + _ROW_SLACK).astype(int)
    for top, j_max in zip(heights, rows):
        ys = h_eff * np.arange(j_max + 1)
        if top - ys[-1] > _TOP_SLACK * h_eff:
            ys = np.append(ys, top)
        else:
            ys[-1] = top
        col_y.append(ys)

    counts = np.array([len(ys) for ys in col_y])
    start = np.concatenate([[0], np.cumsum(counts)])
    node_x = np.repeat(xs, counts)
    node_y = np.concatenate(col_y)

    widths = np.full(n_cols, h_eff)
    widths[0] = widths[-1] = h_eff / 2.0
    area = np.empty(len(node_x))
    for i, ys in enumerate(col_y):
        gaps = np.diff(ys)
        share = np.zeros(len(ys))
        share[:-1] += gaps / 2.0
        share[1:] += gaps / 2.0
        area[start[i] : start[i + 1]] = widths[i] * share

    edges: Dict[Tuple[int, int], float] = {}

    def link(u: int, v: int) -> None:
        if u == v:
            return
        key = (u, v) if u < v else (v, u)
        if key not in edges:
            edges[key] = math.hypot(node_x[u] - node_x[v], node_y[u] - node_y[v])

    for i in range(n_cols):
        for k in range(start[i], start[i + 1] - 1):
            link(k, k + 1)
    for i in range(n_cols - 1):
        left, right = start[i], start[i + 1]
        shared = min(rows[i], rows[i + 1])
        for j in range(shared + 1):
            link(left + j, right + j)
            if j + 1 <= shared:
                link(left + j, right + j + 1)
                link(left + j + 1, right + j)
        top_l, top_r = start[i + 1] - 1, start[i + 2] - 1
        link(top_l, top_r)
        # extra top nodes reach the lattice rows of the neighbour around them
        for top, j_top, other, j_other in (
            (top_l, rows[i], right, rows[i + 1]),
            (top_r, rows[i + 1], left, rows[i]),
        ):
            for j in (j_top, j_top + 1):
                reach = abs(node_y[other + j] - node_y[top]) if j <= j_other else math.inf
                if reach <= h_eff * (1 + _ROW_SLACK):
                    link(top, other + j)

    pairs = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
    length = np.array([edges[tuple(p)] for p in pairs])

    tol = 1e-9 * h_eff
    sources = _arc_nodes(source, xs, heights, start, jumps, node_y, tol)
    sinks = _arc_nodes(sink, xs, heights, start, jumps, node_y, tol)
    if len(sources) == 0 or len(sinks) == 0:
        raise EmptyFamily("an arc contains no grid nodes at this resolution")
    if np.intersect1d(sources, sinks).size:
        raise InvalidQuadruple("source and sink arcs share grid nodes")

    logger.debug(
        f"Rasterized {n_cols} columns into {len(node_x)} nodes and {len(pairs)} edges "
        f"at h={h_eff:.6g}"
    )
    return DiscreteDomain(
        h=h_eff,
        column_x=xs,
        column_height=heights,
        column_start=start,
        x=node_x,
        y=node_y,
        node_area=area,
        edge_tail=pairs[:, 0],
        edge_head=pairs[:, 1],
        edge_length=length,
        sources=sources,
        sinks=sinks,
    )


def _arc_nodes(
    arc: BoundaryArc,
    xs: np.ndarray,
    heights: np.ndarray,
    start: np.ndarray,
    jumps: Dict[int, float],
    node_y: np.ndarray,
    tol: float,
) -> np.ndarray:
    cols = [i for i, x in enumerate(xs) if _in_arc(x, arc, tol)]
    if arc.edge == "bottom":
        return np.array([start[i] for i in cols], dtype=np.int64)

    nodes = {int(start[i + 1] - 1) for i in cols}
    for k, x_jump in jumps.items():
        inside = arc.lo + tol < x_jump < arc.hi - tol
        at_lo = abs(x_jump - arc.lo) <= tol and arc.riser_at_lo
        at_hi = abs(x_jump - arc.hi) <= tol and arc.riser_at_hi
        if not (inside or at_lo or at_hi):
            continue
        neighbours = [i for i in (k - 1, k + 1) if 0 <= i < len(xs)]
        tall = max(neighbours, key=lambda i: heights[i])
        floor = heights[k] + tol
        nodes.update(
            int(v)
            for v in range(start[tall], start[tall + 1])
            if node_y[v] > floor
        )
    return np.array(sorted(nodes), dtype=np.int64)


def rasterize(d: GraphDomain, h: float, q: BoundaryQuadruple) -> DiscreteDomain:
    """Rasterize d for the family joining the bottom arc (a, b) to the top arc (c, d)."""
    validate_quadruple(d, q)
    source = BoundaryArc(edge="bottom", lo=q.a.x, hi=q.b.x)
    sink = BoundaryArc(
        edge="top",
        lo=q.d.x,
        hi=q.c.x,
        riser_at_lo=q.d.side == "left",
        riser_at_hi=q.c.side == "right",
    )
    return rasterize_arcs(d, h, source, sink)
