"""Subdivision of target box faces into coverage-accounting facets.

Faces shared between abutting boxes (or buried inside overlapping boxes)
are not part of the exposed surface and carry no facets. Exposure is
computed exactly with axis-aligned rectangle arithmetic so the facet
areas sum to the true exposed area.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geometry import WorldModel

_AREA_EPS = 1e-12

# outward face order per box: +x, -x, +y, -y, +z, -z
_FACE_ORDER = [(0, +1), (0, -1), (1, +1), (1, -1), (2, +1), (2, -1)]


@dataclass
class Facet:
    """One exposed surface cell: a representative point, outward normal, area."""

    center: np.ndarray
    normal: np.ndarray
    area: float


def _covering_rects(boxes, owner_idx, axis, side, plane, u_axis, w_axis, face_rect):
    """In-plane rectangles where other boxes block the outward side of a face."""
    fu0, fu1, fw0, fw1 = face_rect
    rects = []
    for j, box in enumerate(boxes):
        if j == owner_idx:
            continue
        lo, hi = box.min_corner, box.max_corner
        if side > 0:
            blocks = lo[axis] <= plane < hi[axis]
        else:
            blocks = lo[axis] < plane <= hi[axis]
        if not blocks:
            continue
        u0, u1 = max(fu0, lo[u_axis]), min(fu1, hi[u_axis])
        w0, w1 = max(fw0, lo[w_axis]), min(fw1, hi[w_axis])
        if u1 - u0 > _AREA_EPS and w1 - w0 > _AREA_EPS:
            rects.append((u0, u1, w0, w1))
    return rects


def _covered(u, w, rects) -> bool:
    return any(r[0] <= u <= r[1] and r[2] <= w <= r[3] for r in rects)


def _cell_exposure(cu0, cu1, cw0, cw1, rects):
    """Exposed area of one cell and a representative exposed point.

    Covering rectangles are clipped to the cell, then the cell is cut at
    every rectangle edge; each piece of the resulting grid is entirely
    covered or entirely exposed, so the area sum is exact.
    """
    clipped = []
    for u0, u1, w0, w1 in rects:
        u0, u1 = max(u0, cu0), min(u1, cu1)
        w0, w1 = max(w0, cw0), min(w1, cw1)
        if u1 - u0 > _AREA_EPS and w1 - w0 > _AREA_EPS:
            clipped.append((u0, u1, w0, w1))
    cell_center = (0.5 * (cu0 + cu1), 0.5 * (cw0 + cw1))
    if not clipped:
        return (cu1 - cu0) * (cw1 - cw0), cell_center

    us = sorted({cu0, cu1, *(r[0] for r in clipped), *(r[1] for r in clipped)})
    ws = sorted({cw0, cw1, *(r[2] for r in clipped), *(r[3] for r in clipped)})
    exposed_area = 0.0
    best = None  # (area, (u, w)) of largest exposed piece
    for i in range(len(us) - 1):
        for j in range(len(ws) - 1):
            mu = 0.5 * (us[i] + us[i + 1])
            mw = 0.5 * (ws[j] + ws[j + 1])
            if _covered(mu, mw, clipped):
                continue
            piece = (us[i + 1] - us[i]) * (ws[j + 1] - ws[j])
            exposed_area += piece
            if best is None or piece > best[0]:
                best = (piece, (mu, mw))
    if exposed_area <= _AREA_EPS or best is None:
        return 0.0, None
    if not _covered(*cell_center, clipped):
        return exposed_area, cell_center
    return exposed_area, best[1]


def subdivide_faces(world: WorldModel, pitch: float) -> list[Facet]:
    """Partition every exposed target face into facets of side <= pitch.

    Partially blocked cells keep their exact exposed area and move the
    representative point into the exposed region; fully blocked cells are
    dropped.
    """
    if pitch <= 0:
        raise ValueError("pitch must be > 0")
    boxes = world.target
    facets: list[Facet] = []
    for bi, box in enumerate(boxes):
        lo, hi = box.min_corner, box.max_corner
        for axis, side in _FACE_ORDER:
            u_axis, w_axis = [k for k in range(3) if k != axis]
            plane = hi[axis] if side > 0 else lo[axis]
            fu0, fu1 = lo[u_axis], hi[u_axis]
            fw0, fw1 = lo[w_axis], hi[w_axis]
            eu, ew = fu1 - fu0, fw1 - fw0
            if eu <= _AREA_EPS or ew <= _AREA_EPS:
                continue
            rects = _covering_rects(
                boxes, bi, axis, side, plane, u_axis, w_axis, (fu0, fu1, fw0, fw1)
            )
            nu = max(1, int(np.ceil(eu / pitch)))
            nw = max(1, int(np.ceil(ew / pitch)))
            u_edges = np.linspace(fu0, fu1, nu + 1)
            w_edges = np.linspace(fw0, fw1, nw + 1)
            normal = np.zeros(3)
            normal[axis] = float(side)
            for i in range(nu):
                for j in range(nw):
                    area, point = _cell_exposure(
                        u_edges[i], u_edges[i + 1], w_edges[j], w_edges[j + 1], rects
                    )
                    if area <= _AREA_EPS or point is None:
                        continue
                    center = np.zeros(3)
                    center[axis] = plane
                    center[u_axis] = point[0]
                    center[w_axis] = point[1]
                    facets.append(Facet(center=center, normal=normal, area=area))
    return facets


def total_facet_area(facets: list[Facet]) -> float:
    return float(sum(f.area for f in facets))
