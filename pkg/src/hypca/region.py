"""Finite patches of the supported tilings around a guideline segment.

A region is grown from a chain of guideline cells, the cells that carry tape
letters.  The chain is walked first, ordered by a monotone statistic along
the guideline, then a breadth-first search from the central segment adds
every cell within the requested graph distance.  Cell identity is decided by
center coordinates, deduplicated through a bucket table with a straddle-aware
lookup: distinct centers are separated by order 1 at every supported size,
while drift between different generation paths to the same cell stays many
orders of magnitude below the tolerance.  A lookup landing in the dead zone
between the two scales raises instead of guessing.

Guideline definitions:

- pentagrid: the line carried by side 0 of the base cell; tape cells keep an
  edge on it, consecutive ones share the sides adjacent to that edge.
- heptagrid: the line through the midpoints of sides 0 and 1 of the base
  cell; it crosses a bi-infinite sequence of cells, and the tape is the
  crossed cells whose center lies on the base cell's side of the line.
- dodecagrid: the plane carrying face 0 of the base cell plays the role the
  pentagrid line plays one dimension down; the tape runs along the line cut
  on that plane by the face 2 plane.  Tape cells are renumbered afterwards
  so that face 0 faces the reflected cell below the plane, face 1 the
  previous tape cell and face 4 the next one.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import geometry as geo
from . import polytopes as poly
from . import symmetry as sym

NO_POS = -(10**9)

# coordinate magnitudes stay accurate up to these graph extents
MAX_EXTENT = {"pentagrid": 18, "heptagrid": 18, "dodecagrid": 8}
MAX_RADIUS = {"pentagrid": 10, "heptagrid": 10, "dodecagrid": 6}

DEDUP_BUCKET = 0.125
DEDUP_TOL = 2e-3
NEAR_MISS_FACTOR = 10.0


class RegionTooLarge(ValueError):
    pass


class MarkerScheme(Enum):
    COMPACT_PENTAGRID = "compact_pentagrid"
    COMPACT_HEPTAGRID = "compact_heptagrid"
    COMPACT_DODECAGRID = "compact_dodecagrid"


@dataclass
class Guideline:
    cell_ids: np.ndarray        # chain cells, ordered by position
    positions: np.ndarray       # tape position of each chain cell
    left_sides: np.ndarray      # side toward position - 1
    right_sides: np.ndarray     # side toward position + 1
    segment_halfwidth: int
    normals: list[np.ndarray]   # plane normals cutting out the line
    frame_p0: np.ndarray
    frame_w: np.ndarray
    mirror_ids: np.ndarray | None = None   # dodecagrid reflected row

    def id_at(self, position: int) -> int:
        k = int(position - self.positions[0])
        if not 0 <= k < len(self.cell_ids):
            raise IndexError(f"no guideline cell at position {position}")
        return int(self.cell_ids[k])


@dataclass
class Region:
    grid: str
    radius: int
    halfwidth: int
    matrices: np.ndarray        # (N, d+1, d+1) base-to-placed isometries
    adjacency: np.ndarray       # (N, n_sides), -1 where no cell was built
    dist: np.ndarray            # (N,) graph distance to the central segment
    positions: np.ndarray       # (N,) tape position, NO_POS off the guideline
    guideline: Guideline

    @property
    def shape(self) -> poly.CellShape:
        return poly.by_name(self.grid)

    @property
    def n_cells(self) -> int:
        return self.matrices.shape[0]

    @property
    def centers(self) -> np.ndarray:
        return self.matrices[:, :, 0]


# per grid: sides whose planes carry the guideline, and the side whose
# neighbor lies forward of the base cell (increasing position)
_GUIDE_SIDES = {
    "pentagrid": ((0,), 4),
    "heptagrid": (None, 6),      # midpoint line, built separately
    "dodecagrid": ((0, 2), 1),
}


def guide_normals(shape: poly.CellShape) -> list[np.ndarray]:
    sides, _ = _GUIDE_SIDES[shape.name]
    if sides is not None:
        return [np.array(shape.side_normals[i]) for i in sides]
    mids = [geo.point_at(shape.inradius, shape.side_directions[i]) for i in (0, 1)]
    j = np.ones(3)
    j[1:] = -1.0
    rows = np.stack([m * j for m in mids])
    _, _, vt = np.linalg.svd(rows)
    n = geo.normalize_spacelike(vt[-1])
    if n[0] < 0:           # keep the base cell center on the positive side
        n = -n
    return [n]


class _Dedup:
    """Bucketed center table; see the module docstring for the scales."""

    def __init__(self):
        self.table: dict[bytes, int] = {}
        self.coords: list[np.ndarray] = []

    def find(self, x: np.ndarray) -> int | None:
        lo = np.floor((x - DEDUP_TOL) / DEDUP_BUCKET).astype(np.int64)
        hi = np.floor((x + DEDUP_TOL) / DEDUP_BUCKET).astype(np.int64)
        if np.array_equal(lo, hi):
            cands = [self.table.get(lo.tobytes())]
        else:
            keys = [()]
            for a, b in zip(lo, hi):
                keys = [t + (v,) for t in keys for v in range(int(a), int(b) + 1)]
            cands = [self.table.get(np.array(t, dtype=np.int64).tobytes())
                     for t in keys]
        best, best_gap = None, np.inf
        for c in cands:
            if c is None:
                continue
            gap = float(np.max(np.abs(self.coords[c] - x)))
            if gap < best_gap:
                best, best_gap = c, gap
        if best is None or best_gap >= NEAR_MISS_FACTOR * DEDUP_TOL:
            return None
        if best_gap >= DEDUP_TOL:
            raise RegionTooLarge(
                f"center match ambiguous at gap {best_gap:.2e}; the requested "
                "region exceeds the supported precision"
            )
        return best

    def insert(self, x: np.ndarray, ident: int) -> None:
        x = np.asarray(x, dtype=float)
        self.coords.append(x)
        self.table[np.floor(x / DEDUP_BUCKET).astype(np.int64).tobytes()] = ident

    def min_distinct_gap(self) -> float:
        """Smallest max-norm distance between distinct centers, for sanity
        checks of the bucket scale (scans neighboring buckets only)."""
        coords = np.stack(self.coords)
        buckets: dict[tuple, list[int]] = {}
        for i, x in enumerate(coords):
            buckets.setdefault(
                tuple(np.floor(x / DEDUP_BUCKET).astype(np.int64)), []
            ).append(i)
        best = np.inf
        dim = coords.shape[1]
        for key, members in buckets.items():
            cands: list[int] = []
            for off in np.ndindex(*([3] * dim)):
                cands.extend(buckets.get(tuple(np.array(key) + np.array(off) - 1), []))
            for i in members:
                for k in cands:
                    if k != i:
                        best = min(best, float(np.max(np.abs(coords[i] - coords[k]))))
        return best


def _is_guide_center(c: np.ndarray, normals, values, tol: float = 1e-3) -> bool:
    return all(abs(float(geo.mdot(c, n)) - v) < tol for n, v in zip(normals, values))


def _chain_sides(g: np.ndarray, steps: np.ndarray, normals, values,
                 w: np.ndarray) -> tuple[int, int]:
    """(side toward previous, side toward next) of a placed guideline cell."""
    here = float(geo.mdot(g[:, 0], w))
    cands = []
    for i in range(steps.shape[0]):
        c = (g @ steps[i])[:, 0]
        if _is_guide_center(c, normals, values):
            cands.append((i, float(geo.mdot(c, w))))
    if len(cands) != 2:
        raise AssertionError(f"guideline cell has {len(cands)} chain neighbors")
    cands.sort(key=lambda t: t[1])
    if not cands[0][1] < here < cands[1][1]:
        raise AssertionError("guideline chain is not monotone")
    return cands[0][0], cands[1][0]


def build_region(grid: str, radius: int, halfwidth: int) -> Region:
    """All cells within `radius` steps of the guideline segment spanning
    positions -halfwidth..halfwidth.

    Guideline cells are generated out to position halfwidth + radius, the
    full stretch the region can contain, and all of them carry positions.
    Cell id 0 is the central cell; the rest of the chain follows in
    position order, then the remaining cells in search order.
    """
    if radius < 1 or halfwidth < 0:
        raise ValueError("radius must be >= 1 and halfwidth >= 0")
    if radius > MAX_RADIUS[grid]:
        raise RegionTooLarge(
            f"radius {radius} exceeds the {grid} limit {MAX_RADIUS[grid]}"
        )
    shape = poly.by_name(grid)
    extent = halfwidth + radius
    if extent > MAX_EXTENT[grid]:
        raise RegionTooLarge(
            f"halfwidth + radius = {extent} exceeds the {grid} limit "
            f"{MAX_EXTENT[grid]}"
        )
    dim1 = shape.dim + 1
    e0 = np.zeros(dim1)
    e0[0] = 1.0
    steps = shape.step_matrices
    p = shape.n_sides

    normals = guide_normals(shape)
    values = [float(geo.mdot(e0, n)) for n in normals]
    p0, w = geo.line_frame(normals)
    fwd = _GUIDE_SIDES[grid][1]
    if float(geo.mdot(steps[fwd] @ e0, w)) < float(geo.mdot(e0, w)):
        w = -w

    # walk the chain outwards in both directions from the base cell
    chain: dict[int, np.ndarray] = {0: np.eye(dim1)}
    for direction in (+1, -1):
        g = np.eye(dim1)
        for k in range(1, extent + 1):
            back, ahead = _chain_sides(g, steps, normals, values, w)
            g = g @ steps[ahead if direction > 0 else back]
            chain[k * direction] = g

    n_chain = 2 * extent + 1
    chain_order = [0] + [q for q in range(-extent, extent + 1) if q != 0]
    matrices: list[np.ndarray] = [chain[q] for q in chain_order]
    positions: list[int] = list(chain_order)
    dist: list[int] = [0 if abs(q) <= halfwidth else -1 for q in positions]
    dedup = _Dedup()
    for ident, g in enumerate(matrices):
        dedup.insert(g[:, 0], ident)

    adjacency: dict[int, np.ndarray] = {}
    frontier = [i for i in range(n_chain) if dist[i] == 0]
    level = 0
    while frontier:
        batch = np.stack([matrices[i] for i in frontier])
        nb = np.einsum("mab,sbc->msac", batch, steps)
        next_frontier: list[int] = []
        for f, ident in enumerate(frontier):
            row = np.full(p, -1, dtype=np.int32)
            for s in range(p):
                c = nb[f, s, :, 0]
                hit = dedup.find(c)
                if hit is not None:
                    row[s] = hit
                    # a neighbor expanded before this cell existed kept -1;
                    # its slot toward us follows its own stored frame, which
                    # can be rotated against ours, so find it by stepping
                    prev = adjacency.get(hit)
                    if prev is not None and ident not in prev:
                        for t in range(p):
                            if prev[t] < 0 and dedup.find(
                                    (matrices[hit] @ steps[t])[:, 0]) == ident:
                                prev[t] = ident
                                break
                    if dist[hit] < 0:          # pre-built chain cell reached
                        dist[hit] = level + 1
                        next_frontier.append(hit)
                elif level < radius:
                    new = len(matrices)
                    matrices.append(np.ascontiguousarray(nb[f, s]))
                    positions.append(NO_POS)
                    dist.append(level + 1)
                    dedup.insert(c, new)
                    next_frontier.append(new)
                    row[s] = new
            adjacency[ident] = row
        frontier = next_frontier
        level += 1

    n = len(matrices)
    adj = np.full((n, p), -1, dtype=np.int32)
    for ident, row in adjacency.items():
        adj[ident] = row

    left = np.zeros(n_chain, dtype=np.int32)
    right = np.zeros(n_chain, dtype=np.int32)
    for k in range(n_chain):
        left[k], right[k] = _chain_sides(matrices[k], steps, normals, values, w)

    mats = np.stack(matrices)
    mirror_by_id = None
    if grid == "dodecagrid":
        mirror_by_id = _canonicalize_chain(shape, mats, adj, n_chain, normals,
                                           left, right)
        left[:] = 1
        right[:] = 4

    # guideline arrays run left to right; chain ids are permuted relative
    # to that order because the central cell is id 0
    by_position = sorted(range(n_chain), key=lambda i: positions[i])
    order = np.array(by_position, dtype=np.int32)
    guideline = Guideline(
        cell_ids=order,
        positions=np.array([positions[i] for i in by_position], dtype=np.int32),
        left_sides=left[order],
        right_sides=right[order],
        segment_halfwidth=halfwidth,
        normals=normals,
        frame_p0=p0,
        frame_w=w,
        mirror_ids=None if mirror_by_id is None else mirror_by_id[order],
    )
    region = Region(
        grid=grid,
        radius=radius,
        halfwidth=halfwidth,
        matrices=mats,
        adjacency=adj,
        dist=np.array(dist, dtype=np.int32),
        positions=np.array(positions, dtype=np.int32),
        guideline=guideline,
    )
    _check_chain(region)
    return region


def _canonicalize_chain(shape, mats, adj, n_chain, normals, left, right):
    """Renumber the faces of every chain cell of a dodecagrid region so that
    face 0 faces the reflected cell, face 1 the previous chain cell and
    face 4 the next one.  Returns the reflected-row cell ids."""
    refl0 = geo.reflection(normals[0])
    steps = shape.step_matrices
    motions = shape.rotation_motions
    index = {m: i for i, m in enumerate(motions)}
    mirror_ids = np.full(n_chain, -1, dtype=np.int32)
    for k in range(n_chain):
        g = mats[k]
        target = refl0 @ g[:, 0]
        scale = max(1.0, abs(float(target[0])))
        j_mirror = -1
        for s in range(12):
            c = (g @ steps[s])[:, 0]
            if float(np.max(np.abs(c - target))) < 1e-6 * scale:
                j_mirror = s
                break
        if j_mirror < 0:
            raise AssertionError("chain cell has no reflected neighbor face")
        motion = sym.complete_motion(j_mirror, int(left[k]))
        rot = shape.base_rotations[index[motion]]
        mats[k] = g @ rot
        adj[k] = adj[k][list(motion)]
        if motion[4] != right[k]:
            raise AssertionError("chain renumbering does not place the next "
                                 "cell at face 4")
        mirror_ids[k] = adj[k, 0]
    return mirror_ids


def _check_chain(region: Region) -> None:
    gl = region.guideline
    p = region.shape.n_sides
    for k, ident in enumerate(gl.cell_ids):
        if k > 0:
            prev = gl.cell_ids[k - 1]
            if region.adjacency[ident, gl.left_sides[k]] != prev:
                raise AssertionError("chain adjacency mismatch on the left")
        if k + 1 < len(gl.cell_ids):
            nxt = gl.cell_ids[k + 1]
            if region.adjacency[ident, gl.right_sides[k]] != nxt:
                raise AssertionError("chain adjacency mismatch on the right")
        gap = (int(gl.right_sides[k]) - int(gl.left_sides[k])) % p
        want = {"pentagrid": 3, "heptagrid": 4, "dodecagrid": None}[region.grid]
        if want is not None and gap != want:
            raise AssertionError(f"unexpected side gap {gap} on chain cell {k}")


_SCHEME_GRID = {
    MarkerScheme.COMPACT_PENTAGRID: "pentagrid",
    MarkerScheme.COMPACT_HEPTAGRID: "heptagrid",
    MarkerScheme.COMPACT_DODECAGRID: "dodecagrid",
}

# marker sides as offsets from the left side (2D) or as fixed faces (3D)
_MARKER_OFFSETS = {
    MarkerScheme.COMPACT_PENTAGRID: (1,),
    MarkerScheme.COMPACT_HEPTAGRID: (1, 3),
}
_MARKER_FACES = (0, 3, 9, 10)


def marker_sides_internal(region: Region, scheme: MarkerScheme) -> dict[int, tuple[int, ...]]:
    """For each guideline cell id, the 0-based sides toward its red markers."""
    if region.grid != _SCHEME_GRID[scheme]:
        raise ValueError(f"{scheme.value} requires a {_SCHEME_GRID[scheme]} region")
    gl = region.guideline
    p = region.shape.n_sides
    out: dict[int, tuple[int, ...]] = {}
    for k, ident in enumerate(gl.cell_ids):
        if scheme is MarkerScheme.COMPACT_DODECAGRID:
            sides = _MARKER_FACES
        else:
            lam = int(gl.left_sides[k])
            sides = tuple((lam + off) % p for off in _MARKER_OFFSETS[scheme])
        out[int(ident)] = sides
    return out


def marker_cells(region: Region, scheme: MarkerScheme) -> dict[int, set[int]]:
    """For each guideline cell id, its marker sides in public numbering.

    The cells across those sides are the ones a compact embedding paints
    with the marker state.  The frozen chain cells at the very ends of the
    generated stretch are skipped, their markers lie outside the region;
    anywhere else a missing marker neighbor means the region is too small.
    """
    base = 0 if region.grid == "dodecagrid" else 1
    out: dict[int, set[int]] = {}
    for ident, sides in marker_sides_internal(region, scheme).items():
        if any(region.adjacency[ident, s] < 0 for s in sides):
            if region.dist[ident] < region.radius:
                raise RegionTooLarge(
                    f"guideline cell {ident} is missing a marker neighbor"
                )
            continue
        out[ident] = {s + base for s in sides}
    return out


def marker_cell_ids(region: Region, scheme: MarkerScheme) -> np.ndarray:
    """Ids of the cells a compact embedding paints with the marker state."""
    ids = {
        int(region.adjacency[ident, s])
        for ident, sides in marker_sides_internal(region, scheme).items()
        for s in sides
        if region.adjacency[ident, s] >= 0
    }
    return np.array(sorted(ids), dtype=np.int32)


def neighbor(region: Region, c: int, side: int) -> int | None:
    """The cell across a side of c, or None outside the generated region.

    Sides run 1..5 and 1..7 on the polygonal grids, 0..11 on the
    dodecagrid.
    """
    p = region.shape.n_sides
    if region.grid == "dodecagrid":
        if not 0 <= side < p:
            raise ValueError(f"face {side} out of range 0..{p - 1}")
        s = side
    else:
        if not 1 <= side <= p:
            raise ValueError(f"side {side} out of range 1..{p}")
        s = side - 1
    hit = int(region.adjacency[c, s])
    return hit if hit >= 0 else None


def guideline_triples(region: Region) -> list[tuple[int, int, int]]:
    """The guideline as (cell id, left side, right side), left to right,
    sides in public numbering."""
    base = 0 if region.grid == "dodecagrid" else 1
    gl = region.guideline
    return [
        (int(c), int(l) + base, int(r) + base)
        for c, l, r in zip(gl.cell_ids, gl.left_sides, gl.right_sides)
    ]


def region_to_json(region: Region) -> str:
    gl = region.guideline
    doc = {
        "grid": region.grid,
        "radius": region.radius,
        "halfwidth": region.halfwidth,
        "matrices": region.matrices.tolist(),
        "adjacency": region.adjacency.tolist(),
        "dist": region.dist.tolist(),
        "positions": region.positions.tolist(),
        "guideline": {
            "cell_ids": gl.cell_ids.tolist(),
            "positions": gl.positions.tolist(),
            "left_sides": gl.left_sides.tolist(),
            "right_sides": gl.right_sides.tolist(),
            "segment_halfwidth": gl.segment_halfwidth,
            "normals": [n.tolist() for n in gl.normals],
            "frame_p0": gl.frame_p0.tolist(),
            "frame_w": gl.frame_w.tolist(),
            "mirror_ids": None if gl.mirror_ids is None else gl.mirror_ids.tolist(),
        },
    }
    return json.dumps(doc)


def region_from_json(text: str) -> Region:
    doc = json.loads(text)
    g = doc["guideline"]
    guideline = Guideline(
        cell_ids=np.array(g["cell_ids"], dtype=np.int32),
        positions=np.array(g["positions"], dtype=np.int32),
        left_sides=np.array(g["left_sides"], dtype=np.int32),
        right_sides=np.array(g["right_sides"], dtype=np.int32),
        segment_halfwidth=int(g["segment_halfwidth"]),
        normals=[np.array(n) for n in g["normals"]],
        frame_p0=np.array(g["frame_p0"]),
        frame_w=np.array(g["frame_w"]),
        mirror_ids=None if g["mirror_ids"] is None
        else np.array(g["mirror_ids"], dtype=np.int32),
    )
    return Region(
        grid=doc["grid"],
        radius=int(doc["radius"]),
        halfwidth=int(doc["halfwidth"]),
        matrices=np.array(doc["matrices"]),
        adjacency=np.array(doc["adjacency"], dtype=np.int32),
        dist=np.array(doc["dist"], dtype=np.int32),
        positions=np.array(doc["positions"], dtype=np.int32),
        guideline=guideline,
    )
