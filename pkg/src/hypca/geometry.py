"""Hyperboloid-model primitives shared by the tiling generators.

Points live on the upper sheet of <x, x> = 1 where the bilinear form has
signature (+, -, ..., -).  Geodesic lines (2D) and planes (3D) are stored as
unit spacelike normals with <n, n> = -1; a point x lies on the object iff
<x, n> = 0.
"""
from __future__ import annotations

import numpy as np


def mdot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minkowski inner product, broadcasting over leading axes."""
    prod = a * b
    return prod[..., 0] - prod[..., 1:].sum(axis=-1)


def normalize_point(x: np.ndarray) -> np.ndarray:
    """Scale a timelike vector back onto the unit hyperboloid."""
    return x / np.sqrt(mdot(x, x))[..., None]


def normalize_spacelike(n: np.ndarray) -> np.ndarray:
    return n / np.sqrt(-mdot(n, n))[..., None]


def reflection(n: np.ndarray) -> np.ndarray:
    """Lorentz reflection across the plane with unit spacelike normal n."""
    d = n.shape[-1]
    j = np.ones(d)
    j[1:] = -1.0
    return np.eye(d) + 2.0 * np.outer(n, n * j)


def plane_normal_through(p: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Unit normal of the geodesic at distance d along `direction` from the
    base point (1, 0, ...), orthogonal to that geodesic ray.

    `p` is the foot distance, `direction` a Euclidean unit vector in the
    spatial coordinates.
    """
    d = direction.shape[-1] + 1
    n = np.zeros(d)
    n[0] = np.sinh(p)
    n[1:] = np.cosh(p) * direction
    return n


def point_at(dist: float, direction: np.ndarray) -> np.ndarray:
    """Hyperboloid point at hyperbolic distance `dist` from the base point."""
    d = direction.shape[-1] + 1
    x = np.zeros(d)
    x[0] = np.cosh(dist)
    x[1:] = np.sinh(dist) * direction
    return x


def line_frame(normals: list[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (timelike, spacelike) frame spanning the geodesic line cut
    out by the given plane normals (one normal in 2D, two in 3D).

    Returns (p0, w) with <p0,p0> = 1, <w,w> = -1, <p0,w> = 0.  Points of the
    line are cosh(t) p0 + sinh(t) w.
    """
    d = normals[0].shape[-1]
    j = np.ones(d)
    j[1:] = -1.0
    rows = np.stack([n * j for n in normals])
    basis = _null_space(rows)
    if basis.shape[1] != 2:
        raise ValueError("normals do not cut out a line")
    a, b = basis[:, 0], basis[:, 1]
    # Gram step in the Minkowski form; the 2-subspace has signature (+, -).
    if mdot(a, a) < 0:
        a, b = b, a
    if mdot(a, a) <= 0:
        a = a + b if mdot(a + b, a + b) > 0 else a - b
    p0 = normalize_point(a if a[0] > 0 else -a)
    b = b - mdot(b, p0) * p0
    w = normalize_spacelike(b)
    return p0, w


def _null_space(rows: np.ndarray) -> np.ndarray:
    _, s, vt = np.linalg.svd(rows, full_matrices=True)
    rank = int((s > 1e-9 * s.max()).sum())
    return vt[rank:].T


def line_parameter(x: np.ndarray, p0: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Signed position along a line of the foot of the perpendicular from x."""
    return np.arctanh(np.clip(mdot(x, w) / mdot(x, p0), -1 + 1e-15, 1 - 1e-15))


def to_poincare_disk(x: np.ndarray) -> np.ndarray:
    """Project hyperboloid points to the Poincare disk/ball."""
    return x[..., 1:] / (1.0 + x[..., 0:1])


def geodesic_points(p: np.ndarray, q: np.ndarray, count: int) -> np.ndarray:
    """`count` evenly spaced points of the geodesic segment from p to q."""
    c = float(np.clip(mdot(p, q), 1.0, None))
    d = np.arccosh(c)
    ts = np.linspace(0.0, 1.0, count)
    if d < 1e-12:
        return np.outer(1.0 - ts, p) + np.outer(ts, q)
    pts = (np.outer(np.sinh((1.0 - ts) * d), p) + np.outer(np.sinh(ts * d), q)) / np.sinh(d)
    return pts


class CenterIndex:
    """Tolerance-bucketed index of cell centers.

    Centers of distinct tiles are separated by at least twice the cell
    inradius (order 1 in absolute coordinates, at every depth this package
    supports), while floating-point drift along a generation chain stays many
    orders of magnitude below the bucket size.  A candidate is looked up in
    every bucket its tolerance box straddles, so duplicates are never missed.
    """

    def __init__(self, bucket: float = 0.125, tol: float = 2e-3):
        self.bucket = bucket
        self.tol = tol
        self._table: dict[tuple, int] = {}
        self._coords: list[np.ndarray] = []

    def _keys(self, x: np.ndarray):
        lo = np.floor((x - self.tol) / self.bucket).astype(np.int64)
        hi = np.floor((x + self.tol) / self.bucket).astype(np.int64)
        if np.array_equal(lo, hi):
            yield tuple(lo)
            return
        ranges = [range(int(a), int(b) + 1) for a, b in zip(lo, hi)]
        idx = [0] * len(ranges)
        while True:
            yield tuple(r[i] for r, i in zip(ranges, idx))
            k = len(idx) - 1
            while k >= 0:
                idx[k] += 1
                if idx[k] < len(ranges[k]):
                    break
                idx[k] = 0
                k -= 1
            if k < 0:
                return

    def find(self, x: np.ndarray) -> int | None:
        for key in self._keys(x):
            hit = self._table.get(key)
            if hit is not None and np.max(np.abs(self._coords[hit] - x)) < self.tol:
                return hit
        return None

    def insert(self, x: np.ndarray, ident: int) -> None:
        self._coords.append(np.asarray(x, dtype=float))
        key = tuple(np.floor(x / self.bucket).astype(np.int64))
        self._table[key] = ident

    def nearest_distinct_gap(self) -> float:
        """Smallest coordinate-space distance between two indexed centers.

        Used by the dedup soundness check; scans the 3^d neighbourhood of
        every occupied bucket.
        """
        coords = np.stack(self._coords)
        best = np.inf
        keys = {}
        for i, x in enumerate(coords):
            keys.setdefault(tuple(np.floor(x / self.bucket).astype(np.int64)), []).append(i)
        offsets = [np.array(o) for o in np.ndindex(*([3] * coords.shape[1]))]
        for key, members in keys.items():
            base = np.array(key)
            cand = []
            for off in offsets:
                cand.extend(keys.get(tuple(base + off - 1), []))
            for i in members:
                for k in cand:
                    if k != i:
                        best = min(best, float(np.max(np.abs(coords[i] - coords[k]))))
        return best
