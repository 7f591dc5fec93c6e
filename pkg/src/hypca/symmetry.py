"""Rotation groups of the supported cells, as pure face combinatorics.

For the polygonal grids the rotation group of a cell is the cyclic group on
its p sides.  For the right-angled dodecahedron it is the rotation group of
the dodecahedron, 60 elements, each represented as a permutation of the face
numbers 0..11.

A motion is stored as a tuple ``m`` of 12 face numbers with ``m[i]`` the face
onto which face ``i`` is carried.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

# Faces around each face, in clockwise order as seen from outside the
# dodecahedron.  Face 0 is the bottom, faces 1..5 the lower belt, 6..10 the
# upper belt (face i touching faces i-5 and i-4 of the lower belt), 11 the
# top.
FACE_RINGS: tuple[tuple[int, int, int, int, int], ...] = (
    (1, 5, 4, 3, 2),
    (0, 2, 7, 6, 5),
    (0, 3, 8, 7, 1),
    (0, 4, 9, 8, 2),
    (0, 5, 10, 9, 3),
    (0, 1, 6, 10, 4),
    (1, 7, 11, 10, 5),
    (1, 2, 8, 11, 6),
    (2, 3, 9, 11, 7),
    (3, 4, 10, 11, 8),
    (4, 5, 6, 11, 9),
    (6, 7, 8, 9, 10),
)

OPPOSITE_FACE: dict[int, int] = {
    0: 11, 11: 0, 1: 9, 9: 1, 2: 10, 10: 2, 3: 6, 6: 3, 4: 7, 7: 4, 5: 8, 8: 5,
}

Motion = tuple[int, ...]


def _ring_from(face: int, start: int) -> tuple[int, ...]:
    ring = FACE_RINGS[face]
    k = ring.index(start)
    return tuple(ring[(k + j) % 5] for j in range(5))


def complete_motion(f0: int, f1: int) -> Motion:
    """The unique rotation carrying face 0 onto f0 and face 1 onto f1.

    f1 must be adjacent to f0.  The permutation is completed by matching the
    ring of a face, anchored at one already-determined neighbour, against the
    ring of its image.
    """
    if f1 not in FACE_RINGS[f0]:
        raise ValueError(f"faces {f0} and {f1} are not adjacent")
    mu: dict[int, int] = {0: f0, 1: f1}
    for anchor in (1, 5, 7, 8):
        known = [f for f in FACE_RINGS[anchor] if f in mu]
        src = _ring_from(anchor, known[0])
        dst = _ring_from(mu[anchor], mu[known[0]])
        for s, d in zip(src, dst):
            if s in mu:
                if mu[s] != d:
                    raise AssertionError("inconsistent ring alignment")
            else:
                mu[s] = d
    return tuple(mu[i] for i in range(12))


@lru_cache(maxsize=1)
def all_motions() -> tuple[Motion, ...]:
    """All 60 rotations, identity first."""
    out = [complete_motion(f0, f1) for f0 in range(12) for f1 in FACE_RINGS[f0]]
    ident = tuple(range(12))
    out.sort(key=lambda m: (m != ident, m))
    return tuple(out)


def compose(a: Motion, b: Motion) -> Motion:
    """a after b: (a . b)(i) = a[b[i]]."""
    return tuple(a[b[i]] for i in range(12))


def inverse(a: Motion) -> Motion:
    inv = [0] * 12
    for i, j in enumerate(a):
        inv[j] = i
    return tuple(inv)


def is_adjacency_automorphism(m: Motion) -> bool:
    """Does m preserve face adjacency with clockwise ring order?"""
    if sorted(m) != list(range(12)):
        return False
    for f in range(12):
        image = tuple(m[x] for x in FACE_RINGS[f])
        if set(image) != set(FACE_RINGS[m[f]]):
            return False
        if _ring_from(m[f], image[0]) != image:
            return False
    return True


def rotate_faces(values: tuple, m: Motion) -> tuple:
    """Re-read a face-indexed tuple after applying motion m to the cell."""
    return tuple(values[m[i]] for i in range(12))


def canonical_spherical(values: tuple) -> tuple:
    """Lexicographically smallest re-reading over the 60 rotations."""
    return min(rotate_faces(values, m) for m in all_motions())


def canonical_cyclic(values: tuple) -> tuple:
    """Lexicographically smallest cyclic shift of a side-indexed tuple."""
    p = len(values)
    return min(tuple(values[(i + k) % p] for i in range(p)) for k in range(p))


def canonical_context(self_state: int, neighbors: tuple) -> tuple:
    """Orbit representative of a (cell state, neighbor states) context."""
    if len(neighbors) == 12:
        return (self_state, canonical_spherical(neighbors))
    return (self_state, canonical_cyclic(neighbors))


@dataclass(frozen=True)
class RuleContext:
    """The neighbourhood a transition rule reads: the cell's own state plus
    the states of its neighbours in side (or face) order."""

    self_state: int
    neighbor_states: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "neighbor_states", tuple(self.neighbor_states))
        if len(self.neighbor_states) not in (5, 7, 12):
            raise ValueError(f"unsupported arity {len(self.neighbor_states)}")


def rotated_context(ctx: RuleContext, motion) -> RuleContext:
    """Re-read a context after rotating the cell.

    For 5 or 7 neighbours `motion` is a cyclic shift count; for 12 it is a
    Motion tuple.
    """
    nb = ctx.neighbor_states
    if len(nb) == 12:
        if not isinstance(motion, tuple) or len(motion) != 12:
            raise ValueError("a 12-neighbour context needs a face permutation")
        return RuleContext(ctx.self_state, rotate_faces(nb, motion))
    if isinstance(motion, tuple):
        raise ValueError("a cyclic context needs a shift count")
    p = len(nb)
    k = motion % p
    return RuleContext(ctx.self_state, tuple(nb[(i + k) % p] for i in range(p)))


def context_orbit(ctx: RuleContext) -> list[RuleContext]:
    """All distinct re-readings of a context under the cell's rotations."""
    if len(ctx.neighbor_states) == 12:
        motions: Sequence = all_motions()
    else:
        motions = range(len(ctx.neighbor_states))
    seen = []
    for m in motions:
        r = rotated_context(ctx, m)
        if r not in seen:
            seen.append(r)
    return seen


def minimal_form(ctx: RuleContext, grid: str | None = None,
                 state_order: Sequence[int] | None = None) -> RuleContext:
    """The least re-reading of `ctx` over the cell's rotations.

    `state_order` lists the states from smallest to largest; by default the
    numeric values compare directly.  The result is the same for every
    context in a rotation orbit.
    """
    if state_order is None:
        def rank(s: int) -> int:
            return s
    else:
        ranks = {s: i for i, s in enumerate(state_order)}
        if len(ranks) != len(tuple(state_order)):
            raise ValueError("state_order must not repeat states")

        def rank(s: int) -> int:
            return ranks[s]

    def key(c: RuleContext) -> tuple:
        return (rank(c.self_state), tuple(rank(s) for s in c.neighbor_states))

    return min(context_orbit(ctx), key=key)


def check_rotation_invariance(
    rules: Iterable[tuple[RuleContext, int]],
    grid: str | None = None,
    state_order: Sequence[int] | None = None,
) -> list[list[tuple[RuleContext, int]]]:
    """Group rules by context orbit and report the groups whose outcomes
    disagree.

    `rules` yields (context, new_state) pairs.  Each reported group lists
    the offending rules themselves; an empty list means the rule set is
    rotation invariant.
    """
    groups: dict[tuple, list[tuple[RuleContext, int]]] = {}
    for ctx, new_state in rules:
        m = minimal_form(ctx, grid, state_order)
        key = (m.self_state, m.neighbor_states)
        groups.setdefault(key, []).append((ctx, new_state))
    conflicts = []
    for key in sorted(groups):
        members = groups[key]
        if len({out for _, out in members}) > 1:
            conflicts.append(members)
    return conflicts


def motions_table_text() -> str:
    """All 60 rotations as lines 'f0 f1 : images of faces 0..11'."""
    lines = []
    for m in all_motions():
        imgs = " ".join(f"{x:2d}" for x in m)
        lines.append(f"{m[0]:2d} {m[1]:2d} : {imgs}")
    return "\n".join(lines) + "\n"
