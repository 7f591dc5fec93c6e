from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from hypca import symmetry as sym

GOLDEN = Path(__file__).parent / "golden"

# face neighbour rings, frozen; every row read clockwise from outside
EXPECTED_RINGS = (
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


def test_face_rings_row_for_row():
    assert sym.FACE_RINGS == EXPECTED_RINGS


def test_opposite_faces_pair_up():
    for a, b in sym.OPPOSITE_FACE.items():
        assert sym.OPPOSITE_FACE[b] == a
        assert b not in sym.FACE_RINGS[a]
    assert sorted(sym.OPPOSITE_FACE) == list(range(12))


def test_sixty_distinct_motions_identity_first():
    motions = sym.all_motions()
    assert len(motions) == 60
    assert len(set(motions)) == 60
    assert motions[0] == tuple(range(12))
    for m in motions:
        assert sym.is_adjacency_automorphism(m)


def test_group_closed_with_inverses():
    motions = set(sym.all_motions())
    for a in motions:
        assert sym.inverse(a) in motions
        assert sym.compose(a, sym.inverse(a)) == tuple(range(12))
    for a in list(motions)[:12]:
        for b in motions:
            assert sym.compose(a, b) in motions


def test_motion_determined_by_two_faces():
    seen = {(m[0], m[1]) for m in sym.all_motions()}
    assert len(seen) == 60
    m = sym.complete_motion(3, 8)
    assert m[0] == 3 and m[1] == 8
    with pytest.raises(ValueError):
        sym.complete_motion(3, 6)   # 6 is not a neighbour of 3


def test_motions_table_golden():
    assert sym.motions_table_text() == (GOLDEN / "motions.txt").read_text()


@given(st.integers(0, 59), st.lists(st.integers(0, 4), min_size=12,
                                    max_size=12))
def test_spherical_canonical_is_orbit_invariant(k, values):
    values = tuple(values)
    m = sym.all_motions()[k]
    assert sym.canonical_spherical(values) == \
        sym.canonical_spherical(sym.rotate_faces(values, m))


@given(st.integers(0, 6), st.lists(st.integers(0, 3), min_size=7,
                                   max_size=7))
def test_cyclic_canonical_is_shift_invariant(k, values):
    values = tuple(values)
    shifted = tuple(values[(i + k) % 7] for i in range(7))
    assert sym.canonical_cyclic(values) == sym.canonical_cyclic(shifted)


@given(st.integers(0, 59), st.integers(0, 2),
       st.lists(st.integers(0, 2), min_size=12, max_size=12))
def test_minimal_form_constant_on_orbit(k, self_state, nbrs):
    ctx = sym.RuleContext(self_state, tuple(nbrs))
    rotated = sym.rotated_context(ctx, sym.all_motions()[k])
    assert sym.minimal_form(ctx) == sym.minimal_form(rotated)


def test_minimal_form_respects_state_order():
    ctx = sym.RuleContext(0, (2, 1, 1, 1, 1))
    plain = sym.minimal_form(ctx)
    assert plain.neighbor_states == (1, 1, 1, 1, 2)
    reordered = sym.minimal_form(ctx, state_order=[2, 1, 0])
    assert reordered.neighbor_states == (2, 1, 1, 1, 1)


def test_invariance_checker_flags_disagreeing_orbit():
    a = sym.RuleContext(0, (1, 0, 0, 0, 0))
    b = sym.RuleContext(0, (0, 1, 0, 0, 0))    # same orbit, shifted
    clean = sym.check_rotation_invariance([(a, 1), (b, 1)])
    assert clean == []
    bad = sym.check_rotation_invariance([(a, 1), (b, 0)])
    assert len(bad) == 1
    assert {out for _, out in bad[0]} == {0, 1}


def test_rotated_context_arity_guards():
    flat = sym.RuleContext(0, (0,) * 5)
    solid = sym.RuleContext(0, (0,) * 12)
    with pytest.raises(ValueError):
        sym.rotated_context(flat, sym.all_motions()[1])
    with pytest.raises(ValueError):
        sym.rotated_context(solid, 3)
    with pytest.raises(ValueError):
        sym.RuleContext(0, (0,) * 6)
