from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypca import ca1d, embed, engine
from hypca import symmetry as sym

GOLDEN = Path(__file__).parent / "golden"


def test_extra_state_counts(rule110):
    for grid in ("pentagrid", "heptagrid", "dodecagrid"):
        b = embed.embed_extra_state(rule110, grid)
        assert b.n_states == 3
        assert b.blue == 2 and b.letters == {0, 1}


def test_compact_state_counts(rule110):
    for grid in ("pentagrid", "heptagrid", "dodecagrid"):
        b = embed.embed_compact(rule110, grid)
        assert b.n_states == 2
        assert b.blue is None and b.letters == {0, 1}


def test_extra_pattern_layout(rule110):
    b = embed.embed_extra_state(rule110, "pentagrid")
    p = b.pattern
    assert (p.right_index - p.left_index) % 5 == 3
    assert sum(s.kind == "fixed" for s in p.slots) == 3
    b = embed.embed_extra_state(rule110, "heptagrid")
    p = b.pattern
    assert (p.right_index - p.left_index) % 7 == 4
    assert sum(s.kind == "fixed" for s in p.slots) == 5
    b = embed.embed_extra_state(rule110, "dodecagrid")
    p = b.pattern
    assert p.left_index == 1 and p.right_index == 4
    assert p.slots[0].kind == "letter"
    assert sum(s.kind == "fixed" for s in p.slots) == 9


def test_compact_pattern_layout(rule110):
    b = embed.embed_compact(rule110, "pentagrid")
    kinds = [(s.kind, s.state) for s in b.pattern.slots]
    assert kinds == [("left", None), ("fixed", 1), ("fixed", 0),
                     ("right", None), ("fixed", 0)]
    b = embed.embed_compact(rule110, "dodecagrid")
    marked = {i for i, s in enumerate(b.pattern.slots)
              if s.kind == "fixed" and s.state == 1}
    assert marked == {0, 3, 9, 10}
    assert b.pattern.left_index == 1 and b.pattern.right_index == 4


def test_pentagrid_compact_needs_fixable():
    with pytest.raises(embed.NotFixable):
        embed.embed_compact(ca1d.elementary(30), "pentagrid")
    # fine on the heptagrid, which has no fixability gate
    embed.embed_compact(ca1d.elementary(30), "heptagrid")


def test_compact_needs_two_states():
    one = ca1d.Rule1D(1, np.zeros((1, 1, 1), dtype=np.int64))
    with pytest.raises(ValueError):
        embed.embed_compact(one, "heptagrid")
    # the extra-state construction accepts a single-letter source
    b = embed.embed_extra_state(one, "pentagrid")
    assert b.n_states == 2


EXPANSION_SIZES = {
    ("extra", "pentagrid"): 40,
    ("extra", "heptagrid"): 56,
    ("extra", "dodecagrid"): 960,
    ("compact", "pentagrid"): 40,
    ("compact", "heptagrid"): 56,
    ("compact", "dodecagrid"): 480,
}


def test_expansion_sizes_and_invariance(all_six):
    for key, b in all_six.items():
        rules = embed.expanded_rules(b)
        assert len(rules) == EXPANSION_SIZES[key], key
        assert embed.check_invariance(b) == [], key


def test_expansion_contains_action_rule(rule110):
    b = embed.embed_compact(rule110, "pentagrid")
    rules = {(c.self_state, c.neighbor_states): out
             for c, out in embed.expanded_rules(b)}
    # the identity alignment of the pattern with both letters 1
    assert rules[(1, (1, 1, 0, 1, 0))] == rule110.apply(1, 1, 1)


def test_match_unique_on_tape_context(rule110):
    b = embed.embed_extra_state(rule110, "pentagrid")
    blue = b.blue
    nb = (1, blue, blue, 0, blue)       # left letter 1, right letter 0
    assert embed.match_alignments(b, 1, nb) == [(1, 0)]
    assert embed.match_alignments(b, blue, nb) == []
    # a context with too few letters cannot match
    assert embed.match_alignments(b, 1, (blue,) * 5) == []


@given(st.integers(0, 4), st.integers(0, 1),
       st.lists(st.integers(0, 1), min_size=2, max_size=2))
def test_match_readings_rotation_invariant_2d(k, self_state, letters):
    b = embed.embed_compact(ca1d.elementary(110), "pentagrid")
    nb = (letters[0], 1, 0, letters[1], 0)
    rotated = tuple(nb[(i + k) % 5] for i in range(5))
    assert sorted(embed.match_alignments(b, self_state, nb)) == \
        sorted(embed.match_alignments(b, self_state, rotated))


@given(st.integers(0, 59), st.integers(0, 1),
       st.lists(st.integers(0, 1), min_size=3, max_size=3))
@settings(max_examples=40, deadline=None)
def test_match_readings_rotation_invariant_3d(k, self_state, letters):
    b = embed.embed_extra_state(ca1d.elementary(110), "dodecagrid")
    nb = [b.blue] * 12
    nb[0], nb[1], nb[4] = letters
    m = sym.all_motions()[k]
    rotated = tuple(nb[m[i]] for i in range(12))
    assert sorted(embed.match_alignments(b, self_state, tuple(nb))) == \
        sorted(embed.match_alignments(b, self_state, rotated))


def test_central_row_goldens(rule110):
    assert embed.central_context_row(
        embed.embed_compact(rule110, "pentagrid")) == "Y | B W Z W X"
    assert embed.central_context_row(
        embed.embed_compact(rule110, "heptagrid")) == "Y | X B W B Z W W"


# frozen admissible-context rows, as (self, neighbours); neighbour order
# is only meaningful up to rotation, so rows are compared by
# rotation-canonical content
TABLE_ROWS_PENTAGRID = [
    ("Y", ("B", "W", "Z", "W", "X")),
    ("B", ("Y", "W", "W", "W", "W")),
    ("W", ("B", "W", "W", "W", "W")),
    ("W", ("Y", "W", "W", "W", "B")),
    ("B", ("W", "W", "W", "W", "Z")),
    ("Z", ("Y", "B", "W", "T", "W")),
    ("W", ("Z", "W", "W", "W", "W")),
    ("W", ("Y", "W", "W", "W", "W")),
    ("W", ("W", "W", "W", "W", "X")),
    ("X", ("Y", "W", "U", "B", "W")),
    ("W", ("X", "W", "W", "W", "B")),
]
TABLE_ROWS_HEPTAGRID = [
    ("Y", ("X", "B", "W", "B", "Z", "W", "W")),
    ("X", ("Y", "W", "W", "U", "B", "W", "B")),
    ("B", ("Y", "X", "W", "W", "W", "W", "W")),
    ("W", ("Y", "B", "W", "W", "W", "W", "B")),
    ("B", ("Y", "W", "W", "W", "W", "W", "Z")),
    ("Z", ("Y", "B", "W", "B", "T", "W", "W")),
    ("W", ("Y", "Z", "W", "W", "W", "W", "W")),
    ("W", ("Y", "W", "W", "W", "W", "W", "X")),
]


def _canon_row(self_name, nbrs):
    return f"{self_name} | " + " ".join(sym.canonical_cyclic(tuple(nbrs)))


@pytest.mark.parametrize("grid,table,golden", [
    ("pentagrid", TABLE_ROWS_PENTAGRID, "table2_pentagrid.txt"),
    ("heptagrid", TABLE_ROWS_HEPTAGRID, "table3_heptagrid.txt"),
])
def test_symbolic_rows_cover_frozen_rows(region_of, rule110, grid,
                                         table, golden):
    b = embed.embed_compact(rule110, grid)
    rows = embed.symbolic_rows(b, region_of(grid, 3, 2))
    generated = set(rows)
    for self_name, nbrs in table:
        assert _canon_row(self_name, nbrs) in generated, (self_name, nbrs)
    assert "\n".join(rows) + "\n" == (GOLDEN / golden).read_text()


@pytest.mark.parametrize("method,grid", [
    ("extra", "pentagrid"), ("extra", "heptagrid"), ("extra", "dodecagrid"),
    ("compact", "pentagrid"), ("compact", "heptagrid"),
    ("compact", "dodecagrid"),
])
def test_uniqueness_scan_clean(region_of, all_six, method, grid):
    b = all_six[(method, grid)]
    r = region_of(grid, 3, 1 if grid == "dodecagrid" else 2)
    init = engine.init_configuration(r, b, [1])
    report = embed.verify_unique_applicability(b, r, init, 4)
    assert report.ok, report.text()
    assert report.matched_cells > 0


def test_unrepaired_solid_pattern_is_ambiguous(region_of, rule110):
    """Pinning the reflected-row slot kills the free letter that breaks the
    left/right symmetry; the context then reads both ways."""
    good = embed.embed_extra_state(rule110, "dodecagrid")
    slots = list(good.pattern.slots)
    slots[0] = embed.fixed(good.blue)
    bad = embed.HcaAutomaton(
        grid="dodecagrid", n_states=good.n_states,
        patterns=(embed.ContextPattern(tuple(slots)),),
        action=rule110, state_map=dict(good.state_map),
        letters=good.letters, kind="extra", blue=good.blue,
        padding_state=good.padding_state, name="unrepaired")
    r = region_of("dodecagrid", 3, 1)
    init = engine.init_configuration(r, good, [1])
    for m in r.guideline.mirror_ids:
        if m >= 0:
            init.states[int(m)] = good.blue
    report = embed.verify_unique_applicability(bad, r, init, 2)
    assert any(v.kind == "ambiguous" for v in report.violations)
    with pytest.raises(engine.AmbiguousMatch):
        engine.step_hca(bad, r, init)


def test_automaton_json_round_trip(all_six):
    for b in all_six.values():
        b2 = embed.automaton_from_json(embed.automaton_to_json(b))
        assert b2.grid == b.grid and b2.n_states == b.n_states
        assert b2.patterns == b.patterns and b2.state_map == b.state_map
        assert b2.letters == b.letters and b2.kind == b.kind
        assert b2.blue == b.blue and b2.marker_scheme == b.marker_scheme
        assert b2.padding_state == b.padding_state
        assert np.array_equal(b2.action.table, b.action.table)


def test_pattern_needs_left_and_right():
    with pytest.raises(ValueError):
        embed.ContextPattern((embed.LEFT,) * 5)
    with pytest.raises(ValueError):
        embed.ContextPattern((embed.fixed(0),) * 5)
