"""Transformations of a 1D automaton into a tiling automaton.

Two constructions are provided.  The extra-state construction works on all
three grids and adds one state: every cell off the tape line holds the new
state, and a tape cell recognizes itself by seeing that state everywhere
except where its two tape neighbours sit.  The compact construction keeps
the state count of the source automaton by marking the line with cells held
in the image of a designated non-quiescent state; on the pentagrid it needs
the source automaton to be fixable, so that the markers and the background
hold still under the rules that unavoidably fire on them.

A produced automaton is intensional: one admissible context pattern, an
action applied as (left, self, right) when the pattern matches in exactly
one rotated alignment, and state-unchanged everywhere else.  Matching is
rotation invariant by construction; `expanded_rules` unfolds the pattern
into explicit rules so the invariance checker can say so independently.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import ca1d
from . import symmetry as sym
from .region import MarkerScheme, Region

GRID_SIDES = {"pentagrid": 5, "heptagrid": 7, "dodecagrid": 12}


class NotFixable(ValueError):
    """The pentagrid compact construction needs a fixable source rule."""


@dataclass(frozen=True)
class Slot:
    """One neighbour position of a context pattern.

    kind "fixed" pins an exact state; "left" and "right" accept any letter
    and name the 1D neighbours the action reads; "letter" accepts any
    letter and is ignored by the action.
    """

    kind: str
    state: int | None = None

    def accepts(self, value: int, letters: frozenset[int]) -> bool:
        if self.kind == "fixed":
            return value == self.state
        return value in letters


LEFT = Slot("left")
RIGHT = Slot("right")
FREE_LETTER = Slot("letter")


def fixed(state: int) -> Slot:
    return Slot("fixed", state)


@dataclass(frozen=True)
class ContextPattern:
    slots: tuple[Slot, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "slots", tuple(self.slots))
        kinds = [s.kind for s in self.slots]
        if kinds.count("left") != 1 or kinds.count("right") != 1:
            raise ValueError("pattern needs exactly one left and one right slot")

    @property
    def left_index(self) -> int:
        return next(i for i, s in enumerate(self.slots) if s.kind == "left")

    @property
    def right_index(self) -> int:
        return next(i for i, s in enumerate(self.slots) if s.kind == "right")

    def free_indices(self) -> list[int]:
        return [i for i, s in enumerate(self.slots) if s.kind != "fixed"]


@dataclass(frozen=True)
class HcaAutomaton:
    """A tiling automaton: one admissible pattern over a grid, an action,
    and the default of leaving the state unchanged."""

    grid: str
    n_states: int
    patterns: tuple[ContextPattern, ...]
    action: ca1d.Rule1D
    state_map: dict[int, int]
    letters: frozenset[int]
    kind: str                           # "extra" or "compact"
    blue: int | None = None             # the added state, extra kind only
    marker_scheme: MarkerScheme | None = None
    padding_state: int | None = None    # source state used to pad the tape
    name: str = ""

    def __post_init__(self) -> None:
        if len(self.patterns) != 1:
            raise ValueError("exactly one admissible pattern is supported")
        if len(self.patterns[0].slots) != GRID_SIDES[self.grid]:
            raise ValueError("pattern arity does not fit the grid")

    @property
    def pattern(self) -> ContextPattern:
        return self.patterns[0]

    def inverse_map(self) -> dict[int, int]:
        return {v: k for k, v in self.state_map.items()}

    def encode(self, a_state: int) -> int:
        return self.state_map[a_state]

    def apply_action(self, left: int, self_state: int, right: int) -> int:
        """Action on encoded states: decode, run the source rule, encode."""
        inv = self.inverse_map()
        return self.encode(
            self.action.apply(inv[left], inv[self_state], inv[right]))


# slot layouts, one per construction and grid, left slot first; the fixed
# positions are relative to the left slot for the polygonal grids and
# absolute face numbers for the dodecagrid
def _extra_pattern(grid: str, blue: int) -> ContextPattern:
    if grid == "pentagrid":
        slots = [LEFT, fixed(blue), fixed(blue), RIGHT, fixed(blue)]
    elif grid == "heptagrid":
        slots = [LEFT, fixed(blue), fixed(blue), fixed(blue), RIGHT,
                 fixed(blue), fixed(blue)]
    else:
        slots = [fixed(blue)] * 12
        slots[0] = FREE_LETTER          # the reflected row carries letters
        slots[1] = LEFT
        slots[4] = RIGHT
    return ContextPattern(tuple(slots))


def _compact_pattern(grid: str, w: int, b: int) -> ContextPattern:
    if grid == "pentagrid":
        slots = [LEFT, fixed(b), fixed(w), RIGHT, fixed(w)]
    elif grid == "heptagrid":
        slots = [LEFT, fixed(b), fixed(w), fixed(b), RIGHT, fixed(w), fixed(w)]
    else:
        slots = [fixed(w)] * 12
        for f in (0, 3, 9, 10):
            slots[f] = fixed(b)
        slots[1] = LEFT
        slots[4] = RIGHT
    return ContextPattern(tuple(slots))


def embed_extra_state(rule: ca1d.Rule1D, grid: str) -> HcaAutomaton:
    """Add one state and use it to carve the tape line out of the tiling.

    Works for every source rule; the produced automaton has n + 1 states,
    the letters keep their values and the added state is the largest.
    """
    if grid not in GRID_SIDES:
        raise ValueError(f"unknown grid {grid!r}")
    n = rule.n
    blue = n
    quiescent = ca1d.quiescent_states(rule)
    return HcaAutomaton(
        grid=grid,
        n_states=n + 1,
        patterns=(_extra_pattern(grid, blue),),
        action=rule,
        state_map={s: s for s in rule.states()},
        letters=frozenset(range(n)),
        kind="extra",
        blue=blue,
        padding_state=quiescent[0] if quiescent else None,
        name=f"extra[{rule.name or rule.n}] on {grid}",
    )


def embed_compact(rule: ca1d.Rule1D, grid: str) -> HcaAutomaton:
    """Keep the state count and mark the tape line with red neighbours.

    On the pentagrid the source rule must be fixable; the witness pair
    (q, u) supplies the background and marker states.  On the heptagrid
    and the dodecagrid any rule with at least two states works, with
    states 0 and 1 playing those roles.
    """
    if grid not in GRID_SIDES:
        raise ValueError(f"unknown grid {grid!r}")
    if grid == "pentagrid":
        ok, witness = ca1d.is_fixable(rule)
        if not ok:
            raise NotFixable(
                "the pentagrid compact construction needs a fixable rule"
            )
        q, u = witness
        scheme = MarkerScheme.COMPACT_PENTAGRID
    else:
        if rule.n < 2:
            raise ValueError("the compact construction needs at least 2 states")
        q, u = 0, 1
        scheme = (MarkerScheme.COMPACT_HEPTAGRID if grid == "heptagrid"
                  else MarkerScheme.COMPACT_DODECAGRID)
    return HcaAutomaton(
        grid=grid,
        n_states=rule.n,
        patterns=(_compact_pattern(grid, q, u),),
        action=rule,
        state_map={s: s for s in rule.states()},
        letters=frozenset(rule.states()),
        kind="compact",
        marker_scheme=scheme,
        padding_state=q,
        name=f"compact[{rule.name or rule.n}] on {grid}",
    )


def alignments(automaton: HcaAutomaton):
    """All rotated readings the matcher tries: shift counts for the
    polygonal grids, face permutations for the dodecagrid."""
    p = GRID_SIDES[automaton.grid]
    if p == 12:
        return sym.all_motions()
    return range(p)


def read_aligned(neighbors, alignment, i: int) -> int:
    """The neighbour a pattern slot i sees under an alignment."""
    if isinstance(alignment, tuple):
        return neighbors[alignment[i]]
    return neighbors[(i + alignment) % len(neighbors)]


def match_alignments(automaton: HcaAutomaton, self_state: int,
                     neighbors) -> list[tuple[int, int]]:
    """All (left, right) readings under which the pattern matches.

    Duplicates are collapsed; a context is admissible when exactly one
    reading remains.
    """
    if self_state not in automaton.letters:
        return []
    pat = automaton.pattern
    letters = automaton.letters
    found: list[tuple[int, int]] = []
    for al in alignments(automaton):
        for i, slot in enumerate(pat.slots):
            if not slot.accepts(read_aligned(neighbors, al, i), letters):
                break
        else:
            lr = (read_aligned(neighbors, al, pat.left_index),
                  read_aligned(neighbors, al, pat.right_index))
            if lr not in found:
                found.append(lr)
    return found


def expanded_rules(automaton: HcaAutomaton) -> list[tuple[sym.RuleContext, int]]:
    """The pattern unfolded into explicit (context, new state) rules over
    every rotated alignment and every letter assignment."""
    pat = automaton.pattern
    letters = sorted(automaton.letters)
    free = pat.free_indices()
    rules: list[tuple[sym.RuleContext, int]] = []
    seen: set[tuple] = set()
    for al in alignments(automaton):
        placed = [0] * len(pat.slots)
        for i, slot in enumerate(pat.slots):
            if slot.kind == "fixed":
                if isinstance(al, tuple):
                    placed[al[i]] = slot.state
                else:
                    placed[(i + al) % len(pat.slots)] = slot.state
        for self_state in letters:
            for assign in np.ndindex(*([len(letters)] * len(free))):
                nb = list(placed)
                for j, i in enumerate(free):
                    value = letters[assign[j]]
                    if isinstance(al, tuple):
                        nb[al[i]] = value
                    else:
                        nb[(i + al) % len(pat.slots)] = value
                ctx = sym.RuleContext(self_state, tuple(nb))
                lr = match_alignments(automaton, self_state, ctx.neighbor_states)
                # skip assignments whose context collapses into a different
                # reading; they are covered by their own expansion
                if len(lr) != 1:
                    continue
                left, right = lr[0]
                out = automaton.apply_action(left, self_state, right)
                key = (ctx.self_state, ctx.neighbor_states, out)
                if key not in seen:
                    seen.add(key)
                    rules.append((ctx, out))
    return rules


def check_invariance(automaton: HcaAutomaton):
    """The rotation-invariance verdict for the expanded rule list."""
    return sym.check_rotation_invariance(expanded_rules(automaton),
                                         automaton.grid)


# row origin used when printing a tape cell's context in table form: the
# pentagrid row starts one side past the left neighbour, the heptagrid row
# at the left neighbour itself
_ROW_START = {"pentagrid": 1, "heptagrid": 0}


def central_context_row(automaton: HcaAutomaton) -> str:
    """The admissible context of a tape cell, one symbolic table row.

    Letters are shown as X (left), Y (self), Z (right); fixed background
    and marker states as W and B.
    """
    if automaton.grid not in _ROW_START:
        raise ValueError("table rows are defined for the polygonal grids")
    if automaton.kind != "compact":
        raise ValueError("table rows describe the compact construction")
    pat = automaton.pattern
    q = automaton.padding_state
    names = []
    for slot in pat.slots:
        if slot.kind == "left":
            names.append("X")
        elif slot.kind == "right":
            names.append("Z")
        else:
            names.append("W" if slot.state == automaton.encode(q) else "B")
    start = (pat.left_index + _ROW_START[automaton.grid]) % len(names)
    row = [names[(start + i) % len(names)] for i in range(len(names))]
    return "Y | " + " ".join(row)


@dataclass
class Violation:
    kind: str
    time: int
    cell: int
    detail: str


@dataclass
class VerifyReport:
    violations: list[Violation] = field(default_factory=list)
    multi_reading_cells: int = 0
    matched_cells: int = 0
    scanned_cells: int = 0
    context_rows: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def text(self) -> str:
        lines = [
            f"cells scanned: {self.scanned_cells}",
            f"admissible matches: {self.matched_cells}",
            f"violations: {len(self.violations)}",
        ]
        for v in self.violations:
            lines.append(f"  {v.kind} t={v.time} cell={v.cell}: {v.detail}")
        if self.context_rows:
            lines.append("context rows:")
            lines.extend(f"  {r}" for r in self.context_rows)
        return "\n".join(lines) + "\n"


def _letter_name(offset: int) -> str:
    fixed_names = {-2: "U", -1: "X", 0: "Y", 1: "Z", 2: "T"}
    return fixed_names.get(offset, f"Y{offset:+d}")


def symbolic_rows(automaton: HcaAutomaton, region: Region,
                  max_dist: int = 2) -> list[str]:
    """Canonical context rows around the centre with letters named by tape
    position, for table regression.

    Each cell within `max_dist` steps of the central cell contributes
    'self | n1 .. nk' with the neighbour list rotated to its least form,
    so the rows do not depend on generated side numbering.
    """
    from . import engine

    cfg = engine.init_configuration(
        region, automaton, [automaton.padding_state])
    states = cfg.states
    gl = region.guideline
    pos_of = {int(c): int(p) for c, p in zip(gl.cell_ids, gl.positions)}

    def name_of(cell: int) -> str:
        if cell in pos_of:
            return _letter_name(pos_of[cell])
        s = int(states[cell])
        if automaton.blue is not None and s == automaton.blue:
            return "b"
        return "W" if s == automaton.encode(automaton.padding_state) else "B"

    # breadth-first ball around the centre
    ball = {0}
    frontier = [0]
    for _ in range(max_dist):
        nxt = []
        for c in frontier:
            for d in region.adjacency[c]:
                if d >= 0 and int(d) not in ball:
                    ball.add(int(d))
                    nxt.append(int(d))
        frontier = nxt
    rows = set()
    for c in sorted(ball):
        if any(d < 0 for d in region.adjacency[c]):
            continue
        nb = tuple(name_of(int(d)) for d in region.adjacency[c])
        if len(nb) == 12:
            canon = sym.canonical_spherical(nb)
        else:
            canon = sym.canonical_cyclic(nb)
        rows.add(f"{name_of(c)} | " + " ".join(canon))
    return sorted(rows)


def verify_unique_applicability(automaton: HcaAutomaton, region: Region,
                                init, horizon: int) -> VerifyReport:
    """Scan every complete-neighbourhood cell over a run and count the
    admissible readings of its context.

    Violations: a cell whose readings disagree on the resulting state, an
    off-line cell some reading would change (the dodecagrid reflected row
    is exempt, it carries letters by design), and a line cell with no
    reading at all.  The scan keeps stepping with a frozen rim past the
    validity window; staleness there only widens the sample of contexts.
    """
    from . import engine

    report = VerifyReport()
    if automaton.grid in _ROW_START and automaton.kind == "compact":
        report.context_rows.append(central_context_row(automaton))
    on_line = np.zeros(region.n_cells, dtype=bool)
    on_line[region.guideline.cell_ids] = True
    may_change = on_line.copy()
    if automaton.kind == "extra" and region.grid == "dodecagrid":
        # the reflected row carries letters and steps with the tape
        for m in region.guideline.mirror_ids:
            if m >= 0:
                may_change[int(m)] = True
    complete = ~(region.adjacency < 0).any(axis=1)
    cfg = init
    for t in range(horizon + 1):
        states = cfg.states
        for c in np.nonzero(complete)[0]:
            c = int(c)
            nb = tuple(int(states[d]) for d in region.adjacency[c])
            readings = match_alignments(automaton, int(states[c]), nb)
            report.scanned_cells += 1
            if readings:
                report.matched_cells += 1
            if len(readings) > 1:
                report.multi_reading_cells += 1
                outs = {automaton.apply_action(l, int(states[c]), r)
                        for l, r in readings}
                if len(outs) > 1:
                    report.violations.append(Violation(
                        "ambiguous", t, c,
                        f"readings {readings} give states {sorted(outs)}"))
            if on_line[c]:
                if not readings and region.dist[c] < region.radius:
                    report.violations.append(Violation(
                        "line-unmatched", t, c, "no admissible reading"))
            elif readings and not may_change[c]:
                outs = {automaton.apply_action(l, int(states[c]), r)
                        for l, r in readings}
                if outs != {int(states[c])}:
                    report.violations.append(Violation(
                        "off-line-changed", t, c,
                        f"reading would move state to {sorted(outs)}"))
        if t < horizon:
            cfg = engine.step_hca(automaton, region, cfg, scan=True)
    return report


def _slot_to_doc(slot: Slot) -> dict:
    return {"kind": slot.kind, "state": slot.state}


def automaton_to_json(automaton: HcaAutomaton) -> str:
    doc = {
        "grid": automaton.grid,
        "n_states": automaton.n_states,
        "kind": automaton.kind,
        "name": automaton.name,
        "action": json.loads(ca1d.rule_to_json(automaton.action)),
        "state_map": {str(k): v for k, v in automaton.state_map.items()},
        "patterns": [[_slot_to_doc(s) for s in p.slots]
                     for p in automaton.patterns],
        "letters": sorted(automaton.letters),
        "blue": automaton.blue,
        "marker_scheme": (automaton.marker_scheme.value
                          if automaton.marker_scheme else None),
        "padding_state": automaton.padding_state,
    }
    return json.dumps(doc, indent=2)


def automaton_from_json(text: str) -> HcaAutomaton:
    doc = json.loads(text)
    slots = tuple(
        Slot(s["kind"], s["state"]) for s in doc["patterns"][0]
    )
    return HcaAutomaton(
        grid=doc["grid"],
        n_states=int(doc["n_states"]),
        patterns=(ContextPattern(slots),),
        action=ca1d.rule_from_json(json.dumps(doc["action"])),
        state_map={int(k): int(v) for k, v in doc["state_map"].items()},
        letters=frozenset(int(v) for v in doc["letters"]),
        kind=doc["kind"],
        blue=doc["blue"],
        marker_scheme=(MarkerScheme(doc["marker_scheme"])
                       if doc["marker_scheme"] else None),
        padding_state=doc["padding_state"],
        name=doc.get("name", ""),
    )
