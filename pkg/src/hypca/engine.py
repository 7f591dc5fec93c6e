"""Running a produced automaton on a bounded region.

A bounded region only approximates the infinite tiling, so a configuration
carries a validity budget: after t steps the states within graph distance
radius - t of the initial segment are exactly what the infinite tiling
would hold, and stepping is refused once that budget is spent.  The
verification scanner instead keeps stepping with a frozen rim; it wants
breadth of contexts, not fidelity at the edge.

Cells with a neighbour outside the region never update.  Everything else
updates by the automaton: a uniquely readable pattern match applies the
action, no match leaves the state alone, and readings that disagree on
the resulting state are an error.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import ca1d
from . import embed as emb
from .region import Region, marker_cell_ids


class AmbiguousMatch(ValueError):
    """A context matched under readings that disagree on the next state."""


class ValidityExhausted(ValueError):
    """No step can be trusted: the region is too small for more time."""


@dataclass
class Configuration:
    states: np.ndarray          # (N,) current state per cell
    time: int
    valid_radius: int           # trusted distance from the initial segment

    def copy(self) -> "Configuration":
        return Configuration(self.states.copy(), self.time, self.valid_radius)


def init_configuration(region: Region, automaton: emb.HcaAutomaton,
                       word) -> Configuration:
    """Lay a word on the tape line and fill the rest of the region.

    The word is centred; the line is padded with the designated quiescent
    state out to the region's edge.  The extra-state fill is the added
    state everywhere off the line, with the reflected row on the
    dodecagrid carrying each tape cell's letter.  The compact fill is the
    background state everywhere, with the marker cells set to the marker
    state.
    """
    if automaton.grid != region.grid:
        raise ValueError(f"automaton is for {automaton.grid}, "
                         f"region is {region.grid}")
    word = [int(a) for a in word]
    states_a = set(automaton.action.states())
    if not set(word) <= states_a:
        raise ValueError("word uses states outside the source automaton")
    if automaton.padding_state is None:
        raise ValueError("the source automaton has no quiescent state "
                         "to pad the tape with")
    start = -(len(word) // 2)
    if word and not (-region.halfwidth <= start
                     and start + len(word) - 1 <= region.halfwidth):
        raise ValueError(f"word of length {len(word)} does not fit the "
                         f"initial segment (halfwidth {region.halfwidth})")

    if automaton.kind == "extra":
        fill = automaton.blue
    else:
        fill = automaton.encode(automaton.padding_state)
    states = np.full(region.n_cells, fill, dtype=np.int16)

    gl = region.guideline
    letter_at = {}
    for cell, pos in zip(gl.cell_ids, gl.positions):
        p = int(pos)
        a = word[p - start] if 0 <= p - start < len(word) \
            else automaton.padding_state
        letter_at[int(cell)] = automaton.encode(a)
        states[int(cell)] = letter_at[int(cell)]

    if automaton.kind == "extra" and region.grid == "dodecagrid":
        for cell, mirror in zip(gl.cell_ids, gl.mirror_ids):
            if mirror >= 0:
                states[int(mirror)] = letter_at[int(cell)]
    if automaton.kind == "compact":
        states[marker_cell_ids(region, automaton.marker_scheme)] = \
            automaton.encode(1 if automaton.grid != "pentagrid"
                             else _marker_source(automaton))
    return Configuration(states, 0, region.radius)


def _marker_source(automaton: emb.HcaAutomaton) -> int:
    """The source state whose image paints the markers."""
    b = next(s.state for s in automaton.pattern.slots if s.kind == "fixed"
             and s.state != automaton.encode(automaton.padding_state))
    return automaton.inverse_map()[b]


def _pinned_counts(automaton: emb.HcaAutomaton) -> dict[int, int]:
    pinned: dict[int, int] = {}
    for slot in automaton.pattern.slots:
        if slot.kind == "fixed":
            pinned[slot.state] = pinned.get(slot.state, 0) + 1
    return pinned


def _filter_candidates(automaton: emb.HcaAutomaton, region: Region,
                       states: np.ndarray, cells: np.ndarray) -> np.ndarray:
    """Subset of `cells` passing the cheap necessary match conditions:
    complete neighbourhood, letter self state, and at least the pattern's
    count of every pinned state among the neighbours."""
    adj = region.adjacency[cells]
    nb = np.where(adj >= 0, states[np.clip(adj, 0, None)], np.int16(-1))
    mask = ~(adj < 0).any(axis=1)
    if automaton.blue is not None:
        mask &= states[cells] != automaton.blue
    for state, count in _pinned_counts(automaton).items():
        mask &= (nb == state).sum(axis=1) >= count
    return cells[mask]


def _candidates(automaton: emb.HcaAutomaton, region: Region,
                states: np.ndarray) -> np.ndarray:
    return _filter_candidates(automaton, region, states,
                              np.arange(region.n_cells))


def _apply(automaton: emb.HcaAutomaton, region: Region, cfg: Configuration,
           candidates: np.ndarray, scan: bool
           ) -> tuple[Configuration, np.ndarray]:
    """Update the candidate cells; everything else keeps its state.
    Returns the new configuration and the cells that changed."""
    states = cfg.states
    new_states = states.copy()
    changed = []
    for c in candidates:
        c = int(c)
        nb = tuple(int(states[d]) for d in region.adjacency[c])
        readings = emb.match_alignments(automaton, int(states[c]), nb)
        if not readings:
            continue
        outs = {automaton.apply_action(l, int(states[c]), r)
                for l, r in readings}
        if len(outs) > 1:
            if scan:
                continue
            raise AmbiguousMatch(
                f"cell {c} at time {cfg.time}: readings {readings} "
                f"disagree, states {sorted(outs)}")
        out = outs.pop()
        if out != new_states[c]:
            new_states[c] = out
            changed.append(c)
    return (Configuration(new_states, cfg.time + 1,
                          max(cfg.valid_radius - 1, 0)),
            np.asarray(changed, dtype=np.int64))


def step_hca(automaton: emb.HcaAutomaton, region: Region,
             cfg: Configuration, *, scan: bool = False) -> Configuration:
    """One synchronous update.

    Without `scan` the step consumes one unit of validity and is refused
    once none is left.  With `scan` the step always proceeds and a cell
    with disagreeing readings keeps its state instead of raising.
    """
    if not scan and cfg.valid_radius < 1:
        raise ValidityExhausted(
            f"configuration at time {cfg.time} has no valid step left")
    new_cfg, _ = _apply(automaton, region, cfg,
                        _candidates(automaton, region, cfg.states), scan)
    return new_cfg


def run_hca(automaton: emb.HcaAutomaton, region: Region,
            cfg: Configuration, steps: int, *,
            scan: bool = False) -> list[Configuration]:
    """The trajectory [cfg, step(cfg), ...] with `steps` updates.

    The candidate set is carried across steps: after the first full scan,
    only cells whose neighbourhood changed are re-examined.  On large
    regions almost every cell sits in an unchanging background, so this
    turns each step into work proportional to the activity.
    """
    out = [cfg]
    if steps <= 0:
        return out
    if not scan and cfg.valid_radius < steps:
        raise ValidityExhausted(
            f"{steps} steps from time {cfg.time} exceed the remaining "
            f"validity {cfg.valid_radius}")
    adj = region.adjacency
    cand = _candidates(automaton, region, cfg.states)
    for _ in range(steps):
        new_cfg, changed = _apply(automaton, region, cfg, cand, scan)
        if len(changed):
            near = adj[changed].ravel()
            affected = np.unique(np.concatenate(
                [cand, changed, near[near >= 0]]))
        else:
            affected = cand
        cand = _filter_candidates(automaton, region, new_cfg.states,
                                  affected)
        cfg = new_cfg
        out.append(cfg)
    return out


def trace_window(region: Region, time: int) -> int:
    """Largest |position| of the tape trusted at the given time."""
    return region.halfwidth + region.radius - time


def yellow_trace(automaton: emb.HcaAutomaton, region: Region,
                 cfgs) -> list[tuple[int, int, tuple[int, ...]]]:
    """The tape contents over time, decoded to source states.

    Each entry is (time, start position, letters) covering the positions
    still trusted at that configuration's time.  A non-letter state on
    the line is a simulation failure and raises.
    """
    inv = automaton.inverse_map()
    gl = region.guideline
    rows = []
    for cfg in cfgs:
        w = trace_window(region, cfg.time)
        letters = []
        for p in range(-w, w + 1):
            cell = gl.id_at(p)
            s = int(cfg.states[cell])
            if s not in inv:
                raise ValueError(
                    f"cell {cell} (position {p}) holds non-letter state "
                    f"{s} at time {cfg.time}")
            letters.append(inv[s])
        rows.append((cfg.time, -w, tuple(letters)))
    return rows


def trace_to_text(trace) -> str:
    """Tab-separated rows 'time  start  states', one per configuration."""
    lines = [f"{t}\t{start}\t" + " ".join(str(v) for v in letters)
             for t, start, letters in trace]
    return "\n".join(lines) + "\n"


def config_to_json(region: Region, cfg: Configuration) -> str:
    import json
    return json.dumps({
        "grid": region.grid,
        "time": cfg.time,
        "valid_radius": cfg.valid_radius,
        "states": cfg.states.tolist(),
    })


def config_from_json(text: str, region: Region) -> Configuration:
    import json
    doc = json.loads(text)
    if doc["grid"] != region.grid:
        raise ValueError(f"snapshot is for {doc['grid']}, "
                         f"region is {region.grid}")
    states = np.asarray(doc["states"], dtype=np.int16)
    if states.shape != (region.n_cells,):
        raise ValueError("snapshot does not fit the region")
    return Configuration(states, int(doc["time"]), int(doc["valid_radius"]))


@dataclass
class Divergence:
    time: int
    position: int
    expected: int
    got: int | None


@dataclass
class EquivalenceReport:
    steps: int
    compared: int = 0
    divergence: Divergence | None = None
    stability_violations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.divergence is None and not self.stability_violations

    def text(self) -> str:
        lines = [f"steps: {self.steps}",
                 f"tape positions compared: {self.compared}"]
        if self.divergence is None:
            lines.append("tape trace: matches the 1D run")
        else:
            d = self.divergence
            lines.append(f"divergence at t={d.time} position {d.position}: "
                         f"expected {d.expected}, got {d.got}")
        if self.stability_violations:
            t, c = self.stability_violations[0]
            lines.append(f"off-line drift: {len(self.stability_violations)} "
                         f"cells, first at t={t} cell {c}")
        else:
            lines.append("off-line cells: stable")
        return "\n".join(lines) + "\n"


def equivalence_check(rule: ca1d.Rule1D, automaton: emb.HcaAutomaton,
                      region: Region, word, steps: int) -> EquivalenceReport:
    """Run the produced automaton against the 1D automaton it came from.

    The tape line is compared position by position inside the trusted
    window at every time, and every off-line cell is required to hold
    still for the whole run.  Checking stops at the first tape mismatch.
    """
    if steps > region.radius - 1:
        raise ValueError(f"{steps} steps exceed the trusted horizon of a "
                         f"radius {region.radius} region")
    report = EquivalenceReport(steps=steps)
    init = init_configuration(region, automaton, word)
    tape = ca1d.word_tape(list(word), padding=automaton.padding_state)
    oracle = ca1d.run_1d(rule, tape, steps)
    cfgs = run_hca(automaton, region, init, steps)

    inv = automaton.inverse_map()
    gl = region.guideline
    on_line = np.zeros(region.n_cells, dtype=bool)
    on_line[gl.cell_ids] = True
    baseline = init.states[~on_line].copy()
    off_ids = np.nonzero(~on_line)[0]

    for t, cfg in enumerate(cfgs):
        w = trace_window(region, t)
        for p in range(-w, w + 1):
            expected = oracle[t].value_at(p)
            got = inv.get(int(cfg.states[gl.id_at(p)]))
            report.compared += 1
            if got != expected:
                report.divergence = Divergence(t, p, expected, got)
                return report
        if automaton.kind == "extra" and automaton.grid == "dodecagrid":
            # the reflected row holds letters and may step; judge only the
            # cells that started in the added state
            drifted = (cfg.states[~on_line] != baseline) \
                & (baseline == automaton.blue)
        else:
            drifted = cfg.states[~on_line] != baseline
        for c in off_ids[drifted]:
            report.stability_violations.append((t, int(c)))
        if report.stability_violations:
            return report
    return report
