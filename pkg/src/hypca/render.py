"""SVG pictures of regions and configurations.

The polygonal grids are drawn in the Poincare disk, each cell a filled
polygon with edges sampled along geodesics.  The dodecahedral grid is
drawn through its trace plane: the cells with a face lying in the tape
line's carrier plane tile that plane like the five-sided grid, and each
such cell from the tape side contributes one filled pentagon.  The cell
behind the shared face shows as a central dot, and any neighbour on the
tape side holding a non-quiet state as a smaller dot pushed toward it.

Output is deterministic: cells are emitted in id order and every number
is formatted to six decimals, so renders diff cleanly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .region import Region

# letter fill cycle, warm shades so multi-letter tapes stay readable
LETTER_COLORS = ("#f2d12e", "#e8a33d", "#d07c2a", "#b85f1f", "#9c4a18",
                 "#7f3a12")
BLUE = "#4a6fd4"
GREEN = "#57a85c"
RED = "#d44a4a"
LINE_BLANK = "#f2d12e"
OFF_BLANK = "#f7f5ef"


@dataclass
class RenderSpec:
    """How to draw: one colour per state, plus projection details."""

    grid: str
    colors: dict[int, str] = field(default_factory=dict)
    size: int = 720
    samples_per_edge: int = 8
    stroke: str = "#3c3c3c"
    stroke_width: float = 0.0025
    background: str = "#ffffff"
    depth: int | None = None        # draw only cells this close to the tape
    quiet: int | None = None        # state not worth an above-plane dot

    def color(self, state: int) -> str:
        try:
            return self.colors[int(state)]
        except KeyError:
            raise ValueError(f"no colour for state {state}") from None


def default_render_spec(automaton) -> RenderSpec:
    """Figure colours for a produced automaton: warm letters, the added
    state blue, the compact background green and the marker state red."""
    colors = {}
    for i, s in enumerate(sorted(automaton.letters)):
        colors[s] = LETTER_COLORS[i % len(LETTER_COLORS)]
    if automaton.blue is not None:
        colors[automaton.blue] = BLUE
    quiet = None
    if automaton.kind == "compact":
        w = automaton.encode(automaton.padding_state)
        b = next(s.state for s in automaton.pattern.slots
                 if s.kind == "fixed" and s.state != w)
        colors[w] = GREEN
        colors[b] = RED
        quiet = w
    elif automaton.blue is not None:
        quiet = automaton.blue
    return RenderSpec(grid=automaton.grid, colors=colors, quiet=quiet)


def blank_render_spec(grid: str) -> RenderSpec:
    """Role colours for a bare region: the tape line against background."""
    return RenderSpec(grid=grid, colors={0: OFF_BLANK, 1: LINE_BLANK},
                      quiet=0)


def blank_states(region: Region) -> np.ndarray:
    states = np.zeros(region.n_cells, dtype=np.int16)
    states[region.guideline.cell_ids] = 1
    return states


def spec_to_json(spec: RenderSpec) -> str:
    doc = {
        "grid": spec.grid,
        "colors": {str(k): v for k, v in spec.colors.items()},
        "size": spec.size,
        "samples_per_edge": spec.samples_per_edge,
        "stroke": spec.stroke,
        "stroke_width": spec.stroke_width,
        "background": spec.background,
        "depth": spec.depth,
        "quiet": spec.quiet,
    }
    return json.dumps(doc, indent=2)


def spec_from_json(text: str) -> RenderSpec:
    doc = json.loads(text)
    return RenderSpec(
        grid=doc["grid"],
        colors={int(k): v for k, v in doc["colors"].items()},
        size=int(doc.get("size", 720)),
        samples_per_edge=int(doc.get("samples_per_edge", 8)),
        stroke=doc.get("stroke", "#3c3c3c"),
        stroke_width=float(doc.get("stroke_width", 0.0025)),
        background=doc.get("background", "#ffffff"),
        depth=doc.get("depth"),
        quiet=doc.get("quiet"),
    )


def _fmt(x: float) -> str:
    return f"{float(x):.6f}"


def _path(points: np.ndarray) -> str:
    parts = [f"M {_fmt(points[0, 0])} {_fmt(-points[0, 1])}"]
    parts.extend(f"L {_fmt(u)} {_fmt(-v)}" for u, v in points[1:])
    return " ".join(parts) + " Z"


def _polygon_disk_points(vertices: np.ndarray, samples: int) -> np.ndarray:
    """Disk coordinates of a hyperbolic polygon outline, edges sampled."""
    pts = []
    k = len(vertices)
    for i in range(k):
        seg = geo.geodesic_points(vertices[i], vertices[(i + 1) % k],
                                  samples + 1)[:-1]
        pts.append(geo.to_poincare_disk(seg))
    return np.concatenate(pts)


def _svg_document(spec: RenderSpec, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{spec.size}" height="{spec.size}" '
        f'viewBox="-1.05 -1.05 2.10 2.10">\n'
        f'<rect x="-1.05" y="-1.05" width="2.10" height="2.10" '
        f'fill="{spec.background}"/>\n'
        f'<circle cx="0" cy="0" r="1" fill="none" '
        f'stroke="{spec.stroke}" stroke-width="{_fmt(spec.stroke_width)}"/>\n'
    )
    return head + "\n".join(body) + ("\n" if body else "") + "</svg>\n"


def render_svg(region: Region, spec: RenderSpec,
               states: np.ndarray | None = None) -> str:
    """One configuration (or the bare region) as an SVG document."""
    if spec.grid != region.grid:
        raise ValueError(f"render spec is for {spec.grid}, "
                         f"region is {region.grid}")
    if states is None:
        states = blank_states(region)
        spec = RenderSpec(grid=spec.grid, colors=dict(spec.colors)
                          or dict(blank_render_spec(spec.grid).colors),
                          size=spec.size,
                          samples_per_edge=spec.samples_per_edge,
                          stroke=spec.stroke, stroke_width=spec.stroke_width,
                          background=spec.background, depth=spec.depth,
                          quiet=0)
    if region.grid == "dodecagrid":
        return _render_trace_plane(region, spec, states)
    return _render_polygons(region, spec, states)


def _render_polygons(region: Region, spec: RenderSpec,
                     states: np.ndarray) -> str:
    shape = region.shape
    base = shape.vertices
    body = []
    for c in range(region.n_cells):
        if spec.depth is not None and region.dist[c] > spec.depth:
            continue
        verts = base @ region.matrices[c].T
        pts = _polygon_disk_points(verts, spec.samples_per_edge)
        body.append(f'<path d="{_path(pts)}" '
                    f'fill="{spec.color(states[c])}" '
                    f'stroke="{spec.stroke}" '
                    f'stroke-width="{_fmt(spec.stroke_width)}"/>')
    return _svg_document(spec, body)


def _trace_basis(region: Region):
    """An orthonormal frame of the trace plane: a base point, and two
    spacelike directions inside the plane."""
    n0 = region.guideline.normals[0]
    e0 = region.guideline.frame_p0
    e1 = region.guideline.frame_w
    e2 = None
    for trial in np.eye(4)[::-1]:
        v = trial - geo.mdot(trial, e0) * e0 + geo.mdot(trial, e1) * e1 \
            + geo.mdot(trial, n0) * n0
        if geo.mdot(v, v) < -1e-6:
            e2 = geo.normalize_spacelike(v)
            break
    return n0, e0, e1, e2


def _plane_coords(x: np.ndarray, e0, e1, e2) -> np.ndarray:
    """Coordinates of in-plane points in the frame's own hyperboloid."""
    return np.stack([geo.mdot(x, e0), -geo.mdot(x, e1), -geo.mdot(x, e2)],
                    axis=-1)


def _render_trace_plane(region: Region, spec: RenderSpec,
                        states: np.ndarray) -> str:
    shape = region.shape
    n0, e0, e1, e2 = _trace_basis(region)
    centers = region.centers
    heights = geo.mdot(centers, n0)
    ref_side = np.sign(heights[0])    # the tape side of the plane

    sinh_rho = np.sinh(shape.inradius)
    body = []
    for c in range(region.n_cells):
        if spec.depth is not None and region.dist[c] > spec.depth:
            continue
        if np.sign(heights[c]) != ref_side \
                or abs(abs(heights[c]) - sinh_rho) > 1e-6:
            continue
        # a face of this cell lying in the trace plane
        m = region.matrices[c]
        face = None
        for f in range(12):
            wn = m @ shape.side_normals[f]
            if min(np.abs(wn - n0).max(), np.abs(wn + n0).max()) < 1e-6:
                face = f
                break
        if face is None:
            continue
        cycle = list(shape.side_vertex_cycles[face])
        verts = shape.vertices[cycle] @ m.T
        plane_verts = _plane_coords(verts, e0, e1, e2)
        pts = _polygon_disk_points(plane_verts, spec.samples_per_edge)
        body.append(f'<path d="{_path(pts)}" '
                    f'fill="{spec.color(states[c])}" '
                    f'stroke="{spec.stroke}" '
                    f'stroke-width="{_fmt(spec.stroke_width)}"/>')

        centroid = geo.normalize_point(plane_verts.mean(axis=0))
        c2 = geo.to_poincare_disk(centroid)
        apparent = float(np.linalg.norm(
            geo.to_poincare_disk(plane_verts[0]) - c2))
        behind = region.adjacency[c, face]
        if behind >= 0:
            body.append(f'<circle cx="{_fmt(c2[0])}" cy="{_fmt(-c2[1])}" '
                        f'r="{_fmt(0.38 * apparent)}" '
                        f'fill="{spec.color(states[behind])}" '
                        f'stroke="{spec.stroke}" '
                        f'stroke-width="{_fmt(spec.stroke_width)}"/>')
        for g in range(12):
            nb = region.adjacency[c, g]
            if g == face or nb < 0 or np.sign(heights[nb]) != ref_side:
                continue
            if spec.quiet is not None and states[nb] == spec.quiet:
                continue
            toward = centers[nb] + geo.mdot(centers[nb], n0) * n0
            toward = geo.normalize_point(toward)
            spot = geo.normalize_point(
                0.45 * centroid + 0.55 * _plane_coords(toward, e0, e1, e2))
            s2 = geo.to_poincare_disk(spot)
            body.append(f'<circle cx="{_fmt(s2[0])}" cy="{_fmt(-s2[1])}" '
                        f'r="{_fmt(0.17 * apparent)}" '
                        f'fill="{spec.color(states[nb])}" '
                        f'stroke="{spec.stroke}" '
                        f'stroke-width="{_fmt(spec.stroke_width)}"/>')
    return _svg_document(spec, body)
