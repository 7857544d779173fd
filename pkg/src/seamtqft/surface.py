"""Closed seamed surfaces and their checkerboard colorings.

A surface is a list of facets (orientable, given by genus, dot count and a
number of boundary slots) plus a perfect matching of all slots into seams.
Each seam carries a preferred side (its co-orientation points into that
side's facet).  Embedding data is dropped: orientability is structural in
the genus model, which is all the evaluation uses.

A checkerboard coloring assigns 1 or 2 to each facet so the two sides of
every seam differ.  Colorings are enumerated per connected component of
the facet-seam graph (two candidates each, found by BFS propagation) and
combined as a product, never by brute force over all facets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class SurfaceError(Exception):
    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


class ParityViolation(SurfaceError):
    def __init__(self, message):
        super().__init__("ParityViolation", message)


@dataclass(frozen=True)
class Facet:
    genus: int
    dots: int
    slots: int

    @property
    def euler(self):
        return 2 - 2 * self.genus - self.slots


@dataclass(frozen=True)
class Seam:
    a: tuple[int, int]  # (facet id, slot id)
    b: tuple[int, int]
    prefer: str  # "a" | "b"

    @property
    def preferred_facet(self):
        return (self.a if self.prefer == "a" else self.b)[0]


@dataclass(frozen=True)
class ClosedSeamedSurface:
    facets: tuple[Facet, ...]
    seams: tuple[Seam, ...]

    def __post_init__(self):
        errors = validate(self)
        if errors:
            raise SurfaceError(errors[0][0], "; ".join(m for _, m in errors))

    @property
    def theta(self):
        return len(self.seams)

    @property
    def total_dots(self):
        return sum(f.dots for f in self.facets)


def make_surface(facets, seams):
    return ClosedSeamedSurface(
        tuple(Facet(*f) if not isinstance(f, Facet) else f for f in facets),
        tuple(Seam(tuple(s[0]), tuple(s[1]), s[2]) if not isinstance(s, Seam) else s for s in seams),
    )


def validate(surface):
    """All structural defects as (code, message) pairs; empty means ok."""
    errors = []
    n = len(surface.facets)
    for i, facet in enumerate(surface.facets):
        if facet.genus < 0:
            errors.append(("NegativeGenus", f"facet {i} has genus {facet.genus}"))
        if facet.dots < 0:
            errors.append(("NegativeDots", f"facet {i} has {facet.dots} dots"))
        if facet.slots < 0:
            errors.append(("NegativeSlots", f"facet {i} has {facet.slots} slots"))
    seen = {}
    for k, seam in enumerate(surface.seams):
        if seam.prefer not in ("a", "b"):
            errors.append(("BadPreference", f"seam {k} prefers {seam.prefer!r}"))
        for side in (seam.a, seam.b):
            facet, slot = side
            if not (0 <= facet < n) or not (0 <= slot < surface.facets[facet].slots):
                errors.append(("DanglingSlot", f"seam {k} references missing slot {side}"))
                continue
            if side in seen:
                errors.append(("DoubleUsedSlot", f"slot {side} used by seams {seen[side]} and {k}"))
            seen[side] = k
    for i, facet in enumerate(surface.facets):
        for slot in range(facet.slots):
            if (i, slot) not in seen:
                errors.append(("DanglingSlot", f"slot {(i, slot)} not matched by any seam"))
    return errors


def euler_characteristic(surface):
    # seam circles contribute zero
    return sum(f.euler for f in surface.facets)


def degree(surface):
    return -euler_characteristic(surface) + 2 * surface.total_dots


def components(surface):
    """Connected components of the facet-seam graph, as sorted facet lists."""
    n = len(surface.facets)
    adj = {i: set() for i in range(n)}
    for seam in surface.seams:
        adj[seam.a[0]].add(seam.b[0])
        adj[seam.b[0]].add(seam.a[0])
    seen = set()
    out = []
    for start in range(n):
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            comp.append(v)
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        out.append(sorted(comp))
    return out


def _component_colorings(surface, comp):
    """The 0 or 2 checkerboard colorings of one component (root gets 1 first)."""
    adj = {i: [] for i in comp}
    comp_set = set(comp)
    for seam in surface.seams:
        fa, fb = seam.a[0], seam.b[0]
        if fa in comp_set:
            adj[fa].append(fb)
            adj[fb].append(fa)
    root = comp[0]
    color = {root: 1}
    queue = [root]
    while queue:
        v = queue.pop()
        for u in adj[v]:
            if u not in color:
                color[u] = 3 - color[v]
                queue.append(u)
            elif color[u] == color[v]:
                return []  # odd component (self-adjacency or odd cycle)
    swapped = {v: 3 - c for v, c in color.items()}
    return [color, swapped]


def admissible_colorings(surface):
    """Every checkerboard coloring, as a facet -> {1,2} dict.

    Empty iff some component is odd; otherwise there are 2^(#components),
    enumerated in a fixed order (binary counting over components).
    """
    per_comp = []
    for comp in components(surface):
        choices = _component_colorings(surface, comp)
        if not choices:
            return []
        per_comp.append(choices)
    out = [{}]
    for choices in per_comp:
        out = [{**base, **choice} for base in out for choice in choices]
    return out


@dataclass(frozen=True)
class ColoringStats:
    theta1: int
    theta2: int
    d1: int
    d2: int
    chi_f1: int
    chi_f1_closed: int


def coloring_stats(surface, coloring):
    """Seam/dot/Euler counts of a coloring, per the closed-up color-1 part."""
    for seam in surface.seams:
        if coloring[seam.a[0]] == coloring[seam.b[0]]:
            raise SurfaceError("InadmissibleColoring", f"seam {seam} sides share a color")
    theta1 = sum(1 for s in surface.seams if coloring[s.preferred_facet] == 1)
    theta2 = len(surface.seams) - theta1
    d1 = sum(f.dots for i, f in enumerate(surface.facets) if coloring[i] == 1)
    d2 = surface.total_dots - d1
    chi_f1 = sum(f.euler for i, f in enumerate(surface.facets) if coloring[i] == 1)
    chi_closed = chi_f1 + surface.theta
    if chi_closed % 2:
        raise ParityViolation(
            f"chi of the closed-up color-1 surface is odd ({chi_closed}); corrupt input"
        )
    return ColoringStats(theta1, theta2, d1, d2, chi_f1, chi_closed)


# -- JSON ---------------------------------------------------------------------


def to_json(surface):
    return {
        "facets": [
            {"genus": f.genus, "dots": f.dots, "slots": f.slots} for f in surface.facets
        ],
        "seams": [
            {"a": list(s.a), "b": list(s.b), "prefer": s.prefer} for s in surface.seams
        ],
    }


def from_json(data):
    if not isinstance(data, dict):
        raise SurfaceError("SchemaError", "/: expected an object")
    for key in ("facets", "seams"):
        if key not in data or not isinstance(data[key], list):
            raise SurfaceError("SchemaError", f"/{key}: expected a list")
    facets = []
    for i, f in enumerate(data["facets"]):
        for key in ("genus", "dots", "slots"):
            if not isinstance(f.get(key), int):
                raise SurfaceError("SchemaError", f"/facets/{i}/{key}: expected an integer")
        facets.append(Facet(f["genus"], f["dots"], f["slots"]))
    seams = []
    for k, s in enumerate(data["seams"]):
        for key in ("a", "b"):
            side = s.get(key)
            if (
                not isinstance(side, list)
                or len(side) != 2
                or not all(isinstance(x, int) for x in side)
            ):
                raise SurfaceError("SchemaError", f"/seams/{k}/{key}: expected [facet, slot]")
        if s.get("prefer") not in ("a", "b"):
            raise SurfaceError("SchemaError", f"/seams/{k}/prefer: expected 'a' or 'b'")
        seams.append(Seam(tuple(s["a"]), tuple(s["b"]), s["prefer"]))
    return ClosedSeamedSurface(tuple(facets), tuple(seams))


def loads(text):
    return from_json(json.loads(text))


# -- stock surfaces -----------------------------------------------------------


def closed_genus(genus, dots=0):
    """A seamless closed orientable surface."""
    return make_surface([(genus, dots, 0)], [])


def sphere(dots=0):
    return closed_genus(0, dots)


def torus_with_vertical_seams(signs, dots_per_annulus=None):
    """A torus S^1_w x S^1: one annulus facet per boundary arc of the marked
    circle w, one seam circle per marked point.

    A '+' point's co-orientation agrees with the circle orientation, so its
    seam prefers the annulus swept by the arc that follows the point.
    """
    k = len(signs)
    if k == 0:
        raise SurfaceError("BadInput", "need at least one marked point")
    dots = dots_per_annulus or [0] * k
    facets = [(0, dots[i], 2) for i in range(k)]
    seams = []
    for m, sign in enumerate(signs):
        prev_f, next_f = (m - 1) % k, m
        # slot 0 of annulus i faces seam i (its left edge), slot 1 faces seam i+1
        side_prev = (prev_f, 1)
        side_next = (next_f, 0)
        if sign == "+":
            seams.append(Seam(side_next, side_prev, "a"))
        else:
            seams.append(Seam(side_next, side_prev, "b"))
    return make_surface(facets, seams)


def example_sphere_with_annulus(dot_on_annulus=1):
    """Sphere cut by two parallel seams into disk | annulus | disk, both
    seams co-oriented into the dotted annulus."""
    facets = [(0, 0, 1), (0, dot_on_annulus, 2), (0, 0, 1)]
    seams = [Seam((1, 0), (0, 0), "a"), Seam((1, 1), (2, 0), "a")]
    return make_surface(facets, seams)


def sphere_with_one_seam(dots_preferred=0, dots_other=0):
    """Sphere split by one seam into two disks; co-orientation into the first."""
    facets = [(0, dots_preferred, 1), (0, dots_other, 1)]
    return make_surface(facets, [Seam((0, 0), (1, 0), "a")])


def odd_surface():
    """A self-adjacent seam: torus with one non-separating seam circle."""
    facets = [(0, 0, 2)]
    return make_surface(facets, [Seam((0, 0), (0, 1), "a")])


def disjoint_union(*surfaces):
    facets = []
    seams = []
    offset = 0
    for s in surfaces:
        facets.extend(s.facets)
        for seam in s.seams:
            seams.append(
                Seam(
                    (seam.a[0] + offset, seam.a[1]),
                    (seam.b[0] + offset, seam.b[1]),
                    seam.prefer,
                )
            )
        offset += len(s.facets)
    return ClosedSeamedSurface(tuple(facets), tuple(seams))
