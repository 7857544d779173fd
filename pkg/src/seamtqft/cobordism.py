"""Marked circles and seamed cobordisms between them.

A meom is a forest of circles, each carrying a cyclic word of marked-point
signs.  Signs are stored relative to the circle's canonical orientation
(clockwise at even nesting depth, anticlockwise at odd depth), so no planar
geometry is kept.  On a circle with k marks, arc i runs from mark i to mark
i+1 (mod k); an unmarked circle has the single closed arc 0.

Sign convention (pins every co-orientation in the engine): at mark m the
neighborhood reads (arc m-1, mark m, arc m) along the canonical
orientation.  The seam ending at a '+' mark is co-oriented toward the
following arc (arc m); at a '-' mark, toward the preceding arc.
Consequently a seam arc with both ends on one boundary level joins a '+'
to a '-', and one running between levels joins equal signs.

A cobordism stores facets as Euler-characteristic ledgers (the chi of the
compact facet with boundary) plus dot counts, the facet owning each
boundary arc, and its seams.  A seam arc records its two sides as an
ordered pair of facets together with, at each endpoint, which side sits in
the following-arc sector; a closed seam circle records its sides and the
preferred one.  Composition merges facets along shared boundary arcs with
a union-find and updates the ledgers by inclusion-exclusion over the glued
arcs and marked points; seam arcs concatenate at marked points and may
close up into seam circles.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import surface as sf


class CobordismError(Exception):
    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


def _err(code, message):
    raise CobordismError(code, message)


# -- meoms --------------------------------------------------------------------


@dataclass(frozen=True)
class Circle:
    parent: int | None
    marks: tuple[str, ...]


@dataclass(frozen=True)
class Meom:
    circles: tuple[Circle, ...] = ()

    def __post_init__(self):
        for i, c in enumerate(self.circles):
            if c.parent is not None and not (0 <= c.parent < len(self.circles)):
                _err("BadParent", f"circle {i} has parent {c.parent}")
            for s in c.marks:
                if s not in "+-":
                    _err("BadSign", f"circle {i} carries sign {s!r}")
        for i in range(len(self.circles)):
            if self.depth(i) is None:
                _err("BadParent", f"circle {i} sits in a parent cycle")

    def depth(self, i):
        seen = set()
        d = 0
        while self.circles[i].parent is not None:
            if i in seen:
                return None
            seen.add(i)
            i = self.circles[i].parent
            d += 1
        return d

    def arc_count(self, i):
        return max(len(self.circles[i].marks), 1)

    def mark_count(self, i):
        return len(self.circles[i].marks)

    def sign(self, circle, mark):
        return self.circles[circle].marks[mark]

    def arcs(self):
        for c in range(len(self.circles)):
            for a in range(self.arc_count(c)):
                yield (c, a)

    def marks(self):
        for c in range(len(self.circles)):
            for m in range(self.mark_count(c)):
                yield (c, m)

    def next_arc(self, circle, mark):
        return mark

    def prev_arc(self, circle, mark):
        return (mark - 1) % self.mark_count(circle)

    def weight(self):
        return sum(
            c.marks.count("+") - c.marks.count("-") for c in self.circles
        )

    def is_balanced(self):
        return self.weight() == 0


def meom(*words, parents=None):
    """Meom from sign words, e.g. meom("+-", "") for a marked and a plain circle."""
    parents = parents or [None] * len(words)
    return Meom(tuple(Circle(p, tuple(w)) for p, w in zip(parents, words)))


EMPTY = Meom()
CIRCLE = meom("")
CIRCLE_PM = meom("+-")


def meom_to_json(m):
    return {
        "circles": [
            {"parent": c.parent, "marks": list(c.marks)} for c in m.circles
        ]
    }


def meom_from_json(data):
    if not isinstance(data, dict) or not isinstance(data.get("circles"), list):
        _err("SchemaError", "/circles: expected a list")
    circles = []
    for i, c in enumerate(data["circles"]):
        parent = c.get("parent")
        if parent is not None and not isinstance(parent, int):
            _err("SchemaError", f"/circles/{i}/parent: expected null or an integer")
        marks = c.get("marks", [])
        if not isinstance(marks, list) or any(s not in "+-" for s in marks):
            _err("SchemaError", f"/circles/{i}/marks: expected a list of '+'/'-'")
        circles.append(Circle(parent, tuple(marks)))
    return Meom(tuple(circles))


# -- cobordisms ---------------------------------------------------------------


@dataclass
class FacetData:
    chi: int
    dots: int = 0


@dataclass(frozen=True)
class SeamArc:
    ends: tuple[tuple, tuple]        # ((loc, circle, mark), (loc, circle, mark))
    sides: tuple[int, int]           # facet on side 0, facet on side 1
    next_side: tuple[int, int]       # per end: which side fills the following-arc sector


@dataclass(frozen=True)
class SeamCircle:
    sides: tuple[int, int]
    preferred: int  # index into sides


class Cobordism:
    def __init__(self, bottom, top, facets, arc_facet, seam_arcs=(), seam_circles=(), check=True):
        self.bottom = bottom
        self.top = top
        self.facets = [FacetData(f.chi, f.dots) if isinstance(f, FacetData) else FacetData(*f) for f in facets]
        self.arc_facet = dict(arc_facet)
        self.seam_arcs = list(seam_arcs)
        self.seam_circles = list(seam_circles)
        if check:
            self.validate()

    # -- structural helpers ------------------------------------------------

    def boundary(self, loc):
        return self.bottom if loc == "bot" else self.top

    def sign_at(self, ref):
        loc, c, m = ref
        return self.boundary(loc).sign(c, m)

    def _sector_arcs(self, ref):
        """(preceding arc ref, following arc ref) at a marked point."""
        loc, c, m = ref
        b = self.boundary(loc)
        return (loc, c, b.prev_arc(c, m)), (loc, c, b.next_arc(c, m))

    def seam_arc_preferred(self, arc):
        """Preferred side index of a seam arc, derived from its endpoint signs."""
        prefs = set()
        for i, ref in enumerate(arc.ends):
            ns = arc.next_side[i]
            prefs.add(ns if self.sign_at(ref) == "+" else 1 - ns)
        if len(prefs) != 1:
            _err("CoorientationClash", f"seam arc {arc} has inconsistent co-orientation")
        return prefs.pop()

    def euler(self):
        total_marks = sum(self.bottom.mark_count(c) for c in range(len(self.bottom.circles)))
        total_marks += sum(self.top.mark_count(c) for c in range(len(self.top.circles)))
        return sum(f.chi for f in self.facets) + len(self.seam_arcs) - total_marks

    def total_dots(self):
        return sum(f.dots for f in self.facets)

    def degree(self):
        return -self.euler() + 2 * self.total_dots()

    def validate(self):
        n = len(self.facets)
        wanted = {("bot",) + arc for arc in self.bottom.arcs()} | {
            ("top",) + arc for arc in self.top.arcs()
        }
        if set(self.arc_facet) != wanted:
            missing = wanted - set(self.arc_facet)
            extra = set(self.arc_facet) - wanted
            _err("ArcCoverage", f"missing={sorted(missing)} extra={sorted(extra)}")
        for ref, f in self.arc_facet.items():
            if not (0 <= f < n):
                _err("BadFacet", f"arc {ref} assigned to facet {f}")
        ends = {}
        for k, arc in enumerate(self.seam_arcs):
            if arc.ends[0] == arc.ends[1]:
                _err("BadSeamArc", f"seam arc {k} has coincident endpoints")
            for i, ref in enumerate(arc.ends):
                loc, c, m = ref
                if not (0 <= m < self.boundary(loc).mark_count(c)):
                    _err("BadSeamArc", f"seam arc {k} ends at missing mark {ref}")
                if ref in ends:
                    _err("MarkReused", f"mark {ref} ends seam arcs {ends[ref]} and {k}")
                ends[ref] = k
                prev_ref, next_ref = self._sector_arcs(ref)
                ns = arc.next_side[i]
                if arc.sides[ns] != self.arc_facet[next_ref]:
                    _err(
                        "SideMismatch",
                        f"seam arc {k} side {ns} should abut facet of {next_ref}",
                    )
                if arc.sides[1 - ns] != self.arc_facet[prev_ref]:
                    _err(
                        "SideMismatch",
                        f"seam arc {k} side {1 - ns} should abut facet of {prev_ref}",
                    )
            (l0, _, _), (l1, _, _) = arc.ends
            s0, s1 = self.sign_at(arc.ends[0]), self.sign_at(arc.ends[1])
            if l0 == l1 and s0 == s1:
                _err("CoorientationClash", f"same-level seam arc {k} joins {s0}{s1}")
            if l0 != l1 and s0 != s1:
                _err("CoorientationClash", f"cross-level seam arc {k} joins {s0}{s1}")
            self.seam_arc_preferred(arc)
        for ref in self.bottom.marks():
            if ("bot",) + ref not in ends:
                _err("MarkUnused", f"bottom mark {ref} ends no seam arc")
        for ref in self.top.marks():
            if ("top",) + ref not in ends:
                _err("MarkUnused", f"top mark {ref} ends no seam arc")
        for k, circ in enumerate(self.seam_circles):
            for f in circ.sides:
                if not (0 <= f < n):
                    _err("BadFacet", f"seam circle {k} side facet {f} missing")
            if circ.preferred not in (0, 1):
                _err("BadPreference", f"seam circle {k} prefers {circ.preferred}")
        if self.bottom.weight() != self.top.weight():
            _err(
                "WeightMismatch",
                f"bottom weight {self.bottom.weight()} != top weight {self.top.weight()}",
            )

    def copy(self):
        return Cobordism(
            self.bottom,
            self.top,
            [(f.chi, f.dots) for f in self.facets],
            self.arc_facet,
            self.seam_arcs,
            self.seam_circles,
            check=False,
        )

    def with_dot(self, loc, circle, arc=0, count=1):
        """Dots added to the facet owning a boundary arc (same as composing
        a dotted identity tube there)."""
        out = self.copy()
        out.facets[self.arc_facet[(loc, circle, arc)]].dots += count
        return out

    def with_dot_on_facet(self, facet, count=1):
        out = self.copy()
        out.facets[facet].dots += count
        return out

    def _canonical_key(self):
        """Hashable form invariant under facet renumbering and under the
        side/end ordering freedom inside seam records."""
        label = {}

        def touch(f):
            if f not in label:
                label[f] = len(label)

        def arc_ends_ns(a):
            if a.ends[0] <= a.ends[1]:
                return a.ends, a.next_side
            return (a.ends[1], a.ends[0]), (a.next_side[1], a.next_side[0])

        for ref in sorted(self.arc_facet):
            touch(self.arc_facet[ref])
        for a in sorted(self.seam_arcs, key=lambda a: tuple(sorted(a.ends))):
            ends, ns = arc_ends_ns(a)
            touch(a.sides[ns[0]])
            touch(a.sides[1 - ns[0]])

        def rank(f):
            if f in label:
                return (0, label[f])
            return (1, self.facets[f].chi, self.facets[f].dots)

        for i in sorted(
            range(len(self.seam_circles)),
            key=lambda i: tuple(sorted(rank(f) for f in self.seam_circles[i].sides)),
        ):
            for f in sorted(self.seam_circles[i].sides, key=rank):
                touch(f)
        for f in sorted(range(len(self.facets)), key=rank):
            touch(f)

        arcs = []
        for a in self.seam_arcs:
            ends, ns = arc_ends_ns(a)
            sides = (label[a.sides[0]], label[a.sides[1]])
            if sides[0] > sides[1] or (sides[0] == sides[1] and ns[0] == 1):
                sides = (sides[1], sides[0])
                ns = (1 - ns[0], 1 - ns[1])
            arcs.append((ends, sides, ns))
        circles = []
        for c in self.seam_circles:
            sides = (label[c.sides[0]], label[c.sides[1]])
            pref = c.preferred
            if sides[0] > sides[1]:
                sides = (sides[1], sides[0])
                pref = 1 - pref
            elif sides[0] == sides[1]:
                pref = 0  # self-adjacent: the local sides are not distinguishable
            circles.append((sides, pref))
        inverse = sorted(label, key=label.get)
        return (
            self.bottom,
            self.top,
            tuple((self.facets[f].chi, self.facets[f].dots) for f in inverse),
            tuple(sorted((ref, label[f]) for ref, f in self.arc_facet.items())),
            tuple(sorted(arcs)),
            tuple(sorted(circles)),
        )

    def __eq__(self, other):
        if not isinstance(other, Cobordism):
            return NotImplemented
        return self._canonical_key() == other._canonical_key()

    def __repr__(self):
        return (
            f"Cobordism({len(self.bottom.circles)}->{len(self.top.circles)} circles, "
            f"{len(self.facets)} facets, {len(self.seam_arcs)} seam arcs, "
            f"{len(self.seam_circles)} seam circles, chi={self.euler()})"
        )


def _flip_loc(ref):
    loc, c, x = ref
    return ("top" if loc == "bot" else "bot", c, x)


def mirror(w):
    """Reflection in the horizontal plane: bottom and top swap, facet data,
    dots and preferred sides are preserved."""
    return Cobordism(
        w.top,
        w.bottom,
        [(f.chi, f.dots) for f in w.facets],
        {_flip_loc(ref): f for ref, f in w.arc_facet.items()},
        [
            SeamArc((_flip_loc(a.ends[0]), _flip_loc(a.ends[1])), a.sides, a.next_side)
            for a in w.seam_arcs
        ],
        list(w.seam_circles),
    )


def _shift_meom(m, parent_offset):
    return Meom(
        tuple(
            Circle(None if c.parent is None else c.parent + parent_offset, c.marks)
            for c in m.circles
        )
    )


def tensor(w1, w2):
    """Side-by-side disjoint union; w2's boundary circles follow w1's."""
    b_off = len(w1.bottom.circles)
    t_off = len(w1.top.circles)
    f_off = len(w1.facets)

    def remap(ref):
        loc, c, x = ref
        return (loc, c + (b_off if loc == "bot" else t_off), x)

    bottom = Meom(w1.bottom.circles + _shift_meom(w2.bottom, b_off).circles)
    top = Meom(w1.top.circles + _shift_meom(w2.top, t_off).circles)
    arc_facet = dict(w1.arc_facet)
    for ref, f in w2.arc_facet.items():
        arc_facet[remap(ref)] = f + f_off
    seam_arcs = list(w1.seam_arcs) + [
        SeamArc(
            (remap(a.ends[0]), remap(a.ends[1])),
            (a.sides[0] + f_off, a.sides[1] + f_off),
            a.next_side,
        )
        for a in w2.seam_arcs
    ]
    seam_circles = list(w1.seam_circles) + [
        SeamCircle((c.sides[0] + f_off, c.sides[1] + f_off), c.preferred)
        for c in w2.seam_circles
    ]
    facets = [(f.chi, f.dots) for f in w1.facets] + [(f.chi, f.dots) for f in w2.facets]
    return Cobordism(bottom, top, facets, arc_facet, seam_arcs, seam_circles)


def _flip_circles(w, flip_bottom, flip_top):
    """Reverse the canonical orientation of selected circles: the mark word
    reverses and flips sign, arcs and sector data relabel accordingly."""

    def mark_map(meom_obj, c, m):
        k = meom_obj.mark_count(c)
        return (k - m) % k

    def arc_map(meom_obj, c, a):
        k = meom_obj.mark_count(c)
        if k == 0:
            return a
        return (k - 1 - a) % k

    def flip_word(word):
        flipped = tuple("-" if s == "+" else "+" for s in word)
        if not flipped:
            return flipped
        return (flipped[0],) + tuple(reversed(flipped[1:]))

    def new_meom(meom_obj, which):
        return Meom(
            tuple(
                Circle(c.parent, flip_word(c.marks) if i in which else c.marks)
                for i, c in enumerate(meom_obj.circles)
            )
        )

    which = {"bot": flip_bottom, "top": flip_top}
    old = {"bot": w.bottom, "top": w.top}

    def remap_arc(ref):
        loc, c, a = ref
        if c in which[loc]:
            return (loc, c, arc_map(old[loc], c, a))
        return ref

    def remap_mark(ref):
        loc, c, m = ref
        if c in which[loc]:
            return (loc, c, mark_map(old[loc], c, m))
        return ref

    arc_facet = {remap_arc(ref): f for ref, f in w.arc_facet.items()}
    seam_arcs = []
    for a in w.seam_arcs:
        ns = list(a.next_side)
        for i, ref in enumerate(a.ends):
            loc, c, _ = ref
            if c in which[loc]:
                ns[i] = 1 - ns[i]
        seam_arcs.append(
            SeamArc((remap_mark(a.ends[0]), remap_mark(a.ends[1])), a.sides, tuple(ns))
        )
    return Cobordism(
        new_meom(w.bottom, flip_bottom),
        new_meom(w.top, flip_top),
        [(f.chi, f.dots) for f in w.facets],
        arc_facet,
        seam_arcs,
        list(w.seam_circles),
    )


def tensor_nested(w1, w2, bottom_parent=None, top_parent=None):
    """Insert w2's boundary forests inside given circles of w1's boundaries.

    When the insertion lands at odd depth the canonical orientations of all
    inserted circles flip; their stored data is transformed accordingly.
    """
    depth_shift_b = 0 if bottom_parent is None else w1.bottom.depth(bottom_parent) + 1
    depth_shift_t = 0 if top_parent is None else w1.top.depth(top_parent) + 1
    flipped = w2
    flip_b = set(range(len(w2.bottom.circles))) if depth_shift_b % 2 else set()
    flip_t = set(range(len(w2.top.circles))) if depth_shift_t % 2 else set()
    if flip_b or flip_t:
        flipped = _flip_circles(w2, flip_b, flip_t)
    out = tensor(w1, flipped)
    # reparent w2's roots under the chosen circles
    b_off = len(w1.bottom.circles)
    t_off = len(w1.top.circles)

    def reparent(meom_obj, offset, parent):
        circles = list(meom_obj.circles)
        for i in range(offset, len(circles)):
            if circles[i].parent is None:
                circles[i] = Circle(parent, circles[i].marks)
        return Meom(tuple(circles))

    bottom = out.bottom if bottom_parent is None else reparent(out.bottom, b_off, bottom_parent)
    top = out.top if top_parent is None else reparent(out.top, t_off, top_parent)
    return Cobordism(
        bottom,
        top,
        [(f.chi, f.dots) for f in out.facets],
        out.arc_facet,
        out.seam_arcs,
        out.seam_circles,
    )


def compose(w2, w1):
    """w2 after w1: glue along w1.top == w2.bottom (exact structural match,
    marked points identified index to index)."""
    interface = w1.top
    if interface != w2.bottom:
        _err(
            "BoundaryMismatch",
            f"top of first {interface} != bottom of second {w2.bottom}",
        )
    n1 = len(w1.facets)
    parent = list(range(n1 + len(w2.facets)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for c, a in interface.arcs():
        union(w1.arc_facet[("top", c, a)], n1 + w2.arc_facet[("bot", c, a)])

    members = {}
    for i in range(len(parent)):
        members.setdefault(find(i), []).append(i)
    reps = sorted(members)
    cls = {}
    for new_idx, rep in enumerate(reps):
        for m in members[rep]:
            cls[m] = new_idx

    def piece_chi(i):
        return w1.facets[i].chi if i < n1 else w2.facets[i - n1].chi

    def piece_dots(i):
        return w1.facets[i].dots if i < n1 else w2.facets[i - n1].dots

    chi = [0] * len(reps)
    dots = [0] * len(reps)
    for i in range(len(parent)):
        chi[cls[i]] += piece_chi(i)
        dots[cls[i]] += piece_dots(i)
    for c, a in interface.arcs():
        if interface.mark_count(c) >= 1:
            chi[cls[w1.arc_facet[("top", c, a)]]] += 1
    for c, m in interface.marks():
        p_arc = ("top", c, interface.prev_arc(c, m))
        n_arc = ("top", c, interface.next_arc(c, m))
        cls_prev = cls[w1.arc_facet[p_arc]]
        cls_next = cls[w1.arc_facet[n_arc]]
        if cls_prev == cls_next:
            chi[cls_prev] -= 3  # four corner copies glue to one point
        else:
            chi[cls_prev] -= 1
            chi[cls_next] -= 1

    arc_facet = {}
    for (loc, c, a), f in w1.arc_facet.items():
        if loc == "bot":
            arc_facet[("bot", c, a)] = cls[f]
    for (loc, c, a), f in w2.arc_facet.items():
        if loc == "top":
            arc_facet[("top", c, a)] = cls[n1 + f]

    seam_circles = [
        SeamCircle((cls[s.sides[0]], cls[s.sides[1]]), s.preferred)
        for s in w1.seam_circles
    ] + [
        SeamCircle((cls[n1 + s.sides[0]], cls[n1 + s.sides[1]]), s.preferred)
        for s in w2.seam_circles
    ]

    # Chain seam arcs across the interface.  Piece arcs are tagged with the
    # cobordism they come from so interface refs can be recognized.
    pieces = []
    for a in w1.seam_arcs:
        pieces.append(("1", a))
    for a in w2.seam_arcs:
        pieces.append(("2", a))

    def is_interface(tag, ref):
        loc = ref[0]
        return (tag == "1" and loc == "top") or (tag == "2" and loc == "bot")

    def out_ref(tag, ref):
        # boundary refs of the composite
        loc, c, x = ref
        return (loc, c, x)

    def side_class(tag, f):
        return cls[f if tag == "1" else n1 + f]

    link = {}
    for idx, (tag, a) in enumerate(pieces):
        for e, ref in enumerate(a.ends):
            if is_interface(tag, ref):
                key = (ref[1], ref[2])
                link.setdefault(key, []).append((idx, e))
    for key, hits in link.items():
        if len(hits) != 2:
            _err("SeamLinkError", f"interface mark {key} met by {len(hits)} seam ends")

    visited = set()
    new_arcs = []
    new_circles = []

    def walk(start_idx, start_end):
        """Walk a chain starting by leaving arc start_idx through the end
        opposite start_end; returns (refs, side classes, next_side data,
        preferred votes, closed?)."""
        side_map = {0: 0, 1: 1}
        side_facets = {0: set(), 1: set()}
        prefs = []
        idx, e_in = start_idx, start_end
        while True:
            tag, arc = pieces[idx]
            visited.add(idx)
            for s in (0, 1):
                side_facets[side_map[s]].add(side_class(tag, arc.sides[s]))
            e_out = 1 - e_in
            ref_out = arc.ends[e_out]
            if not is_interface(tag, ref_out):
                end_next_side = side_map[arc.next_side[e_out]]
                return (ref_out, end_next_side, side_facets, prefs, False)
            key = (ref_out[1], ref_out[2])
            hits = link[(key)]
            (o_idx, o_end) = hits[0] if hits[0] != (idx, e_out) else hits[1]
            sign = interface.sign(*key)
            next_label = side_map[arc.next_side[e_out]]
            prefs.append(next_label if sign == "+" else 1 - next_label)
            o_arc = pieces[o_idx][1]
            if (o_idx, o_end) == (start_idx, start_end):
                # closed: threading must come back without a side swap
                entry_map = {
                    o_arc.next_side[o_end]: next_label,
                    1 - o_arc.next_side[o_end]: 1 - next_label,
                }
                if entry_map != {0: 0, 1: 1}:
                    _err("SeamMonodromy", "seam circle closes with swapped sides")
                return (None, None, side_facets, prefs, True)
            side_map = {
                o_arc.next_side[o_end]: next_label,
                1 - o_arc.next_side[o_end]: 1 - next_label,
            }
            idx, e_in = o_idx, o_end

    # open chains start at non-interface ends
    starts = []
    for idx, (tag, a) in enumerate(pieces):
        for e, ref in enumerate(a.ends):
            if not is_interface(tag, ref):
                starts.append((idx, e))
    for idx, e in sorted(starts):
        if idx in visited:
            continue
        tag, arc = pieces[idx]
        start_ref = arc.ends[e]
        start_next_side = arc.next_side[e]
        ref_out, end_ns, side_facets, _prefs, closed = walk(idx, e)
        assert not closed
        sides = []
        for label in (0, 1):
            facs = side_facets[label]
            if len(facs) != 1:
                _err("SeamSideError", f"seam side facets disagree along a chain: {facs}")
            sides.append(facs.pop())
        new_arcs.append(
            SeamArc(
                (out_ref(tag, start_ref), ref_out),
                tuple(sides),
                (start_next_side, end_ns),
            )
        )
    # remaining pieces form closed circles
    for idx in range(len(pieces)):
        if idx in visited:
            continue
        _, _, side_facets, prefs, closed = walk(idx, 0)
        assert closed and prefs
        if len(set(prefs)) != 1:
            _err("CoorientationClash", "closed seam chain with inconsistent co-orientation")
        sides = []
        for label in (0, 1):
            facs = side_facets[label]
            if len(facs) != 1:
                _err("SeamSideError", f"seam side facets disagree along a cycle: {facs}")
            sides.append(facs.pop())
        new_circles.append(SeamCircle(tuple(sides), prefs[0]))

    result = Cobordism(
        w1.bottom,
        w2.top,
        list(zip(chi, dots)),
        arc_facet,
        new_arcs,
        seam_circles + new_circles,
    )
    expected = w1.euler() + w2.euler()
    assert result.euler() == expected, (
        f"Euler ledger drift: {result.euler()} != {expected}"
    )
    return result


def close(w):
    """A nullbounding cobordism as a closed seamed surface."""
    if w.bottom.circles or w.top.circles:
        _err("BoundaryNotEmpty", "close needs an empty-to-empty cobordism")
    if w.seam_arcs:
        _err("BoundaryNotEmpty", "seam arcs require boundary marks")
    slots = [0] * len(w.facets)
    seams = []
    for circ in w.seam_circles:
        f0, f1 = circ.sides
        a = (f0, slots[f0])
        slots[f0] += 1
        b = (f1, slots[f1])
        slots[f1] += 1
        seams.append(sf.Seam(a, b, "a" if circ.preferred == 0 else "b"))
    facets = []
    for i, f in enumerate(w.facets):
        twice_genus = 2 - f.chi - slots[i]
        if twice_genus % 2:
            _err("NonIntegerGenus", f"facet {i}: chi={f.chi}, slots={slots[i]}")
        genus = twice_genus // 2
        if genus < 0:
            _err("NegativeGenus", f"facet {i}: genus {genus}")
        facets.append(sf.Facet(genus, f.dots, slots[i]))
    return sf.ClosedSeamedSurface(tuple(facets), tuple(seams))


# -- builders -------------------------------------------------------------------


def empty_cobordism():
    return Cobordism(EMPTY, EMPTY, [], {})


def cup(dots=0):
    return Cobordism(EMPTY, CIRCLE, [(1, dots)], {("top", 0, 0): 0})


def cap(dots=0):
    return mirror(cup(dots))


def tube(m):
    """The identity cobordism on a meom."""
    facets = []
    arc_facet = {}
    seam_arcs = []
    for c in range(len(m.circles)):
        k = m.mark_count(c)
        if k == 0:
            f = len(facets)
            facets.append((0, 0))
            arc_facet[("bot", c, 0)] = f
            arc_facet[("top", c, 0)] = f
            continue
        base = len(facets)
        for a in range(k):
            facets.append((1, 0))
            arc_facet[("bot", c, a)] = base + a
            arc_facet[("top", c, a)] = base + a
        for mk in range(k):
            prev_f = base + (mk - 1) % k
            next_f = base + mk
            seam_arcs.append(
                SeamArc(
                    (("bot", c, mk), ("top", c, mk)),
                    (prev_f, next_f),
                    (1, 1),
                )
            )
    return Cobordism(m, m, facets, arc_facet, seam_arcs)


def pants():
    """Two circles merge into one (the multiplication cobordism)."""
    b = meom("", "")
    t = CIRCLE
    return Cobordism(
        b,
        t,
        [(-1, 0)],
        {("bot", 0, 0): 0, ("bot", 1, 0): 0, ("top", 0, 0): 0},
    )


def copants():
    return mirror(pants())


def sigma_annulus(sign="+"):
    """Annulus with one closed seam circle.

    sign '+' co-orients the seam toward the incoming (bottom) facet; this is
    the variant whose induced map on the circle state space is the algebra
    involution (the '-' variant is its negative).
    """
    facets = [(0, 0), (0, 0)]  # bottom collar, top collar
    arc_facet = {("bot", 0, 0): 0, ("top", 0, 0): 1}
    preferred = 0 if sign == "+" else 1
    return Cobordism(
        CIRCLE, CIRCLE, facets, arc_facet, [], [SeamCircle((0, 1), preferred)]
    )


def tube_with_contractible_seam(direction="in", dots_inside=0, dots_outside=0):
    """Identity tube carrying a small seam circle bounding a disk on the
    facet; 'in' co-orients into the disk."""
    facets = [(-1, dots_outside), (1, dots_inside)]
    arc_facet = {("bot", 0, 0): 0, ("top", 0, 0): 0}
    preferred = 1 if direction == "in" else 0
    return Cobordism(
        CIRCLE, CIRCLE, facets, arc_facet, [], [SeamCircle((0, 1), preferred)]
    )


def closed_piece(genus=0, dots=0):
    """A closed seamless component, as an empty-to-empty cobordism."""
    return Cobordism(EMPTY, EMPTY, [(2 - 2 * genus, dots)], {})


def n_punctured_sphere(n, pattern=(), dots_core=0):
    """Sphere with n open disks removed, one seam circle around each hole.

    pattern[i] is 'out' when the i-th seam is co-oriented out of the core
    facet (toward its boundary circle), 'in' otherwise."""
    if len(pattern) != n:
        _err("BadInput", "need one co-orientation per puncture")
    top = meom(*([""] * n))
    facets = [(2 - n, dots_core)] + [(0, 0)] * n
    arc_facet = {("top", c, 0): 1 + c for c in range(n)}
    circles = [
        SeamCircle((0, 1 + i), 1 if pattern[i] == "out" else 0) for i in range(n)
    ]
    return Cobordism(EMPTY, top, facets, arc_facet, [], circles)


def chord_disk(word, chords, dots=None):
    """Disk bounding one marked circle, its marks paired off by disjoint
    chords of seam; dots live on the region owning a given arc.

    Chords are (mark, mark) pairs forming a non-crossing perfect matching;
    each chord must join a '+' to a '-'.
    """
    word = tuple(word)
    k = len(word)
    norm = []
    seen = set()
    for u, v in chords:
        if word[u] == word[v]:
            _err("CoorientationClash", f"chord {(u, v)} joins equal signs")
        norm.append((min(u, v), max(u, v)))
        seen.update((u, v))
    if seen != set(range(k)):
        _err("BadInput", "chords must match every mark exactly once")
    for (a, b) in norm:
        for (c, d) in norm:
            if a < c < b < d:
                _err("BadInput", f"chords {(a, b)} and {(c, d)} cross")

    def innermost(arc):
        best = None
        for idx, (a, b) in enumerate(norm):
            if a <= arc < b and (best is None or norm[best][0] < a):
                best = idx
        return best  # None = outer region

    # facet 0 is the outer region; facet 1+i belongs to chord i
    facets = [(1, 0) for _ in range(len(norm) + 1)]

    def region_facet(arc):
        inner = innermost(arc)
        return 0 if inner is None else 1 + inner

    arc_facet = {("top", 0, a): region_facet(a) for a in range(k)}
    seam_arcs = []
    for idx, (a, b) in enumerate(norm):
        parent_chord = innermost_parent(norm, idx)
        parent_facet = 0 if parent_chord is None else 1 + parent_chord
        seam_arcs.append(
            SeamArc(
                (("top", 0, a), ("top", 0, b)),
                (1 + idx, parent_facet),
                (0, 1),
            )
        )
    facets = [list(f) for f in facets]
    if dots:
        for arc, count in dots.items():
            facets[region_facet(arc)][1] += count
    return Cobordism(EMPTY, meom("".join(word)), facets, arc_facet, seam_arcs)


def innermost_parent(norm, idx):
    a, b = norm[idx]
    best = None
    for j, (c, d) in enumerate(norm):
        if j != idx and c < a and b <= d and (best is None or norm[best][0] < c):
            best = j
    return best


def seamed_cup(dotted=False):
    """Disk over the two-point balanced circle, split by one seam arc; the
    dotted version carries its dot on the non-preferred side."""
    return chord_disk("+-", [(0, 1)], dots={1: 1} if dotted else None)


def twisted_tube(dots=0):
    """Tube bounding two balanced two-point circles, with two seam arcs
    crossing between them; dots sit on the non-preferred facet."""
    top = meom("+-", "+-")
    facets = [(1, 0), (1, dots)]
    arc_facet = {
        ("top", 0, 0): 0,
        ("top", 1, 0): 0,
        ("top", 0, 1): 1,
        ("top", 1, 1): 1,
    }
    seam_arcs = [
        SeamArc((("top", 0, 0), ("top", 1, 1)), (0, 1), (0, 1)),
        SeamArc((("top", 0, 1), ("top", 1, 0)), (0, 1), (1, 0)),
    ]
    return Cobordism(EMPTY, top, facets, arc_facet, seam_arcs)


def pair_create(m, circle, arc, order="+-"):
    """Layer inserting two oppositely co-oriented marked points into one
    boundary arc; the seam notch cuts a disk off near the new pair.

    With order '+-' the notch seam is co-oriented into the disk.
    """
    if tuple(order) not in (("+", "-"), ("-", "+")):
        _err("BadInput", "order must be '+-' or '-+'")
    k = m.mark_count(circle)
    if not (0 <= arc < m.arc_count(circle)):
        _err("BadInput", f"circle {circle} has no arc {arc}")
    words = [list(c.marks) for c in m.circles]
    words[circle] = (
        list(m.circles[circle].marks[: arc + 1])
        + list(order)
        + list(m.circles[circle].marks[arc + 1 :])
        if k
        else list(order)
    )
    top = Meom(
        tuple(
            Circle(c.parent, tuple(w)) for c, w in zip(m.circles, words)
        )
    )

    facets = []
    arc_facet = {}
    seam_arcs = []
    for c in range(len(m.circles)):
        kc = m.mark_count(c)
        if c != circle:
            if kc == 0:
                f = len(facets)
                facets.append((0, 0))
                arc_facet[("bot", c, 0)] = f
                arc_facet[("top", c, 0)] = f
            else:
                base = len(facets)
                for a in range(kc):
                    facets.append((1, 0))
                    arc_facet[("bot", c, a)] = base + a
                    arc_facet[("top", c, a)] = base + a
                for mk in range(kc):
                    seam_arcs.append(
                        SeamArc(
                            (("bot", c, mk), ("top", c, mk)),
                            (base + (mk - 1) % kc, base + mk),
                            (1, 1),
                        )
                    )
            continue
        if kc == 0:
            rest = len(facets)
            facets.append((0, 0))
            disk = len(facets)
            facets.append((1, 0))
            arc_facet[("bot", c, 0)] = rest
            arc_facet[("top", c, 0)] = disk  # mid arc between the new pair
            arc_facet[("top", c, 1)] = rest
            seam_arcs.append(
                SeamArc(
                    (("top", c, 0), ("top", c, 1)),
                    (disk, rest),
                    (0, 1),
                )
            )
        else:
            base = len(facets)
            sector = {}
            for a in range(kc):
                sector[a] = base + a
                facets.append((1, 0))
            disk = len(facets)
            facets.append((1, 0))
            for a in range(kc):
                arc_facet[("bot", c, a)] = sector[a]
            for a in range(kc):
                if a < arc:
                    arc_facet[("top", c, a)] = sector[a]
                elif a == arc:
                    arc_facet[("top", c, a)] = sector[a]
                    arc_facet[("top", c, a + 1)] = disk
                    arc_facet[("top", c, a + 2)] = sector[a]
                else:
                    arc_facet[("top", c, a + 2)] = sector[a]
            for mk in range(kc):
                top_mark = mk if mk <= arc else mk + 2
                seam_arcs.append(
                    SeamArc(
                        (("bot", c, mk), ("top", c, top_mark)),
                        (sector[(mk - 1) % kc], sector[mk]),
                        (1, 1),
                    )
                )
            seam_arcs.append(
                SeamArc(
                    (("top", c, arc + 1), ("top", c, arc + 2)),
                    (disk, sector[arc]),
                    (0, 1),
                )
            )
    return Cobordism(m, top, facets, arc_facet, seam_arcs)


def pair_cancel(m, circle, mark):
    """Layer cancelling the adjacent opposite pair at (mark, mark+1); the
    mirror of the matching pair_create.  Needs mark >= 1 so the reduced
    word keeps its index alignment."""
    k = m.mark_count(circle)
    if not (1 <= mark <= k - 2):
        _err("BadInput", "cancel needs an interior adjacent pair (mark in 1..k-2)")
    w = m.circles[circle].marks
    order = (w[mark], w[mark + 1])
    if order[0] == order[1]:
        _err("CoorientationClash", "pair to cancel must have opposite signs")
    reduced = list(m.circles[circle].marks[:mark]) + list(
        m.circles[circle].marks[mark + 2 :]
    )
    reduced_meom = Meom(
        tuple(
            Circle(c.parent, tuple(reduced) if i == circle else c.marks)
            for i, c in enumerate(m.circles)
        )
    )
    return mirror(pair_create(reduced_meom, circle, mark - 1, order))


# -- generator words ------------------------------------------------------------


def _restrict_meom(m, keep):
    """Sub-meom of root circles `keep` (order preserved); they must be
    parentless and childless."""
    keep = list(keep)
    for c in keep:
        if not (0 <= c < len(m.circles)):
            _err("BadInput", f"no circle {c} on the boundary")
        if m.circles[c].parent is not None:
            _err("BadInput", f"circle {c} is nested; words act on root circles")
    for i, c in enumerate(m.circles):
        if c.parent in keep:
            _err("BadInput", f"circle {i} is nested inside a word target")
    return Meom(tuple(Circle(None, m.circles[c].marks) for c in keep))


def _relabel_boundary(w, loc, mapping):
    """Renumber circles on one boundary; mapping is old index -> new index."""
    old = w.boundary(loc)
    circles = [None] * len(old.circles)
    for o, n in mapping.items():
        c = old.circles[o]
        p = None if c.parent is None else mapping[c.parent]
        circles[n] = Circle(p, c.marks)
    new_meom = Meom(tuple(circles))

    def remap(ref):
        l, c, x = ref
        if l != loc:
            return ref
        return (l, mapping[c], x)

    out = Cobordism(
        new_meom if loc == "bot" else w.bottom,
        new_meom if loc == "top" else w.top,
        [(f.chi, f.dots) for f in w.facets],
        {remap(ref): f for ref, f in w.arc_facet.items()},
        [
            SeamArc((remap(a.ends[0]), remap(a.ends[1])), a.sides, a.next_side)
            for a in w.seam_arcs
        ],
        list(w.seam_circles),
    )
    return out


def layer(m, targets, piece):
    """Identity tube on `m` with `piece` substituted over the target root
    circles; the piece's top circles splice in at the first target slot."""
    targets = list(targets)
    sub = _restrict_meom(m, targets)
    if piece.bottom != sub:
        _err("BoundaryMismatch", f"piece bottom {piece.bottom} != targets {sub}")
    rest = [c for c in range(len(m.circles)) if c not in targets]
    base = tensor(tube(_restrict_meom(m, rest)), piece)
    bot_map = {p: c for p, c in enumerate(rest + targets)}
    base = _relabel_boundary(base, "bot", bot_map)
    # final top order: non-targets keep relative order, piece tops splice
    # at the position of the first target
    n_piece_top = len(piece.top.circles)
    anchor = min(targets) if targets else len(m.circles)
    final = []
    for c in range(len(m.circles)):
        if c == anchor:
            final.extend(("piece", i) for i in range(n_piece_top))
        if c not in targets:
            final.append(("rest", c))
    if anchor == len(m.circles):
        final.extend(("piece", i) for i in range(n_piece_top))
    top_map = {}
    for new_idx, (kind, val) in enumerate(final):
        if kind == "rest":
            top_map[rest.index(val)] = new_idx
        else:
            top_map[len(rest) + val] = new_idx
    return _relabel_boundary(base, "top", top_map)


class WordError(CobordismError):
    def __init__(self, message):
        super().__init__("WordError", message)


def build_word(ops):
    """Assemble a cobordism from the empty meom by stacking generators.

    Supported ops (circle arguments index the current top meom):
      ["cup"], ["dotted_cup"], ["seamed_cup"], ["dotted_seamed_cup"],
      ["twisted_tube"], ["dotted_twisted_tube"],
      ["chord_disk", word, chords] , ["sphere", dots], ["torus"],
      ["cap", c], ["dot", c], ["dot", c, arc], ["sigma+", c], ["sigma-", c],
      ["seam_circle", c, "in"|"out"],
      ["pants", c1, c2], ["copants", c],
      ["pair_create", c, arc, order], ["pair_cancel", c, mark]
    """
    w = empty_cobordism()
    for op in ops:
        name, *args = op
        top = w.top
        try:
            if name == "cup":
                w = tensor(w, cup())
            elif name == "dotted_cup":
                w = tensor(w, cup(dots=1))
            elif name == "seamed_cup":
                w = tensor(w, seamed_cup())
            elif name == "dotted_seamed_cup":
                w = tensor(w, seamed_cup(dotted=True))
            elif name == "twisted_tube":
                w = tensor(w, twisted_tube())
            elif name == "dotted_twisted_tube":
                w = tensor(w, twisted_tube(dots=1))
            elif name == "chord_disk":
                word_arg, chords = args[0], [tuple(ch) for ch in args[1]]
                dots = None
                if len(args) > 2 and args[2]:
                    dots = {int(k): v for k, v in dict(args[2]).items()}
                w = tensor(w, chord_disk(word_arg, chords, dots))
            elif name == "sphere":
                w = tensor(w, closed_piece(0, args[0] if args else 0))
            elif name == "torus":
                w = tensor(w, closed_piece(1, 0))
            elif name == "cap":
                w = compose(layer(top, [args[0]], cap()), w)
            elif name == "dot":
                c = args[0]
                arc = args[1] if len(args) > 1 else 0
                w = w.with_dot("top", c, arc)
            elif name in ("sigma+", "sigma-"):
                w = compose(layer(top, [args[0]], sigma_annulus(name[-1])), w)
            elif name == "seam_circle":
                w = compose(
                    layer(top, [args[0]], tube_with_contractible_seam(args[1])), w
                )
            elif name == "pants":
                c1, c2 = args
                w = compose(layer(top, [c1, c2], pants()), w)
            elif name == "copants":
                w = compose(layer(top, [args[0]], copants()), w)
            elif name == "pair_create":
                c, arc = args[0], args[1]
                order = args[2] if len(args) > 2 else "+-"
                sub = _restrict_meom(top, [c])
                w = compose(layer(top, [c], pair_create(sub, 0, arc, order)), w)
            elif name == "pair_cancel":
                c, mk = args[0], args[1]
                sub = _restrict_meom(top, [c])
                w = compose(layer(top, [c], pair_cancel(sub, 0, mk)), w)
            else:
                raise WordError(f"unknown generator {name!r}")
        except CobordismError as exc:
            if isinstance(exc, WordError):
                raise
            raise WordError(f"op {op}: {exc}") from exc
    return w


# -- JSON -----------------------------------------------------------------------


def to_json(w):
    return {
        "bottom": meom_to_json(w.bottom),
        "top": meom_to_json(w.top),
        "facets": [{"chi": f.chi, "dots": f.dots} for f in w.facets],
        "arc_facets": [
            {"loc": loc, "circle": c, "arc": a, "facet": f}
            for (loc, c, a), f in sorted(w.arc_facet.items())
        ],
        "seam_arcs": [
            {
                "ends": [list(a.ends[0]), list(a.ends[1])],
                "sides": list(a.sides),
                "next_side": list(a.next_side),
            }
            for a in w.seam_arcs
        ],
        "seam_circles": [
            {"sides": list(c.sides), "preferred": c.preferred}
            for c in w.seam_circles
        ],
    }


def from_json(data):
    if not isinstance(data, dict):
        _err("SchemaError", "/: expected an object")
    if "word" in data:
        if not isinstance(data["word"], list):
            _err("SchemaError", "/word: expected a list of generator ops")
        return build_word(data["word"])
    for key in ("bottom", "top", "facets", "arc_facets"):
        if key not in data:
            _err("SchemaError", f"/{key}: missing")
    bottom = meom_from_json(data["bottom"])
    top = meom_from_json(data["top"])
    facets = [(f["chi"], f.get("dots", 0)) for f in data["facets"]]
    arc_facet = {
        (e["loc"], e["circle"], e["arc"]): e["facet"] for e in data["arc_facets"]
    }
    seam_arcs = [
        SeamArc(
            (tuple(a["ends"][0]), tuple(a["ends"][1])),
            tuple(a["sides"]),
            tuple(a["next_side"]),
        )
        for a in data.get("seam_arcs", [])
    ]
    seam_circles = [
        SeamCircle(tuple(c["sides"]), c["preferred"])
        for c in data.get("seam_circles", [])
    ]
    return Cobordism(bottom, top, facets, arc_facet, seam_arcs, seam_circles)


def loads(text):
    return from_json(json.loads(text))
