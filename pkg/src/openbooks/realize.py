"""Exact realizations of curve systems as chord diagrams.

A family of paths with a chosen order of crossings along every cell
(and of endpoints along every boundary segment) is realized on a
rational circle: marked points in the prescribed cyclic order, path
pieces as straight chords, all incidence computed with Fraction
arithmetic.  Chord crossings then realize the system's intersections;
the canonical (cover-ordered) realization is minimal and is asserted
against lift linking, while freely chosen orders feed the exhaustive
bigon-move oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import cover
from .surface import PathWord, SurfaceError
from .words import cell_of, sign_of

Vec = Tuple[Fraction, Fraction]


def _circle_point(t: Fraction) -> Vec:
    den = 1 + t * t
    return (Fraction(1 - t * t, 1) / den, Fraction(2 * t, 1) / den)


def _cross(o: Vec, a: Vec, b: Vec) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _seg_intersection(p1, p2, q1, q2) -> Optional[Tuple[Fraction, Fraction]]:
    """Parameters (s, t) of the proper crossing of p1p2 with q1q2, or None."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    w = (q1[0] - p1[0], q1[1] - p1[1])
    s = (w[0] * d2[1] - w[1] * d2[0]) / den
    t = (w[0] * d1[1] - w[1] * d1[0]) / den
    if 0 < s < 1 and 0 < t < 1:
        return (s, t)
    return None


@dataclass(frozen=True)
class CurveSpec:
    kind: str                      # "arc" | "closed"
    letters: Tuple[int, ...]
    ends: Optional[Tuple[Tuple[int, int], Tuple[int, int]]]

    @staticmethod
    def of(p: PathWord) -> "CurveSpec":
        return CurveSpec(p.kind, p.letters, p.ends)


@dataclass
class Crossing:
    ci: int
    chord_i: int
    param_i: Fraction
    cj: int
    chord_j: int
    param_j: Fraction
    sign: int
    point: Vec


class RealizedSystem:
    """Chord-diagram realization of a family of paths.

    ``occ_order[cell]`` lists (curve index, letter index) along the
    cell; ``point_order[(seg, station)]`` disambiguates arcs sharing an
    endpoint station (order of marks counterclockwise).
    """

    def __init__(self, S, curves: Sequence[CurveSpec], occ_order, point_order=None,
                 jitter: int = 0):
        self.S = S
        self.curves = list(curves)
        self.occ_order = {c: list(v) for c, v in occ_order.items()}
        self.point_order = {k: list(v) for k, v in (point_order or {}).items()}
        self._build(jitter)
        for retry in range(1, 8):
            if not self._degenerate():
                break
            self._build(retry)
        else:
            raise SurfaceError("could not reach a generic chord position")
        self._collect_crossings()

    # -- construction ----------------------------------------------------

    def _marks_for_item(self, item):
        S = self.S
        if item[0] == "side":
            _, c, copy = item
            order = self.occ_order.get(c, [])
            seq = order if copy == 0 else list(reversed(order))
            return [("occ", ci, t, copy) for ci, t in seq]
        _, seg = item
        pts: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
        for ci, cur in enumerate(self.curves):
            if cur.kind != "arc":
                continue
            for which, pt in enumerate(cur.ends):
                if pt[0] == seg:
                    pts.setdefault(pt, []).append((ci, which))
        out = []
        for pt in sorted(pts, key=lambda p: p[1]):
            group = pts[pt]
            if len(group) > 1:
                order = self.point_order.get(pt)
                if order is None:
                    group = sorted(group)
                else:
                    group = sorted(group, key=lambda cw: order.index(cw[0]))
            out.extend(("end", ci, which, None) for ci, which in group)
        return out

    def _build(self, jitter: int):
        marks = []
        for item in self.S.items:
            marks.extend(self._marks_for_item(item))
        self.marks = marks
        self.mark_index = {m: i for i, m in enumerate(marks)}
        n = len(marks)
        self.coords = []
        for i in range(n):
            t = Fraction(2 * i - n, 2)
            if jitter:
                t += Fraction((i * 7919 + jitter * 104729) % 997, 99991 * (jitter + 1))
            self.coords.append(_circle_point(t))
        self.chords = []  # per curve: list of (from mark id, to mark id)
        for ci, cur in enumerate(self.curves):
            self.chords.append(self._curve_chords(ci, cur))

    def _occ_mark(self, ci, t, sign, role):
        # role "exit": the side through which the strand leaves the polygon
        copy = (0 if sign > 0 else 1) if role == "exit" else (1 if sign > 0 else 0)
        return self.mark_index[("occ", ci, t, copy)]

    def _curve_chords(self, ci, cur):
        n = len(cur.letters)
        chords = []
        if cur.kind == "arc":
            prev = self.mark_index[("end", ci, 0, None)]
            for t, ltr in enumerate(cur.letters):
                chords.append((prev, self._occ_mark(ci, t, sign_of(ltr), "exit")))
                prev = self._occ_mark(ci, t, sign_of(ltr), "entry")
            chords.append((prev, self.mark_index[("end", ci, 1, None)]))
        else:
            if n == 0:
                return []
            for t in range(n):
                a = self._occ_mark(ci, (t - 1) % n, sign_of(cur.letters[(t - 1) % n]), "entry")
                b = self._occ_mark(ci, t, sign_of(cur.letters[t]), "exit")
                chords.append((a, b))
        return chords

    def _degenerate(self) -> bool:
        per_chord: Dict[Tuple[int, int], set] = {}
        crossings = self._raw_crossings()
        for (ci, a, sa, cj, b, sb, _sgn, _pt) in crossings:
            k1 = (ci, a)
            if sa in per_chord.setdefault(k1, set()):
                return True
            per_chord[k1].add(sa)
            k2 = (cj, b)
            if sb in per_chord.setdefault(k2, set()):
                return True
            per_chord[k2].add(sb)
        return False

    def _raw_crossings(self):
        out = []
        items = [(ci, k, ch) for ci, chs in enumerate(self.chords) for k, ch in enumerate(chs)]
        for x in range(len(items)):
            ci, a, (m1, m2) = items[x]
            for y in range(x + 1, len(items)):
                cj, b, (m3, m4) = items[y]
                if ci == cj and (a == b or {m1, m2} & {m3, m4}):
                    continue
                if {m1, m2} & {m3, m4}:
                    continue
                hit = _seg_intersection(self.coords[m1], self.coords[m2],
                                        self.coords[m3], self.coords[m4])
                if hit is None:
                    continue
                s, t = hit
                p1, p2 = self.coords[m1], self.coords[m2]
                q1, q2 = self.coords[m3], self.coords[m4]
                det = ((p2[0] - p1[0]) * (q2[1] - q1[1])
                       - (p2[1] - p1[1]) * (q2[0] - q1[0]))
                sgn = 1 if det > 0 else -1
                pt = (p1[0] + s * (p2[0] - p1[0]), p1[1] + s * (p2[1] - p1[1]))
                out.append((ci, a, s, cj, b, t, sgn, pt))
        return out

    def _collect_crossings(self):
        self.crossings: List[Crossing] = []
        for (ci, a, s, cj, b, t, sgn, pt) in self._raw_crossings():
            self.crossings.append(Crossing(ci, a, s, cj, b, t, sgn, pt))

    # -- queries ----------------------------------------------------------

    def pair_crossings(self, ci: int, cj: int) -> List[Crossing]:
        out = []
        for cr in self.crossings:
            if (cr.ci, cr.cj) == (ci, cj):
                out.append(cr)
            elif (cr.ci, cr.cj) == (cj, ci):
                out.append(Crossing(cj, cr.chord_j, cr.param_j,
                                    ci, cr.chord_i, cr.param_i, -cr.sign, cr.point))
        return out

    def self_crossings(self, ci: int) -> List[Crossing]:
        return [cr for cr in self.crossings if cr.ci == cr.cj == ci]

    def chord_dir(self, ci: int, k: int) -> Vec:
        m1, m2 = self.chords[ci][k]
        a, b = self.coords[m1], self.coords[m2]
        return (b[0] - a[0], b[1] - a[1])


def canonical_system(S, paths: Sequence[PathWord]) -> RealizedSystem:
    """Realization with the canonical (minimal) crossing orders."""
    specs = [CurveSpec.of(p) for p in paths]
    occ = cover.order_occurrences(S, [(c.kind, c.letters, c.ends) for c in specs])
    point_order = _canonical_point_order(S, specs)
    return RealizedSystem(S, specs, occ, point_order)


def stacked_system(S, paths: Sequence[PathWord]) -> RealizedSystem:
    """Naive realization: each curve's own canonical order, curves stacked
    one after another along every cell.  Valid but generally not minimal."""
    specs = [CurveSpec.of(p) for p in paths]
    occ: Dict[int, List[Tuple[int, int]]] = {}
    for ci, c in enumerate(specs):
        own = cover.order_occurrences(S, [(c.kind, c.letters, c.ends)])
        for cell, occs in own.items():
            occ.setdefault(cell, []).extend((ci, t) for _z, t in occs)
    point_order = {}
    for pt, group in _shared_points(specs).items():
        point_order[pt] = sorted(group)
    return RealizedSystem(S, specs, occ, point_order)


def _shared_points(specs):
    pts: Dict[Tuple[int, int], List[int]] = {}
    for ci, c in enumerate(specs):
        if c.kind != "arc":
            continue
        for pt in c.ends:
            pts.setdefault(pt, []).append(ci)
    return {pt: g for pt, g in pts.items() if len(g) > 1}


def _canonical_point_order(S, specs):
    """Counterclockwise order of marks at shared endpoint stations.

    Arcs leaving one boundary point never cross again, so the geodesic
    order of their germs is the reversed order of their far endpoints
    in the circle cut at the shared point.
    """
    out = {}
    for pt, group in _shared_points(specs).items():
        cut = ("pt", S.seg_pos[pt[0]], pt[1])
        fars = {}
        for ci in group:
            c = specs[ci]
            if c.ends[0] == pt:
                _a1, a2 = cover.arc_points(S, c.letters, c.ends)
                fars[ci] = a2
            else:
                from .words import invert_word
                a1, _a2 = cover.arc_points(S, c.letters, c.ends,
                                           shift=invert_word(c.letters))
                fars[ci] = a1
        starts = {ci: specs[ci].ends[0] == pt for ci in group}
        import functools

        def cmp(x, y):
            r = -cover.compare(S, fars[x], fars[y], init_cut=cut)
            if r != 0:
                return r
            # parallel arcs through the shared point: nest consistently
            d = -1 if x < y else (1 if x > y else 0)
            sigma_ref = 1 if starts[min(x, y)] else -1
            return -d * sigma_ref

        out[pt] = sorted(group, key=functools.cmp_to_key(cmp))
    return out


def assert_matches_linking(S, alpha: PathWord, beta: PathWord) -> RealizedSystem:
    """Canonical pair realization, asserted against universal-cover linking."""
    sysm = canonical_system(S, [alpha, beta])
    assert not sysm.self_crossings(0) and not sysm.self_crossings(1), \
        "embedded path realized with self-crossings"
    realized = sysm.pair_crossings(0, 1)
    expected = cover.pair_records(S, alpha, beta)
    if len(realized) != len(expected):
        raise AssertionError(
            "realized crossing count %d disagrees with linking count %d"
            % (len(realized), len(expected)))
    if sorted(cr.sign for cr in realized) != sorted(r[0] for r in expected):
        raise AssertionError("realized crossing signs disagree with linking signs")
    return sysm
