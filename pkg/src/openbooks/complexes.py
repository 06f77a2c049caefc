"""Cutting, gluing and re-presenting surfaces.

The polygon of a presentation, subdivided by the chords of a realized
cut system, is a disk with non-crossing chords: its faces, re-glued
across the band co-cores away from the cut, form a complex that can be
merged back into a single polygon.  This implements

  * cutting along disjoint arcs and closed curves (components, Euler
    characteristics, boundary counts),
  * re-presentation with transport of crossing words and endpoint
    stations through the cut,
  * plumbing: two cut-open surfaces glued to the four sides of a
    square, realizing the Murasugi sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import cover
from .oracle import reduced_pair_system
from .realize import CurveSpec, RealizedSystem, canonical_system, _cross
from .surface import PathWord, SurfaceError, SurfacePresentation, normalize
from .words import cell_of, enc, invert_word, reduce_word, sign_of


# ---------------------------------------------------------------------------
# face extraction from a realized disjoint system


@dataclass
class CutComplex:
    """Faces of a polygon cut along disjoint chords, with glue data.

    Edge keys:
      ("cellint", cell, i)            interval i of a band co-core
      ("segpiece", item_pos, k)       piece of a boundary segment
      ("cut", curve, chord)           one chord of a cut curve
    Each face is a counterclockwise cycle of darts
    (edge_key, orient, tag); shared edges carry opposite orients.
    """

    faces: List[List[Tuple]]
    seg_ranges: Dict[Tuple[int, int], Tuple]   # (item_pos, k) -> (seg, lo, hi)
    cell_marks: Dict[int, List[Tuple[int, int]]]  # cell -> cut marks in slot0 order


def _circle_nodes(sysm: RealizedSystem):
    """Circle subdivision: corners and marks in ccw order.

    Returns nodes (list of ("corner", item_pos) | ("mark", mark_id))
    and for each mark id its node index.
    """
    S = sysm.S
    nodes = []
    mark_node = {}
    idx = 0
    per_item: Dict[int, List[int]] = {}
    for m_id, mark in enumerate(sysm.marks):
        pos = _mark_item_pos(sysm, mark)
        per_item.setdefault(pos, []).append(m_id)
    for pos in range(S.M):
        nodes.append(("corner", pos))
        for m_id in per_item.get(pos, []):
            nodes.append(("mark", m_id))
    return nodes


def _mark_item_pos(sysm: RealizedSystem, mark) -> int:
    S = sysm.S
    if mark[0] == "occ":
        _, ci, t, copy = mark
        cell = cell_of(sysm.curves[ci].letters[t])
        return S.side_pos[cell][copy]
    _, ci, which, _ = mark
    seg = sysm.curves[ci].ends[which][0]
    return S.seg_pos[seg]


def build_cut_complex(S, cut_paths: Sequence[PathWord]) -> Tuple[CutComplex, RealizedSystem]:
    stations = set()
    for p in cut_paths:
        if p.kind == "arc":
            for pt in p.ends:
                if pt in stations:
                    raise SurfaceError("cut arcs must use distinct stations")
                stations.add(pt)
    sysm = canonical_system(S, cut_paths)
    if sysm.crossings:
        raise SurfaceError("cut system must be disjoint")
    return extract_faces(sysm), sysm


def extract_faces(sysm: RealizedSystem) -> CutComplex:
    S = sysm.S
    nodes = _circle_nodes(sysm)
    n_nodes = len(nodes)
    node_of_mark = {nd[1]: i for i, nd in enumerate(nodes) if nd[0] == "mark"}
    # chord incidence: mark id -> (curve, chord index, other mark)
    chord_at = {}
    for ci, chs in enumerate(sysm.chords):
        for k, (m1, m2) in enumerate(chs):
            chord_at[m1] = (ci, k, m2)
            chord_at[m2] = (ci, k, m1)

    # per item: count of marks before a node, to name boundary pieces
    piece_of_node = {}   # node index (start of ccw piece) -> (item_pos, k)
    item_mark_count: Dict[int, int] = {}
    counts: Dict[int, int] = {}
    for i, nd in enumerate(nodes):
        if nd[0] == "corner":
            cur_item = nd[1]
            counts[cur_item] = 0
            piece_of_node[i] = (cur_item, 0)
        else:
            counts[cur_item] += 1
            piece_of_node[i] = (cur_item, counts[cur_item])
    for pos, c in counts.items():
        item_mark_count[pos] = c

    def _piece_key(start_node: int):
        item_pos, k = piece_of_node[start_node]
        item = S.items[item_pos]
        if item[0] == "seg":
            return ("segpiece", item_pos, k), ("seg",)
        _, cell, copy = item
        n = item_mark_count[S.side_pos[cell][0]]
        n1 = item_mark_count[S.side_pos[cell][1]]
        if n != n1:
            raise SurfaceError("cell pierced unevenly by the cut system")
        i = k if copy == 0 else n - k
        return ("cellint", cell, i), ("slot", copy)

    visited = set()
    faces = []
    # directed elements: ("arc", node) = ccw piece starting at node;
    # ("chord", mark, other) = chord traversed mark -> other
    all_dirs = [("arc", i) for i in range(n_nodes)]
    for m in chord_at:
        all_dirs.append(("chord", m, chord_at[m][2]))

    def _next(cur):
        if cur[0] == "arc":
            head = (cur[1] + 1) % n_nodes
            nd = nodes[head]
            if nd[0] == "mark" and nd[1] in chord_at:
                return ("chord", nd[1], chord_at[nd[1]][2])
            return ("arc", head)
        _, m_from, m_to = cur
        return ("arc", node_of_mark[m_to])

    for start in all_dirs:
        if start in visited:
            continue
        cycle = []
        cur = start
        while True:
            visited.add(cur)
            if cur[0] == "arc":
                key, tag = _piece_key(cur[1])
                orient = 1 if tag == ("seg",) or tag[1] == 0 else -1
                cycle.append((key, orient, tag))
            else:
                _, m_from, m_to = cur
                ci, k, _ = chord_at[m_from]
                fwd = sysm.chords[ci][k][0] == m_from
                cycle.append((("cut", ci, k), 1 if fwd else -1, ("cut",)))
            cur = _next(cur)
            if cur == start:
                break
        faces.append(cycle)

    seg_ranges = {}
    for i, nd in enumerate(nodes):
        item_pos, k = piece_of_node[i]
        item = S.items[item_pos]
        if item[0] != "seg":
            continue
        seg = item[1]
        marks_here = [sysm.marks[nd2[1]] for nd2 in nodes
                      if nd2[0] == "mark" and _mark_item_pos(sysm, sysm.marks[nd2[1]]) == item_pos]
        stations = sorted(sysm.curves[m[1]].ends[m[2]][1] for m in marks_here)
        lo = None if k == 0 else stations[k - 1]
        hi = None if k == len(stations) else stations[k]
        seg_ranges[(item_pos, k)] = (seg, lo, hi)

    cell_marks = {}
    for cell, (p0, _p1) in S.side_pos.items():
        lst = []
        for m_id, mark in enumerate(sysm.marks):
            if mark[0] == "occ" and mark[3] == 0 and _mark_item_pos(sysm, mark) == p0:
                lst.append((mark[1], mark[2]))
        cell_marks[cell] = lst
    return CutComplex(faces, seg_ranges, cell_marks)


# ---------------------------------------------------------------------------
# merging faces into presentations


class MergedComplex:
    """One or more polygons obtained by merging faces along glue edges."""

    def __init__(self, faces: List[List[Tuple]], glue_kinds=("cellint",)):
        self.glue_kinds = glue_kinds
        cycles = [list(f) for f in faces]
        edge_faces: Dict[Tuple, List[int]] = {}
        for fi, cyc in enumerate(cycles):
            for key, _o, _t in cyc:
                if key[0] in glue_kinds:
                    edge_faces.setdefault(key, []).append(fi)
        for key, fs in edge_faces.items():
            if len(fs) != 2:
                raise SurfaceError("glue edge %r appears %d times" % (key, len(fs)))
        owner = list(range(len(cycles)))

        def find(i):
            while owner[i] != i:
                owner[i] = owner[owner[i]]
                i = owner[i]
            return i

        merged = {i: cycles[i] for i in range(len(cycles))}
        for key, (fa, fb) in sorted(edge_faces.items()):
            ra, rb = find(fa), find(fb)
            if ra == rb:
                continue
            a, b = merged[ra], merged[rb]
            ia = next(i for i, d in enumerate(a) if d[0] == key)
            ib = next(i for i, d in enumerate(b) if d[0] == key)
            if a[ia][1] == b[ib][1]:
                raise SurfaceError("non-orientable gluing along %r" % (key,))
            new = a[:ia] + b[ib + 1:] + b[:ib] + a[ia + 1:]
            owner[rb] = ra
            merged[ra] = new
            del merged[rb]
        self.polygons = list(merged.values())

    def component_count(self) -> int:
        return len(self.polygons)


def presentation_from_cycle(cycle: List[Tuple]):
    """Build a SurfacePresentation from one merged polygon cycle.

    Returns (presentation, cell_table, seg_table): cell_table maps a
    surviving glue-edge key to (cell index, first-dart tag); seg_table
    maps a boundary edge key to the new seg index.
    """
    first_seen: Dict[Tuple, Tuple[int, Tuple]] = {}
    items: List[tuple] = []
    cells: List[str] = []
    cell_table: Dict[Tuple, Tuple[int, Tuple]] = {}
    seg_table: Dict[Tuple, int] = {}
    seg_names: List[str] = []
    for key, orient, tag in cycle:
        if key[0] in ("segpiece", "cut"):
            seg_table[key] = len(seg_names)
            items.append(("seg", len(seg_names)))
            seg_names.append("s%d" % len(seg_names))
            continue
        if key in first_seen:
            idx, (o0, t0) = first_seen[key]
            if o0 == orient:
                raise SurfaceError("non-orientable pair %r" % (key,))
            items.append(("side", idx, 1))
        else:
            idx = len(cells)
            cells.append("c%d" % idx)
            cell_table[key] = (idx, tag)
            first_seen[key] = (idx, (orient, tag))
            items.append(("side", idx, 0))
    if not any(it[0] == "seg" for it in items):
        raise SurfaceError("cut produced a component without boundary segments")
    k = len(cells)
    # boundary count via a scratch trace, then genus from Euler characteristic
    b = _trace_count(items)
    chi = 1 - k
    if (2 - b - chi) % 2 != 0:
        raise SurfaceError("non-orientable or inconsistent complex")
    g = (2 - b - chi) // 2
    if g < 0:
        raise SurfaceError("negative genus: inconsistent gluing")
    pres = SurfacePresentation(g, b, items, cells, seg_names)
    return pres, cell_table, seg_table


def _trace_count(items) -> int:
    M = len(items)
    side_pos: Dict[Tuple[int, int], int] = {}
    for pos, it in enumerate(items):
        if it[0] == "side":
            side_pos[(it[1], it[2])] = pos
    seen = set()
    count = 0
    for start in range(M):
        if items[start][0] != "seg" or start in seen:
            continue
        count += 1
        pos = start
        while True:
            seen.add(pos)
            q = (pos + 1) % M
            guard = 0
            while items[q][0] == "side":
                _, c, copy = items[q]
                q = (side_pos[(c, 1 - copy)] + 1) % M
                guard += 1
                if guard > 2 * M:
                    raise SurfaceError("boundary trace does not close")
            pos = q
            if pos == start:
                break
    return count


# ---------------------------------------------------------------------------
# transport of paths through a cut


class Transporter:
    """Rewrites crossing words of one presentation in a re-presented one."""

    def __init__(self, S_old, S_new, cell_table, seg_table, cut_complex: CutComplex,
                 cut_paths: Sequence[PathWord], square_router=None):
        self.S_old = S_old
        self.S_new = S_new
        self.cell_table = cell_table
        self.seg_table = seg_table
        self.cx = cut_complex
        self.cut_paths = list(cut_paths)
        self.square_router = square_router

    key_prefix: Tuple = ()

    def _new_cell_letter(self, cell: int, interval: int, eps: int) -> Optional[int]:
        key = ("cellint",) + self.key_prefix + (cell, interval)
        entry = self.cell_table.get(key)
        if entry is None:
            return None  # merged away: interior of the new polygon
        idx, tag = entry
        slot_of_copy0 = tag[1]
        sign = eps if slot_of_copy0 == 0 else -eps
        return enc(idx, sign)

    def _map_endpoint(self, seg: int, station: int):
        item_pos = self.S_old.seg_pos[seg]
        for (pos, k), (sg, lo, hi) in self.cx.seg_ranges.items():
            if pos != item_pos:
                continue
            if (lo is None or station > lo) and (hi is None or station < hi):
                new_seg = self.seg_table.get(("segpiece",) + self.key_prefix + (pos, k))
                if new_seg is None:
                    raise SurfaceError("endpoint piece missing from the new polygon")
                return (new_seg, station)
        raise SurfaceError("endpoint station %r collides with the cut" % ((seg, station),))

    def transport(self, p: PathWord) -> PathWord:
        """Rewrite p in the new presentation; p must avoid the cut system
        unless a square router is installed to carry it across."""
        if p.surface is not self.S_old:
            raise SurfaceError("path belongs to a different presentation")
        events = self._events(p)
        letters = []
        for ev in events:
            if ev[0] == "cell":
                _, cell, interval, eps = ev
                ltr = self._new_cell_letter(cell, interval, eps)
                if ltr is not None:
                    letters.append(ltr)
            else:
                _, ci, chord, side = ev
                if self.square_router is None:
                    raise SurfaceError("path crosses the cut and cannot transport")
                letters.extend(self.square_router(ci, chord, side))
        if p.kind == "arc":
            ends = (self._map_endpoint(*p.ends[0]), self._map_endpoint(*p.ends[1]))
            return normalize(self.S_new, PathWord(self.S_new, "arc", letters, ends),
                             check_embedded=False)
        return normalize(self.S_new, PathWord(self.S_new, "closed", letters),
                         check_embedded=False)

    def _events(self, p: PathWord):
        """Ordered events along p: cell-interval crossings and cut crossings."""
        if not self.cut_paths:
            sysm = canonical_system(self.S_old, [p])
            pi = 0
            cuts = []
        else:
            # realize p against the full cut system in one diagram
            sysm = canonical_system(self.S_old, self.cut_paths + [p])
            pi = len(self.cut_paths)
            cuts = list(range(len(self.cut_paths)))
        events = []
        n_chords = len(sysm.chords[pi])
        for k in range(n_chords):
            hits = []
            for ci in cuts:
                for cr in sysm.pair_crossings(pi, ci):
                    if cr.chord_i == k:
                        hits.append((cr.param_i, ci, cr.chord_j, cr.point))
            hits.sort(key=lambda h: h[0])
            # side of approach: walk the chord, restarting after each crossing
            here = sysm.coords[sysm.chords[pi][k][0]]
            for _prm, ci, chj, pt in hits:
                m1, m2 = sysm.chords[ci][chj]
                a, b = sysm.coords[m1], sysm.coords[m2]
                side = 1 if _cross(a, b, here) > 0 else -1
                events.append(("cut", ci, chj, side))
                here = pt
            # then the cell crossing at the end of chord k (if any)
            spec = sysm.curves[pi]
            t = k if spec.kind == "closed" else k
            if spec.kind == "arc" and k == n_chords - 1:
                continue
            ltr = spec.letters[t]
            cell = cell_of(ltr)
            interval = self._interval_of(sysm, pi, t, cell)
            events.append(("cell", cell, interval, sign_of(ltr)))
        return events

    def _interval_of(self, sysm, pi, t, cell) -> int:
        order = sysm.occ_order[cell]
        marks = self.cx.cell_marks[cell]
        pos = order.index((pi, t))
        before = sum(1 for e in order[:pos] if e in [(ci, tt) for ci, tt in marks])
        return before


def reglue_faces(cx: CutComplex):
    return MergedComplex(cx.faces, glue_kinds=("cellint",))


# ---------------------------------------------------------------------------
# public operations


def cut_components(S, cut_paths: Sequence[PathWord]):
    """Cut along a disjoint system; (genus, boundary) per component."""
    cx, _sysm = build_cut_complex(S, [normalize(S, p) for p in cut_paths])
    merged = MergedComplex(cx.faces, glue_kinds=("cellint",))
    out = []
    for cyc in merged.polygons:
        pres, _ct, _st = presentation_from_cycle(cyc)
        out.append((pres.genus, pres.boundary_count))
    return sorted(out)


def system_fills(S, arcs: Sequence[PathWord]) -> bool:
    """True when cutting along the (disjoint) arcs leaves only disks."""
    arcs = [normalize(S, a) for a in arcs]
    for i in range(len(arcs)):
        for j in range(i + 1, len(arcs)):
            if len(cover.pair_records(S, arcs[i], arcs[j])) != 0:
                raise SurfaceError("filling verification needs a disjoint system")
    return all(gb == (0, 1) for gb in cut_components(S, arcs))


def cut_along_arc(S, arc: PathWord, carried: Dict[str, PathWord]):
    """Cut S along a properly embedded arc and transport carried paths.

    Every carried path must be disjoint from the arc.  Returns the new
    presentation, the transported dictionary, and the indices of the
    fresh boundary segments left by the two copies of the arc.
    """
    arc = normalize(S, arc)
    if arc.kind != "arc":
        raise SurfaceError("can only cut along arcs")
    cx, _sysm = build_cut_complex(S, [arc])
    merged = MergedComplex(cx.faces, glue_kinds=("cellint",))
    if merged.component_count() != 1:
        raise SurfaceError("cutting along a properly embedded arc cannot disconnect")
    pres, cell_table, seg_table = presentation_from_cycle(merged.polygons[0])
    tr = Transporter(S, pres, cell_table, seg_table, cx, [arc])
    out = {name: tr.transport(p) for name, p in carried.items()}
    cut_segs = tuple(seg for key, seg in seg_table.items() if key[0] == "cut")
    return pres, out, cut_segs


def plumb(S1, l1: PathWord, S2, l2: PathWord,
          carried1: Dict[str, PathWord], carried2: Dict[str, PathWord],
          flip: int = 1):
    """Murasugi sum: glue S1 and S2 along a square around the arcs.

    The square has its horizontal sides on the two copies of l1 and its
    vertical sides on the copies of l2; ``flip`` chooses between the
    two orientation-compatible matchings.  Carried paths transport into
    the sum (crossings with the site arcs route through the square).
    """
    l1 = normalize(S1, l1)
    l2 = normalize(S2, l2)
    if l1.kind != "arc" or l2.kind != "arc":
        raise SurfaceError("plumbing sites must be properly embedded arcs")
    cx1, _ = build_cut_complex(S1, [l1])
    cx2, _ = build_cut_complex(S2, [l2])
    p = len(l1.letters) + 1
    q = len(l2.letters) + 1

    # cut darts: identify by (surface, chord index, side of the chord);
    # the two darts of a chord have opposite orients
    faces = []
    for cyc in cx1.faces:
        faces.append([_cut_key(1, d) for d in cyc])
    for cyc in cx2.faces:
        faces.append([_cut_key(2, d) for d in cyc])
    square = []
    for i in range(p):
        square.append((("glcut", 1, i, 1), -1, ("sq",)))
    for j in range(q):
        square.append((("glcut", 2, j, flip), -flip, ("sq",)))
    for i in reversed(range(p)):
        square.append((("glcut", 1, i, -1), 1, ("sq",)))
    for j in reversed(range(q)):
        square.append((("glcut", 2, j, -flip), flip, ("sq",)))
    faces.append(square)
    merged = MergedComplex(faces, glue_kinds=("cellint", "glcut"))
    if merged.component_count() != 1:
        raise SurfaceError("plumbing did not produce a connected surface")
    pres, cell_table, seg_table = presentation_from_cycle(merged.polygons[0])

    def router_for(tagn):
        def route(ci, chord, side):
            first = ("glcut", tagn, chord, side)
            second = ("glcut", tagn, chord, -side)
            letters = []
            for key, leaving in ((first, 1), (second, -1)):
                entry = cell_table.get(key)
                if entry is None:
                    continue
                idx, tag = entry
                outward = tag != ("sq",)
                sign = leaving if outward else -leaving
                letters.append(enc(idx, sign))
            return letters
        return route

    def _mk_transporter(S_old, cx, cut, tagn):
        tr = Transporter(S_old, pres, cell_table, seg_table, cx, [cut],
                         square_router=router_for(tagn))
        tr.key_prefix = (tagn,)
        return tr

    tr1 = _mk_transporter(S1, cx1, l1, 1)
    tr2 = _mk_transporter(S2, cx2, l2, 2)
    out1 = {n: tr1.transport(v) for n, v in carried1.items()}
    out2 = {n: tr2.transport(v) for n, v in carried2.items()}
    return pres, out1, out2


def _cut_key(tagn, dart):
    key, o, t = dart
    if key[0] == "cut":
        return (("glcut", tagn, key[2], 1 if o > 0 else -1), o, t)
    return ((key[0], tagn) + key[1:], o, t)
