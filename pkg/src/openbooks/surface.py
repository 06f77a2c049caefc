"""Combinatorial surfaces with boundary and embedded paths on them.

A surface of genus g with b > 0 boundary components is presented as a
disk with k = 2g + b - 1 bands: the boundary of the base polygon is a
cyclic list of items, alternating boundary segments and band sides
(two sides per band, identified with reversed traversal).  Cutting the
surface along the band co-cores gives back the disk, so a path is
recorded by its reduced crossing word against the co-cores plus
endpoint stations on the boundary segments.

Reduced words are canonical: two embedded paths with the same
endpoints are isotopic (fixing the boundary) exactly when their
reduced words agree, and all intersection numbers are computed from
linking of lifts in the universal cover (see cover.py).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import cover
from .words import (
    Word,
    cell_of,
    cyclic_reduce,
    enc,
    inv_letter,
    invert_word,
    is_proper_power,
    min_rotation,
    reduce_word,
    rotations,
    sign_of,
)

# sign pin for boundary intersections; together with the twist pin it is
# fixed by the annulus anchors i_bd(alpha, D_c^[s](alpha)) = s and by the
# requirement that repeated negative twists create negative interior
# crossings (the mirror-breaking anchor)
KAPPA_BOUNDARY = 1

# stations reserved for the handle-dual arc catalog
_DUAL_HI = 10 ** 6
_DUAL_LO = -(10 ** 6)

_token_counter = itertools.count()


class SurfaceError(ValueError):
    pass


@dataclass(frozen=True)
class IntersectionProfile:
    i_alg: int
    i_geom: int
    i_bd: int
    isotopic: bool

    def total(self) -> int:
        return self.i_alg + self.i_geom + self.i_bd


class PathWord:
    """An oriented properly embedded arc or simple closed curve.

    ``letters`` is the reduced crossing word against the band co-cores
    (for closed curves: cyclically reduced, minimal rotation).  Arcs
    carry endpoint stations ``ends = ((seg, station), (seg, station))``.
    ``ranks`` orders this path's own crossings along each cell and is
    derived data, filled in by ``normalize``.
    """

    __slots__ = ("surface", "kind", "letters", "ends", "canonical", "ranks")

    def __init__(self, surface, kind, letters, ends=None, canonical=False, ranks=None):
        if kind not in ("arc", "closed"):
            raise SurfaceError("kind must be 'arc' or 'closed'")
        self.surface = surface
        self.kind = kind
        self.letters = tuple(letters)
        self.ends = tuple(tuple(e) for e in ends) if ends is not None else None
        self.canonical = canonical
        self.ranks = tuple(ranks) if ranks is not None else None
        if kind == "arc":
            if self.ends is None:
                raise SurfaceError("arcs need endpoint stations")
        elif self.ends is not None:
            raise SurfaceError("closed curves have no endpoints")

    def key(self):
        return (self.surface.token, self.kind, self.letters, self.ends)

    def __eq__(self, other):
        return isinstance(other, PathWord) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def reversed(self) -> "PathWord":
        ends = (self.ends[1], self.ends[0]) if self.ends else None
        return PathWord(self.surface, self.kind, invert_word(self.letters), ends)

    def crossings(self):
        """Spec view: list of (cell name, direction sign, rank along cell)."""
        S = self.surface
        rk = self.ranks if self.ranks is not None else (None,) * len(self.letters)
        return [(S.cells[cell_of(l)], sign_of(l), r) for l, r in zip(self.letters, rk)]

    def __repr__(self):
        S = self.surface
        body = ",".join("%s%s" % (S.cells[cell_of(l)], "+" if sign_of(l) > 0 else "-")
                        for l in self.letters)
        if self.kind == "arc":
            return "Arc[%s; %s->%s]" % (body, self.ends[0], self.ends[1])
        return "Closed[%s]" % body


class SurfacePresentation:
    """Disk-with-bands presentation of a compact oriented surface.

    Structural data is immutable after construction; ``catalog`` is an
    append-only registry of named curves and arcs.
    """

    def __init__(self, genus, boundary_count, items, cells, seg_names):
        self.genus = genus
        self.boundary_count = boundary_count
        self.items = tuple(items)      # ("seg", i) | ("side", cell, copy)
        self.cells = tuple(cells)      # cell names
        self.seg_names = tuple(seg_names)
        self.token = next(_token_counter)
        self.M = len(self.items)
        self.side_pos = {}
        self.seg_pos = [None] * len(seg_names)
        for pos, it in enumerate(self.items):
            if it[0] == "side":
                self.side_pos.setdefault(it[1], [None, None])[it[2]] = pos
            else:
                self.seg_pos[it[1]] = pos
        for c in range(len(self.cells)):
            p0, p1 = self.side_pos.get(c, (None, None))
            if p0 is None or p1 is None:
                raise SurfaceError("cell %r lacks two sides" % (self.cells[c],))
        self.catalog: Dict[str, PathWord] = {}
        self._trace()
        self._check_euler()

    # -- structure -----------------------------------------------------

    def _partner_pos(self, pos: int) -> int:
        _, c, copy = self.items[pos]
        return self.side_pos[c][1 - copy]

    def _trace(self):
        """Boundary cycles: per cycle, the segs visited and bands traversed."""
        M = self.M
        seg_positions = [p for p in range(M) if self.items[p][0] == "seg"]
        seen = set()
        cycles = []   # list of (seg list, [(cell, dir), ...] between consecutive segs)
        for start in seg_positions:
            if start in seen:
                continue
            segs: List[int] = []
            bands: List[Tuple[int, int]] = []
            pos = start
            while True:
                seen.add(pos)
                segs.append(self.items[pos][1])
                q = (pos + 1) % M
                while self.items[q][0] == "side":
                    _, c, copy = self.items[q]
                    bands.append((c, 1 if copy == 0 else -1))
                    q = (self._partner_pos(q) + 1) % M
                pos = q
                if pos == start:
                    break
            cycles.append((tuple(segs), tuple(bands)))
        cycles.sort(key=lambda cy: min(cy[0]))
        self.boundary_cycles = tuple(cy[0] for cy in cycles)
        self._cycle_bands = tuple(cy[1] for cy in cycles)
        self.seg_cycle = {}
        for i, cy in enumerate(self.boundary_cycles):
            for s in cy:
                self.seg_cycle[s] = i
        if len(self.boundary_cycles) != self.boundary_count:
            raise SurfaceError("boundary tracing found %d cycles, expected %d"
                               % (len(self.boundary_cycles), self.boundary_count))

    def _check_euler(self):
        chi = 1 - len(self.cells)
        if chi != 2 - 2 * self.genus - self.boundary_count:
            raise SurfaceError("Euler characteristic mismatch")

    @property
    def euler(self) -> int:
        return 1 - len(self.cells)

    def cell_index(self, name: str) -> int:
        return self.cells.index(name)

    # -- catalog -------------------------------------------------------

    def register_curve(self, name: str, path: PathWord, replace=False):
        if not replace and name in self.catalog:
            raise SurfaceError("catalog name %r taken" % name)
        self.catalog[name] = normalize(self, path)
        return self.catalog[name]

    def curve(self, name: str) -> PathWord:
        try:
            return self.catalog[name]
        except KeyError:
            raise SurfaceError("no catalog curve %r" % name) from None

    def boundary_word(self, cycle_index: int) -> Word:
        """Crossing word of a curve parallel to the given boundary cycle."""
        return tuple(enc(c, d) for c, d in self._cycle_bands[cycle_index])

    def dual_arc(self, cell: int, copy: int = 0) -> PathWord:
        """An arc isotopic to the co-core of band ``cell``.

        Hugs the chosen side copy; when other band sides intervene
        before the nearest boundary segments, the arc runs parallel to
        the boundary through those bands and the crossings enter its
        word.
        """
        p0 = self.side_pos[cell][copy]
        fwd: List[int] = []
        q = (p0 + 1) % self.M
        guard = 0
        while self.items[q][0] == "side":
            _, d, copy = self.items[q]
            fwd.append(enc(d, 1 if copy == 0 else -1))
            q = (self._partner_pos(q) + 1) % self.M
            guard += 1
            if guard > 2 * self.M:
                raise SurfaceError("boundary walk does not reach a segment")
        end_seg = self.items[q][1]
        bwd: List[int] = []
        q = (p0 - 1) % self.M
        guard = 0
        while self.items[q][0] == "side":
            _, d, copy = self.items[q]
            bwd.append(enc(d, 1 if copy == 1 else -1))
            q = (self._partner_pos(q) - 1) % self.M
            guard += 1
            if guard > 2 * self.M:
                raise SurfaceError("boundary walk does not reach a segment")
        start_seg = self.items[q][1]
        letters = tuple(reversed(bwd)) + tuple(fwd)
        off = cell + (len(self.cells) + 1) * copy
        return PathWord(self, "arc", letters,
                        ends=((start_seg, _DUAL_HI + off), (end_seg, _DUAL_LO - off)))

    def default_filling(self) -> Tuple[PathWord, ...]:
        """Arc system cutting the surface to a disk: one co-core dual per band."""
        return tuple(normalize(self, self.dual_arc(c)) for c in range(len(self.cells)))


# ---------------------------------------------------------------------------
# standard model


def _chain_sites(g: int) -> List[int]:
    if g == 0:
        return []
    sites = [0, 1, 0]
    for j in range(2, 2 * g):
        sites += [j, j - 1]
    sites.append(2 * g - 1)
    return sites


def build_surface(genus: int, boundary_count: int) -> SurfacePresentation:
    """Standard presentation of the oriented surface of given type.

    Genus handles come from a chain of 2g bands (consecutive co-cores
    interleaved); each extra boundary component is a trivial band.  The
    catalog holds the chain curves a_i, b_i, boundary parallels
    delta_j, the annulus core ``c`` and one handle-dual arc per band.
    """
    if genus < 0:
        raise SurfaceError("genus must be nonnegative")
    if boundary_count < 1:
        raise SurfaceError("open books need nonempty binding: boundary_count >= 1")
    g, b = genus, boundary_count
    cells: List[str] = []
    for i in range(g):
        cells += ["a%d" % (i + 1), "b%d" % (i + 1)]
    for j in range(b - 1):
        cells.append("p%d" % (j + 1))
    sites = _chain_sites(g)
    for j in range(b - 1):
        sites += [2 * g + j, 2 * g + j]
    items: List[tuple] = []
    seen_once = set()
    for t, c in enumerate(sites):
        items.append(("seg", t))
        copy = 1 if c in seen_once else 0
        seen_once.add(c)
        items.append(("side", c, copy))
    if not sites:
        items.append(("seg", 0))
    nsegs = max(1, len(sites))
    seg_names = ["s%d" % i for i in range(nsegs)]
    S = SurfacePresentation(g, b, items, cells, seg_names)
    _install_standard_catalog(S)
    return S


def install_basic_catalog(S: SurfacePresentation):
    """Boundary parallels and handle duals for a derived presentation."""
    for j in range(S.boundary_count):
        name = "delta%d" % (j + 1)
        if name not in S.catalog:
            S.register_curve(name, PathWord(S, "closed", S.boundary_word(j)))
    for c in range(len(S.cells)):
        for copy, prefix in ((0, "dual_"), (1, "dual2_")):
            name = prefix + S.cells[c]
            if name not in S.catalog:
                S.register_curve(name, S.dual_arc(c, copy))
    return S


def _install_standard_catalog(S: SurfacePresentation):
    g = S.genus
    for i in range(g):
        S.register_curve("a%d" % (i + 1),
                         PathWord(S, "closed", (enc(2 * i, 1),)))
        S.register_curve("b%d" % (i + 1),
                         PathWord(S, "closed", (enc(2 * i + 1, 1),)))
    if g == 0 and S.boundary_count == 2:
        S.register_curve("c", PathWord(S, "closed", (enc(0, 1),)))
    for j in range(S.boundary_count):
        S.register_curve("delta%d" % (j + 1),
                         PathWord(S, "closed", S.boundary_word(j)))
    for c in range(len(S.cells)):
        S.register_curve("dual_%s" % S.cells[c], S.dual_arc(c, 0))
        S.register_curve("dual2_%s" % S.cells[c], S.dual_arc(c, 1))


# ---------------------------------------------------------------------------
# normalization and intersection numbers


def _validate_raw(S: SurfacePresentation, p: PathWord):
    if p.surface is not S:
        raise SurfaceError("path belongs to a different presentation")
    for ltr in p.letters:
        if not 0 <= cell_of(ltr) < len(S.cells):
            raise SurfaceError("unknown cut cell in word")
    if p.kind == "arc":
        for seg, _st in p.ends:
            if not 0 <= seg < len(S.seg_names):
                raise SurfaceError("arc endpoint off the boundary")


def normalize(S: SurfacePresentation, p: PathWord,
              check_embedded: bool = True) -> PathWord:
    """Canonical form: reduced word, canonical ranks.

    Deterministic, idempotent, and the result is isotopic to the input
    (boundary fixed).  Rejects words whose isotopy class is not
    embeddable (a simple-curve check in the universal cover); callers
    producing images of embedded paths under homeomorphisms may skip
    that check.
    """
    cache = getattr(S, "_norm_cache", None)
    if cache is None:
        cache = S._norm_cache = {}
    key = (p.kind, p.letters, p.ends)
    hit = cache.get(key)
    if hit is not None:
        if isinstance(hit, SurfaceError):
            raise hit
        return hit
    try:
        out = _normalize_uncached(S, p, check_embedded)
    except SurfaceError as err:
        if check_embedded:
            cache[key] = err
        raise
    if check_embedded:
        cache[key] = out
        cache[(out.kind, out.letters, out.ends)] = out
    return out


def _normalize_uncached(S: SurfacePresentation, p: PathWord, check_embedded) -> PathWord:
    _validate_raw(S, p)
    if p.kind == "arc":
        letters = reduce_word(p.letters)
        if check_embedded and cover.arc_self_linked(S, letters, p.ends):
            raise SurfaceError("arc word is not embeddable")
        ranks = _self_ranks(S, "arc", letters, p.ends)
        return PathWord(S, "arc", letters, p.ends, canonical=True, ranks=ranks)
    letters = min_rotation(cyclic_reduce(p.letters))
    if letters and is_proper_power(letters):
        raise SurfaceError("closed word is a proper power: not embedded")
    if check_embedded and cover.closed_self_linked(S, letters):
        raise SurfaceError("closed word is not embeddable")
    ranks = _self_ranks(S, "closed", letters, None)
    return PathWord(S, "closed", letters, None, canonical=True, ranks=ranks)


def _self_ranks(S, kind, letters, ends) -> Tuple[int, ...]:
    order = cover.order_occurrences(S, [(kind, letters, ends)])
    rank = [0] * len(letters)
    for occs in order.values():
        for r, (_ci, t) in enumerate(occs):
            rank[t] = r
    return tuple(rank)


def _ensure_canonical(S, p: PathWord) -> PathWord:
    return p if p.canonical else normalize(S, p)


def minimal_position(S: SurfacePresentation, alpha: PathWord, beta: PathWord):
    """Canonical forms realizing minimal intersection.

    Positions are implicit in the canonical ranks: the canonical
    simultaneous realization of the two returned paths has no interior
    bigon and no endpoint half-bigon (asserted against the exhaustive
    move oracle in the test suite).
    """
    a = _ensure_canonical(S, alpha)
    b = _ensure_canonical(S, beta)
    return a, b


def i_geom(S: SurfacePresentation, alpha: PathWord, beta: PathWord) -> int:
    """Geometric intersection number: unsigned essential interior crossings."""
    a, b = minimal_position(S, alpha, beta)
    return len(cover.pair_records(S, a, b))


def i_alg(S: SurfacePresentation, alpha: PathWord, beta: PathWord) -> int:
    """Algebraic intersection number: signed sum over interior crossings."""
    a, b = minimal_position(S, alpha, beta)
    return sum(r[0] for r in cover.pair_records(S, a, b))


def interior_signs(S: SurfacePresentation, alpha: PathWord, beta: PathWord):
    a, b = minimal_position(S, alpha, beta)
    return [r[0] for r in cover.pair_records(S, a, b)]


def _shared_endpoint_map(a: PathWord, b: PathWord):
    """Match the two arcs' endpoints as point sets; None if they differ."""
    ea, eb = set(a.ends), set(b.ends)
    if ea != eb or len(ea) != 2:
        return None
    return tuple(ea)


def i_boundary(S: SurfacePresentation, alpha: PathWord, beta: PathWord) -> int:
    """Boundary intersection number of arcs with identical endpoints.

    Half the signed sum over the two shared endpoints, evaluated in
    minimal position; sign convention pinned by the Hopf-band anchors.
    """
    a, b = minimal_position(S, alpha, beta)
    if a.kind != "arc" or b.kind != "arc":
        raise SurfaceError("boundary intersections are defined for arcs")
    pts = _shared_endpoint_map(a, b)
    if pts is None:
        raise SurfaceError("arcs must share both endpoints")
    if is_isotopic(S, a, b):
        return 0
    total = 0
    for pt in pts:
        total += _endpoint_sign(S, a, b, pt)
    if total % 2 != 0:
        raise AssertionError("endpoint signs must sum to an even integer")
    return total // 2


def _arc_lift_at(S, p: PathWord, pt):
    """(sigma, far-address) for the lift of p with an endpoint at the base
    lift of ``pt``: sigma is +1 when p starts there, -1 when it ends."""
    seg, st = pt
    if p.ends[0] == pt:
        a1, a2 = cover.arc_points(S, p.letters, p.ends)
        return 1, a2
    if p.ends[1] == pt:
        shift = invert_word(p.letters)
        a1, a2 = cover.arc_points(S, p.letters, p.ends, shift=shift)
        return -1, a1
    raise SurfaceError("arc has no endpoint at %r" % (pt,))


def _endpoint_sign(S, a: PathWord, b: PathWord, pt) -> int:
    sig_a, far_a = _arc_lift_at(S, a, pt)
    sig_b, far_b = _arc_lift_at(S, b, pt)
    cut = ("pt", S.seg_pos[pt[0]], pt[1])
    cmp = cover.compare(S, far_a, far_b, init_cut=cut)
    if cmp == 0:
        return 0
    return KAPPA_BOUNDARY * sig_a * sig_b * (-cmp)


def is_isotopic(S: SurfacePresentation, alpha: PathWord, beta: PathWord) -> bool:
    """Isotopy (boundary fixed) of the underlying unoriented paths."""
    a = _ensure_canonical(S, alpha)
    b = _ensure_canonical(S, beta)
    if a.kind != b.kind:
        raise SurfaceError("cannot compare an arc with a closed curve")
    if a.kind == "arc":
        if a.ends == b.ends and a.letters == b.letters:
            return True
        rb = b.reversed()
        return a.ends == rb.ends and a.letters == reduce_word(rb.letters)
    if a.letters == b.letters:
        return True
    back = min_rotation(cyclic_reduce(invert_word(b.letters)))
    return a.letters == back


def profile_pair(S: SurfacePresentation, alpha: PathWord, beta: PathWord) -> IntersectionProfile:
    """All three intersection numbers of an arc pair with shared endpoints."""
    a, b = minimal_position(S, alpha, beta)
    iso = is_isotopic(S, a, b)
    recs = cover.pair_records(S, a, b)
    geom = len(recs)
    alg = sum(r[0] for r in recs)
    bd = i_boundary(S, a, b)
    if iso and geom != 0:
        raise AssertionError("isotopic paths with essential crossings")
    return IntersectionProfile(i_alg=alg, i_geom=geom, i_bd=bd, isotopic=iso)
