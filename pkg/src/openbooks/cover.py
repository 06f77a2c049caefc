"""Lifts of paths to the universal cover and their linking.

A surface presented as a disk with bands has free fundamental group;
its universal cover is a tree of polygon copies indexed by reduced
words.  The cover is a disk, so two lifted paths intersect essentially
exactly when their endpoints link in the cyclic order of the boundary
circle.  Everything here is exact integer combinatorics on addresses:
an address walks from the base polygon through sides of the tiling and
terminates on a boundary segment (arcs) or repeats forever (ends of
closed-curve lifts).

Geometric intersection numbers, algebraic signs, boundary signs and
crossing positions for twist surgery are all derived from the single
primitive ``compare`` (linear order on boundary points of the cover).
"""

from __future__ import annotations

import functools
from typing import Optional, Sequence, Tuple

from .words import (
    Word,
    cell_of,
    enc,
    inv_letter,
    invert_word,
    mul,
    reduce_word,
    sign_of,
)

# Addresses of boundary points of the universal cover.
#   ("F", path, seg, station)  finite point on a lifted boundary segment
#   ("E", prefix, cycle)       end at infinity, address prefix . cycle^oo
FIN = "F"
END = "E"


def fin(path: Word, seg: int, station: int):
    return (FIN, path, seg, station)


def end(prefix: Word, cycle: Word):
    """Normalized end address: prefix . cycle^oo with no cancellation."""
    p = list(reduce_word(prefix))
    c = list(cycle)
    if not c:
        raise ValueError("end of a trivial cycle")
    while p and p[-1] == inv_letter(c[0]):
        p.pop()
        c = c[1:] + [c[0]]
    return (END, tuple(p), tuple(c))


def _addr_steps(addr, cap: int):
    """Yield up to ``cap`` steps: ("side", letter) then maybe ("seg", seg, st)."""
    if addr[0] == FIN:
        _, path, seg, st = addr
        for ltr in path:
            yield ("side", ltr)
        yield ("seg", seg, st)
    else:
        _, prefix, cycle = addr
        for ltr in prefix:
            yield ("side", ltr)
        n = 0
        while n <= cap:
            for ltr in cycle:
                yield ("side", ltr)
                n += 1


def _cap_for(a, b) -> int:
    la = len(a[1]) + (len(a[2]) if a[0] == END else 0)
    lb = len(b[1]) + (len(b[2]) if b[0] == END else 0)
    ca = len(a[2]) if a[0] == END else 1
    cb = len(b[2]) if b[0] == END else 1
    return la + lb + 2 * ca * cb + 8


def compare(S, a, b, init_cut=None) -> int:
    """Linear order of two boundary points of the cover.

    The circle is cut just before item 0 of the base polygon, or at
    ``init_cut`` which may be an item position (``int``) or a boundary
    point ``("pt", seg_item_pos, station)``.  Returns -1, 0 or +1.
    """
    if a == b:
        return 0
    cache = getattr(S, "_cmp_cache", None)
    if cache is None:
        cache = S._cmp_cache = {}
    key = (a, b, init_cut)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out = _compare_uncached(S, a, b, init_cut)
    cache[key] = out
    cache[(b, a, init_cut)] = -out
    return out


def _compare_uncached(S, a, b, init_cut=None) -> int:
    cap = _cap_for(a, b)
    ia = _addr_steps(a, cap)
    ib = _addr_steps(b, cap)
    in_pos = init_cut
    M = S.M
    for step_no in range(cap + 2):
        sa = next(ia, None)
        sb = next(ib, None)
        if sa is None and sb is None:
            return 0  # two ends that agree beyond the periodic bound
        if sa is None or sb is None:
            # exhausted iterators only happen for equal ends; finite
            # addresses always terminate with a "seg" step first
            return 0
        ka = _step_key(S, sa, in_pos, initial=(step_no == 0))
        kb = _step_key(S, sb, in_pos, initial=(step_no == 0))
        if ka != kb:
            return -1 if ka < kb else 1
        if sa[0] == "seg":
            # same segment item: stations decide
            if sa[2] == sb[2]:
                return 0
            return -1 if sa[2] < sb[2] else 1
        # both exit through the same side: descend into the next polygon
        in_pos = _entry_pos(S, sa[1])
    return 0


def _exit_pos(S, letter: int) -> int:
    c = cell_of(letter)
    return S.side_pos[c][0] if sign_of(letter) > 0 else S.side_pos[c][1]


def _entry_pos(S, letter: int) -> int:
    c = cell_of(letter)
    return S.side_pos[c][1] if sign_of(letter) > 0 else S.side_pos[c][0]


def _step_key(S, step, in_pos, initial=False):
    if step[0] == "side":
        pos = _exit_pos(S, step[1])
        st = None
    else:
        pos = S.seg_pos[step[1]]
        st = step[2]
    M = S.M
    if in_pos is None:
        return (1, pos, 0)
    if isinstance(in_pos, tuple):  # ("pt", seg_item_pos, station): cut at a point
        _, cut_pos, cut_st = in_pos
        if pos == cut_pos:
            assert st is not None
            if st > cut_st:
                return (0, st - cut_st, 0)
            return (2, st, 0)
        return (1, (pos - cut_pos) % M, 0)
    if pos == in_pos:
        # only legal when the cut is an initial frame side: the address
        # descends into the subtree behind the frame edge itself
        if initial:
            return (0, 0, 0)
        raise AssertionError("address backtracks through its entry side")
    return (1, (pos - in_pos) % M, 0)


def orientation(S, a, b, c) -> int:
    """+1 if a, b, c sit counterclockwise on the boundary circle."""
    ab = compare(S, a, b)
    bc = compare(S, b, c)
    if ab == 0 or bc == 0 or compare(S, a, c) == 0:
        raise ValueError("orientation of non-distinct boundary points")
    ca = compare(S, c, a)
    # cyclic orientation from the three pairwise comparisons
    return 1 if (ab + bc + ca) < 0 else -1 if (ab + bc + ca) > 0 else 0


def cross_sign(S, a1, a2, b1, b2) -> int:
    """0 if the chords a1->a2 and b1->b2 do not link, else the crossing sign.

    Sign +1 when the cyclic order around the circle is (a1, b1, a2, b2)
    counterclockwise, i.e. the ordered tangent pair agrees with the
    surface orientation at the crossing.
    """
    if any(compare(S, x, y) == 0 for x, y in
           ((a1, b1), (a1, b2), (a2, b1), (a2, b2))):
        return 0  # shared endpoint: realizable without a crossing
    o1 = orientation(S, a1, b1, a2)
    o2 = orientation(S, a1, b2, a2)
    if o1 == o2:
        return 0
    return o1


# ---------------------------------------------------------------------------
# lift endpoints


def arc_points(S, letters: Word, ends_data, shift: Word = ()):
    """Both endpoint addresses of the arc lift starting in polygon ``shift``."""
    (seg0, st0), (seg1, st1) = ends_data
    return (fin(reduce_word(shift), seg0, st0),
            fin(mul(shift, letters), seg1, st1))


def closed_ends(S, letters: Word, shift: Word = ()):
    """Backward and forward end of the closed-curve lift through ``shift``."""
    return (end(shift, invert_word(letters)), end(shift, letters))


def _prefixes(letters: Word):
    out = [()]
    for i in range(1, len(letters) + 1):
        out.append(letters[:i])
    return out


def _coset_canon(g: Word, w: Word) -> Word:
    """Canonical representative of g<w> (right cosets of the cyclic group).

    Word length along the orbit g w^m is convex in m, so a greedy
    descent finds the shortest; ties are broken lexicographically over
    the shortest translates on both sides.
    """
    if not w:
        return reduce_word(g)
    g = reduce_word(g)
    w_inv = invert_word(w)
    cur = g
    while True:
        nxt = mul(cur, w)
        if len(nxt) < len(cur):
            cur = nxt
            continue
        prv = mul(cur, w_inv)
        if len(prv) < len(cur):
            cur = prv
            continue
        break
    best = (len(cur), cur)
    for step in (w, w_inv):
        cand = mul(cur, step)
        while len(cand) == len(cur):
            key = (len(cand), cand)
            if key < best:
                best = key
            cand = mul(cand, step)
    return best[1]


def _axis_translates(g: Word, w: Word, span: int):
    for j in range(-span, span + 1):
        if j == 0:
            yield g
        elif j > 0:
            yield mul(w * j, g)
        else:
            yield mul(invert_word(w) * (-j), g)


# ---------------------------------------------------------------------------
# crossing records

# A record is (sign, shift, pos_a, pos_b) where shift identifies the lift
# of beta crossing the fixed lift of alpha, and pos_a / pos_b locate a
# common polygon: alpha's polygon prefix index and beta's letter offset.


def _common_position(a_words: Sequence[Word], b_polys) -> Optional[Tuple[int, int]]:
    index = {}
    for j, poly in b_polys:
        index.setdefault(poly, j)
    for i, poly in enumerate(a_words):
        if poly in index:
            return (i, index[poly])
    return None


def arc_arc_records(S, a_letters, a_ends, b_letters, b_ends):
    """Crossing records between arcs alpha (fixed lift) and beta."""
    pa = _prefixes(a_letters)
    pb = _prefixes(b_letters)
    seen = {}
    for a in pa:
        inv_acc = None
        for b in pb:
            g = mul(a, invert_word(b))
            if g in seen:
                continue
            seen[g] = True
    recs = []
    A1, A2 = arc_points(S, a_letters, a_ends)
    for g in seen:
        B1, B2 = arc_points(S, b_letters, b_ends, shift=g)
        s = cross_sign(S, A1, A2, B1, B2)
        if s != 0:
            b_polys = [(j, mul(g, pb[j])) for j in range(len(pb))]
            pos = _common_position(pa, b_polys)
            assert pos is not None, "linked lifts must share a polygon"
            recs.append((s, g, pos[0], pos[1]))
    return recs


def arc_closed_records(S, a_letters, a_ends, c_letters):
    """Crossing records between an arc alpha and a closed curve c.

    One record per lift of c crossing the fixed lift of alpha; the
    record carries alpha's prefix index and the letter phase of c at a
    common polygon (used to splice twist detours).
    """
    pa = _prefixes(a_letters)
    w = c_letters
    pc = _prefixes(w)[:-1] if w else [()]
    raw = {}
    for a in pa:
        for p in pc:
            raw[mul(a, invert_word(p))] = True
    cosets = {}
    for g in raw:
        cosets[_coset_canon(g, w)] = True
    A1, A2 = arc_points(S, a_letters, a_ends)
    a_index = {poly: i for i, poly in enumerate(pa)}
    recs = []
    for g in cosets:
        B1, B2 = closed_ends(S, w, shift=g)
        s = cross_sign(S, A1, A2, B1, B2)
        if s == 0:
            continue
        pos = _lazy_common_position(a_index, g, w)
        assert pos is not None, "linked lifts must share a polygon"
        recs.append((s, g, pos[0], pos[1]))
    return recs


def _lazy_common_position(a_index, g: Word, w: Word):
    """First polygon of the c-lift through g met by the arc lift:
    walk the line letter by letter in both directions."""
    span = (max(a_index, key=len, default=()) and max(len(k) for k in a_index) or 0)
    limit = (span + len(g) + len(w)) + 4
    cur = list(g)

    def _push(word_list, ltr):
        if word_list and word_list[-1] == inv_letter(ltr):
            word_list.pop()
        else:
            word_list.append(ltr)

    best = None
    poly = tuple(cur)
    if poly in a_index:
        best = (a_index[poly], 0)
    fwd = list(cur)
    for step in range(limit * max(1, len(w))):
        ltr = w[step % len(w)]
        _push(fwd, ltr)
        poly = tuple(fwd)
        if poly in a_index:
            cand = (a_index[poly], (step + 1) % len(w))
            if best is None or cand < best:
                best = cand
            break
    bwd = list(cur)
    for step in range(limit * max(1, len(w))):
        ltr = inv_letter(w[(-step - 1) % len(w)])
        _push(bwd, ltr)
        poly = tuple(bwd)
        if poly in a_index:
            cand = (a_index[poly], (-step - 1) % len(w))
            if best is None or cand < best:
                best = cand
            break
    return best


def closed_closed_records(S, a_letters, b_letters):
    """Signed crossings between closed curves alpha and beta.

    Counted per double coset <w_a> g <w_b>: one record per essential
    intersection point.
    """
    wa, wb = a_letters, b_letters
    if not wa or not wb:
        return []
    pa = _prefixes(wa)[:-1]
    pb = _prefixes(wb)[:-1]
    cosets = {}
    for a in pa:
        for b in pb:
            g = _coset_canon(mul(a, invert_word(b)), wb)
            cosets.setdefault(g, None)
    A1, A2 = closed_ends(S, wa)
    linked = []
    for g in cosets:
        B1, B2 = closed_ends(S, wb, shift=g)
        s = cross_sign(S, A1, A2, B1, B2)
        if s != 0:
            linked.append((g, s))
    # quotient by the deck action of alpha: g ~ w_a^k g
    recs = []
    used = set()
    for g, s in linked:
        span = (len(g) + len(wa) + len(wb)) // max(1, len(wa)) + 2
        key = min((len(c), c) for t in _axis_translates(g, wa, span)
                  for c in (_coset_canon(t, wb),))
        if key in used:
            continue
        used.add(key)
        recs.append((s, g, None, None))
    return recs


def pair_records(S, a, b):
    """Crossing records for two normalized paths (PathWord-like duck type).

    ``a`` and ``b`` expose .kind ("arc"|"closed"), .letters and .ends.
    """
    cache = getattr(S, "_pair_cache", None)
    if cache is None:
        cache = S._pair_cache = {}
    key = (a.kind, a.letters, a.ends, b.kind, b.letters, b.ends)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if a.kind == "arc" and b.kind == "arc":
        out = arc_arc_records(S, a.letters, a.ends, b.letters, b.ends)
    elif a.kind == "arc" and b.kind == "closed":
        out = arc_closed_records(S, a.letters, a.ends, b.letters)
    elif a.kind == "closed" and b.kind == "arc":
        out = [(-s, g, None, None)
               for (s, g, _i, _j) in arc_closed_records(S, b.letters, b.ends, a.letters)]
    else:
        out = closed_closed_records(S, a.letters, b.letters)
    cache[key] = out
    return out


# ---------------------------------------------------------------------------
# embeddedness and canonical ranks


def arc_self_linked(S, letters: Word, ends_data) -> bool:
    pa = _prefixes(letters)
    A1, A2 = arc_points(S, letters, ends_data)
    seen = set()
    for a in pa:
        for b in pa:
            g = mul(a, invert_word(b))
            if g == () or g in seen:
                continue
            seen.add(g)
            B1, B2 = arc_points(S, letters, ends_data, shift=g)
            if cross_sign(S, A1, A2, B1, B2) != 0:
                return True
    return False


def closed_self_linked(S, letters: Word) -> bool:
    w = letters
    if not w:
        return False
    pa = _prefixes(w)[:-1]
    A1, A2 = closed_ends(S, w)
    seen = set()
    for a in pa:
        for b in pa:
            g = _coset_canon(mul(a, invert_word(b)), w)
            if g in seen:
                continue
            seen.add(g)
            if _coset_canon(g, w) == _coset_canon((), w):
                # same lift only when g lies in <w>
                span = len(g) // max(1, len(w)) + 2
                if any(reduce_word(t) == () for t in _axis_translates(g, invert_word(w), span)):
                    continue
            B1, B2 = closed_ends(S, w, shift=g)
            if cross_sign(S, A1, A2, B1, B2) != 0:
                return True
    return False


def occurrence_frames(S, kind: str, letters: Word, ends_data):
    """For each letter occurrence, (cell, one-side, far-side, direction).

    The base edge of cell c lies between the base polygon and its
    side-0 neighbour; the one-side endpoint is the strand endpoint in
    the base-polygon component, and the direction is +1 when the
    strand crosses away from the base polygon.
    """
    frames = []
    for t, ltr in enumerate(letters):
        c = cell_of(ltr)
        pref = letters[:t]
        if sign_of(ltr) > 0:
            shift = invert_word(pref)
        else:
            shift = mul((enc(c, 1),), invert_word(pref))
        if kind == "arc":
            p_start, p_end = arc_points(S, letters, ends_data, shift=shift)
        else:
            p_start, p_end = closed_ends(S, letters, shift=shift)
        if sign_of(ltr) > 0:
            one, far = p_start, p_end
        else:
            one, far = p_end, p_start
        frames.append((c, one, far, sign_of(ltr)))
    return frames


def order_occurrences(S, curves):
    """Canonical order of all cell crossings of a family of paths.

    ``curves``: sequence of (kind, letters, ends) triples.  Returns a
    dict cell -> list of (curve_index, letter_index) sorted along the
    cell, measured from the start corner of its side-0 copy.

    Lifts are ordered lexicographically by the heights of their
    endpoints on the near side of the lifted cell, then the far side.
    For strand lifts that never cross each other this is the
    (unambiguous) geodesic order, so disjoint systems realize with no
    crossings; a pair of linked lifts realizes an odd number of
    crossings and is brought to a single one by bigon reduction.
    """
    per_cell: dict[int, list] = {}
    for ci, (kind, letters, ends_data) in enumerate(curves):
        for t, (c, one, far, eps) in enumerate(
                occurrence_frames(S, kind, letters, ends_data)):
            per_cell.setdefault(c, []).append(((ci, t), one, far, eps))
    out = {}
    for c, occs in per_cell.items():
        cut = S.side_pos[c][0]

        def cmp(x, y, _cut=cut):
            r = compare(S, x[1], y[1], init_cut=_cut)
            if r != 0:
                return -r  # ranks ascend from the start corner
            r = compare(S, x[2], y[2], init_cut=_cut)
            if r != 0:
                return r
            # identical lifts: parallel copies, pushed off to one side
            xa, ya = x[0], y[0]
            d = -1 if xa < ya else (1 if xa > ya else 0)
            eps_ref = x[3] if xa <= ya else y[3]
            return d * eps_ref

        occs.sort(key=functools.cmp_to_key(cmp))
        out[c] = [occ[0] for occ in occs]
    return out
