"""Dehn twist words acting on paths, and mapping-class equality.

A twist word is an ordered composition of signed twists about catalog
curves, rightmost letter applied first, so that a composition written
on paper as D_b o D_a transcribes letter for letter to ["b+", "a+"].

The action on a path is word surgery: every essential crossing with
the twist curve is rerouted one full turn along it.  The traversal
direction of the inserted detour depends on the twist sign and on the
local crossing sign (the two transverse directions are dragged around
the annulus the same way, so their detours read oppositely along the
curve's own orientation).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from . import cover
from .surface import PathWord, SurfaceError, SurfacePresentation, is_isotopic, normalize
from .words import Word, invert_word, mul, reduce_word

# surface-orientation pin: which rotation sense "positive twist" means;
# see KAPPA_BOUNDARY in surface.py for the anchors fixing the pair.
KAPPA_TWIST = -1


@dataclass(frozen=True)
class TwistWord:
    """Monodromy as a word in signed Dehn twists about catalog curves."""

    surface_token: int
    letters: Tuple[Tuple[str, int], ...]  # (curve name, +1 | -1), rightmost first

    @staticmethod
    def make(S: SurfacePresentation, letters: Iterable) -> "TwistWord":
        out = []
        for item in letters:
            if isinstance(item, str):
                name, sign = _parse_letter(item)
            else:
                name, sign = item
            if name not in S.catalog:
                raise SurfaceError("twist about unknown catalog curve %r" % name)
            if S.catalog[name].kind != "closed":
                raise SurfaceError("cannot twist about the arc %r" % name)
            out.append((name, 1 if sign > 0 else -1))
        return TwistWord(S.token, tuple(out))

    def serial(self) -> list:
        return ["%s%s" % (n, "+" if s > 0 else "-") for n, s in self.letters]

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        if self.surface_token != other.surface_token:
            raise SurfaceError("twist words on different surfaces")
        return TwistWord(self.surface_token, self.letters + other.letters)

    def __pow__(self, n: int) -> "TwistWord":
        if n < 0:
            return invert(self) ** (-n)
        return TwistWord(self.surface_token, self.letters * n)


def _parse_letter(text: str):
    text = text.strip()
    if not text or text[-1] not in "+-":
        raise SurfaceError("twist letter %r needs a trailing sign" % text)
    return text[:-1], 1 if text[-1] == "+" else -1


def invert(w: TwistWord) -> TwistWord:
    return TwistWord(w.surface_token, tuple((n, -s) for n, s in reversed(w.letters)))


# ---------------------------------------------------------------------------
# twist action


def _before_along(S, A1, ends_i, ends_j) -> bool:
    """Does the disjoint lift with ends ``ends_i`` cross the fixed lift
    nearer its endpoint A1 than the lift with ends ``ends_j``?"""
    B1j, B2j = ends_j
    ref = cover.orientation(S, B1j, A1, B2j)
    return (cover.orientation(S, B1j, ends_i[0], B2j) == ref
            and cover.orientation(S, B1j, ends_i[1], B2j) == ref)


def _twist_crossings(S, p: PathWord, c: PathWord):
    """Crossings of p with c as (chord, phase, sign), ordered along p."""
    w = c.letters
    if not w:
        return []
    if p.kind == "arc":
        recs = cover.arc_closed_records(S, p.letters, p.ends, w)
        A1, _ = cover.arc_points(S, p.letters, p.ends)
        items = [(t, j, s, cover.closed_ends(S, w, shift=g)) for s, g, t, j in recs]
    else:
        recs = cover.closed_closed_records(S, p.letters, w)
        A1, _ = cover.closed_ends(S, p.letters)
        items = []
        for s, g, _t, _j in recs:
            t, j, g2 = _closed_position(S, p.letters, w, g)
            items.append((t, j, s, cover.closed_ends(S, w, shift=g2)))
    # sort along p from A1; lifts of the embedded c are pairwise disjoint,
    # so "crosses nearer the start" is a total order
    out = list(items)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            if _before_along(S, A1, out[i + 1][3], out[i][3]):
                out[i], out[i + 1] = out[i + 1], out[i]
                changed = True
    return [(t, j, s) for t, j, s, _ in out]


def _closed_position(S, p_letters: Word, w: Word, g: Word):
    """Common polygon of the base lift of p with a translate of the c-lift g,
    normalized so the position lies in p's base period."""
    pa = [p_letters[:i] for i in range(len(p_letters))]
    span = (len(g) + len(p_letters) + len(w)) // max(1, len(p_letters)) + 2
    for k in range(-span, span + 1):
        g2 = mul(p_letters * k, g) if k >= 0 else mul(invert_word(p_letters) * (-k), g)
        span_c = (len(g2) + len(p_letters) + len(w)) // max(1, len(w)) + 2
        b_polys = []
        for n in range(-span_c, span_c + 1):
            base = mul(g2, w * n) if n >= 0 else mul(g2, invert_word(w) * (-n))
            for j in range(len(w)):
                b_polys.append((j, mul(base, w[:j])))
        pos = cover._common_position(pa, b_polys)
        if pos is not None:
            return pos[0], pos[1], g2
    raise AssertionError("no period translate shares a polygon with the crossing lift")


def _rot(w: Word, j: int) -> Word:
    return w[j:] + w[:j]


def apply_twist(S: SurfacePresentation, c, sign: int, p: PathWord) -> PathWord:
    """Normalized image of ``p`` under the Dehn twist D_c^sign.

    ``c`` may be a catalog name or a closed PathWord.  Every essential
    crossing of ``p`` with ``c`` is rerouted one full turn along ``c``.
    """
    if isinstance(c, str):
        c = S.curve(c)
    c = c if c.canonical else normalize(S, c)
    if c.kind != "closed":
        raise SurfaceError("Dehn twists are about simple closed curves, not arcs")
    p = p if p.canonical else normalize(S, p)
    if not c.letters:
        return p  # twist about a contractible curve is isotopic to the identity
    cache = getattr(S, "_twist_cache", None)
    if cache is None:
        cache = S._twist_cache = {}
    key = (c.letters, sign, p.kind, p.letters, p.ends)
    hit = cache.get(key)
    if hit is not None:
        return hit
    out = _apply_twist_uncached(S, c, sign, p)
    cache[key] = out
    return out


def _apply_twist_uncached(S, c, sign, p):
    crossings = _twist_crossings(S, p, c)
    if not crossings:
        return p
    w = c.letters
    pieces: list = []
    n = len(p.letters)
    idx = 0
    for t in range(n + 1):
        while idx < len(crossings) and crossings[idx][0] == t:
            _t, j, s = crossings[idx]
            detour = _rot(w, j)
            if KAPPA_TWIST * sign * s < 0:
                detour = invert_word(detour)
            pieces.append(detour)
            idx += 1
        if t < n:
            pieces.append((p.letters[t],))
    assert idx == len(crossings), "crossing position outside the word"
    letters = reduce_word(x for piece in pieces for x in piece)
    # homeomorphic image of an embedded path: embeddedness is automatic
    return normalize(S, PathWord(S, p.kind, letters, p.ends), check_embedded=False)


def apply_word(S: SurfacePresentation, word: TwistWord, p: PathWord,
               monodromy_image: bool = False) -> PathWord:
    """Apply a twist word, rightmost letter first.

    With ``monodromy_image`` the returned arc carries the reversed
    push-forward orientation, the convention used when profiling an
    arc against its monodromy image.
    """
    if word.surface_token != S.token:
        raise SurfaceError("twist word on a different surface")
    q = p if p.canonical else normalize(S, p)
    for name, sign in reversed(word.letters):
        q = apply_twist(S, name, sign, q)
    if monodromy_image and q.kind == "arc":
        q = normalize(S, q.reversed())
    return q


# ---------------------------------------------------------------------------
# mapping-class equality via the Alexander method


@dataclass(frozen=True)
class FillingArcSystem:
    """Arcs whose complement is a union of disks.

    The per-surface default is one co-core dual per band: cutting along
    them recovers the base polygon.  Verification is by cutting and an
    Euler-characteristic count (see openbook.cut_along).
    """

    arcs: Tuple[PathWord, ...]

    @staticmethod
    def default(S: SurfacePresentation) -> "FillingArcSystem":
        return FillingArcSystem(S.default_filling())

    def verify(self, S: SurfacePresentation) -> bool:
        from .complexes import system_fills
        return system_fills(S, self.arcs)


def words_equal(S: SurfacePresentation, w1: TwistWord, w2: TwistWord,
                filling: Optional[FillingArcSystem] = None,
                check_filling: bool = False) -> bool:
    """Mapping-class equality (boundary fixed) via images of filling arcs."""
    if filling is None:
        filling = FillingArcSystem.default(S)
    if check_filling and not filling.verify(S):
        raise SurfaceError("arc system does not fill: complement has a non-disk piece")
    for f in filling.arcs:
        img1 = apply_word(S, w1, f)
        img2 = apply_word(S, w2, f)
        if img1 != img2:
            return False
    return True
