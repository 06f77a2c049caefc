"""Open books: Murasugi sums, Hopf bands, detection and removal of
Hopf-band summands.

An open book is a surface presentation together with a monodromy twist
word.  Plumbing glues two open books along rectangles around properly
embedded arcs and concatenates the monodromies, each extended by the
identity.  A Hopf summand is recognized by its transverse arc: image
disjoint from the arc but wrapped once at the boundary; removing it
cuts the page along the arc after peeling one twist off the monodromy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import cover
from .complexes import cut_along_arc, plumb
from .surface import (
    IntersectionProfile,
    PathWord,
    SurfaceError,
    SurfacePresentation,
    build_surface,
    i_geom,
    install_basic_catalog,
    is_isotopic,
    normalize,
    profile_pair,
)
from .twist import TwistWord, apply_twist, apply_word, words_equal
from .words import invert_word, mul


@dataclass(frozen=True)
class OpenBook:
    surface: SurfacePresentation
    monodromy: TwistWord

    def __post_init__(self):
        if self.monodromy.surface_token != self.surface.token:
            raise SurfaceError("monodromy is written on a different surface")
        for name, _s in self.monodromy.letters:
            if name not in self.surface.catalog:
                raise SurfaceError("monodromy references unknown curve %r" % name)

    def with_word(self, letters) -> "OpenBook":
        return OpenBook(self.surface, TwistWord.make(self.surface, letters))


@dataclass(frozen=True)
class PlumbingSite:
    """A properly embedded arc with the rectangle matching choice."""

    arc: PathWord
    orientation: int = 1

    def __post_init__(self):
        if self.arc.kind != "arc":
            raise SurfaceError("plumbing sites are properly embedded arcs")


def hopf_band(sign: int) -> OpenBook:
    """Annulus with a single positive or negative core twist."""
    A = build_surface(0, 2)
    return OpenBook(A, TwistWord.make(A, [("c", 1 if sign > 0 else -1)]))


def transverse_site(B: OpenBook) -> PlumbingSite:
    """The standard site of a Hopf band: the arc across the annulus."""
    return PlumbingSite(B.surface.curve("dual_p1"))


def monodromy_image(B: OpenBook, alpha: PathWord) -> PathWord:
    return apply_word(B.surface, B.monodromy, alpha, monodromy_image=True)


def monodromy_profile(B: OpenBook, alpha: PathWord) -> IntersectionProfile:
    """Intersection profile of an arc against its monodromy image."""
    a = normalize(B.surface, alpha)
    if a.kind != "arc":
        raise SurfaceError("profiles are computed for properly embedded arcs")
    return profile_pair(B.surface, a, monodromy_image(B, a))


def _unique_name(catalog, base: str) -> str:
    if base not in catalog:
        return base
    for k in itertools.count(1):
        cand = "%s_%d" % (base, k)
        if cand not in catalog:
            return cand


def _carry_names(B: OpenBook, site_arc: PathWord):
    """Catalog entries to transport into the sum.

    Monodromy curves are always carried (crossings with the site route
    through the plumbing square); other catalog entries are carried on
    a best-effort basis, skipping arcs pinned to the site's endpoint
    stations.
    """
    S = B.surface
    needed = {name for name, _s in B.monodromy.letters}
    carried = dict((name, S.catalog[name]) for name in needed)
    for name, p in S.catalog.items():
        if name in carried or p == site_arc:
            continue
        if p.kind == "arc" and set(p.ends) & set(site_arc.ends):
            continue
        carried[name] = p
    return carried


def murasugi_sum_with_maps(B1: OpenBook, s1: PlumbingSite, B2: OpenBook, s2: PlumbingSite):
    """Murasugi sum plus the catalog name maps of both summands."""
    S1, S2 = B1.surface, B2.surface
    l1 = normalize(S1, s1.arc)
    l2 = normalize(S2, s2.arc)
    carried1 = _carry_names(B1, l1)
    carried2 = _carry_names(B2, l2)
    flip = s1.orientation * s2.orientation
    pres, out1, out2 = plumb(S1, l1, S2, l2, carried1, carried2, flip=flip)
    if pres.euler != S1.euler + S2.euler - 1:
        raise AssertionError("Euler characteristic is not additive over the sum")
    install_basic_catalog(pres)
    name_map1, name_map2 = {}, {}
    for src, out, nm in ((carried1, out1, name_map1), (carried2, out2, name_map2)):
        for name in src:
            new = _unique_name(pres.catalog, name)
            pres.register_curve(new, out[name])
            nm[name] = new
    letters = [(name_map1[n], s) for n, s in B1.monodromy.letters]
    letters += [(name_map2[n], s) for n, s in B2.monodromy.letters]
    return OpenBook(pres, TwistWord.make(pres, letters)), name_map1, name_map2


def murasugi_sum(B1: OpenBook, s1: PlumbingSite, B2: OpenBook, s2: PlumbingSite) -> OpenBook:
    """The Murasugi sum: glued page, composed monodromy.

    The result's surface is re-presented by boundary tracing; Euler
    characteristics add minus one; both catalogs are transported, with
    name clashes suffixed by the summand index.
    """
    return murasugi_sum_with_maps(B1, s1, B2, s2)[0]


def stabilize_with_map(B: OpenBook, site: PlumbingSite):
    H = hopf_band(+1)
    book, nm1, _nm2 = murasugi_sum_with_maps(B, site, H, transverse_site(H))
    return book, nm1


def stabilize(B: OpenBook, site: PlumbingSite) -> OpenBook:
    """Plumb a positive Hopf band at the given site of B."""
    return stabilize_with_map(B, site)[0]


def smooth_union(S: SurfacePresentation, alpha: PathWord, phi_alpha: PathWord,
                 name: Optional[str] = None) -> PathWord:
    """The closed curve smoothing alpha with its disjoint image.

    Requires i_geom = 0, shared endpoints and a non-isotopic image; the
    result c satisfies D_c^s(alpha) ~ phi(alpha) with s the boundary
    intersection sign, and is registered into the catalog.
    """
    a = normalize(S, alpha)
    b = normalize(S, phi_alpha)
    pr = profile_pair(S, a, b)
    if pr.i_geom != 0:
        raise SurfaceError("smoothing needs i_geom = 0, got %d" % pr.i_geom)
    if pr.isotopic:
        raise SurfaceError("smoothing a trivial pair gives no curve")
    if set(a.ends) != set(b.ends):
        raise SurfaceError("arcs must share endpoints")
    if a.ends == b.ends:
        loop = mul(a.letters, invert_word(b.letters))
    else:
        loop = mul(a.letters, b.letters)
    c = normalize(S, PathWord(S, "closed", loop))
    sign = pr.i_bd
    if sign not in (-1, 1):
        raise SurfaceError("smoothed pair has no Hopf profile")
    if not is_isotopic(S, apply_twist(S, c, sign, a), b):
        raise AssertionError("smoothed curve does not reproduce the image by a twist")
    if name is None:
        name = _unique_name(S.catalog, "smooth")
    S.register_curve(name, c, replace=False)
    return S.catalog[name]


def detect_hopf_summands(B: OpenBook, candidates: Optional[Sequence[PathWord]] = None):
    """All candidate arcs whose profile certifies a Hopf-band summand.

    Candidates default to the handle-transverse arc catalog of the
    standard model (one dual arc per band); absence of a match proves
    nothing.  Matches are re-verified by their profile.
    """
    S = B.surface
    if candidates is None:
        names = sorted(S.catalog, key=lambda n: (not n.startswith("dual"), n))
        candidates = [S.catalog[n] for n in names
                      if S.catalog[n].kind == "arc"]
    found = []
    for arc in candidates:
        a = normalize(S, arc)
        if a.kind != "arc":
            continue
        pr = monodromy_profile(B, a)
        if pr.i_geom == 0 and pr.i_bd in (-1, 1) and not pr.isotopic:
            found.append((a, pr.i_bd))
    return found


def detect_hopf_summand(B: OpenBook, candidates: Optional[Sequence[PathWord]] = None):
    found = detect_hopf_summands(B, candidates)
    return found[0] if found else None


def simplify_word(S: SurfacePresentation, word: TwistWord) -> TwistWord:
    """Cancel opposite twist pairs, allowing conjugation by the letters
    in between.

    Since D_{M(y)} = M D_y M^{-1}, a pair D_x^{-s} ... M ... D_y^{s}
    collapses to M whenever x is isotopic to M(y); twist pairs about
    isotopic disjoint curves are the M = identity case.
    """
    letters = list(word.letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(letters)):
            for j in range(i + 1, len(letters)):
                ni, si = letters[i]
                nj, sj = letters[j]
                if si != -sj:
                    continue
                mid = TwistWord(S.token, tuple(letters[i + 1:j]))
                image = apply_word(S, mid, S.catalog[nj])
                if not is_isotopic(S, image, S.catalog[ni]):
                    continue
                del letters[j]
                del letters[i]
                changed = True
                break
            if changed:
                break
    return TwistWord(S.token, tuple(letters))


def deplumb_hopf_with_map(B: OpenBook, arc: PathWord, sign: int,
                          extra_carry: Optional[Dict[str, PathWord]] = None):
    S = B.surface
    a = normalize(S, arc)
    pr = monodromy_profile(B, a)
    if not (pr.i_geom == 0 and pr.i_bd == sign and sign in (-1, 1)):
        raise SurfaceError("arc does not certify a Hopf summand: %r" % (pr,))
    c = smooth_union(S, a, monodromy_image(B, a))
    # peel exactly one matching letter off the word: the smoothed band
    # curve is the image of that letter's curve under the twists that
    # separate them (either plumb-back order is a valid sum)
    letters = list(B.monodromy.letters)
    word = None
    for j, (nj, sj) in enumerate(letters):
        if sj != sign:
            continue
        after = TwistWord(S.token, tuple(letters[j + 1:]))
        before = TwistWord(S.token, tuple(letters[:j]))
        if (is_isotopic(S, apply_word(S, after, c), S.catalog[nj])
                or is_isotopic(S, apply_word(S, before, S.catalog[nj]), c)):
            word = TwistWord(S.token, tuple(letters[:j] + letters[j + 1:]))
            break
    if word is None:
        raise SurfaceError(
            "unsupported deplumbing: no monodromy letter matches the band curve")
    bad = [n for n, _s in word.letters
           if len(cover.pair_records(S, S.catalog[n], a)) != 0]
    if bad:
        word = simplify_word(S, word)
        bad = [n for n, _s in word.letters
               if len(cover.pair_records(S, S.catalog[n], a)) != 0]
    if bad:
        raise SurfaceError(
            "unsupported deplumbing: twists %r cross the cut arc" % bad)
    carried = {n: S.catalog[n] for n, _s in word.letters}
    for name, p in dict(extra_carry or {}).items():
        if name in carried or p == a:
            continue
        if len(cover.pair_records(S, p, a)) == 0 and (
                p.kind == "closed" or not set(p.ends) & set(a.ends)):
            carried[name] = p
    pres, out, cut_segs = cut_along_arc(S, a, carried)
    if pres.euler != S.euler + 1:
        raise AssertionError("cutting along an arc must raise chi by one")
    install_basic_catalog(pres)
    name_map = {}
    for name in carried:
        new = _unique_name(pres.catalog, name)
        pres.register_curve(new, out[name])
        name_map[name] = new
    new_word = TwistWord.make(pres, [(name_map[n], s) for n, s in word.letters])
    merged_cycles = sorted({pres.seg_cycle[s] for s in cut_segs})
    return OpenBook(pres, new_word), name_map, merged_cycles


def deplumb_hopf(B: OpenBook, arc: PathWord, sign: int) -> OpenBook:
    """Remove the Hopf-band summand transverse to ``arc``.

    Peels the twist about the smoothed curve off the monodromy, checks
    that the remaining letters avoid the arc, and cuts the page along
    it; plumbing the band back recovers the original word (checked via
    filling arcs in the acceptance suite).
    """
    return deplumb_hopf_with_map(B, arc, sign)[0]


def page_summary(B: OpenBook) -> Tuple[int, int, Tuple[str, ...]]:
    S = B.surface
    return (S.genus, S.boundary_count, tuple("%s%+d" % (n, s) for n, s in B.monodromy.letters))
