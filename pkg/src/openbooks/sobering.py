"""Sobering arcs and overtwistedness certificates.

An arc is sobering for a monodromy when the sum of its three
intersection numbers with its image is nonpositive and the image is
not isotopic to it.  Such an arc suspends to a surface violating the
Bennequin inequality: with the n = 1 formulas

    chi(S) = 1 - i_geom,   Fr = -(i_alg + i_bd),

the threshold tw + chi = 1 - (i_alg + i_bd + i_geom) is positive, so
the open book is overtwisted.  When the sum is exactly -1 the same
construction applied to n stacked copies of the page yields
tw + chi = 2 for every power of the monodromy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

from .openbook import OpenBook, monodromy_image, monodromy_profile
from .surface import (
    IntersectionProfile,
    PathWord,
    SurfaceError,
    SurfacePresentation,
    build_surface,
    interior_signs,
    is_isotopic,
    normalize,
)
from .twist import TwistWord, apply_word
from .words import enc, inv_letter


class SearchBudgetExceeded(RuntimeError):
    """Arc enumeration hit its resource bound; the answer is unknown."""


@dataclass(frozen=True)
class SoberingCertificate:
    profile: IntersectionProfile
    chi_s: int
    framing: int
    twist_plus_chi: int
    n: int
    verdict: str                    # "Overtwisted" | "Inconclusive"
    arc: Optional[PathWord] = None
    monodromy: Optional[Tuple[Tuple[str, int], ...]] = None

    def overtwisted(self) -> bool:
        return self.verdict == "Overtwisted"


def profile_arc(B: OpenBook, alpha: PathWord) -> IntersectionProfile:
    """The triple (i_alg, i_geom, i_bd) of an arc against its monodromy
    image, plus the isotopy flag."""
    return monodromy_profile(B, alpha)


def is_sobering(B: OpenBook, alpha: PathWord):
    """Decide the sobering condition; returns (flag, reason).

    Cross-checks the defining inequality against its reformulation
    (no boundary wrap to the positive side and no positive interior
    intersections); a disagreement flags an intersection-engine bug.
    """
    a = normalize(B.surface, alpha)
    pr = profile_arc(B, a)
    total = pr.total()
    primary = total <= 0 and not pr.isotopic
    img = monodromy_image(B, a)
    signs = interior_signs(B.surface, a, img)
    positives = sum(1 for s in signs if s > 0)
    reformulated = pr.i_bd <= 0 and positives == 0 and not pr.isotopic
    if primary != reformulated:
        raise AssertionError(
            "sobering characterizations disagree: profile %r, %d positive "
            "interior crossings" % (pr, positives))
    if primary:
        return True, "i_alg + i_bd + i_geom = %d <= 0 and image not isotopic" % total
    if pr.isotopic:
        return False, "image isotopic to the arc"
    return False, "i_alg + i_bd + i_geom = %d > 0" % total


def certificate_fields(pr: IntersectionProfile, n: int = 1):
    """(chi_S, framing, tw + chi) of the suspension surface.

    n = 1: chi = 1 - i_geom and framing = -(i_alg + i_bd); for higher
    powers the page is stacked n times, chi = 2 - n - n i_geom and
    framing = -n (i_alg + i_bd).
    """
    if n == 1:
        chi_s = 1 - pr.i_geom
        framing = -(pr.i_alg + pr.i_bd)
    else:
        chi_s = 2 - n - n * pr.i_geom
        framing = -n * (pr.i_alg + pr.i_bd)
    return chi_s, framing, framing + chi_s


def certify(B: OpenBook, alpha: PathWord) -> SoberingCertificate:
    """Overtwistedness certificate from a sobering arc (n = 1)."""
    a = normalize(B.surface, alpha)
    pr = profile_arc(B, a)
    chi_s, framing, tw_chi = certificate_fields(pr, 1)
    sober, _reason = is_sobering(B, a)
    verdict = "Overtwisted" if sober else "Inconclusive"
    if verdict == "Overtwisted" and tw_chi <= 0:
        raise AssertionError("sobering arc with nonpositive Bennequin excess")
    return SoberingCertificate(pr, chi_s, framing, tw_chi, 1, verdict,
                               arc=a, monodromy=B.monodromy.letters)


def certify_power(B: OpenBook, alpha: PathWord, n: int) -> SoberingCertificate:
    """Certificate for the n-th power of the monodromy.

    Requires the profile sum to be exactly -1; stacking n copies of
    the page gives chi(S) = 2 - n - n i_geom and framing
    -n (i_alg + i_bd), so tw + chi = 2 independently of n.
    """
    if n < 1:
        raise SurfaceError("power must be a positive integer")
    a = normalize(B.surface, alpha)
    pr = profile_arc(B, a)
    if pr.total() != -1:
        raise SurfaceError(
            "power criterion needs i_alg + i_bd + i_geom = -1, got %d" % pr.total())
    chi_s, framing, tw_chi = certificate_fields(pr, n)
    if tw_chi != 2:
        raise AssertionError("power certificate must have excess 2")
    return SoberingCertificate(pr, chi_s, framing, tw_chi, n, "Overtwisted",
                               arc=a, monodromy=(B.monodromy ** n).letters)


def revalidate(B: OpenBook, cert: SoberingCertificate) -> bool:
    """Recompute a certificate's integers from scratch."""
    if cert.arc is None:
        return False
    pr = profile_arc(B, cert.arc)
    if pr != cert.profile:
        return False
    if cert.n == 1:
        return (cert.chi_s == 1 - pr.i_geom
                and cert.framing == -(pr.i_alg + pr.i_bd)
                and cert.twist_plus_chi == cert.chi_s + cert.framing
                and (cert.verdict != "Overtwisted" or cert.twist_plus_chi > 0))
    return (pr.total() == -1
            and cert.chi_s == 2 - cert.n - cert.n * pr.i_geom
            and cert.framing == -cert.n * (pr.i_alg + pr.i_bd)
            and cert.twist_plus_chi == 2)


# ---------------------------------------------------------------------------
# bounded arc search


def enumerate_arcs(S: SurfacePresentation, max_crossings: int,
                   budget: Optional[int] = None) -> Iterator[PathWord]:
    """Canonical arcs with at most ``max_crossings`` cell crossings.

    Deterministic: endpoints run over ordered segment pairs at fixed
    stations, words in length-lexicographic order; one representative
    per unoriented isotopy class.
    """
    nseg = len(S.seg_names)
    k = len(S.cells)
    letters = [enc(c, s) for c in range(k) for s in (1, -1)]
    seen = set()
    count = 0
    for length in range(max_crossings + 1):
        for word in _reduced_words(letters, length):
            for s0 in range(nseg):
                for s1 in range(nseg):
                    ends = ((s0, 0), (s1, 1)) if s0 == s1 else ((s0, 0), (s1, 0))
                    count += 1
                    if budget is not None and count > budget:
                        raise SearchBudgetExceeded(
                            "arc enumeration budget %d exceeded" % budget)
                    try:
                        arc = normalize(S, PathWord(S, "arc", word, ends=ends))
                    except SurfaceError:
                        continue
                    if len(arc.letters) != length:
                        continue  # non-reduced word: already enumerated
                    rev = arc.reversed()
                    key = min((arc.ends, arc.letters),
                              (rev.ends, tuple(rev.letters)))
                    if key in seen:
                        continue
                    seen.add(key)
                    yield arc


def _reduced_words(letters, length) -> Iterator[Tuple[int, ...]]:
    if length == 0:
        yield ()
        return
    for word in itertools.product(letters, repeat=length):
        if any(word[i + 1] == inv_letter(word[i]) for i in range(length - 1)):
            continue
        yield word


def search_sobering(B: OpenBook, max_crossings: int,
                    budget: Optional[int] = 200000):
    """First sobering arc among canonical arcs up to the crossing bound.

    Returns (arc, certificate) or None; None means unknown, not tight.
    A distinct SearchBudgetExceeded signals an exhausted resource
    bound before the enumeration finished.
    """
    for arc in enumerate_arcs(B.surface, max_crossings, budget=budget):
        sober, _reason = is_sobering(B, arc)
        if sober:
            return arc, certify(B, arc)
    return None


# ---------------------------------------------------------------------------
# boundary-negative monodromies


def chain_factor_letters(g: int) -> List[Tuple[str, int]]:
    """One factor of the inverted chain relation on the genus-g page:
    the composition of negative twists along the chain, last handle
    first."""
    out = []
    for i in range(g, 0, -1):
        out.append(("b%d" % i, -1))
        out.append(("a%d" % i, -1))
    return out


def check_boundneg(g: int, n: int) -> SoberingCertificate:
    """Certificate that the genus-g page with n negative boundary twists
    is overtwisted.

    The boundary twist is the (4g+2)-nd power of the chain product, so
    its n-th inverse power is the n(4g+2)-nd power of the inverted
    factor; the arc dual to the last chain curve has profile sum -1
    against one factor and the power criterion applies.
    """
    if g < 1:
        raise SurfaceError("the boundary-twist criterion needs genus > 0")
    if n < 1:
        raise SurfaceError("the number of negative twists must be positive")
    S = build_surface(g, 1)
    factor = TwistWord.make(S, chain_factor_letters(g))
    B = OpenBook(S, factor)
    alpha = S.curve("dual_b%d" % g)
    return certify_power(B, alpha, n * (4 * g + 2))
