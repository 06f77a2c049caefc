"""Surfaces, canonical forms and exact intersection numbers."""

import pytest

from openbooks.surface import (
    PathWord,
    SurfaceError,
    build_surface,
    i_alg,
    i_boundary,
    i_geom,
    is_isotopic,
    minimal_position,
    normalize,
    profile_pair,
)
from openbooks.twist import TwistWord, apply_twist, apply_word
from openbooks.words import enc


def test_build_disk():
    S = build_surface(0, 1)
    assert S.euler == 1
    assert S.boundary_count == 1
    assert not [n for n in S.catalog if n.startswith(("a", "b"))]
    assert "delta1" in S.catalog


def test_build_annulus():
    S = build_surface(0, 2)
    assert S.euler == 0
    assert "c" in S.catalog
    assert S.catalog["c"].kind == "closed"


def test_build_punctured_torus():
    S = build_surface(1, 1)
    assert S.euler == -1
    assert {"a1", "b1", "delta1"} <= set(S.catalog)


def test_build_rejects_closed_surfaces():
    with pytest.raises(SurfaceError):
        build_surface(1, 0)


@pytest.mark.parametrize("g,b", [(0, 1), (0, 2), (0, 4), (1, 1), (1, 3), (2, 1), (2, 3)])
def test_build_boundary_tracing(g, b):
    S = build_surface(g, b)
    assert len(S.boundary_cycles) == b
    assert S.euler == 2 - 2 * g - b


def test_catalog_chain_intersections():
    S = build_surface(2, 1)
    names = ["a1", "b1", "a2", "b2"]
    expect = {("a1", "b1"): 1, ("b1", "a2"): 1, ("a2", "b2"): 1}
    for i in range(4):
        for j in range(i + 1, 4):
            pair = (names[i], names[j])
            want = expect.get(pair, 0)
            assert i_geom(S, S.curve(names[i]), S.curve(names[j])) == want
    for n in names:
        assert i_geom(S, S.curve("delta1"), S.curve(n)) == 0


def test_normalize_idempotent():
    S = build_surface(1, 1)
    p = S.curve("a1")
    assert normalize(S, p) == p


def test_normalize_removes_spur():
    S = build_surface(1, 1)
    base = PathWord(S, "arc", (enc(0, 1),), ends=((0, 0), (2, 0)))
    spur = PathWord(S, "arc", (enc(0, 1), enc(1, 1), enc(1, -1)), ends=((0, 0), (2, 0)))
    assert normalize(S, spur) == normalize(S, base)


def test_normalize_rejects_nonembeddable():
    S = build_surface(1, 1)
    # a closed curve crossing a twice the same way is a proper power
    with pytest.raises(SurfaceError):
        normalize(S, PathWord(S, "closed", (enc(0, 1), enc(0, 1))))


def test_minimal_position_parallel_arcs():
    S = build_surface(0, 2)
    a = normalize(S, PathWord(S, "arc", (), ends=((0, 0), (1, 0))))
    b = normalize(S, PathWord(S, "arc", (), ends=((0, 1), (1, 1))))
    a2, b2 = minimal_position(S, a, b)
    assert i_geom(S, a2, b2) == 0


def test_minimal_position_single_twist_image():
    # the annulus anchors: one twist can be undone at the boundary
    S = build_surface(0, 2)
    al = S.curve("dual_p1")
    img = apply_word(S, TwistWord.make(S, ["c+"]), al, monodromy_image=True)
    assert i_geom(S, al, img) == 0


def test_minimal_position_double_twist_image():
    S = build_surface(0, 2)
    al = S.curve("dual_p1")
    img = apply_word(S, TwistWord.make(S, ["c+", "c+"]), al, monodromy_image=True)
    assert i_geom(S, al, img) == 1


def test_i_geom_annulus_anchor():
    S = build_surface(0, 2)
    al = S.curve("dual_p1")
    img = apply_word(S, TwistWord.make(S, ["c-"]), al, monodromy_image=True)
    assert i_geom(S, al, img) == 0
    assert i_geom(S, al, al) == 0


def test_i_geom_twisted_b():
    S = build_surface(1, 1)
    img = apply_twist(S, "a1", 1, S.curve("b1"))
    assert i_geom(S, img, S.curve("b1")) == 1


def test_i_alg_conventions():
    S = build_surface(1, 1)
    a, b = S.curve("a1"), S.curve("b1")
    assert i_alg(S, a, b) == 1
    assert i_alg(S, b, a) == -1
    assert i_alg(S, a.reversed(), b) == -1
    assert i_alg(S, a, a) == 0
    A = build_surface(0, 2)
    al = A.curve("dual_p1")
    for s in (1, -1):
        img = apply_word(A, TwistWord.make(A, [("c", s)]), al, monodromy_image=True)
        assert i_alg(A, al, img) == 0


def test_i_boundary_anchors():
    A = build_surface(0, 2)
    al = A.curve("dual_p1")
    for s in (1, -1):
        img = apply_word(A, TwistWord.make(A, [("c", s)]), al, monodromy_image=True)
        assert i_boundary(A, al, img) == s
    assert i_boundary(A, al, al) == 0


def test_i_boundary_needs_shared_endpoints():
    A = build_surface(0, 2)
    al = A.curve("dual_p1")
    other = normalize(A, PathWord(A, "arc", (), ends=((0, 0), (1, 0))))
    with pytest.raises(SurfaceError):
        i_boundary(A, al, other)


def test_is_isotopic():
    A = build_surface(0, 2)
    al = A.curve("dual_p1")
    assert is_isotopic(A, al, al)
    img = apply_word(A, TwistWord.make(A, ["c+"]), al, monodromy_image=True)
    assert not is_isotopic(A, al, img)
    spur = PathWord(A, "arc", (enc(0, 1), enc(0, -1)), ends=al.ends)
    assert is_isotopic(A, al, spur)


def test_is_isotopic_kind_mismatch():
    A = build_surface(0, 2)
    with pytest.raises(SurfaceError):
        is_isotopic(A, A.curve("c"), A.curve("dual_p1"))


def test_symmetry_and_parity_properties():
    import random

    random.seed(20)
    for g, b in [(0, 2), (1, 1), (1, 2)]:
        S = build_surface(g, b)
        names = sorted(S.catalog)
        closed = [n for n in names if S.catalog[n].kind == "closed"
                  and S.catalog[n].letters]
        for _ in range(12):
            w = TwistWord.make(S, [(random.choice(closed), random.choice([1, -1]))
                                   for _ in range(random.randint(0, 2))])
            p = apply_word(S, w, S.catalog[random.choice(names)])
            q = S.catalog[random.choice(names)]
            assert i_geom(S, p, q) == i_geom(S, q, p)
            assert i_alg(S, p, q) == -i_alg(S, q, p)
            assert abs(i_alg(S, p, q)) <= i_geom(S, p, q)
            assert (i_alg(S, p, q) - i_geom(S, p, q)) % 2 == 0


def test_profile_isotopic_flag():
    A = build_surface(0, 2)
    al = A.curve("dual_p1")
    pr = profile_pair(A, al, al)
    assert pr.isotopic and pr.i_geom == 0 and pr.i_bd == 0
