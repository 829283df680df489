import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chevrigid.errors import MixedSystems, NotARoot, UnsupportedType
from chevrigid.roots import Root, build, find_weyl_word, pairing, reflect

from oracles import POSITIVE_COUNT, a_roots, d_root_count

SUPPORTED = [("A", l) for l in range(2, 9)] + [("D", l) for l in range(4, 9)] + [("E", 6), ("E", 7), ("E", 8)]


def test_a2_positive_roots():
    s = build("A", 2)
    assert [r.coords for r in s.positive] == [(1, 0), (0, 1), (1, 1)]
    assert s.m == 3 and s.n == 8


def test_d4_count():
    assert build("D", 4).m == 12


@pytest.mark.parametrize("fam,rank", [("B", 3), ("C", 2), ("G", 2), ("F", 4), ("A", 1), ("D", 3), ("E", 5), ("E", 9)])
def test_unsupported(fam, rank):
    with pytest.raises(UnsupportedType):
        build(fam, rank)


@pytest.mark.parametrize("fam,rank", SUPPORTED)
def test_counts_against_independent_formula(fam, rank):
    s = build(fam, rank)
    if fam == "A":
        assert {r.coords for r in s.positive} == a_roots(rank)
    elif fam == "D":
        assert s.m == d_root_count(rank)
    else:
        assert s.m == POSITIVE_COUNT[(fam, rank)]
    assert s.check_invariants() == []


@pytest.mark.parametrize("fam,rank", SUPPORTED)
def test_ordering_height_then_simple_first(fam, rank):
    s = build(fam, rank)
    heights = [r.height for r in s.positive]
    assert heights == sorted(heights)
    assert [r.coords for r in s.positive[:rank]] == [tuple(int(i == j) for j in range(rank)) for i in range(rank)]


def test_pairing_examples():
    s = build("A", 2)
    a1, a2 = s.simple(1), s.simple(2)
    assert pairing(a1, a1) == 2
    assert pairing(a1, a2) == -1
    assert pairing(a1, -a1) == -2


def test_reflect_examples():
    s = build("A", 2)
    a1, a2 = s.simple(1), s.simple(2)
    assert reflect(a1, a1) == -a1
    assert reflect(a1, a2) == s.root((1, 1))
    d = build("D", 4)
    assert reflect(d.simple(1), d.simple(3)) == d.simple(3)


def test_find_weyl_word_examples():
    s = build("A", 2)
    a1 = s.simple(1)
    assert find_weyl_word(a1, a1) == []
    assert find_weyl_word(a1, s.root((1, 1))) == [2]
    with pytest.raises(NotARoot):
        find_weyl_word(a1, Root("A2", (2, 0)))
    with pytest.raises(NotARoot):
        s.root((2, 0))


def test_mixed_systems():
    a, d = build("A", 2), build("D", 4)
    with pytest.raises(MixedSystems):
        pairing(a.simple(1), d.simple(1))
    with pytest.raises(MixedSystems):
        reflect(a.simple(1), build("A", 3).simple(1))


@pytest.mark.parametrize("fam,rank", [("A", 2), ("A", 3), ("D", 4)])
def test_transitivity_exhaustive(fam, rank):
    s = build(fam, rank)
    for src in s.roots:
        for dst in s.roots:
            w = s.find_weyl_word(src, dst)
            assert s.apply_word(w, src) == dst
            assert (len(w) == 0) == (src == dst)


@pytest.mark.parametrize("fam,rank", [("E", 6), ("E", 7), ("E", 8)])
def test_transitivity_sampled(fam, rank):
    s = build(fam, rank)
    rng = random.Random(rank)
    for _ in range(15):
        src, dst = rng.choice(s.roots), rng.choice(s.roots)
        assert s.apply_word(s.find_weyl_word(src, dst), src) == dst


def test_bfs_word_is_shortest():
    s = build("A", 3)
    src, dst = s.simple(1), s.root((1, 1, 1))
    w = s.find_weyl_word(src, dst)
    assert len(w) == 2
    for i in range(1, 4):
        assert s.apply_word([i], src) != dst


@st.composite
def root_triple(draw):
    fam, rank = draw(st.sampled_from(SUPPORTED))
    s = build(fam, rank)
    pick = lambda: s.roots[draw(st.integers(0, len(s.roots) - 1))]
    return s, pick(), pick(), pick()


@given(root_triple())
def test_reflection_invariants(data):
    s, g, b1, b2 = data
    r1, r2 = s.reflect(g, b1), s.reflect(g, b2)
    assert s.is_root(r1.coords)
    assert s.reflect(g, r1) == b1
    assert s.pairing(r1, r2) == s.pairing(b1, b2)
    p = s.pairing(b1, g)
    assert p in (-2, -1, 0, 1, 2)
    assert (abs(p) == 2) == (b1 == g or b1 == -g)


@given(root_triple())
def test_pairing_is_bilinear(data):
    s, a, b, c = data
    v = np.asarray(b.coords) + np.asarray(c.coords)
    assert int(v @ s.cartan @ np.asarray(a.coords)) == s.pairing(b, a) + s.pairing(c, a)
