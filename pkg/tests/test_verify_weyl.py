import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chevrigid.errors import NotBlockSplit, PreconditionFailed
from chevrigid.group import w_elem, x_elem
from chevrigid.linalg import Matrix
from chevrigid.rings import parse_ring
from chevrigid.roots import build
from chevrigid.verify.golden import D4_CARTAN_W1
from chevrigid.verify.involution import random_congruence_element
from chevrigid.verify.weyl_normal import (attachment_order, cartan_block, normalize_weyl_images, standard_block,
                                          standard_blocks)

Z9 = parse_ring("zmod:3^2")
INT = parse_ring("int")


def _ints(m):
    return m.to_ints().astype(np.int64).tolist()


def test_cartan_block_examples():
    s = build("A", 2)
    assert _ints(cartan_block(w_elem(s.simple(1), INT(1)))) == [[-1, 1], [0, 1]]
    assert _ints(cartan_block(w_elem(s.simple(2), INT(1)))) == [[1, 0], [1, -1]]
    d = build("D", 4)
    assert _ints(cartan_block(w_elem(d.simple(1), INT(1)))) == D4_CARTAN_W1.tolist()
    with pytest.raises(NotBlockSplit):
        cartan_block(x_elem(s.simple(1), INT(1)))
    with pytest.raises(ValueError):
        cartan_block(Matrix.identity(INT, 8))


@pytest.mark.parametrize("fam,rank", [("A", 2), ("A", 5), ("D", 4), ("D", 6), ("E", 6), ("E", 7), ("E", 8)])
def test_cartan_blocks_are_standard(fam, rank):
    s = build(fam, rank)
    for i in range(1, rank + 1):
        assert _ints(cartan_block(w_elem(s.simple(i), INT(1)))) == standard_block(s, i).tolist()


@pytest.mark.parametrize("fam,rank", [("A", 2), ("A", 4), ("D", 4), ("D", 5), ("E", 6), ("E", 8)])
def test_attachment_order_is_a_tree(fam, rank):
    s = build(fam, rank)
    seen = set()
    for node, parent, _ in attachment_order(s):
        if parent is not None:
            assert parent in seen and s.adjacent(node, parent)
        seen.add(node)
    assert seen == set(range(1, rank + 1))


@pytest.mark.parametrize("fam,rank", [("A", 3), ("D", 4), ("E", 6)])
def test_true_blocks_give_identity(fam, rank):
    s = build(fam, rank)
    g = normalize_weyl_images(s, standard_blocks(s, Z9))
    assert g.is_identity()


def _conjugated(s, ring, rng):
    g0 = random_congruence_element(ring, s.rank, rng)
    g0i = g0.inverse()
    return [g0 @ w @ g0i for w in standard_blocks(s, ring)]


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1), st.sampled_from([("A", 2), ("A", 3), ("D", 4), ("E", 6)]),
       st.sampled_from(["zmod:3^2", "tpoly:3:2", "zmod:5^2"]))
def test_round_trip(seed, sysid, desc):
    s = build(*sysid)
    ring = parse_ring(desc)
    cands = _conjugated(s, ring, random.Random(seed))
    trace = []
    g = normalize_weyl_images(s, cands, trace)
    assert (g - Matrix.identity(ring, s.rank)).in_radical()
    gi = g.inverse()
    for c, w in zip(cands, standard_blocks(s, ring)):
        assert gi @ c @ g == w
    assert [t["node"] for t in trace] == [n for n, _, _ in attachment_order(s)]


def test_preconditions():
    s = build("A", 3)
    good = standard_blocks(s, Z9)
    with pytest.raises(PreconditionFailed) as e:
        normalize_weyl_images(s, good[:2])
    assert e.value.condition == "one candidate per simple root"
    bad = list(good)
    bad[1] = bad[1] + Matrix.unit(Z9, 3, 0, 0)
    with pytest.raises(PreconditionFailed) as e:
        normalize_weyl_images(s, bad)
    assert e.value.index == 2
    swapped = [good[1], good[0], good[2]]
    with pytest.raises(PreconditionFailed) as e:
        normalize_weyl_images(s, swapped)
    assert "congruent" in e.value.condition
    # conjugating one candidate by a different element breaks the braid relations
    rng = random.Random(4)
    g = random_congruence_element(Z9, 3, rng)
    mixed = [g @ good[0] @ g.inverse(), good[1], good[2]]
    with pytest.raises(PreconditionFailed):
        normalize_weyl_images(s, mixed)
