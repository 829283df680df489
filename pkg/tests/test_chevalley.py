import random

import numpy as np
import pytest

from chevrigid.chevalley import ad_matrix, algebra, bracket, grading_violations, killing_form, nilpotency_profile
from chevrigid.errors import MixedSystems
from chevrigid.roots import build

from oracles import A2_AD1_SQUARED_ENTRY, COXETER

ALL = [("A", l) for l in range(2, 8)] + [("D", l) for l in range(4, 8)] + [("E", 6), ("E", 7), ("E", 8)]


def test_bracket_examples():
    s = build("A", 2)
    alg = algebra(s)
    a1 = s.simple(1)
    x1, xm1, h1 = alg.basis_x(a1), alg.basis_x(-a1), alg.basis_h(1)
    assert bracket(h1, x1) == {x1: 2}
    assert bracket(x1, xm1) == {h1: 1}
    out = bracket(x1, alg.basis_x(s.simple(2)))
    assert list(out) == [alg.basis_x(s.root((1, 1)))] and list(out.values())[0] in (1, -1)
    assert bracket(h1, alg.basis_h(2)) == {}


def test_basis_layout():
    s = build("A", 2)
    labels = [str(b) for b in algebra(s).basis()]
    assert labels == ["x(1,0)", "x(-1,0)", "x(0,1)", "x(0,-1)", "x(1,1)", "x(-1,-1)", "h1", "h2"]


def test_mixed_bracket():
    a, d = algebra(build("A", 2)), algebra(build("D", 4))
    with pytest.raises(MixedSystems):
        bracket(a.basis_h(1), d.basis_h(1))


@pytest.mark.parametrize("fam,rank", [("A", 2), ("A", 3), ("A", 4), ("D", 4)])
def test_jacobi_exhaustive(fam, rank):
    alg = algebra(build(fam, rank))
    assert alg.jacobi_violations() == []


@pytest.mark.parametrize("fam,rank", [("E", 6), ("E", 7), ("E", 8)])
def test_jacobi_sampled(fam, rank):
    alg = algebra(build(fam, rank))
    rng = random.Random(rank)
    pairs = [(rng.randrange(alg.n), rng.randrange(alg.n)) for _ in range(40)]
    assert alg.jacobi_violations(pairs) == []


@pytest.mark.parametrize("fam,rank", ALL)
def test_structure_constant_symmetries(fam, rank):
    alg = algebra(build(fam, rank))
    assert alg.symmetry_violations() == []
    nz = alg.N[alg.N != 0]
    assert set(np.unique(nz).tolist()) <= {-1, 1}
    for k, (i, j) in alg.extraspecial_pairs().items():
        assert alg.N[i, j] == 1


@pytest.mark.parametrize("fam,rank", ALL)
def test_nilpotency_and_grading(fam, rank):
    s = build(fam, rank)
    alg = algebra(s)
    for r in s.roots:
        assert nilpotency_profile(r, alg) == (True, True)
    for ridx in range(0, len(s.roots), max(1, len(s.roots) // 12)):
        assert grading_violations(alg, ridx) == 0


@pytest.mark.parametrize("fam,rank", [("A", 2), ("A", 3), ("D", 4), ("E", 6)])
def test_ad_square_on_negative(fam, rank):
    s = build(fam, rank)
    alg = algebra(s)
    for r in s.roots:
        a = alg.ad_matrix(r)
        v = np.zeros(alg.n, dtype=np.int64)
        v[alg.root_position(s.root_index(-r))] = 1
        want = np.zeros(alg.n, dtype=np.int64)
        want[alg.root_position(s.root_index(r))] = -2
        assert np.array_equal(a @ a @ v, want)


def test_a2_ad_square_single_entry():
    s = build("A", 2)
    sq = ad_matrix(s.simple(1)) @ ad_matrix(s.simple(1))
    (i, j), val = A2_AD1_SQUARED_ENTRY
    assert sq[i, j] == val
    assert np.count_nonzero(sq) == 1


@pytest.mark.parametrize("fam,rank", [("A", 3), ("D", 5), ("E", 6)])
def test_negative_root_support_is_transpose(fam, rank):
    s = build(fam, rank)
    alg = algebra(s)
    k = 2 * s.m  # root-by-root block; the Cartan rows/columns carry coefficients vs pairings
    for r in s.positive:
        assert np.array_equal(alg.ad_matrix(-r)[:k, :k] != 0, (alg.ad_matrix(r)[:k, :k] != 0).T)


@pytest.mark.parametrize("fam,rank", [("A", 2), ("A", 4), ("D", 4), ("D", 5), ("E", 6)])
def test_killing_form_against_coxeter_number(fam, rank):
    s = build(fam, rank)
    alg = algebra(s)
    h = COXETER[(fam, rank)]
    gram = np.array([[killing_form(alg.basis_h(i), alg.basis_h(j)) for j in range(1, rank + 1)]
                     for i in range(1, rank + 1)])
    assert np.array_equal(gram, 2 * h * s.cartan)
    assert round(np.linalg.det(gram)) != 0
    for r in s.roots[:5]:
        assert killing_form(alg.basis_x(r), alg.basis_x(-r)) == 2 * h
        assert killing_form(alg.basis_h(1), alg.basis_x(r)) == 0
        other = s.roots[(s.root_index(r) + 1) % len(s.roots)]
        if other != -r:
            assert killing_form(alg.basis_x(r), alg.basis_x(other)) == 0


def test_with_signs_preserves_jacobi():
    alg = algebra(build("A", 3))
    flipped = alg.with_signs([1, -1, 1, -1, 1, -1])
    assert flipped.jacobi_violations() == []
    assert flipped.symmetry_violations() == []
