import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from chevrigid.errors import ConstraintViolated, NonvanishingConstant, PositionOutOfRange
from chevrigid.group import h_elem
from chevrigid.linalg import Matrix, integer_det
from chevrigid.rings import parse_ring
from chevrigid.verify import rigidity
from chevrigid.verify.golden import W2, reference_algebra
from chevrigid.verify.rigidity import (SLOTS, AffineForm, build_con_system, recover_torus, torus_conditions,
                                       verify_torus_rigidity)

from oracles import DensePoly

Q = parse_ring("rat")
F7 = parse_ring("fp:7")
Z25 = parse_ring("zmod:5^2")


# -- AffineForm ------------------------------------------------------------------------

affine = st.tuples(st.integers(-5, 5), st.dictionaries(st.integers(1, 6), st.integers(-5, 5), max_size=4))


def _form(c, coeffs):
    return AffineForm(Q, c, {i: Q(v) for i, v in coeffs.items()})


def _same(form, poly):
    const, coeffs = poly.affine_part()
    return form.const == Q(const) and {i: Fraction(v.raw) for i, v in form.coeffs.items()} == coeffs


@given(affine, affine, affine)
def test_affine_form_matches_truncated_polynomials(a, b, c):
    fa, fb, fc = (_form(*x) for x in (a, b, c))
    pa, pb, pc = (DensePoly.affine(*x) for x in (a, b, c))
    assert _same(fa * fb, (pa * pb).truncate(1))
    assert _same(fa + fb * fc, (pa + (pb * pc).truncate(1)).truncate(1))
    assert _same((fa * fb) * fc, (pa * pb * pc).truncate(1))
    assert _same(fa - fb, pa + DensePoly.affine(-b[0], {k: -v for k, v in b[1].items()}))


def test_affine_form_drops_square_terms():
    y = AffineForm.var(Q, 1)
    assert (y * y).is_zero()
    z = AffineForm.var(Q, 2, const=3)
    assert (y * z) == AffineForm(Q, 0, {1: Q(3)})


# -- 27-equation system --------------------------------------------------------------

@pytest.fixture(scope="module")
def system27():
    return build_con_system()


def test_con_system_shape_and_constants(system27):
    assert system27.matrix.shape == (27, 27)
    assert system27.constants == [0] * 27
    assert system27.rank == 27
    assert len(set(SLOTS)) == 27


def test_con_system_determinant_derived(system27):
    # derived value; the sign flip in one coefficient accounts for the factor -2
    assert system27.det == -128
    assert integer_det(system27.with_flipped((4, 7, 3), 25)) == 256


@pytest.mark.parametrize("desc", ["fp:3", "fp:5", "fp:7", "zmod:3^2", "zmod:5^2", "zmod:7^3", "tpoly:3:2",
                                  "tpoly:5:3", "zloc:3", "zloc:7"])
def test_con_system_unique_zero_solution(system27, desc):
    rep = system27.unique_zero_solution(parse_ring(desc))
    assert rep == {"ring": desc, "det_unit": True, "full_rank": True, "solution_zero": True}


def test_con_system_errors(monkeypatch):
    with pytest.raises(PositionOutOfRange):
        build_con_system(slots=SLOTS[:-1] + ((4, 9, 1),))
    with pytest.raises(PositionOutOfRange):
        build_con_system(slots=SLOTS[:-1] + ((5, 1, 1),))
    monkeypatch.setattr(rigidity, "W1", W2)
    with pytest.raises(NonvanishingConstant):
        build_con_system()


def test_con_conditions_vanish_at_base_point(system27):
    for k, mat in system27.conditions.items():
        assert all(v.const.is_zero() for row in mat for v in row)


# -- torus rigidity -------------------------------------------------------------------

def test_torus_examples():
    r = verify_torus_rigidity(F7(1))
    assert r.ok and r.necessity and r.recovered == "1"
    r = verify_torus_rigidity(F7(3))
    assert r.ok and r.recovered == "3"
    assert [s["pass"] for s in r.steps] == [True] * len(r.steps)


@pytest.mark.parametrize("desc", ["fp:7", "zmod:5^2", "zmod:3^2", "tpoly:3:2", "rat", "zloc:5"])
def test_torus_recovery_random_units(desc):
    ring = parse_ring(desc)
    rng = random.Random(7)
    for _ in range(5):
        s = ring.random_unit(rng)
        r = verify_torus_rigidity(s)
        assert r.ok and ring(r.recovered) == s


def _h1(s):
    return h_elem(reference_algebra().system.simple(1), s, reference_algebra()).matrix


def test_injected_l2_fails_at_con7_step():
    d = _h1(F7(3)).data.copy()
    d[2, 3] = 1
    with pytest.raises(ConstraintViolated) as e:
        recover_torus(Matrix(F7, d))
    assert e.value.step.startswith("Con7 (1,2),(4,3)")


def test_non_block_candidate_rejected():
    d = _h1(F7(2)).data.copy()
    d[0, 2] = 1
    with pytest.raises(ConstraintViolated) as e:
        recover_torus(Matrix(F7, d))
    assert e.value.step == "block shape"


def test_cartan_block_step_is_not_forced_over_z25():
    # a Cartan block n != I that still satisfies Con5-Con7 over Z/25
    q = 25
    inv = lambda a: pow(a % q, -1, q)
    n1 = 6
    n3 = ((n1 * n1 - 1) * inv(2 * n1 - 1)) % q
    n4, n2 = (n1 - n3) % q, (n1 - 1) % q
    k1 = ((n1 - 2 * n3 + 1) * inv(3 * n1 - 1)) % q
    diag = [k1, inv(k1), 1, k1, 1, inv(k1)]
    d = np.zeros((8, 8), dtype=np.int64)
    for i, v in enumerate(diag):
        d[i, i] = v
    d[6:, 6:] = [[n1, n2], [n3, n4]]
    dm = Matrix.from_ints(Z25, d)
    assert all(c.is_zero() for c in torus_conditions(dm).values())
    steps = []
    with pytest.raises(ConstraintViolated) as e:
        recover_torus(dm, steps)
    assert e.value.step.startswith("Cartan block")
    assert steps[-1]["forced"] is False
