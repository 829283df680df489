"""Reference 8x8 matrices for A_2 and the sign search that matches them.

The reference basis is v1, v-1, v2, v-2, v12, v-12, V1, V2, which is the
package's own ordering for A_2.  Our Chevalley basis is normalised by
extraspecial pairs; the reference basis differs from it by rescaling some
pairs x_{+-beta} by -1.  :func:`find_sign_normalization` searches all such
rescalings.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from ..chevalley import ChevalleyAlgebra, algebra
from ..errors import NoMatch
from ..group import w_elem, x_elem
from ..rings import parse_ring
from ..roots import build

W1 = np.array([
    [0, -1, 0, 0, 0, 0, 0, 0],
    [-1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, -1, 0, 0, 0, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, -1, 1],
    [0, 0, 0, 0, 0, 0, 0, 1],
], dtype=np.int64)

W2 = np.array([
    [0, 0, 0, 0, -1, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 0, 0],
    [0, 0, 0, -1, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1, -1],
], dtype=np.int64)

X1 = np.array([
    [1, -1, 0, 0, 0, 0, -2, 1],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 1, 0, 0],
    [0, 0, -1, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
], dtype=np.int64)

# h_{alpha_2}(-1) in the same basis
H2 = np.diag([-1, -1, 1, 1, -1, -1, 1, 1]).astype(np.int64)

# Cartan blocks of w_{alpha_i}(1) for D_4
D4_CARTAN_W1 = np.array([[-1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], dtype=np.int64)


def _matrices(alg: ChevalleyAlgebra) -> dict[str, np.ndarray]:
    z = parse_ring("int")
    s = alg.system
    a1, a2 = s.simple(1), s.simple(2)
    return {
        "x_alpha1(1)": x_elem(a1, z(1), alg).matrix.to_ints().astype(np.int64),
        "w_alpha1(1)": w_elem(a1, z(1), alg).matrix.to_ints().astype(np.int64),
        "w_alpha2(1)": w_elem(a2, z(1), alg).matrix.to_ints().astype(np.int64),
    }


REFERENCE = {"x_alpha1(1)": X1, "w_alpha1(1)": W1, "w_alpha2(1)": W2}


def find_sign_normalization() -> dict:
    """Search eps in {+-1}^m so that the rescaled A_2 basis reproduces the reference matrices.

    Returns ``{"eps": [...], "all_matches": [...], "N_alpha1_alpha2": ...}``
    where ``eps`` is the first match in lexicographic order (+1 before -1).
    """
    base = algebra(build("A", 2))
    matches = []
    for eps in itertools.product((1, -1), repeat=base.system.m):
        alg = base.with_signs(eps)
        got = _matrices(alg)
        if all(np.array_equal(got[k], REFERENCE[k]) for k in REFERENCE):
            matches.append(list(eps))
    if not matches:
        raise NoMatch("no sign normalisation reproduces the reference A_2 matrices")
    eps = matches[0]
    alg = base.with_signs(eps)
    s = alg.system
    return {
        "eps": eps,
        "roots": [list(r.coords) for r in s.positive],
        "all_matches": matches,
        "N_alpha1_alpha2": alg.structure_constant(s.simple(1), s.simple(2)),
    }


@functools.lru_cache(maxsize=None)
def reference_algebra() -> ChevalleyAlgebra:
    """A_2 algebra rescaled to the reference basis."""
    return algebra(build("A", 2)).with_signs(find_sign_normalization()["eps"])


def golden_mismatches(alg: ChevalleyAlgebra | None = None) -> dict[str, list[tuple[int, int]]]:
    """Entries (1-based) where the algebra's matrices differ from the reference."""
    got = _matrices(alg or reference_algebra())
    return {k: [(int(i) + 1, int(j) + 1) for i, j in np.argwhere(got[k] != REFERENCE[k])] for k in REFERENCE}
