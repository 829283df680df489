"""The full verification run behind ``verify-paper``.

Each check returns ``{id, paper_ref, status, details}``.  Status is one of
``pass``, ``fail`` or ``skipped`` (the check does not apply to the
requested ring or system, or it needs ``heavy``).  Every random draw comes
from a per-check RNG derived from the seed and the check id.  No timings
go into the report, so equal configurations give identical JSON.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Callable

from ..chevalley import algebra, nilpotency_profile
from ..errors import ChevError, ClosureStalled
from ..group import check_relations, h_elem, h_minus_one_pattern
from ..linalg import Matrix, integer_det
from ..rings import Ring, parse_ring
from ..roots import RootSystem, build
from .generation import closure, scripted_a2
from .golden import find_sign_normalization, golden_mismatches
from .involution import random_congruence_element, rank_report, split_involution
from .rigidity import build_con_system, verify_torus_rigidity
from .weyl_normal import normalize_weyl_images, standard_blocks


@dataclass(frozen=True)
class RunConfig:
    family: str
    rank: int
    ring: str
    samples: int = 20
    seed: int = 0
    heavy: bool = False

    def as_dict(self) -> dict:
        return {"family": self.family, "rank": self.rank, "ring": self.ring, "samples": self.samples,
                "seed": self.seed, "heavy": self.heavy}


def check_rng(seed: int, check_id: str) -> random.Random:
    h = hashlib.sha256(f"{seed}:{check_id}".encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _entry(cid: str, ref: str, status: str, details: dict) -> dict:
    return {"id": cid, "paper_ref": ref, "status": status, "details": details}


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- individual checks -------------------------------------------------------------

def check_root_system(system: RootSystem, cfg: RunConfig) -> dict:
    bad = system.check_invariants()
    return _entry("roots.invariants", "root system and positive roots", _status(not bad),
                  {"m": system.m, "n": system.n, "violations": bad})


def check_nilpotency(system: RootSystem, cfg: RunConfig) -> dict:
    alg = algebra(system)
    bad = []
    for r in system.roots:
        sq_nonzero, cube_zero = nilpotency_profile(r, alg)
        if not (sq_nonzero and cube_zero):
            bad.append({"root": list(r.coords), "square_nonzero": sq_nonzero, "cube_zero": cube_zero})
    return _entry("chevalley.nilpotency", "adjoint nilpotency: (ad x)^3 = 0, (ad x)^2 != 0",
                  _status(not bad), {"roots": len(system.roots), "violations": bad})


def check_jacobi(system: RootSystem, cfg: RunConfig) -> dict:
    ref = "Chevalley basis structure constants"
    if system.n > 100 and not cfg.heavy:
        return _entry("chevalley.jacobi", ref, "skipped", {"reason": "n > 100 needs --heavy"})
    alg = algebra(system)
    jac = alg.jacobi_violations()
    sym = alg.symmetry_violations()
    return _entry("chevalley.jacobi", ref, _status(not jac and not sym),
                  {"jacobi_violations": len(jac), "symmetry_violations": len(sym)})


def check_relations_entry(system: RootSystem, ring: Ring, cfg: RunConfig) -> dict:
    rep = check_relations(system, ring, cfg.samples, cfg.seed)
    failing = [c for c in rep["cases"] if not c["pass"]][:20]
    return _entry("group.relations", "Steinberg relations R1, R2, R4, R5, R6", _status(rep["violations"] == 0),
                  {"summary": rep["summary"], "violations": rep["violations"], "first_failures": failing})


def check_h_minus_one(system: RootSystem, cfg: RunConfig) -> dict:
    pats = {str(i): h_minus_one_pattern(system, i) for i in range(1, system.rank + 1)}
    ok = all(p["parity_rule_holds"] for p in pats.values())
    return _entry("group.h_minus_one", "torus element h_a(-1) is diagonal with signs (-1)^<b,a>", _status(ok),
                  {"nodes": {k: {"parity_rule_holds": v["parity_rule_holds"],
                                 "pairing_minus_one_rule_disagreements": v["disagreements"]}
                             for k, v in pats.items()}})


def check_golden(cfg: RunConfig) -> dict:
    try:
        found = find_sign_normalization()
    except ChevError as e:
        return _entry("golden.a2", "reference A_2 matrices x_a1(1), w_a1(1), w_a2(1)", "fail", {"error": str(e)})
    mism = golden_mismatches()
    ok = not any(mism.values())
    return _entry("golden.a2", "reference A_2 matrices x_a1(1), w_a1(1), w_a2(1)", _status(ok),
                  {"eps": found["eps"], "positive_roots": found["roots"], "all_matches": found["all_matches"],
                   "N_alpha1_alpha2": found["N_alpha1_alpha2"], "mismatches": mism})


def check_involutions(system: RootSystem, ring: Ring, cfg: RunConfig) -> dict:
    cid, ref = "involution.split", "involution splitting V = V0 + V1 and residue ranks"
    if not ring.local:
        return _entry(cid, ref, "skipped", {"reason": f"{ring.descriptor} is not local"})
    rng = check_rng(cfg.seed, cid)
    alg = algebra(system)
    fails = []
    ranks = set()
    for k in range(cfg.samples):
        i = 1 + k % system.rank
        h = h_elem(system.simple(i), ring(-1), alg).matrix
        g = random_congruence_element(ring, alg.n, rng)
        a = g @ h @ g.inverse()
        try:
            dec = split_involution(a)
            rep = rank_report(a)
            ok = rep["match"] and dec.reassemble() == a
            ranks.add((dec.r0, dec.r1))
        except ChevError as e:
            ok, rep = False, {"error": f"{type(e).__name__}: {e}"}
        if not ok:
            fails.append({"sample": k, "node": i, **{k2: v for k2, v in rep.items() if k2 != "match"}})
    return _entry(cid, ref, _status(not fails),
                  {"samples": cfg.samples, "ranks": sorted(map(list, ranks)), "failures": fails})


def check_weyl(system: RootSystem, ring: Ring, cfg: RunConfig) -> dict:
    cid, ref = "weyl.normalize", "normalising Weyl images on the Cartan block"
    if not ring.local:
        return _entry(cid, ref, "skipped", {"reason": f"{ring.descriptor} is not local"})
    rng = check_rng(cfg.seed, cid)
    std = standard_blocks(system, ring)
    fails = []
    for k in range(cfg.samples):
        g0 = random_congruence_element(ring, system.rank, rng)
        g0i = g0.inverse()
        cands = [g0 @ w @ g0i for w in std]
        try:
            g = normalize_weyl_images(system, cands)
            gi = g.inverse()
            ok = all(gi @ c @ g == w for c, w in zip(cands, std)) and (g - Matrix.identity(ring, system.rank)).in_radical()
            if not ok:
                fails.append({"sample": k, "error": "round trip mismatch"})
        except ChevError as e:
            fails.append({"sample": k, "error": f"{type(e).__name__}: {e}"})
    return _entry(cid, ref, _status(not fails), {"samples": cfg.samples, "failures": fails})


def check_con_system(ring: Ring, cfg: RunConfig) -> list[dict]:
    ref = "27 linear equations from the four commutation conditions on x_a1(1)"
    L = build_con_system()
    det = L.det
    variant = integer_det(L.with_flipped((4, 7, 3), 25))
    constants_zero = all(c == 0 for c in L.constants)
    out = [_entry("rigidity.con_system.determinant", ref + ": determinant 2^8", _status(abs(det) == 256),
                  {"determinant": det, "rank": L.rank, "constants_zero": constants_zero,
                   "det_with_y25_sign_flipped_at_con4_7_3": variant,
                   "rows": [list(map(int, r)) for r in L.matrix],
                   "row_labels": [f"Con{c} ({i},{j})" for c, i, j in L.labels]})]
    cid = "rigidity.con_system.unique"
    if not ring.local or ring.p == 2:
        out.append(_entry(cid, ref + ": unique solution y = 0", "skipped",
                          {"reason": f"{ring.descriptor} is not a local ring with 1/2"}))
    else:
        rep = L.unique_zero_solution(ring)
        out.append(_entry(cid, ref + ": unique solution y = 0",
                          _status(constants_zero and rep["full_rank"] and rep["solution_zero"]), rep))
    return out


def _units_for(ring: Ring, rng: random.Random, limit: int = 64, count: int = 20):
    try:
        units = ring.units()
    except NotImplementedError:
        units = None
    if units is not None and len(units) <= limit:
        return units, "all units"
    return [ring.random_unit(rng) for _ in range(count)], f"{count} seeded units"


def check_torus(ring: Ring, cfg: RunConfig) -> dict:
    cid, ref = "rigidity.torus", "torus rigidity: d = h_a1(s) from Con5, Con6, Con7"
    rng = check_rng(cfg.seed, cid)
    units, how = _units_for(ring, rng)
    fails = []
    for s in units:
        rep = verify_torus_rigidity(s)
        if not rep.ok:
            fails.append(rep.as_dict())
    last = verify_torus_rigidity(units[-1]).as_dict() if units else {}
    return _entry(cid, ref, _status(not fails),
                  {"units": how, "tested": [str(u) for u in units], "failures": fails,
                   "example_steps": last.get("steps", [])})


def check_closure(system: RootSystem, ring: Ring, cfg: RunConfig) -> list[dict]:
    ref = "the elementary group generates the matrix ring"
    ref_sub = "subring equality from spanning all matrix units"
    if not ring.local:
        reason = {"reason": f"{ring.descriptor} is not local"}
        return [_entry("generation.closure", ref, "skipped", reason),
                _entry("generation.subring", ref_sub, "skipped", reason)]
    if system.family == "E" and not cfg.heavy:
        reason = {"reason": "E-series closure needs --heavy"}
        return [_entry("generation.closure", ref, "skipped", reason),
                _entry("generation.subring", ref_sub, "skipped", reason)]
    res = closure(system, ring)
    det = {**res.summary(), "target": res.target, "lift_checked": res.lift_checked, "notes": res.notes,
           "sample_witness_words": [[str(t) for t in res.word(k)] for k in range(min(4, res.closure_dim))]}
    ok = res.complete and res.lift_checked is not False
    if not ok:
        det["error"] = str(ClosureStalled(res.closure_dim, res.target))
    return [_entry("generation.closure", ref, _status(ok), det),
            _entry("generation.subring", ref_sub, _status(ok), {"equal": ok})]


def check_scripted(ring: Ring, cfg: RunConfig) -> dict:
    cid, ref = "generation.a2_script", "explicit A_2 derivation of all 64 matrix units"
    if not ring.local:
        return _entry(cid, ref, "skipped", {"reason": f"{ring.descriptor} is not local"})
    rep = scripted_a2(ring.residue_field)
    return _entry(cid, ref, _status(rep["pass"]), rep)


def run_suite(cfg: RunConfig, progress: Callable[[str], None] | None = None) -> dict:
    system = build(cfg.family, cfg.rank)
    ring = parse_ring(cfg.ring)
    checks: list[dict] = []

    def add(item):
        items = item if isinstance(item, list) else [item]
        for it in items:
            checks.append(it)
            if progress:
                progress(f"{it['id']}: {it['status']}")

    add(check_root_system(system, cfg))
    add(check_nilpotency(system, cfg))
    add(check_jacobi(system, cfg))
    add(check_h_minus_one(system, cfg))
    add(check_relations_entry(system, ring, cfg))
    add(check_golden(cfg))
    add(check_involutions(system, ring, cfg))
    add(check_weyl(system, ring, cfg))
    add(check_con_system(ring, cfg))
    add(check_torus(ring, cfg))
    add(check_closure(system, ring, cfg))
    add(check_scripted(ring, cfg))
    counts = {s: sum(1 for c in checks if c["status"] == s) for s in ("pass", "fail", "skipped")}
    return {"schema": 1, "command": "verify-paper", "config": cfg.as_dict(), "checks": checks,
            "summary": {**counts, "ok": counts["fail"] == 0}}

