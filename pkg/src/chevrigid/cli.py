"""Command-line front end: ``chevrigid <subcommand> ...``.

Exit codes: 0 success, 1 a verification failed, 2 usage error.  Output
is JSON (``schema: 1``) on stdout, or in the file given by ``--out``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .chevalley import algebra
from .errors import ChevError, ClosureStalled, DescriptorError, NotARoot, UnsupportedType
from .group import check_relations
from .rings import parse_ring
from .roots import build
from .verify.generation import closure
from .verify.suite import RunConfig, run_suite

SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _u64(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed {text!r} is not an integer") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed {v} is not an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"{v} must be positive")
    return v


def _coords(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(c) for c in text.replace(" ", "").strip("()[]").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"root {text!r} is not a comma-separated integer list") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chevrigid", description="Exact computations in adjoint elementary Chevalley groups.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, ring=True):
        sp.add_argument("--type", dest="family", required=True, help="root system family: A, D or E")
        sp.add_argument("--rank", required=True, type=_positive, help="rank l")
        if ring:
            sp.add_argument("--ring", required=True,
                            help="int, rat, fp:<p>, zmod:<p>^<k>, tpoly:<p>:<k> or zloc:<p>")
        sp.add_argument("--out", help="write JSON here instead of stdout")

    common(sub.add_parser("roots", help="ordered positive roots"), ring=False)
    sp = sub.add_parser("adjoint-matrix", help="integer matrix of ad x_alpha")
    common(sp, ring=False)
    sp.add_argument("--root", required=True, type=_coords, help="root coordinates, e.g. 1,1")
    sp = sub.add_parser("relations-check", help="Steinberg relations on seeded samples")
    common(sp)
    sp.add_argument("--samples", type=_positive, default=20)
    sp.add_argument("--seed", type=_u64, default=0)
    sp = sub.add_parser("verify-paper", help="full verification suite")
    common(sp)
    sp.add_argument("--samples", type=_positive, default=20)
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--heavy", action="store_true", help="include E-series closure and large Jacobi checks")
    sp = sub.add_parser("generate-matrix-units", help="span closure of the group in M_n")
    common(sp)
    return p


def dumps(obj) -> str:
    def default(x):
        if isinstance(x, np.integer):
            return int(x)
        if isinstance(x, np.bool_):
            return bool(x)
        raise TypeError(f"cannot serialise {type(x).__name__}")

    return json.dumps(obj, indent=2, default=default) + "\n"


def _emit(obj, out: str | None):
    text = dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _roots(args) -> tuple[dict, int]:
    s = build(args.family, args.rank)
    return {"schema": SCHEMA, "family": s.family, "rank": s.rank, "m": s.m,
            "roots": [list(r.coords) for r in s.positive]}, 0


def _adjoint(args) -> tuple[dict, int]:
    s = build(args.family, args.rank)
    r = s.root(args.root)
    mat = algebra(s).ad_matrix(r)
    return {"schema": SCHEMA, "root": list(r.coords), "n": int(mat.shape[0]),
            "rows": [[str(int(v)) for v in row] for row in mat]}, 0


def _relations(args) -> tuple[dict, int]:
    s = build(args.family, args.rank)
    ring = parse_ring(args.ring)
    rep = check_relations(s, ring, args.samples, args.seed)
    return {"schema": SCHEMA, "command": "relations-check", **rep}, 0 if rep["violations"] == 0 else 1


def _verify(args) -> tuple[dict, int]:
    build(args.family, args.rank)
    parse_ring(args.ring)
    cfg = RunConfig(build(args.family, args.rank).family, args.rank, args.ring, args.samples, args.seed, args.heavy)
    rep = run_suite(cfg)
    return rep, 0 if rep["summary"]["ok"] else 1


def _units(args) -> tuple[dict, int]:
    s = build(args.family, args.rank)
    ring = parse_ring(args.ring)
    if not ring.local:
        raise UsageError(f"--ring {ring.descriptor}: matrix-unit generation needs a field or local ring")
    res = closure(s, ring)
    out = {"schema": SCHEMA, **res.summary()}
    ok = res.complete and res.lift_checked is not False
    if not ok:
        out["error"] = str(ClosureStalled(res.closure_dim, res.target))
    return out, 0 if ok else 1


COMMANDS = {
    "roots": _roots,
    "adjoint-matrix": _adjoint,
    "relations-check": _relations,
    "verify-paper": _verify,
    "generate-matrix-units": _units,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        obj, code = COMMANDS[args.command](args)
    except UsageError as e:
        print(f"chevrigid: error: {e}", file=sys.stderr)
        return 2
    except (UnsupportedType, DescriptorError, NotARoot) as e:
        print(f"chevrigid: error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except ChevError as e:
        print(f"chevrigid: error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    _emit(obj, getattr(args, "out", None))
    return code


if __name__ == "__main__":
    sys.exit(main())
