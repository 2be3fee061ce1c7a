"""Command-line front end: ``mubforge catalog | build | verify | dual | compare | export``.

Every command prints a JSON report on stdout.  Exit status is 0 when all
verification passed, 1 on a verification failure and 2 on a usage or
parameter error.  Output is byte-identical for identical arguments unless
``--timing`` is given.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import mub as M
from . import semifield as S
from . import spread as SP
from .ff import FieldError
from .gr4 import RingError
from .pauli import check_eigenvectors
from .report import Report, jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2)


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _load(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _int_list(text: str | None):
    if text is None:
        return None
    return [int(t) for t in text.split(",") if t.strip()]


def _params(args) -> dict:
    out = {}
    if args.k is not None:
        out["k"] = args.k
    if args.j is not None:
        vals = _int_list(args.j)
        out["j"] = vals if len(vals) > 1 else vals[0]
    if args.s is not None:
        out["s"] = args.s
    if args.reading is not None:
        out["reading"] = args.reading
    if args.modulus is not None:
        out["modulus"] = tuple(_int_list(args.modulus))
    return out


def _monomials(ctx, text: str | None):
    """'c:i:j;c:i:j' with c an integer element code.

    Without ``text`` the first nonzero quadratic pseudo-planar function found
    by the exhaustive sweep is used (f = 0 when there is none).
    """
    if not text:
        return _default_pseudoplanar(ctx)
    out = []
    for part in text.split(";"):
        c, i, j = (int(t) for t in part.split(":"))
        out.append((c, i, j))
    return out


def _default_pseudoplanar(ctx):
    exps = [e for e in range(1, ctx.q) if bin(e).count("1") == 2]
    quadratic, _ = S.search_pseudoplanar(ctx, exps)
    for cs in quadratic:
        if any(cs):
            out = []
            for c, e in zip(cs, exps):
                if c:
                    i, j = (b for b in range(e.bit_length()) if e >> b & 1)
                    out.append((int(c), i, j))
            return out
    return []


# ---------------------------------------------------------------------------
# construction dispatch
# ---------------------------------------------------------------------------

def build_mubset(family: str, q: int, params: dict, monomials: str | None = None) -> M.MubSet:
    family = family.lower()
    if family == "bblp":
        return M.build_bblp(q, params.get("k", 1))
    if family == "suzuki":
        return M.build_suzuki(q)
    if family == "coulter-matthews":
        return M.build_odd_planar(S.coulter_matthews(q, params.get("k", 3)))
    if family == "pseudo-planar":
        F = S.field_for_order(q, params.get("modulus"))
        f = S.planar_from_monomials(F, _monomials(F, monomials), "pseudo-planar")
        return M.build_pseudoplanar(f)
    s = S.catalog(family, q, **params)
    if s.ctx.p == 2:
        if s.commutative and not s.symplectic:
            return M.build_even_commutative(s)
        return M.build_even_symplectic(s)
    if s.symplectic:
        return M.build_odd_symplectic(s)
    if s.space.dim == 1:
        return M.build_odd_planar(S.planar_from_presemifield(s))
    partner = S.PARTNERS[family]
    return M.build_odd_symplectic(S.catalog(partner, q, **params))


def build_spread(family: str, q: int, params: dict) -> SP.Spread:
    family = family.lower()
    if family == "bblp":
        return SP.bblp_spread(q, params.get("k", 1))
    if family == "suzuki":
        return SP.suzuki_spread(q)
    return SP.spread_from_presemifield(S.catalog(family, q, **params))


def _mub_report(ms: M.MubSet, args) -> Report:
    mode = "auto"
    if args.full:
        mode = "full"
    elif args.samples is not None:
        mode = "sampled"
    if getattr(args, "float", False):
        mode = "float"
    samples = args.samples if args.samples is not None else M.DEFAULT_SAMPLES
    if ms.lazy and mode == "auto" and args.samples is None:
        samples = 10**4
    return M.verify_mub(ms, mode=mode, samples=samples, seed=args.seed, threads=args.threads)


def _spread_report(sp: SP.Spread, expect_symplectic: bool = True) -> Report:
    rep = Report(f"spread[{sp.provenance}]", mode="exhaustive")
    rep.absorb(SP.is_spread(sp))
    symp = SP.is_symplectic(sp)
    rep.details.update(members=len(sp), symplectic=symp.passed, provenance=sp.provenance)
    rep.details.update({k: v for k, v in sp.details.items()})
    if expect_symplectic:
        rep.absorb(symp)
    return rep


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_catalog(args) -> int:
    listing = S.catalog_listing()
    if args.format == "text":
        for e in listing:
            print(f"{e['name']:32s} {e['kind']:24s} q={e['native_q']}  {e['constraints']}")
    else:
        _write(args.out, _dump({"families": listing}))
    return EXIT_OK


def cmd_build(args) -> int:
    params = _params(args)
    t0 = time.perf_counter()
    if args.object == "mub":
        ms = build_mubset(args.family, args.q, params, args.monomials)
        rep = _mub_report(ms, args)
        if args.eigen:
            rep.absorb(check_eigenvectors(ms, samples=None if ms.n <= 81 else 10**4, seed=args.seed))
        payload = None if ms.lazy else ms.to_json()
    else:
        sp = build_spread(args.family, args.q, params)
        symplectic = args.family in ("bblp", "suzuki") or S.catalog(args.family, args.q, **params).symplectic
        rep = _spread_report(sp, expect_symplectic=symplectic)
        payload = sp.to_json()
    out = {"family": args.family, "q": args.q, "params": params, "report": rep.to_dict()}
    if args.timing:
        out["timing_seconds"] = round(time.perf_counter() - t0, 3)
    if args.out and payload is not None:
        _write(args.out, _dump(payload))
        out["written"] = args.out
    _write(None, _dump(out))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    d = _load(args.path)
    if "bases" in d:
        ms = M.mubset_from_json(d)
        rep = _mub_report(ms, args)
    elif "members" in d:
        rep = _spread_report(SP.spread_from_json(d))
    else:
        s = S.presemifield_from_json(d)
        rep = S.verify_presemifield(s, samples=args.samples or 10**6, seed=args.seed)
        if s.symplectic:
            rep.absorb(S.isotropy_check(s))
    _write(None, _dump({"path": args.path, "report": rep.to_dict()}))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_dual(args) -> int:
    if args.path:
        c = S.presemifield_from_json(_load(args.path))
    else:
        if not args.family:
            raise UsageError("dual needs a presemifield file or --family/--q")
        c = S.catalog(args.family, args.q, **_params(args))
    d = S.knuth_dual(c)
    rep = S.verify_presemifield(d)
    rep.absorb(S.isotropy_check(d))
    out = {"input": c.name, "dual": d.to_json(), "report": rep.to_dict()}
    partner = S.PARTNERS.get(c.name)
    if partner:
        ref = S.catalog(partner, c.ctx.q, **{k: v for k, v in c.params.items() if k != "modulus"})
        if ref.space == d.space:
            import numpy as np
            x, y = np.indices((c.n, c.n))
            out["matches_catalog_partner"] = {
                "partner": partner,
                "equal": bool(np.array_equal(ref.mul(x, y), d.mul(x, y))),
            }
    if args.out:
        _write(args.out, _dump(d.to_json()))
    _write(None, _dump(out))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_compare(args) -> int:
    if args.a and args.b:
        a = M.mubset_from_json(_load(args.a))
        b = M.mubset_from_json(_load(args.b))
        paths = [args.a, args.b]
    else:
        if not args.family:
            raise UsageError("compare needs two MUB files or --family/--q")
        a, b, paths = _two_paths(args.family, args.q, _params(args), args.monomials)
    verdict = M.compare_mub_sets(a, b)
    _write(None, _dump({"compared": paths, **verdict}))
    return EXIT_OK if verdict["identical"] else EXIT_FAIL


def _two_paths(family: str, q: int, params: dict, monomials):
    """The two constructions that should agree for a commutative family."""
    if family == "pseudo-planar":
        F = S.field_for_order(q, params.get("modulus"))
        f = S.planar_from_monomials(F, _monomials(F, monomials), "pseudo-planar")
        c, _ = S.comm_from_pseudoplanar(f)
        return M.build_pseudoplanar(f), M.build_even_commutative(c), ["pseudo-planar", "commutative"]
    c = S.catalog(family, q, **params)
    if not c.commutative or c.coeffs is None:
        raise UsageError(f"{family}: path comparison needs a commutative family on V = F")
    if c.ctx.p == 2:
        return (M.build_even_commutative(c), M.build_even_symplectic(S.knuth_dual_even(c)),
                ["commutative", "symplectic-dual"])
    return (M.build_odd_planar(S.planar_from_presemifield(c)), M.build_odd_symplectic(S.knuth_dual(c)),
            ["planar", "symplectic-dual"])


def cmd_export(args) -> int:
    ms = build_mubset(args.family, args.q, _params(args), args.monomials)
    if ms.lazy:
        raise UsageError("lazy sets (n > 4096) cannot be exported densely")
    text = M.export_csv(ms) if args.format == "csv" else _dump(ms.to_json())
    _write(args.out, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_family(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--family", required=required, help="catalog family name")
    p.add_argument("--q", type=int, required=required, help="field order")
    p.add_argument("--k", type=int, help="Frobenius exponent (rho = p^k, Coulter-Matthews k)")
    p.add_argument("--j", help="nonsquare parameter as an element code or comma-separated coefficients")
    p.add_argument("--s", type=int, help="sigma = p^s for Dickson/Knuth")
    p.add_argument("--reading", choices=S.PW_READINGS, help="Penttila-Williams formula reading")
    p.add_argument("--modulus", help="field modulus coefficients, constant term first")
    p.add_argument("--monomials", help="pseudo-planar f as 'c:i:j;...' (c an element code)")


def _add_mode(p: argparse.ArgumentParser):
    p.add_argument("--full", action="store_true", help="force full exact verification")
    p.add_argument("--samples", type=int, help="number of sampled pairs (sampled-exact mode)")
    p.add_argument("--float", action="store_true", help="floating-point fast path (non-authoritative)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: MUBFORGE_THREADS or all cores)")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mubforge",
                                 description="Build and exactly verify complete sets of MUBs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list families and constraints")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("build", help="build a MUB set or spread and verify it")
    p.add_argument("object", choices=("mub", "spread"))
    _add_family(p)
    _add_mode(p)
    p.add_argument("--eigen", action="store_true", help="also check Cartan eigenvectors")
    p.add_argument("--out", help="write the constructed object here")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="re-verify an exported MUB set, spread or presemifield")
    p.add_argument("path")
    _add_mode(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dual", help="symplectic partner of a commutative presemifield")
    p.add_argument("path", nargs="?")
    _add_family(p, required=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("compare", help="compare two MUB sets up to phases and ordering")
    p.add_argument("a", nargs="?")
    p.add_argument("b", nargs="?")
    _add_family(p, required=False)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export", help="export a MUB set as exponent JSON or dense CSV")
    _add_family(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, S.SemifieldError, SP.SpreadError, M.MubError, FieldError, RingError,
            KeyError, ValueError) as exc:
        print(f"mubforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
