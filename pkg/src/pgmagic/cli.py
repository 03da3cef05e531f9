"""Command-line interface.

Every command prints a JSON document ``{command, params, results,
timing_ms, version}`` unless another ``--format`` is requested.  Exit codes:
0 success, 1 verification mismatch, 2 usage error, 3 size bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from . import __version__
from .bounds import BoundExceededError
from .exactla import dumps_csv, dumps_text, rank
from .gf import is_prime
from .magic import (
    build_incidence,
    check_no_p_torsion,
    kernel_membership,
    mag_dim,
    search_injective,
    verify_theorem_main,
)
from .monomial import Monomial, enumerate_basis, s_tuple
from .projgeom import geometry


class UsageError(Exception):
    pass


def int_list(text: str) -> list[int]:
    """Parse ``3``, ``1,2,5`` or ``1-4`` (ranges inclusive)."""
    out: list[int] = []
    try:
        for part in text.split(","):
            lo, _, hi = part.strip().partition("-")
            out.extend(range(int(lo), int(hi or lo) + 1))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer list: {text!r}") from None
    return out


def _one(values: list[int] | None, name: str, default: int | None = None) -> int:
    if values is None:
        if default is None:
            raise UsageError(f"--{name} is required")
        return default
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value for this command")
    return values[0]


def _geom(args):
    return geometry(_one(args.n, "n"), _one(args.p, "p"), _one(args.t, "t", 1))


def _point_label(pt) -> str:
    return "[" + ":".join(map(str, pt)) + "]"


def _flat_label(W) -> str:
    return "/".join(",".join(map(str, row)) for row in W.basis)


# -- commands ------------------------------------------------------------------

def cmd_enumerate(args):
    geom = _geom(args)
    what = args.what
    if what == "points":
        items = [{"index": i, "coords": list(pt)} for i, pt in enumerate(geom.points)]
        lines = [f"{i},{_point_label(pt)}" for i, pt in enumerate(geom.points)]
    elif what == "flats":
        r = _one(args.r, "r")
        items = [{"index": i, "basis": [list(row) for row in W.basis]} for i, W in enumerate(geom.flats(r))]
        lines = [f"{i},{_flat_label(W)}" for i, W in enumerate(geom.flats(r))]
    else:
        monos = enumerate_basis(geom)
        items = [
            {"index": i, "b": list(m.b), "s": None if m.is_constant else list(s_tuple(m))}
            for i, m in enumerate(monos)
        ]
        lines = [f"{i},{m}" for i, m in enumerate(monos)]
    quiet = f"count={len(items)}"
    return {"what": what, "count": len(items), "items": items}, "\n".join(lines), 0, quiet


def cmd_incidence(args):
    geom = _geom(args)
    A = build_incidence(geom, _one(args.r, "r"))
    rows = [_flat_label(W) for W in A.flats]
    cols = [_point_label(pt) for pt in geom.points]
    results = {
        "rows": A.shape[0],
        "cols": A.shape[1],
        "q": geom.q,
        "row_legend": rows,
        "col_legend": cols,
        "entries": A.zero_one.tolist(),
    }
    if args.format == "csv":
        text = dumps_csv(A.inner, rows, cols)
    else:
        text = dumps_text(A.inner)
    return results, text, 0, f"rows={A.shape[0]} cols={A.shape[1]}"


def cmd_rank(args):
    geom = _geom(args)
    A = build_incidence(geom, _one(args.r, "r"))
    rk = rank(A.inner)
    res = {"rows": A.shape[0], "cols": A.shape[1], "rank": rk, "nullity": A.shape[1] - rk}
    return res, f"rank {rk}\nnullity {A.shape[1] - rk}", 0, f"rank={rk} nullity={A.shape[1] - rk}"


def cmd_classify(args):
    geom = _geom(args)
    if args.b is None:
        raise UsageError("--b is required")
    m = Monomial.parse(args.b, geom)
    if m.is_constant:
        raise UsageError("the constant monomial has no s-tuple")
    s = s_tuple(m)
    rs = args.r if args.r is not None else list(range(1, geom.n))
    predicted, member = {}, {}
    for r in rs:
        if not 0 < r < geom.n:
            raise UsageError(f"r={r} outside 0 < r < n")
        predicted[str(r)] = min(s) <= r
        member[str(r)] = kernel_membership(build_incidence(geom, r), [m])[0]
    agree = predicted == member
    res = {
        "b": list(m.b),
        "s_tuple": list(s),
        "min_s": min(s),
        "pseudomagic": predicted if len(rs) > 1 else predicted[str(rs[0])],
        "kernel_member": member if len(rs) > 1 else member[str(rs[0])],
        "agree": agree,
    }
    text = f"{m} s={tuple(s)} " + " ".join(f"r={r}:{predicted[str(r)]}" for r in rs)
    return res, text, 0 if agree else 1, f"s={','.join(map(str, s))} pseudomagic={res['pseudomagic']}"


def _default_moduli(p: int) -> list[int]:
    coprime = next(k for k in range(2, 100) if is_prime(k) and k != p)
    return [coprime, p]


def _verify_instance(p: int, t: int, n: int, r: int, moduli: Sequence[int] | None) -> dict:
    geom = geometry(n, p, t)
    rep = verify_theorem_main(geom, r)
    out = rep.to_dict()
    out["p"], out["t"] = p, t
    out["dim"] = rep.dim_linear
    out["mag_dim"] = mag_dim(geom, r)
    out["torsion"] = [check_no_p_torsion(geom, r, m).to_dict() for m in (moduli or _default_moduli(p))]
    out["ok"] = rep.ok and out["mag_dim"] == rep.dim_linear + 1 and all(x["ok"] for x in out["torsion"])
    return out


def cmd_verify(args):
    ps = args.p or []
    if not ps:
        raise UsageError("--p is required")
    ts, ns = args.t or [1], args.n or [2]
    jobs = []
    for p in ps:
        if not is_prime(p):
            raise UsageError(f"p={p} is not prime")
        for t in ts:
            for n in ns:
                rs = args.r if args.r is not None else range(1, n)
                jobs += [(p, t, n, r) for r in rs if 0 < r < n]
    if not jobs:
        raise UsageError("no admissible (p, t, n, r) combination")
    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        instances = list(pool.map(lambda j: _verify_instance(*j, args.m), jobs))
    mismatches = sum(len(x["mismatches"]) for x in instances)
    ok = all(x["ok"] for x in instances)
    res = {"instances": instances, "mismatches": mismatches, "all_ok": ok}
    if len(instances) == 1:
        res["dim"] = instances[0]["dim"]
    lines = [
        f"P^{x['n']}({x['q']}) r={x['r']}: dim={x['dim']} mismatches={len(x['mismatches'])} ok={x['ok']}"
        for x in instances
    ]
    quiet = f"mismatches={mismatches}" + (f" dim={res['dim']}" if "dim" in res else "")
    return res, "\n".join(lines), 0 if ok else 1, quiet


def cmd_search(args):
    geom = _geom(args)
    rep = search_injective(
        geom, _one(args.r, "r"), _one(args.d, "d"), budget=args.budget, seed=args.seed
    )
    res = rep.to_dict()
    return res, f"{rep.status} ({rep.mode}, tested {rep.tested})", 0, rep.status


COMMANDS = {
    "enumerate": cmd_enumerate,
    "incidence": cmd_incidence,
    "rank": cmd_rank,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "search": cmd_search,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgmagic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--p", type=int_list, help="characteristic (prime)")
        sp.add_argument("--t", type=int_list, help="field degree, q = p^t (default 1)")
        sp.add_argument("--n", type=int_list, help="projective dimension")
        sp.add_argument("--r", type=int_list, help="flat dimension")
        sp.add_argument("--b", help="exponent vector, e.g. 2,2,0")
        sp.add_argument("--m", type=int_list, help="moduli for the Z/m checks")
        sp.add_argument("--d", type=int_list, help="number of kernel copies for search")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--budget", type=int, default=100_000)
        sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--output", help="write to this file instead of stdout")
        sp.add_argument("--quiet", action="store_true", help="print only headline numbers")
        if name == "enumerate":
            sp.add_argument("--what", choices=["points", "flats", "monomials"], default="points")
    return parser


def _params(args) -> dict:
    skip = {"command", "output", "quiet", "format", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        results, text, code, quiet = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"pgmagic: error: {exc}", file=sys.stderr)
        return 2
    except BoundExceededError as exc:
        print(f"pgmagic: bound exceeded: {exc}", file=sys.stderr)
        return 3
    elapsed = round((time.perf_counter() - start) * 1000, 3)

    if args.quiet:
        out = quiet + "\n"
    elif args.format == "json":
        doc = {
            "command": args.command,
            "params": _params(args),
            "results": results,
            "timing_ms": elapsed,
            "version": __version__,
        }
        out = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    else:
        out = text if text.endswith("\n") else text + "\n"

    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
