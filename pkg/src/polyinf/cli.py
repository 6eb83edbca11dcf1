"""Command-line interface.

Exit codes: 0 success, 1 a check failed, 2 usage or configuration error,
3 a point outside the domain of the requested object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .errors import DegreeOverflow, DomainViolation, Singularity
from .kernels import KernelId, eval_kernel
from .operators import adjoint_residual
from .pick import PickProblem, feasibility_report
from .polycore import PolyFun
from .suite import CHECKS, SuiteConfig, run_suite
from .transforms import HermiteCoeffs, berezin, segal_bargmann

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _clean(obj):
    # JSON has no inf/nan; report them as null
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _dump(obj, stream=None):
    stream = sys.stdout if stream is None else stream
    json.dump(_clean(obj), stream, indent=2)
    stream.write("\n")


def _point(text: str) -> complex:
    try:
        re, im = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None
    return complex(re, im)


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _points(data) -> list[complex]:
    out = []
    for item in data:
        if isinstance(item, dict):
            out.append(complex(float(item["re"]), float(item.get("im", 0.0))))
        elif isinstance(item, (list, tuple)):
            out.append(complex(float(item[0]), float(item[1])))
        else:
            out.append(complex(float(item), 0.0))
    return out


def _tol_override(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name, float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance in {text!r}") from None


# subcommands -----------------------------------------------------------------

def cmd_kernel_eval(args) -> int:
    kid = KernelId.parse(args.id, args.n)
    val = eval_kernel(kid, args.z, args.w, cross_check=args.cross_check)
    _dump({"re": val.real, "im": val.imag})
    return EXIT_OK


def cmd_transform(args) -> int:
    data = _read_json(args.input)
    if args.kind == "sb":
        out = segal_bargmann(HermiteCoeffs.from_dict(data))
    else:
        out = berezin(PolyFun.from_dict(data))
    _dump(out.to_dict())
    return EXIT_OK


def cmd_ops_adjoint(args) -> int:
    rep = adjoint_residual(args.left, args.right, args.space, args.degree, args.tol)
    _dump(rep.to_dict())
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_pick_feasible(args) -> int:
    nodes = _points(_read_json(args.nodes))
    targets = _points(_read_json(args.targets))
    rep = feasibility_report(PickProblem(tuple(nodes), tuple(targets)), args.tol)
    _dump(rep)
    return EXIT_OK


def cmd_suite(args) -> int:
    if args.list:
        for c in CHECKS:
            print(f"{c.name}\t{c.criterion if c.criterion is not None else '-'}\t{c.tolerance:g}")
        return EXIT_OK
    cfg = SuiteConfig(degree=args.degree, kernel_degree=args.kernel_degree, seed=args.seed,
                      tolerances=dict(args.tol), output=args.output, workers=args.workers,
                      only=tuple(args.only))
    records = run_suite(cfg)
    payload = [r.to_dict() for r in records]
    if cfg.output:
        with open(cfg.output, "w") as fh:
            _dump(payload, fh)
    if args.json:
        _dump(payload)
    else:
        for r in records:
            mark = "PASS" if r.passed else "FAIL"
            crit = f"[{r.criterion}]" if r.criterion is not None else "[-]"
            print(f"{mark}  {crit:>5} {r.name:<32} {r.max_residual:.3e} <= {r.tolerance:.1e}")
        failed = sum(not r.passed for r in records)
        print(f"{len(records) - failed}/{len(records)} checks passed")
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polyinf",
                                description="Kernels, transforms and operator identities "
                                            "for polyanalytic function spaces.")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="evaluate closed-form kernels")
    ksub = k.add_subparsers(dest="action", required=True)
    ke = ksub.add_parser("eval", help="evaluate a kernel at (z, w)")
    ke.add_argument("--id", required=True, help="FockInf, FockN:<n>, Gfactor, Hardy, "
                                                "DruryArveson or BidiskJ")
    ke.add_argument("--n", type=int, default=None, help="order for FockN")
    ke.add_argument("--z", type=_point, required=True, metavar="RE,IM")
    ke.add_argument("--w", type=_point, required=True, metavar="RE,IM")
    ke.add_argument("--cross-check", action="store_true",
                    help="for FockN, also evaluate the binomial form and compare")
    ke.set_defaults(func=cmd_kernel_eval)

    t = sub.add_parser("transform", help="coefficient-level transforms")
    t.add_argument("kind", choices=("sb", "berezin"))
    t.add_argument("--input", required=True, help="JSON coefficient file, or - for stdin")
    t.set_defaults(func=cmd_transform)

    o = sub.add_parser("ops", help="operator checks")
    osub = o.add_subparsers(dest="action", required=True)
    oa = osub.add_parser("adjoint", help="verify <L f, g> = <f, R g> on a monomial basis")
    oa.add_argument("--left", required=True)
    oa.add_argument("--right", required=True)
    oa.add_argument("--space", required=True, choices=("SF", "SH", "DA"))
    oa.add_argument("--degree", type=int, default=12)
    oa.add_argument("--tol", type=float, default=1e-10)
    oa.set_defaults(func=cmd_ops_adjoint)

    pk = sub.add_parser("pick", help="Pick interpolation")
    psub = pk.add_subparsers(dest="action", required=True)
    pf = psub.add_parser("feasible", help="test positivity of the Pick matrix")
    pf.add_argument("--nodes", required=True, help="JSON list of [re, im] pairs")
    pf.add_argument("--targets", required=True, help="JSON list of [re, im] pairs")
    pf.add_argument("--tol", type=float, default=1e-10)
    pf.set_defaults(func=cmd_pick_feasible)

    s = sub.add_parser("suite", help="run the identity suite")
    s.add_argument("--degree", type=int, default=12, help="truncation degree for adjoint checks")
    s.add_argument("--kernel-degree", type=int, default=60, help="N for the kernel-sum checks")
    s.add_argument("--seed", type=int, default=SuiteConfig.seed)
    s.add_argument("--tol", type=_tol_override, action="append", default=[],
                   metavar="PATTERN=VALUE", help="override tolerances (glob patterns allowed)")
    s.add_argument("--only", action="append", default=[], metavar="PATTERN",
                   help="run only matching checks")
    s.add_argument("--workers", type=int, default=4)
    s.add_argument("--output", help="also write the JSON report here")
    s.add_argument("--json", action="store_true", help="print the JSON report")
    s.add_argument("--list", action="store_true", help="list registered checks and exit")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "degree", 1) is not None and getattr(args, "degree", 1) < 1:
        parser.error("degree must be at least 1")
    try:
        return args.func(args)
    except (DomainViolation, Singularity) as exc:
        print(f"polyinf: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (UsageError, DegreeOverflow, ValueError, KeyError, TypeError) as exc:
        print(f"polyinf: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
