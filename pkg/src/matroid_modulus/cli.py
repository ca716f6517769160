"""Command line: ``matmod analyze | verify | random``.

Exit codes: 0 success, 2 unreadable or invalid input, 3 a cap was exceeded
(or an iterative solver ran out of iterations), 4 an internal cross-check
failed.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from .beurling import is_beurling
from .checks import VerifyConfig, run_checks
from .duality import covering_value, dual_eta_identity, fulkerson_blocker, packing_value
from .errors import CapExceeded, ConsistencyError, ConvergenceError, MatroidError, ParseError
from .formats import FORMATS, load, parse, random_instance_text
from .matroid import Matroid, caps
from .modulus import mod2, mod_p, mod_p_numeric
from .principal import critical_values, density_theta, fractional_arboricity, is_homogeneous, strength

EXIT_OK, EXIT_INPUT, EXIT_CAP, EXIT_CHECK = 0, 2, 3, 4
WOLFE_TOL = 1e-9
MOD_P_REL_TOL = 1e-6


def q(x) -> str:
    """Rational as a lowest-terms string."""
    return str(Fraction(x))


def _labels(m: Matroid, X) -> list[str]:
    return [str(e) for e in m.ordered(X)]


def _density(m: Matroid, d: dict) -> dict:
    return {str(e): q(d[e]) for e in m.ground}


def _closed_form_text(chain, p: Fraction) -> str:
    qq = p / (p - 1)
    terms = " + ".join(f"{b.rank}^({qq})/{b.matroid.n}^({qq - 1})" for b in chain.blocks)
    return f"({terms})^({1 - p})"


def parse_p_list(text: str) -> list[Fraction]:
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok:
            try:
                p = Fraction(tok)
            except (ValueError, ZeroDivisionError):
                raise MatroidError(f"bad exponent {tok!r}") from None
            if p <= 1:
                raise MatroidError(f"p must exceed 1, got {tok}")
            out.append(p)
    return sorted(set(out))


def parse_caps(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in ("subsets", "bases"):
            raise MatroidError(f"unknown cap {key!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise MatroidError(f"bad cap value {val!r}") from None
    return out


def build_report(m: Matroid, p_list: list[Fraction], descriptor: dict) -> dict:
    """Full analysis with every cross-identity re-asserted; raises ConsistencyError on mismatch."""
    res = mod2(m, tol=WOLFE_TOL)
    chain = res.chain
    S, D = strength(m), fractional_arboricity(m)
    theta = density_theta(m)
    tau, ups = packing_value(m), covering_value(m)
    if tau.value != S.value or ups.value != D.value:
        raise ConsistencyError("packing/covering values differ from strength/arboricity")
    eta = res.eta_star
    if 1 / max(eta.values()) != S.value or 1 / min(eta.values()) != D.value:
        raise ConsistencyError("extreme usage probabilities disagree with strength/arboricity")
    if not S.value <= tau.value <= theta <= ups.value <= D.value:
        raise ConsistencyError("inequality chain violated")
    pc = critical_values(m, eta)
    homogeneous = is_homogeneous(m)
    if homogeneous != (len(set(eta.values())) == 1):
        raise ConsistencyError("homogeneity test disagrees with usage probabilities")

    mod_p_exact, mod_p_num = {}, {}
    for p in p_list:
        closed = mod_p(m, p, chain=chain)
        if p == 2 and closed.exact != res.mod_value:
            raise ConsistencyError("closed form at p=2 differs from Mod_2")
        num = mod_p_numeric(m, p)
        if abs(closed.value - num.value) > MOD_P_REL_TOL * closed.value:
            raise ConsistencyError(f"closed-form Mod_p disagrees with the numeric solve at p={p}")
        mod_p_exact[q(p)] = q(closed.exact) if closed.exact is not None else _closed_form_text(chain, p)
        mod_p_num[q(p)] = {"closed_form": closed.value, "convex_solve": num.value}

    blockers = fulkerson_blocker(m)
    beurling = []
    for blk_end in range(1, len(pc.upper_sets)):
        X = frozenset(m.ground) - pc.upper_sets[blk_end - 1]
        if not is_beurling(m, X, eta).is_beurling:
            raise ConsistencyError("upper level of the partition chain is not Beurling")
        beurling.append(_labels(m, X))

    report = {
        "input": descriptor,
        "ground": [str(e) for e in m.ground],
        "rank": m.full_rank,
        "eta_star": _density(m, eta),
        "rho_star": _density(m, res.rho_star),
        "meo": q(res.meo),
        "mod2": q(res.mod_value),
        "mod_p": mod_p_exact,
        "pmf": [{"base": _labels(m, B), "weight": q(w)} for B, w in res.pmf.items()],
        "strength": {"value": q(S.value), "witness": _labels(m, S.witness)},
        "arboricity": {"value": q(D.value), "witness": _labels(m, D.witness)},
        "theta": q(theta),
        "tau": q(tau.value),
        "upsilon": q(ups.value),
        "critical_values": [q(v) for v in pc.critical_values],
        "partition_chain": [_labels(m, U) for U in pc.upper_sets],
        "deflation_blocks": [
            {"elements": _labels(m, b.elements), "rank": b.rank, "size": b.matroid.n, "eta": q(b.eta)}
            for b in chain.blocks
        ],
        "beurling_levels": beurling,
        "theta_family": [{"elements": _labels(m, v.elements), "denom": v.denom} for v in blockers],
        "homogeneous": homogeneous,
        "numeric": {
            "tolerance": WOLFE_TOL,
            "mod_p_tolerance": MOD_P_REL_TOL,
            "wolfe_eta": {str(e): res.numeric_eta[e] for e in m.ground},
            "wolfe_max_deviation": res.numeric_deviation,
            "mod_p": mod_p_num,
        },
    }
    if 0 < m.full_rank < m.n:
        ident = dual_eta_identity(m)
        report["dual"] = {"eta_dual": _density(m, ident.eta_dual), "max_gap": q(ident.max_gap)}
    return report


def write_csv(report: dict, outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "densities.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["element", "eta_star", "rho_star"])
        for e in report["ground"]:
            w.writerow([e, report["eta_star"][e], report["rho_star"][e]])
    with open(outdir / "theta_family.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["elements", "denom"])
        for item in report["theta_family"]:
            w.writerow([" ".join(item["elements"]), item["denom"]])


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def _read(path: str, fmt: str | None) -> Matroid:
    # "-" reads the matroid from stdin
    return parse(sys.stdin.read(), fmt) if path == "-" else load(path, fmt)


def cmd_analyze(args) -> int:
    m = _read(args.path, args.format)
    p_list = parse_p_list(args.p)
    descriptor = {"path": str(args.path), "format": args.format or "auto"}
    report = build_report(m, p_list, descriptor)
    sys.stdout.write(dumps(report) + "\n")
    if args.csv:
        write_csv(report, Path(args.csv))
    return EXIT_OK


def cmd_verify(args) -> int:
    m = _read(args.path, args.format)
    results = run_checks(m, VerifyConfig(seed=args.seed))
    for r in results:
        print(r.line())
    failed = sum(r.status == "fail" for r in results)
    skipped = sum(r.status == "skip" for r in results)
    print(f"{len(results) - failed - skipped} passed, {skipped} skipped, {failed} failed")
    return EXIT_OK if not failed else EXIT_CHECK


def cmd_random(args) -> int:
    sys.stdout.write(random_instance_text(args.seed, args.family, args.size))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matmod", description="Base-family modulus of matroids.")
    parser.add_argument("--caps", help="enumeration caps, e.g. subsets=1048576,bases=1000000")
    sub = parser.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full JSON report")
    a.add_argument("path", help="input file, or - for stdin")
    a.add_argument("--format", choices=FORMATS)
    a.add_argument("--p", default="2", help="comma-separated exponents, e.g. 2,3,3/2")
    a.add_argument("--csv", metavar="DIR", help="also write densities and Θ tables as CSV")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="run the invariant suite")
    v.add_argument("path", help="input file, or - for stdin")
    v.add_argument("--format", choices=FORMATS)
    v.add_argument("--seed", type=int, default=0, help="seed for the sampled checks")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("random", help="print a seeded random instance")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--family", choices=("graphic", "linear"), default="graphic")
    r.add_argument("--size", type=int, default=6)
    r.set_defaults(func=cmd_random)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with caps(**parse_caps(args.caps)):
            return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (CapExceeded, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ConsistencyError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except (MatroidError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
