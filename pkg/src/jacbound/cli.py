"""Command-line interface: ``jacbound {bounds,vanishing,cn,critexp,verify}``.

Exit codes: 0 ok, 1 input error, 2 certification inconclusive, 3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import mpmath

from . import __version__
from .bounds import (
    EXCEPTIONAL_TABLE,
    Certification,
    SpaceParams,
    bcg_bound,
    jacobian_bound,
    seq_C,
    seq_C_limit,
)
from .errors import CertificationInconclusive, JacboundError
from .exact import DEFAULT_PREC, Interval, Mode, as_rat, evaluate
from .gap import (
    HomDimQuery,
    critical_exponent_lower_bound,
    epsilon_threshold,
    kapovich_bound,
    vanishing_degrees,
)
from .matrix_checks import fiedler_check, kxw_inequality_check, random_psd
from .optimizers import (
    appB1_root,
    brute_force_simplex_max,
    each_opt_structure,
    isolate_Q_root,
    max_P_certified,
    verify_sorted_matching,
)
from .render import (
    dumps,
    line_chart_svg,
    mp_to_interval,
    outward_decimal,
    rational_json,
    round_decimals,
    scalar_json,
)

EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE, EXIT_VERIFY = 0, 1, 2, 3
CN_MAX = 10 ** 4


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rat(text: str) -> Fraction:
    try:
        return as_rat(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _record(command: str, params: dict, results: Any, **extra) -> dict:
    rec = {"command": command, "params": params, "results": results}
    rec.update(extra)
    return rec


# -- bounds ---------------------------------------------------------------------

def cmd_bounds(args) -> tuple[str, int]:
    params = SpaceParams(args.d, args.n, args.j)
    mode = Mode.CERTIFIED if args.certify else Mode.FLOAT64
    rep = jacobian_bound(params, args.delta, mode, args.prec)
    results = {
        "value": scalar_json(rep.value, rep.exact_form),
        "formula": rep.formula.value,
        "certified_lt_one": rep.certified_lt_one.value,
        "prec_bits": rep.prec,
        "degree": params.p,
        "generic_bound": scalar_json(bcg_bound(params, args.delta, mode)),
    }
    rec = _record("bounds", {"d": args.d, "n": args.n, "j": args.j, "p": params.p,
                             "delta": str(args.delta), "mode": mode.value}, results)
    code = EXIT_INCONCLUSIVE if rep.certified_lt_one is Certification.INCONCLUSIVE and args.certify else EXIT_OK
    return dumps(rec), code


# -- vanishing --------------------------------------------------------------------

def cmd_vanishing(args) -> tuple[str, int]:
    rep = vanishing_degrees(args.d, args.n, Mode.CERTIFIED, args.prec)
    rows = []
    for degree, br in rep.per_degree:
        iv = br.value.interval
        rows.append({
            "degree": degree,
            "j": br.params.j,
            "delta": str(rep.delta_used),
            "bound": scalar_json(br.value, br.exact_form),
            "bound_lo": outward_decimal(iv.lo, up=False),
            "bound_hi": outward_decimal(iv.hi, up=True),
            "certified": br.certified_lt_one.value,
            "formula": br.formula.value,
        })
    inconclusive = any(br.certified_lt_one is Certification.INCONCLUSIVE for _, br in rep.per_degree)
    code = EXIT_INCONCLUSIVE if inconclusive else EXIT_OK
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "j", "delta", "bound_lo", "bound_hi", "certified"])
        for r in rows:
            w.writerow([r["degree"], r["j"], r["delta"], r["bound_lo"], r["bound_hi"], r["certified"]])
        return buf.getvalue(), code
    degrees = sorted(rep.vanishing_degrees)
    note = (
        f"For discrete, torsion-free, non-lattice groups in this isometry group, "
        f"H_p(Gamma; V) = 0 for p in {degrees} (certified bound < 1 at delta = {rep.delta_used})."
    )
    rec = _record("vanishing", {"d": args.d, "n": args.n}, {
        "delta_used": str(rep.delta_used),
        "rows": rows,
        "vanishing_degrees": degrees,
        "note": note,
    })
    return dumps(rec), code


# -- C_n ----------------------------------------------------------------------------

_IV = type(mpmath.iv)()
_IV.prec = 128


def seq_C_enclosure(n: int) -> Interval:
    """Rigorous enclosure of C_n through outward-rounded binary interval arithmetic."""
    iv = _IV
    m = 4 * n
    x = (iv.mpf(m) / (m + 1)) ** (m - 2) * iv.sqrt(2) * m / (m - 3)
    return mp_to_interval(x)


def cmd_cn(args) -> tuple[str, int]:
    lo, hi = args.from_, args.to
    if not 1 <= lo <= hi <= CN_MAX:
        raise InputError(f"need 1 <= from <= to <= {CN_MAX}, got {lo}..{hi}")
    rows = []
    for n in range(lo, hi + 1):
        iv = seq_C_enclosure(n)
        dec = round_decimals(iv, 12)
        if dec is None:
            dec = round_decimals(seq_C(n, Mode.CERTIFIED, 256).interval, 12)
        below = iv.hi < 1
        comment = "" if below else "above 1 by direct evaluation"
        rows.append((n, dec, below, comment))
    limit = seq_C_limit()
    limit_dec = round_decimals(limit, 11)
    if args.format == "svg":
        pts = [(n, float(dec)) for n, dec, _, _ in rows]
        return line_chart_svg(
            pts, [(1.0, "1"), (float(limit.mid), f"sqrt(2)/e = {limit_dec}")],
            "Upper bound sequence C_n",
        ), EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "C_n", "lt_one", "comment"])
    for n, dec, below, comment in rows:
        w.writerow([n, dec, "true" if below else "false", comment])
    w.writerow(["limit", limit_dec, "true", "sqrt(2)/e"])
    return buf.getvalue(), EXIT_OK


# -- critexp ---------------------------------------------------------------------------

def cmd_critexp(args) -> tuple[str, int]:
    if args.epsilon is not None:
        if args.epsilon <= 0:
            raise InputError("epsilon must be positive")
        n_eps = epsilon_threshold(args.d, args.epsilon)
        rec = _record("critexp", {"d": args.d, "epsilon": str(args.epsilon)}, {"n_epsilon": n_eps})
        return dumps(rec), EXIT_OK
    if args.n is None or args.hd is None:
        raise InputError("critexp needs --n and --hd (or --epsilon)")
    q = HomDimQuery(args.d, args.n, args.hd)
    cfm = critical_exponent_lower_bound(q, Mode.CERTIFIED, args.prec)
    kap = kapovich_bound(args.hd)
    iv = cfm.interval
    if iv.lo > kap:
        larger = "cfm"
    elif iv.hi < kap:
        larger = "kapovich"
    elif iv.is_point and iv.lo == kap:
        larger = "equal"
    else:
        larger = "undecided"
    j = args.d * args.n - args.hd
    form = f"((({args.hd}-2)^{2 * j}*({args.hd}-2+{args.d})^{2 * (2 * args.hd - args.d * args.n)})/2^{j})^(1/{2 * args.hd})"
    rec = _record("critexp", {"d": args.d, "n": args.n, "hd": args.hd}, {
        "cfm_bound": scalar_json(cfm, form),
        "kapovich_bound": rational_json(kap),
        "larger": larger,
    })
    return dumps(rec), EXIT_INCONCLUSIVE if larger == "undecided" else EXIT_OK


# -- verify -----------------------------------------------------------------------------

def _suite_factor(args) -> dict:
    cases = []
    for d, n, j in ((2, 2, 1), (1, 3, 0)):
        r = brute_force_simplex_max(SpaceParams(d, n, j), args.grid)
        cases.append({
            "case": f"simplex d={d} n={n} j={j} grid={args.grid}",
            "argmax": [str(x) for x in r.argmax],
            "value": scalar_json(r.value),
            "shape_distance": str(r.shape_distance),
            "margin": str(Fraction(1, args.grid) - r.shape_distance),
            "passed": r.within_one_cell,
        })
    res = min(args.grid, 40)
    r = each_opt_structure(2, 4, Fraction(1, 2), Mode.CERTIFIED, grid_resolution=res)
    cases.append({
        "case": f"block d=2 k=4 sigma=1/2 resolution={res}",
        "argmax": [str(x) for x in r.grid_argmax],
        "passed": bool(r.grid_max_at_equal and r.hypothesis_holds),
    })
    return {"cases": cases}


def _suite_pest(args) -> dict:
    cases = []
    for (d, j), row in sorted(EXCEPTIONAL_TABLE.items()):
        params = SpaceParams(d, 2, j)
        cert = max_P_certified(params)
        published = evaluate(row.p_bound, None, Mode.CERTIFIED, 256)
        over = cert.overestimate.interval
        ok = over.lo <= published.hi and published.lo <= over.hi
        case = {
            "case": f"P bound d={d} n=2 j={j}",
            "value": scalar_json(cert.overestimate, row.p_bound),
            "margin": outward_decimal(max(over.hi - published.lo, published.hi - over.lo), up=True),
            "passed": ok,
        }
        cases.append(case)
        if d in (4, 8):
            delta = 8 if d == 4 else 16
            jb = jacobian_bound(params, delta)
            cases.append({
                "case": f"Jacobian bound d={d} n=2 j={j} delta={delta}",
                "value": scalar_json(jb.value, jb.exact_form),
                "margin": outward_decimal(1 - jb.value.interval.hi, up=False),
                "passed": jb.certified_lt_one is Certification.YES,
            })
        if row.root_bracket is not None:
            br = isolate_Q_root(params)
            lo, hi = row.root_bracket
            cases.append({
                "case": f"root bracket d={d} n=2 j={j} inside ({lo}, {hi})",
                "bracket": [str(br.interval.lo), str(br.interval.hi)],
                "passed": lo <= br.interval.lo and br.interval.hi <= hi,
            })
            if j == 1:
                root = appB1_root(d).interval
                cases.append({
                    "case": f"closed-form root d={d} inside bracket",
                    "value": scalar_json(appB1_root(d)),
                    "passed": br.interval.lo <= root.hi and root.lo <= br.interval.hi
                    and lo <= root.lo and root.hi <= hi,
                })
    return {"cases": cases}


def _suite_fiedler(args) -> dict:
    passed, worst, witness = 0, None, None
    for i in range(args.trials):
        s = args.seed ^ i
        size, k = 2 + i % 7, 2 + (i // 7) % 3
        mats = [random_psd(size, Fraction(t + 1, 2), s * 4 + t) for t in range(k)]
        rep = fiedler_check(mats)
        rel = rep.margin / max(1.0, abs(rep.product))
        if worst is None or rel < worst:
            worst = rel
        if rep.passed:
            passed += 1
        elif witness is None:
            witness = {"trial": i, "size": size, "summands": k,
                       "matrices": [m.round(15).tolist() for m in mats]}
    out = {"cases": [{"case": f"fiedler trials={args.trials}", "passed_trials": passed,
                      "min_relative_margin": f"{worst:.3e}" if worst is not None else None,
                      "passed": passed == args.trials}]}
    if witness:
        out["witness"] = witness
    return out


def _suite_matching(args) -> dict:
    import random

    passed, witness = 0, None
    for i in range(args.trials):
        rng = random.Random(args.seed ^ i)
        k = 2 + i % 5
        a = sorted(Fraction(rng.randint(0, 20), 20) for _ in range(k))
        b = sorted(Fraction(rng.randint(0, 40), 20) for _ in range(k))
        rep = verify_sorted_matching(a, b)
        if rep.identity_minimal:
            passed += 1
        elif witness is None:
            witness = {"trial": i, "a": [str(x) for x in a], "b": [str(x) for x in b]}
    out = {"cases": [{"case": f"sorted matching trials={args.trials}", "passed_trials": passed,
                      "passed": passed == args.trials}]}
    if witness:
        out["witness"] = witness
    return out


def _suite_kxw(args) -> dict:
    cases = []
    for d, nd, ps in ((2, 8, range(1, 9)), (4, 12, range(1, 7))):
        for p in ps:
            rep = kxw_inequality_check(d, nd, p, args.trials, args.seed)
            case = {
                "case": f"kxw d={d} nd={nd} p={p} trials={args.trials}",
                "passed_trials": rep.passed,
                "interlacing": rep.interlacing_ok,
                "jhj_spectrum": rep.jhj_ok,
                "min_margin": f"{rep.min_margin:.3e}",
                "passed": rep.ok,
            }
            if rep.failures:
                case["failed_trials"] = rep.failures[:10]
            cases.append(case)
    return {"cases": cases}


SUITES: dict[str, Callable[[Any], dict]] = {
    "factor": _suite_factor,
    "pest": _suite_pest,
    "fiedler": _suite_fiedler,
    "matching": _suite_matching,
    "kxw": _suite_kxw,
}


def cmd_verify(args) -> tuple[str, int]:
    if not 1 <= args.grid <= 60:
        raise InputError("grid must lie in 1..60")
    if args.trials < 1:
        raise InputError("trials must be >= 1")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    suites, total_pass, total = {}, 0, 0
    for name in names:
        res = SUITES[name](args)
        n_pass = sum(1 for c in res["cases"] if c["passed"])
        res["passed"] = n_pass
        res["failed"] = len(res["cases"]) - n_pass
        suites[name] = res
        total_pass += n_pass
        total += len(res["cases"])
    rec = _record("verify", {"suite": args.suite, "seed": args.seed, "grid": args.grid,
                             "trials": args.trials}, suites,
                  summary={"passed": total_pass, "failed": total - total_pass})
    return dumps(rec), EXIT_OK if total_pass == total else EXIT_VERIFY


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jacbound", description="Certified Jacobian bounds for barycenter maps.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
        sp.add_argument("--prec", type=int, default=DEFAULT_PREC, metavar="BITS",
                        help="starting precision in bits for certified evaluation")

    b = sub.add_parser("bounds", help="Jacobian bound for (d, n, j) at critical exponent delta")
    b.add_argument("--d", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--j", type=int, required=True)
    b.add_argument("--delta", type=_rat, required=True)
    b.add_argument("--certify", action="store_true", help="certified interval evaluation")
    common(b)

    v = sub.add_parser("vanishing", help="homology degrees forced to vanish")
    v.add_argument("--d", type=int, required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--certify", action="store_true", help="accepted; vanishing is always certified")
    common(v)

    c = sub.add_parser("cn", help="the upper bound sequence C_n")
    c.add_argument("--from", dest="from_", type=int, default=1)
    c.add_argument("--to", type=int, default=34)
    c.add_argument("--format", choices=("csv", "svg"), default="csv")
    common(c)

    e = sub.add_parser("critexp", help="critical-exponent lower bound vs hd - 1")
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--n", type=int)
    e.add_argument("--hd", type=int)
    e.add_argument("--epsilon", type=_rat)
    common(e)

    r = sub.add_parser("verify", help="run verification suites")
    r.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--grid", type=int, default=40)
    r.add_argument("--trials", type=int, default=200)
    common(r)
    return p


COMMANDS = {
    "bounds": cmd_bounds,
    "vanishing": cmd_vanishing,
    "cn": cmd_cn,
    "critexp": cmd_critexp,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT
    try:
        text, code = COMMANDS[args.command](args)
    except CertificationInconclusive as exc:
        print(f"jacbound: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (JacboundError, InputError) as exc:
        print(f"jacbound: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
