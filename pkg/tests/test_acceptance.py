"""Acceptance criteria 1-11, one check each.

Each check returns (passed, detail).  Pytest runs them individually and the
terminal summary prints one PASS/FAIL line per criterion; running this file
directly prints the same lines.
"""

from __future__ import annotations

import contextlib
import io
import json
import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from jacbound.bounds import (  # noqa: E402
    EXCEPTIONAL_TABLE,
    SpaceParams,
    build_Q,
    eval_P_reduced_squared,
    general_formula_bound,
    seq_C,
    seq_C_limit,
)
from jacbound.cli import main as cli_main  # noqa: E402
from jacbound.exact import Interval, evaluate  # noqa: E402
from jacbound.gap import HomDimQuery, critical_exponent_lower_bound, kapovich_bound  # noqa: E402
from jacbound.matrix_checks import fiedler_check, kxw_inequality_check, random_psd  # noqa: E402
from jacbound.optimizers import (  # noqa: E402
    brute_force_simplex_max,
    is_prop_exceptional,
    isolate_Q_root,
    max_P_certified,
    window_holds,
)


def _cli_json(*argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli_main(list(argv))
    return code, json.loads(buf.getvalue()) if buf.getvalue() else None


def _within(lo: F, hi: F, ref: str, tol: F) -> bool:
    return F(ref) - tol <= lo and hi <= F(ref) + tol


def criterion_1():
    t = time.perf_counter()
    cases = [
        (("4", "2", "1", "8"), oracles.PUBLISHED_J421),
        (("8", "2", "1", "16"), oracles.PUBLISHED_J821),
        (("8", "2", "2", "16"), oracles.PUBLISHED_J822),
        (("8", "2", "3", "16"), oracles.PUBLISHED_J823),
        (("4", "3", "1", "12"), oracles.PUBLISHED_C3),
    ]
    bad = []
    for (d, n, j, delta), ref in cases:
        code, rec = _cli_json("bounds", "--d", d, "--n", n, "--j", j, "--delta", delta, "--certify")
        v = rec["results"]["value"]
        ok = (code == 0 and rec["results"]["certified_lt_one"] == "yes"
              and _within(F(v["lo"]), F(v["hi"]), ref, oracles.PUBLISHED_TOL))
        if not ok:
            bad.append((d, n, j))
    dt = time.perf_counter() - t
    return not bad and dt < 5, f"5 constants within 5e-11, certified < 1, {dt:.2f}s; failures {bad}"


def criterion_2():
    lim = seq_C_limit()
    ok = F(oracles.PUBLISHED_LIMIT) in lim and lim.width < F(1, 10 ** 11)
    return ok, f"enclosure [{float(lim.lo):.12f}, {float(lim.hi):.12f}] width {float(lim.width):.1e}"


def criterion_3():
    t = time.perf_counter()
    inside = []
    for (d, j), (lo, hi) in sorted(oracles.PUBLISHED_BRACKETS.items()):
        br = isolate_Q_root(SpaceParams(d, 2, j))
        Q = build_Q(br.params)
        inside.append(lo <= br.interval.lo and br.interval.hi <= hi
                      and Q(br.interval.lo) > 0 > Q(br.interval.hi))
    dt = time.perf_counter() - t
    return all(inside) and dt < 1, f"{sum(inside)}/4 brackets inside, exact signs, {dt:.3f}s"


def criterion_4():
    good = 0
    for (d, j), expr in sorted(oracles.PUBLISHED_P_BOUNDS.items()):
        params = SpaceParams(d, 2, j)
        over = max_P_certified(params, prec=256).overestimate.interval
        ref = evaluate(expr, prec=256)
        match = over.width < F(1, 10 ** 20) and over.lo <= ref.hi and ref.lo <= over.hi
        delta = {2: F(4), 4: F(8), 8: F(16)}[d]
        p = params.p
        scaled = over * delta ** p / evaluate(f"{p}^({p}/2)", prec=256)
        row = evaluate(EXCEPTIONAL_TABLE[(d, j)].jacobian, {"delta": delta}, prec=256)
        match &= abs(scaled.mid - row.mid) < F(1, 10 ** 20) * max(1, abs(row.mid))
        good += match
    return good == 5, f"{good}/5 exceptional P bounds and Jacobian rows reproduced"


def criterion_5():
    t = time.perf_counter()
    wrong = []
    for n in range(2, 51):
        code, rec = _cli_json("vanishing", "--d", "4", "--n", str(n))
        if code != 0 or rec["results"]["vanishing_degrees"] != [4 * n - 1]:
            wrong.append(n)
    code, rec = _cli_json("vanishing", "--d", "8", "--n", "2")
    oct_ok = code == 0 and rec["results"]["vanishing_degrees"] == [13, 14, 15]
    dt = time.perf_counter() - t
    return not wrong and oct_ok and dt < 30, f"d=4 n=2..50 {{4n-1}}, d=8 {{13,14,15}}, {dt:.2f}s; wrong {wrong}"


def criterion_6():
    vals = [seq_C(n).interval for n in range(1, 101)]
    dec = all(b.hi < a.lo for a, b in zip(vals, vals[1:]))
    c3 = vals[2].hi < 1
    c2 = vals[1].lo > 1
    return dec and c3 and c2, f"strictly decreasing 1..100: {dec}; C_3 < 1: {c3}; C_2 = {float(vals[1].mid):.5f} > 1: {c2}"


def criterion_7():
    j2 = [general_formula_bound(SpaceParams(4, n, 2), 4 * n).interval.lo > 2 for n in range(3, 11)]
    oc = general_formula_bound(SpaceParams(8, 2, 4), 16).interval
    return all(j2) and oc.lo > 1, f"d=4 j=2 > 2 for n=3..10: {sum(j2)}/8; d=8 j=4 = {float(oc.mid):.3f}"


def criterion_8():
    t = time.perf_counter()
    shapes = []
    for key in [(2, 2, 1), (1, 3, 0), (4, 2, 1)]:
        r = brute_force_simplex_max(SpaceParams(*key), 40)
        shapes.append(r.within_one_cell)
    rng = random.Random(2024)
    pool = [SpaceParams(d, n, j) for d in (2, 4, 8) for n in range(2, 11) for j in range(1, d)
            if d != 8 or n == 2]
    dominated = 0
    for params in rng.sample(pool, 20):
        bound = max_P_certified(params).value_bound.hi
        top = F(1, params.p - params.j)
        worst = max(eval_P_reduced_squared(params, top * k / 2000) for k in range(2001))
        dominated += worst <= bound * bound
    dt = time.perf_counter() - t
    ok = all(shapes) and dominated == 20 and dt <= 120
    return ok, f"grid-40 shapes {sum(shapes)}/3; dense samples dominated {dominated}/20; {dt:.1f}s"


def criterion_9():
    t = time.perf_counter()
    fiedler_pass = 0
    for i in range(1000):
        size, k = 2 + i % 7, 2 + (i // 7) % 3
        fiedler_pass += fiedler_check([random_psd(size, 1 + s, 97 * i + s) for s in range(k)]).passed
    kxw_ok, interl = True, True
    for d, nd, ps in ((2, 8, range(1, 9)), (4, 12, range(1, 7))):
        for p in ps:
            rep = kxw_inequality_check(d, nd, p, 500, seed=12345)
            kxw_ok &= rep.passed == 500 and rep.jhj_ok
            interl &= rep.interlacing_ok
    dt = time.perf_counter() - t
    ok = fiedler_pass == 1000 and kxw_ok and interl and dt <= 60
    return ok, f"fiedler {fiedler_pass}/1000; kxw 500 trials x 14 settings ok: {kxw_ok}; interlacing: {interl}; {dt:.1f}s"


def criterion_10():
    count, bad = 0, []
    for d in (2, 4, 8):
        for n in range(2, 60 // d + 1):
            if d == 8 and n != 2:
                continue
            for j in range(1, d):
                params = SpaceParams(d, n, j)
                if is_prop_exceptional(params):
                    continue
                Q, p = build_Q(params), params.p
                ok = Q(0) == j - 1 and Q(F(1, p)) == F(-2 * (d - 1) * j * j, p * p)
                ok &= Q(F(2, p) - F(1, p - j)) >= 0 and window_holds(params)
                count += 1
                if not ok:
                    bad.append((d, n, j))
    return not bad, f"{count} non-exceptional (d,n,j) with dn <= 60 checked exactly; failures {bad}"


def criterion_11():
    kap = all(kapovich_bound(h) == h - 1 for h in range(1, 200))
    fourteen = critical_exponent_lower_bound(HomDimQuery(4, 3, 12)).interval == Interval.point(14)
    beats = all(
        critical_exponent_lower_bound(HomDimQuery(d, 25, 25 * d - 1)).interval.lo > kapovich_bound(25 * d - 1)
        for d in (4, 8)
    )
    return kap and fourteen and beats, f"kapovich exact: {kap}; (4,3,12) = 14: {fourteen}; n=25 CFM > Kapovich: {beats}"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 12)}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    from conftest import ACCEPTANCE_LINES

    ok, detail = CRITERIA[number]()
    ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, fn in sorted(CRITERIA.items()):
        ok, detail = fn()
        failed += not ok
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    sys.exit(1 if failed else 0)
