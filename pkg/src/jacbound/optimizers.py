"""Certified root isolation for Q, certified maximization of P, and brute-force oracles.

Root isolation and sign-window checks use exact rational arithmetic only; the
brute-force oracles enumerate rational lattices with the float kernel from
:mod:`jacbound.grid` and then re-evaluate the winning point exactly.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import grid
from .bounds import (
    EXCEPTIONAL_TABLE,
    SpaceParams,
    build_Q,
    eval_P2,
    eval_P_reduced,
    objective_f,
    sigma_of_lambda,
)
from .errors import (
    BudgetExceeded,
    DegenerateCase,
    DomainError,
    NoSignChange,
    ParamError,
)
from .exact import DEFAULT_PREC, Interval, Mode, RatLike, Scalar, as_rat, iv_sqrt

F = Fraction

GRID_POINT_CAP = 300_000_000


# -- Sturm sequences --------------------------------------------------------

def _poly_eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = F(0)
    for a in c:
        acc = acc * x + a
    return acc


def _poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and a:
        q = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= q * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def sturm_sequence(coeffs: Sequence[Fraction]) -> list[list[Fraction]]:
    c = [F(v) for v in coeffs]
    while c and c[0] == 0:
        c.pop(0)
    deg = len(c) - 1
    seq = [c, [a * (deg - i) for i, a in enumerate(c[:-1])]]
    while len(seq[-1]) > 1:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-v for v in r])
    return seq


def _sign_changes(values) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(coeffs: Sequence[Fraction], a: RatLike, b: RatLike) -> int:
    """Number of distinct real roots in the half-open interval (a, b]."""
    seq = sturm_sequence(coeffs)
    a, b = as_rat(a), as_rat(b)
    va = _sign_changes(_poly_eval(s, a) for s in seq)
    vb = _sign_changes(_poly_eval(s, b) for s in seq)
    return va - vb


# -- root isolation ---------------------------------------------------------

@dataclass(frozen=True)
class RootBracket:
    params: SpaceParams
    interval: Interval
    sign_change: tuple[int, int]
    root_count: int


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def is_degenerate(params: SpaceParams) -> bool:
    return (params.d, params.n, params.j) == (2, 2, 1)


def isolate_Q_root(params: SpaceParams, width: RatLike = F(1, 10 ** 12)) -> RootBracket:
    """Bisect the unique root of Q in (0, 1/(p-j)) down to ``width``.

    Every sign is evaluated exactly; uniqueness on the starting bracket is
    established with a Sturm sequence.
    """
    width = as_rat(width)
    if width <= 0:
        raise ParamError("width must be positive")
    if params.j < 1:
        raise ParamError("Q is defined for j >= 1")
    if is_degenerate(params):
        raise DegenerateCase("Q = -2 lambda^2 has no sign change for (d, n, j) = (2, 2, 1)")
    Q = build_Q(params)
    hi = F(1, params.p - params.j)
    if Q(hi) >= 0:
        raise NoSignChange(f"Q(1/(p-j)) = {Q(hi)} is not negative")
    lo = F(0)
    if Q(lo) <= 0:
        # j = 1 gives Q(0) = 0; step right until Q turns positive.
        lo = hi
        for _ in range(256):
            lo /= 2
            if Q(lo) > 0:
                break
        else:
            raise NoSignChange("Q is not positive near 0")
    count = sturm_count(Q.coeffs, lo, hi)
    if count != 1:
        raise NoSignChange(f"expected one root in ({lo}, {hi}], Sturm count is {count}")
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = _sign(Q(mid))
        if s == 0:
            return RootBracket(params, Interval.point(mid), (0, 0), 1)
        if s > 0:
            lo = mid
        else:
            hi = mid
    return RootBracket(params, Interval(lo, hi), (_sign(Q(lo)), _sign(Q(hi))), count)


def appB1_root(d: int, mode=Mode.CERTIFIED, prec: int = DEFAULT_PREC) -> Scalar:
    """Closed-form maximizing root of Q for n = 2, j = 1."""
    mode = Mode.parse(mode)
    if d == 2:
        raise DomainError("d = 2 is degenerate: the maximum sits at lambda = 0")
    if d not in (4, 8):
        raise ParamError(f"closed-form root is stated for d in (4, 8), got {d}")
    disc = -7 + d * (22 + d * (-17 + d * (2 + d)))
    base = 3 + d * (-7 + 3 * d)
    if mode is Mode.FLOAT64:
        return Scalar.of_float(2 * (d - 2) / (base + math.sqrt(disc)))
    return Scalar.of_interval(2 * (d - 2) / (iv_sqrt(Interval.point(disc), prec) + base))


# -- certified maximization of P --------------------------------------------

class MaxMethod(enum.Enum):
    ENDPOINT_OVERESTIMATE = "EndpointOverestimate"
    ROOT_BRACKETING = "RootBracketing"
    BOUNDARY_MAXIMUM = "BoundaryMaximum"


@dataclass(frozen=True)
class MaxCertificate:
    """Enclosure of max P(lambda) on [0, 1/(p-j)].

    ``value_bound`` is an Interval in certified mode and a (lo, hi) float pair
    in float mode; its upper end is the over-estimate returned separately.
    """

    params: SpaceParams
    arg_bracket: Interval
    value_bound: Union[Interval, tuple[float, float]]
    overestimate: Scalar
    method: MaxMethod

    @property
    def upper(self):
        if isinstance(self.value_bound, Interval):
            return self.value_bound.hi
        return self.value_bound[1]


def in_prop_hypothesis(params: SpaceParams) -> bool:
    d, n, j = params.d, params.n, params.j
    return d in (2, 4, 8) and 0 < j < d and (d != 8 or n == 2)


def is_prop_exceptional(params: SpaceParams) -> bool:
    d, n, j = params.d, params.n, params.j
    return n == 2 and (j == 1 or (d == 8 and j in (2, 3)))


def window_holds(params: SpaceParams) -> bool:
    """Exact check Q(2/p - 1/(p-j)) >= 0 and Q(1/p) < 0 (left end clamped at 0)."""
    Q = build_Q(params)
    p, j = params.p, params.j
    left = max(F(2, p) - F(1, p - j), F(0))
    return Q(left) >= 0 and Q(F(1, p)) < 0


def max_P_certified(params: SpaceParams, mode=Mode.CERTIFIED,
                    prec: int = DEFAULT_PREC) -> MaxCertificate:
    """Certified upper bound for max P(lambda) on the feasible interval."""
    mode = Mode.parse(mode)
    if not in_prop_hypothesis(params):
        raise ParamError(
            "needs d in {2,4,8}, 0 < j < d and n = 2 when d = 8, "
            f"got (d, n, j) = ({params.d}, {params.n}, {params.j})"
        )

    def pack(arg: Interval, low_lam: Fraction, over: Scalar, method: MaxMethod):
        low = eval_P_reduced(params, low_lam, mode, prec)
        if mode is Mode.FLOAT64:
            return MaxCertificate(params, arg, (low.value, over.value), over, method)
        return MaxCertificate(params, arg, Interval(low.lo, over.hi), over, method)

    p, j = params.p, params.j
    if is_degenerate(params):
        half = Scalar.of_float(0.5) if mode is Mode.FLOAT64 else Scalar.of_interval(Interval.point(F(1, 2)))
        return pack(Interval.point(0), F(0), half, MaxMethod.BOUNDARY_MAXIMUM)

    if is_prop_exceptional(params):
        row = EXCEPTIONAL_TABLE[(params.d, j)]
        pub_lo, pub_hi = row.root_bracket
        br = isolate_Q_root(params)
        if not (pub_lo <= br.interval.lo and br.interval.hi <= pub_hi):
            raise NoSignChange(f"root bracket {br.interval} escapes ({pub_lo}, {pub_hi})")
        lam_hi, sig_hi = row.overestimate_point
        assert sig_hi == sigma_of_lambda(params, pub_lo)
        over = eval_P2(params, lam_hi, sig_hi, mode, prec)
        return pack(br.interval, br.interval.lo, over, MaxMethod.ROOT_BRACKETING)

    if not window_holds(params):
        raise NoSignChange(f"maximizer window fails for {params}")
    left = max(F(2, p) - F(1, p - j), F(0))
    over = eval_P2(params, F(1, p), F(2, p), mode, prec)
    return pack(Interval(left, F(1, p)), F(1, p), over, MaxMethod.ENDPOINT_OVERESTIMATE)


# -- brute-force simplex oracle ---------------------------------------------

@dataclass(frozen=True)
class SimplexMax:
    params: SpaceParams
    grid: int
    argmax: tuple[Fraction, ...]
    value: Scalar
    n_points: int
    n_poles: int
    within_hypothesis: bool
    backend: str

    @property
    def shape_distance(self) -> Fraction:
        return shape_distance(self.params, self.argmax)

    @property
    def within_one_cell(self) -> bool:
        return self.shape_distance <= F(1, self.grid)


def lattice_size(k: int, total: int) -> int:
    """Number of m in Z>=0^k with sum(m) <= total."""
    return math.comb(total + k, k)


def brute_force_simplex_max(params: SpaceParams, grid_res: int) -> SimplexMax:
    """Exhaustive maximization of objective_f over {x in (Z/grid)^p : sum x <= 1}.

    Inputs violating j < dn/2 (or d = 1 with n = 2) are evaluated but flagged.
    """
    if params.dn > 8:
        raise BudgetExceeded(f"dn = {params.dn} exceeds the budget of 8")
    if not 1 <= grid_res <= 60:
        raise BudgetExceeded(f"grid = {grid_res} outside 1..60")
    p, j, d = params.p, params.j, params.d
    size = lattice_size(p, grid_res)
    if size > GRID_POINT_CAP:
        raise BudgetExceeded(f"{size} lattice points exceed the cap {GRID_POINT_CAP}")
    pair = [i if i < j else params.dn - 1 - i for i in range(p)]
    coef = [0.0 if i < j else float(d - 1) for i in range(p)]
    best_m, _, n_points, n_poles = grid.grid_max(pair, coef, 1.0 / grid_res, grid_res)
    x = tuple(F(m, grid_res) for m in best_m)
    value = objective_f(params, x, Mode.CERTIFIED)
    ok = 2 * j < params.dn and not (d == 1 and params.n == 2)
    return SimplexMax(params, grid_res, x, value, n_points, n_poles, ok, grid.BACKEND)


def shape_distance(params: SpaceParams, x: Sequence[RatLike]) -> Fraction:
    """Sup-distance from x to the nearest (sigma,..,sigma, lambda,..,lambda) on the constraint.

    Exact: the distance is a convex piecewise-linear function of lambda, so its
    minimum sits at an intersection of two of its linear pieces or at an end
    of the feasible range 0 <= lambda <= 1/(p-j).
    """
    xs = [as_rat(v) for v in x[: params.p]]
    p, j = params.p, params.j
    if j == 0:
        return max(abs(v - F(1, p)) for v in xs)
    # each piece is a + b*lambda
    lines = []
    for i, v in enumerate(xs):
        if i < j:
            # x_i - sigma(lambda) = x_i - 1/j + (p-j)/j * lambda
            a, b = v - F(1, j), F(p - j, j)
        else:
            a, b = v, F(-1)
        lines += [(a, b), (-a, -b)]

    def g(lam):
        return max(a + b * lam for a, b in lines)

    top = F(1, p - j)
    cands = {F(0), top}
    for (a1, b1), (a2, b2) in itertools.combinations(lines, 2):
        if b1 != b2:
            lam = (a2 - a1) / (b1 - b2)
            if 0 <= lam <= top:
                cands.add(lam)
    return min(g(lam) for lam in cands)


# -- sorted matching ---------------------------------------------------------

@dataclass(frozen=True)
class MatchingReport:
    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    identity_value: Fraction
    min_value: Fraction
    min_permutation: tuple[int, ...]
    max_value: Fraction
    n_permutations: int

    @property
    def identity_minimal(self) -> bool:
        return self.identity_value == self.min_value


def verify_sorted_matching(a: Sequence[RatLike], b: Sequence[RatLike]) -> MatchingReport:
    """Brute-force check that pairing ascending a with ascending b minimizes prod(a_i + b_pi(i))."""
    a = tuple(as_rat(v) for v in a)
    b = tuple(as_rat(v) for v in b)
    if len(a) != len(b):
        raise ParamError("a and b must have equal length")
    if len(a) > 8:
        raise BudgetExceeded("matching check is limited to length 8")
    if any(v < 0 for v in a + b) or any(v > 1 for v in a):
        raise ParamError("entries must be >= 0 and a_i <= 1")
    if list(a) != sorted(a) or list(b) != sorted(b):
        raise ParamError("a and b must be ascending")

    def value(perm):
        return math.prod((ai + b[k] for ai, k in zip(a, perm)), start=F(1))

    identity = tuple(range(len(a)))
    best_perm, best, worst, count = identity, value(identity), value(identity), 0
    for perm in itertools.permutations(identity):
        count += 1
        v = value(perm)
        if v < best:
            best, best_perm = v, perm
        worst = max(worst, v)
    return MatchingReport(a, b, value(identity), best, best_perm, worst, count)


# -- the per-block optimization and its thresholds ---------------------------

# (1-coefficient of sqrt(2), constant, denominator): threshold = (r*sqrt(2) + s)/t
_THRESHOLDS = {
    1: (F(2), F(-2), F(1)),
    2: (F(1, 2), F(0), F(1)),
    4: (F(2), F(1), F(7)),
    8: (F(4), F(3), F(23)),
}
_K_MIN = {1: 3, 2: 4, 4: 4, 8: 6}


def each_opt_threshold(d: int, mode=Mode.CERTIFIED, prec: int = DEFAULT_PREC) -> Scalar:
    """The sigma threshold below which the equal point is the block maximum."""
    mode = Mode.parse(mode)
    if d not in _THRESHOLDS:
        raise ParamError(f"d must be one of {tuple(_THRESHOLDS)}")
    r, s, t = _THRESHOLDS[d]
    if mode is Mode.FLOAT64:
        return Scalar.of_float((float(r) * math.sqrt(2) + float(s)) / float(t))
    return Scalar.of_interval((iv_sqrt(Interval.point(2), prec) * r + s) / t)


def reality_threshold(d: int, prec: int = DEFAULT_PREC) -> Interval:
    """2(sqrt(2) d + d - 2) / (d(d+4) - 4): where c_+- become real."""
    if d < 2:
        raise ParamError("c_+- are defined for d >= 2")
    return 2 * (iv_sqrt(Interval.point(2), prec) * d + (d - 2)) / (d * (d + 4) - 4)


def _le_irrational(x: Fraction, compute) -> bool:
    """Decide x <= t for an irrational t given by an enclosure factory."""
    prec = DEFAULT_PREC
    while True:
        iv = compute(prec)
        if x <= iv.lo:
            return True
        if x > iv.hi:
            return False
        prec *= 2


@dataclass(frozen=True)
class EachOptReport:
    d: int
    k: int
    sigma: Fraction
    threshold: Scalar
    hypothesis_holds: bool
    c0: Optional[Fraction]
    discriminant: Optional[Fraction]
    c_plus: Optional[Scalar]
    c_minus: Optional[Scalar]
    c_pm_real: Optional[bool]
    above_reality_threshold: Optional[bool]
    grid_resolution: Optional[int] = None
    grid_argmax: Optional[tuple[Fraction, ...]] = None
    grid_max_at_equal: Optional[bool] = None


def each_opt_structure(d: int, k: int, sigma: RatLike, mode=Mode.CERTIFIED,
                       grid_resolution: Optional[int] = None,
                       prec: int = DEFAULT_PREC) -> EachOptReport:
    """Thresholds, critical points and an optional grid check for the block problem.

    The block objective is sqrt(prod x) / prod(1 - x_i + (d-1) x_{k+1-i})
    subject to sum x <= sigma; its square is maximized on the lattice
    {sigma*m/res : sum m <= res}.
    """
    mode = Mode.parse(mode)
    sigma = as_rat(sigma)
    if d not in _THRESHOLDS:
        raise ParamError(f"d must be one of {tuple(_THRESHOLDS)}")
    if k < 2:
        raise ParamError("k must be >= 2")
    if not 0 < sigma <= 1:
        raise ParamError("sigma must lie in (0, 1]")
    thr = each_opt_threshold(d, mode, prec)
    r, s, t = _THRESHOLDS[d]
    below = _le_irrational(sigma, lambda pr: (iv_sqrt(Interval.point(2), pr) * r + s) / t)
    hyp = k >= _K_MIN[d] or below

    c0 = disc = cp = cm = real = above = None
    if d >= 2:
        c0 = sigma / 2
        disc = sigma * sigma * (d * d + 4 * d - 4) - 4 * sigma * (d - 2) - 4
        real = disc > 0
        above = not _le_irrational(sigma, lambda pr: reality_threshold(d, pr))
        if disc >= 0:
            if mode is Mode.FLOAT64:
                half = math.sqrt(disc) / (2 * d)
                cp, cm = Scalar.of_float(float(c0) + half), Scalar.of_float(float(c0) - half)
            else:
                half = iv_sqrt(Interval.point(disc), prec) / (2 * d)
                cp, cm = Scalar.of_interval(half + c0), Scalar.of_interval(c0 - half)

    report = EachOptReport(d, k, sigma, thr, hyp, c0, disc, cp, cm, real, above)
    if grid_resolution is None:
        return report
    if k > 6 or not 1 <= grid_resolution <= 40:
        raise BudgetExceeded("grid check needs k <= 6 and resolution <= 40")
    pair = [k - 1 - i for i in range(k)]
    coef = [float(d - 1)] * k
    best_m, _, _, _ = grid.grid_max(pair, coef, float(sigma) / grid_resolution, grid_resolution)
    xs = tuple(sigma * m / grid_resolution for m in best_m)
    cell = sigma / grid_resolution
    at_equal = max(abs(v - sigma / k) for v in xs) <= cell
    return EachOptReport(d, k, sigma, thr, hyp, c0, disc, cp, cm, real, above,
                         grid_resolution, xs, at_equal)
