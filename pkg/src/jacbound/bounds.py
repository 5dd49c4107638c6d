"""Closed-form Jacobian bound kernels.

Every function here evaluates an explicit formula either in float mode or in
certified mode.  Certified evaluations keep everything exact except a single
square root (or none), so enclosures are tight; float evaluations are written
in ratio form so that large exponents neither overflow nor underflow.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CertificationInconclusive, DomainError, ParamError, PoleError, UnsupportedCase
from .exact import (
    DEFAULT_PREC,
    MAX_PREC,
    Comparison,
    Interval,
    Mode,
    RatLike,
    Scalar,
    as_rat,
    certify_compare,
    evaluate,
    iv_sqrt,
    refine_until,
)

FIELD_DIMS = (1, 2, 4, 8)


@dataclass(frozen=True)
class SpaceParams:
    """Discrete data (d, n, j) with p = dn - j."""

    d: int
    n: int
    j: int
    p: int = field(init=False)

    def __post_init__(self):
        if self.d not in FIELD_DIMS:
            raise ParamError(f"d must be one of {FIELD_DIMS}, got {self.d}")
        if self.n < 2:
            raise ParamError(f"n must be >= 2, got {self.n}")
        if self.j < 0:
            raise ParamError(f"j must be >= 0, got {self.j}")
        p = self.d * self.n - self.j
        if p < 1:
            raise ParamError(f"p = dn - j must be >= 1, got {p}")
        object.__setattr__(self, "p", p)

    @property
    def dn(self) -> int:
        return self.d * self.n

    @property
    def in_theorem_range(self) -> bool:
        return self.j <= min(self.dn - 3, self.d)

    def require_theorem_range(self) -> None:
        if not self.in_theorem_range:
            raise ParamError(
                f"j = {self.j} violates j <= min(dn-3, d) = {min(self.dn - 3, self.d)}"
            )

    @property
    def is_exceptional(self) -> bool:
        return self.n == 2 and (self.d, self.j) in EXCEPTIONAL_TABLE


@dataclass(frozen=True)
class CubicPoly:
    c3: Fraction
    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __call__(self, x: RatLike) -> Fraction:
        x = as_rat(x)
        return ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Coefficients from the leading term down."""
        return (self.c3, self.c2, self.c1, self.c0)


class Formula(enum.Enum):
    GENERAL_CFM = "GeneralCFM"
    EXCEPTIONAL = "ExceptionalTable"
    GENERIC_BCG = "GenericBCG"


class Certification(enum.Enum):
    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class BoundReport:
    params: SpaceParams
    delta: Fraction
    value: Scalar
    formula: Formula
    certified_lt_one: Certification
    exact_form: str
    prec: Optional[int] = None


@dataclass(frozen=True)
class ExceptionalRow:
    """One n = 2 row: the P over-estimate, the Jacobian bound and root data."""

    p_bound: str
    jacobian: str
    root_bracket: Optional[tuple[Fraction, Fraction]]
    overestimate_point: Optional[tuple[Fraction, Fraction]]


F = Fraction

EXCEPTIONAL_TABLE: dict[tuple[int, int], ExceptionalRow] = {
    (2, 1): ExceptionalRow("1/2", "delta^3/(6*sqrt(3))", None, None),
    (4, 1): ExceptionalRow(
        "3^5*sqrt(13)*sqrt(37)/(2^3*11^6)",
        "3^5*sqrt(13)*sqrt(37)*delta^7/(sqrt(7)*2^3*7^3*11^6)",
        (F(4, 37), F(1, 9)),
        (F(1, 9), F(13, 37)),
    ),
    (8, 1): ExceptionalRow(
        "2^13*3^7*sqrt(3)*7^6*29^7*sqrt(17)/(5^28*11^14)",
        "2^13*7^6*29^7*sqrt(17)*delta^15/(sqrt(5)*5^35*11^14)",
        (F(1, 17), F(12, 203)),
        (F(12, 203), F(3, 17)),
    ),
    (8, 2): ExceptionalRow(
        "3^6*5^13/(2^22*17^12)",
        "3^6*5^13*delta^14/(2^29*7^7*17^12)",
        (F(1, 20), F(3, 50)),
        (F(3, 50), F(1, 5)),
    ),
    (8, 3): ExceptionalRow(
        "6*sqrt(6)*5^12*7^5/167^10",
        "6*sqrt(6)*5^12*7^5*delta^13/(sqrt(13)*13^6*167^10)",
        (F(1, 20), F(7, 125)),
        (F(7, 125), F(1, 6)),
    ),
}



def _scalar_sqrt_times(radicand: Fraction, factor: Fraction, mode: Mode, prec: int) -> Scalar:
    """factor * sqrt(radicand), with one rounding in certified mode."""
    if mode is Mode.FLOAT64:
        return Scalar.of_float(float(factor) * math.sqrt(radicand))
    # rescale by an even power of two so the absolute root error is a relative one
    shift = (radicand.denominator.bit_length() - radicand.numerator.bit_length()) // 2
    root = iv_sqrt(Interval.point(radicand * F(4) ** shift), prec) / F(2) ** shift
    return Scalar.of_interval(root * factor)


def _sqrt2_power(j: int, rest: Fraction, mode: Mode, prec: int) -> Scalar:
    """rest * 2^(j/2)."""
    if j % 2 == 0:
        v = rest * 2 ** (j // 2)
        return Scalar.of_float(float(v)) if mode is Mode.FLOAT64 else Scalar.of_interval(Interval.point(v))
    return _scalar_sqrt_times(F(2), rest * 2 ** (j // 2), mode, prec)


# -- P(lambda, sigma), P(lambda), Q(lambda) ---------------------------------

def eval_P2(params: SpaceParams, lam: RatLike, sigma: RatLike, mode=Mode.CERTIFIED,
            prec: int = DEFAULT_PREC) -> Scalar:
    """lambda^((p-j)/2) sigma^(j/2) / ((1+(d-2)lambda)^(p-j) (1-sigma)^j)."""
    mode = Mode.parse(mode)
    lam, sigma = as_rat(lam), as_rat(sigma)
    d, j, p = params.d, params.j, params.p
    if lam < 0 or sigma < 0:
        raise DomainError("lambda and sigma must be nonnegative")
    if sigma >= 1:
        raise DomainError(f"sigma must be < 1, got {sigma}")
    base = 1 + (d - 2) * lam
    if base <= 0:
        raise DomainError(f"1 + (d-2) lambda vanishes at lambda = {lam}")
    if mode is Mode.FLOAT64:
        lf, sf = float(lam), float(sigma)
        v = (math.sqrt(lf) / float(base)) ** (p - j) * (math.sqrt(sf) / (1 - sf)) ** j
        return Scalar.of_float(v)
    num = lam ** (p - j) * sigma ** j
    den = base ** (p - j) * (1 - sigma) ** j
    return _scalar_sqrt_times(num, 1 / den, mode, prec)


def sigma_of_lambda(params: SpaceParams, lam: RatLike) -> Fraction:
    """sigma on the constraint line (p-j) lambda + j sigma = 1."""
    if params.j < 1:
        raise DomainError("sigma is undefined when j = 0")
    return (1 - (params.p - params.j) * as_rat(lam)) / params.j


def eval_P_reduced_squared(params: SpaceParams, lam: RatLike) -> Fraction:
    """Exact P(lambda)^2 on the constraint line."""
    lam = as_rat(lam)
    d, j, p = params.d, params.j, params.p
    if j < 1:
        raise DomainError("the reduced P needs j >= 1")
    if lam < 0 or lam > 1:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    if lam * (p - j) > 1:
        raise DomainError(f"lambda (p-j) = {lam * (p - j)} > 1 gives a negative radicand")
    base = 1 + (d - 2) * lam
    if base <= 0:
        raise DomainError(f"1 + (d-2) lambda vanishes at lambda = {lam}")
    shifted = j - 1 + lam * (p - j)
    if shifted == 0:
        # j = 1, lambda = 0: cancel lambda^2 against the (lambda (p-1))^2 factor.
        if p < 3:
            raise DomainError(f"P has a pole at lambda = 0 when p = {p}")
        return F(1, (p - 1) ** 2) if p == 3 else F(0)
    num = j ** j * lam ** (p - j) * (1 - (p - j) * lam) ** j
    return num / (shifted ** (2 * j) * base ** (2 * (p - j)))


def eval_P_reduced(params: SpaceParams, lam: RatLike, mode=Mode.CERTIFIED,
                   prec: int = DEFAULT_PREC) -> Scalar:
    """P(lambda) = P(lambda, (1 - (p-j) lambda)/j) in closed form."""
    mode = Mode.parse(mode)
    sq = eval_P_reduced_squared(params, lam)
    if mode is Mode.FLOAT64:
        lam = as_rat(lam)
        d, j, p = params.d, params.j, params.p
        shifted = j - 1 + lam * (p - j)
        if shifted == 0:
            return Scalar.of_float(math.sqrt(sq))
        lf = float(lam)
        v = (
            j ** (j / 2)
            * (math.sqrt(lf) / (1 + (d - 2) * lf)) ** (p - j)
            * (math.sqrt(max(0.0, 1 - (p - j) * lf)) / float(shifted)) ** j
        )
        return Scalar.of_float(v)
    return _scalar_sqrt_times(sq, F(1), mode, prec)


def build_Q(params: SpaceParams) -> CubicPoly:
    """The cubic whose sign is the sign of dP^2/dlambda on (0, 1/(p-j))."""
    d, j, p = params.d, params.j, params.p
    if j < 1:
        raise DomainError("Q is defined for j >= 1")
    return CubicPoly(
        F(p * (d - 2) * (p - j)),
        F(j * (d - 2 - 2 * j * (d - 1)) + p * (d * (j - 2) + j + 4) - p * p),
        F(p * (2 - j) - j * (d + 1) + d - 2),
        F(j - 1),
    )


def eval_Q(params: SpaceParams, lam: RatLike) -> Fraction:
    return build_Q(params)(lam)


# -- Jacobian bounds --------------------------------------------------------

def general_formula_bound(params: SpaceParams, delta: RatLike, mode=Mode.CERTIFIED,
                          prec: int = DEFAULT_PREC) -> Scalar:
    """2^(j/2) delta^p / ((p-2)^j (p+d-2)^(p-j)), with no range restriction.

    Used directly only for out-of-range witnesses; jacobian_bound guards it.
    """
    mode = Mode.parse(mode)
    delta = as_rat(delta)
    d, j, p = params.d, params.j, params.p
    if delta <= 0:
        raise ParamError("delta must be positive")
    if p <= 2 or p - j < 0:
        raise ParamError(f"general formula needs p > 2 and p >= j (p={p}, j={j})")
    if mode is Mode.FLOAT64:
        df = float(delta)
        v = math.sqrt(2) ** j * (df / (p - 2)) ** j * (df / (p + d - 2)) ** (p - j)
        return Scalar.of_float(v)
    rest = (delta / (p - 2)) ** j * (delta / (p + d - 2)) ** (p - j)
    return _sqrt2_power(j, rest, mode, prec)


def _certify_lt_one(compute) -> tuple[Interval, Certification, int]:
    try:
        iv, used = refine_until(
            compute, lambda iv: certify_compare(iv, 1) is not Comparison.INCONCLUSIVE
        )
    except CertificationInconclusive:
        return compute(MAX_PREC), Certification.INCONCLUSIVE, MAX_PREC
    cmp = certify_compare(iv, 1)
    return iv, (Certification.YES if cmp is Comparison.LESS else Certification.NO), used


def jacobian_bound(params: SpaceParams, delta: RatLike, mode=Mode.CERTIFIED,
                   prec: int = DEFAULT_PREC) -> BoundReport:
    """Upper bound on Jac_{dn-j} of the barycenter map for critical exponent delta.

    n > 2 uses the general closed form; n = 2 uses the exceptional table and
    rejects (d, j) pairs outside it.  In certified mode the enclosure is
    refined (doubling from ``prec``) until the comparison with 1 is decided.
    """
    mode = Mode.parse(mode)
    delta = as_rat(delta)
    if delta <= 0:
        raise ParamError("delta must be positive")
    params.require_theorem_range()
    if params.n == 2:
        row = EXCEPTIONAL_TABLE.get((params.d, params.j))
        if row is None:
            raise UnsupportedCase(
                f"n = 2 bound only exists for (d, j) in {sorted(EXCEPTIONAL_TABLE)}, "
                f"got ({params.d}, {params.j})"
            )
        formula, exact_form = Formula.EXCEPTIONAL, row.jacobian

        def compute(pr: int, m: Mode = Mode.CERTIFIED):
            return evaluate(row.jacobian, {"delta": delta}, m, pr)
    else:
        formula = Formula.GENERAL_CFM
        d, j, p = params.d, params.j, params.p
        exact_form = f"2^({j}/2)*delta^{p}/({p - 2}^{j}*{p + d - 2}^{p - j})"

        def compute(pr: int, m: Mode = Mode.CERTIFIED):
            s = general_formula_bound(params, delta, m, pr)
            return s.value

    if mode is Mode.FLOAT64:
        value = Scalar.of_float(compute(prec, Mode.FLOAT64))
        return BoundReport(params, delta, value, formula, Certification.INCONCLUSIVE,
                           exact_form.replace("delta", str(delta)))
    iv, cert, used = _certify_lt_one(lambda pr: compute(max(pr, prec)))
    return BoundReport(params, delta, Scalar.of_interval(iv), formula, cert,
                       exact_form.replace("delta", f"({delta})"), used)


def bcg_bound(params: SpaceParams, delta: RatLike, mode=Mode.CERTIFIED,
              prec: int = DEFAULT_PREC) -> Scalar:
    """The curvature <= -1 bound (delta / (dn-j-1))^(dn-j)."""
    mode = Mode.parse(mode)
    delta = as_rat(delta)
    p = params.p
    if p - 1 <= 0:
        raise ParamError("bcg bound needs dn - j - 1 > 0")
    if delta <= 0:
        raise ParamError("delta must be positive")
    v = (delta / (p - 1)) ** p
    if mode is Mode.FLOAT64:
        return Scalar.of_float((float(delta) / (p - 1)) ** p)
    return Scalar.of_interval(Interval.point(v))


# -- the sequence C_n -------------------------------------------------------

def seq_C(n: int, mode=Mode.CERTIFIED, prec: int = DEFAULT_PREC) -> Scalar:
    """C_n = (4n/(4n+1))^(4n-2) * sqrt(2) * 4n / (4n-3)."""
    mode = Mode.parse(mode)
    if n < 1:
        raise ParamError("n must be >= 1")
    m = 4 * n
    if mode is Mode.FLOAT64:
        return Scalar.of_float((m / (m + 1)) ** (m - 2) * math.sqrt(2) * m / (m - 3))
    rest = F(m, m + 1) ** (m - 2) * F(m, m - 3)
    return _scalar_sqrt_times(F(2), rest, mode, prec)


# sqrt(2)/e = 0.52026009502288...; floor at 11 digits, ceiling at 12 digits.
_SEQ_C_LIMIT = Interval(F(52026009502, 10 ** 11), F(520260095023, 10 ** 12))


def seq_C_limit() -> Interval:
    """Hardcoded rational enclosure of lim C_n = sqrt(2)/e."""
    return _SEQ_C_LIMIT


# -- the first-optimization objective ---------------------------------------

def pair_index(params: SpaceParams, i: int) -> int:
    """0-based partner of coordinate i (0-based) under i -> nd+1-i (1-based)."""
    return params.dn - 1 - i


def objective_f(params: SpaceParams, x: Sequence, mode=Mode.CERTIFIED) -> Scalar:
    """x_1...x_p / (prod_{i>j} (1 - x_i + (d-1) x_{nd+1-i})^2 prod_{i<=j} (1 - x_i)^2).

    ``x`` may have length p or dn; the pairing never reaches past index p.
    """
    mode = Mode.parse(mode)
    d, j, p = params.d, params.j, params.p
    if len(x) not in (p, params.dn):
        raise ParamError(f"x must have length p={p} or dn={params.dn}, got {len(x)}")
    if mode is Mode.FLOAT64:
        xs = [float(v) for v in x[:p]]
    else:
        xs = [as_rat(v) for v in x[:p]]
    if any(v < 0 for v in xs):
        raise DomainError("objective_f needs nonnegative coordinates")
    num = 1 if mode is Mode.CERTIFIED else 1.0
    den = 1 if mode is Mode.CERTIFIED else 1.0
    for i in range(p):
        num *= xs[i]
        if i < j:
            fac = 1 - xs[i]
        else:
            fac = 1 - xs[i] + (d - 1) * xs[pair_index(params, i)]
        if fac == 0:
            raise PoleError(f"denominator factor {i + 1} vanishes")
        den *= fac * fac
    if mode is Mode.FLOAT64:
        return Scalar.of_float(num / den)
    return Scalar.of_interval(Interval.point(F(num) / den))
