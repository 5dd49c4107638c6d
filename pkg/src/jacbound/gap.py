"""Critical-exponent gap, homology-vanishing decisions and critical-exponent lower bounds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np

from .bounds import BoundReport, Certification, SpaceParams, jacobian_bound
from .errors import NotFoundWithinCap, ParamError, UnsupportedField
from .exact import DEFAULT_PREC, Interval, Mode, RatLike, Scalar, as_rat, iv_root

EPSILON_SEARCH_CAP = 10 ** 6
_FLOAT_SLACK = 1e-9

# private interval context so the working precision does not leak into mpmath.iv
_IV = type(mpmath.iv)()
_IV.prec = 160

_SCOPE_MESSAGE = (
    "no vanishing statement for d in {1, 2}: the corresponding statements are false "
    "for the real and complex hyperbolic groups, so there is no critical-exponent gap to use"
)


@dataclass(frozen=True)
class DeltaBound:
    d: int
    n: int
    is_lattice: bool
    delta_bound: Fraction


def corlette_delta_bound(d: int, n: int, is_lattice: bool) -> DeltaBound:
    """Exact value (lattice) or upper bound (non-lattice) of the critical exponent."""
    if d in (1, 2):
        raise UnsupportedField(f"no critical-exponent gap for d = {d}")
    if d == 4:
        if n < 2:
            raise ParamError("n must be >= 2")
        value = 4 * n + 2 if is_lattice else 4 * n
    elif d == 8:
        if n != 2:
            raise ParamError("the octonionic case needs n = 2")
        value = 22 if is_lattice else 16
    else:
        raise ParamError(f"d must be 4 or 8, got {d}")
    return DeltaBound(d, n, is_lattice, Fraction(value))


@dataclass(frozen=True)
class VanishingReport:
    d: int
    n: int
    delta_used: Fraction
    per_degree: list[tuple[int, BoundReport]]
    vanishing_degrees: frozenset[int]


def vanishing_degrees(d: int, n: int, mode=Mode.CERTIFIED,
                      prec: int = DEFAULT_PREC) -> VanishingReport:
    """Homology degrees whose Jacobian bound at the non-lattice delta is certified < 1.

    The decision always uses certified evaluation.  In float mode the per-degree
    reports carry float values, but the vanishing set still comes from the
    certified comparison.
    """
    mode = Mode.parse(mode)
    if d in (1, 2):
        raise UnsupportedField(_SCOPE_MESSAGE)
    delta = corlette_delta_bound(d, n, is_lattice=False).delta_bound
    if d == 4:
        js = (1,) if n == 2 else (1, 2)
    else:
        js = (1, 2, 3)
    rows, vanish = [], set()
    for j in js:
        params = SpaceParams(d, n, j)
        cert = jacobian_bound(params, delta, Mode.CERTIFIED, prec)
        if cert.certified_lt_one is Certification.YES:
            vanish.add(params.p)
        report = cert if mode is Mode.CERTIFIED else jacobian_bound(params, delta, mode, prec)
        rows.append((params.p, report))
    return VanishingReport(d, n, delta, rows, frozenset(vanish))


@dataclass(frozen=True)
class HomDimQuery:
    d: int
    n: int
    hd: int

    def check(self) -> None:
        d, n, hd = self.d, self.n, self.hd
        if d not in (1, 2, 4, 8):
            raise ParamError(f"d must be one of (1, 2, 4, 8), got {d}")
        if n <= 2:
            raise ParamError(f"needs n > 2, got n = {n}")
        if hd <= d * n - d:
            raise ParamError(f"needs hd > dn - d = {d * n - d}, got hd = {hd}")
        if hd > d * n:
            raise ParamError(f"needs hd <= dn = {d * n}, got hd = {hd}")
        if hd < 3:
            raise ParamError("needs hd >= 3")


def _cfm_pieces(q: HomDimQuery):
    # bound = (hd-2+d) * (r^(2j) / 2^j)^(1/(2 hd)),  r = (hd-2)/(hd-2+d),  j = dn - hd
    j = q.d * q.n - q.hd
    top = q.hd - 2 + q.d
    r = Fraction(q.hd - 2, top)
    return j, top, r ** (2 * j) / 2 ** j


def critical_exponent_lower_bound(q: HomDimQuery, mode=Mode.CERTIFIED,
                                  prec: int = DEFAULT_PREC) -> Scalar:
    """((hd-2)/sqrt 2)^(dn/hd - 1) * (hd-2+d)^(2 - dn/hd).

    Evaluated as (hd-2+d) times a (2 hd)-th root of an exact rational, so the
    certified enclosure needs only integer roots.
    """
    mode = Mode.parse(mode)
    q.check()
    j, top, inner = _cfm_pieces(q)
    if mode is Mode.FLOAT64:
        return Scalar.of_float(top * float(inner) ** (1.0 / (2 * q.hd)))
    if j == 0:
        return Scalar.of_interval(Interval.point(top))
    # the root is below 1, so an absolute error of 2^-prec suffices after scaling by top
    bits = prec + top.bit_length()
    return Scalar.of_interval(iv_root(Interval.point(inner), 2 * q.hd, bits) * top)


def kapovich_bound(hd: int) -> Fraction:
    if hd < 1:
        raise ParamError("hd must be >= 1")
    return Fraction(hd - 1)


def _float_margins(d: int, eps: float, ns: np.ndarray) -> np.ndarray:
    """min over admissible hd of bound(hd) - (hd - 2 + d - eps), per n (float)."""
    worst = np.full(ns.shape, np.inf)
    for j in range(d):
        hd = (d * ns - j).astype(np.float64)
        top = hd - 2 + d
        t = (j / hd) * (np.log(hd - 2) - np.log(top)) - j * np.log(2.0) / (2 * hd)
        worst = np.minimum(worst, top * np.expm1(t) + eps)
    return worst


def _certified_margin_ok(d: int, n: int, eps: Fraction) -> Optional[bool]:
    """Decide bound(hd) >= hd - 2 + d - eps for every admissible hd, rigorously.

    Uses interval logarithms: the claim is
    (2j ln r - j ln 2) / (2 hd) >= ln(1 - eps/(hd-2+d)).
    Returns None if undecided at the working precision.
    """
    iv = _IV
    for j in range(d):
        hd = d * n - j
        top = hd - 2 + d
        if j == 0:
            continue
        lhs = (2 * j * iv.log(iv.mpf(hd - 2) / top) - j * iv.log(2)) / (2 * hd)
        u = Fraction(top) - eps
        if u <= 0:
            continue
        rhs = iv.log(iv.mpf(u.numerator) / (u.denominator * top))
        if lhs.a >= rhs.b:
            continue
        if lhs.b < rhs.a:
            return False
        return None
    return True


def epsilon_threshold(d: int, epsilon: RatLike, cap: int = EPSILON_SEARCH_CAP) -> int:
    """Smallest n > 2 with bound(hd) >= hd - 2 + d - eps for every hd in (dn - d, dn]."""
    if d not in (2, 4, 8):
        raise ParamError(f"d must be 2, 4 or 8, got {d}")
    eps = as_rat(epsilon)
    if eps <= 0:
        raise ParamError("epsilon must be positive")
    ns = np.arange(3, cap + 1, dtype=np.int64)
    margins = _float_margins(d, float(eps), ns)
    for idx in np.flatnonzero(margins >= -_FLOAT_SLACK):
        n = int(ns[idx])
        ok = _certified_margin_ok(d, n, eps)
        if ok is None:
            raise NotFoundWithinCap(f"margin at n = {n} is too close to zero to certify")
        if ok:
            return n
    raise NotFoundWithinCap(
        f"no n <= {cap} satisfies the bound for d = {d}, epsilon = {eps}"
    )
