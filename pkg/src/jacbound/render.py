"""Decimal rendering of certified values and the JSON/CSV/SVG writers used by the CLI."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any, Optional, Sequence

import mpmath

from .exact import Interval, Scalar

ENDPOINT_DIGITS = 25
MAX_DIGITS = 15


def _exponent10(x: Fraction) -> int:
    """floor(log10 |x|) for nonzero x, computed exactly."""
    x = abs(x)
    e = len(str(x.numerator)) - len(str(x.denominator))
    # correct the digit-count estimate by at most one step either way
    while Fraction(10) ** e > x:
        e -= 1
    while Fraction(10) ** (e + 1) <= x:
        e += 1
    return e


def _fixed(units: int, k: int) -> str:
    """units * 10^-k as a plain decimal string with exactly max(k, 0) decimals."""
    if k <= 0:
        return str(units * 10 ** (-k))
    sign = "-" if units < 0 else ""
    s = str(abs(units)).rjust(k + 1, "0")
    return f"{sign}{s[:-k]}.{s[-k:]}"


def exact_decimal(x: Fraction, max_len: int = 40) -> Optional[str]:
    """Terminating decimal expansion of x, or None if it does not terminate briefly."""
    den, k = x.denominator, 0
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den != 1:
        return None
    while (x * 10 ** k).denominator != 1:
        k += 1
    if k > max_len:
        return None
    return _fixed(int(x * 10 ** k), k)


def round_decimals(iv: Interval, decimals: int) -> Optional[str]:
    """Common correctly rounded value of every point of iv at a fixed number of decimals."""
    scale = Fraction(10) ** decimals
    a, b = round(iv.lo * scale), round(iv.hi * scale)
    return _fixed(a, decimals) if a == b else None


def correctly_rounded(iv: Interval, digits: int = MAX_DIGITS) -> Optional[str]:
    """Longest decimal (<= digits significant) that every point of iv rounds to.

    Rounding is monotone, so if both endpoints round to the same string the
    unknown exact value does too.
    """
    if iv.is_point:
        exact = exact_decimal(iv.lo)
        if exact is not None:
            return exact
    ref = iv.mid if iv.mid != 0 else (iv.hi if iv.hi != 0 else iv.lo)
    if ref == 0:
        return "0"
    e = _exponent10(ref)
    for sig in range(digits, 0, -1):
        k = max(sig - 1 - e, 0)
        s = round_decimals(iv, k)
        if s is not None:
            return s
    return None


def outward_decimal(x: Fraction, up: bool, digits: int = ENDPOINT_DIGITS) -> str:
    """x rounded toward +inf (up) or -inf to ``digits`` significant digits."""
    if x == 0:
        return "0"
    exact = exact_decimal(x, max_len=digits + 5)
    if exact is not None and len(exact.replace("-", "").replace(".", "").lstrip("0")) <= digits:
        return exact
    k = max(digits - 1 - _exponent10(x), 0)
    scaled = x * 10 ** k
    units = math.ceil(scaled) if up else math.floor(scaled)
    return _fixed(units, k)


def scalar_json(s: Scalar, exact_form: Optional[str] = None) -> dict[str, Any]:
    if s.certified:
        iv = s.interval
        out = {
            "decimal": correctly_rounded(iv),
            "lo": outward_decimal(iv.lo, up=False),
            "hi": outward_decimal(iv.hi, up=True),
            "certified": True,
        }
    else:
        out = {"decimal": repr(float(s.value)), "certified": False}
    if exact_form is not None:
        out["exact_form"] = exact_form
    return out


def rational_json(x: Fraction) -> dict[str, Any]:
    return {"decimal": correctly_rounded(Interval.point(x)), "exact": str(x), "certified": True}


def dumps(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def mp_to_interval(x) -> Interval:
    """Exact rational Interval from an mpmath interval."""

    def rat(v) -> Fraction:
        man, exp = mpmath.mpf(v).man_exp
        return Fraction(int(man)) * Fraction(2) ** int(exp)

    return Interval(rat(x.a), rat(x.b))


# -- SVG ----------------------------------------------------------------------

def line_chart_svg(points: Sequence[tuple[int, float]], refs: Sequence[tuple[float, str]],
                   title: str, width: int = 640, height: int = 400) -> str:
    """Self-contained SVG line chart with horizontal reference lines and linear axes."""
    left, right, top, bottom = 60, 20, 40, 50
    xs = [p[0] for p in points]
    ys = [p[1] for p in points] + [r[0] for r in refs]
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x1 = x0 + 1
    y0, y1 = min(0.0, min(ys)), max(ys) * 1.05
    pw, ph = width - left - right, height - top - bottom

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + (1 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle" font-size="13">{title}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{top + ph}" x2="{sx(t):.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{top + ph + 16}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{left - 4}" y1="{sy(t):.2f}" x2="{left}" y2="{sy(t):.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 6}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle">n</text>')
    for y, label in refs:
        out.append(
            f'<line x1="{left}" y1="{sy(y):.2f}" x2="{left + pw}" y2="{sy(y):.2f}" '
            f'stroke="gray" stroke-dasharray="5,4"/>'
        )
        out.append(f'<text x="{left + pw - 4}" y="{sy(y) - 4:.2f}" text-anchor="end" fill="gray">{label}</text>')
    path = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in points)
    out.append(f'<polyline points="{path}" fill="none" stroke="steelblue" stroke-width="1.5"/>')
    for x, y in points:
        out.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2" fill="steelblue"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    n = int(math.floor((hi - first) / step + 1e-9)) + 1
    return [round(first + i * step, 10) for i in range(n)]
