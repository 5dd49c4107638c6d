from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacbound.errors import (
    CertificationInconclusive,
    DivisionByIntervalContainingZero,
    NegativeBaseFractionalExponent,
    NegativeRadicand,
    ZeroToNegativePower,
)
from jacbound.exact import (
    Comparison,
    Interval,
    Mode,
    Scalar,
    as_rat,
    certify_compare,
    evaluate,
    iroot,
    iv_arith,
    iv_pow,
    iv_root,
    iv_rpow,
    iv_sqrt,
    refine_until,
)

rats = st.fractions(min_value=-50, max_value=50, max_denominator=1000)
pos_rats = st.fractions(min_value=F(1, 1000), max_value=1000, max_denominator=1000)


def intervals(elems=rats):
    return st.tuples(elems, elems).map(lambda t: Interval(min(t), max(t)))


def test_as_rat_accepts_exact_forms():
    assert as_rat("16/3") == F(16, 3)
    assert as_rat("0.85") == F(17, 20)
    assert as_rat(8) == 8
    with pytest.raises(TypeError):
        as_rat(0.5)
    with pytest.raises(ValueError):
        as_rat("pi")


def test_interval_rejects_reversed_endpoints():
    with pytest.raises(ValueError):
        Interval(1, 0)


@given(intervals(), intervals(), rats, rats)
def test_arithmetic_contains_pointwise_results(a, b, s, t):
    x = a.lo + (a.hi - a.lo) * (s % 1)
    y = b.lo + (b.hi - b.lo) * (t % 1)
    assert (x + y) in a + b
    assert (x - y) in a - b
    assert (x * y) in a * b
    if not (b.lo <= 0 <= b.hi):
        assert (x / y) in a / b


def test_division_by_interval_containing_zero():
    with pytest.raises(DivisionByIntervalContainingZero):
        Interval(1, 2) / Interval(-1, 1)
    with pytest.raises(ZeroDivisionError):
        iv_arith("div", Interval(1, 1), Interval(0, 0))


@given(st.integers(min_value=0, max_value=10 ** 40), st.integers(min_value=1, max_value=9))
def test_iroot_is_floor_root(n, k):
    r = iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


@given(pos_rats, st.integers(min_value=2, max_value=7), st.sampled_from([32, 64, 128]))
def test_root_enclosure_is_tight(x, k, prec):
    iv = iv_root(Interval.point(x), k, prec)
    assert iv.lo ** k <= x <= iv.hi ** k
    assert iv.width <= F(1, 2 ** prec)


def test_perfect_powers_give_point_roots():
    assert iv_sqrt(Interval.point(F(9, 4))) == Interval.point(F(3, 2))
    assert iv_root(Interval.point(F(1, 27)), 3).is_point


def test_sqrt2_digits():
    iv = iv_sqrt(Interval.point(2), 200)
    floor50 = F("1.41421356237309504880168872420969807856967187537694")
    assert floor50 <= iv.lo and iv.hi <= floor50 + F(1, 10 ** 50)


def test_domain_errors():
    with pytest.raises(NegativeRadicand):
        iv_sqrt(Interval(-1, 1))
    with pytest.raises(NegativeBaseFractionalExponent):
        iv_rpow(Interval(-2, -1), F(1, 3))
    with pytest.raises(ZeroToNegativePower):
        iv_rpow(Interval(0, 1), -1)
    with pytest.raises(ValueError):
        iv_pow(Interval.point(2), F(1, 3))


@given(pos_rats, st.fractions(min_value=-4, max_value=4, max_denominator=6))
@settings(max_examples=60)
def test_rational_power_enclosure(x, e):
    iv = iv_rpow(Interval.point(x), e, 64)
    ref = float(x) ** float(e)
    assert float(iv.lo) <= ref * (1 + 1e-12) and ref * (1 - 1e-12) <= float(iv.hi)


def test_certify_compare_three_way():
    assert certify_compare(Interval(F(1, 3), F(1, 2)), 1) is Comparison.LESS
    assert certify_compare(Interval(1, 2), 1) is Comparison.GREATER_EQ
    assert certify_compare(Interval(F(1, 2), 2), 1) is Comparison.INCONCLUSIVE


def test_refine_until_doubles_then_gives_up():
    seen = []

    def compute(prec):
        seen.append(prec)
        return iv_sqrt(Interval.point(2), prec)

    # decided once width drops below 2^-300
    iv, used = refine_until(compute, lambda iv: iv.width < F(1, 2 ** 300))
    assert seen == [128, 256, 512] and used == 512
    with pytest.raises(CertificationInconclusive):
        refine_until(lambda p: Interval(0, 2), lambda iv: False, max_prec=512)


def test_scalar_modes():
    s = Scalar.of_interval(Interval(1, 2))
    assert s.certified and s.lo == 1 and s.hi == 2
    f = Scalar.of_float(0.5)
    assert not f.certified and float(f) == 0.5
    with pytest.raises(TypeError):
        f.interval
    assert Mode.parse("float") is Mode.FLOAT64
    assert Mode.parse("Certified") is Mode.CERTIFIED


class TestExpr:
    def test_integer_and_sqrt_forms(self):
        iv = evaluate("3^5*sqrt(13)*sqrt(37)/(2^3*11^6)", prec=200)
        ref = 3 ** 5 * 13 ** 0.5 * 37 ** 0.5 / (2 ** 3 * 11 ** 6)
        assert abs(float(iv.mid) - ref) < 1e-15
        assert iv.width < F(1, 10 ** 40)

    def test_env_and_rational_exponent(self):
        iv = evaluate("(x^2)^(1/2) + 1", {"x": F(3, 2)})
        assert iv == Interval.point(F(5, 2))
        assert evaluate("delta^7", {"delta": 8}, Mode.FLOAT64) == 8.0 ** 7

    @pytest.mark.parametrize("bad", ["__import__('os')", "2.5*3", "x.y", "max(1,2)"])
    def test_rejects_other_syntax(self, bad):
        with pytest.raises((ValueError, KeyError)):
            evaluate(bad, {"x": 1})
