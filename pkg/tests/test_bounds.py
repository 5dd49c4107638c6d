import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import encloses_within
from jacbound.bounds import (
    EXCEPTIONAL_TABLE,
    Certification,
    Formula,
    SpaceParams,
    bcg_bound,
    build_Q,
    eval_P2,
    eval_P_reduced,
    eval_P_reduced_squared,
    general_formula_bound,
    jacobian_bound,
    objective_f,
    seq_C,
    seq_C_limit,
    sigma_of_lambda,
)
from jacbound.errors import DomainError, ParamError, PoleError, UnsupportedCase
from jacbound.exact import Interval, Mode, evaluate, iv_sqrt


@st.composite
def theorem_params(draw, max_n=20):
    d = draw(st.sampled_from([1, 2, 4, 8]))
    n = draw(st.integers(min_value=2 if d > 1 else 4, max_value=max_n))
    j = draw(st.integers(min_value=1, max_value=min(d, d * n - 3)))
    # lambda needs at least one coordinate: p - j = dn - 2j > 0
    if 2 * j >= d * n:
        j = (d * n - 1) // 2
    return SpaceParams(d, n, j)


class TestSpaceParams:
    def test_derived_degree(self):
        assert SpaceParams(4, 3, 1).p == 11

    @pytest.mark.parametrize("d,n,j", [(3, 2, 1), (4, 1, 0), (2, 2, -1), (1, 2, 3)])
    def test_invalid(self, d, n, j):
        with pytest.raises(ParamError):
            SpaceParams(d, n, j)

    def test_theorem_range(self):
        assert SpaceParams(8, 2, 8).in_theorem_range
        assert not SpaceParams(4, 2, 6).in_theorem_range
        assert SpaceParams(4, 2, 1).is_exceptional
        assert not SpaceParams(4, 3, 1).is_exceptional


class TestQ:
    @given(theorem_params(max_n=40))
    def test_endpoint_identities(self, params):
        Q = build_Q(params)
        d, j, p = params.d, params.j, params.p
        assert Q(0) == j - 1
        assert Q(F(1, p)) == F(-2 * (d - 1) * j * j, p * p)

    def test_degenerate_case_is_pure_square(self):
        assert build_Q(SpaceParams(2, 2, 1)).coeffs == (0, -2, 0, 0)

    @given(theorem_params(max_n=12), st.integers(min_value=1, max_value=99))
    @settings(max_examples=80)
    def test_sign_matches_derivative_of_P_squared(self, params, k):
        top = F(1, params.p - params.j)
        lam = top * F(k, 100)
        q = build_Q(params)(lam)
        h = top / 10 ** 9
        diff = eval_P_reduced_squared(params, lam + h) - eval_P_reduced_squared(params, lam - h)
        if abs(q) > F(1, 10 ** 4) * max(1, abs(build_Q(params)(top))):
            assert (diff > 0) == (q > 0)

    def test_j_zero_rejected(self):
        with pytest.raises(DomainError):
            build_Q(SpaceParams(4, 2, 0))


class TestP:
    @given(theorem_params(max_n=10), st.integers(min_value=1, max_value=99))
    @settings(max_examples=50)
    def test_reduced_equals_two_variable_form(self, params, k):
        lam = F(k, 100) / (params.p - params.j)
        sig = sigma_of_lambda(params, lam)
        if sig >= 1:
            return
        a = eval_P_reduced(params, lam).interval
        b = eval_P2(params, lam, sig).interval
        assert a.lo <= b.hi and b.lo <= a.hi
        assert math.isclose(float(eval_P_reduced(params, lam, "float")), float(b.mid), rel_tol=1e-9)

    def test_sigma_of_lambda_on_constraint(self):
        params = SpaceParams(4, 3, 2)
        lam = F(1, 20)
        assert (params.p - params.j) * lam + params.j * sigma_of_lambda(params, lam) == 1

    def test_j1_limit_at_zero(self):
        assert eval_P_reduced_squared(SpaceParams(1, 4, 1), 0) == F(1, 4)
        assert eval_P_reduced_squared(SpaceParams(2, 3, 1), 0) == 0

    def test_domain(self):
        with pytest.raises(DomainError):
            eval_P2(SpaceParams(4, 3, 1), F(1, 10), 1)
        with pytest.raises(DomainError):
            eval_P_reduced_squared(SpaceParams(4, 3, 1), F(1, 2))


class TestJacobianBound:
    @pytest.mark.parametrize("d,j,delta,published", [
        (4, 1, 8, oracles.PUBLISHED_J421),
        (8, 1, 16, oracles.PUBLISHED_J821),
        (8, 2, 16, oracles.PUBLISHED_J822),
        (8, 3, 16, oracles.PUBLISHED_J823),
    ])
    def test_exceptional_constants(self, d, j, delta, published):
        rep = jacobian_bound(SpaceParams(d, 2, j), delta)
        assert rep.formula is Formula.EXCEPTIONAL
        assert rep.certified_lt_one is Certification.YES
        assert encloses_within(rep.value.interval, published, oracles.PUBLISHED_TOL)

    def test_reference_digits(self):
        rep = jacobian_bound(SpaceParams(4, 2, 1), 8, prec=256)
        assert encloses_within(rep.value.interval, oracles.REF_J421, F(1, 10 ** 38))

    @pytest.mark.parametrize("n", range(3, 9))
    def test_quaternionic_bound_is_C_n(self, n):
        rep = jacobian_bound(SpaceParams(4, n, 1), 4 * n)
        c = seq_C(n).interval
        assert rep.formula is Formula.GENERAL_CFM
        assert rep.value.interval.lo <= c.hi and c.lo <= rep.value.interval.hi

    def test_exact_form_round_trips(self):
        for params, delta in [(SpaceParams(8, 2, 2), 16), (SpaceParams(4, 5, 1), F(40, 3))]:
            rep = jacobian_bound(params, delta)
            iv = evaluate(rep.exact_form, prec=200)
            assert iv.lo <= rep.value.interval.hi and rep.value.interval.lo <= iv.hi

    def test_float_mode_agrees_and_is_uncertified(self):
        params = SpaceParams(8, 2, 3)
        f = jacobian_bound(params, 16, Mode.FLOAT64)
        c = jacobian_bound(params, 16)
        assert f.certified_lt_one is Certification.INCONCLUSIVE
        assert math.isclose(float(f.value), float(c.value), rel_tol=1e-12)

    def test_preconditions(self):
        with pytest.raises(UnsupportedCase):
            jacobian_bound(SpaceParams(4, 2, 2), 8)
        with pytest.raises(ParamError):
            jacobian_bound(SpaceParams(4, 2, 6), 8)
        with pytest.raises(ParamError):
            jacobian_bound(SpaceParams(4, 3, 1), 0)

    @pytest.mark.parametrize("n", range(3, 11))
    def test_j2_bound_is_insufficient(self, n):
        v = general_formula_bound(SpaceParams(4, n, 2), 4 * n).interval
        assert v.lo > 2

    def test_octonionic_j4_is_insufficient(self):
        assert general_formula_bound(SpaceParams(8, 2, 4), 16).interval.lo > 1

    @given(theorem_params(max_n=8), st.fractions(min_value=1, max_value=40, max_denominator=7))
    @settings(max_examples=40)
    def test_general_formula_below_generic_when_delta_large(self, params, delta):
        # the curvature <= -1 bound is exact and positive; both scale like delta^p
        g = bcg_bound(params, delta).interval
        assert g.is_point and g.lo == (delta / (params.p - 1)) ** params.p


class TestSeqC:
    def test_known_values(self):
        assert encloses_within(seq_C(3).interval, oracles.REF_C3, F(1, 10 ** 35))
        assert encloses_within(seq_C(5).interval, oracles.REF_C5, F(1, 10 ** 35))
        assert seq_C(2).interval.lo > 1

    def test_decreasing_first_thirty(self):
        vals = [seq_C(n).interval for n in range(1, 31)]
        assert all(b.hi < a.lo for a, b in zip(vals, vals[1:]))

    def test_limit_enclosure(self):
        lim = seq_C_limit()
        assert lim.width < F(1, 10 ** 11)
        assert F(oracles.PUBLISHED_LIMIT) in lim
        # 1/e from alternating partial sums of sum (-1)^k / k!
        s, term, parts = F(0), F(1), []
        for k in range(40):
            s += term
            parts.append(s)
            term = -term / (k + 1)
        inv_e = Interval(min(parts[-2:]), max(parts[-2:]))
        rig = iv_sqrt(Interval.point(2), 200) * inv_e
        assert lim.lo <= rig.lo and rig.hi <= lim.hi


class TestObjective:
    @given(theorem_params(max_n=4), st.integers(min_value=1, max_value=9))
    @settings(max_examples=30)
    def test_shape_point_equals_P_squared(self, params, k):
        lam = F(k, 10) / (params.p - params.j)
        sig = sigma_of_lambda(params, lam)
        if sig >= 1 or (params.d == 1 and params.n == 2):
            return
        x = [sig] * params.j + [lam] * (params.p - params.j)
        f = objective_f(params, x).interval
        p2 = eval_P2(params, lam, sig, prec=200).interval
        sq = p2 * p2
        assert sq.lo <= f.lo <= sq.hi

    def test_accepts_full_length_vector(self):
        params = SpaceParams(2, 2, 1)
        x = [F(1, 2), F(1, 4), F(1, 4)]
        assert objective_f(params, x) == objective_f(params, x + [F(9, 10)])

    def test_pole(self):
        with pytest.raises(PoleError):
            objective_f(SpaceParams(2, 2, 1), [1, 0, 0])
        with pytest.raises(ParamError):
            objective_f(SpaceParams(2, 2, 1), [0, 0])


def test_exceptional_table_consistency():
    for (d, j), row in EXCEPTIONAL_TABLE.items():
        params = SpaceParams(d, 2, j)
        p = params.p
        # Jacobian form = P bound * delta^p / p^(p/2)
        delta = F(7, 3)
        lhs = evaluate(row.jacobian, {"delta": delta}, prec=200)
        rhs = evaluate(f"({row.p_bound})*delta^{p}/{p}^({p}/2)", {"delta": delta}, prec=200)
        assert abs(lhs.mid - rhs.mid) <= (lhs.width + rhs.width) * 2 + F(1, 10 ** 50)
