"""Trace functions Psi, F and u_V against closed forms typed in from the displays."""
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qtrace import trace
from qtrace.field import ONE, XI, Y, ZERO, FracFn, PrefactoredFn, frac_eq, qpow, series_expand
from qtrace.trace import (ReconstructionFailed, closed_F_sl2, closed_psi_sl2, F_build, is_laurent_polynomial,
                          is_symmetric, psi_trace, qkz_limit_check, q_inverse_symmetry_check,
                          reconstruct_rational, u_closed, u_from_F, u_function)
from qtrace.uq import irrep

q = qpow(1)


def display_example1():
    # q^(lam mu)/(1 - q^(-2 lam)) (1 + (q^2 - q^-2) q^(-2 lam)/((1 - q^(2 mu))(1 - q^(-2(lam - 1)))))
    L = XI ** 2  # q^(-2 lam)
    return (ONE / (ONE - L)) * (ONE + (q ** 2 - q ** -2) * L / ((ONE - Y ** 2) * (ONE - L * q ** 2)))


def display_example2():
    L, M = XI ** -2, Y ** 2  # q^(2 lam), q^(2 mu)
    return (L * M - L * q ** -2 - M * q ** -2 + ONE) / ((ONE - L * q ** -2) * (ONE - M * q ** -2))


def test_example1_series():
    psi = psi_trace([irrep(2)], 24).scalar()
    assert psi.c == 1
    assert psi.body == series_expand(display_example1(), psi.body.D)


@pytest.mark.parametrize("m", range(0, 4))
def test_psi_closed_form_through_xi48(m):
    psi = psi_trace([irrep(2 * m)], 24).scalar()
    assert psi.body.D >= 48
    assert psi.body == series_expand(closed_psi_sl2(m).body, psi.body.D)


def test_psi_trivial_module_is_weyl_factor():
    psi = psi_trace([irrep(0)], 6).scalar()
    assert psi.body == series_expand(ONE / (ONE - XI ** 2), psi.body.D)


def test_example2():
    F = F_build([irrep(2)], 12).scalar().absorb_linear()
    assert F.c == -1
    assert F.body == series_expand(display_example2(), F.body.D)
    assert frac_eq(closed_F_sl2(1).body, display_example2())


@pytest.mark.parametrize("m", range(0, 4))
def test_closed_F_symmetric(m):
    assert is_symmetric(closed_F_sl2(m))


@pytest.mark.parametrize("m", [1, 2])
def test_F_series_matches_closed(m):
    F = F_build([irrep(2 * m)], 10).scalar().absorb_linear()
    assert F.body == series_expand(closed_F_sl2(m).body, F.body.D)


@pytest.mark.parametrize("m", range(0, 3))
def test_q_inverse_symmetry(m):
    assert q_inverse_symmetry_check(m)["pass"]


@pytest.mark.parametrize("m", range(0, 4))
def test_u_V_laurent_and_symmetric(m):
    u = u_function(m).absorb_linear()
    assert u.c == -1 and is_laurent_polynomial(u.body) and is_symmetric(u)
    assert frac_eq(u.body, u_closed(m).absorb_linear().body)


def test_u_V_small_cases():
    # [TRIVIAL] m = 0 gives q^(-lam mu)
    u0 = u_function(0).absorb_linear()
    assert frac_eq(u0.body, ONE)


@pytest.mark.parametrize("m", [1, 2])
def test_u_from_F_sign(m):
    good = u_from_F(m).absorb_linear()
    printed = u_from_F(m, sign=-1).absorb_linear()
    ref = u_function(m).absorb_linear()
    assert frac_eq(good.body, ref.body)
    assert not frac_eq(printed.body, ref.body)


def test_qkz_limit_n1_and_n2():
    assert qkz_limit_check([irrep(2)])["pass"]
    res = qkz_limit_check([irrep(1), irrep(1)])
    assert not res["pass"] and res["pass_with_limit_factor"]
    L = res["limit_factor"]
    assert L.rows[0][0].is_one() and L.rows[1][1].is_one()
    assert frac_eq(L.rows[1][0], (ONE - q ** 2) / q) and L.rows[0][1].is_zero()


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=3), st.lists(st.integers(-4, 4), min_size=1, max_size=2))
def test_reconstruction_recovers_rational_functions(nums, dens):
    num = sum((qpow(c) * XI ** (2 * i) for i, c in enumerate(nums)), ZERO)
    den = ONE + sum((qpow(c) * XI ** (2 * i + 2) for i, c in enumerate(dens)), ZERO)
    f = num / den
    rec = reconstruct_rational(series_expand(f, 40), denom_bound=8)
    assert frac_eq(rec.fitted, f)
    fit = rec.fit_window[1] - rec.fit_window[0]
    check = rec.check_window[1] - rec.check_window[0]
    assert check >= fit


def test_reconstruction_refuses_short_series():
    with pytest.raises(ReconstructionFailed):
        reconstruct_rational(series_expand(ONE / (ONE - XI ** 2), 6), denom_bound=8)


def test_trace_record_serializes():
    rec = psi_trace([irrep(2)], 2).to_record()
    assert rec["modules"] == ["irrep2"] and "0,0" in rec["entries"]
