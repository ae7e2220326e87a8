"""Residue algebra for u_m and the constant-term identity."""
import pytest
import sympy as sp

from qtrace import hypergeom as H
from qtrace.field import ONE, FracFn, frac_eq, qfact, qpow, series_expand


@pytest.mark.parametrize("m", range(0, 4))
def test_tableau_recursion_matches_closed_form(m):
    assert H.tableau_check(m)["pass"]


@pytest.mark.parametrize("m", range(1, 4))
def test_residue_step_is_ratio_of_closed_entries(m):
    for k in range(1, m + 1):
        for j in range(k):
            assert frac_eq(H.residue_step(k, m) * H.c_kj(k - 1, j, m), H.c_kj(k, j, m))


@pytest.mark.parametrize("m", range(0, 4))
def test_hypergeometric_identity(m):
    res = H.identity_check(m)
    assert res["pass"]
    assert res["u_V_closed"] and res["u_V_trace_route"] and res["symmetric"]


def test_product_bound_reading():
    assert H.identity_check(0)["literal_bound_matches"]
    for m in (1, 2, 3):
        assert not H.identity_check(m)["literal_bound_matches"]


def test_constant():
    # q^((3m-1)m) [2m]!/m! (q - q^-1)^m at m = 1: q^2 [2] (q - q^-1) = q^2 (q^2 - q^-2)
    assert frac_eq(H.identity_constant(1), qpow(2) * (qpow(2) - qpow(-2)))
    assert frac_eq(H.identity_constant(0), ONE)


def test_u0_trivial():
    u = H.u_m_assembled(0).absorb_linear()
    assert u.c == -1 and frac_eq(u.body, ONE)


def test_I_km_range():
    with pytest.raises(ValueError):
        H.I_km(3, 2)
    with pytest.raises(ValueError):
        H.c_kj(1, 2, 2)
    I0 = H.I_km(0, 2).absorb_linear()
    assert frac_eq(I0.body, ONE)


def _ct_sympy(m, N):
    """Constant term in T of prod_{i != j}(1 - T_i/T_j)/(1 - t T_i/T_j) via sympy, through t^N."""
    t = sp.Symbol("t")
    T = sp.symbols(f"T1:{m + 1}")
    expr = sp.Integer(1)
    for i in range(m):
        for j in range(m):
            if i != j:
                x = T[i] / T[j]
                expr *= (1 - x) * sum((t * x) ** k for k in range(N + 1))
    poly = sp.Poly(sp.expand(expr * sp.Mul(*[Ti ** (N * (m - 1) + 2 * m) for Ti in T])), *T, t)
    shift = N * (m - 1) + 2 * m
    out = [0] * (N + 1)
    for mon, c in poly.terms():
        if all(e == shift for e in mon[:m]) and mon[m] <= N:
            out[mon[m]] += c
    return out


def test_constant_term_series_against_sympy():
    ref = _ct_sympy(2, 6)
    ser = H.constant_term_series(2, 6)
    assert [ser.coeff(k).constant_value() for k in range(7)] == ref
    # closed form for m = 2 is 2/(1 + t)
    assert ref == [2, -2, 2, -2, 2, -2, 2]


@pytest.mark.parametrize("m", [1, 2, 3])
def test_constant_term_identity(m):
    res = H.constant_term_check(m, 12)
    assert res["pass"] and res["series"] and res["value_at_q^-2"]


def test_constant_term_closed_m3():
    t = FracFn.var("t")
    val = H.constant_term_closed(3)
    assert frac_eq(val, 6 * (ONE - t) ** 2 / ((ONE - t ** 2) * (ONE - t ** 3)))
    assert frac_eq(H.constant_term_closed(1), ONE)


def test_integral_value_small():
    # q^(-m(m-1)/2) m!/[m]! at m = 2: q^-1 * 2/(q + q^-1)
    assert frac_eq(qpow(-1) * 2 / qfact(2), 2 / (qpow(2) + ONE))
    assert series_expand(H.constant_term_closed(2), 4, "t").coeff(4).constant_value() == 2
