"""Macdonald operators, eigen-series and polynomials."""
import pytest

from qtrace import macdonald as M
from qtrace.field import ONE, frac_eq, qpow


def test_f00_is_geometric():
    # m = 0, n = 2: f_00 = 1/(1 - z)
    f = M.solve_f_m(2, 0, 8)
    assert all(f.coeff((k,)).is_one() for k in range(9))


@pytest.mark.parametrize("j", [0, 1, 2])
def test_resonant_weights_raise(j):
    with pytest.raises(M.NonGenericError):
        M.solve_f_m(2, 0, 3, (qpow(j), qpow(-j)))


def test_generic_numeric_weight_solves():
    f = M.solve_f_m(2, 1, 4, (qpow(7), qpow(-7)))
    assert M.residual_f_m(f, 1) == {}


@pytest.mark.parametrize("m", [0, 1])
def test_n3_series_solves_both_operators(m):
    f = M.solve_f_m(3, m, 3)
    assert M.residual_f_m(f, 1) == {} and M.residual_f_m(f, 2) == {}


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("source", ["closed", "engine"])
def test_bridge_to_trace_function(m, source):
    assert M.bridge_check(m, 10, source)["pass"]


@pytest.mark.parametrize("m", [0, 1, 2])
def test_conjugated_operator_is_mr_operator(m):
    assert M.conjugation_check(m)["pass"]


@pytest.mark.parametrize("m", [0, 1])
def test_operators_commute_n3(m):
    res = M.commutativity_check(3, m, 4)
    assert res["pass"] and res["tested"] > 10


def test_coincident_arguments_rejected():
    with pytest.raises(M.NonGenericError):
        M.macdonald_operator(2, 1, 1).specialize([ONE, ONE])


def test_operator_domain():
    with pytest.raises(M.DomainError):
        M.macdonald_operator(2, 2, 0)
    with pytest.raises(M.DomainError):
        M.macdonald_polynomial(2, 1, (0, 2))


def test_two_variable_P2_literature_value():
    # P_(2) = m_(2) + (1 + Q)(1 - T)/(1 - Q T) m_(1,1) with Q = q^2, T = t^2 = q^(2(m+1))
    for m in (0, 1, 2):
        Q, T = qpow(2), qpow(2 * (m + 1))
        P = M.macdonald_polynomial(2, m, (2, 0))
        assert P.coeffs[(2, 0)].is_one()
        assert frac_eq(P.coeffs[(1, 1)], (ONE + Q) * (ONE - T) / (ONE - Q * T))


def test_schur_limit():
    # m = 0 gives t = q, i.e. Macdonald's t = q: Schur polynomials
    P = M.macdonald_polynomial(3, 0, (2, 1, 0))
    assert P.coeffs == {(2, 1, 0): ONE, (1, 1, 1): ONE * 2}


def test_elementary_symmetric_is_fixed():
    P = M.macdonald_polynomial(3, 2, (1, 1, 0))
    assert list(P.coeffs) == [(1, 1, 0)]


@pytest.mark.parametrize("n,m", [(2, 0), (2, 1), (2, 2), (3, 0), (3, 1)])
def test_polynomial_eigen_residuals(n, m):
    assert M.polynomial_check(n, m, 4)["pass"]
