"""Verma modules, intertwiners and the central element."""
import pytest

from qtrace.field import ONE, Y, frac_eq, qint, qnum_of, qpow
from qtrace.uq import irrep, tensor
from qtrace.verma import (VermaSlice, annihilator_nullity, build_intertwiner, central_element_action,
                          character_value, intertwiner_c_closed, intertwining_residual, qbinom,
                          recurrence_residual)


def test_verma_slice_relations():
    E, F, K = VermaSlice(Y, 5).matrices()
    # [E, F] = (K - K^-1)/(q - q^-1) away from the truncation edge
    C = E @ F - F @ E
    for k in range(5):
        assert frac_eq(C.rows[k][k], qnum_of(Y * qpow(-2 * k)))


def test_gaussian_binomial():
    p = qpow(2)
    assert frac_eq(qbinom(4, 2, p), (ONE + p ** 2) * (ONE + p + p ** 2))
    assert frac_eq(qbinom(5, 0, p), ONE)


@pytest.mark.parametrize("n,j", [(1, 0), (1, 1), (2, 1), (3, 2), (4, 2)])
def test_intertwiner_is_intertwining(n, j):
    phi = build_intertwiner(irrep(n), j)
    for k in range(3):
        assert intertwining_residual(phi, k) == {}


@pytest.mark.parametrize("m", [1, 2, 3])
def test_intertwiner_coefficients_closed_form(m):
    phi = build_intertwiner(irrep(2 * m), m)
    c = phi.c()
    assert all(r.is_zero() for r in recurrence_residual(m, c))
    for i in range(m + 1):
        assert frac_eq(c[i], intertwiner_c_closed(m, i, "j"))


def test_printed_constant_index_fails_from_i_equals_2():
    m = 2
    c = [intertwiner_c_closed(m, i, "i") for i in range(m + 1)]
    res = recurrence_residual(m, c)
    assert res[0].is_zero() and not res[1].is_zero()


@pytest.mark.parametrize("ns,w", [((2,), 0), ((1, 1), 0), ((2, 2), 0), ((1, 2), 1)])
def test_intertwiner_space_dimension(ns, w):
    V = tensor(*[irrep(n) for n in ns])
    assert annihilator_nullity(V, w) == V.character().get(w, 0)


@pytest.mark.parametrize("n", [1, 2])
def test_central_element_is_character(n):
    # C_W acts on M_mu by chi_W(q^(2(mu + rho))), i.e. sum over weights of (q^(mu+1))^w
    W = irrep(n)
    assert frac_eq(central_element_action(W), character_value(W, Y * qpow(1)))


def test_character_value_fundamental():
    assert frac_eq(character_value(irrep(1), Y), Y + Y.inverse())
    assert frac_eq(qint(2), qpow(1) + qpow(-1))
