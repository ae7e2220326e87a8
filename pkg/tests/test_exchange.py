"""Fusion and exchange matrices, Q and G."""
from fractions import Fraction

import pytest

from qtrace import exchange
from qtrace.exchange import (Q_closed_fundamental, Q_closed_zero_weight, Q_of, RR, G_of, abrr_residual,
                             cocycle_check, fusion_J_abrr, fusion_J_compose, fusion_identity_check,
                             qdybe_check, shifted_embed, transpose_check, weyl_ratio, xi_to_y)
from qtrace.field import ONE, XI, frac_eq, qpow
from qtrace.linalg import Mat
from qtrace.uq import dual, irrep

PAIRS = [(a, b) for a in range(3) for b in range(3)]


@pytest.mark.parametrize("a,b", PAIRS)
def test_abrr_matches_intertwiner_composition(a, b):
    W, V = irrep(a), irrep(b)
    J = fusion_J_abrr(W, V)
    assert abrr_residual(W, V, J).is_zero()
    assert J.mat.equals(fusion_J_compose(W, V).mat)


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 2)])
def test_fusion_matrix_is_unipotent_and_weight_zero(a, b):
    J = fusion_J_abrr(irrep(a), irrep(b))
    assert J.is_weight_zero()
    assert all(J.mat.rows[i][i].is_one() for i in range(J.dim))


@pytest.mark.parametrize("ns", [(1, 1, 1), (1, 2, 1), (0, 1, 1), (2, 1, 1)])
def test_cocycle(ns):
    assert cocycle_check(*[irrep(n) for n in ns])["pass"]


@pytest.mark.parametrize("W,Vs", [(1, (1,)), (1, (1, 1)), (1, (2, 1)), (2, (1, 1))])
def test_fusion_identity(W, Vs):
    assert fusion_identity_check(irrep(W), [irrep(n) for n in Vs])["pass"]


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 1)])
def test_transpose_relation(a, b):
    assert transpose_check(irrep(a), irrep(b))["pass"]


def test_transpose_relation_needs_the_middle_shift():
    W, V = irrep(1), irrep(2)
    Wd, Vd = dual(W), dual(V)
    mods = (Wd, Vd)
    Qw, Qv = Q_of(Wd), Q_of(Vd)
    left = shifted_embed(Qw, mods, (0,), ()) @ shifted_embed(Qv, mods, (1,), (0,), sign=-1)
    right = shifted_embed(Qw.inverse(), mods, (0,), (1,), sign=-1) @ shifted_embed(Qv.inverse(), mods, (1,), ())
    unshifted = left @ RR(Wd, Vd).mat @ right
    assert not RR(W, V).mat.T().equals(unshifted)


@pytest.mark.parametrize("ns", [(1, 1, 1), (1, 2, 1)])
def test_dynamical_yang_baxter(ns):
    assert qdybe_check(*[irrep(n) for n in ns])["pass"]


def test_Q_fundamental_closed_form():
    Q = Q_of(irrep(1))
    low, high = Q_closed_fundamental()
    assert Q.mat.is_diagonal()
    assert frac_eq(xi_to_y(Q.mat.rows[0][0]), high) and frac_eq(xi_to_y(Q.mat.rows[1][1]), low)


@pytest.mark.parametrize("m", range(0, 4))
def test_Q_zero_weight_closed_form(m):
    Q = Q_of(irrep(2 * m))
    assert Q.mat.is_diagonal()
    assert frac_eq(xi_to_y(Q.mat.rows[m][m]), Q_closed_zero_weight(m))


@pytest.mark.parametrize("n", [0, 1, 2])
def test_G_is_weyl_denominator_ratio(n):
    assert G_of(irrep(n)).equals(weyl_ratio(irrep(n)))


def _display_example4():
    q = qpow(1)
    L = XI ** 2  # q^(-2 lam)
    return Mat([[ONE, qpow(Fraction(-1, 2)) * (q ** -1 - q) / (L - ONE)],
                [(q ** -1 - q) / (L ** -1 - ONE), (L - q ** 2) * (L - q ** -2) / (L - ONE) ** 2]])


def test_example4_display_literal_and_overall_reading():
    block = RR(irrep(1), irrep(1)).mat.submatrix([1, 2], [1, 2])
    disp = _display_example4()
    literal = [[frac_eq(block.rows[i][j], disp.rows[i][j]) for j in range(2)] for i in range(2)]
    assert literal == [[False, True], [False, False]]
    fixed = Mat([[ONE, disp.rows[0][1] * qpow(Fraction(1, 2))], [disp.rows[1][0], disp.rows[1][1]]])
    assert block.equals(fixed.scale(qpow(Fraction(-1, 2))))


def test_disk_cache_round_trip(tmp_path):
    W, V = irrep(1), irrep(2)
    ref = fusion_J_abrr(W, V).mat
    exchange.set_disk_cache(tmp_path)
    try:
        exchange._J_CACHE.clear()
        fusion_J_abrr(W, V)
        files = list(tmp_path.glob("J_*.json"))
        assert len(files) == 1
        exchange._J_CACHE.clear()
        assert fusion_J_abrr(W, V).mat.equals(ref)
    finally:
        exchange.set_disk_cache(None)
        exchange._J_CACHE.clear()
