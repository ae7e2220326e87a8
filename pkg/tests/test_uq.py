"""U_q(sl2) modules and the universal R-matrix."""
import pytest

from qtrace.field import ONE, ZERO, frac_eq, qint, qpow
from qtrace.linalg import Mat
from qtrace.uq import (R21, drinfeld_u, dual, embed, flip, irrep, left_dual, r_coefficient_closed,
                       r_coefficients, tensor, universal_R)


@pytest.mark.parametrize("n", range(0, 5))
def test_irrep_relations_and_weights(n):
    V = irrep(n)
    assert V.dim == n + 1
    assert V.weights == tuple(n - 2 * j for j in range(n + 1))
    assert V.check_relations()


def test_irrep_rejects_negative():
    with pytest.raises(ValueError):
        irrep(-1)


@pytest.mark.parametrize("mods", [(1, 1), (1, 2), (2, 2), (1, 1, 1)])
def test_tensor_and_duals_are_modules(mods):
    Vs = [irrep(n) for n in mods]
    T = tensor(*Vs)
    assert T.check_relations()
    assert dual(Vs[0]).check_relations() and left_dual(Vs[0]).check_relations()


def test_tensor_character_is_clebsch_gordan():
    T = tensor(irrep(1), irrep(2))
    assert T.character() == {3: 1, 1: 2, -1: 2, -3: 1}


@pytest.mark.parametrize("n", range(1, 5))
def test_r_coefficients_match_textbook(n):
    # textbook value q^(k(k-1)/2) (q - q^-1)^k / [k]!
    cs = r_coefficients(n)
    q = qpow(1)
    fact = ONE
    for k in range(1, n + 1):
        fact = fact * qint(k)
        assert frac_eq(cs[k], qpow(k * (k - 1) // 2) * (q - q.inverse()) ** k / fact)
    assert frac_eq(r_coefficient_closed(n), cs[n])


@pytest.mark.parametrize("a,b", [(1, 1), (1, 2), (2, 1)])
def test_R_intertwines_coproducts(a, b):
    V, W = irrep(a), irrep(b)
    R = universal_R(V, W)
    P = flip(V.dim, W.dim)  # V(x)W -> W(x)V
    VW, WV = tensor(V, W), tensor(W, V)
    for gen in ("E", "F"):
        X_op = P.T() @ getattr(WV, gen) @ P
        assert (R @ getattr(VW, gen) - X_op @ R).is_zero()


@pytest.mark.parametrize("ns", [(1, 1, 1), (1, 2, 1)])
def test_yang_baxter(ns):
    mods = [irrep(n) for n in ns]
    R12 = embed(universal_R(mods[0], mods[1]), mods, [0, 1])
    R13 = embed(universal_R(mods[0], mods[2]), mods, [0, 2])
    R23 = embed(universal_R(mods[1], mods[2]), mods, [1, 2])
    assert (R12 @ R13 @ R23).equals(R23 @ R13 @ R12)


@pytest.mark.parametrize("m", range(0, 4))
def test_drinfeld_u_on_zero_weight(m):
    # u acts on V[0] of irrep(2m) by q^(-(nu, nu + 2 rho)) = q^(-2m(m+1))  [DERIVED, frozen]
    u = drinfeld_u(irrep(2 * m))
    assert frac_eq(u.rows[m][m], qpow(-2 * m * (m + 1)))


def test_R21_is_flipped_R():
    V, W = irrep(1), irrep(2)
    assert R21(V, W).shape == (6, 6)
    assert not R21(V, W).equals(universal_R(V, W))


def test_mat_inverse_and_det():
    M = Mat([[qpow(1), ONE], [ZERO, qpow(-1)]])
    assert (M @ M.inverse()).equals(Mat.identity(2))
    assert frac_eq(M.det(), ONE)
