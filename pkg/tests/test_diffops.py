"""Difference equations satisfied by the trace functions."""
import pytest

from qtrace import diffops
from qtrace.field import ONE, XI, frac_eq, qpow
from qtrace.uq import irrep

D = 8
q = qpow(1)


def test_example3_operator():
    op = diffops.mr_operator(irrep(1), [irrep(2)])
    L = XI ** -2  # q^(2 lam)
    b = (ONE - L * q ** -4) * (ONE - L * q ** 2) / ((ONE - L * q ** -2) * (ONE - L))
    assert sorted(op.terms) == [-1, 1]
    assert frac_eq(op.terms[1].rows[0][0], ONE)
    assert frac_eq(op.terms[-1].rows[0][0], b)


@pytest.mark.parametrize("w", [1, 2])
@pytest.mark.parametrize("v", [2, 4])
def test_mr_equation(w, v):
    assert diffops.mr_check(irrep(w), [irrep(v)], D)["pass"]


def test_mr_equation_two_components():
    assert diffops.mr_check(irrep(1), [irrep(1), irrep(1)], D)["pass"]


@pytest.mark.parametrize("w", [1, 2])
@pytest.mark.parametrize("m", [1, 2])
def test_dual_mr_exact(w, m):
    assert diffops.dual_mr_check(irrep(w), [irrep(2 * m)], D, exact=True)["pass"]


def test_dual_mr_series_two_components():
    assert diffops.dual_mr_check(irrep(1), [irrep(1), irrep(1)], D)["pass"]


@pytest.mark.parametrize("check", [diffops.qkzb_check, diffops.dual_qkzb_check])
def test_qkzb_trivial_for_one_component(check):
    assert check([irrep(2)], 1, D)["pass"]


@pytest.mark.parametrize("check", [diffops.qkzb_check, diffops.dual_qkzb_check])
@pytest.mark.parametrize("j", [1, 2])
def test_qkzb_two_components(check, j):
    assert check([irrep(1), irrep(1)], j, D)["pass"]


@pytest.mark.parametrize("dual_side", [False, True])
def test_qkzb_operators_commute(dual_side):
    assert diffops.qkzb_commutation_check([irrep(1), irrep(1)], D, dual_side)["pass"]


def test_mr_qkzb_compatible():
    assert diffops.mr_qkzb_compat_check(irrep(1), [irrep(1), irrep(1)], 1, D)["pass"]


@pytest.mark.parametrize("m", range(0, 4))
def test_symmetry_one_component(m):
    assert diffops.symmetry_check([irrep(2 * m)], D)["pass"]


def test_symmetry_two_components_with_reconstruction():
    res = diffops.symmetry_check([irrep(1), irrep(1)], D)
    assert res["pass"] and res["exact"]
    for fit, check in res["windows"]:
        assert check[1] - check[0] >= fit[1] - fit[0]


@pytest.mark.parametrize("w", [1, 2])
def test_radial_part(w):
    assert diffops.radial_mr_check(irrep(w), 1, D)["pass"]


def test_example4_qkzb_display():
    res = diffops.example4_qkzb_check(D)
    assert res["literal"] is False
    assert res["swapped_sides"] is True
