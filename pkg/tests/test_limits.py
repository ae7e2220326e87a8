"""Classical and rational limits, cross-checked with sympy on exp/sinh expressions."""
from fractions import Fraction

import pytest
import sympy as sp

from qtrace import limits as Lm
from qtrace.field import frac_eq
from qtrace.uq import irrep

lam, mu, t = sp.symbols("lam mu t")
F_CLASSICAL = sp.exp(-lam * mu / 2) * mu / (mu - 1) * (1 - (1 + sp.exp(lam)) / (mu * (1 - sp.exp(lam))))
F_RATIONAL = sp.exp(-lam * mu / 2) * (1 + 2 / (lam * mu))


def test_sympy_classical_identities():
    e1 = sp.diff(F_CLASSICAL, lam, 2) - F_CLASSICAL / (2 * sp.sinh(lam / 2) ** 2) - mu ** 2 / 4 * F_CLASSICAL
    assert sp.simplify(sp.expand(e1.rewrite(sp.exp) * sp.exp(lam * mu / 2))) == 0
    T = lambda k: F_CLASSICAL.subs(mu, mu + k)  # noqa: E731
    e2 = T(1) + (mu - 2) * (mu + 1) / (mu * (mu - 1)) * T(-1) - 2 * sp.cosh(lam / 2) * F_CLASSICAL
    assert sp.simplify((e2 * sp.exp(lam * mu / 2)).rewrite(sp.exp)) == 0


def test_sympy_rational_identities():
    assert sp.simplify(sp.diff(F_RATIONAL, lam, 2) - 2 / lam ** 2 * F_RATIONAL - mu ** 2 / 4 * F_RATIONAL) == 0
    assert sp.simplify(sp.diff(F_RATIONAL, mu, 2) - 2 / mu ** 2 * F_RATIONAL - lam ** 2 / 4 * F_RATIONAL) == 0


def test_sympy_classical_limit_of_example2():
    # body of F at q = e^t, lam -> lam/(2t): q^(2 lam) = e^lam, q^(2 mu) = e^(2 t mu)
    L, Mq, q2 = sp.exp(lam), sp.exp(2 * t * mu), sp.exp(2 * t)
    body = (L * Mq - L / q2 - Mq / q2 + 1) / ((1 - L / q2) * (1 - Mq / q2))
    lim = sp.limit(body, t, 0)
    assert sp.simplify(lim - F_CLASSICAL * sp.exp(lam * mu / 2)) == 0


@pytest.mark.parametrize("check", [Lm.classical_cmr_check, Lm.classical_dual_check, Lm.rational_lam_check,
                                   Lm.rational_mu_check, Lm.rational_symmetry_check])
def test_exact_identities(check):
    assert check()["pass"]


def test_identity_catches_wrong_function():
    wrong = Lm.ExpRationalFn(Lm.classical_F().body * Lm.LAM, Fraction(-1, 2))
    lhs = wrong.d_lam().d_lam() - wrong * (2 / (Lm.ELL - Lm.ELL.inverse()) ** 2)
    assert not lhs.equals(wrong * (Lm.MU ** 2 / 4))


def test_classical_limit_consistency():
    res = Lm.classical_limit_consistency(1, 6)
    assert res["pass"] and res["leading"] and res["prefactor"] and res["routes_agree"]


def test_rational_from_classical():
    assert Lm.rational_from_classical()["pass"]


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (1, 3)])
def test_double_scaling(a, b):
    assert Lm.double_scaling_limit(a, b)["pass"]


def test_only_explicit_case():
    with pytest.raises(NotImplementedError):
        Lm.classical_F(2)
    with pytest.raises(NotImplementedError):
        Lm.rational_F(2)


def test_inconclusive_at_low_order():
    with pytest.raises(Lm.InconclusiveAtOrder):
        Lm.limit_series(Lm.ZERO, Lm.classical_image(2), 2)


def test_qkz_limit_hook():
    assert Lm.qkz_limit([irrep(2)])["pass"]
    res = Lm.qkz_limit([irrep(1), irrep(1)])
    assert not res["pass"] and res["pass_with_limit_factor"]


def test_expfn_text():
    assert "lam mu" in Lm.rational_F().to_text()
    assert frac_eq(Lm.rational_F().swap().body, Lm.rational_F().body)
