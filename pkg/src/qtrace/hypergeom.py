"""The trigonometric hypergeometric function u_m through its residue algebra.

The contour integral defining u_m is never evaluated numerically.  It is
represented by the residue recursion over k (integrating out T_k picks up a
pole at T_k = A^2 q^(2k-2m) and a pole at 0), whose solution is the tableau
c_kj; the residue at zero is the constant-term value I_{k,m}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .field import (ONE, XI, Y, ZERO, FracFn, LPoly, PrefactoredFn, TraceSeries, frac_eq, qfact,
                    qpow, series_expand, var_index)
from .trace import QD, _qbin_sym, is_symmetric, u_closed, u_function


def _L(i: int = 0) -> FracFn:
    """q^(lam + i) - q^(-lam - i)."""
    a = XI.inverse() * qpow(i)
    return a - a.inverse()


def _M(i: int = 0) -> FracFn:
    """q^(mu + i) - q^(-mu - i)."""
    a = Y * qpow(i)
    return a - a.inverse()


def I_km(k: int, m: int) -> PrefactoredFn:
    """q^(-k(lam + mu + 2m) - k(k-1)/2) k!/[k]_q!."""
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    body = qpow(Fraction(-2 * k * m * 2 - k * (k - 1), 2)) * factorial(k) / qfact(k)
    return PrefactoredFn(body, 0, -k, -k)


def c_kj(k: int, j: int, m: int) -> FracFn:
    """Closed form of the tableau entry c_kj."""
    if not 0 <= j <= k <= m:
        raise ValueError(f"need 0 <= j <= k <= m, got ({k}, {j}, {m})")
    out = FracFn((-1) ** (k - j) * factorial(k) // factorial(j)) * (ONE - qpow(-2)) ** (k - j)
    for i in range(j + 1, k + 1):
        out = out * _L(i) * _M(i) * qpow(2 * (i - m)) / ((ONE - qpow(2 * (i + m))) * (ONE - qpow(2 * (i - m - 1))))
    return out


def residue_step(k: int, m: int, A: FracFn | None = None) -> FracFn:
    """Coefficient of the T_k = A^2 q^(2k-2m) residue in the k-th integration step."""
    A = qpow(m) if A is None else A
    return (-k * qpow(-2 * (m - k)) * _L(k) * _M(k) * (ONE - qpow(-2))
            / ((ONE - A ** 4 * qpow(-2 * (m - k))) * (ONE - qpow(-2 * (m - k + 1)))))


@dataclass
class ResidueTableau:
    m: int
    c: dict  # (k, j) -> FracFn
    I: dict  # k -> PrefactoredFn

    def row_sum(self, k: int) -> PrefactoredFn:
        """sum_j c_kj I_{j,m} on the common prefactor."""
        body = ZERO
        for j in range(k + 1):
            body = body + self.c[(k, j)] * I_km(j, self.m).absorb_linear().body
        return PrefactoredFn(body)


def residue_tableau(m: int) -> ResidueTableau:
    """Tableau built by running the residue recursion (not the closed form)."""
    c = {}
    for k in range(m + 1):
        c[(k, k)] = ONE
        if k:
            r = residue_step(k, m)
            for j in range(k):
                c[(k, j)] = r * c[(k - 1, j)]
    return ResidueTableau(m, c, {k: I_km(k, m) for k in range(m + 1)})


def tableau_check(m: int) -> dict:
    """Recursion-built c_kj agree with the closed form for all 0 <= j <= k <= m."""
    tab = residue_tableau(m)
    bad = [(k, j) for (k, j), v in tab.c.items() if not frac_eq(v, c_kj(k, j, m))]
    return {"check": "tableau", "m": m, "pass": not bad, "mismatch": bad}


def u_m_assembled(m: int) -> PrefactoredFn:
    """q^(-lam mu - m(m-1)) sum_j c_mj I_{j,m}."""
    s = residue_tableau(m).row_sum(m)
    return PrefactoredFn(s.body * qpow(-m * (m - 1)), c=-1)


def u_m_closed(m: int) -> PrefactoredFn:
    """Closed form of u_m with the inner product over i = l+1..m."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    body = ZERO
    LM = XI.inverse() * Y  # q^(lam + mu)
    for l in range(m + 1):
        prod_ = ONE
        for i in range(l + 1, m + 1):
            prod_ = prod_ * _L(i) * _M(i)
        body = body + LM ** (-l) * qpow(-Fraction(l * (l - 1), 2)) * QD ** l * _qbin_sym(m, l) * prod_
    const = qpow(-m * (3 * m - 1)) * factorial(m) / qfact(2 * m) * QD ** (-m)
    return PrefactoredFn(const * body, c=-1)


def u_m_closed_literal(m: int) -> PrefactoredFn:
    """The printed product bound i = j+1..m read with j the outer k = m index.

    With j = m the product is empty, so every term loses its product.
    """
    body = ZERO
    LM = XI.inverse() * Y
    for l in range(m + 1):
        body = body + LM ** (-l) * qpow(-Fraction(l * (l - 1), 2)) * QD ** l * _qbin_sym(m, l)
    const = qpow(-m * (3 * m - 1)) * factorial(m) / qfact(2 * m) * QD ** (-m)
    return PrefactoredFn(const * body, c=-1)


def identity_constant(m: int) -> FracFn:
    """q^((3m-1)m) [2m]_q!/m! (q - q^-1)^m."""
    return qpow((3 * m - 1) * m) * qfact(2 * m) / factorial(m) * QD ** m


def _same(a: PrefactoredFn, b: PrefactoredFn) -> bool:
    a, b = a.absorb_linear(), b.absorb_linear()
    return (a.c, a.b, a.d) == (b.c, b.b, b.d) and frac_eq(a.body, b.body)


def identity_check(m: int) -> dict:
    """u_V(m) = const * u_m, with u_V from both trace routes and u_m from the residue algebra."""
    um = u_m_assembled(m)
    const = identity_constant(m)
    target = PrefactoredFn(um.body * const, um.c)
    closed_ok = _same(u_m_closed(m), um)
    literal_ok = _same(u_m_closed_literal(m), um)
    ok_closed = _same(u_closed(m), target)
    ok_route = _same(u_function(m), target)
    return {"check": "identity", "m": m,
            "pass": closed_ok and ok_closed and ok_route and is_symmetric(um),
            "assembly_matches_closed": closed_ok, "literal_bound_matches": literal_ok,
            "u_V_closed": ok_closed, "u_V_trace_route": ok_route,
            "symmetric": is_symmetric(um), "constant": const.to_text(),
            "u_m": um.to_text()}


# ---------------------------------------------------------------------------
# constant-term identity
# ---------------------------------------------------------------------------


def _truncate_t(p: LPoly, deg: int) -> LPoly:
    ti = var_index("t")
    return LPoly({e: c for e, c in p.terms.items() if e[ti] <= deg})


def constant_term_series(m: int, t_deg: int) -> TraceSeries:
    """T-constant term of prod_{i != j} (1 - T_i/T_j)/(1 - t T_i/T_j) as a series in t."""
    if m > 4:
        raise ValueError("brute-force expansion is limited to m <= 4")
    one = LPoly.const(1)
    t = LPoly.var("t")
    prod_ = one
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i == j:
                continue
            x = LPoly.var(f"T{i}") * LPoly.var(f"T{j}", -1)
            geo = one
            power = one
            for _ in range(t_deg):
                power = power * t * x
                geo = geo + power
            prod_ = _truncate_t(prod_ * (one - x) * geo, t_deg)
    idx = [var_index(f"T{i}") for i in range(1, m + 1)]
    ti = var_index("t")
    coeffs: dict = {}
    for e, c in prod_.terms.items():
        if all(e[k] == 0 for k in idx):
            coeffs[e[ti]] = coeffs.get(e[ti], 0) + c
    return TraceSeries({k: FracFn(v) for k, v in coeffs.items()}, t_deg, "t")


def constant_term_closed(m: int) -> FracFn:
    """m! (1 - t)^m / ((1 - t)..(1 - t^m))."""
    t = FracFn.var("t")
    den = ONE
    for i in range(1, m + 1):
        den = den * (ONE - t ** i)
    return factorial(m) * (ONE - t) ** m / den


def constant_term_check(m: int, t_deg: int = 12) -> dict:
    lhs = constant_term_series(m, t_deg)
    rhs = series_expand(constant_term_closed(m), t_deg, "t")
    series_ok = lhs == rhs
    # t = q^-2: each pair contributes q^2 times the integrand of the unit-circle integral
    at_q = constant_term_closed(m).subs({"t": qpow(-2)}) * qpow(-m * (m - 1))
    integral = qpow(-Fraction(m * (m - 1), 2)) * factorial(m) / qfact(m)
    value_ok = frac_eq(at_q, integral)
    return {"check": "constant-term", "m": m, "t_deg": t_deg, "pass": series_ok and value_ok,
            "series": series_ok, "value_at_q^-2": value_ok}
