"""Trace functions Psi, phi and F, the sl2 closed forms, and the u-functions.

A trace function is stored as a matrix: rows run over the zero-weight basis
of V_1 (x) .. (x) V_N, columns over tuples (v_1, .., v_N) of basis vectors of
total weight zero, which index v_N^* (x) .. (x) v_1^* in the dual product.
Entries are :class:`PrefactoredFn` with prefactor q^(lam mu) (Psi, phi) or
q^(-lam mu) (F) and a :class:`TraceSeries` body in xi = q^-lam.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Sequence

from .exchange import J_multi, Q_of, arg_shift, xi_to_y
from .field import (ONE, XI, Y, ZERO, FracFn, PrefactoredFn, TraceSeries, frac_eq,
                    qfact, qpow, reflect_mu, series_expand)
from .linalg import Mat, solve_linear
from .uq import FdModule, dual, drinfeld_u, irrep
from .verma import apply_intertwiner, build_intertwiner


class ReconstructionFailed(ValueError):
    pass


@dataclass
class TraceFunction:
    modules: tuple
    rows: list            # index tuples into V_1..V_N
    cols: list            # tuples (v_1..v_N)
    entries: dict         # (row_pos, col_pos) -> PrefactoredFn
    verified_order: int   # coefficients known through xi^verified_order
    meta: dict = field(default_factory=dict)

    def entry(self, r: int, c: int) -> PrefactoredFn:
        return self.entries[(r, c)]

    @property
    def shape(self):
        return len(self.rows), len(self.cols)

    def is_empty(self) -> bool:
        return not self.rows or not self.cols

    def scalar(self) -> PrefactoredFn:
        if self.shape != (1, 1):
            raise ValueError("not a scalar trace function")
        return self.entries[(0, 0)]

    def to_record(self) -> dict:
        return {
            "modules": [m.name for m in self.modules],
            "rows": [list(r) for r in self.rows],
            "cols": [list(c) for c in self.cols],
            "verified_order": self.verified_order,
            "entries": {f"{r},{c}": v.to_text() for (r, c), v in sorted(self.entries.items())},
        }


def zero_weight_tuples(mods: Sequence[FdModule]) -> list[tuple]:
    return [idx for idx in product(*[range(m.dim) for m in mods])
            if sum(m.weights[i] for m, i in zip(mods, idx)) == 0]


# ---------------------------------------------------------------------------
# Psi
# ---------------------------------------------------------------------------


def psi_trace(mods: Sequence[FdModule], D: int) -> TraceFunction:
    """Tr|_{M_mu}((Phi^{v_1} (x) 1..) .. Phi^{v_N} q^(2 lam)) through xi^(2D).

    The Verma degree-k diagonal entry contributes q^(lam mu) xi^(2k).
    """
    mods = tuple(mods)
    tuples = zero_weight_tuples(mods)
    row_pos = {t: i for i, t in enumerate(tuples)}
    acc: dict = {}
    for ci, vs in enumerate(tuples):
        # chain of intertwiners, innermost is Phi^{v_N}_mu
        phis = []
        qnu = Y
        for m, j in reversed(list(zip(mods, vs))):
            phi = build_intertwiner(m, j, qnu)
            phis.append(phi)
            qnu = phi.qnu_out
        memo: dict = {}

        def act(step, b, only=None):
            key = (step, b, only)
            if key not in memo:
                memo[key] = _apply_filtered(phis[step], b, only)
            return memo[key]

        for k in range(D + 1):
            state = {(k, ()): ONE}
            for step in range(len(phis)):
                last = step == len(phis) - 1
                new: dict = {}
                for (b, idx), x in state.items():
                    for (b2, j), y in act(step, b, k if last else None).items():
                        key = (b2, (j,) + idx)
                        new[key] = new[key] + x * y if key in new else x * y
                state = new
            for (b, idx), x in state.items():
                if b != k or x.is_zero():
                    continue
                r = row_pos[idx]
                acc.setdefault((r, ci), {})[2 * k] = x
    entries = {key: PrefactoredFn(TraceSeries(cs, 2 * D), c=1) for key, cs in acc.items()}
    for r in range(len(tuples)):
        for c in range(len(tuples)):
            entries.setdefault((r, c), PrefactoredFn(TraceSeries({}, 2 * D), c=1))
    return TraceFunction(mods, tuples, tuples, entries, 2 * D)


def _apply_filtered(phi, b, only):
    out, _ = apply_intertwiner(phi, b)
    if only is None:
        return out
    return {key: v for key, v in out.items() if key[0] == only}


# ---------------------------------------------------------------------------
# Weyl denominator and closed forms
# ---------------------------------------------------------------------------


def weyl_delta() -> PrefactoredFn:
    """delta_q(lam) = q^lam - q^-lam = xi^-1 (1 - xi^2)."""
    return PrefactoredFn((ONE - XI ** 2) / XI)


def _qbin_sym(m: int, l: int) -> FracFn:
    """[m+l]! / ([l]! [m-l]!)."""
    return qfact(m + l) / (qfact(l) * qfact(m - l))


QD = qpow(1) - qpow(-1)


def closed_psi_sl2(m: int) -> PrefactoredFn:
    """Closed form of Psi for irrep(2m):

    q^(lam mu) sum_l q^(l(l-1)/2) (q-q^-1)^l [m+l]!/([l]![m-l]!) q^(-2 l lam)
      / (prod_{j<l} (1 - q^(2(mu-j))) prod_{j<=l} (1 - q^(-2(lam-j)))).
    """
    body = ZERO
    for l in range(m + 1):
        den = ONE
        for j in range(l):
            den = den * (ONE - Y ** 2 * qpow(-2 * j))
        for j in range(l + 1):
            den = den * (ONE - XI ** 2 * qpow(2 * j))
        body = body + qpow(Fraction(l * (l - 1), 2)) * QD ** l * _qbin_sym(m, l) * XI ** (2 * l) / den
    return PrefactoredFn(body, c=1)


def example1_psi() -> PrefactoredFn:
    """Psi for the 3-dimensional module in closed form (zero-weight space of irrep(2))."""
    q = qpow(1)
    body = (ONE / (ONE - XI ** 2)) * (
        ONE + (q ** 2 - q ** -2) * XI ** 2 / ((ONE - Y ** 2) * (ONE - XI ** 2 * q ** 2)))
    return PrefactoredFn(body, c=1)


def closed_F_sl2(m: int) -> PrefactoredFn:
    """Closed form of F for irrep(2m) (prefactor q^(-lam mu))."""
    pre = qpow(2 * m)
    for j in range(1, m + 1):
        pre = pre * (Y ** -2 * qpow(-2 * j) - ONE) / (Y ** -2 * qpow(-2 * j + 2) - qpow(-2 * m))
    body = ZERO
    for l in range(m + 1):
        den = ONE
        for j in range(1, l + 1):
            den = den * (ONE - Y ** -2 * qpow(-2 * j)) * (ONE - XI ** 2 * qpow(2 * j))
        body = body + qpow(Fraction(l * (l - 1), 2)) * QD ** l * _qbin_sym(m, l) * XI ** (2 * l) / den
    return PrefactoredFn(pre * body, c=-1)


def example2_F() -> PrefactoredFn:
    """F for the 3-dimensional module in closed form (zero-weight space of irrep(2))."""
    q2 = qpow(2)
    L2, M2 = XI ** -2, Y ** 2  # q^(2 lam), q^(2 mu)
    body = (L2 * M2 - L2 / q2 - M2 / q2 + ONE) / ((ONE - L2 / q2) * (ONE - M2 / q2))
    return PrefactoredFn(body, c=-1)


def swap_lam_mu(f: FracFn) -> FracFn:
    """lam <-> mu on a body in xi = q^-lam, y = q^mu."""
    return f.subs_monomial({"xi": (1, {"y": -1}), "y": (1, {"xi": -1})})


def is_symmetric(pf: PrefactoredFn) -> bool:
    a = pf.absorb_linear()
    if a.b != a.d:
        return False
    return frac_eq(a.body, swap_lam_mu(a.body))


# ---------------------------------------------------------------------------
# F pipeline
# ---------------------------------------------------------------------------


def _series_mat(M: Mat, D: int) -> list[list[TraceSeries]]:
    return [[series_expand(x, D, "xi", allow_laurent=True) for x in row] for row in M.rows]


def phi_function(psi: TraceFunction) -> TraceFunction:
    """phi = JJ^{1..N}(lam)^-1 Psi delta_q(lam)."""
    mods = psi.modules
    D = psi.verified_order - 1  # delta_q carries xi^-1
    Jinv = J_multi(mods).mat.inverse()
    from .uq import _flat
    dims = [m.dim for m in mods]
    flat = [_flat(r, dims) for r in psi.rows]
    sub = Jinv.submatrix(flat, flat)
    Js = _series_mat(sub, D + 2)
    delta = series_expand((ONE - XI ** 2), D + 2, "xi").mul_var_power(-1)
    entries = {}
    nr, nc = psi.shape
    for r in range(nr):
        for c in range(nc):
            acc = None
            for k in range(nr):
                term = Js[r][k] * psi.entries[(k, c)].body
                acc = term if acc is None else acc + term
            acc = (acc * delta).truncate(D)
            entries[(r, c)] = PrefactoredFn(acc, c=1)
    return TraceFunction(mods, psi.rows, psi.cols, entries, D)


def _q_dual_factor(mods, col: tuple) -> FracFn:
    """Product of the Q^-1 factors in the definition of F for one column (v_1..v_N).

    Q^-1(mu - h^(*i+1..*N))^(*i) on V_i^*, with h^(*k) = -wt(v_k).
    """
    out = ONE
    N = len(mods)
    for i in range(N):
        Qd = Q_of(dual(mods[i]))
        if not Qd.mat.is_diagonal():
            raise ValueError("Q on a dual component is not diagonal")
        shift = sum(mods[k].weights[col[k]] for k in range(i + 1, N))  # -h^(*k) = wt(v_k)
        val = xi_to_y(Qd.mat.rows[col[i]][col[i]])
        out = out * arg_shift(val, "y", shift).inverse()
    return out


def F_from_phi(phi: TraceFunction) -> TraceFunction:
    """F(lam, mu) = [Q^-1 .. ] phi(lam, -mu - rho)."""
    entries = {}
    factors = [_q_dual_factor(phi.modules, c) for c in phi.cols]
    for (r, c), v in phi.entries.items():
        refl = reflect_mu(v)
        entries[(r, c)] = PrefactoredFn(refl.body * factors[c], refl.c, refl.b, refl.d)
    return TraceFunction(phi.modules, phi.rows, phi.cols, entries, phi.verified_order)


def F_build(mods: Sequence[FdModule], D: int) -> TraceFunction:
    psi = psi_trace(mods, D)
    if psi.is_empty():
        return psi
    return F_from_phi(phi_function(psi))


# ---------------------------------------------------------------------------
# u-functions and the q -> 1/q symmetry
# ---------------------------------------------------------------------------


def q_invert(pf: PrefactoredFn) -> PrefactoredFn:
    """f(q, lam, mu) -> f(1/q, lam, mu) on a rational body."""
    body = pf.body.subs_monomial({"s": (1, {"s": -1}), "xi": (1, {"xi": -1}), "y": (1, {"y": -1})})
    return PrefactoredFn(body, -pf.c, -pf.b, -pf.d)


def negate_lambda(pf: PrefactoredFn) -> PrefactoredFn:
    body = pf.body.subs_monomial({"xi": (1, {"xi": -1})})
    return PrefactoredFn(body, -pf.c, -pf.b, pf.d)


def delta_V(m: int, qarg: FracFn) -> FracFn:
    """prod_{n=1..m} (q^(x+1-n) - q^(-x-1+n)) for irrep(2m) at q^x = qarg."""
    out = ONE
    for n in range(1, m + 1):
        a = qarg * qpow(1 - n)
        out = out * (a - a.inverse())
    return out


def u_hat(m: int) -> PrefactoredFn:
    """delta_q(lam) Psi(q^-1, -lam, -mu - rho)."""
    psi = closed_psi_sl2(m)
    g = reflect_mu(negate_lambda(q_invert(psi)))
    return weyl_delta() * g


def u_function(m: int) -> PrefactoredFn:
    """u_V = delta_{V*}(-lam - rho) delta_V(-mu - rho) u_hat."""
    uh = u_hat(m).absorb_linear()
    factor = delta_V(m, XI * qpow(-1)) * delta_V(m, Y.inverse() * qpow(-1))
    return PrefactoredFn(uh.body * factor, uh.c, uh.b, uh.d)


def u_closed(m: int) -> PrefactoredFn:
    """Manifestly symmetric closed form of u_V for irrep(2m)."""
    body = ZERO
    L, M = XI.inverse(), Y  # q^lam, q^mu
    for l in range(m + 1):
        prod_ = ONE
        for j in range(l + 1, m + 1):
            a, b = L * qpow(j), M * qpow(j)
            prod_ = prod_ * (a - a.inverse()) * (b - b.inverse())
        body = body + qpow(-Fraction(l * (l - 1), 2)) * QD ** l * _qbin_sym(m, l) \
            * (L * M) ** (-l) * prod_
    return PrefactoredFn(body, c=-1)


def u_from_F(m: int, sign: int = 1) -> PrefactoredFn:
    """u_V = q^(sign (nu, nu+2 rho)) (delta_{V*}(-lam-rho) Q(lam) (x) delta_V(-mu-rho) Q(mu)) F_V.

    sign = +1 matches u^-1 on V[0] from the q -> 1/q symmetry and agrees with
    the direct route; sign = -1 is off by q^(-2 (nu, nu+2 rho)).
    """
    F = closed_F_sl2(m).absorb_linear()
    V = irrep(2 * m)
    Ql = Q_of(V).mat.rows[m][m]
    Qm = xi_to_y(Q_of(dual(V)).mat.rows[m][m])
    factor = qpow(sign * 2 * m * (m + 1)) * delta_V(m, XI * qpow(-1)) * Ql \
        * delta_V(m, Y.inverse() * qpow(-1)) * Qm
    return PrefactoredFn(F.body * factor, F.c, F.b, F.d)


def u_functions(m: int) -> dict:
    return {"u_hat": u_hat(m), "delta_V": delta_V(m, Y * qpow(1)), "u_V": u_function(m),
            "u_closed": u_closed(m), "u_from_F": u_from_F(m)}


def is_laurent_polynomial(f: FracFn) -> bool:
    """True when the reduced denominator is a monomial."""
    return len(f.den.monoms()) == 1


def q_inverse_symmetry_check(m: int) -> dict:
    """Psi(q^-1, -lam, mu) against u(q)^-1 Q(q, lam) Psi(q, lam, mu) on V[0]."""
    V = irrep(2 * m)
    psi = closed_psi_sl2(m)
    lhs = negate_lambda(q_invert(psi)).absorb_linear()
    u0 = drinfeld_u(V).rows[m][m]
    Q0 = Q_of(V).mat.rows[m][m]
    rhs = PrefactoredFn(psi.body * Q0 / u0, psi.c)
    ok = lhs.c == rhs.c and frac_eq(lhs.body, rhs.body)
    return {"pass": ok, "lhs": lhs, "rhs": rhs, "u_scalar": u0}


# ---------------------------------------------------------------------------
# qKZ limit
# ---------------------------------------------------------------------------


def qkz_limit_sides(mods: Sequence[FdModule], D: int = 2) -> tuple[Mat, Mat]:
    """(xi^0 coefficient of q^(lam mu) F,  [Q^-1 ..] JJ^{1..N}(mu)^*)."""
    F = F_build(mods, D)
    n = len(F.rows)
    lhs = Mat([[F.entries[(r, c)].body.coeff(0) for c in range(n)] for r in range(n)])
    from .uq import _flat
    dims = [m.dim for m in mods]
    flat = [_flat(r, dims) for r in F.rows]
    JJm = J_multi(mods).mat.submatrix(flat, flat).map(xi_to_y)
    rhs = Mat([[JJm.rows[r][c] * _q_dual_factor(mods, F.cols[c]) for c in range(n)] for r in range(n)])
    return lhs, rhs


# ---------------------------------------------------------------------------
# rational reconstruction
# ---------------------------------------------------------------------------


@dataclass
class RationalReconstruction:
    fitted: FracFn
    fit_window: tuple
    check_window: tuple
    denom_degree: int


def reconstruct_rational(ts: TraceSeries, denom_bound: int, num_bound: int | None = None,
                         ) -> RationalReconstruction:
    """Fit P/Q (Q(0) = 1, deg Q <= denom_bound) to a series and verify it on a
    disjoint check window that is at least as long as the fit window.

    Denominator degrees are tried from 0 upward; the first fit that survives
    its check window is returned.  Series supported on even degrees are fitted
    in xi^2.
    """
    var = ts.var
    step = 2 if all(n % 2 == 0 for n in ts.coeffs) else 1
    lo = min(ts.d_min, 0) if ts.coeffs else 0
    lo -= lo % step
    nb = denom_bound if num_bound is None else num_bound
    # bounds are xi-degrees; convert to degrees in the fit variable
    nb, denom_bound = nb // step, denom_bound // step
    total = (ts.D - lo) // step + 1
    a = [ts.coeffs.get(lo + step * i, ZERO) for i in range(total)]
    fit_len = nb + denom_bound + 1
    if 2 * fit_len > total:
        raise ReconstructionFailed(
            f"series window {total} too short for fit {fit_len} plus an equal check window")
    last = None
    for db in range(denom_bound + 1):
        try:
            p, d = _pade(a, nb, db, fit_len, total)
        except ReconstructionFailed as exc:
            last = exc
            continue
        X = FracFn.var(var, step)
        num = sum((c * X ** i for i, c in enumerate(p)), ZERO)
        den = sum((c * X ** j for j, c in enumerate(d)), ZERO)
        fitted = num / den * FracFn.var(var, lo)
        return RationalReconstruction(fitted, (lo, lo + step * (fit_len - 1)),
                                      (lo + step * fit_len, lo + step * (total - 1)), db * step)
    raise last


def _pade(a, nb, db, fit_len, total):
    unknowns = list(range(1, db + 1))
    eqs = []
    for n in range(nb + 1, nb + db + 1):
        eq = {None: a[n]}
        for j in unknowns:
            if not a[n - j].is_zero():
                eq[j] = a[n - j]
        eqs.append(eq)
    try:
        sol = solve_linear(eqs, unknowns) if unknowns else {}
    except ValueError as exc:
        raise ReconstructionFailed(str(exc)) from None
    d = [ONE] + [sol[j] for j in unknowns]
    p = []
    for n in range(nb + 1):
        acc = ZERO
        for j in range(min(n, db) + 1):
            acc = acc + d[j] * a[n - j]
        p.append(acc)
    # every coefficient past the numerator degree must satisfy the recurrence
    for n in range(nb + 1, total):
        acc = ZERO
        for j in range(db + 1):
            if n - j >= 0:
                acc = acc + d[j] * a[n - j]
        if not acc.is_zero():
            raise ReconstructionFailed(f"check window mismatch at index {n}")
    return p, d


def qkz_limit_check(mods: Sequence[FdModule], D: int = 2) -> dict:
    """Compare the xi^0 coefficient of q^(lam mu) F with [Q^-1 ..] JJ^{1..N}(mu)^*.

    ``pass`` is the literal comparison.  ``pass_with_limit_factor`` also
    multiplies the right side by L = lim_{xi -> 0} JJ^{1..N}(lam)^-1, which is
    the constant the literal statement assumes to be 1.
    """
    lhs, rhs = qkz_limit_sides(mods, D)
    dims = [m.dim for m in mods]
    from .uq import _flat
    rows = zero_weight_tuples(mods)
    flat = [_flat(r, dims) for r in rows]
    Jinv = J_multi(mods).mat.inverse().submatrix(flat, flat)
    L = Jinv.map(lambda f: series_expand(f, 0, "xi").coeff(0))
    return {"pass": lhs.equals(rhs), "pass_with_limit_factor": lhs.equals(L @ rhs),
            "lhs": lhs, "rhs": rhs, "limit_factor": L}
