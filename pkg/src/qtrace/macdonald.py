"""Macdonald operators and the bridge to sl2 trace functions.

Functions of lam = (lam_1..lam_n) are written in X_i = q^(2 lam_i); the cone
variables are z_i = X_(i+1)/X_i = q^(2(lam_(i+1) - lam_i)).  Weights of
exponentials are written in Y_i = q^(2 mu_i).  For n = 2 the sl2 scalar
convention gives X_2/X_1 = xi^2 and Y_1 = y.

Throughout t = q^(m+1).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Mapping, Sequence

from .diffops import DiffOp, mr_operator
from .field import (ONE, XI, Y, ZERO, FracFn, LPoly, PrefactoredFn, frac_eq, qpow,
                    series_expand, var_index)
from .linalg import Mat
from .trace import closed_psi_sl2, psi_trace, weyl_delta
from .uq import irrep


class NonGenericError(ValueError):
    """A pivot or denominator vanishes at the requested parameters."""


class DomainError(ValueError):
    pass


def _xvar(i: int) -> FracFn:
    return FracFn.var(f"X{i + 1}")


def rho(n: int) -> tuple[Fraction, ...]:
    """rho_i = (n + 1 - 2i)/2, so that sum rho_i = 0."""
    return tuple(Fraction(n + 1 - 2 * i, 2) for i in range(1, n + 1))


def t_param(m: int) -> FracFn:
    return qpow(m + 1)


def symbolic_weights(n: int) -> tuple[FracFn, ...]:
    """Generic traceless Y_i = q^(2 mu_i); for n = 2 this is (y, 1/y)."""
    if n == 2:
        return (Y, Y.inverse())
    if n == 3:
        Y1, Y2 = FracFn.var("Y1"), FracFn.var("Y2")
        return (Y1, Y2, (Y1 * Y2).inverse())
    raise DomainError("symbolic weights are provided for n = 2, 3")


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


@dataclass
class MacdonaldOperator:
    """M_r = sum_{|I| = r} C_I(X) T_I."""

    n: int
    r: int
    m: int
    terms: dict = field(default_factory=dict)  # I (sorted tuple) -> FracFn in X, s

    def coefficient(self, I) -> FracFn:
        return self.terms[tuple(sorted(I))]

    def specialize(self, X: Sequence) -> dict:
        """Coefficients at concrete values of X_1..X_n."""
        vals = [FracFn(x) if not isinstance(x, FracFn) else x for x in X]
        for i, j in combinations(range(self.n), 2):
            if frac_eq(vals[i], vals[j]):
                raise NonGenericError(f"coincident X_{i + 1} = X_{j + 1}")
        mapping = {f"X{i + 1}": v for i, v in enumerate(vals)}
        return {I: c.subs(mapping) for I, c in self.terms.items()}

    def to_diffop(self) -> DiffOp:
        """n = 2 only: the operator as a scalar lambda-side DiffOp in xi."""
        if self.n != 2 or self.r != 1:
            raise DomainError("to_diffop needs n = 2, r = 1")
        sub = {"X1": ONE, "X2": XI ** 2}
        return DiffOp("lambda", {1: Mat([[self.terms[(0,)].subs(sub)]]),
                                 -1: Mat([[self.terms[(1,)].subs(sub)]])}, [()])


def macdonald_operator(n: int, r: int, m: int) -> MacdonaldOperator:
    if not 1 <= r <= n - 1:
        raise DomainError("need 1 <= r <= n - 1")
    if m < 0:
        raise DomainError("m must be nonnegative")
    t = t_param(m)
    X = [_xvar(i) for i in range(n)]
    terms = {}
    for I in combinations(range(n), r):
        c = ONE
        for i in I:
            for j in range(n):
                if j not in I:
                    c = c * (t * X[i] - t.inverse() * X[j]) / (X[i] - X[j])
        terms[I] = c
    return MacdonaldOperator(n, r, m, terms)


def _shift_x(g: FracFn, I) -> FracFn:
    return g.subs_monomial({f"X{i + 1}": (1, {f"X{i + 1}": 1, "s": 4}) for i in I})


def apply_macdonald(op: MacdonaldOperator, weights: Sequence[FracFn], g: FracFn) -> FracFn:
    """M_r (e g) / e for e = prod q^(2 lam_i nu_i), Y_i = q^(2 nu_i) = weights[i]."""
    out = ZERO
    for I, c in op.terms.items():
        w = ONE
        for i in I:
            w = w * weights[i]
        out = out + c * w * _shift_x(g, I)
    return out


def eigenvalue(n: int, r: int, weights: Sequence[FracFn]) -> FracFn:
    """sum_{|I| = r} prod_{i in I} q^(2 (mu + rho)_i) with weights[i] = q^(2 mu_i)."""
    rh = rho(n)
    out = ZERO
    for I in combinations(range(n), r):
        term = ONE
        for i in I:
            term = term * weights[i] * qpow(2 * rh[i])
        out = out + term
    return out


def cone_monomial(n: int, a: Sequence[int]) -> FracFn:
    """z^a as a function of X."""
    out = ONE
    for i, k in enumerate(a):
        out = out * (_xvar(i + 1) / _xvar(i)) ** k
    return out


# ---------------------------------------------------------------------------
# the eigen-series f_m
# ---------------------------------------------------------------------------


@dataclass
class ConeSeries:
    """q^(2 (lam, nu)) sum_a coeffs[a] z^a, truncated at total degree K.

    ``nu`` is mu - m rho, recorded through its weights Y_i = q^(2 nu_i).
    """

    n: int
    m: int
    K: int
    coeffs: dict
    nu_weights: tuple

    def coeff(self, a) -> FracFn:
        a = tuple(a)
        if sum(a) > self.K:
            raise IndexError("beyond truncation")
        return self.coeffs.get(a, ZERO)

    def to_record(self) -> dict:
        return {"n": self.n, "m": self.m, "K": self.K,
                "coeffs": {",".join(map(str, a)): c.to_text() for a, c in sorted(self.coeffs.items())}}


def _indices(dim: int, K: int):
    """Multi-indices of total degree <= K, ordered by total degree."""
    out = []
    for d in range(K + 1):
        out += [a for a in product(range(d + 1), repeat=dim) if sum(a) == d]
    return out


def _geom(n: int, i: int, j: int, t: FracFn, K: int) -> dict:
    """Cone expansion of (t X_i - t^-1 X_j)/(X_i - X_j)."""
    lo, hi = min(i, j), max(i, j)
    step = tuple(1 if lo <= k < hi else 0 for k in range(n - 1))
    lead, rest = (t, t - t.inverse()) if i < j else (t.inverse(), t.inverse() - t)
    out = {tuple([0] * (n - 1)): lead}
    k = 1
    while k * sum(step) <= K:
        out[tuple(k * e for e in step)] = rest
        k += 1
    return out


def _mul(a: dict, b: dict, K: int) -> dict:
    out = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            if sum(k) <= K:
                out[k] = out[k] + va * vb if k in out else va * vb
    return out


def _coefficient_series(n: int, m: int, K: int) -> list[dict]:
    t = t_param(m)
    out = []
    for i in range(n):
        c = {tuple([0] * (n - 1)): ONE}
        for j in range(n):
            if j != i:
                c = _mul(c, _geom(n, i, j, t, K), K)
        out.append(c)
    return out


def _tshift(a, i) -> int:
    """T_i z^a = q^(2 (a_(i-1) - a_i)) z^a (a_0 = a_n = 0)."""
    left = a[i - 1] if i >= 1 else 0
    right = a[i] if i < len(a) else 0
    return 2 * (left - right)


def solve_f_m(n: int, m: int, K: int, weights: Sequence[FracFn] | None = None) -> ConeSeries:
    """The series f_m0 solving M_1 f_m = chi f_m, degree by degree in the cone."""
    mu = tuple(weights) if weights is not None else symbolic_weights(n)
    rh = rho(n)
    nu = tuple(mu[i] * qpow(-2 * m * rh[i]) for i in range(n))
    E = eigenvalue(n, 1, mu)
    cs = _coefficient_series(n, m, K)
    g = {}
    for a in _indices(n - 1, K):
        if not any(a):
            g[a] = ONE
            continue
        pivot = -E
        rhs = ZERO
        for i in range(n):
            pivot = pivot + nu[i] * cs[i][tuple([0] * (n - 1))] * qpow(_tshift(a, i))
            for b, gb in g.items():
                d = tuple(x - y for x, y in zip(a, b))
                if min(d) < 0 or not any(d) or gb.is_zero():
                    continue
                c = cs[i].get(d)
                if c is not None:
                    rhs = rhs + nu[i] * c * qpow(_tshift(b, i)) * gb
        if pivot.is_zero():
            raise NonGenericError(f"resonant pivot at cone index {a}")
        if not rhs.is_zero():
            g[a] = -rhs / pivot
    return ConeSeries(n, m, K, g, nu)


def residual_f_m(f: ConeSeries, r: int = 1, K: int | None = None) -> dict:
    """Cone coefficients of (M_r - chi_r) f through degree K (all zero when f is an eigenfunction of M_r)."""
    n, m = f.n, f.m
    K = f.K if K is None else K
    mu = tuple(f.nu_weights[i] * qpow(2 * m * rho(n)[i]) for i in range(n))
    t = t_param(m)
    E = eigenvalue(n, r, mu)
    zero = tuple([0] * (n - 1))
    out = {}
    for I in combinations(range(n), r):
        c = {zero: ONE}
        for i in I:
            for j in range(n):
                if j not in I:
                    c = _mul(c, _geom(n, i, j, t, K), K)
        w = ONE
        for i in I:
            w = w * f.nu_weights[i]
        for b, gb in f.coeffs.items():
            sh = sum(_tshift(b, i) for i in I)
            for d, cd in c.items():
                k = tuple(x + y for x, y in zip(b, d))
                if sum(k) <= K:
                    out[k] = out.get(k, ZERO) + w * cd * qpow(sh) * gb
    for b, gb in f.coeffs.items():
        if sum(b) <= K:
            out[b] = out.get(b, ZERO) - E * gb
    return {k: v for k, v in out.items() if not v.is_zero()}


# ---------------------------------------------------------------------------
# gamma_m and the bridge to the trace engine (n = 2, V = irrep(2m))
# ---------------------------------------------------------------------------


def gamma_m(n: int, m: int) -> FracFn:
    """prod_{i=1..m} prod_{l<j} (q^(lam_l - lam_j) - q^(2i) q^(lam_j - lam_l)).

    Returned in X (q^(lam_l - lam_j) = (X_l/X_j)^(1/2) needs the sl2 scalar
    form for odd exponents), so for n = 2 the result is in xi:
    prod_i (xi^-1 - q^(2i) xi).
    """
    if n != 2:
        raise DomainError("gamma_m is provided in the sl2 scalar variable (n = 2)")
    out = ONE
    for i in range(1, m + 1):
        out = out * (XI.inverse() - qpow(2 * i) * XI)
    return out


def bridge_series(m: int, K: int, source: str = "closed") -> tuple[dict, PrefactoredFn]:
    """gamma_m^-1 Psi_m(q^-1, -lam, mu) as cone coefficients (z = xi^2)."""
    norm = (XI ** m * gamma_m(2, m)).inverse()  # prod_i (1 - q^(2i) xi^2)^-1
    if source == "closed":
        body = closed_psi_sl2(m).body
        body = body.subs_monomial({"s": (1, {"s": -1}), "y": (1, {"y": -1})})
        ser = series_expand(body * norm, 2 * K, "xi")
    elif source == "engine":
        psi = psi_trace([irrep(2 * m)], K).scalar()
        inv = psi.body.map_coeffs(lambda c: c.subs_monomial({"s": (1, {"s": -1}),
                                                            "y": (1, {"y": -1})}))
        ser = series_expand(norm, 2 * K, "xi") * inv
    else:
        raise ValueError(f"unknown source {source!r}")
    if any(d % 2 for d in ser.coeffs):
        raise ValueError("odd powers of xi in the bridge series")
    coeffs = {(k,): ser.coeff(2 * k) for k in range(K + 1) if not ser.coeff(2 * k).is_zero()}
    # q^(lam mu) xi^m = q^(2 (lam, mu - m rho)) in sl2 scalars
    return coeffs, PrefactoredFn(ONE, c=1, b=-m)


def bridge_check(m: int, K: int, source: str = "closed") -> dict:
    """Coefficient equality f_m0 = gamma_m^-1 Psi_m(q^-1, -lam, mu) through cone degree K."""
    f = solve_f_m(2, m, K)
    trace_side, pre = bridge_series(m, K, source)
    for k in range(K + 1):
        a, b = f.coeff((k,)), trace_side.get((k,), ZERO)
        if not frac_eq(a, b):
            return {"check": "bridge", "m": m, "K": K, "pass": False, "degree": k,
                    "residual": (a - b).to_text()}
    return {"check": "bridge", "m": m, "K": K, "pass": True, "source": source,
            "prefactor": [pre.c, str(pre.b), str(pre.d)]}


def _transform_mr(op: DiffOp) -> dict:
    """D(q^-1, -lam): shift nu -> -nu, coefficients with q -> 1/q (xi is invariant)."""
    return {-nu: A.rows[0][0].q_inverse() for nu, A in op.terms.items()}


def conjugated_macdonald(m: int) -> dict:
    """delta_q gamma_m M_1 gamma_m^-1 delta_q^-1 for n = 2 as {shift: coefficient in xi}."""
    M = macdonald_operator(2, 1, m).to_diffop()
    h = weyl_delta().body * gamma_m(2, m)
    out = {}
    for nu, A in M.terms.items():
        shifted = h.subs_monomial({"xi": (1, {"xi": 1, "s": -2 * nu})})
        out[nu] = h * A.rows[0][0] / shifted
    return out


def conjugation_check(m: int) -> dict:
    """D_{C^2}(q^-1, -lam) = delta_q gamma_m M_1 gamma_m^-1 delta_q^-1 (n = 2, r = 1)."""
    lhs = _transform_mr(mr_operator(irrep(1), [irrep(2 * m)]))
    rhs = conjugated_macdonald(m)
    ok = set(lhs) == set(rhs) and all(frac_eq(lhs[k], rhs[k]) for k in lhs)
    rec = {"check": "conjugation", "m": m, "pass": ok}
    if not ok:
        rec["lhs"] = {k: v.to_text() for k, v in lhs.items()}
        rec["rhs"] = {k: v.to_text() for k, v in rhs.items()}
    return rec


# ---------------------------------------------------------------------------
# commutativity
# ---------------------------------------------------------------------------


GENERIC_NU = ((3, 1, -4), (5, -2, -3), (7, 4, -11), (-6, 13, -7), (9, -1, -8))


def commutator_residual(n: int, m: int, r1: int, r2: int, weights, g: FracFn) -> FracFn:
    A, B = macdonald_operator(n, r1, m), macdonald_operator(n, r2, m)
    ab = apply_macdonald(A, weights, apply_macdonald(B, weights, g))
    ba = apply_macdonald(B, weights, apply_macdonald(A, weights, g))
    return ab - ba


def commutativity_check(n: int = 3, m: int = 1, K: int = 4) -> dict:
    """[M_1, M_2] = 0 on constants, exponentials and cone monomials of degree <= K."""
    tests = [("constant", (ONE,) * n, ONE)]
    tests += [(f"exp{nu}", tuple(qpow(k) for k in nu), ONE) for nu in GENERIC_NU]
    sym = (FracFn.var("Y1"), FracFn.var("Y2"), FracFn.var("Y3"))[:n]
    tests += [(f"z^{a}", sym, cone_monomial(n, a)) for a in _indices(n - 1, K)]
    for name, w, g in tests:
        res = commutator_residual(n, m, 1, 2, w, g)
        if not res.is_zero():
            return {"check": "commutativity", "n": n, "m": m, "pass": False, "test": name}
    return {"check": "commutativity", "n": n, "m": m, "K": K, "pass": True, "tested": len(tests)}


# ---------------------------------------------------------------------------
# Macdonald polynomials (independent oracle: Gram-Schmidt)
# ---------------------------------------------------------------------------


def _partitions(total: int, parts: int, cap: int | None = None):
    cap = total if cap is None else cap
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap), -1, -1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _dominated(a, b) -> bool:
    sa = sb = 0
    for x, y in zip(a, b):
        sa, sb = sa + x, sb + y
        if sa > sb:
            return False
    return True


def _orbit(a) -> set:
    return set(permutations(a))


def _delta_weight(n: int, m: int) -> dict:
    """prod_{i != j} prod_{r < m+1} (1 - q^(2r) X_i/X_j) as {X-exponent: LPoly in s}."""
    w = LPoly.const(1)
    for i in range(n):
        for j in range(n):
            if i != j:
                for r in range(m + 1):
                    w = w * (LPoly.const(1) - LPoly.var("s", 4 * r) * LPoly.var(f"X{i + 1}")
                             * LPoly.var(f"X{j + 1}", -1))
    idx = [var_index(f"X{i + 1}") for i in range(n)]
    out: dict = {}
    for e, c in w.terms.items():
        key = tuple(e[k] for k in idx)
        rest = tuple(0 if k in idx else v for k, v in enumerate(e))
        out.setdefault(key, {})[rest] = c
    return {k: LPoly(v) for k, v in out.items()}


def _gram(basis, n: int, m: int) -> list[list[FracFn]]:
    w = _delta_weight(n, m)
    orbs = [_orbit(a) for a in basis]
    G = []
    for oa in orbs:
        row = []
        for ob in orbs:
            acc = LPoly.const(0)
            for al in oa:
                for be in ob:
                    c = w.get(tuple(x - y for x, y in zip(be, al)))
                    if c is not None:
                        acc = acc + c
            row.append(acc.to_frac())
        G.append(row)
    return G


def monomial_symmetric(a) -> FracFn:
    out = ZERO
    for p in _orbit(a):
        term = ONE
        for i, k in enumerate(p):
            term = term * _xvar(i) ** k
        out = out + term
    return out


@dataclass
class MacdonaldPolynomial:
    n: int
    m: int
    mu: tuple
    coeffs: dict  # partition -> FracFn, monomial-symmetric expansion of P_(mu - mu_n)

    def as_function(self) -> FracFn:
        out = ZERO
        for a, c in self.coeffs.items():
            out = out + c * monomial_symmetric(a)
        shift = self.mu[-1]
        for i in range(self.n):
            out = out * _xvar(i) ** shift
        return out

    def eigenvalue(self) -> FracFn:
        t = t_param(self.m)
        return sum((qpow(2 * self.mu[i]) * t ** (self.n - 1 - 2 * i) for i in range(self.n)), ZERO)

    def to_record(self) -> dict:
        return {"n": self.n, "m": self.m, "mu": list(self.mu),
                "monomial_coefficients": {",".join(map(str, a)): c.to_text()
                                          for a, c in sorted(self.coeffs.items(), reverse=True)}}


def macdonald_polynomial(n: int, m: int, mu: Sequence[int]) -> MacdonaldPolynomial:
    """P_mu(q, t; X) with t = q^(m+1), by Gram-Schmidt on monomial symmetric functions."""
    mu = tuple(int(x) for x in mu)
    if len(mu) != n or any(mu[i] < mu[i + 1] for i in range(n - 1)):
        raise DomainError(f"{mu} is not a dominant integral weight for n = {n}")
    lam = tuple(x - mu[-1] for x in mu)
    basis = sorted((p for p in _partitions(sum(lam), n) if _dominated(p, lam)))
    G = _gram(basis, n, m)
    # P_k = m_k - sum_{j<k} <m_k, P_j>/<P_j, P_j> P_j, vectors in the monomial basis
    Ps: list[list[FracFn]] = []
    norms: list[FracFn] = []

    def ip(u, v):
        acc = ZERO
        for a, ua in enumerate(u):
            if ua.is_zero():
                continue
            for b, vb in enumerate(v):
                if not vb.is_zero():
                    acc = acc + ua * G[a][b] * vb
        return acc

    for k in range(len(basis)):
        v = [ONE if i == k else ZERO for i in range(len(basis))]
        for j, P in enumerate(Ps):
            c = ip(v, P) / norms[j]
            v = [x - c * y for x, y in zip(v, P)]
        nv = ip(v, v)
        if nv.is_zero():
            raise NonGenericError("degenerate inner product")
        Ps.append(v)
        norms.append(nv)
    top = Ps[-1]
    return MacdonaldPolynomial(n, m, mu, {basis[i]: c for i, c in enumerate(top) if not c.is_zero()})


def eigen_residual(P: MacdonaldPolynomial, r: int = 1) -> FracFn:
    """M_r P - chi_r P (chi_1 = sum q^(2 mu_i) t^(n + 1 - 2i))."""
    op = macdonald_operator(P.n, r, P.m)
    f = P.as_function()
    t = t_param(P.m)
    chi = ZERO
    for I in combinations(range(P.n), r):
        term = ONE
        for i in I:
            term = term * qpow(2 * P.mu[i]) * t ** (P.n - 1 - 2 * i)
        chi = chi + term
    return apply_macdonald(op, (ONE,) * P.n, f) - chi * f


def polynomial_check(n: int, m: int, max_size: int = 4) -> dict:
    """Eigen-residuals of P_mu for all partitions mu with |mu| <= max_size."""
    tested = []
    for size in range(max_size + 1):
        for lam in _partitions(size, n):
            P = macdonald_polynomial(n, m, lam)
            for r in range(1, n):
                if not eigen_residual(P, r).is_zero():
                    return {"check": "macdonald-poly", "n": n, "m": m, "pass": False, "mu": list(lam), "r": r}
            tested.append(list(lam))
    return {"check": "macdonald-poly", "n": n, "m": m, "pass": True, "tested": tested}
