"""Verma modules with symbolic highest weight and their intertwining operators.

A highest weight is carried as the FracFn ``q^nu`` (for example ``y * q^3``
for nu = mu + 3), so every weight-dependent coefficient stays rational.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .field import ONE, ZERO, Y, FracFn, qint, qnum_of, qpow
from .linalg import Mat
from .uq import FdModule, irrep, r_coefficients


class NonGenericWeightError(ZeroDivisionError):
    """A denominator vanished identically at a symbolic weight."""


# ---------------------------------------------------------------------------
# q-binomials
# ---------------------------------------------------------------------------


def qbinom(k: int, l: int, p: FracFn | None = None) -> FracFn:
    """Gaussian binomial prod_{i=k-l+1..k}(1-p^i) / prod_{i=1..l}(1-p^i).

    ``p`` defaults to the formal variable ``t`` standing for the base.
    """
    if k < 0 or l < 0 or l > k:
        raise ValueError(f"qbinom needs 0 <= l <= k, got ({k}, {l})")
    if p is None:
        p = FracFn.var("t")
    num = ONE
    den = ONE
    for i in range(k - l + 1, k + 1):
        num = num * (ONE - p ** i)
    for i in range(1, l + 1):
        den = den * (ONE - p ** i)
    return num / den


@lru_cache(maxsize=None)
def qbinom_qm2(k: int, l: int) -> FracFn:
    """The q^-2 binomial of the coproduct expansion of Delta(F)^k."""
    return qbinom(k, l, qpow(-2))


# ---------------------------------------------------------------------------
# Verma slice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VermaSlice:
    """Basis F^k v_nu, 0 <= k <= D, of M_nu with nu given through ``qnu = q^nu``."""

    qnu: FracFn
    D: int

    def e_coeff(self, k: int) -> FracFn:
        """E F^k v = [k][nu-k+1] F^(k-1) v."""
        if k == 0:
            return ZERO
        return qint(k) * qnum_of(self.qnu * qpow(1 - k))

    def k_eigen(self, k: int) -> FracFn:
        """K F^k v = q^(nu-2k) F^k v."""
        return self.qnu * qpow(-2 * k)

    def matrices(self) -> tuple[Mat, Mat, Mat]:
        n = self.D + 1
        E, F = Mat.zeros(n), Mat.zeros(n)
        for k in range(n):
            if k + 1 < n:
                F.rows[k + 1][k] = ONE
            if k:
                E.rows[k - 1][k] = self.e_coeff(k)
        return E, F, Mat.diag([self.k_eigen(k) for k in range(n)])


# ---------------------------------------------------------------------------
# intertwiners
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Intertwiner:
    """Phi: M_nu -> M_(nu - wt v) (x) V with Phi v_nu = sum_i F^i v' (x) u_i."""

    V: FdModule
    v_index: int
    qnu: FracFn
    u: tuple  # u_i as coefficient lists over the basis of V

    @property
    def weight(self) -> int:
        return self.V.weights[self.v_index]

    @property
    def qnu_out(self) -> FracFn:
        return self.qnu * qpow(-self.weight)

    def c(self) -> list[FracFn]:
        """Coefficients c_i of u_i along the basis vector of weight wt(v) + 2i.

        For V = irrep(2m) and v = w_0 these are the c_i of the ansatz
        Phi v = sum c_i F^i v (x) w_i.
        """
        out = []
        for i, vec in enumerate(self.u):
            nz = [(j, x) for j, x in enumerate(vec) if not x.is_zero()]
            out.append(nz[0][1] if nz else ZERO)
        return out


def build_intertwiner(V: FdModule, v_index: int, qnu: FracFn | None = None) -> Intertwiner:
    """Solve Delta(E) Phi v_nu = 0 degree by degree.

    u_0 = v and u_i = -E u_(i-1) / ([i][nu'-i+1] q^(wt v + 2i)), nu' = nu - wt v.
    """
    qnu = Y if qnu is None else qnu
    wv = V.weights[v_index]
    qnu_p = qnu * qpow(-wv)
    vec = [ONE if j == v_index else ZERO for j in range(V.dim)]
    us = [tuple(vec)]
    i = 0
    while True:
        i += 1
        ev = V.E.apply(us[-1])
        if all(x.is_zero() for x in ev):
            break
        denom = qint(i) * qnum_of(qnu_p * qpow(1 - i)) * qpow(wv + 2 * i)
        if denom.is_zero():
            raise NonGenericWeightError(f"[nu'-{i}+1] vanishes")
        scale = -denom.inverse()
        us.append(tuple(x * scale for x in ev))
    return Intertwiner(V, v_index, qnu, tuple(us))


def intertwiner_c_closed(m: int, i: int, reading: str = "j") -> FracFn:
    """Closed form of c_i for irrep(2m) at highest weight mu.

    ``reading="j"`` uses prod_{j=1..i} [mu-j+1]^-1; ``reading="i"`` the
    printed constant index [mu-i+1]^-i.
    """
    sign = -1 if i % 2 else 1
    val = qpow(-i * (i + 1)) * _qfact(m + i) / (_qfact(i) * _qfact(m - i)) * sign
    for j in range(1, i + 1):
        k = j if reading == "j" else i
        val = val / qnum_of(Y * qpow(1 - k))
    return val


def _qfact(n):
    from .field import qfact
    return qfact(n)


def recurrence_residual(m: int, c: list[FracFn]) -> list[FracFn]:
    """q^(2i)[i][mu-i+1] c_i + [m+i][m-i+1] c_(i-1) for i = 1..m."""
    out = []
    for i in range(1, m + 1):
        out.append(qpow(2 * i) * qint(i) * qnum_of(Y * qpow(1 - i)) * c[i]
                   + qint(m + i) * qint(m - i + 1) * c[i - 1])
    return out


def apply_intertwiner(phi: Intertwiner, k: int, D: int | None = None) -> dict:
    """Phi F^k v_nu via the q-binomial expansion of Delta(F)^k.

    Returns ``{(b, j): coeff}`` meaning coeff * F^b v' (x) e_j.  Terms with
    Verma degree above ``D`` are dropped; the flag of dropped terms is the
    second return value.
    """
    out: dict[tuple, FracFn] = {}
    truncated = False
    qnp = phi.qnu_out
    Fpows = _f_powers(phi.V)
    for i, ui in enumerate(phi.u):
        for l in range(0, k + 1):
            b = k - l + i
            if D is not None and b > D:
                truncated = True
                continue
            vec = Fpows[l].apply(ui) if l < len(Fpows) else None
            if vec is None or all(x.is_zero() for x in vec):
                continue
            # K^-l acts on F^b v' with eigenvalue q^(-l(nu' - 2b))
            coef = qbinom_qm2(k, l) * (qnp * qpow(-2 * b)).inverse() ** l
            for j, x in enumerate(vec):
                if x.is_zero():
                    continue
                key = (b, j)
                out[key] = out[key] + coef * x if key in out else coef * x
    return {key: v for key, v in out.items() if not v.is_zero()}, truncated


def apply_intertwiner_iterated(phi: Intertwiner, k: int) -> dict:
    """Same as :func:`apply_intertwiner` but by applying Delta(F) k times."""
    vec = {(i, j): x for i, ui in enumerate(phi.u) for j, x in enumerate(ui) if not x.is_zero()}
    qnp = phi.qnu_out
    V = phi.V
    for _ in range(k):
        new: dict[tuple, FracFn] = {}
        for (b, j), x in vec.items():
            _acc(new, (b + 1, j), x)
            kinv = (qnp * qpow(-2 * b)).inverse()
            for jj in range(V.dim):
                f = V.F.rows[jj][j]
                if not f.is_zero():
                    _acc(new, (b, jj), x * kinv * f)
        vec = {key: v for key, v in new.items() if not v.is_zero()}
    return vec


def _acc(d, key, val):
    d[key] = d[key] + val if key in d else val


def _f_powers(V: FdModule) -> list[Mat]:
    pows = [V.identity()]
    while True:
        nxt = pows[-1] @ V.F
        if nxt.is_zero():
            return pows
        pows.append(nxt)


def verma_e_apply(qnu: FracFn, vec: dict) -> dict:
    """Delta(E) on a vector {(b, j): coeff} of M_nu (x) V is handled by callers;
    this applies E (x) 1 only."""
    out: dict = {}
    sl = VermaSlice(qnu, 10 ** 9)
    for (b, j), x in vec.items():
        c = sl.e_coeff(b)
        if not c.is_zero():
            _acc(out, (b - 1, j), x * c)
    return out


def intertwining_residual(phi: Intertwiner, k: int) -> dict:
    """Delta(E) Phi F^k v - Phi E F^k v (should vanish identically)."""
    V = phi.V
    qnp = phi.qnu_out
    lhs_in, _ = apply_intertwiner(phi, k)
    out: dict = {}
    sl_out = VermaSlice(qnp, 10 ** 9)
    for (b, j), x in lhs_in.items():
        # E (x) K
        c = sl_out.e_coeff(b)
        if not c.is_zero():
            _acc(out, (b - 1, j), x * c * qpow(V.weights[j]))
        # 1 (x) E
        for jj in range(V.dim):
            e = V.E.rows[jj][j]
            if not e.is_zero():
                _acc(out, (b, jj), x * e)
    if k:
        ek = VermaSlice(phi.qnu, 10 ** 9).e_coeff(k)
        rhs, _ = apply_intertwiner(phi, k - 1)
        for key, x in rhs.items():
            _acc(out, key, -x * ek)
    return {key: v for key, v in out.items() if not v.is_zero()}


def annihilator_nullity(V: FdModule, v_weight: int) -> int:
    """Dimension of the space of weight-(nu - v_weight) vectors of M_nu' (x) V
    killed by Delta(E) at symbolic nu, nu' = nu - v_weight.

    By the universal property this equals dim V[v_weight] (one intertwiner per
    choice of leading vector).
    """
    from .linalg import rank
    qnp = Y * qpow(-v_weight)
    unknowns = [(i, j) for i in range(V.dim) for j in range(V.dim)
                if V.weights[j] == v_weight + 2 * i]
    eqs: dict = {}
    for (i, j) in unknowns:
        if i:
            c = qint(i) * qnum_of(qnp * qpow(1 - i)) * qpow(V.weights[j])
            eqs.setdefault((i - 1, j), {})[(i, j)] = c
        for jj in range(V.dim):
            e = V.E.rows[jj][j]
            if not e.is_zero():
                eqs.setdefault((i, jj), {})[(i, j)] = e
    rows = [[eq.get(u, ZERO) for u in unknowns] for eq in eqs.values()]
    return len(unknowns) - rank(rows)


# ---------------------------------------------------------------------------
# central elements
# ---------------------------------------------------------------------------


def central_element_action(W: FdModule, D: int = 4) -> FracFn:
    """Scalar of C_W = Tr_W (1 (x) pi_W)(R^21 R (1 (x) q^(2 rho))) on v_mu.

    Computed on the slice of M_mu (x) W with R acting through its truncated
    expansion; q^(h(x)h/2) on M_mu needs q^(mu/2), carried by ``yh``.
    """
    yh = FracFn.var("yh")
    qnu = yh ** 2
    sl = VermaSlice(qnu, D)
    E, F, _ = sl.matrices()
    n = D + 1
    cs = r_coefficients(max(W.dim, 2))

    def R_on(first_E: bool):
        # R = q^(h(x)h/2) sum c_n E^n (x) F^n on M (x) W;  R^21 on M (x) W is
        # q^(h(x)h/2) sum c_n F^n (x) E^n
        acc = Mat.zeros(n * W.dim)
        A_pow, B_pow = Mat.identity(n), W.identity()
        for k in range(0, W.dim):
            if k:
                A_pow = A_pow @ (E if first_E else F)
                B_pow = B_pow @ (W.F if first_E else W.E)
            if A_pow.is_zero() or B_pow.is_zero():
                break
            acc = acc + A_pow.kron(B_pow).scale(cs[k])
        H = Mat.diag([yh ** ww * qpow(-kk * ww) for kk in range(n) for ww in W.weights])
        return H @ acc

    R = R_on(True)
    R21 = R_on(False)
    Kw = Mat.identity(n).kron(W.K)
    M = R21 @ R @ Kw
    total = ZERO
    for j in range(W.dim):
        total = total + M.rows[j][j]
    return _yh_to_y(total)


def _yh_to_y(f: FracFn) -> FracFn:
    """Rewrite a function of yh with only even powers as a function of y."""
    num, den = f.coefficients_in("yh")
    for part in (num, den):
        if any(k % 2 for k in part):
            raise ValueError("odd power of q^(mu/2) survived")
    from .field import _ZCTX, VARIABLES
    i_yh = VARIABLES.index("yh")
    i_y = VARIABLES.index("y")

    def conv(p):
        d = {}
        for e, c in p.to_dict().items():
            e = [int(x) for x in e]
            e[i_y] += e[i_yh] // 2
            e[i_yh] = 0
            d[tuple(e)] = c
        return _ZCTX.from_dict(d)

    return FracFn(conv(f.num), conv(f.den))


def character_value(W: FdModule, base: FracFn) -> FracFn:
    """sum_nu dim W[nu] base^nu."""
    total = ZERO
    for w in W.weights:
        total = total + base ** w
    return total
