"""Finite-dimensional U_q(sl2) modules, duals, tensor products and the universal R-matrix.

Conventions:  K = q^h,  Delta(E) = E(x)K + 1(x)E,  Delta(F) = F(x)1 + K^-1(x)F,
S(E) = -E K^-1,  S(F) = -K F,  S(K) = K^-1.  Weights are integers (the
fundamental weight is 1), so q^h on a weight-n vector is q^n = s^(2n).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Sequence

from .field import ONE, ZERO, ConventionError, FracFn, qfact, qint, qpow
from .linalg import Mat, solve_linear


@dataclass(frozen=True, eq=False)
class FdModule:
    """A module given by exact matrices of E, F and K on a weight basis."""

    name: str
    weights: tuple[int, ...]
    E: Mat
    F: Mat
    factors: tuple = field(default=())

    @property
    def dim(self) -> int:
        return len(self.weights)

    @property
    def K(self) -> Mat:
        return Mat.diag([qpow(w) for w in self.weights])

    @property
    def Kinv(self) -> Mat:
        return Mat.diag([qpow(-w) for w in self.weights])

    def K_power(self, a) -> Mat:
        """q^(a h)."""
        return Mat.diag([qpow(a * w) for w in self.weights])

    def identity(self) -> Mat:
        return Mat.identity(self.dim)

    def zero_weight_indices(self) -> list[int]:
        return [i for i, w in enumerate(self.weights) if w == 0]

    def weight_indices(self, w: int) -> list[int]:
        return [i for i, x in enumerate(self.weights) if x == w]

    def relation_residuals(self) -> list[Mat]:
        K, Ki = self.K, self.Kinv
        q2 = qpow(2)
        r1 = K @ self.E @ Ki - self.E.scale(q2)
        r2 = K @ self.F @ Ki - self.F.scale(q2.inverse())
        r3 = self.E @ self.F - self.F @ self.E - (K - Ki).scale(ONE / (qpow(1) - qpow(-1)))
        return [r1, r2, r3]

    def check_relations(self) -> bool:
        return all(r.is_zero() for r in self.relation_residuals())

    def character(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return out

    def to_text(self) -> str:
        return (f"module {self.name}; weights={list(self.weights)}\n"
                f"E:\n{self.E.to_text()}\nF:\n{self.F.to_text()}")

    def __repr__(self):
        return f"FdModule({self.name}, dim={self.dim})"


@lru_cache(maxsize=None)
def irrep(n: int) -> FdModule:
    """Irreducible module of highest weight n (dimension n+1).

    Basis e_0..e_n with weight n-2j, F e_j = e_{j+1}, E e_j = [j][n-j+1] e_{j-1}.
    For n = 2m this is the basis w_m..w_-m with F w_b = w_(b-1).
    """
    if n < 0:
        raise ValueError("highest weight must be nonnegative")
    d = n + 1
    E = Mat.zeros(d)
    F = Mat.zeros(d)
    for j in range(d):
        if j + 1 < d:
            F.rows[j + 1][j] = ONE
        if j > 0:
            E.rows[j - 1][j] = qint(j) * qint(n - j + 1)
    return FdModule(f"irrep{n}", tuple(n - 2 * j for j in range(d)), E, F)


def antipode_images(V: FdModule, inverse: bool = False) -> tuple[Mat, Mat]:
    """Matrices of S(E), S(F) (or S^-1) on V."""
    K, Ki = V.K, V.Kinv
    if not inverse:
        return -(V.E @ Ki), -(K @ V.F)
    return -(Ki @ V.E), -(V.F @ K)


def dual(V: FdModule) -> FdModule:
    """Right dual V* with (x f)(v) = f(S(x) v), basis e_i^*."""
    SE, SF = antipode_images(V)
    return FdModule(f"{V.name}*", tuple(-w for w in V.weights), SE.T(), SF.T(),
                    factors=("dual", V))


def left_dual(V: FdModule) -> FdModule:
    """Left dual *V with (x f)(v) = f(S^-1(x) v)."""
    SE, SF = antipode_images(V, inverse=True)
    return FdModule(f"*{V.name}", tuple(-w for w in V.weights), SE.T(), SF.T(),
                    factors=("ldual", V))


def tensor(*mods: FdModule) -> FdModule:
    """Tensor product via the iterated coproduct, lexicographic basis."""
    if len(mods) == 1:
        return mods[0]
    V, W = mods[0], tensor(*mods[1:]) if len(mods) > 2 else mods[1]
    E = V.E.kron(W.K) + V.identity().kron(W.E)
    F = V.F.kron(W.identity()) + V.Kinv.kron(W.F)
    weights = tuple(a + b for a in V.weights for b in W.weights)
    return FdModule("(" + "x".join(m.name for m in mods) + ")", weights, E, F,
                    factors=("tensor",) + tuple(mods))


def flip(dV: int, dW: int) -> Mat:
    """Permutation V(x)W -> W(x)V."""
    n = dV * dW
    P = Mat.zeros(n)
    for i in range(dV):
        for j in range(dW):
            P.rows[j * dV + i][i * dW + j] = ONE
    return P


def _pow(M: Mat, k: int) -> Mat:
    out = Mat.identity(M.nrows)
    for _ in range(k):
        out = out @ M
    return out


def cartan_factor(V: FdModule, W: FdModule, a=1) -> Mat:
    """q^(a * sum x_i (x) x_i) = q^(a h(x)h/2) on V(x)W."""
    return Mat.diag([qpow(a * FracFn_half(wv * ww)) for wv in V.weights for ww in W.weights])


def FracFn_half(n: int):
    from fractions import Fraction
    return Fraction(n, 2)


# ---------------------------------------------------------------------------
# universal R
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def r_coefficients(nmax: int) -> tuple[FracFn, ...]:
    """c_0..c_nmax in R = q^(h(x)h/2) sum c_n E^n (x) F^n.

    Fixed by R Delta(x) = Delta^op(x) R on irrep(nmax) (x) irrep(nmax) with c_0 = 1.
    """
    if nmax == 0:
        return (ONE,)
    V = irrep(nmax)
    W = V
    H = cartan_factor(V, W)
    terms = [H @ _pow(V.E, n).kron(_pow(W.F, n)) for n in range(nmax + 1)]
    VW = tensor(V, W)
    P = flip(V.dim, W.dim)
    WV = tensor(W, V)
    eqs = []
    for gen in ("E", "F"):
        X = getattr(VW, gen)
        Xop = P @ getattr(WV, gen) @ P
        blocks = [T @ X - Xop @ T for T in terms]
        for i in range(VW.dim):
            for j in range(VW.dim):
                eq = {None: blocks[0].rows[i][j]}
                for n in range(1, nmax + 1):
                    c = blocks[n].rows[i][j]
                    if not c.is_zero():
                        eq[n] = c
                eqs.append(eq)
    try:
        sol = solve_linear(eqs, list(range(1, nmax + 1)))
    except ValueError as exc:
        raise ConventionError(f"universal R ansatz has no solution: {exc}") from None
    return (ONE,) + tuple(sol[n] for n in range(1, nmax + 1))


def r_coefficient_closed(n: int) -> FracFn:
    """Textbook value q^(n(n-1)/2) (q-q^-1)^n / [n]! used as a cross-check."""
    return qpow(n * (n - 1) // 2) * (qpow(1) - qpow(-1)) ** n / qfact(n)


def universal_R(V: FdModule, W: FdModule) -> Mat:
    """Matrix of the universal R-matrix on V(x)W."""
    nmax = min(_nilpotency(V.E), _nilpotency(W.F))
    cs = r_coefficients(max(nmax, 1))
    acc = Mat.zeros(V.dim * W.dim)
    En, Fn = V.identity(), W.identity()
    for n in range(nmax + 1):
        if n:
            En, Fn = En @ V.E, Fn @ W.F
        acc = acc + En.kron(Fn).scale(cs[n])
    return cartan_factor(V, W) @ acc


def _nilpotency(M: Mat) -> int:
    """Largest n with M^n != 0."""
    n, P = 0, M
    while not P.is_zero():
        n += 1
        P = P @ M
    return n


def R21(V: FdModule, W: FdModule) -> Mat:
    """R^21 acting on V(x)W (i.e. the flipped R_{WV})."""
    P = flip(W.dim, V.dim)
    return P @ universal_R(W, V) @ P.T()


def embed(op: Mat, mods: Sequence[FdModule], positions: Sequence[int]) -> Mat:
    """Matrix of an operator on the listed factors, acting on the full tensor product."""
    dims = [m.dim for m in mods]
    n = 1
    for d in dims:
        n *= d
    pos = list(positions)
    sub_dims = [dims[p] for p in pos]
    out = Mat.zeros(n)
    for idx in product(*[range(d) for d in dims]):
        col = _flat(idx, dims)
        sub_col = _flat([idx[p] for p in pos], sub_dims)
        for sub_row in range(op.nrows):
            c = op.rows[sub_row][sub_col]
            if c.is_zero():
                continue
            ridx = list(idx)
            for p, v in zip(pos, _unflat(sub_row, sub_dims)):
                ridx[p] = v
            out.rows[_flat(ridx, dims)][col] = c
    return out


def _flat(idx, dims) -> int:
    k = 0
    for i, d in zip(idx, dims):
        k = k * d + i
    return k


def _unflat(k, dims) -> list[int]:
    out = []
    for d in reversed(dims):
        out.append(k % d)
        k //= d
    return out[::-1]


def drinfeld_u(V: FdModule) -> Mat:
    """u = sum S(b_i) a_i on V, read off from R on V(x)V* by evaluation.

    <e_i^*, u e_j> = ev(R (e_j (x) e_i^*)) with ev(v (x) f) = f(v).
    """
    Vs = dual(V)
    R = universal_R(V, Vs)
    d = V.dim
    out = Mat.zeros(d)
    for i in range(d):
        for j in range(d):
            col = j * d + i
            acc = ZERO
            for k in range(d):
                acc = acc + R.rows[k * d + k][col]
            out.rows[i][j] = acc
    return out


def antipode_of_element(V: FdModule, x_on_dual: Mat) -> Mat:
    """pi_V(S(x)) given the matrix of x on V* = the transpose."""
    return x_on_dual.T()
