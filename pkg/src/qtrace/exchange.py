"""Fusion matrices, exchange matrices, Q(lam) and G(lam) for U_q(sl2).

Dynamical arguments are carried by one variable: ``xi = q^-lam`` on the
lambda side, ``y = q^mu`` on the mu side.  An argument shift lam -> lam + k
is xi -> q^-k xi, and mu -> mu + k is y -> q^k y.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from fractions import Fraction
from itertools import product
from typing import Sequence

from .field import ONE, XI, Y, ZERO, FracFn, frac_eq, qpow
from .linalg import Mat
from .uq import (FdModule, R21, dual, embed, flip, irrep, left_dual, tensor,
                 universal_R, _flat, _unflat)
from .verma import apply_intertwiner, build_intertwiner


class NonGenericError(ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# argument substitutions
# ---------------------------------------------------------------------------


def arg_shift(f: FracFn, var: str, k) -> FracFn:
    """Argument -> argument + k (k a half-integer)."""
    k = Fraction(k)
    if k == 0:
        return f
    e = int(2 * k)
    if var == "xi":
        return f.subs_monomial({"xi": (1, {"xi": 1, "s": -e})})
    return f.subs_monomial({"y": (1, {"y": 1, "s": e})})


def arg_reflect(f: FracFn, var: str) -> FracFn:
    """Argument -> -argument - rho."""
    if var == "xi":
        return f.subs_monomial({"xi": (1, {"xi": -1, "s": 2})})
    return f.subs_monomial({"y": (1, {"y": -1, "s": -2})})


def xi_to_y(f: FracFn) -> FracFn:
    """Reinterpret a function of lam (through xi) as the same function of mu."""
    return f.subs_monomial({"xi": (1, {"y": -1})})


def arg_power(var: str, a) -> FracFn:
    """q^(a * argument)."""
    a = Fraction(a)
    if a.denominator != 1:
        raise ValueError("fractional power of the dynamical variable")
    return XI ** (-int(a)) if var == "xi" else Y ** int(a)


# ---------------------------------------------------------------------------
# DynamicalMatrix
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DynamicalMatrix:
    """Operator on a tensor product whose entries depend on one dynamical argument."""

    mods: tuple
    mat: Mat
    var: str = "xi"

    @property
    def dim(self) -> int:
        return self.mat.nrows

    def map(self, fn) -> "DynamicalMatrix":
        return DynamicalMatrix(self.mods, self.mat.map(fn), self.var)

    def shift(self, k) -> "DynamicalMatrix":
        return self.map(lambda f: arg_shift(f, self.var, k))

    def reflect(self) -> "DynamicalMatrix":
        return self.map(lambda f: arg_reflect(f, self.var))

    def to_mu(self) -> "DynamicalMatrix":
        if self.var == "y":
            return self
        return DynamicalMatrix(self.mods, self.mat.map(xi_to_y), "y")

    def inverse(self) -> "DynamicalMatrix":
        return DynamicalMatrix(self.mods, self.mat.inverse(), self.var)

    def __matmul__(self, other: "DynamicalMatrix") -> "DynamicalMatrix":
        return DynamicalMatrix(self.mods, self.mat @ other.mat, self.var)

    def equals(self, other: "DynamicalMatrix") -> bool:
        return self.mat.equals(other.mat)

    def is_weight_zero(self) -> bool:
        ws = weights_of(self.mods)
        return all(self.mat.rows[i][j].is_zero() for i in range(self.dim)
                   for j in range(self.dim) if ws[i] != ws[j])

    def block(self, weight: int) -> Mat:
        idx = [i for i, w in enumerate(weights_of(self.mods)) if w == weight]
        return self.mat.submatrix(idx, idx)

    def to_text(self) -> str:
        names = ",".join(m.name for m in self.mods)
        return f"dynamical {self.var} on {names}\n{self.mat.to_text()}"


def weights_of(mods: Sequence[FdModule]) -> list[int]:
    return [sum(ws) for ws in component_weights(mods)]


def component_weights(mods: Sequence[FdModule]) -> list[tuple]:
    return [tuple(m.weights[i] for m, i in zip(mods, idx))
            for idx in product(*[range(m.dim) for m in mods])]


def shifted_embed(dm: DynamicalMatrix, mods: Sequence[FdModule], positions: Sequence[int],
                  shift_positions: Sequence[int] = (), const=0, sign: int = 1) -> Mat:
    """Embed ``dm`` (acting on the factors at ``positions``) into the tensor
    product ``mods`` with argument arg + sign*(sum of weights at
    ``shift_positions``) + const, read off per basis vector.

    Weights of the shift components are taken from the input vector; callers
    only use components the operator does not touch.
    """
    cache: dict = {}
    dims = [m.dim for m in mods]
    sub_dims = [dims[p] for p in positions]
    n = 1
    for d in dims:
        n *= d
    out = Mat.zeros(n)
    for idx in product(*[range(d) for d in dims]):
        col = _flat(idx, dims)
        k = const + sign * sum(mods[p].weights[idx[p]] for p in shift_positions)
        if k not in cache:
            cache[k] = dm.shift(k).mat
        op = cache[k]
        sub_col = _flat([idx[p] for p in positions], sub_dims)
        for sub_row in range(op.nrows):
            c = op.rows[sub_row][sub_col]
            if c.is_zero():
                continue
            ridx = list(idx)
            for p, v in zip(positions, _unflat(sub_row, sub_dims)):
                ridx[p] = v
            out.rows[_flat(ridx, dims)][col] = c
    return out


# ---------------------------------------------------------------------------
# fusion matrices
# ---------------------------------------------------------------------------


def _key(*mods):
    return tuple(id(m) for m in mods)


_J_CACHE: dict = {}
_DISK_CACHE: Path | None = None
# bump whenever a convention affecting J changes
CACHE_VERSION = "J-abrr-1"


def set_disk_cache(path) -> None:
    """Persist ABRR fusion matrices under ``path`` (None disables)."""
    global _DISK_CACHE
    _DISK_CACHE = None if path is None else Path(path)


def _disk_path(W: FdModule, V: FdModule) -> Path | None:
    if _DISK_CACHE is None:
        return None
    h = hashlib.sha256("\n".join([CACHE_VERSION, W.to_text(), V.to_text()]).encode()).hexdigest()
    return _DISK_CACHE / f"J_{h[:32]}.json"


def _disk_load(W, V) -> Mat | None:
    path = _disk_path(W, V)
    if path is None or not path.exists():
        return None
    rows = json.loads(path.read_text())["rows"]
    return Mat([[FracFn.from_text(x) for x in r] for r in rows])


def _disk_store(W, V, M: Mat) -> None:
    path = _disk_path(W, V)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"version": CACHE_VERSION, "W": W.name, "V": V.name,
               "rows": [[x.to_text() for x in r] for r in M.rows]}
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(payload, sort_keys=True))
    tmp.replace(path)


def fusion_J_abrr(W: FdModule, V: FdModule) -> DynamicalMatrix:
    """J_WV(lam) on W(x)V from the ABRR equation

        J (q^(2(lam+rho) - sum x_i^2))_2 = R^21 q^(-sum x_i(x)x_i) (q^(2(lam+rho) - sum x_i^2))_2 J,

    solved degree by degree in the raising degree of the second component.
    """
    key = ("abrr",) + _key(W, V)
    if key in _J_CACHE:
        return _J_CACHE[key][0]
    cached = _disk_load(W, V)
    if cached is not None:
        out = DynamicalMatrix((W, V), cached, "xi")
        _J_CACHE[key] = (out, W, V)
        return out
    n = W.dim * V.dim
    R0 = R21(W, V) @ Mat.diag([qpow(-Fraction(a * b, 2)) for a in W.weights for b in V.weights])
    nu2 = [b for a in W.weights for b in V.weights]
    # b(nu) = q^((lam+1) nu - nu^2/2) = xi^-nu q^(nu - nu^2/2)
    bvals = [XI ** (-v) * qpow(Fraction(2 * v - v * v, 2)) for v in nu2]
    J = [[ZERO] * n for _ in range(n)]
    order = sorted(((nu2[i] - nu2[j]) // 2, i, j) for i in range(n) for j in range(n)
                   if nu2[i] >= nu2[j])
    for d, i, j in order:
        if d == 0:
            J[i][j] = ONE if i == j else ZERO
            continue
        acc = ZERO
        for k in range(n):
            if k == i:
                continue
            r = R0.rows[i][k]
            if r.is_zero() or J[k][j].is_zero():
                continue
            acc = acc + r * bvals[k] * J[k][j]
        if acc.is_zero():
            continue
        den = bvals[j] - bvals[i]
        if den.is_zero():
            raise NonGenericError("ABRR step is singular")
        J[i][j] = acc / den
    out = DynamicalMatrix((W, V), Mat(J), "xi")
    _disk_store(W, V, out.mat)
    _J_CACHE[key] = (out, W, V)
    return out


def abrr_residual(W: FdModule, V: FdModule, J: DynamicalMatrix) -> Mat:
    R0 = R21(W, V) @ Mat.diag([qpow(-Fraction(a * b, 2)) for a in W.weights for b in V.weights])
    nu2 = [b for a in W.weights for b in V.weights]
    B = Mat.diag([XI ** (-v) * qpow(Fraction(2 * v - v * v, 2)) for v in nu2])
    return J.mat @ B - R0 @ B @ J.mat


def fusion_J_compose(W: FdModule, V: FdModule, D: int | None = None) -> DynamicalMatrix:
    """J_WV(lam) read off from (Phi^w_(lam - wt v) (x) 1) Phi^v_lam v_lam.

    The composite is expanded through the Verma basis; the degree-0 part is
    Phi^{J(w(x)v)} evaluated on the highest vector, i.e. v'' (x) J(w (x) v).
    """
    key = ("compose",) + _key(W, V)
    if key in _J_CACHE:
        return _J_CACHE[key][0]
    if D is None:
        D = W.dim + V.dim
    qlam = XI.inverse()
    n = W.dim * V.dim
    J = Mat.zeros(n)
    for jw, jv in product(range(W.dim), range(V.dim)):
        phi_v = build_intertwiner(V, jv, qlam)
        phi_w = build_intertwiner(W, jw, phi_v.qnu_out)
        if len(phi_v.u) - 1 > D:
            raise ValueError("cutoff too small to read the fusion matrix")
        col = jw * V.dim + jv
        inner, _ = apply_intertwiner(phi_v, 0)
        for (b, j), x in inner.items():
            outer, _ = apply_intertwiner(phi_w, b, D)
            for (b2, j2), y in outer.items():
                if b2 == 0:
                    row = j2 * V.dim + j
                    J.rows[row][col] = J.rows[row][col] + x * y
    out = DynamicalMatrix((W, V), J, "xi")
    _J_CACHE[key] = (out, W, V)
    return out


def fusion_J(W: FdModule, V: FdModule) -> DynamicalMatrix:
    return fusion_J_abrr(W, V)


def blackboard(dm: DynamicalMatrix) -> DynamicalMatrix:
    """F(lam) -> F(-lam - rho)."""
    return dm.reflect()


def JJ(W: FdModule, V: FdModule) -> DynamicalMatrix:
    return blackboard(fusion_J(W, V))


# ---------------------------------------------------------------------------
# exchange matrices
# ---------------------------------------------------------------------------


_R_CACHE: dict = {}


def exchange_R(V: FdModule, W: FdModule) -> DynamicalMatrix:
    """R_VW(lam) = J_VW^-1(lam) R^21|_{V(x)W} J^21_WV(lam)."""
    key = _key(V, W)
    if key in _R_CACHE:
        return _R_CACHE[key][0]
    Jvw = fusion_J(V, W).mat
    Jwv = fusion_J(W, V).mat
    P = flip(W.dim, V.dim)  # W(x)V -> V(x)W
    J21 = P @ Jwv @ P.T()
    out = DynamicalMatrix((V, W), Jvw.inverse() @ R21(V, W) @ J21, "xi")
    _R_CACHE[key] = (out, V, W)
    return out


def RR(V: FdModule, W: FdModule) -> DynamicalMatrix:
    """Blackboard exchange matrix R(-lam - rho)."""
    return blackboard(exchange_R(V, W))


# ---------------------------------------------------------------------------
# Q and G
# ---------------------------------------------------------------------------


_Q_CACHE: dict = {}


def Q_of(V: FdModule) -> DynamicalMatrix:
    """Q(lam) = m21 (1 (x) S^-1) JJ(lam) on V.

    With JJ = sum a_i (x) b_i,  <f, Q v> = ev(JJ_{V,*V}(v (x) f)) where *V is
    the left dual (action through S^-1).
    """
    key = _key(V)
    if key in _Q_CACHE:
        return _Q_CACHE[key][0]
    Vl = left_dual(V)
    J = JJ(V, Vl).mat
    d = V.dim
    out = Mat.zeros(d)
    for i in range(d):
        for j in range(d):
            col = j * d + i
            acc = ZERO
            for k in range(d):
                acc = acc + J.rows[k * d + k][col]
            out.rows[i][j] = acc
    res = DynamicalMatrix((V,), out, "xi")
    _Q_CACHE[key] = (res, V, Vl)
    return res


def Q_closed_zero_weight(m: int) -> FracFn:
    """q^-2m prod_{j=1..m} (q^(-2mu-2j+2) - q^-2m) / (q^(-2mu-2j) - 1), in y = q^mu."""
    out = qpow(-2 * m)
    for j in range(1, m + 1):
        out = out * (Y ** -2 * qpow(-2 * j + 2) - qpow(-2 * m)) / (Y ** -2 * qpow(-2 * j) - ONE)
    return out


def Q_closed_fundamental() -> tuple[FracFn, FracFn]:
    """(Q_{1,-1}, Q_{1,1}) in y = q^mu."""
    return ONE, (Y ** -2 - qpow(-2)) / (Y ** -2 - ONE)


def S_Q(V: FdModule) -> DynamicalMatrix:
    """Matrix of S(Q)(lam) on V: the transpose of Q(lam) on V*."""
    Qd = Q_of(dual(V))
    return DynamicalMatrix((V,), Qd.mat.T(), "xi")


def G_of(V: FdModule) -> DynamicalMatrix:
    """G(lam) = q^(-2 rho) Q^-1(lam) S(Q)(lam - h) on V."""
    Qinv = Q_of(V).mat.inverse()
    SQ = S_Q(V)
    shifted = Mat.zeros(V.dim)
    for j, w in enumerate(V.weights):
        col = SQ.shift(-w).mat
        for i in range(V.dim):
            shifted.rows[i][j] = col.rows[i][j]
    G = V.K_power(-1) @ Qinv @ shifted
    return DynamicalMatrix((V,), G, "xi")


def weyl_ratio(V: FdModule) -> DynamicalMatrix:
    """delta_q(lam) / delta_q(lam - h), diagonal on V."""
    def delta(k):
        # q^(lam - k) - q^(-lam + k)
        return XI.inverse() * qpow(-k) - XI * qpow(k)
    return DynamicalMatrix((V,), Mat.diag([delta(0) / delta(w) for w in V.weights]), "xi")


# ---------------------------------------------------------------------------
# multi-component fusion
# ---------------------------------------------------------------------------


def JJ_split(mods: Sequence[FdModule], k: int) -> Mat:
    """JJ^{k, k+1..N} on the full tensor product (indices from 0)."""
    mods = list(mods)
    rest = tensor(*mods[k + 1:]) if len(mods) - k - 1 > 1 else mods[k + 1]
    J = JJ(mods[k], rest)
    small = J.mat
    left = 1
    for m in mods[:k]:
        left *= m.dim
    return Mat.identity(left).kron(small)


def J_multi(mods: Sequence[FdModule]) -> DynamicalMatrix:
    """JJ^{1..N}(lam) = JJ^{1,2..N} JJ^{2,3..N} ... JJ^{N-1,N}."""
    mods = tuple(mods)
    n = 1
    for m in mods:
        n *= m.dim
    out = Mat.identity(n)
    for k in range(len(mods) - 1):
        out = out @ JJ_split(mods, k)
    return DynamicalMatrix(mods, out, "xi")


# ---------------------------------------------------------------------------
# structural identities
# ---------------------------------------------------------------------------


def _mismatch(lhs: Mat, rhs: Mat) -> dict | None:
    for i in range(lhs.nrows):
        for j in range(lhs.ncols):
            if not frac_eq(lhs.rows[i][j], rhs.rows[i][j]):
                return {"entry": (i, j), "residual": (lhs.rows[i][j] - rhs.rows[i][j]).to_text()}
    return None


def _record(name: str, mods, lhs: Mat, rhs: Mat) -> dict:
    bad = _mismatch(lhs, rhs)
    rec = {"check": name, "modules": [m.name for m in mods], "pass": bad is None}
    if bad:
        rec.update(bad)
    return rec


def cocycle_check(V1: FdModule, V2: FdModule, V3: FdModule) -> dict:
    """J^{12,3}(lam) J^{12}(lam - h^(3)) = J^{1,23}(lam) J^{23}(lam)."""
    mods = (V1, V2, V3)
    J12_3 = fusion_J(tensor(V1, V2), V3).mat
    J1_23 = fusion_J(V1, tensor(V2, V3)).mat
    J12 = shifted_embed(fusion_J(V1, V2), mods, (0, 1), (2,), sign=-1)
    J23 = Mat.identity(V1.dim).kron(fusion_J(V2, V3).mat)
    return _record("cocycle", mods, J12_3 @ J12, J1_23 @ J23)


def fusion_identity_check(W: FdModule, Vs: Sequence[FdModule]) -> dict:
    """JJ^{1..N}(lam)^-1 RR^{0,1..N}(lam) JJ^{1..N}(lam + h^(0)) = RR^{01}(lam + h^(2..N)) .. RR^{0N}(lam)."""
    mods = (W,) + tuple(Vs)
    N = len(Vs)
    Jm = J_multi(Vs) if N > 1 else DynamicalMatrix(tuple(Vs), Mat.identity(Vs[0].dim))
    Jleft = Mat.identity(W.dim).kron(Jm.mat)
    Jshift = shifted_embed(Jm, mods, tuple(range(1, N + 1)), (0,))
    big = RR(W, tensor(*Vs) if N > 1 else Vs[0]).mat
    lhs = Jleft.inverse() @ big @ Jshift
    rhs = Mat.identity(lhs.nrows)
    for k in range(1, N + 1):
        rhs = rhs @ shifted_embed(RR(W, mods[k]), mods, (0, k), range(k + 1, N + 1))
    return _record("fusion-identity", mods, lhs, rhs)


def transpose_check(W: FdModule, V: FdModule) -> dict:
    """RR_WV(lam)^{t1 t2} = (Q(lam) (x) Q(lam - h1)) RR_{W*V*}(lam - h1 - h2) (Q^-1(lam - h2) (x) Q^-1(lam))."""
    Wd, Vd = dual(W), dual(V)
    mods = (Wd, Vd)
    lhs = RR(W, V).mat.T()
    Qw, Qv = Q_of(Wd), Q_of(Vd)
    left = shifted_embed(Qw, mods, (0,), ()) @ shifted_embed(Qv, mods, (1,), (0,), sign=-1)
    mid = shifted_embed(RR(Wd, Vd), mods, (0, 1), (0, 1), sign=-1)
    right = shifted_embed(Qw.inverse(), mods, (0,), (1,), sign=-1) @ shifted_embed(Qv.inverse(), mods, (1,), ())
    return _record("transpose", (W, V), lhs, left @ mid @ right)


def qdybe_check(V1: FdModule, V2: FdModule, V3: FdModule) -> dict:
    """R^12(lam - h3) R^13(lam) R^23(lam - h1) = R^23(lam) R^13(lam - h2) R^12(lam)."""
    mods = (V1, V2, V3)
    R12, R13, R23 = exchange_R(V1, V2), exchange_R(V1, V3), exchange_R(V2, V3)
    lhs = (shifted_embed(R12, mods, (0, 1), (2,), sign=-1) @ shifted_embed(R13, mods, (0, 2), ())
           @ shifted_embed(R23, mods, (1, 2), (0,), sign=-1))
    rhs = (shifted_embed(R23, mods, (1, 2), ()) @ shifted_embed(R13, mods, (0, 2), (1,), sign=-1)
           @ shifted_embed(R12, mods, (0, 1), ()))
    return _record("qdybe", mods, lhs, rhs)


def abrr_cross_check(W: FdModule, V: FdModule) -> dict:
    """ABRR solution against the intertwiner-composition oracle."""
    return _record("abrr", (W, V), fusion_J_abrr(W, V).mat, fusion_J_compose(W, V).mat)


def identity_checks(mods: Sequence[FdModule] | None = None) -> list[dict]:
    """Cocycle, fusion identity and transpose relation on irrep(1)-based combinations."""
    a, b = irrep(1), irrep(2)
    out = [cocycle_check(a, a, a), cocycle_check(a, b, a), cocycle_check(irrep(0), a, a),
           fusion_identity_check(a, [a]), fusion_identity_check(a, [a, a]),
           fusion_identity_check(a, [b, a]),
           transpose_check(a, a), transpose_check(a, b)]
    return out
