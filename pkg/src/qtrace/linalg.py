"""Dense matrices over FracFn with exact Gaussian elimination."""
from __future__ import annotations

from typing import Callable, Sequence

from .field import ONE, ZERO, FracFn, _as_frac, frac_eq


class SingularMatrixError(ZeroDivisionError):
    pass


class Mat:
    """Small dense matrix; ``rows[i][j]`` is the coefficient of e_i in M e_j."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[_as_frac(x) if not isinstance(x, FracFn) else x for x in r] for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Mat":
        m = n if m is None else m
        return cls([[ZERO] * m for _ in range(n)])

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def diag(cls, entries) -> "Mat":
        n = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = [[ZERO] * other.ncols for _ in range(self.nrows)]
        for i, row in enumerate(self.rows):
            acc = out[i]
            for k, a in enumerate(row):
                if a.is_zero():
                    continue
                for j, b in enumerate(other.rows[k]):
                    if not b.is_zero():
                        acc[j] = acc[j] + a * b
        return Mat(out)

    def apply(self, vec: Sequence[FracFn]) -> list[FracFn]:
        out = [ZERO] * self.nrows
        for i, row in enumerate(self.rows):
            acc = ZERO
            for a, v in zip(row, vec):
                if not a.is_zero() and not v.is_zero():
                    acc = acc + a * v
            out[i] = acc
        return out

    def __add__(self, other: "Mat") -> "Mat":
        return Mat([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Mat") -> "Mat":
        return Mat([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Mat([[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Mat":
        c = _as_frac(c)
        return Mat([[a * c for a in r] for r in self.rows])

    def map(self, fn: Callable[[FracFn], FracFn]) -> "Mat":
        return Mat([[fn(a) for a in r] for r in self.rows])

    def T(self) -> "Mat":
        return Mat([list(c) for c in zip(*self.rows)]) if self.rows else Mat([])

    def kron(self, other: "Mat") -> "Mat":
        n, m = other.shape
        out = [[ZERO] * (self.ncols * m) for _ in range(self.nrows * n)]
        for i, row in enumerate(self.rows):
            for j, a in enumerate(row):
                if a.is_zero():
                    continue
                for k, orow in enumerate(other.rows):
                    for l, b in enumerate(orow):
                        if not b.is_zero():
                            out[i * n + k][j * m + l] = a * b
        return Mat(out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat([[self.rows[i][j] for j in cols] for i in rows])

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def is_diagonal(self) -> bool:
        return all(a.is_zero() for i, r in enumerate(self.rows) for j, a in enumerate(r) if i != j)

    def equals(self, other: "Mat") -> bool:
        return self.shape == other.shape and all(
            frac_eq(a, b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def inverse(self) -> "Mat":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        _reduce(aug, n)
        return Mat([r[n:] for r in aug])

    def solve(self, rhs: "Mat") -> "Mat":
        n = self.nrows
        aug = [list(r) + list(b) for r, b in zip(self.rows, rhs.rows)]
        _reduce(aug, n)
        return Mat([r[n:] for r in aug])

    def det(self) -> FracFn:
        n = self.nrows
        a = [list(r) for r in self.rows]
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
            if p is None:
                return ZERO
            if p != c:
                a[c], a[p] = a[p], a[c]
                d = -d
            piv = a[c][c]
            d = d * piv
            inv = piv.inverse()
            for r in range(c + 1, n):
                if a[r][c].is_zero():
                    continue
                f = a[r][c] * inv
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return d

    def to_text(self) -> str:
        return "\n".join(" ; ".join(a.to_text() for a in r) for r in self.rows)

    def __repr__(self):
        return "Mat(\n" + "\n".join("  [" + ", ".join(str(a) for a in r) + "]" for r in self.rows) + "\n)"


def _reduce(aug, n):
    """Gauss-Jordan on the first n columns in place."""
    for c in range(n):
        p = next((r for r in range(c, n) if not aug[r][c].is_zero()), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[p] = aug[p], aug[c]
        inv = aug[c][c].inverse()
        if not inv.is_one():
            aug[c] = [x * inv for x in aug[c]]
        for r in range(n):
            if r == c or aug[r][c].is_zero():
                continue
            f = aug[r][c]
            aug[r] = [x - f * y if not y.is_zero() else x for x, y in zip(aug[r], aug[c])]


def solve_linear(eqs: list[dict], unknowns: list) -> dict:
    """Solve an (over)determined linear system.

    Each equation is a dict ``{unknown: coeff, None: constant}`` meaning
    ``sum coeff*unknown + constant = 0``.  Raises ``ValueError`` if the system
    is inconsistent or does not fix every unknown.
    """
    rows = []
    for e in eqs:
        row = [e.get(u, ZERO) for u in unknowns] + [-e.get(None, ZERO)]
        if any(not x.is_zero() for x in row):
            rows.append(row)
    n = len(unknowns)
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if not rows[i][n].is_zero():
            raise ValueError("inconsistent linear system")
    if len(pivots) < n:
        raise ValueError("under-determined linear system")
    return {unknowns[c]: rows[i][n] for i, c in enumerate(pivots)}


def rank(rows: list[list[FracFn]]) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(rows)) if not rows[i][c].is_zero()), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        for i in range(r + 1, len(rows)):
            if not rows[i][c].is_zero():
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r
