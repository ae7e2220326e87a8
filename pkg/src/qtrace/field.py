"""Exact scalar arithmetic.

Everything in the package is a rational function over Q in a fixed set of
formal variables.  The polynomial layer is python-flint's ``fmpz_mpoly``;
on top of it this module provides

* :class:`LPoly`, sparse Laurent polynomials with rational coefficients,
* :class:`FracFn`, reduced fractions of integer polynomials,
* :class:`TraceSeries`, truncated Laurent series in one variable whose
  coefficients are :class:`FracFn`,
* :class:`PrefactoredFn`, a body times the formal factor
  ``q^(c*lam*mu + b*lam + d*mu)``.

Variable conventions (sl2 scalar convention, rho = 1):

* ``s``: q^(1/2); every power of q is a power of s
* ``xi``: q^(-lam), the trace-series variable
* ``y``: q^(mu), with ``yh`` = q^(mu/2) where half powers are needed

The remaining variables are free formal symbols used by individual modules
(``t``, ``A``, ``T1..T4``, Macdonald variables ``X1..X3``, ``Y1..Y3``, ...).
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping

import flint

Ratio = Fraction

VARIABLES = (
    "s", "xi", "y", "yh", "t", "A", "lam", "mu", "ell", "gam",
    "T1", "T2", "T3", "T4",
    "X1", "X2", "X3", "Y1", "Y2", "Y3", "z1", "z2",
)
NVARS = len(VARIABLES)
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_ZCTX = flint.fmpz_mpoly_ctx.get(VARIABLES, "lex")
_QCTX = flint.fmpq_mpoly_ctx.get(VARIABLES, "lex")
_ZERO_EXP = (0,) * NVARS


class ConventionError(ValueError):
    """A substitution or convention would leave the Laurent/rational world."""


class IrregularSeriesError(ValueError):
    """Series expansion requested at a point where the denominator vanishes."""


def var_index(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise KeyError(f"unknown variable {name!r}") from None


def _exp_vector(exps: Mapping[str, int] | None) -> list[int]:
    vec = [0] * NVARS
    if exps:
        for name, e in exps.items():
            vec[var_index(name)] += int(e)
    return vec


def _zmono(vec: Iterable[int], coef=1) -> flint.fmpz_mpoly:
    return _ZCTX.from_dict({tuple(vec): coef})


_ZONE = _zmono(_ZERO_EXP)


# ---------------------------------------------------------------------------
# LPoly
# ---------------------------------------------------------------------------


class LPoly:
    """Sparse Laurent polynomial with rational coefficients.

    Stored as ``shift-monomial * poly`` where ``poly`` has no monomial content.
    """

    __slots__ = ("_poly", "_shift")

    def __init__(self, terms: Mapping[tuple, Fraction | int] | None = None):
        terms = {tuple(e): Fraction(c) for e, c in (terms or {}).items() if c != 0}
        for e in terms:
            if len(e) != NVARS:
                raise ValueError("exponent vectors must cover every variable")
        self._set(terms)

    def _set(self, terms: dict):
        if not terms:
            self._shift = _ZERO_EXP
            self._poly = _QCTX.from_dict({})
            return
        shift = tuple(min(e[i] for e in terms) for i in range(NVARS))
        self._shift = shift
        self._poly = _QCTX.from_dict(
            {tuple(a - b for a, b in zip(e, shift)): flint.fmpq(c.numerator, c.denominator)
             for e, c in terms.items()}
        )

    @classmethod
    def _from_parts(cls, poly, shift):
        out = cls.__new__(cls)
        out._set({tuple(a + b for a, b in zip(e, shift)): Fraction(int(c.p), int(c.q))
                  for e, c in poly.to_dict().items()})
        return out

    @classmethod
    def var(cls, name: str, power: int = 1) -> "LPoly":
        vec = [0] * NVARS
        vec[var_index(name)] = power
        return cls({tuple(vec): 1})

    @classmethod
    def const(cls, c) -> "LPoly":
        return cls({_ZERO_EXP: Fraction(c)})

    @property
    def terms(self) -> dict[tuple, Fraction]:
        return {tuple(a + b for a, b in zip(e, self._shift)): Fraction(int(c.p), int(c.q))
                for e, c in self._poly.to_dict().items()}

    def is_zero(self) -> bool:
        return self._poly.is_zero()

    def _aligned(self, other: "LPoly"):
        shift = tuple(min(a, b) for a, b in zip(self._shift, other._shift))

        def lift(p: LPoly):
            d = tuple(a - b for a, b in zip(p._shift, shift))
            return p._poly * _QCTX.from_dict({d: 1})

        return lift(self), lift(other), shift

    def __add__(self, other):
        other = _as_lpoly(other)
        a, b, shift = self._aligned(other)
        return LPoly._from_parts(a + b, shift)

    __radd__ = __add__

    def __neg__(self):
        return LPoly._from_parts(-self._poly, self._shift)

    def __sub__(self, other):
        return self + (-_as_lpoly(other))

    def __rsub__(self, other):
        return _as_lpoly(other) - self

    def __mul__(self, other):
        other = _as_lpoly(other)
        shift = tuple(a + b for a, b in zip(self._shift, other._shift))
        return LPoly._from_parts(self._poly * other._poly, shift)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers leave LPoly; use FracFn")
        shift = tuple(n * a for a in self._shift)
        return LPoly._from_parts(self._poly ** n, shift)

    def __eq__(self, other):
        try:
            other = _as_lpoly(other)
        except TypeError:
            return NotImplemented
        return self._shift == other._shift and self._poly == other._poly

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def to_frac(self) -> "FracFn":
        return FracFn.from_lpoly(self)

    def to_text(self) -> str:
        return _terms_text(self.terms)

    @classmethod
    def from_text(cls, text: str) -> "LPoly":
        return cls(_parse_terms(text))

    def __repr__(self):
        return f"LPoly({self.to_frac()})"


def _as_lpoly(x) -> LPoly:
    if isinstance(x, LPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return LPoly.const(x)
    raise TypeError(f"cannot convert {type(x).__name__} to LPoly")


def lp_arith(a: LPoly, b: LPoly, kind: str) -> LPoly:
    """Sum, difference or product of two Laurent polynomials."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown kind {kind!r}")


# ---------------------------------------------------------------------------
# canonical text
# ---------------------------------------------------------------------------


def _terms_text(terms: Mapping[tuple, Fraction]) -> str:
    used = sorted({i for e in terms for i, x in enumerate(e) if x}, key=int)
    names = ",".join(VARIABLES[i] for i in used)
    body = " ".join(
        f"{c}@{','.join(str(e[i]) for i in used)}"
        for e, c in sorted(terms.items(), reverse=True)
    )
    return f"[{names}|{body}]"


def _parse_terms(text: str) -> dict[tuple, Fraction]:
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ValueError(f"malformed term list: {text!r}")
    names, _, body = text[1:-1].partition("|")
    idx = [var_index(n) for n in names.split(",") if n]
    out: dict[tuple, Fraction] = {}
    for tok in body.split():
        coef, _, exps = tok.partition("@")
        vec = [0] * NVARS
        if idx:
            for i, e in zip(idx, exps.split(",")):
                vec[i] = int(e)
        out[tuple(vec)] = Fraction(coef)
    return out


# ---------------------------------------------------------------------------
# FracFn
# ---------------------------------------------------------------------------


def _zpoly_terms(p) -> dict:
    return {e: Fraction(int(c)) for e, c in p.to_dict().items()}


class FracFn:
    """Reduced fraction ``num/den`` of integer polynomials.

    Canonical form: ``gcd(num, den) = 1`` (including integer content) and the
    leading coefficient of ``den`` is positive.  Laurent monomials are pushed
    into the denominator, so two equal functions have identical parts.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=None, *, _raw=False):
        if isinstance(num, FracFn):
            self.num, self.den = num.num, num.den
            return
        if isinstance(num, Fraction):
            num, den0 = num.numerator, num.denominator
            den = den0 if den is None else den * den0
        if den is None:
            den = 1
        num = num if isinstance(num, flint.fmpz_mpoly) else _ZCTX.constant(int(num))
        den = den if isinstance(den, flint.fmpz_mpoly) else _ZCTX.constant(int(den))
        if _raw:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _normalize(num, den)

    # -- constructors -------------------------------------------------------

    @classmethod
    def var(cls, name: str, power: int = 1) -> "FracFn":
        return cls.monomial({name: power})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coef=1) -> "FracFn":
        vec = _exp_vector(exps)
        up = [max(e, 0) for e in vec]
        down = [max(-e, 0) for e in vec]
        return FracFn(_zmono(up), _zmono(down)) * FracFn(Fraction(coef))

    @classmethod
    def from_lpoly(cls, p: LPoly) -> "FracFn":
        terms = p.terms
        if not terms:
            return cls(0)
        shift = [min(e[i] for e in terms) for i in range(NVARS)]
        dens = [c.denominator for c in terms.values()]
        L = 1
        for d in dens:
            L = lcm(L, d)
        num = _ZCTX.from_dict({tuple(a - b for a, b in zip(e, shift)): int(c * L)
                               for e, c in terms.items()})
        up = [max(x, 0) for x in shift]
        down = [max(-x, 0) for x in shift]
        return cls(num * _zmono(up), _zmono(down) * L)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant")
        return Fraction(int(self.num.leading_coefficient()) if not self.num.is_zero() else 0,
                        int(self.den.leading_coefficient()))

    def variables(self) -> set[str]:
        used = set()
        for p in (self.num, self.den):
            for e in p.monoms():
                used.update(VARIABLES[i] for i, x in enumerate(e) if x)
        return used

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return FracFn(self.num + other.num, self.den)
        g = self.den.gcd(other.den)
        if g.is_one():
            return FracFn(self.num * other.den + other.num * self.den, self.den * other.den)
        a = other.den / g
        b = self.den / g
        return FracFn(self.num * a + other.num * b, self.den * a)

    __radd__ = __add__

    def __neg__(self):
        return FracFn(-self.num, self.den, _raw=True)

    def __sub__(self, other):
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return FracFn(0)
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        n1, d2 = (self.num, other.den) if g1.is_one() else (self.num / g1, other.den / g1)
        n2, d1 = (other.num, self.den) if g2.is_one() else (other.num / g2, self.den / g2)
        return FracFn(*_fix_content(n1 * n2, d1 * d2), _raw=True)

    __rmul__ = __mul__

    def inverse(self) -> "FracFn":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FracFn(*_fix_content(self.den, self.num), _raw=True)

    def __truediv__(self, other):
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        return FracFn(self.num ** n, self.den ** n, _raw=True)

    def __eq__(self, other):
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((str(self.num), str(self.den)))

    # -- substitution -------------------------------------------------------

    def subs_monomial(self, mapping: Mapping[str, tuple]) -> "FracFn":
        """Simultaneous substitution ``var -> coef * monomial``.

        ``mapping[name] = (coef, {var: exponent, ...})`` with Laurent exponents.
        """
        rules = {}
        for name, (coef, exps) in mapping.items():
            rules[var_index(name)] = (Fraction(coef), _exp_vector(exps))
        return FracFn(1) * _subs_mono_poly(self.num, rules) / _subs_mono_poly(self.den, rules)

    def subs(self, mapping: Mapping[str, "FracFn | int | Fraction"]) -> "FracFn":
        """Simultaneous substitution of arbitrary rational values."""
        vals = {var_index(k): _as_frac(v) for k, v in mapping.items()}
        return _subs_poly(self.num, vals) / _subs_poly(self.den, vals)

    def q_inverse(self) -> "FracFn":
        """q -> 1/q."""
        return self.subs_monomial({"s": (1, {"s": -1})})

    # -- structure ----------------------------------------------------------

    def coefficients_in(self, name: str):
        """Split ``num`` and ``den`` into powers of one variable."""
        i = var_index(name)
        return _split(self.num, i), _split(self.den, i)

    def degree_in(self, name: str) -> tuple[int, int]:
        i = var_index(name)
        return (max((e[i] for e in self.num.monoms()), default=0),
                max((e[i] for e in self.den.monoms()), default=0))

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        """Exact value at a rational point (raises ZeroDivisionError at poles)."""
        vals = {var_index(k): Fraction(v) for k, v in point.items()}
        d = _eval_poly(self.den, vals)
        if d == 0:
            raise ZeroDivisionError("pole")
        return _eval_poly(self.num, vals) / d

    def numerator(self) -> LPoly:
        return LPoly(_zpoly_terms(self.num))

    def denominator(self) -> LPoly:
        return LPoly(_zpoly_terms(self.den))

    # -- text ---------------------------------------------------------------

    def to_text(self) -> str:
        return f"{_terms_text(_zpoly_terms(self.num))}/{_terms_text(_zpoly_terms(self.den))}"

    @classmethod
    def from_text(cls, text: str) -> "FracFn":
        a, sep, b = text.strip().partition("]/[")
        if not sep:
            raise ValueError(f"malformed fraction text: {text!r}")
        num = LPoly(_parse_terms(a + "]"))
        den = LPoly(_parse_terms("[" + b))
        return FracFn.from_lpoly(num) / FracFn.from_lpoly(den)

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"FracFn({self})"


def _as_frac(x) -> FracFn | None:
    if isinstance(x, FracFn):
        return x
    if isinstance(x, (int, Fraction)):
        return FracFn(x)
    if isinstance(x, LPoly):
        return FracFn.from_lpoly(x)
    return None


def _fix_content(num, den):
    cd = den.content()
    cn = num.content()
    g = int(cn.gcd(cd)) if not num.is_zero() else int(cd)
    if g != 1:
        num = num / g
        den = den / g
    if den.leading_coefficient() < 0:
        num, den = -num, -den
    return num, den


def _normalize(num, den):
    if num.is_zero():
        return num, _ZONE
    g = num.gcd(den)
    if not g.is_one():
        num = num / g
        den = den / g
    return _fix_content(num, den)


def _split(p, i) -> dict[int, flint.fmpz_mpoly]:
    groups: dict[int, dict] = {}
    for e, c in p.to_dict().items():
        k = int(e[i])
        e2 = list(e)
        e2[i] = 0
        groups.setdefault(k, {})[tuple(e2)] = c
    return {k: _ZCTX.from_dict(v) for k, v in groups.items()}


def _subs_mono_poly(p, rules) -> FracFn:
    out: dict[tuple, Fraction] = {}
    for e, c in p.to_dict().items():
        e = tuple(int(x) for x in e)
        vec = list(e)
        coef = Fraction(int(c))
        for i, (rc, rvec) in rules.items():
            k = e[i]
            if k:
                vec[i] -= k
                coef *= rc ** k
                for j, x in enumerate(rvec):
                    if x:
                        vec[j] += k * x
        key = tuple(vec)
        out[key] = out.get(key, 0) + coef
    return FracFn.from_lpoly(LPoly(out))


def _subs_poly(p, vals: dict[int, FracFn]) -> FracFn:
    # common-denominator evaluation, one normalisation at the end
    degs = {i: max((e[i] for e in p.monoms()), default=0) for i in vals}
    pows: dict[tuple, flint.fmpz_mpoly] = {}

    def power(i, side, k):
        key = (i, side, k)
        if key not in pows:
            base = vals[i].num if side == 0 else vals[i].den
            pows[key] = base ** k
        return pows[key]

    total = _ZCTX.from_dict({})
    for e, c in p.to_dict().items():
        vec = list(e)
        term = _ZCTX.constant(int(c))
        for i in vals:
            k = e[i]
            vec[i] = 0
            term = term * power(i, 0, k) * power(i, 1, degs[i] - k)
        total = total + term * _zmono(vec)
    den = _ZONE
    for i in vals:
        den = den * power(i, 1, degs[i])
    return FracFn(total, den)


def _eval_poly(p, vals: dict[int, Fraction]) -> Fraction:
    total = Fraction(0)
    for e, c in p.to_dict().items():
        term = Fraction(int(c))
        for i, k in enumerate(map(int, e)):
            if k:
                if i not in vals:
                    raise KeyError(f"no value for variable {VARIABLES[i]}")
                term *= vals[i] ** k
        total += term
    return total


def frac_eq(a: FracFn, b: FracFn) -> bool:
    """Identity test by cross-multiplication."""
    a, b = _as_frac(a), _as_frac(b)
    return a.num * b.den == b.num * a.den


def random_point(names: Iterable[str], rng: random.Random, bound: int = 1000) -> dict:
    return {n: Fraction(rng.randint(1, bound), rng.randint(1, bound)) for n in names}


def prescreen_eq(a: FracFn, b: FracFn, seed: int = 0, trials: int = 3) -> bool:
    """Randomised pre-screen (never a final verdict): compare values at points."""
    rng = random.Random(seed)
    names = sorted(a.variables() | b.variables())
    for _ in range(trials):
        pt = random_point(names, rng)
        try:
            if a.evaluate(pt) != b.evaluate(pt):
                return False
        except ZeroDivisionError:
            continue
    return True


# ---------------------------------------------------------------------------
# q-number helpers
# ---------------------------------------------------------------------------

S = FracFn.var("s")
XI = FracFn.var("xi")
Y = FracFn.var("y")
ONE = FracFn(1)
ZERO = FracFn(0)


def qpow(a) -> FracFn:
    """q^a for integer or half-integer a."""
    a2 = Fraction(a) * 2
    if a2.denominator != 1:
        raise ConventionError(f"q^{a} needs a finer root of q")
    return FracFn.var("s", int(a2))


Q = qpow(1)
QDIFF = Q - Q.inverse()  # q - q^-1


def qnum_of(x: FracFn) -> FracFn:
    """[a]_q given x = q^a."""
    return (x - x.inverse()) / QDIFF


def qint(n: int) -> FracFn:
    return qnum_of(qpow(n))


def qfact(n: int) -> FracFn:
    out = ONE
    for k in range(1, n + 1):
        out = out * qint(k)
    return out


def qbinom_sym(n: int, k: int) -> FracFn:
    """Symmetric q-binomial [n choose k]_q."""
    return qfact(n) / (qfact(k) * qfact(n - k))


# ---------------------------------------------------------------------------
# TraceSeries
# ---------------------------------------------------------------------------


class TraceSeries:
    """Truncated Laurent series ``sum_n c_n v^n`` for n <= D.

    ``var`` is the expansion variable (``xi`` for trace functions);
    coefficients must not involve it.  Arithmetic truncates above ``D``.
    """

    __slots__ = ("coeffs", "D", "var")

    def __init__(self, coeffs: Mapping[int, FracFn], D: int, var: str = "xi"):
        self.D = D
        self.var = var
        self.coeffs = {n: FracFn(c) if not isinstance(c, FracFn) else c
                       for n, c in coeffs.items() if n <= D}
        self.coeffs = {n: c for n, c in self.coeffs.items() if not c.is_zero()}

    @property
    def d_min(self) -> int:
        return min(self.coeffs, default=self.D + 1)

    def coeff(self, n: int) -> FracFn:
        if n > self.D:
            raise IndexError(f"degree {n} beyond truncation {self.D}")
        return self.coeffs.get(n, ZERO)

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, D: int) -> "TraceSeries":
        return TraceSeries(self.coeffs, min(D, self.D), self.var)

    def _check(self, other: "TraceSeries"):
        if self.var != other.var:
            raise ValueError("series in different variables")

    def __add__(self, other):
        if isinstance(other, TraceSeries):
            self._check(other)
            D = min(self.D, other.D)
            out = dict(self.coeffs)
            for n, c in other.coeffs.items():
                out[n] = out[n] + c if n in out else c
            return TraceSeries(out, D, self.var)
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return self + TraceSeries({0: other}, self.D, self.var)

    __radd__ = __add__

    def __neg__(self):
        return TraceSeries({n: -c for n, c in self.coeffs.items()}, self.D, self.var)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TraceSeries):
            self._check(other)
            # each side is only known up to D; a product term n is exact when
            # n <= min(D_a + val_b, D_b + val_a)
            va, vb = self.d_min, other.d_min
            D = min(self.D + vb, other.D + va) if self.coeffs and other.coeffs else min(self.D, other.D)
            out: dict[int, FracFn] = {}
            for i, a in self.coeffs.items():
                for j, b in other.coeffs.items():
                    n = i + j
                    if n > D:
                        continue
                    out[n] = out[n] + a * b if n in out else a * b
            return TraceSeries(out, D, self.var)
        other = _as_frac(other)
        if other is None:
            return NotImplemented
        return TraceSeries({n: c * other for n, c in self.coeffs.items()}, self.D, self.var)

    __rmul__ = __mul__

    def mul_var_power(self, k: int) -> "TraceSeries":
        """Multiply by var^k."""
        return TraceSeries({n + k: c for n, c in self.coeffs.items()}, self.D + k, self.var)

    def map_coeffs(self, fn) -> "TraceSeries":
        return TraceSeries({n: fn(c) for n, c in self.coeffs.items()}, self.D, self.var)

    def scale_var(self, factor: FracFn) -> "TraceSeries":
        """Substitute var -> factor * var (factor free of var)."""
        out = {}
        for n, c in self.coeffs.items():
            out[n] = c * factor ** n
        return TraceSeries(out, self.D, self.var)

    def equal_through(self, other: "TraceSeries", D: int | None = None) -> bool:
        D = min(self.D, other.D) if D is None else D
        for n in set(self.coeffs) | set(other.coeffs):
            if n <= D and not frac_eq(self.coeff(n), other.coeff(n)):
                return False
        return True

    def first_difference(self, other: "TraceSeries"):
        D = min(self.D, other.D)
        for n in sorted(set(self.coeffs) | set(other.coeffs)):
            if n <= D and not frac_eq(self.coeff(n), other.coeff(n)):
                return n, self.coeff(n) - other.coeff(n)
        return None

    def __eq__(self, other):
        if not isinstance(other, TraceSeries):
            return NotImplemented
        return self.var == other.var and self.D == other.D and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.var, self.D, tuple(sorted(self.coeffs))))

    def to_text(self) -> str:
        body = "; ".join(f"{n}: {c.to_text()}" for n, c in sorted(self.coeffs.items()))
        return f"series({self.var}, D={self.D}; {body})"

    def __repr__(self):
        shown = ", ".join(f"{n}: {c}" for n, c in sorted(self.coeffs.items())[:4])
        return f"TraceSeries({self.var}, D={self.D}, {{{shown}{', ...' if len(self.coeffs) > 4 else ''}}})"


def series_expand(f: FracFn, D: int, var: str = "xi", allow_laurent: bool = False) -> TraceSeries:
    """Expand ``f`` in nonnegative powers of ``var`` through ``var^D``.

    With ``allow_laurent`` a monomial pole at ``var = 0`` is factored out and
    the series starts at a negative degree.
    """
    f = _as_frac(f)
    i = var_index(var)
    nparts = _split(f.num, i)
    dparts = _split(f.den, i)
    dlow = min(dparts)
    if dlow > 0 and not allow_laurent:
        raise IrregularSeriesError(f"denominator vanishes at {var}=0")
    nlow = min(nparts) if nparts else 0
    shift = nlow - dlow
    d0 = FracFn(dparts[dlow])
    dd = {k - dlow: FracFn(v) / d0 for k, v in dparts.items() if k != dlow}
    nn = {k - nlow: FracFn(v) / d0 for k, v in nparts.items()}
    need = D - shift
    if need < 0:
        return TraceSeries({}, D, var)
    # 1/den = sum c_n var^n with c_0 = 1, c_n = -sum_j dd_j c_{n-j}
    inv: list[FracFn] = [ONE]
    for n in range(1, need + 1):
        acc = ZERO
        for j, dj in dd.items():
            if j <= n:
                acc = acc + dj * inv[n - j]
        inv.append(-acc)
    out: dict[int, FracFn] = {}
    for k, a in nn.items():
        for n in range(0, need - k + 1):
            if inv[n].is_zero():
                continue
            m = k + n + shift
            out[m] = out[m] + a * inv[n] if m in out else a * inv[n]
    return TraceSeries(out, D, var)


# ---------------------------------------------------------------------------
# PrefactoredFn
# ---------------------------------------------------------------------------


class PrefactoredFn:
    """``q^(c*lam*mu + b*lam + d*mu) * body``.

    ``body`` is a :class:`FracFn` in (s, xi, y) or a :class:`TraceSeries` in xi.
    The bilinear exponent ``c`` uses lam*mu literally (so q^(lam*mu) has c=1).
    """

    __slots__ = ("c", "b", "d", "body")

    def __init__(self, body, c=0, b=0, d=0):
        self.body = body if isinstance(body, (FracFn, TraceSeries)) else FracFn(body)
        self.c = Fraction(c)
        self.b = Fraction(b)
        self.d = Fraction(d)

    def absorb_linear(self) -> "PrefactoredFn":
        """Move integral linear exponents into the body."""
        bi, di = int(self.b) if self.b.denominator == 1 else 0, int(self.d) if self.d.denominator == 1 else 0
        if not bi and not di:
            return self
        body = self.body
        if isinstance(body, TraceSeries):
            body = body.mul_var_power(-bi) * (Y ** di)
        else:
            body = body * XI ** (-bi) * Y ** di
        return PrefactoredFn(body, self.c, self.b - bi, self.d - di)

    def _same_prefactor(self, other):
        a, b = self.absorb_linear(), other.absorb_linear()
        if (a.c, a.b, a.d) != (b.c, b.b, b.d):
            raise ConventionError("adding functions with different prefactors")
        return a, b

    def __add__(self, other):
        a, b = self._same_prefactor(other)
        return PrefactoredFn(a.body + b.body, a.c, a.b, a.d)

    def __sub__(self, other):
        a, b = self._same_prefactor(other)
        return PrefactoredFn(a.body - b.body, a.c, a.b, a.d)

    def __neg__(self):
        return PrefactoredFn(-self.body, self.c, self.b, self.d)

    def __mul__(self, other):
        if isinstance(other, PrefactoredFn):
            return PrefactoredFn(self.body * other.body, self.c + other.c,
                                 self.b + other.b, self.d + other.d).absorb_linear()
        return PrefactoredFn(self.body * other, self.c, self.b, self.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PrefactoredFn):
            if isinstance(other.body, TraceSeries):
                raise TypeError("division by a series")
            return PrefactoredFn(self.body * other.body.inverse(), self.c - other.c,
                                 self.b - other.b, self.d - other.d).absorb_linear()
        return PrefactoredFn(self.body * _as_frac(other).inverse(), self.c, self.b, self.d)

    def __eq__(self, other):
        if not isinstance(other, PrefactoredFn):
            return NotImplemented
        a, b = self.absorb_linear(), other.absorb_linear()
        if (a.c, a.b, a.d) != (b.c, b.b, b.d):
            return False
        if isinstance(a.body, FracFn) and isinstance(b.body, FracFn):
            return frac_eq(a.body, b.body)
        if isinstance(a.body, TraceSeries) and isinstance(b.body, TraceSeries):
            return a.body.equal_through(b.body)
        return False

    def __hash__(self):
        return hash((self.c, self.b, self.d))

    def series(self, D: int) -> "PrefactoredFn":
        """Expand a rational body in xi (through xi^D)."""
        a = self.absorb_linear()
        if isinstance(a.body, TraceSeries):
            return PrefactoredFn(a.body.truncate(D), a.c, a.b, a.d)
        return PrefactoredFn(series_expand(a.body, D, "xi", allow_laurent=True), a.c, a.b, a.d)

    def to_text(self) -> str:
        return f"q^({self.c}*lam*mu + {self.b}*lam + {self.d}*mu) * {self.body.to_text()}"

    def __repr__(self):
        return f"PrefactoredFn(c={self.c}, b={self.b}, d={self.d}, body={self.body!r})"


def _int_exponent(x: Fraction, what: str) -> int:
    if x.denominator != 1:
        raise ConventionError(f"{what} produces a fractional exponent {x}")
    return int(x)


def shift_lambda(f: PrefactoredFn, k) -> PrefactoredFn:
    """lam -> lam + k."""
    k = Fraction(k)
    f = f.absorb_linear()
    ypow = _int_exponent(f.c * k, "shift_lambda")
    factor = Y ** ypow * qpow(f.b * k)
    xi_scale = qpow(-k)
    if isinstance(f.body, TraceSeries):
        body = f.body.scale_var(xi_scale) * factor
    else:
        if (2 * k).denominator != 1:
            _bad_shift(k)
        body = f.body.subs_monomial({"xi": (1, {"xi": 1, "s": int(-2 * k)})}) * factor
    return PrefactoredFn(body, f.c, f.b, f.d)


def _bad_shift(k):
    raise ConventionError(f"shift by {k} is not a half-integer")


def shift_mu(f: PrefactoredFn, k) -> PrefactoredFn:
    """mu -> mu + k."""
    k = Fraction(k)
    f = f.absorb_linear()
    xipow = _int_exponent(-f.c * k, "shift_mu")
    factor = qpow(f.d * k)
    if (2 * k).denominator != 1:
        _bad_shift(k)
    rule = {"y": (1, {"y": 1, "s": int(2 * k)})}
    if isinstance(f.body, TraceSeries):
        body = f.body.map_coeffs(lambda c: c.subs_monomial(rule)).mul_var_power(xipow) * factor
    else:
        body = f.body.subs_monomial(rule) * XI ** xipow * factor
    return PrefactoredFn(body, f.c, f.b, f.d)


def reflect_mu(f: PrefactoredFn) -> PrefactoredFn:
    """mu -> -mu - rho (rho = 1): y -> q^-1 / y, prefactor sign flips."""
    f = f.absorb_linear()
    rule = {"y": (1, {"y": -1, "s": -2})}
    # q^(c lam (-mu-1)) = q^(-c lam mu) * xi^c ; q^(d(-mu-1)) = q^(-d mu) q^(-d)
    xipow = _int_exponent(f.c, "reflect_mu")
    if isinstance(f.body, TraceSeries):
        body = f.body.map_coeffs(lambda c: c.subs_monomial(rule)).mul_var_power(xipow)
    else:
        body = f.body.subs_monomial(rule) * XI ** xipow
    return PrefactoredFn(body * qpow(-f.d) if f.d else body, -f.c, f.b, -f.d)
