"""Exact scalars: the field Q(sqrt2, sqrt3) and truncated power series in hbar.

Field elements are stored as four rationals (coefficients of 1, sqrt2, sqrt3,
sqrt6).  Arithmetic that lands back in Q returns a plain ``Fraction`` so that
the common, purely rational case stays cheap; every public routine accepts
``int``, ``Fraction`` and ``FieldElem`` interchangeably.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence, Union

__all__ = [
    "FieldElem",
    "HSeries",
    "Scalar",
    "ScalarError",
    "NonUnitDivision",
    "TruncMismatch",
    "ExpOfUnit",
    "BadBinomial",
    "as_scalar",
    "sqrt_rational",
    "scalar_to_json",
    "scalar_from_json",
    "exp_series",
    "hseries_arith",
    "q_power",
    "hbar_over_q_diff",
    "quantum_integer",
    "quantum_factorial",
    "quantum_binomial",
    "DEFAULT_TRUNC",
]

DEFAULT_TRUNC = 4


class ScalarError(ArithmeticError):
    pass


class NonUnitDivision(ScalarError):
    pass


class TruncMismatch(ScalarError):
    pass


class ExpOfUnit(ScalarError):
    pass


class BadBinomial(ScalarError):
    pass


# ---------------------------------------------------------------------------
# Q(sqrt2, sqrt3)
# ---------------------------------------------------------------------------

# products of basis vectors 1, r2, r3, r6: (index_a, index_b) -> (index, factor)
_MUL_TABLE = {
    (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
    (1, 0): (1, 1), (1, 1): (0, 2), (1, 2): (3, 1), (1, 3): (2, 2),
    (2, 0): (2, 1), (2, 1): (3, 1), (2, 2): (0, 3), (2, 3): (1, 3),
    (3, 0): (3, 1), (3, 1): (2, 2), (3, 2): (1, 3), (3, 3): (0, 6),
}


class FieldElem:
    """a + b*sqrt2 + c*sqrt3 + d*sqrt6 with rational a, b, c, d."""

    __slots__ = ("parts",)

    def __init__(self, a=0, b=0, c=0, d=0):
        self.parts = (Fraction(a), Fraction(b), Fraction(c), Fraction(d))

    @classmethod
    def _raw(cls, parts):
        obj = object.__new__(cls)
        obj.parts = parts
        return obj

    # -- helpers -----------------------------------------------------------
    def is_rational(self) -> bool:
        return not (self.parts[1] or self.parts[2] or self.parts[3])

    def simplify(self) -> "Scalar":
        return self.parts[0] if self.is_rational() else self

    def conj2(self) -> "FieldElem":
        a, b, c, d = self.parts
        return FieldElem._raw((a, -b, c, -d))

    def conj3(self) -> "FieldElem":
        a, b, c, d = self.parts
        return FieldElem._raw((a, b, -c, -d))

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return _norm(tuple(x + y for x, y in zip(self.parts, o)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem._raw(tuple(-x for x in self.parts))

    def __sub__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return _norm(tuple(x - y for x, y in zip(self.parts, o)))

    def __rsub__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return _norm(tuple(y - x for x, y in zip(self.parts, o)))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return _norm(tuple(x * other for x in self.parts))
        o = _parts(other)
        if o is None:
            return NotImplemented
        out = [Fraction(0)] * 4
        for i, x in enumerate(self.parts):
            if not x:
                continue
            for j, y in enumerate(o):
                if not y:
                    continue
                k, f = _MUL_TABLE[i, j]
                out[k] += f * x * y
        return _norm(tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not any(self.parts):
            raise ZeroDivisionError("inverse of zero field element")
        # x * conj2(x) lies in Q(sqrt3); times its sqrt3-conjugate lies in Q
        y = self * self.conj2()
        y = as_field(y)
        z = y * y.conj3()
        z = as_field(z)
        assert z.is_rational()
        num = as_field(self.conj2() * y.conj3())
        return _norm(tuple(p / z.parts[0] for p in num.parts))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return _norm(tuple(x / other for x in self.parts))
        return self * as_field(other).inverse()

    def __rtruediv__(self, other):
        return as_field(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return as_field(self.inverse()) ** (-n)
        out: Scalar = Fraction(1)
        base: Scalar = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return any(self.parts)

    def __eq__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return self.parts == o

    def __hash__(self):
        if self.is_rational():
            return hash(self.parts[0])
        return hash(self.parts)

    def __repr__(self):
        return f"FieldElem{tuple(str(p) for p in self.parts)}"

    def __str__(self):
        return scalar_str(self)


Scalar = Union[int, Fraction, FieldElem]


def _parts(x):
    if isinstance(x, FieldElem):
        return x.parts
    if isinstance(x, (int, Fraction)):
        return (Fraction(x), Fraction(0), Fraction(0), Fraction(0))
    return None


def _norm(parts) -> Scalar:
    if not (parts[1] or parts[2] or parts[3]):
        return parts[0]
    return FieldElem._raw(parts)


def as_field(x: Scalar) -> FieldElem:
    if isinstance(x, FieldElem):
        return x
    return FieldElem(x)


def as_scalar(x) -> Scalar:
    """Coerce ints/strings/Fractions/FieldElems to the canonical scalar type."""
    if isinstance(x, FieldElem):
        return x.simplify()
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


_SQUAREFREE_INDEX = {1: 0, 2: 1, 3: 2, 6: 3}


def _squarefree_split(n: int) -> tuple[int, int]:
    """n = s * m**2 with s squarefree; returns (s, m)."""
    s, m, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            m *= p
        if n % p == 0:
            n //= p
            s *= p
        p += 1
    return s * n, m


def sqrt_rational(r) -> Scalar:
    """Exact square root of a non-negative rational inside Q(sqrt2, sqrt3)."""
    r = Fraction(r)
    if r < 0:
        raise ValueError("negative radicand")
    if r == 0:
        return Fraction(0)
    # sqrt(p/q) = sqrt(p*q)/q
    s, m = _squarefree_split(r.numerator * r.denominator)
    if s not in _SQUAREFREE_INDEX:
        raise ValueError(f"sqrt({r}) is not in Q(sqrt2, sqrt3)")
    coeff = Fraction(m, r.denominator)
    parts = [Fraction(0)] * 4
    parts[_SQUAREFREE_INDEX[s]] = coeff
    return _norm(tuple(parts))


def scalar_str(x: Scalar) -> str:
    if not isinstance(x, FieldElem):
        return str(Fraction(x))
    names = ("", "sqrt2", "sqrt3", "sqrt6")
    pieces = []
    for p, name in zip(x.parts, names):
        if not p:
            continue
        if name:
            pieces.append(f"{p}*{name}" if p != 1 else name)
        else:
            pieces.append(str(p))
    return " + ".join(pieces) if pieces else "0"


def scalar_to_json(x: Scalar) -> list[str]:
    return [str(p) for p in as_field(x).parts]


def scalar_from_json(data: Sequence[str]) -> Scalar:
    return FieldElem(*(Fraction(p) for p in data)).simplify()


# ---------------------------------------------------------------------------
# truncated hbar series
# ---------------------------------------------------------------------------

class HSeries:
    """Power series c_0 + c_1 hbar + ... + c_D hbar^D, arithmetic mod hbar^(D+1)."""

    __slots__ = ("trunc", "coeffs")

    def __init__(self, coeffs: Iterable, trunc: int | None = None):
        cs = [as_scalar(c) for c in coeffs]
        if trunc is None:
            trunc = len(cs) - 1
        if trunc < 0:
            raise ValueError("truncation order must be non-negative")
        cs = cs[: trunc + 1] + [Fraction(0)] * (trunc + 1 - len(cs))
        self.trunc = trunc
        self.coeffs = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: tuple, trunc: int) -> "HSeries":
        obj = object.__new__(cls)
        obj.trunc = trunc
        obj.coeffs = coeffs
        return obj

    @classmethod
    def const(cls, c, trunc: int) -> "HSeries":
        return cls._raw((as_scalar(c),) + (Fraction(0),) * trunc, trunc)

    @classmethod
    def zero(cls, trunc: int) -> "HSeries":
        return cls._raw((Fraction(0),) * (trunc + 1), trunc)

    @classmethod
    def one(cls, trunc: int) -> "HSeries":
        return cls.const(1, trunc)

    @classmethod
    def hbar(cls, trunc: int, power: int = 1) -> "HSeries":
        cs = [Fraction(0)] * (trunc + 1)
        if power <= trunc:
            cs[power] = Fraction(1)
        return cls._raw(tuple(cs), trunc)

    # -- inspection --------------------------------------------------------
    def __getitem__(self, n: int) -> Scalar:
        return self.coeffs[n]

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, None for the zero series."""
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def is_unit(self) -> bool:
        return bool(self.coeffs[0])

    def _check(self, other: "HSeries"):
        if self.trunc != other.trunc:
            raise TruncMismatch(f"truncation {self.trunc} vs {other.trunc}")

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, HSeries):
            other = HSeries.const(other, self.trunc)
        self._check(other)
        return HSeries._raw(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.trunc)

    __radd__ = __add__

    def __neg__(self):
        return HSeries._raw(tuple(-a for a in self.coeffs), self.trunc)

    def __sub__(self, other):
        if not isinstance(other, HSeries):
            other = HSeries.const(other, self.trunc)
        self._check(other)
        return HSeries._raw(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.trunc)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HSeries):
            if isinstance(other, (int, Fraction, FieldElem)):
                return HSeries._raw(tuple(a * other for a in self.coeffs), self.trunc)
            return NotImplemented
        self._check(other)
        a, b, D = self.coeffs, other.coeffs, self.trunc
        out = [Fraction(0)] * (D + 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j in range(D + 1 - i):
                y = b[j]
                if y:
                    out[i + j] += x * y
        return HSeries._raw(tuple(out), D)

    __rmul__ = __mul__

    def inverse(self) -> "HSeries":
        if not self.is_unit():
            raise NonUnitDivision("series has zero constant term")
        c0inv = 1 / as_field(self.coeffs[0]) if isinstance(self.coeffs[0], FieldElem) else 1 / self.coeffs[0]
        D = self.trunc
        out = [Fraction(0)] * (D + 1)
        out[0] = c0inv
        for n in range(1, D + 1):
            s = Fraction(0)
            for k in range(1, n + 1):
                if self.coeffs[k]:
                    s += self.coeffs[k] * out[n - k]
            out[n] = -s * c0inv
        return HSeries._raw(tuple(out), D)

    def shift_down(self, v: int) -> "HSeries":
        """Divide by hbar^v; the result is known only mod hbar^(D+1-v)."""
        if v > self.trunc:
            raise NonUnitDivision("shift beyond truncation")
        if any(self.coeffs[:v]):
            raise NonUnitDivision("series not divisible by hbar^%d" % v)
        return HSeries._raw(self.coeffs[v:], self.trunc - v)

    def truncate(self, trunc: int) -> "HSeries":
        if trunc > self.trunc:
            raise TruncMismatch("cannot raise truncation order")
        return HSeries._raw(self.coeffs[: trunc + 1], trunc)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, FieldElem)):
            inv = as_field(other).inverse() if isinstance(other, FieldElem) else Fraction(1) / other
            return self * inv
        self._check(other)
        if other.is_unit():
            return self * other.inverse()
        v = other.valuation()
        if v is None:
            raise ZeroDivisionError("division by the zero series")
        va = self.valuation()
        if va is None:
            return HSeries.zero(self.trunc - v)
        if va < v:
            raise NonUnitDivision(f"numerator valuation {va} < denominator valuation {v}")
        return self.shift_down(v) * other.shift_down(v).inverse()

    def __pow__(self, n: int) -> "HSeries":
        if n < 0:
            return self.inverse() ** (-n)
        out = HSeries.one(self.trunc)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def subs_hbar(self, factor) -> "HSeries":
        """hbar -> factor * hbar."""
        f = as_scalar(factor)
        out = []
        p: Scalar = Fraction(1)
        for c in self.coeffs:
            out.append(c * p)
            p = p * f
        return HSeries._raw(tuple(out), self.trunc)

    def __eq__(self, other):
        if isinstance(other, HSeries):
            return self.trunc == other.trunc and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, FieldElem)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self):
        return hash((self.trunc, self.coeffs))

    def __repr__(self):
        return f"HSeries({[scalar_str(c) for c in self.coeffs]})"

    def __str__(self):
        terms = []
        for n, c in enumerate(self.coeffs):
            if not c:
                continue
            cs = scalar_str(c)
            if isinstance(c, FieldElem):
                cs = f"({cs})"
            if n == 0:
                terms.append(cs)
            else:
                h = "hbar" if n == 1 else f"hbar^{n}"
                terms.append(h if c == 1 else f"{cs}*{h}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(hbar^{self.trunc + 1})"

    def to_json(self) -> list[list[str]]:
        return [scalar_to_json(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data) -> "HSeries":
        return cls([scalar_from_json(c) for c in data])


def hseries_arith(a: HSeries, b: HSeries, op: str) -> HSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def exp_series(a: HSeries) -> HSeries:
    """exp(a) mod hbar^(D+1) for a with zero constant term."""
    if a.coeffs[0]:
        raise ExpOfUnit("exp of a series with nonzero constant term")
    D = a.trunc
    out = HSeries.one(D)
    term = HSeries.one(D)
    for k in range(1, D + 1):
        term = term * a * Fraction(1, k)
        if term.is_zero():
            break
        out = out + term
    return out


def q_power(x, trunc: int) -> HSeries:
    """exp(x*hbar), i.e. q^x with q = exp(hbar)."""
    x = Fraction(x)
    return HSeries._raw(tuple(x ** n / factorial(n) for n in range(trunc + 1)), trunc)


def _sinh_over_hbar(x: Fraction, trunc: int) -> HSeries:
    """sinh(x*hbar)/hbar, exact to order trunc."""
    cs = []
    for n in range(trunc + 1):
        cs.append(x ** (n + 1) / factorial(n + 1) if n % 2 == 0 else Fraction(0))
    return HSeries._raw(tuple(cs), trunc)


def q_diff(x, trunc: int) -> HSeries:
    """q^x - q^-x = 2 sinh(x hbar)."""
    x = Fraction(x)
    cs = [2 * x ** n / factorial(n) if n % 2 else Fraction(0) for n in range(trunc + 1)]
    return HSeries._raw(tuple(cs), trunc)


def hbar_over_q_diff(x, trunc: int) -> HSeries:
    """hbar / (q^x - q^-x): a unit series, computed without losing an order."""
    return (_sinh_over_hbar(Fraction(x), trunc) * 2).inverse()


def sinh_ratio(x, y, trunc: int) -> HSeries:
    """(q^x - q^-x)/(q^y - q^-y) exactly to order trunc (y != 0)."""
    x, y = Fraction(x), Fraction(y)
    if y == 0:
        raise NonUnitDivision("denominator q^0 - q^0 vanishes")
    return _sinh_over_hbar(x, trunc) * _sinh_over_hbar(y, trunc).inverse()


def quantum_integer(n: int, i: int, datum, trunc: int = DEFAULT_TRUNC) -> HSeries:
    """[n]_i = (q_i^n - q_i^-n)/(q_i - q_i^-1) with q_i = exp(d_i hbar)."""
    d = Fraction(datum.d[i])
    return sinh_ratio(n * d, d, trunc)


def quantum_factorial(n: int, i: int, datum, trunc: int = DEFAULT_TRUNC) -> HSeries:
    out = HSeries.one(trunc)
    for k in range(1, n + 1):
        out = out * quantum_integer(k, i, datum, trunc)
    return out


def quantum_binomial(n: int, k: int, i: int, datum, trunc: int = DEFAULT_TRUNC) -> HSeries:
    if not 0 <= k <= n:
        raise BadBinomial(f"binomial ({n} choose {k}) out of range")
    num = quantum_factorial(n, i, datum, trunc)
    den = quantum_factorial(k, i, datum, trunc) * quantum_factorial(n - k, i, datum, trunc)
    return num * den.inverse()


def binomial(n: int, k: int) -> int:
    """Ordinary binomial with binomial(n, k) = 0 outside 0 <= k <= n (n >= 0)."""
    if k < 0 or k > n:
        return 0
    return comb(n, k)


def generalized_binomial(q: int, m: int) -> Fraction:
    """binom(q, m) for any integer q (negative allowed) and m >= 0."""
    out = Fraction(1)
    for j in range(m):
        out = out * (q - j) / (j + 1)
    return out
