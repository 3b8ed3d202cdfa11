"""Quantum toroidal algebra modulo hbar^(D+1).

Letters are ``(kind, i, k)`` with kind 0 = X^-, 1 = H, 2 = X^+.  Words are
tuples of letters and coefficients are ``HSeries``.  The rewrite engine
orients the defining relations towards the block shape X^- . H . X^+:

* H letters commute and are sorted by (node, mode);
* H is moved left of X^+ and right of X^- with the QT2/QT3 correction;
* X^+ X^- is replaced using QT4;
* same-node, same-sign letters are sorted by mode via QT5 with i = j;
* different nodes with a_ij = 0 commute (QT6 with r = 1);
* different nodes with a_ij != 0 are ordered by node: QT5 moves the mode of
  the larger node towards 0, and ``X_{i,0} X_{j,s}`` (i > j) is left as is.

The Serre relations are never used for rewriting.  ``reduces_to_zero`` also
tries to eliminate a residue against normal forms of Serre instances.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Iterable

from .cartan import CartanDatum
from .pbw import UElem, add_into
from .report import FAIL, INCONCLUSIVE, PASS, Report
from .scalar import (
    DEFAULT_TRUNC,
    HSeries,
    as_scalar,
    generalized_binomial,
    hbar_over_q_diff,
    q_diff,
    q_power,
    quantum_binomial,
    sinh_ratio,
    sqrt_rational,
)

__all__ = [
    "XM",
    "H",
    "XP",
    "QPoly",
    "RewriteLimits",
    "ModeOverflow",
    "UnsupportedRoot",
    "QContext",
    "qcontext",
    "phi_coefficient",
    "phi_ratio",
    "straighten_quantum",
    "classical_limit",
    "theta",
    "alt_sum_quantum",
    "relation_defects",
    "verify_classical_limit_relations",
    "verify_key_phi",
    "expansion_profile_quantum_integer",
    "reduces_to_zero",
    "canonical_form",
    "IdealReducer",
    "is_triangular",
    "verify_pbw_evidence",
    "verify_theta",
    "random_qpoly",
]

XM, H, XP = 0, 1, 2
_KIND_NAMES = {XM: "X-", H: "H", XP: "X+"}


class ModeOverflow(RuntimeError):
    pass


class UnsupportedRoot(ValueError):
    pass


class _Budget(Exception):
    pass


@dataclass(frozen=True)
class RewriteLimits:
    max_passes: int = 200_000
    mode_window: int = 16
    max_word_length: int = 12

    def __post_init__(self):
        if min(self.max_passes, self.mode_window, self.max_word_length) <= 0:
            raise ValueError("rewrite limits must be positive")


def letter_str(x) -> str:
    return f"{_KIND_NAMES[x[0]]}({x[1]},{x[2]})"


class QPoly:
    """Sum of words with HSeries coefficients of a common truncation order."""

    __slots__ = ("trunc", "terms")

    def __init__(self, terms: dict | None = None, trunc: int = DEFAULT_TRUNC):
        self.trunc = trunc
        self.terms = {}
        for w, c in (terms or {}).items():
            c = _coerce(c, trunc)
            if c:
                self.terms[tuple(w)] = c

    @classmethod
    def _make(cls, terms: dict, trunc: int) -> "QPoly":
        obj = object.__new__(cls)
        obj.trunc = trunc
        obj.terms = terms
        return obj

    @classmethod
    def gen(cls, kind: int, i: int, k: int, trunc: int = DEFAULT_TRUNC) -> "QPoly":
        return cls._make({((kind, i, k),): HSeries.one(trunc)}, trunc)

    @classmethod
    def scalar(cls, c, trunc: int = DEFAULT_TRUNC) -> "QPoly":
        c = _coerce(c, trunc)
        return cls._make({(): c} if c else {}, trunc)

    @classmethod
    def hbar(cls, trunc: int = DEFAULT_TRUNC) -> "QPoly":
        return cls._make({(): HSeries.hbar(trunc)}, trunc)

    def _check(self, other: "QPoly"):
        if self.trunc != other.trunc:
            from .scalar import TruncMismatch

            raise TruncMismatch(f"{self.trunc} vs {other.trunc}")

    def __add__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly.scalar(other, self.trunc)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_into(out, w, c)
        return QPoly._make(out, self.trunc)

    __radd__ = __add__

    def __neg__(self):
        return QPoly._make({w: -c for w, c in self.terms.items()}, self.trunc)

    def __sub__(self, other):
        if not isinstance(other, QPoly):
            other = QPoly.scalar(other, self.trunc)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QPoly":
        c = _coerce(c, self.trunc)
        out = {}
        for w, v in self.terms.items():
            x = v * c
            if x:
                out[w] = x
        return QPoly._make(out, self.trunc)

    def __mul__(self, other):
        if isinstance(other, QPoly):
            self._check(other)
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    add_into(out, w1 + w2, c1 * c2)
            return QPoly._make(out, self.trunc)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "QPoly":
        out = QPoly.scalar(1, self.trunc)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.trunc, frozenset(self.terms.items())))

    def __repr__(self):
        return f"QPoly({self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        items = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            word = "*".join(letter_str(x) for x in w) or "1"
            items.append(f"({self.terms[w]})*{word}")
        return " + ".join(items)

    def truncate(self, trunc: int) -> "QPoly":
        out = {}
        for w, c in self.terms.items():
            x = c.truncate(trunc)
            if x:
                out[w] = x
        return QPoly._make(out, trunc)

    def coefficient_layer(self, n: int) -> dict:
        """{word: scalar} for the hbar^n coefficient."""
        return {w: c.coeffs[n] for w, c in self.terms.items() if c.coeffs[n]}

    def max_abs_mode(self) -> int:
        return max((abs(x[2]) for w in self.terms for x in w), default=0)


def _coerce(c, trunc: int) -> HSeries:
    if isinstance(c, HSeries):
        if c.trunc != trunc:
            from .scalar import TruncMismatch

            raise TruncMismatch(f"{c.trunc} vs {trunc}")
        return c
    return HSeries.const(c, trunc)


def commutator(a: QPoly, b: QPoly) -> QPoly:
    return a * b - b * a


def anticommutator(a: QPoly, b: QPoly) -> QPoly:
    return a * b + b * a


# ---------------------------------------------------------------------------
# Phi series
# ---------------------------------------------------------------------------

def _partitions(m: int, max_part: int | None = None):
    if max_part is None:
        max_part = m
    if m == 0:
        yield ()
        return
    for p in range(min(m, max_part), 0, -1):
        for rest in _partitions(m - p, p):
            yield (p,) + rest


def _hpoly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for w1, c1 in a.items():
        for w2, c2 in b.items():
            add_into(out, tuple(sorted(w1 + w2, key=_hkey)), c1 * c2)
    return out


def _hkey(x):
    return (x[1], x[2])


class RewriteEngine:
    """Insertion-based normal forms for an oriented pair rewriting system.

    Subclasses provide ``pair_rule(a, b)`` (None for normal pairs, otherwise a
    list of (word, coeff)), ``one``, ``limits`` and ``_check_letter``.
    """

    def _init_engine(self):
        self._insert_memo: dict = {}
        self._word_memo: dict = {}
        self._steps = 0

    def is_normal(self, word: tuple) -> bool:
        return all(self.pair_rule(word[n], word[n + 1]) is None for n in range(len(word) - 1))

    def insert(self, nw: tuple, x) -> dict:
        key = (nw, x)
        hit = self._insert_memo.get(key)
        if hit is not None:
            return hit
        self._steps += 1
        if self._steps > self.limits.max_passes:
            raise _Budget()
        self._check_letter(x)
        if len(nw) + 1 > self.limits.max_word_length:
            raise _Budget()
        rule = self.pair_rule(nw[-1], x) if nw else None
        if rule is None:
            out = {nw + (x,): self.one}
        else:
            head = nw[:-1]
            out: dict = {}
            for rw, c in rule:
                part = {head: c}
                for letter in rw:
                    nxt: dict = {}
                    for w, v in part.items():
                        for w2, v2 in self.insert(w, letter).items():
                            add_into(nxt, w2, v * v2)
                    part = nxt
                for w, v in part.items():
                    add_into(out, w, v)
        self._insert_memo[key] = out
        return out

    def word_nf(self, word: tuple) -> dict:
        hit = self._word_memo.get(word)
        if hit is not None:
            return hit
        if len(word) <= 1 or self.is_normal(word):
            for x in word:
                self._check_letter(x)
            out = {word: self.one}
        else:
            out = {}
            for w, c in self.word_nf(word[:-1]).items():
                for w2, c2 in self.insert(w, word[-1]).items():
                    add_into(out, w2, c * c2)
        self._word_memo[word] = out
        return out

    def normal_terms(self, terms: dict) -> tuple[dict, bool]:
        """Normal form of {word: coeff}; (input, False) if the step budget is exhausted."""
        self._steps = 0
        try:
            out: dict = {}
            for w, c in terms.items():
                for w2, c2 in self.word_nf(w).items():
                    add_into(out, w2, c * c2)
        except _Budget:
            return terms, False
        return out, True


class QContext(RewriteEngine):
    """Per (datum, trunc, convention) caches for scalars, Phi series and normal forms."""

    def __init__(self, datum: CartanDatum, trunc: int = DEFAULT_TRUNC,
                 convention: str = "hernandez", limits: RewriteLimits | None = None):
        if convention not in ("hernandez", "printed"):
            raise ValueError("convention must be 'hernandez' or 'printed'")
        self.datum = datum
        self.trunc = trunc
        self.convention = convention
        self.limits = limits or RewriteLimits()
        D = trunc
        self.one = HSeries.one(D)
        self.Q = q_diff(1, D)
        self._ratio_cache: dict = {}
        self._phi_cache: dict = {}
        self._init_engine()
        self._qpow: dict = {}
        self._hcoef: dict = {}

    # -- scalars -------------------------------------------------------------
    def qpow(self, x) -> HSeries:
        x = Fraction(x)
        s = self._qpow.get(x)
        if s is None:
            s = q_power(x, self.trunc)
            self._qpow[x] = s
        return s

    def hx_coeff(self, i: int, j: int, k: int) -> HSeries:
        """[H_{i,k}, X^+_{j,l}] = c X^+_{j,k+l}; c = d_i a_ij or [k a_ij]_i / k."""
        key = (i, j, k)
        c = self._hcoef.get(key)
        if c is None:
            a = self.datum.A[i][j]
            di = self.datum.d[i]
            if a == 0:
                c = HSeries.zero(self.trunc)
            elif k == 0:
                c = HSeries.const(di * a, self.trunc)
            else:
                c = sinh_ratio(k * a * di, di, self.trunc) * Fraction(1, k)
            self._hcoef[key] = c
        return c

    def qi_diff(self, i: int) -> HSeries:
        """The factor in the Phi exponent: q_i - q_i^-1 (hernandez) or q - q^-1 (printed)."""
        if self.convention == "printed":
            return self.Q
        return q_diff(self.datum.d[i], self.trunc)

    def _qi_over_q(self, i: int) -> HSeries:
        if self.convention == "printed":
            return self.one
        return sinh_ratio(self.datum.d[i], 1, self.trunc)

    # -- Phi -------------------------------------------------------------------
    def _exp_h0(self, i: int, sign: int) -> dict:
        """exp(sign H_{i,0} hbar) as {H-word: HSeries}."""
        D = self.trunc
        out = {}
        for n in range(D + 1):
            cs = [Fraction(0)] * (D + 1)
            cs[n] = Fraction(sign ** n, factorial(n))
            out[((H, i, 0),) * n] = HSeries(cs, D)
        return out

    def _exp_part(self, i: int, m: int):
        """[z^|m|] exp(x sum_l H_{i, sign l} z^l) = sum_j x^j P_j; returns {j: {word: Fraction}}."""
        sign = 1 if m > 0 else -1
        out: dict = {}
        for part in _partitions(abs(m)):
            mult: dict = {}
            for p in part:
                mult[p] = mult.get(p, 0) + 1
            c = Fraction(1)
            for v in mult.values():
                c /= factorial(v)
            word = tuple(sorted(((H, i, sign * p) for p in part), key=_hkey))
            out.setdefault(len(part), {})[word] = c
        return out

    def phi(self, i: int, k: int) -> QPoly:
        """Phi^+_{i,k} for k >= 0 and Phi^-_{i,k} for k <= 0 (k = 0 gives Phi^+)."""
        return self.phi_signed(i, k, 1 if k >= 0 else -1)

    def phi_signed(self, i: int, k: int, sign: int) -> QPoly:
        key = (i, k, sign)
        hit = self._phi_cache.get(key)
        if hit is not None:
            return hit
        D = self.trunc
        if sign * k < 0:
            res = QPoly({}, D)
        elif k == 0:
            res = QPoly._make(dict(self._exp_h0(i, sign)), D)
        else:
            x = self.qi_diff(i) * sign
            inner: dict = {}
            for j, poly in self._exp_part(i, k).items():
                xj = x ** j
                for w, c in poly.items():
                    add_into(inner, w, xj * c)
            res = QPoly._make(_hpoly_mul(self._exp_h0(i, sign), inner), D)
        self._phi_cache[key] = res
        return res

    def ratio(self, i: int, m: int) -> QPoly:
        """(Phi^+_{i,m} - Phi^-_{i,m}) / (q - q^-1), computed without losing hbar-orders."""
        key = (i, m)
        hit = self._ratio_cache.get(key)
        if hit is not None:
            return hit
        D = self.trunc
        hq = hbar_over_q_diff(1, D)
        if m == 0:
            terms = {}
            for n in range(1, D + 2, 2):
                # 2 H^n hbar^(n-1) / n!  times  hbar/(q - q^-1)
                if n - 1 > D:
                    break
                cs = [Fraction(0)] * (D + 1)
                cs[n - 1] = Fraction(2, factorial(n))
                terms[((H, i, 0),) * n] = HSeries(cs, D) * hq
            res = QPoly._make(terms, D)
        else:
            sign = 1 if m > 0 else -1
            x = self.qi_diff(i) * sign
            ratio_x = self._qi_over_q(i) * sign
            inner: dict = {}
            for j, poly in self._exp_part(i, m).items():
                # x^j / Q = sign * (Qi/Q) * x^(j-1)
                coeff = ratio_x * (x ** (j - 1))
                for w, c in poly.items():
                    add_into(inner, w, coeff * c)
            # Phi^- enters with a minus sign: -(Phi^-_m)/Q
            res = QPoly._make(_hpoly_mul(self._exp_h0(i, sign), inner), D)
            if sign < 0:
                res = -res
        self._ratio_cache[key] = res
        return res

    # -- rewriting -------------------------------------------------------------
    def pair_rule(self, a, b):
        """Replacement for the adjacent pair ``a b`` or None if it is normal."""
        ka, kb = a[0], b[0]
        if ka < kb:
            return None
        if ka == H and kb == H:
            if _hkey(a) > _hkey(b):
                return [((b, a), self.one)]
            return None
        if ka == H and kb == XM:
            c = self.hx_coeff(a[1], b[1], a[2])
            out = [((b, a), self.one)]
            if c:
                out.append((((XM, b[1], a[2] + b[2]),), -c))
            return out
        if ka == XP and kb == H:
            c = self.hx_coeff(b[1], a[1], b[2])
            out = [((b, a), self.one)]
            if c:
                out.append((((XP, a[1], a[2] + b[2]),), -c))
            return out
        if ka == XP and kb == XM:
            out = [((b, a), self.one)]
            if a[1] == b[1]:
                for w, c in self.ratio(a[1], a[2] + b[2]).terms.items():
                    out.append((w, c))
            return out
        # same sign
        s = 1 if ka == XP else -1
        i, c = a[1], a[2]
        j, d = b[1], b[2]
        if i == j:
            if c <= d:
                return None
            q2 = self.qpow(2 * s * self.datum.d[i])
            if c - d == 1:
                return [((b, a), q2)]
            return [
                ((b, a), q2),
                (((ka, i, c - 1), (ka, i, d + 1)), q2),
                (((ka, i, d + 1), (ka, i, c - 1)), -self.one),
            ]
        aij = self.datum.A[i][j]
        if i < j:
            return None
        if aij == 0:
            return [((b, a), self.one)]
        if c == 0:
            return None
        A = self.qpow(s * self.datum.d[i] * aij)
        if c > 0:
            return [
                ((b, a), A),
                (((ka, i, c - 1), (ka, j, d + 1)), A),
                (((ka, j, d + 1), (ka, i, c - 1)), -self.one),
            ]
        Ainv = self.qpow(-s * self.datum.d[i] * aij)
        return [
            (((ka, i, c + 1), (ka, j, d - 1)), Ainv),
            (((ka, j, d - 1), (ka, i, c + 1)), -self.one),
            ((b, a), Ainv),
        ]

    def _check_letter(self, x):
        if abs(x[2]) > self.limits.mode_window:
            raise ModeOverflow(f"mode {x[2]} of {letter_str(x)} outside window {self.limits.mode_window}")

    def normal_form(self, p: QPoly) -> tuple[QPoly, bool]:
        if p.trunc != self.trunc:
            from .scalar import TruncMismatch

            raise TruncMismatch(f"{p.trunc} vs {self.trunc}")
        terms, ok = self.normal_terms(p.terms)
        return (QPoly._make(terms, self.trunc) if ok else p), ok


@lru_cache(maxsize=64)
def qcontext(datum: CartanDatum, trunc: int = DEFAULT_TRUNC, convention: str = "hernandez",
             limits: RewriteLimits | None = None) -> QContext:
    return QContext(datum, trunc, convention, limits)


def phi_coefficient(i: int, k: int, D: int, datum: CartanDatum, convention: str = "hernandez") -> QPoly:
    """Phi^+_{i,k} for k >= 0, Phi^-_{i,k} for k < 0 (z^k coefficient of the double exponential)."""
    return qcontext(datum, D, convention).phi(i, k)


def phi_ratio(i: int, m: int, D: int, datum: CartanDatum, convention: str = "hernandez") -> QPoly:
    return qcontext(datum, D, convention).ratio(i, m)


def straighten_quantum(p: QPoly, datum: CartanDatum, limits: RewriteLimits | None = None,
                       convention: str = "hernandez") -> tuple[QPoly, bool]:
    ctx = qcontext(datum, p.trunc, convention, limits)
    out, ok = ctx.normal_form(p)
    return out, ok and is_triangular(out, datum, ctx)


def is_triangular(p: QPoly, datum: CartanDatum, ctx: QContext | None = None) -> bool:
    """Every word is (X^- letters)(H letters)(X^+ letters) with no reducible pair."""
    ctx = ctx or qcontext(datum, p.trunc)
    for w in p.terms:
        kinds = [x[0] for x in w]
        if kinds != sorted(kinds):
            return False
        if not ctx.is_normal(w):
            return False
    return True


# ---------------------------------------------------------------------------
# classical limit, theta, alternating sums
# ---------------------------------------------------------------------------

def psi_letter(x, datum: CartanDatum, convention: str = "hernandez") -> UElem:
    """Image of a quantum generator in U(g^tor)."""
    from .toroidal import generator_image

    kind, i, k = x
    d = datum.d[i]
    if kind == XP:
        return generator_image(("e", i, k), datum).to_uelem().scale(sqrt_rational(d))
    if kind == XM:
        return generator_image(("f", i, k), datum).to_uelem().scale(-sqrt_rational(d))
    scale = d if (k == 0 or convention == "printed") else Fraction(1)
    return generator_image(("h", i, k), datum).to_uelem().scale(scale)


def psi_word(w: tuple, datum: CartanDatum, convention: str = "hernandez") -> UElem:
    out = UElem.scalar(Fraction(1))
    for x in w:
        out = out * psi_letter(x, datum, convention)
    return out


def classical_limit(p: QPoly, datum: CartanDatum, straighten: bool = True,
                    convention: str = "hernandez") -> UElem:
    from .toroidal import straighten_classical

    out = UElem()
    for w, c in p.terms.items():
        c0 = c.coeffs[0]
        if c0:
            out = out + psi_word(w, datum, convention).scale(c0)
    return straighten_classical(out, datum, gamma=False) if straighten else out


def theta_letter(x):
    kind, i, k = x
    return (2 - kind, i, -k)


def theta(p: QPoly) -> QPoly:
    """Anti-involution: reverse words, X^+- -> X^-+ with k -> -k, H_k -> H_-k, hbar -> -hbar."""
    out: dict = {}
    for w, c in p.terms.items():
        add_into(out, tuple(theta_letter(x) for x in reversed(w)), c.subs_hbar(-1))
    return QPoly._make(out, p.trunc)


def alt_sum_quantum(kind: str, i, k: int, m: int, D: int, datum: CartanDatum,
                    convention: str = "hernandez") -> QPoly:
    """H^(m)_{i,k} or X^(+-,m)_{i,k}; ``kind`` in {'H', 'X+', 'X-'}."""
    if not isinstance(i, int):
        from .cartan import Root

        if isinstance(i, Root):
            simple = {datum.simple_root(j): j for j in datum.nodes}
            if i not in simple:
                raise UnsupportedRoot("quantum root vectors exist here only for simple roots")
            i = simple[i]
        else:
            raise UnsupportedRoot(f"unsupported root index {i!r}")
    ctx = qcontext(datum, D, convention)
    out = QPoly({}, D)
    for a in range(m + 1):
        c = (-1) ** (m - a) * generalized_binomial(m, a)
        if kind == "H":
            out = out + ctx.ratio(i, k + a).scale(c)
        elif kind in ("X+", "X-"):
            out = out + QPoly.gen(XP if kind == "X+" else XM, i, k + a, D).scale(c)
        else:
            raise ValueError(f"unknown kind {kind!r}")
    return out


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------

def serre_instance(i: int, j: int, ks: tuple, l: int, sign: int, D: int, datum: CartanDatum,
                   classical_binomials: bool = False) -> QPoly:
    """QT6 left side for modes ks (length r = 1 - a_ij) and l."""
    r = 1 - datum.A[i][j]
    if len(ks) != r:
        raise ValueError("need r = 1 - a_ij modes")
    kind = XP if sign > 0 else XM
    out: dict = {}
    for perm in permutations(range(r)):
        for a in range(r + 1):
            if classical_binomials:
                b = HSeries.const(generalized_binomial(r, a), D)
            else:
                b = quantum_binomial(r, a, i, datum, D)
            c = b * ((-1) ** a)
            word = tuple((kind, i, ks[perm[p]]) for p in range(a)) + ((kind, j, l),) + \
                tuple((kind, i, ks[perm[p]]) for p in range(a, r))
            add_into(out, word, c)
    return QPoly._make(out, D)


def relation_defects(datum: CartanDatum, window: int = 2, D: int = DEFAULT_TRUNC,
                     convention: str = "hernandez", relations: Iterable[str] | None = None,
                     serre_window: int | None = None):
    """Yield (relation, instance label, LHS - RHS) for QT1..QT6 within the mode window."""
    ctx = qcontext(datum, D, convention)
    rels = set(relations or ("QT1", "QT2", "QT3", "QT4", "QT5", "QT6"))
    g = lambda kind, i, k: QPoly.gen(kind, i, k, D)  # noqa: E731
    nodes = list(datum.nodes)
    modes = range(-window, window + 1)
    for i in nodes:
        for j in nodes:
            for k in modes:
                for l in modes:
                    if "QT1" in rels:
                        yield "QT1", f"H{i},{k} H{j},{l}", commutator(g(H, i, k), g(H, j, l))
                    for sgn, kind in ((1, XP), (-1, XM)):
                        tag = "+" if sgn > 0 else "-"
                        if "QT2" in rels and k == 0:
                            yield "QT2", f"H{i},0 X{tag}{j},{l}", (
                                commutator(g(H, i, 0), g(kind, j, l))
                                - g(kind, j, l).scale(ctx.hx_coeff(i, j, 0) * sgn))
                        if "QT3" in rels and k != 0:
                            yield "QT3", f"H{i},{k} X{tag}{j},{l}", (
                                commutator(g(H, i, k), g(kind, j, l))
                                - g(kind, j, k + l).scale(ctx.hx_coeff(i, j, k) * sgn))
                        if "QT5" in rels:
                            A = ctx.qpow(sgn * datum.d[i] * datum.A[i][j])
                            lhs = g(kind, i, k + 1) * g(kind, j, l) - (g(kind, j, l) * g(kind, i, k + 1)).scale(A)
                            rhs = (g(kind, i, k) * g(kind, j, l + 1)).scale(A) - g(kind, j, l + 1) * g(kind, i, k)
                            yield "QT5", f"X{tag}{i},{k + 1} X{tag}{j},{l}", lhs - rhs
                    if "QT4" in rels:
                        rhs = ctx.ratio(i, k + l) if i == j else QPoly({}, D)
                        yield "QT4", f"X+{i},{k} X-{j},{l}", commutator(g(XP, i, k), g(XM, j, l)) - rhs
    if "QT6" in rels:
        sw = window if serre_window is None else serre_window
        for i in nodes:
            for j in nodes:
                if i == j:
                    continue
                r = 1 - datum.A[i][j]
                for ks in _mode_multisets(r, sw):
                    for l in range(-sw, sw + 1):
                        for sgn in (1, -1):
                            tag = "+" if sgn > 0 else "-"
                            yield "QT6", f"X{tag} i={i} j={j} k={ks} l={l}", serre_instance(i, j, ks, l, sgn, D, datum)


def _mode_multisets(r: int, window: int):
    from itertools import combinations_with_replacement

    return combinations_with_replacement(range(-window, window + 1), r)


def verify_classical_limit_relations(datum: CartanDatum, window: int = 2, D: int = DEFAULT_TRUNC,
                                     convention: str = "hernandez", serre_window: int | None = None) -> Report:
    rep = Report("classical-limit")
    for rel, inst, defect in relation_defects(datum, window, D, convention, serre_window=serre_window):
        img = classical_limit(defect, datum, convention=convention)
        rep.add(f"{rel} {inst}", PASS if img.is_zero() else FAIL,
                witness="" if img.is_zero() else repr(img))
    for i in datum.nodes:
        for j in datum.nodes:
            if datum.A[i][j] == 0:
                continue
            for k in range(1, 7):
                c = sinh_ratio(k * datum.A[i][j] * datum.d[i], datum.d[i], D) * Fraction(1, k) - datum.A[i][j]
                v = c.valuation()
                ok = v is None or v >= 2
                rep.add(f"QT3-second-order i={i} j={j} k={k}", PASS if ok else FAIL,
                        witness="" if ok else str(c))
    return rep


# ---------------------------------------------------------------------------
# reduction to zero (with Serre elimination)
# ---------------------------------------------------------------------------

def _block_weight(block: tuple) -> tuple:
    return (block[0][0], tuple(sorted(x[1] for x in block)), sum(x[2] for x in block))


def _split_blocks(word: tuple):
    n_minus = 0
    while n_minus < len(word) and word[n_minus][0] == XM:
        n_minus += 1
    n_plus = len(word)
    while n_plus > n_minus and word[n_plus - 1][0] == XP:
        n_plus -= 1
    return word[:n_minus], word[n_minus:n_plus], word[n_plus:]


def _block_words(kind: int, nodes: tuple, total: int, window: int):
    """All words with the given node multiset and total mode, modes within the window."""
    from itertools import product

    orders = sorted(set(permutations(nodes)))
    L = len(nodes)
    for modes in product(range(-window, window + 1), repeat=L - 1):
        last = total - sum(modes)
        if abs(last) > window:
            continue
        ms = modes + (last,)
        for order in orders:
            yield tuple((kind, order[p], ms[p]) for p in range(L))


class IdealReducer:
    """Canonical remainders of X^+ / X^- blocks modulo a fixed span of ideal elements.

    For each block weight (sign, node multiset, total mode) the span consists
    of the normal forms of Serre instances and of the overlap differences
    NF(x NF(yz)) - NF(NF(xy) z) for three-letter words, all with modes inside
    ``window``.  Blocks longer than ``max_length`` are only reduced by Serre
    instances of exactly their length.
    """

    def __init__(self, ctx: QContext, window: int = 5, max_length: int = 3):
        self.ctx = ctx
        self.window = window
        self.max_length = max_length
        self._bases: dict = {}
        self._block_memo: dict = {}

    def relations(self, weight: tuple) -> list:
        ctx, datum = self.ctx, self.ctx.datum
        kind, nodes, total = weight
        sgn = 1 if kind == XP else -1
        L = len(nodes)
        rows = []
        counts: dict = {}
        for node in nodes:
            counts[node] = counts.get(node, 0) + 1
        for i, ci in counts.items():
            for j, cj in counts.items():
                if i == j or cj != 1 or ci != 1 - datum.A[i][j] or L != ci + 1:
                    continue
                for ks in _mode_multisets(ci, self.window):
                    l = total - sum(ks)
                    if abs(l) <= self.window:
                        rows.append(serre_instance(i, j, ks, l, sgn, ctx.trunc, datum))
        if L == 3 and L <= self.max_length:
            for x, y, z in _block_words(kind, nodes, total, self.window):
                left = ctx.word_nf((x, y))
                right = ctx.word_nf((y, z))
                a: dict = {}
                for w, c in left.items():
                    for w2, c2 in ctx.word_nf(w + (z,)).items():
                        add_into(a, w2, c * c2)
                for w, c in right.items():
                    for w2, c2 in ctx.word_nf((x,) + w).items():
                        add_into(a, w2, -(c * c2))
                if a:
                    rows.append(QPoly._make(a, ctx.trunc))
        out = []
        for r in rows:
            nf, ok = ctx.normal_form(r)
            if ok and nf:
                out.append(nf)
        return out

    def basis(self, weight: tuple) -> list:
        hit = self._bases.get(weight)
        if hit is None:
            hit = _echelon(self.relations(weight))
            self._bases[weight] = hit
        return hit

    def reduce_block(self, block: tuple) -> dict:
        hit = self._block_memo.get(block)
        if hit is not None:
            return hit
        if len(block) < 2:
            out = {block: self.ctx.one}
        else:
            vec = {block: self.ctx.one}
            for piv, row in self.basis(_block_weight(block)):
                c = vec.get(piv)
                if c:
                    factor = c * row[piv].inverse()
                    for w, v in row.items():
                        add_into(vec, w, -(factor * v))
            out = vec
        self._block_memo[block] = out
        return out

    def reduce(self, p: QPoly) -> QPoly:
        """Blockwise remainder of a normal form (the triangular shape is preserved)."""
        out: dict = {}
        for w, c in p.terms.items():
            minus, mid, plus = _split_blocks(w)
            for wm, cm in self.reduce_block(minus).items():
                for wp, cp in self.reduce_block(plus).items():
                    add_into(out, wm + mid + wp, c * cm * cp)
        return QPoly._make(out, p.trunc)


def ideal_reducer(ctx: QContext, window: int = 5, max_length: int = 3) -> IdealReducer:
    key = (window, max_length)
    cache = ctx.__dict__.setdefault("_reducers", {})
    if key not in cache:
        cache[key] = IdealReducer(ctx, window, max_length)
    return cache[key]


def canonical_form(p: QPoly, datum: CartanDatum, limits: RewriteLimits | None = None,
                   convention: str = "hernandez", window: int = 5) -> tuple[QPoly, bool]:
    """Normal form followed by blockwise reduction modulo the ideal span."""
    ctx = qcontext(datum, p.trunc, convention, limits)
    nf, ok = ctx.normal_form(p)
    if not ok:
        return nf, False
    return ideal_reducer(ctx, window).reduce(nf), True


def _echelon(rows: list) -> list:
    """Reduced echelon form over unit pivots; rows are QPoly normal forms."""
    basis: list = []
    for nf in rows:
        vec = dict(nf.terms)
        for piv, row in basis:
            c = vec.get(piv)
            if c:
                factor = c * row[piv].inverse()
                for w, v in row.items():
                    add_into(vec, w, -(factor * v))
        units = sorted(w for w, c in vec.items() if c.is_unit())
        if not units:
            continue
        piv = units[-1]
        inv = vec[piv].inverse()
        vec = {w: v * inv for w, v in vec.items()}
        for n, (p2, row2) in enumerate(basis):
            c2 = row2.get(piv)
            if c2:
                new = dict(row2)
                for w, v in vec.items():
                    add_into(new, w, -(c2 * v))
                basis[n] = (p2, new)
        basis.append((piv, vec))
    return basis


def reduces_to_zero(p: QPoly, datum: CartanDatum, limits: RewriteLimits | None = None,
                    convention: str = "hernandez", use_serre: bool = True) -> str:
    """'zero', 'nonzero' (refuted) or 'inconclusive' (limits hit)."""
    ctx = qcontext(datum, p.trunc, convention, limits)
    nf, ok = ctx.normal_form(p)
    if not ok:
        return "inconclusive"
    if nf.is_zero():
        return "zero"
    if use_serre:
        red = ideal_reducer(ctx).reduce(nf)
        if red.is_zero():
            return "zero"
    return "nonzero"


# ---------------------------------------------------------------------------
# proof-step identities
# ---------------------------------------------------------------------------

def key_phi_defect(i: int, j: int, k: int, l: int, sign: int, D: int, datum: CartanDatum,
                   form: str = "corrected", convention: str = "hernandez") -> QPoly:
    """LHS - RHS of the Phi^+ / X commutation identity.

    ``form='printed'`` uses the same sign in front of both anticommutators;
    ``form='corrected'`` flips the sign on the right, which is what the
    generating-series relation Phi(z) X(w) = g(z/w) X(w) Phi(z) yields.
    """
    ctx = qcontext(datum, D, convention)
    half = Fraction(datum.d[i] * datum.A[i][j], 2)
    Ap, Am = ctx.qpow(half), ctx.qpow(-half)
    plus, minus = Ap + Am, Ap - Am
    kind = XP if sign > 0 else XM
    X0 = QPoly.gen(kind, j, l, D)
    X1 = QPoly.gen(kind, j, l + 1, D)
    P1 = ctx.phi_signed(i, k + 1, 1)
    P0 = ctx.phi_signed(i, k, 1)
    lhs = commutator(P1, X0).scale(plus) - anticommutator(P1, X0).scale(minus * sign)
    rsign = sign if form == "printed" else -sign
    rhs = commutator(P0, X1).scale(plus) - anticommutator(P0, X1).scale(minus * rsign)
    return lhs - rhs


def verify_key_phi(i: int, j: int, k: int, l: int, sign: int, D: int, datum: CartanDatum,
                   limits: RewriteLimits | None = None, form: str = "corrected",
                   convention: str = "hernandez") -> str:
    """'zero' (verified), 'nonzero' (refuted) or 'inconclusive'."""
    if k < 0:
        raise ValueError("k must be non-negative")
    defect = key_phi_defect(i, j, k, l, sign, D, datum, form, convention)
    return reduces_to_zero(defect, datum, limits, convention, use_serre=False)


def expansion_profile_quantum_integer(i: int, j: int, k_max: int, D: int, datum: CartanDatum) -> Report:
    """(1/k)[k a_ij]_i is even in hbar with hbar^(2r)-coefficient a polynomial of degree 2r in k."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    rep = Report("qint-profile")
    a, d = datum.A[i][j], datum.d[i]
    series = {k: sinh_ratio(k * a * d, d, D) * Fraction(1, k) if a else HSeries.zero(D)
              for k in range(1, k_max + 1)}
    for k, s in series.items():
        ok0 = s.coeffs[0] == a
        rep.add(f"i={i} j={j} k={k} constant", PASS if ok0 else FAIL, witness=str(s))
        odd = [n for n in range(1, D + 1, 2) if s.coeffs[n]]
        rep.add(f"i={i} j={j} k={k} even", PASS if not odd else FAIL, witness=str(odd))
    for r in range(1, D // 2 + 1):
        pts = [(Fraction(k), as_scalar(series[k].coeffs[2 * r])) for k in range(1, k_max + 1)]
        deg = _interpolation_degree(pts)
        expected = 2 * r if a else None
        if a == 0:
            ok = deg is None
        elif k_max < 2 * r + 2:
            ok = deg is not None and deg <= 2 * r
        else:
            ok = deg == 2 * r
        rep.add(f"i={i} j={j} hbar^{2 * r} degree", PASS if ok else FAIL, f_order=deg, expected=expected)
    return rep


def _interpolation_degree(pts: list):
    """Degree of the interpolating polynomial via iterated differences (None for zero)."""
    vals = [v for _, v in pts]
    if not any(vals):
        return None
    deg = 0
    while len(vals) > 1 and any(vals[n] != vals[0] for n in range(len(vals))):
        vals = [vals[n + 1] - vals[n] for n in range(len(vals) - 1)]
        deg += 1
    if len(vals) == 1 and deg == len(pts) - 1:
        return deg
    return deg


# ---------------------------------------------------------------------------
# PBW and anti-involution evidence
# ---------------------------------------------------------------------------

def random_word(rng, datum: CartanDatum, max_length: int = 3, k_max: int = 2) -> tuple:
    n = rng.randint(1, max_length)
    return tuple((rng.choice((XM, H, XP)), rng.choice(list(datum.nodes)), rng.randint(-k_max, k_max))
                 for _ in range(n))


def _uelem_key(u: UElem):
    return frozenset((w, c) for w, c in u.terms.items() if c)


def verify_pbw_evidence(datum: CartanDatum, count: int = 200, seed: int = 0, max_length: int = 3,
                        k_max: int = 2, D: int = DEFAULT_TRUNC, limits: RewriteLimits | None = None,
                        convention: str = "hernandez") -> Report:
    """Random generator products: triangular canonical forms independent of bracketing,
    the mod-hbar commuting square, and distinct mod-hbar images of the normal words met."""
    import random

    from .toroidal import straighten_classical

    rep = Report("pbw-evidence")
    rng = random.Random(seed)
    ctx = qcontext(datum, D, convention, limits)
    words: set = set()
    for n in range(count):
        w = random_word(rng, datum, max_length, k_max)
        label = "#%d %s" % (n, " ".join(letter_str(x) for x in w))
        forms = []
        for cut in range(1, max(len(w), 2)):
            left, _ = ctx.normal_form(QPoly({w[:cut]: HSeries.const(1, D)}, D))
            right, _ = ctx.normal_form(QPoly({w[cut:]: HSeries.const(1, D)}, D) if w[cut:] else QPoly.scalar(1, D))
            cf, ok = canonical_form(left * right, datum, limits, convention)
            if not ok:
                break
            forms.append(cf)
        if len(forms) < max(len(w) - 1, 1):
            rep.add(label, INCONCLUSIVE, witness="rewriting limits hit")
            continue
        unique = all(f == forms[0] for f in forms)
        tri = is_triangular(forms[0], datum, ctx)
        square = classical_limit(forms[0], datum, convention=convention) == straighten_classical(
            psi_word(w, datum, convention), datum, gamma=False)
        ok = unique and tri and square
        words.update(forms[0].terms)
        rep.add(label, PASS if ok else FAIL,
                witness="" if ok else f"unique={unique} triangular={tri} square={square}")
    seen: dict = {}
    clashes = []
    for w in sorted(words):
        key = _uelem_key(classical_limit(QPoly({w: HSeries.const(1, D)}, D), datum, convention=convention))
        if not key or key in seen:
            clashes.append((seen.get(key), w))
        seen[key] = w
    rep.add(f"distinct images of {len(words)} normal words", FAIL if clashes else PASS,
            witness=repr(clashes[:3]) if clashes else "")
    return rep


def random_qpoly(rng, datum: CartanDatum, D: int = DEFAULT_TRUNC, terms: int = 3, max_length: int = 3,
                 k_max: int = 2) -> QPoly:
    out = QPoly({}, D)
    for _ in range(terms):
        c = HSeries([Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(D + 1)], D)
        out = out + QPoly({random_word(rng, datum, max_length, k_max): c}, D)
    return out


def verify_theta(datum: CartanDatum, samples: int = 100, seed: int = 0, window: int = 1,
                 D: int = DEFAULT_TRUNC, serre_window: int = 0, limits: RewriteLimits | None = None,
                 convention: str = "hernandez") -> Report:
    """theta o theta = id on random elements; theta of every relation defect reduces to 0."""
    import random

    rep = Report("theta")
    rng = random.Random(seed)
    for n in range(samples):
        p = random_qpoly(rng, datum, D)
        ok = theta(theta(p)) == p
        rep.add(f"involution #{n}", PASS if ok else FAIL, witness="" if ok else p.pretty())
    for rel, inst, defect in relation_defects(datum, window, D, convention, serre_window=serre_window):
        res = reduces_to_zero(theta(defect), datum, limits, convention)
        rep.add(f"theta {rel} {inst}", {"zero": PASS, "nonzero": FAIL}.get(res, INCONCLUSIVE))
    return rep
