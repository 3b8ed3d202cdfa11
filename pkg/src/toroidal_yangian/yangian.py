"""Affine Yangian over Q[hbar]: rewriting, level-0 braid maps, root vectors, spanning sets.

Letters are ``(kind, i, m)`` with kind 0 = x^-, 1 = h, 2 = x^+ and level m >= 0.
Coefficients are ``HPoly`` (exact polynomials in hbar).  The rewrite rules
mirror the quantum engine: h past x via Y3/Y4, x^+ x^- via Y2, same-node
level sorting via Y5, and cross-node ordering by node index where the level
of the larger node is lowered to 0.  Y6 is only used by the ideal reducer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, permutations
from math import comb, factorial

from .cartan import CartanDatum, Root, enumerate_positive_roots, root_sort_key
from .pbw import add_into
from .qtor import RewriteEngine, RewriteLimits, _block_words, _split_blocks
from .report import FAIL, INCONCLUSIVE, PASS, Report
from .scalar import as_scalar, scalar_str, sqrt_rational
from .weyl import GeneratorIndex, generator_key, minimal_expression

__all__ = [
    "XM",
    "HY",
    "XP",
    "HPoly",
    "YPoly",
    "YContext",
    "ycontext",
    "LevelUnsupported",
    "straighten_yangian",
    "canonical_yangian",
    "yangian_reduces_to_zero",
    "tau_zero",
    "yangian_root_vector0",
    "rescale",
    "enumerate_spanning_monomials",
    "yangian_relation_defects",
    "verify_yangian_relations",
    "filtration_degree",
    "level0_image",
    "verify_tau_level0",
    "SpanningCaps",
]

XM, HY, XP = 0, 1, 2
_NAMES = {XM: "x-", HY: "h", XP: "x+"}


class LevelUnsupported(ValueError):
    pass


class HPoly:
    """Polynomial in hbar with coefficients in Q(sqrt2, sqrt3); ``coeffs[n]`` multiplies hbar^n."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [as_scalar(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c) -> "HPoly":
        return cls((c,))

    @classmethod
    def hbar(cls, power: int = 1, c=1) -> "HPoly":
        return cls((0,) * power + (c,))

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, HPoly):
            other = HPoly.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        if not isinstance(other, HPoly):
            other = HPoly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return HPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return HPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, HPoly):
            c = as_scalar(other)
            return HPoly(c * x for x in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return HPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for n, x in enumerate(self.coeffs):
            if x:
                for m, y in enumerate(other.coeffs):
                    out[n + m] += x * y
        return HPoly(out)

    __rmul__ = __mul__

    def subs(self, factor) -> "HPoly":
        """hbar -> factor * hbar."""
        f = Fraction(factor)
        return HPoly(c * f ** n for n, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"HPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for n, c in enumerate(self.coeffs):
            if c:
                c = scalar_str(c)
                parts.append(c if n == 0 else f"({c})*hbar" + (f"^{n}" if n > 1 else ""))
        return " + ".join(parts)


_ONE = HPoly.const(1)


def _hp(c) -> HPoly:
    return c if isinstance(c, HPoly) else HPoly.const(c)


class YPoly:
    """Sum of Yangian words with HPoly coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        for w, c in (terms or {}).items():
            c = _hp(c)
            if c:
                self.terms[tuple(w)] = c

    @classmethod
    def _make(cls, terms: dict) -> "YPoly":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def gen(cls, kind: int, i: int, m: int) -> "YPoly":
        if m < 0:
            raise ValueError("Yangian levels are non-negative")
        return cls._make({((kind, i, m),): _ONE})

    @classmethod
    def scalar(cls, c) -> "YPoly":
        c = _hp(c)
        return cls._make({(): c} if c else {})

    def __add__(self, other):
        if not isinstance(other, YPoly):
            other = YPoly.scalar(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_into(out, w, c)
        return YPoly._make(out)

    __radd__ = __add__

    def __neg__(self):
        return YPoly._make({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, YPoly):
            other = YPoly.scalar(other)
        return self + (-other)

    def scale(self, c) -> "YPoly":
        c = _hp(c)
        out = {}
        for w, v in self.terms.items():
            x = v * c
            if x:
                out[w] = x
        return YPoly._make(out)

    def __mul__(self, other):
        if isinstance(other, YPoly):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    add_into(out, w1 + w2, c1 * c2)
            return YPoly._make(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, YPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"YPoly({self.pretty()})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        items = []
        for w in sorted(self.terms, key=lambda w: (len(w), w)):
            word = "*".join(f"{_NAMES[x[0]]}({x[1]},{x[2]})" for x in w) or "1"
            items.append(f"({self.terms[w]})*{word}")
        return " + ".join(items)


def ycommutator(a: YPoly, b: YPoly) -> YPoly:
    return a * b - b * a


def yanticommutator(a: YPoly, b: YPoly) -> YPoly:
    return a * b + b * a


def filtration_degree(p: YPoly) -> int:
    """max over words of the level sum (-1 for the zero element)."""
    return max((sum(x[2] for x in w) for w in p.terms), default=-1)


# ---------------------------------------------------------------------------
# rewriting
# ---------------------------------------------------------------------------

class YContext(RewriteEngine):
    def __init__(self, datum: CartanDatum, limits: RewriteLimits | None = None):
        self.datum = datum
        self.limits = limits or RewriteLimits()
        self.one = _ONE
        self._init_engine()
        self._comm: dict = {}
        self._bases: dict = {}
        self._block_memo: dict = {}

    def _check_letter(self, x):
        if x[2] < 0:
            raise ValueError(f"negative level in {x}")

    def sym(self, i: int, j: int) -> Fraction:
        return Fraction(self.datum.sym(i, j))

    def h_commutator(self, i: int, m: int, j: int, n: int, s: int) -> list:
        """[h_{i,m}, x^s_{j,n}] as (word, coeff) pairs, unrolled from Y3/Y4."""
        key = (i, m, j, n, s)
        hit = self._comm.get(key)
        if hit is not None:
            return hit
        b = self.sym(i, j)
        kind = XP if s > 0 else XM
        out: list = []
        if b:
            out.append((((kind, j, n + m),), HPoly.const(s * b)))
            c = HPoly.hbar(1, s * b / 2)
            for r in range(m):
                x = (kind, j, n + m - 1 - r)
                h = (HY, i, r)
                out.append(((h, x), c))
                out.append(((x, h), c))
        self._comm[key] = out
        return out

    def pair_rule(self, a, b):
        ka, kb = a[0], b[0]
        if ka < kb:
            return None
        if ka == HY and kb == HY:
            if (a[1], a[2]) > (b[1], b[2]):
                return [((b, a), _ONE)]
            return None
        if ka == HY and kb == XM:
            return [((b, a), _ONE)] + self.h_commutator(a[1], a[2], b[1], b[2], -1)
        if ka == XP and kb == HY:
            return [((b, a), _ONE)] + [(w, -c) for w, c in self.h_commutator(b[1], b[2], a[1], a[2], 1)]
        if ka == XP and kb == XM:
            out = [((b, a), _ONE)]
            if a[1] == b[1]:
                out.append((((HY, a[1], a[2] + b[2]),), _ONE))
            return out
        s = 1 if ka == XP else -1
        i, p = a[1], a[2]
        j, r = b[1], b[2]
        if i == j:
            if p <= r:
                return None
            c = HPoly.hbar(1, s * self.sym(i, i) / 2)
            if p - r == 1:
                return [((b, a), _ONE), ((b, b), c)]
            return [
                ((b, a), _ONE),
                (((ka, i, p - 1), (ka, i, r + 1)), _ONE),
                (((ka, i, r + 1), (ka, i, p - 1)), -_ONE),
                (((ka, i, p - 1), b), c),
                ((b, (ka, i, p - 1)), c),
            ]
        if i < j:
            return None
        if self.datum.A[i][j] == 0:
            return [((b, a), _ONE)]
        if p == 0:
            return None
        c = HPoly.hbar(1, s * self.sym(i, j) / 2)
        lower = (ka, i, p - 1)
        return [
            ((b, a), _ONE),
            ((lower, (ka, j, r + 1)), _ONE),
            (((ka, j, r + 1), lower), -_ONE),
            ((lower, b), c),
            ((b, lower), c),
        ]

    def normal_form(self, p: YPoly) -> tuple[YPoly, bool]:
        terms, ok = self.normal_terms(p.terms)
        return (YPoly._make(terms) if ok else p), ok

    # -- reduction modulo Y6 and three-letter overlaps ---------------------------
    def relations(self, weight: tuple) -> list:
        """Dehomogenized ({word: Fraction}) relation rows for a block weight."""
        kind, nodes, total = weight
        datum = self.datum
        rows: list = []
        counts: dict = {}
        for node in nodes:
            counts[node] = counts.get(node, 0) + 1
        L = len(nodes)
        for i, ci in counts.items():
            for j, cj in counts.items():
                if i == j or cj != 1 or ci != 1 - datum.A[i][j] or L != ci + 1:
                    continue
                for ms in combinations_with_replacement(range(total + 1), ci):
                    n = total - sum(ms)
                    if n >= 0:
                        rows.append(yangian_serre(i, j, ms, n, 1 if kind == XP else -1, datum).terms)
        if L == 3:
            for x, y, z in _level_words(kind, nodes, total):
                a: dict = {}
                for w, c in self.word_nf((x, y)).items():
                    for w2, c2 in self.word_nf(w + (z,)).items():
                        add_into(a, w2, c * c2)
                for w, c in self.word_nf((y, z)).items():
                    for w2, c2 in self.word_nf((x,) + w).items():
                        add_into(a, w2, -(c * c2))
                if a:
                    rows.append(a)
        out = []
        for r in rows:
            nf, ok = self.normal_terms(r)
            if ok and nf:
                out.append(_dehomogenize(nf))
        return out

    def basis(self, kind: int, nodes: tuple) -> dict:
        """Leading-word echelon rows {pivot: row} over all levels up to the current cap."""
        key = (kind, nodes)
        cap = self.limits.mode_window
        hit = self._bases.get(key)
        if hit is not None:
            return hit
        basis: dict = {}
        for total in range(cap + 1):
            for row in self.relations((kind, nodes, total)):
                vec = _reduce_leading(dict(row), basis)
                if vec:
                    piv = max(vec, key=_level_key)
                    c = vec[piv]
                    basis[piv] = {w: v / c for w, v in vec.items()}
        self._bases[key] = basis
        return basis

    def reduce_block(self, block: tuple) -> dict:
        hit = self._block_memo.get(block)
        if hit is not None:
            return hit
        if len(block) < 2 or len(block) > 3 and not _is_serre_shape(block, self.datum):
            out = {block: Fraction(1)}
        else:
            nodes = tuple(sorted(x[1] for x in block))
            out = _reduce_leading({block: Fraction(1)}, self.basis(block[0][0], nodes))
        self._block_memo[block] = out
        return out

    def reduce(self, p: YPoly) -> YPoly:
        out: dict = {}
        for w, c in p.terms.items():
            minus, mid, plus = _split_blocks(w)
            lev = _level(w)
            for e, ce in enumerate(c.coeffs):
                if not ce:
                    continue
                N = lev + e
                for wm, cm in self.reduce_block(minus).items():
                    for wp, cp in self.reduce_block(plus).items():
                        nw = wm + mid + wp
                        add_into(out, nw, HPoly.hbar(N - _level(nw), ce * cm * cp))
        return YPoly._make(out)


def _is_serre_shape(block: tuple, datum: CartanDatum) -> bool:
    counts: dict = {}
    for x in block:
        counts[x[1]] = counts.get(x[1], 0) + 1
    if len(counts) != 2:
        return False
    (i, ci), (j, cj) = sorted(counts.items(), key=lambda kv: -kv[1])
    return cj == 1 and ci == 1 - datum.A[i][j]


def _level(word: tuple) -> int:
    return sum(x[2] for x in word)


def _level_key(word: tuple):
    return (_level(word), word)


def _level_words(kind: int, nodes: tuple, total: int):
    orders = sorted(set(permutations(nodes)))
    L = len(nodes)
    for levels in _compositions(total, L):
        for order in orders:
            yield tuple((kind, order[p], levels[p]) for p in range(L))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _dehomogenize(terms: dict) -> dict:
    out: dict = {}
    for w, c in terms.items():
        s = sum(c.coeffs, Fraction(0))
        if s:
            add_into(out, w, s)
    return out


def _reduce_leading(vec: dict, basis: dict) -> dict:
    while True:
        hits = [w for w in vec if w in basis]
        if not hits:
            return vec
        p = max(hits, key=_level_key)
        c = vec[p]
        for w, v in basis[p].items():
            add_into(vec, w, -(c * v))


@lru_cache(maxsize=32)
def ycontext(datum: CartanDatum, limits: RewriteLimits | None = None) -> YContext:
    return YContext(datum, limits or RewriteLimits(mode_window=4))


def straighten_yangian(p: YPoly, datum: CartanDatum, limits: RewriteLimits | None = None) -> tuple[YPoly, bool]:
    ctx = ycontext(datum, limits)
    nf, ok = ctx.normal_form(p)
    if not ok:
        return nf, False
    for w in nf.terms:
        kinds = [x[0] for x in w]
        if kinds != sorted(kinds):
            return nf, False
    return nf, True


def canonical_yangian(p: YPoly, datum: CartanDatum, limits: RewriteLimits | None = None) -> tuple[YPoly, bool]:
    ctx = ycontext(datum, limits)
    nf, ok = ctx.normal_form(p)
    if not ok:
        return nf, False
    return ctx.reduce(nf), True


def yangian_reduces_to_zero(p: YPoly, datum: CartanDatum, limits: RewriteLimits | None = None) -> str:
    nf, ok = canonical_yangian(p, datum, limits)
    if not ok:
        return "inconclusive"
    return "zero" if nf.is_zero() else "nonzero"


# ---------------------------------------------------------------------------
# relations
# ---------------------------------------------------------------------------

def yangian_serre(i: int, j: int, ms: tuple, n: int, sign: int, datum: CartanDatum) -> YPoly:
    r = 1 - datum.A[i][j]
    if len(ms) != r:
        raise ValueError("need r = 1 - a_ij levels")
    kind = XP if sign > 0 else XM
    out: dict = {}
    for perm in permutations(range(r)):
        for a in range(r + 1):
            word = tuple((kind, i, ms[perm[p]]) for p in range(a)) + ((kind, j, n),) + \
                tuple((kind, i, ms[perm[p]]) for p in range(a, r))
            add_into(out, word, HPoly.const((-1) ** a * comb(r, a)))
    return YPoly._make(out)


def yangian_relation_defects(datum: CartanDatum, level_cap: int = 2, serre_cap: int = 1,
                             relations=("Y1", "Y2", "Y3", "Y4", "Y5", "Y6")):
    """Yield (relation, label, LHS - RHS, nominal degree, params)."""
    rels = set(relations)
    g = YPoly.gen
    nodes = list(datum.nodes)
    for i in nodes:
        for j in nodes:
            b = Fraction(datum.sym(i, j))
            for m in range(level_cap + 1):
                for n in range(level_cap + 1):
                    if "Y1" in rels:
                        yield "Y1", f"h{i},{m} h{j},{n}", ycommutator(g(HY, i, m), g(HY, j, n)), m + n, (i, j, m, n)
                    if "Y2" in rels:
                        rhs = g(HY, i, m + n) if i == j else YPoly()
                        yield "Y2", f"x+{i},{m} x-{j},{n}", ycommutator(g(XP, i, m), g(XM, j, n)) - rhs, m + n, (i, j, m, n)
                    for s, kind in ((1, XP), (-1, XM)):
                        tag = "+" if s > 0 else "-"
                        if "Y3" in rels and m == 0:
                            yield "Y3", f"h{i},0 x{tag}{j},{n}", (
                                ycommutator(g(HY, i, 0), g(kind, j, n)) - g(kind, j, n).scale(s * b)), n, (i, j, s, n)
                        if m + n + 1 > level_cap + 1:
                            continue
                        c = HPoly.hbar(1, s * b / 2)
                        if "Y4" in rels:
                            lhs = ycommutator(g(HY, i, m + 1), g(kind, j, n)) - ycommutator(g(HY, i, m), g(kind, j, n + 1))
                            yield "Y4", f"h{i},{m} x{tag}{j},{n}", (
                                lhs - yanticommutator(g(HY, i, m), g(kind, j, n)).scale(c)), m + n + 1, (i, j, s, m, n)
                        if "Y5" in rels:
                            lhs = ycommutator(g(kind, i, m + 1), g(kind, j, n)) - ycommutator(g(kind, i, m), g(kind, j, n + 1))
                            yield "Y5", f"x{tag}{i},{m} x{tag}{j},{n}", (
                                lhs - yanticommutator(g(kind, i, m), g(kind, j, n)).scale(c)), m + n + 1, (i, j, s, m, n)
    if "Y6" in rels:
        for i in nodes:
            for j in nodes:
                if i == j or datum.A[i][j] != -1:
                    continue
                for ms in combinations_with_replacement(range(serre_cap + 1), 2):
                    for n in range(serre_cap + 1):
                        for s in (1, -1):
                            tag = "+" if s > 0 else "-"
                            yield "Y6", f"x{tag} i={i} j={j} m={ms} n={n}", yangian_serre(i, j, ms, n, s, datum), \
                                sum(ms) + n, (i, j, s, ms, n)


def verify_yangian_relations(datum: CartanDatum, level_cap: int = 2, limits: RewriteLimits | None = None) -> Report:
    rep = Report("yangian-relations")
    for rel, label, defect, _, _ in yangian_relation_defects(datum, level_cap):
        res = yangian_reduces_to_zero(defect, datum, limits)
        status = {"zero": PASS, "nonzero": FAIL, "inconclusive": INCONCLUSIVE}[res]
        rep.add(f"{rel} {label}", status)
    return rep


# ---------------------------------------------------------------------------
# level-0 braid maps and root vectors
# ---------------------------------------------------------------------------

def _ad_power(x: YPoly, y: YPoly, n: int) -> YPoly:
    for _ in range(n):
        y = ycommutator(x, y)
    return y


def _tau_letter(i: int, x, datum: CartanDatum) -> YPoly:
    kind, j, m = x
    if m != 0:
        raise LevelUnsupported(f"tau_zero needs level-0 generators, got level {m}")
    if kind == HY:
        return YPoly.gen(HY, j, 0) - YPoly.gen(HY, i, 0).scale(datum.A[i][j])
    if i == j:
        return -YPoly.gen(XM if kind == XP else XP, i, 0)
    n = -datum.A[i][j]
    # the Chevalley e_i, f_i are x^+-_{i,0} / sqrt(d_i)
    norm = sqrt_rational(Fraction(1) / datum.d[i]) ** n
    if kind == XP:
        return _ad_power(YPoly.gen(XP, i, 0), YPoly.gen(XP, j, 0), n).scale(norm * Fraction(1, factorial(n)))
    return _ad_power(YPoly.gen(XM, i, 0), YPoly.gen(XM, j, 0), n).scale(norm * Fraction((-1) ** n, factorial(n)))


def tau_zero(i: int, p: YPoly, datum: CartanDatum) -> YPoly:
    out = YPoly()
    for w, c in p.terms.items():
        term = YPoly.scalar(c)
        for x in w:
            term = term * _tau_letter(i, x, datum)
        out = out + term
    return out


def yangian_root_vector0(beta: Root, sign: int, datum: CartanDatum, tag: int | None = None,
                         budget: int = 200_000) -> YPoly:
    """x^+-_{beta,0}: tau-images of simple generators, or nested brackets for k delta(i)."""
    kind = XP if sign > 0 else XM
    if beta.is_imaginary:
        if tag is None or tag not in datum.finite_nodes:
            raise ValueError("imaginary roots need a finite node tag")
        rest = beta - datum.simple_root(tag)
        return ycommutator(YPoly.gen(kind, tag, 0), yangian_root_vector0(rest, sign, datum, budget=budget))
    word, j = minimal_expression(beta, datum, budget)
    out = YPoly.gen(kind, j, 0)
    for i in reversed(word.letters):
        out = tau_zero(i, out, datum)
    if word.eta is not None:
        out = YPoly._make({tuple((x[0], word.eta[x[1]], x[2]) for x in w): c for w, c in out.terms.items()})
    return out


def rescale(p: YPoly, ratio) -> YPoly:
    """x_{i,m}, h_{i,m} -> ratio^m (same), hbar -> ratio * hbar."""
    r = Fraction(ratio)
    if not r:
        raise ValueError("ratio must be nonzero")
    out: dict = {}
    for w, c in p.terms.items():
        add_into(out, w, c.subs(r) * r ** _level(w))
    return YPoly._make(out)


# ---------------------------------------------------------------------------
# spanning set
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpanningCaps:
    max_degree: int = 1
    max_level: int = 0
    k_max: int = 0

    def __post_init__(self):
        if min(self.max_degree, self.max_level, self.k_max) < 0:
            raise ValueError("caps must be non-negative")


def spanning_generators(caps: SpanningCaps, datum: CartanDatum) -> list:
    """Generator indices x^-_{beta,m}, h_{i,m}, x^+_{beta,m} within caps, in increasing order."""
    gens = []
    for beta, mult in enumerate_positive_roots(datum, caps.k_max):
        tags = list(datum.finite_nodes)[:mult] if beta.is_imaginary else [0]
        for tag in tags:
            for m in range(caps.max_level + 1):
                gens.append(GeneratorIndex("xminus", beta, m, tag))
                gens.append(GeneratorIndex("xplus", beta, m, tag))
    for i in datum.nodes:
        for m in range(caps.max_level + 1):
            gens.append(GeneratorIndex("hy", i, m))
    gens.sort(key=generator_key)
    return gens


def enumerate_spanning_monomials(caps: SpanningCaps, datum: CartanDatum) -> list:
    """All non-decreasing words of length 1..max_degree (plus the empty word) in the generators."""
    gens = spanning_generators(caps, datum)
    out = [()]
    for L in range(1, caps.max_degree + 1):
        out.extend(combinations_with_replacement(gens, L))
    return out


def level0_image(p: YPoly, datum: CartanDatum):
    """Image of a level-0, hbar-free element in U(g^tor) at t^0 (straightened, gamma dropped).

    x^+_{i,0} -> sqrt(d_i) e_i, x^-_{i,0} -> sqrt(d_i) f_i, h_{i,0} -> d_i h_i; the
    level-0 Yangian relations carry no hbar, so this is the embedding of U(g).
    """
    from .pbw import UElem
    from .qtor import psi_word
    from .toroidal import straighten_classical

    out = UElem()
    for w, c in p.terms.items():
        if any(x[2] for x in w):
            raise LevelUnsupported("level0_image needs level-0 words")
        if c.degree() > 0:
            raise LevelUnsupported("level0_image needs hbar-free coefficients")
        out = out + psi_word(w, datum).scale(c.coeffs[0])
    return straighten_classical(out, datum, gamma=False)


def verify_tau_level0(datum: CartanDatum) -> Report:
    """tau_i maps level-0 relation defects to elements with zero classical image; on the
    Cartan span it acts by the reflection matrix and squares to the identity."""
    rep = Report("tau-level0")
    for rel, label, defect, _, _ in yangian_relation_defects(datum, 0, 0, ("Y1", "Y2", "Y3", "Y6")):
        for i in datum.nodes:
            img = level0_image(tau_zero(i, defect, datum), datum)
            rep.add(f"tau{i} {rel} {label}", PASS if img.is_zero() else FAIL,
                    witness="" if img.is_zero() else repr(img))
    for i in datum.nodes:
        for j in datum.nodes:
            h = YPoly.gen(HY, j, 0)
            once = tau_zero(i, h, datum)
            expected = h - YPoly.gen(HY, i, 0).scale(datum.A[i][j])
            twice = tau_zero(i, once, datum)
            ok = once == expected and twice == h
            rep.add(f"tau{i} h{j}", PASS if ok else FAIL, witness="" if ok else once.pretty())
    return rep
