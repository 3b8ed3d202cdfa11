"""The classical toroidal Lie algebra in its loop realization.

Letters of the enveloping algebra:

* ``("x", b, p, q)`` -- finite Chevalley basis vector ``b`` tensored with
  ``s^p t^q``;
* ``("K", m)`` -- the central element ``c t^m``;
* ``("g",)`` -- the central element gamma.

The bracket is the universal central extension cocycle restricted to the
symbols reachable from the generators.  U(g^tor) is obtained by setting
gamma to zero, and kappa-orders are computed after substituting
``t = 1 + eps``; the eps-side bracket has exactly the same shape as the
gamma-free t-side bracket, so one straightener serves both.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from .cartan import CartanDatum, Root, root_sort_key
from .liealg import FiniteLie, finite_lie
from .pbw import Straightener, UElem, add_into
from .report import FAIL, PASS, Report
from .scalar import Scalar, generalized_binomial
from .weyl import WeylWord, _negate_key

__all__ = [
    "LieElem",
    "AdNotNilpotent",
    "OrderAtCap",
    "ToroidalContext",
    "context",
    "bracket",
    "generator_image",
    "verify_toroidal_relations",
    "apply_weyl_word",
    "root_vector",
    "straighten_classical",
    "kappa_order",
    "eps_expansion",
    "alt_sum_classical",
    "check_pi_homomorphism",
    "letter_name",
    "GAMMA",
]

GAMMA = ("g",)
INF = float("inf")


class AdNotNilpotent(RuntimeError):
    pass


class OrderAtCap(ArithmeticError):
    """Raised when no nonzero eps-term exists below the cap; ``lower_bound`` is the cap."""

    def __init__(self, lower_bound: int):
        super().__init__(f"kappa-order >= {lower_bound} (cap reached)")
        self.lower_bound = lower_bound


class LieElem:
    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other: "LieElem") -> "LieElem":
        out = dict(self.terms)
        for k, v in other.terms.items():
            add_into(out, k, v)
        return LieElem(out)

    def __sub__(self, other: "LieElem") -> "LieElem":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: Scalar) -> "LieElem":
        return LieElem({k: c * v for k, v in self.terms.items()})

    __rmul__ = scale

    def __mul__(self, c):
        return self.scale(c)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LieElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"LieElem({self.terms!r})"

    def to_uelem(self) -> UElem:
        return UElem.from_lie(self.terms)


class ToroidalContext:
    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.lie: FiniteLie = finite_lie(datum)
        L = self.lie
        self.e_theta = L.e(datum.theta)
        self.f_theta = L.f(datum.theta)
        self.h_theta = {L.h(i): c for i, c in zip(datum.finite_nodes, datum.comarks)}
        self._keys: dict = {}
        self.full = Straightener(self.key, self.bracket_full)
        self.quot = Straightener(self.key, self.bracket_quot)

    # -- ordering ------------------------------------------------------------
    def key(self, letter) -> tuple:
        k = self._keys.get(letter)
        if k is None:
            k = self._compute_key(letter)
            self._keys[letter] = k
        return k

    def _compute_key(self, letter) -> tuple:
        tag = letter[0]
        if tag == "g":
            return (-1,)
        if tag == "K":
            return (1, (0,), letter[1])
        _, b, p, q = letter
        L = self.lie
        wt = L.root_of(b)
        if not any(wt):
            node = b - 2 * L.P + 1
            if p == 0:
                return (1, (node,), q)
            rk = root_sort_key(Root(wt, abs(p)), node)
            return (2, rk, q) if p > 0 else (0, _negate_key(rk), q)
        rho = Root(wt, p)
        if rho.is_positive():
            return (2, root_sort_key(rho), q)
        return (0, _negate_key(root_sort_key(-rho)), q)

    def affine_root(self, letter) -> Root | None:
        if letter[0] != "x":
            return None
        return Root(self.lie.root_of(letter[1]), letter[2])

    # -- brackets --------------------------------------------------------------
    def bracket_full(self, a, b) -> dict:
        return self._bracket(a, b, True)

    def bracket_quot(self, a, b) -> dict:
        return self._bracket(a, b, False)

    def _bracket(self, a, b, with_gamma: bool) -> dict:
        if a[0] != "x" or b[0] != "x":
            return {}
        _, x, p, q = a
        _, y, r, u = b
        out = {("x", z, p + r, q + u): c for z, c in self.lie.bracket(x, y).items()}
        if p + r == 0:
            f = self.lie.form(x, y)
            if f:
                if p:
                    add_into(out, ("K", q + u), p * f)
                if with_gamma and q and q + u == 0:
                    add_into(out, GAMMA, q * f)
        return out

    def lie_bracket(self, a: LieElem, b: LieElem, with_gamma: bool = True) -> LieElem:
        out: dict = {}
        for x, c in a.terms.items():
            for y, d in b.terms.items():
                for z, v in self._bracket(x, y, with_gamma).items():
                    add_into(out, z, c * d * v)
        return LieElem(out)

    # -- generators ------------------------------------------------------------
    def generator_image(self, gen) -> LieElem:
        if gen[0] in ("gamma", "g"):
            return LieElem({GAMMA: 1})
        kind, i, k = gen
        L = self.lie
        if i == 0:
            if kind == "e":
                return LieElem({("x", self.f_theta, 1, k): 1})
            if kind == "f":
                return LieElem({("x", self.e_theta, -1, k): -1})
            if kind == "h":
                out = {("x", b, 0, k): -c for b, c in self.h_theta.items()}
                out[("K", k)] = 1
                return LieElem(out)
        else:
            if kind == "e":
                return LieElem({("x", L.e_simple(i), 0, k): 1})
            if kind == "f":
                return LieElem({("x", L.f_simple(i), 0, k): -1})
            if kind == "h":
                return LieElem({("x", L.h(i), 0, k): 1})
        raise ValueError(f"unknown generator {gen!r}")

    def sl2_triple(self, i: int):
        """Standard (e, f, h) with [e, f] = h; f is minus the f_i^(0) image."""
        e = self.generator_image(("e", i, 0))
        f = self.generator_image(("f", i, 0)).scale(-1)
        return e, f, self.lie_bracket(e, f)

    def letter_name(self, letter) -> str:
        if letter[0] == "g":
            return "gamma"
        if letter[0] == "K":
            return f"K({letter[1]})"
        _, b, p, q = letter
        return f"{self.lie.label(b)}@s{p}t{q}"


@lru_cache(maxsize=None)
def context(datum: CartanDatum) -> ToroidalContext:
    return ToroidalContext(datum)


def letter_name(letter, datum: CartanDatum) -> str:
    return context(datum).letter_name(letter)


def bracket(a: LieElem, b: LieElem, datum: CartanDatum) -> LieElem:
    return context(datum).lie_bracket(a, b)


def generator_image(gen, datum: CartanDatum) -> LieElem:
    return context(datum).generator_image(gen)


def _ad_power(ctx: ToroidalContext, x: LieElem, y: LieElem, n: int) -> LieElem:
    for _ in range(n):
        y = ctx.lie_bracket(x, y)
    return y


def verify_toroidal_relations(datum: CartanDatum, window: int = 3) -> Report:
    if window < 1:
        raise ValueError("window must be >= 1")
    ctx = context(datum)
    g = ctx.generator_image
    br = ctx.lie_bracket
    rep = Report("toroidal")
    nodes = list(datum.nodes)
    modes = range(-window, window + 1)
    gam = LieElem({GAMMA: 1})

    def check(rel, inst, lhs: LieElem, rhs: LieElem):
        diff = lhs - rhs
        rep.add(f"{rel} {inst}", PASS if diff.is_zero() else FAIL,
                witness="" if diff.is_zero() else repr(diff), suite="toroidal")

    from .cartan import coroot_form

    for i in nodes:
        for k in modes:
            for kind in "efh":
                check("tor1", f"{kind}{i},{k}", br(gam, g((kind, i, k))), LieElem())
    for i in nodes:
        for j in nodes:
            hij = coroot_form(i, j, datum)
            aij = datum.A[i][j]
            for k in modes:
                for l in modes:
                    rhs = gam.scale(k * hij) if k == -l else LieElem()
                    check("tor2", f"h{i},{k} h{j},{l}", br(g(("h", i, k)), g(("h", j, l))), rhs)
                    check("tor3", f"h{i},{k} e{j},{l}", br(g(("h", i, k)), g(("e", j, l))),
                          g(("e", j, k + l)).scale(aij))
                    check("tor3", f"h{i},{k} f{j},{l}", br(g(("h", i, k)), g(("f", j, l))),
                          g(("f", j, k + l)).scale(-aij))
                    if i == j:
                        rhs = g(("h", i, k + l))
                        if k == -l:
                            rhs = rhs + gam.scale(Fraction(2 * k) / datum.sym(i, i))
                        rhs = rhs.scale(-1)
                    else:
                        rhs = LieElem()
                    check("tor4", f"e{i},{k} f{j},{l}", br(g(("e", i, k)), g(("f", j, l))), rhs)
                    if i == j:
                        check("tor5", f"e{i},{k} e{i},{l}", br(g(("e", i, k)), g(("e", i, l))), LieElem())
                        check("tor5", f"f{i},{k} f{i},{l}", br(g(("f", i, k)), g(("f", i, l))), LieElem())
            if i != j:
                r = 1 - aij
                for k in modes:
                    check("tor6", f"(ad e{i},0)^{r} e{j},{k}",
                          _ad_power(ctx, g(("e", i, 0)), g(("e", j, k)), r), LieElem())
                    check("tor6", f"(ad f{i},0)^{r} f{j},{k}",
                          _ad_power(ctx, g(("f", i, 0)), g(("f", j, k)), r), LieElem())
    return rep


def _exp_ad(ctx: ToroidalContext, x: LieElem, y: LieElem, sign: int = 1, cap: int = 12) -> LieElem:
    out = y
    term = y
    for n in range(1, cap + 1):
        term = ctx.lie_bracket(x, term).scale(Fraction(sign, n))
        if term.is_zero():
            return out
        out = out + term
    raise AdNotNilpotent("ad-series did not terminate")


def apply_weyl_word(word: WeylWord, elem: LieElem, datum: CartanDatum) -> LieElem:
    """eta r_{i1} ... r_{il}(elem) with r_i = exp(ad e_i) exp(-ad f_i) exp(ad e_i)."""
    if word.eta is not None and tuple(word.eta) != tuple(datum.nodes):
        raise NotImplementedError("diagram automorphisms are not realized on loop elements")
    ctx = context(datum)
    for i in reversed(word.letters):
        e, f, _ = ctx.sl2_triple(i)
        elem = _exp_ad(ctx, e, elem)
        elem = _exp_ad(ctx, f, elem, sign=-1)
        elem = _exp_ad(ctx, e, elem)
    return elem


def root_vector(beta: Root, k: int, kind: str, datum: CartanDatum) -> LieElem:
    """e_beta^(k) or f_beta^(k) from a minimal expression of the real root beta."""
    from .weyl import minimal_expression

    word, j = minimal_expression(beta, datum)
    return apply_weyl_word(word, generator_image((kind, j, k), datum), datum)


def straighten_classical(u: UElem, datum: CartanDatum, gamma: bool = True) -> UElem:
    """PBW normal form in U(t) (``gamma=True``) or U(g^tor) (``gamma=False``)."""
    ctx = context(datum)
    if gamma:
        return ctx.full.straighten(u)
    return ctx.quot.straighten(drop_gamma(u))


def drop_gamma(u: UElem) -> UElem:
    return UElem({w: c for w, c in u.terms.items() if GAMMA not in w})


def _letter_eps(letter, cap: int) -> list:
    """t^q = sum_m binom(q, m) eps^m, truncated below cap."""
    if letter[0] == "K":
        q = letter[1]
        return [(m, generalized_binomial(q, m), ("K", m)) for m in range(cap)
                if generalized_binomial(q, m)]
    _, b, p, q = letter
    return [(m, generalized_binomial(q, m), ("x", b, p, m)) for m in range(cap)
            if generalized_binomial(q, m)]


def eps_expansion(u: UElem, cap: int = 8) -> dict:
    """{degree: {eps-word: coeff}} for total eps-degree < cap (gamma set to 0)."""
    out: dict = {}
    cache: dict = {}
    for word, c in u.terms.items():
        if GAMMA in word:
            continue
        parts = []
        for letter in word:
            exp = cache.get(letter)
            if exp is None:
                exp = _letter_eps(letter, cap)
                cache[letter] = exp
            parts.append(exp)

        def rec(pos, deg, coeff, acc):
            if pos == len(parts):
                add_into(out.setdefault(deg, {}), tuple(acc), coeff)
                return
            for m, bc, lt in parts[pos]:
                if deg + m >= cap:
                    break
                acc.append(lt)
                rec(pos + 1, deg + m, coeff * bc, acc)
                acc.pop()

        rec(0, 0, c, [])
    return out


def kappa_order(u: UElem, datum: CartanDatum, cap: int = 8):
    """Exact kappa-adic order below ``cap``; ``inf`` for zero; OrderAtCap otherwise."""
    ctx = context(datum)
    exp = eps_expansion(u, cap)
    for deg in sorted(exp):
        comp = ctx.quot.straighten_terms(exp[deg].items())
        if comp:
            return deg
    if ctx.quot.straighten(drop_gamma(u)).is_zero():
        return INF
    raise OrderAtCap(cap)


def _shift_t(elem: LieElem, k: int) -> LieElem:
    out = {}
    for letter, c in elem.terms.items():
        if letter[0] == "x":
            out[("x", letter[1], letter[2], letter[3] + k)] = c
        elif letter[0] == "K":
            out[("K", letter[1] + k)] = c
        else:
            raise ValueError("gamma has no t-shift")
    return LieElem(out)


def _as_template(z, datum: CartanDatum) -> LieElem:
    if isinstance(z, LieElem):
        return z
    kind, idx = z
    if isinstance(idx, Root):
        if idx.is_imaginary:
            raise ValueError("alternating sums of imaginary root vectors need an explicit template")
        return root_vector(idx, 0, kind, datum)
    return generator_image((kind, idx, 0), datum)


def alt_sum_lie(z, k: int, m: int, datum: CartanDatum) -> LieElem:
    base = _as_template(z, datum)
    out = LieElem()
    for a in range(m + 1):
        c = (-1) ** (m - a) * generalized_binomial(m, a)
        out = out + _shift_t(base, k + a).scale(c)
    return out


def alt_sum_classical(z, k: int, m: int, datum: CartanDatum) -> UElem:
    """z^(k,m) = sum_a (-1)^(m-a) binom(m,a) z^(k+a); z = (kind, node|Root) or a t^0 LieElem."""
    return alt_sum_lie(z, k, m, datum).to_uelem()


def check_pi_homomorphism(z1, z2, m1: int, m2: int, datum: CartanDatum) -> Report:
    ctx = context(datum)
    lhs = ctx.lie_bracket(alt_sum_lie(z1, 0, m1, datum), alt_sum_lie(z2, 0, m2, datum), with_gamma=False)
    inner = ctx.lie_bracket(_as_template(z1, datum), _as_template(z2, datum), with_gamma=False)
    rhs = alt_sum_lie(inner, 0, m1 + m2, datum)
    diff = lhs - rhs
    rep = Report("pi-hom")
    rep.add(f"[{z1}^(0,{m1}), {z2}^(0,{m2})]", PASS if diff.is_zero() else FAIL,
            witness="" if diff.is_zero() else repr(diff))
    return rep


def uelem_to_json(u: UElem, datum: CartanDatum) -> list:
    ctx = context(datum)
    items = []
    for w, c in u.terms.items():
        from .scalar import scalar_to_json

        items.append([scalar_to_json(c), [ctx.letter_name(x) for x in w]])
    items.sort(key=lambda it: it[1])
    return items


def letters_of(elem: LieElem) -> Iterable:
    return elem.terms.keys()
