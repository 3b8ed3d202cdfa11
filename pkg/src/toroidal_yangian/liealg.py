"""Chevalley basis of the finite simple Lie algebra attached to a Cartan datum.

Root vectors are built from nested brackets of simple generators,
``e_beta = [e_i, e_gamma] / (p + 1)`` where ``p`` is the depth of the
alpha_i-string through gamma.  This division is exactly what turns the nested
bracket into a Chevalley vector, so every structure constant comes out an
integer.  The f-side uses the same words in the f generators, followed by a
sign fix so that ``[e_beta, f_beta] = h_beta``.  Nothing is read from tables:
the Jacobi identity and the Serre relations are checked in the tests.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .cartan import CartanDatum

__all__ = ["FiniteLie", "finite_lie"]


class FiniteLie:
    """Basis indices: e_beta -> r, f_beta -> P + r, h_i -> 2P + i - 1."""

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.N = datum.N
        self.roots = list(datum.finite_positive_roots)
        self.P = len(self.roots)
        self.dim = 2 * self.P + self.N
        self.root_index = {r: n for n, r in enumerate(self.roots)}
        self._build_generator_action()
        self._table: dict = {}
        self._signs = [1] * self.P
        self._fix_signs()
        self._build_form()

    # -- labels ------------------------------------------------------------
    def e(self, beta) -> int:
        return self.root_index[tuple(beta)]

    def f(self, beta) -> int:
        return self.P + self.root_index[tuple(beta)]

    def h(self, i: int) -> int:
        return 2 * self.P + i - 1

    def e_simple(self, i: int) -> int:
        return self.e(self._simple(i))

    def f_simple(self, i: int) -> int:
        return self.f(self._simple(i))

    def _simple(self, i: int) -> tuple:
        return tuple(1 if j == i else 0 for j in range(1, self.N + 1))

    def kind(self, b: int) -> str:
        if b < self.P:
            return "e"
        if b < 2 * self.P:
            return "f"
        return "h"

    def root_of(self, b: int) -> tuple:
        """Weight of a basis vector (zero for Cartan elements)."""
        if b < self.P:
            return self.roots[b]
        if b < 2 * self.P:
            return tuple(-c for c in self.roots[b - self.P])
        return (0,) * self.N

    def label(self, b: int) -> str:
        k = self.kind(b)
        if k == "h":
            return f"h{b - 2 * self.P + 1}"
        beta = self.roots[b % self.P] if k == "e" else self.roots[b - self.P]
        return k + "(" + "+".join(
            (f"{c}a{j}" if c > 1 else f"a{j}") for j, c in enumerate(beta, 1) if c
        ) + ")"

    # -- construction --------------------------------------------------------
    def _pair(self, beta, i: int) -> int:
        """beta(h_i) for a finite weight beta and finite node i."""
        A = self.datum.A
        return sum(c * A[i][j] for j, c in zip(range(1, self.N + 1), beta))

    def _is_root(self, beta) -> bool:
        return tuple(beta) in self.root_index

    def _build_generator_action(self):
        n = self.N
        # canonical decomposition for height >= 2
        self.canon = {}
        for beta in self.roots:
            if sum(beta) < 2:
                continue
            for i in range(1, n + 1):
                gamma = _sub_simple(beta, i)
                if self._is_root(gamma):
                    p = 0
                    g = gamma
                    while True:
                        g = _sub_simple(g, i)
                        if self._is_root(g):
                            p += 1
                        else:
                            break
                    self.canon[beta] = (i, gamma, p)
                    break
        # E[(i, gamma)] = c with [e_i, e_gamma] = c e_{gamma + alpha_i}
        # L[(j, beta)] = lam with [f_j, e_beta] = lam e_{beta - alpha_j}  (beta != alpha_j)
        E: dict = {}
        L: dict = {}
        for beta in self.roots:
            if sum(beta) < 2:
                continue
            i1, gamma, p = self.canon[beta]
            for j in range(1, n + 1):
                target = _sub_simple(beta, j)
                if not self._is_root(target):
                    continue
                val = Fraction(0)
                if j == i1:
                    val -= self._pair(gamma, i1)
                if gamma == self._simple(j):
                    val += self.datum.A[j][i1]
                else:
                    g2 = _sub_simple(gamma, j)
                    if self._is_root(g2):
                        val += L.get((j, gamma), 0) * E.get((i1, g2), 0)
                L[(j, beta)] = val / (p + 1)
            for i in range(1, n + 1):
                gamma2 = _sub_simple(beta, i)
                if not self._is_root(gamma2):
                    continue
                if i == i1:
                    E[(i, gamma2)] = Fraction(p + 1)
                    continue
                j = next(j for j in range(1, n + 1) if L.get((j, beta)))
                x = Fraction(0)
                if i == j:
                    x -= self._pair(gamma2, i)
                if gamma2 == self._simple(j):
                    x += self.datum.A[j][i]
                else:
                    g3 = _sub_simple(gamma2, j)
                    if self._is_root(g3):
                        x += L.get((j, gamma2), 0) * E.get((i, g3), 0)
                E[(i, gamma2)] = x / L[(j, beta)]
        for v in list(E.values()) + list(L.values()):
            if v.denominator != 1:
                raise ArithmeticError("non-integral Chevalley constant")
        self._E = {k: int(v) for k, v in E.items()}
        self._L = {k: int(v) for k, v in L.items()}

    def _gen(self, kind: str, i: int, b: int) -> dict:
        """[x_i, basis_b] for x in {e, f} before the sign fix."""
        P = self.P
        si = self._simple(i)
        kb = self.kind(b)
        A = self.datum.A
        if kb == "h":
            j = b - 2 * P + 1
            # [e_i, h_j] = -a_ji e_i ; [f_i, h_j] = a_ji f_i
            if kind == "e":
                return {self.e(si): -A[j][i]} if A[j][i] else {}
            return {self.f(si): A[j][i]} if A[j][i] else {}
        same = (kind == "e" and kb == "e") or (kind == "f" and kb == "f")
        gamma = self.roots[b % P] if kb == "e" else self.roots[b - P]
        if same:
            beta = _add_simple(gamma, i)
            c = self._E.get((i, gamma), 0) if self._is_root(beta) else 0
            if not c:
                return {}
            return {self.e(beta) if kind == "e" else self.f(beta): c}
        # opposite kinds
        if gamma == si:
            # [f_i, e_i] = -h_i ; [e_i, f_i] = h_i
            return {self.h(i): -1 if kind == "f" else 1}
        target = _sub_simple(gamma, i)
        if not self._is_root(target):
            return {}
        lam = self._L.get((i, gamma), 0)
        if not lam:
            return {}
        return {self.e(target) if kind == "f" else self.f(target): lam}

    def _raw_bracket(self, a: int, b: int) -> dict:
        """Bracket in the unsigned basis, via nested-word recursion on a."""
        key = (a, b)
        cached = self._raw_cache.get(key)
        if cached is not None:
            return cached
        ka = self.kind(a)
        if ka == "h":
            i = a - 2 * self.P + 1
            w = self._pair(self.root_of(b), i)
            out = {b: w} if w else {}
        else:
            beta = self.roots[a % self.P] if ka == "e" else self.roots[a - self.P]
            if sum(beta) == 1:
                i = beta.index(1) + 1
                out = self._gen(ka, i, b)
            else:
                i1, gamma, p = self.canon[beta]
                x = self.e_simple(i1) if ka == "e" else self.f_simple(i1)
                y = self.e(gamma) if ka == "e" else self.f(gamma)
                # [[x, y], b] = [x, [y, b]] - [y, [x, b]]
                acc: dict = {}
                for c, v in self._raw_bracket(y, b).items():
                    for c2, v2 in self._raw_bracket(x, c).items():
                        acc[c2] = acc.get(c2, 0) + v * v2
                for c, v in self._raw_bracket(x, b).items():
                    for c2, v2 in self._raw_bracket(y, c).items():
                        acc[c2] = acc.get(c2, 0) - v * v2
                out = {}
                for c, v in acc.items():
                    if v:
                        if v % (p + 1):
                            raise ArithmeticError("non-integral structure constant")
                        out[c] = v // (p + 1)
        self._raw_cache[key] = out
        return out

    def _fix_signs(self):
        self._raw_cache: dict = {}
        for r, beta in enumerate(self.roots):
            br = self._raw_bracket(r, self.P + r)
            hb = self.coroot(beta)
            want = {self.h(i): c for i, c in hb.items() if c}
            if br == want:
                s = 1
            elif br == {k: -v for k, v in want.items()}:
                s = -1
            else:
                raise ArithmeticError(f"[e,f] not proportional to coroot for {beta}")
            self._signs[r] = s

    def _sign(self, b: int) -> int:
        if self.P <= b < 2 * self.P:
            return self._signs[b - self.P]
        return 1

    def coroot(self, beta) -> dict:
        """h_beta = sum_i (b_i d_i / d_beta) h_i as {node: coefficient}."""
        d = self.datum.d
        db = self.root_norm(beta) / 2
        out = {}
        for i, c in zip(range(1, self.N + 1), beta):
            if c:
                v = c * d[i] / db
                if v.denominator != 1:
                    raise ArithmeticError("non-integral coroot")
                out[i] = int(v)
        return out

    def root_norm(self, beta) -> Fraction:
        A, d = self.datum.A, self.datum.d
        out = Fraction(0)
        for i, a in zip(range(1, self.N + 1), beta):
            for j, b in zip(range(1, self.N + 1), beta):
                if a and b:
                    out += a * b * d[i] * A[i][j]
        return out

    def _build_form(self):
        d, A = self.datum.d, self.datum.A
        self._form = {}
        for r, beta in enumerate(self.roots):
            v = 2 / self.root_norm(beta)
            self._form[(r, self.P + r)] = v
            self._form[(self.P + r, r)] = v
        for i in range(1, self.N + 1):
            for j in range(1, self.N + 1):
                if A[i][j]:
                    self._form[(self.h(i), self.h(j))] = Fraction(A[i][j]) / d[j]

    # -- public API ----------------------------------------------------------
    def bracket(self, a: int, b: int) -> dict:
        """[basis_a, basis_b] as {basis index: int}."""
        key = (a, b)
        out = self._table.get(key)
        if out is None:
            sa, sb = self._sign(a), self._sign(b)
            out = {}
            for c, v in self._raw_bracket(a, b).items():
                out[c] = v * sa * sb * self._sign(c)
            self._table[key] = out
        return out

    def form(self, a: int, b: int) -> Fraction:
        """Invariant form normalized by (theta, theta) = 2."""
        return self._form.get((a, b), Fraction(0))

    def theta_index(self) -> int:
        return self.e(self.datum.theta)

    def weight_pair(self, b: int, i: int) -> int:
        return self._pair(self.root_of(b), i)


def _sub_simple(beta, i):
    out = list(beta)
    out[i - 1] -= 1
    return tuple(out)


def _add_simple(beta, i):
    out = list(beta)
    out[i - 1] += 1
    return tuple(out)


@lru_cache(maxsize=None)
def finite_lie(datum: CartanDatum) -> FiniteLie:
    return FiniteLie(datum)
