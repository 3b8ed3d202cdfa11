"""Cartan data for untwisted affine types and their root systems.

Node 0 is the affinizing node.  ``A[i][j] = alpha_j(h_i)`` and
``(alpha_i, alpha_j) = d_i * A[i][j]``.  Roots are stored as a finite part
(coefficients of alpha_1..alpha_N) plus the coefficient of the null root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

__all__ = [
    "BadType",
    "AffineType",
    "CartanDatum",
    "Root",
    "build_cartan",
    "parse_type",
    "bilinear",
    "coroot_form",
    "enumerate_positive_roots",
    "root_sort_key",
]


class BadType(ValueError):
    pass


_MIN_RANK = {"A": 1, "B": 3, "C": 2, "D": 4, "E": 6, "F": 4, "G": 2}


@dataclass(frozen=True)
class AffineType:
    family: str
    rank: int

    def __post_init__(self):
        fam = self.family.upper()
        object.__setattr__(self, "family", fam)
        if fam not in _MIN_RANK:
            raise BadType(f"unknown family {self.family!r}")
        if self.rank < _MIN_RANK[fam]:
            raise BadType(f"{fam}{self.rank} below minimum rank {_MIN_RANK[fam]}")
        if fam == "E" and self.rank not in (6, 7, 8):
            raise BadType("E family needs rank 6, 7 or 8")
        if fam == "F" and self.rank != 4:
            raise BadType("F family needs rank 4")
        if fam == "G" and self.rank != 2:
            raise BadType("G family needs rank 2")

    def __str__(self):
        return f"{self.family}{self.rank}"


def parse_type(text: str | AffineType) -> AffineType:
    if isinstance(text, AffineType):
        return text
    text = text.strip()
    if len(text) < 2 or not text[1:].isdigit():
        raise BadType(f"cannot parse affine type {text!r}")
    return AffineType(text[0], int(text[1:]))


@dataclass(frozen=True)
class Root:
    """finite + k*delta; ``finite`` indexes alpha_1..alpha_N."""

    finite: tuple
    k: int = 0

    @property
    def kind(self) -> str:
        return "imaginary" if not any(self.finite) else "real"

    @property
    def is_imaginary(self) -> bool:
        return not any(self.finite)

    @property
    def height(self) -> int:
        return sum(self.finite)

    def __add__(self, other: "Root") -> "Root":
        return Root(tuple(a + b for a, b in zip(self.finite, other.finite)), self.k + other.k)

    def __sub__(self, other: "Root") -> "Root":
        return Root(tuple(a - b for a, b in zip(self.finite, other.finite)), self.k - other.k)

    def __neg__(self) -> "Root":
        return Root(tuple(-a for a in self.finite), -self.k)

    def scale(self, c: int) -> "Root":
        return Root(tuple(c * a for a in self.finite), c * self.k)

    def is_positive(self) -> bool:
        if self.k > 0:
            return True
        if self.k < 0:
            return False
        return any(self.finite) and all(a >= 0 for a in self.finite)

    def __str__(self):
        parts = []
        for j, a in enumerate(self.finite, start=1):
            if a == 0:
                continue
            s = f"a{j}" if abs(a) == 1 else f"{abs(a)}a{j}"
            parts.append(("-" if a < 0 else "+") + s)
        if self.k:
            s = "delta" if abs(self.k) == 1 else f"{abs(self.k)}delta"
            parts.append(("-" if self.k < 0 else "+") + s)
        if not parts:
            return "0"
        out = "".join(parts)
        return out[1:] if out[0] == "+" else out


# finite Cartan matrices (alpha_j(h_i)) and highest-root coefficients, nodes 1..N
def _chain(n: int) -> list[list[int]]:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
        if i + 1 < n:
            a[i][i + 1] = a[i + 1][i] = -1
    return a


def _finite_data(t: AffineType):
    fam, n = t.family, t.rank
    if fam == "A":
        return _chain(n), [1] * n, [1] * (n + 1)
    if fam == "B":
        a = _chain(n)
        a[n - 1][n - 2] = -2
        theta = [1] + [2] * (n - 1)
        return a, theta, [1] + [1] * (n - 1) + [Fraction(1, 2)]
    if fam == "C":
        a = _chain(n)
        a[n - 2][n - 1] = -2
        theta = [2] * (n - 1) + [1]
        return a, theta, [1] + [Fraction(1, 2)] * (n - 1) + [1]
    if fam == "D":
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        theta = [1] + [2] * (n - 3) + [1, 1]
        return a, theta, [1] * (n + 1)
    if fam == "E":
        a = [[0] * n for _ in range(n)]
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(j, j + 1) for j in range(5, n)]
        for i in range(n):
            a[i][i] = 2
        for i, j in edges:
            a[i - 1][j - 1] = a[j - 1][i - 1] = -1
        theta = {6: [1, 2, 2, 3, 2, 1], 7: [2, 2, 3, 4, 3, 2, 1], 8: [2, 3, 4, 6, 5, 4, 3, 2]}[n]
        return a, theta, [1] * (n + 1)
    if fam == "F":
        a = _chain(4)
        a[2][1] = -2
        return a, [2, 3, 4, 2], [1, 1, 1, Fraction(1, 2), Fraction(1, 2)]
    if fam == "G":
        return [[2, -1], [-3, 2]], [2, 3], [1, 1, Fraction(1, 3)]
    raise BadType(str(t))


@dataclass(frozen=True)
class CartanDatum:
    type: AffineType
    A: tuple
    d: tuple
    kac_labels: tuple
    comarks: tuple  # n_1^vee .. n_N^vee
    theta: tuple

    @property
    def N(self) -> int:
        return self.type.rank

    @property
    def nodes(self) -> range:
        return range(self.N + 1)

    @property
    def finite_nodes(self) -> range:
        return range(1, self.N + 1)

    def a(self, i: int, j: int) -> int:
        return self.A[i][j]

    def sym(self, i: int, j: int) -> Fraction:
        """(alpha_i, alpha_j) = d_i a_ij."""
        return self.d[i] * self.A[i][j]

    def simple_root(self, i: int) -> Root:
        if i == 0:
            return Root(tuple(-c for c in self.theta), 1)
        return Root(tuple(1 if j == i else 0 for j in self.finite_nodes), 0)

    @property
    def delta(self) -> Root:
        return Root((0,) * self.N, 1)

    def pairing(self, beta: Root, i: int) -> int:
        """beta(h_i); the delta part pairs to zero."""
        if i == 0:
            return sum(c * self.A[0][j] for j, c in zip(self.finite_nodes, beta.finite))
        return sum(c * self.A[i][j] for j, c in zip(self.finite_nodes, beta.finite))

    def affine_coords(self, beta: Root) -> tuple:
        """Coefficients of beta in alpha_0..alpha_N."""
        c0 = beta.k
        return (c0,) + tuple(f + c0 * t for f, t in zip(beta.finite, self.theta))

    def from_affine_coords(self, coords: Iterable[int]) -> Root:
        c = list(coords)
        k = c[0]
        return Root(tuple(x - k * t for x, t in zip(c[1:], self.theta)), k)

    def finite_cartan(self) -> list[list[int]]:
        return [list(row[1:]) for row in self.A[1:]]

    @cached_property
    def finite_positive_roots(self) -> tuple:
        return tuple(_finite_positive_roots(self))

    @cached_property
    def _finite_root_set(self) -> frozenset:
        return frozenset(self.finite_positive_roots)

    def is_finite_root(self, vec: tuple) -> bool:
        if all(c >= 0 for c in vec):
            return vec in self._finite_root_set
        return tuple(-c for c in vec) in self._finite_root_set

    def is_root(self, beta: Root) -> bool:
        if beta.is_imaginary:
            return beta.k != 0
        return self.is_finite_root(beta.finite)

    def sym_theta(self) -> Fraction:
        th = Root(self.theta, 0)
        return bilinear(th, th, self)

    def to_json(self) -> dict:
        return {
            "type": str(self.type),
            "A": [list(r) for r in self.A],
            "d": [str(x) for x in self.d],
            "kac_labels": list(self.kac_labels),
            "comarks": list(self.comarks),
            "theta": list(self.theta),
        }


def _finite_positive_roots(datum: CartanDatum) -> list[tuple]:
    n = datum.N
    simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for beta in layer:
            for i in range(n):
                # alpha_i-string through beta: q = how far down, p = q - <beta, alpha_i^vee>
                q = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        q += 1
                    else:
                        break
                p = q - sum(beta[j] * datum.A[i + 1][j + 1] for j in range(n))
                if p > 0:
                    up = list(beta)
                    up[i] += 1
                    up = tuple(up)
                    if up not in roots:
                        roots.add(up)
                        nxt.append(up)
        layer = nxt
    return sorted(roots, key=lambda r: (sum(r), r))


def build_cartan(t: AffineType | str) -> CartanDatum:
    t = parse_type(t)
    fin, theta, d = _finite_data(t)
    n = t.rank
    # comarks from theta^vee = theta when (theta, theta) = 2: n_i^vee = n_i d_i
    d = tuple(Fraction(x) for x in d)
    comarks_f = [theta[j - 1] * d[j] for j in range(1, n + 1)]
    if any(c.denominator != 1 for c in comarks_f):
        raise BadType(f"non-integral comarks for {t}")
    comarks = tuple(int(c) for c in comarks_f)
    A = [[0] * (n + 1) for _ in range(n + 1)]
    A[0][0] = 2
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            A[i][j] = fin[i - 1][j - 1]
    for j in range(1, n + 1):
        # alpha_j(h_0) with h_0 = c - h_theta; alpha_0(h_j) = -theta(h_j)
        A[0][j] = -sum(comarks[i - 1] * fin[i - 1][j - 1] for i in range(1, n + 1))
        A[j][0] = -sum(theta[i - 1] * fin[j - 1][i - 1] for i in range(1, n + 1))
    datum = CartanDatum(
        type=t,
        A=tuple(tuple(r) for r in A),
        d=d,
        kac_labels=(1,) + tuple(theta),
        comarks=comarks,
        theta=tuple(theta),
    )
    validate(datum)
    return datum


def validate(datum: CartanDatum) -> None:
    A, d, n = datum.A, datum.d, datum.kac_labels
    size = datum.N + 1
    for i in range(size):
        if A[i][i] != 2:
            raise BadType("diagonal entry not 2")
        for j in range(size):
            if i != j:
                if A[i][j] > 0:
                    raise BadType("positive off-diagonal entry")
                if (A[i][j] == 0) != (A[j][i] == 0):
                    raise BadType("zero pattern not symmetric")
            if d[i] * A[i][j] != d[j] * A[j][i]:
                raise BadType(f"not symmetrized by d at ({i},{j})")
        if sum(n[j] * d[i] * A[i][j] for j in range(size)):
            raise BadType(f"null root fails at node {i}")
    if d[0] != 1 or datum.sym_theta() != 2:
        raise BadType("normalization (theta, theta) = 2 violated")


def bilinear(alpha: Root, beta: Root, datum: CartanDatum) -> Fraction:
    """Invariant form; delta is in the radical."""
    out = Fraction(0)
    for i, a in zip(datum.finite_nodes, alpha.finite):
        if not a:
            continue
        for j, b in zip(datum.finite_nodes, beta.finite):
            if b:
                out += a * b * datum.sym(i, j)
    return out


def coroot_form(i: int, j: int, datum: CartanDatum) -> Fraction:
    """(h_i, h_j) = a_ij / d_j."""
    return Fraction(datum.A[i][j]) / datum.d[j]


def root_sort_key(beta: Root, tag: int = 0) -> tuple:
    """Total order on positive roots: by k, imaginary first, then height and lex."""
    if beta.is_imaginary:
        return (beta.k, 0, 0, (), tag)
    return (beta.k, 1, beta.height, beta.finite, 0)


def enumerate_positive_roots(datum: CartanDatum, k_max: int) -> list[tuple[Root, int]]:
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    fin = datum.finite_positive_roots
    out: list[tuple[Root, int]] = [(Root(a, 0), 1) for a in fin]
    for k in range(1, k_max + 1):
        for a in fin:
            out.append((Root(a, k), 1))
            out.append((Root(tuple(-c for c in a), k), 1))
        out.append((Root((0,) * datum.N, k), datum.N))
    out.sort(key=lambda rm: root_sort_key(rm[0]))
    return out
