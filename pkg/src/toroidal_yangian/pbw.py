"""Generic PBW straightening in an enveloping algebra.

A ``Straightener`` is given a sort key on letters and a Lie bracket returning
``{letter: coeff}``.  Words are brought into non-decreasing key order by the
rule ``xy -> yx + [x, y]``; results are memoized per (sorted word, letter).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from .scalar import Scalar

__all__ = ["UElem", "Straightener", "add_into"]


def add_into(acc: dict, key, coeff) -> None:
    v = acc.get(key)
    v = coeff if v is None else v + coeff
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


class UElem:
    """Finite sum of words (tuples of letters) with scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, *letters, coeff: Scalar = 1) -> "UElem":
        return cls({tuple(letters): Fraction(coeff) if isinstance(coeff, int) else coeff})

    @classmethod
    def scalar(cls, c: Scalar) -> "UElem":
        return cls({(): c})

    @classmethod
    def from_lie(cls, lie: dict) -> "UElem":
        return cls({(x,): c for x, c in lie.items()})

    def __add__(self, other: "UElem") -> "UElem":
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_into(out, w, c)
        return UElem._make(out)

    def __sub__(self, other: "UElem") -> "UElem":
        out = dict(self.terms)
        for w, c in other.terms.items():
            add_into(out, w, -c)
        return UElem._make(out)

    def __neg__(self) -> "UElem":
        return UElem._make({w: -c for w, c in self.terms.items()})

    def scale(self, c: Scalar) -> "UElem":
        if not c:
            return UElem()
        return UElem._make({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, UElem):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    add_into(out, w1 + w2, c1 * c2)
            return UElem._make(out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    @classmethod
    def _make(cls, terms: dict) -> "UElem":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, UElem):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __len__(self):
        return len(self.terms)

    def max_length(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __repr__(self):
        return f"UElem({self.terms!r})"


class Straightener:
    def __init__(self, key: Callable, bracket: Callable[[object, object], dict]):
        self.key = key
        self.bracket = bracket
        self._insert_memo: dict = {}
        self._word_memo: dict = {}

    def is_sorted(self, word: tuple) -> bool:
        key = self.key
        return all(key(word[n]) <= key(word[n + 1]) for n in range(len(word) - 1))

    def insert(self, sw: tuple, x) -> dict:
        """Normal form of sorted word ``sw`` times letter ``x``."""
        memo_key = (sw, x)
        hit = self._insert_memo.get(memo_key)
        if hit is not None:
            return hit
        if not sw or self.key(sw[-1]) <= self.key(x):
            out = {sw + (x,): 1}
        else:
            a = sw[-1]
            head = sw[:-1]
            out: dict = {}
            # head * a * x = head * x * a + head * [a, x]
            for w, c in self.insert(head, x).items():
                for w2, c2 in self.insert(w, a).items():
                    add_into(out, w2, c * c2)
            for z, cz in self.bracket(a, x).items():
                for w, c in self.insert(head, z).items():
                    add_into(out, w, cz * c)
        self._insert_memo[memo_key] = out
        return out

    def word_nf(self, word: tuple) -> dict:
        hit = self._word_memo.get(word)
        if hit is not None:
            return hit
        if len(word) <= 1 or self.is_sorted(word):
            out = {word: 1}
        else:
            out = {}
            for w, c in self.word_nf(word[:-1]).items():
                for w2, c2 in self.insert(w, word[-1]).items():
                    add_into(out, w2, c * c2)
        self._word_memo[word] = out
        return out

    def straighten(self, u: UElem) -> UElem:
        out: dict = {}
        for w, c in u.terms.items():
            for w2, c2 in self.word_nf(w).items():
                add_into(out, w2, c * c2)
        return UElem._make(out)

    def straighten_terms(self, items: Iterable) -> dict:
        out: dict = {}
        for w, c in items:
            for w2, c2 in self.word_nf(w).items():
                add_into(out, w2, c * c2)
        return out
