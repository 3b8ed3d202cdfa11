"""Weyl reflections, minimal expressions for real roots, and generator orders."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import IntEnum

from .cartan import CartanDatum, Root, root_sort_key

__all__ = [
    "WeylWord",
    "GeneratorIndex",
    "Ordering",
    "SearchBudget",
    "OrderDomainMismatch",
    "reflect",
    "apply_word",
    "minimal_expression",
    "compare_generators",
    "generator_key",
    "is_diagram_automorphism",
]


class SearchBudget(RuntimeError):
    pass


class OrderDomainMismatch(TypeError):
    pass


class Ordering(IntEnum):
    Less = -1
    Equal = 0
    Greater = 1


@dataclass(frozen=True)
class WeylWord:
    letters: tuple = ()
    eta: tuple | None = None  # permutation of nodes; None means identity

    def __len__(self):
        return len(self.letters)


def is_diagram_automorphism(eta, datum: CartanDatum) -> bool:
    n = datum.N + 1
    if sorted(eta) != list(range(n)):
        return False
    return all(datum.A[eta[i]][eta[j]] == datum.A[i][j] for i in range(n) for j in range(n))


def reflect(i: int, beta: Root, datum: CartanDatum) -> Root:
    """r_i(beta) = beta - beta(h_i) alpha_i."""
    c = datum.pairing(beta, i)
    if not c:
        return beta
    return beta - datum.simple_root(i).scale(c)


def _apply_eta(eta, beta: Root, datum: CartanDatum) -> Root:
    if eta is None:
        return beta
    coords = datum.affine_coords(beta)
    new = [0] * len(coords)
    for i, c in enumerate(coords):
        new[eta[i]] += c
    return datum.from_affine_coords(new)


def apply_word(word: WeylWord, beta: Root, datum: CartanDatum) -> Root:
    """eta r_{i1} ... r_{il} (beta), rightmost letter first."""
    for i in reversed(word.letters):
        beta = reflect(i, beta, datum)
    return _apply_eta(word.eta, beta, datum)


def minimal_expression(beta: Root, datum: CartanDatum, budget: int = 200_000) -> tuple[WeylWord, int]:
    """Shortest (then lexicographically smallest) word with word(alpha_j) = beta."""
    if beta.is_imaginary:
        raise ValueError("minimal_expression needs a real root")
    if not beta.is_positive():
        raise ValueError("minimal_expression needs a positive root")
    simple = {datum.simple_root(j): j for j in datum.nodes}
    if beta in simple:
        return WeylWord(()), simple[beta]
    seen = {beta}
    queue = deque([(beta, ())])
    visited = 0
    while queue:
        state, letters = queue.popleft()
        for i in datum.nodes:
            nxt = reflect(i, state, datum)
            if nxt in seen:
                continue
            visited += 1
            if visited > budget:
                raise SearchBudget(f"more than {budget} states explored")
            word = letters + (i,)
            if nxt in simple:
                return WeylWord(word), simple[nxt]
            seen.add(nxt)
            if nxt.is_positive():
                queue.append((nxt, word))
    raise SearchBudget("search space exhausted without reaching a simple root")


# ---------------------------------------------------------------------------
# total orders on generator indices
# ---------------------------------------------------------------------------

_BLOCK = {
    "Xminus": ("quantum", 0), "H": ("quantum", 1), "Xplus": ("quantum", 2),
    "f": ("classical", 0), "h": ("classical", 1), "e": ("classical", 2),
    "xminus": ("yangian", 0), "hy": ("yangian", 1), "xplus": ("yangian", 2),
}


@dataclass(frozen=True)
class GeneratorIndex:
    """kind in {Xminus,H,Xplus} | {f,h,e} | {xminus,hy,xplus}.

    ``index`` is a positive Root for X/e/f kinds and a node for H/h kinds;
    ``tag`` sub-orders imaginary roots by the node i of g_{k delta (i)}.
    """

    kind: str
    index: object
    mode: int = 0
    tag: int = 0

    @property
    def family(self) -> str:
        return _BLOCK[self.kind][0]


def generator_key(g: GeneratorIndex) -> tuple:
    block = _BLOCK[g.kind][1]
    if block == 1:
        return (block, (g.index,), g.mode)
    rk = root_sort_key(g.index, g.tag)
    if block == 0:
        # minus kinds are ordered lexicographically by (-beta, k)
        rk = _negate_key(rk)
    return (block, rk, g.mode)


def _negate_key(key: tuple) -> tuple:
    out = []
    for part in key:
        if isinstance(part, tuple):
            out.append(tuple(-x for x in part))
        else:
            out.append(-part)
    return tuple(out)


def compare_generators(a: GeneratorIndex, b: GeneratorIndex) -> Ordering:
    if a.family != b.family:
        raise OrderDomainMismatch(f"{a.family} vs {b.family}")
    ka, kb = generator_key(a), generator_key(b)
    if ka < kb:
        return Ordering.Less
    if ka > kb:
        return Ordering.Greater
    return Ordering.Equal
