"""Encoding Post correspondence instances as 3x3 integer matrix semigroups.

A word over the digits ``{1, 2, 3}`` is read as a base-3 numeral. The pair
matrix ``F(u, v)`` tracks two such numerals together with their lengths, and
``F(u, v) F(u', v') = F(uu', vv')``. Its top-left entry is
``3**|u| + f(u) - f(v) = f(1u) - f(v)``, which vanishes exactly when
``v == 1u``. Prefixing the g-side of the first tile with a ``1`` therefore
turns "``h(w) == g(w)``" into "top-left entry is zero", and the idempotent
``B = E_11`` turns that entry into a zero product: ``B M B = M[0,0] B``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .exact import Matrix
from .mortality import MmpInstance, Word, word_product

DIGITS = frozenset("123")
TILE_DIGITS = frozenset("23")

CONJUGATOR = Matrix.from_rows([[1, 0, 1], [1, 1, 0], [0, 0, 1]])
CONJUGATOR_INV = Matrix.from_rows([[1, 0, -1], [-1, 1, 1], [0, 0, 1]])
CORNER = Matrix.unit(3, 0, 0)


def three_adic(word: str) -> int:
    """``sum_j w_j 3**(|w|-j)``; the empty word maps to 0."""
    value = 0
    for ch in word:
        if ch not in DIGITS:
            raise ValueError(f"invalid digit {ch!r}; words use 1, 2, 3")
        value = 3 * value + int(ch)
    return value


def pair_matrix(u: str, v: str) -> Matrix:
    """``F(u, v) = S [[3^|u|,0,0],[0,3^|v|,0],[f(u),f(v),1]] S^-1``."""
    middle = Matrix.from_rows([
        [3 ** len(u), 0, 0],
        [0, 3 ** len(v), 0],
        [three_adic(u), three_adic(v), 1],
    ])
    return CONJUGATOR @ middle @ CONJUGATOR_INV


@dataclass(frozen=True)
class PcpInstance:
    alphabet: tuple[str, ...]
    h: Mapping[str, str] = field(hash=False)
    g: Mapping[str, str] = field(hash=False)

    def __post_init__(self):
        alphabet = tuple(self.alphabet)
        object.__setattr__(self, "alphabet", alphabet)
        if not alphabet:
            raise ValueError("alphabet must not be empty")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet letters must be distinct")
        for name, images in (("h", self.h), ("g", self.g)):
            if set(images) != set(alphabet):
                raise ValueError(f"{name} must map exactly the alphabet letters")
            for letter, image in images.items():
                if not image or not set(image) <= TILE_DIGITS:
                    raise ValueError(f"{name}({letter}) = {image!r} must be a nonempty word over 2 and 3")

    def images(self, word: Sequence[str]) -> tuple[str, str]:
        return "".join(self.h[a] for a in word), "".join(self.g[a] for a in word)

    def solves(self, word: Sequence[str]) -> bool:
        if not word:
            return False
        top, bottom = self.images(word)
        return top == bottom


def encode_pcp(inst: PcpInstance) -> MmpInstance:
    """Generators ``X_a`` (letter order), then ``Y_a`` (letter order), then ``B``.

    With ``K = |alphabet|``, ``X_a`` has index ``i``, ``Y_a`` index ``K + i``
    and ``B`` index ``2K + 1`` (1-based, ``i`` the letter position).
    """
    xs = [pair_matrix(inst.h[a], inst.g[a]) for a in inst.alphabet]
    ys = [pair_matrix(inst.h[a], "1" + inst.g[a]) for a in inst.alphabet]
    return MmpInstance(tuple(xs + ys + [CORNER]))


def encoded_product_word(inst: PcpInstance, word: Sequence[str]) -> Word:
    """Temporal generator word whose product is ``Y_w1 X_w2 ... X_wn``.

    The first letter's ``Y`` sits leftmost in the matrix product, so it is
    applied last.
    """
    if not word:
        raise ValueError("PCP words are nonempty")
    k = len(inst.alphabet)
    pos = {a: i + 1 for i, a in enumerate(inst.alphabet)}
    return tuple(pos[a] for a in reversed(word[1:])) + (k + pos[word[0]],)


def mortal_word(inst: PcpInstance, word: Sequence[str]) -> Word:
    """Temporal word for ``B Y_w1 X_w2 ... X_wn B``, which is zero iff ``word`` solves ``inst``."""
    b = 2 * len(inst.alphabet) + 1
    return (b,) + encoded_product_word(inst, word) + (b,)


def decode_product_word(inst: PcpInstance, gen_word: Sequence[int]) -> tuple[str, ...] | None:
    """Inverse of :func:`encoded_product_word`; None if ``gen_word`` is not of that form."""
    k = len(inst.alphabet)
    if not gen_word or not k < gen_word[-1] <= 2 * k:
        return None
    if any(not 1 <= j <= k for j in gen_word[:-1]):
        return None
    first = inst.alphabet[gen_word[-1] - k - 1]
    rest = [inst.alphabet[j - 1] for j in reversed(gen_word[:-1])]
    return (first, *rest)


def _words(alphabet: Sequence[str], max_len: int):
    for n in range(1, max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def solve_pcp_bounded(inst: PcpInstance, max_len: int) -> tuple[str, ...] | None:
    """Shortest, then lexicographically first (in alphabet order) solution of length ``<= max_len``.

    Extends only words whose two images still agree on their common prefix.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    frontier: list[tuple[tuple[str, ...], str, str]] = [((), "", "")]
    for _ in range(max_len):
        nxt = []
        for word, top, bottom in frontier:
            for a in inst.alphabet:
                t, b = top + inst.h[a], bottom + inst.g[a]
                n = min(len(t), len(b))
                if t[:n] != b[:n]:
                    continue
                if t == b:
                    return word + (a,)
                nxt.append((word + (a,), t, b))
        frontier = nxt
    return None


@dataclass(frozen=True)
class CorrespondenceReport:
    max_len: int
    checked: int
    solutions: tuple[tuple[str, ...], ...]
    zero_corner_words: tuple[tuple[str, ...], ...]
    mismatches: tuple[tuple[str, ...], ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_encoding_correspondence(inst: PcpInstance, max_len: int) -> CorrespondenceReport:
    """For every nonempty word up to ``max_len`` compare "solves" with "product has zero corner"."""
    mmp = encode_pcp(inst)
    solutions, zeros, mismatches = [], [], []
    checked = 0
    for word in _words(inst.alphabet, max_len):
        checked += 1
        solved = inst.solves(word)
        corner_zero = word_product(mmp.generators, encoded_product_word(inst, word))[0, 0] == 0
        if solved:
            solutions.append(word)
        if corner_zero:
            zeros.append(word)
        if solved != corner_zero:
            mismatches.append(word)
    return CorrespondenceReport(max_len, checked, tuple(solutions), tuple(zeros), tuple(mismatches))
