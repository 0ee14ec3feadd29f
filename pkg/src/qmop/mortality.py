"""Mortality of finitely generated matrix semigroups.

Words are 1-based generator indices in temporal order; the product attached
to ``(j1, ..., jn)`` is ``M[jn] @ ... @ M[j1]``, so extending a word by one
more index multiplies on the left.

Two searches live here:

* :func:`decide_nonneg_mortality` is a complete decision procedure for
  entrywise non-negative generators. Only the zero pattern of a product
  matters, so the search runs over 0/1 matrices under the Boolean product
  and the closure has at most ``2**(d*d)`` elements.
* :func:`bounded_mortality_search` is the best one can do in general: a
  breadth-first search over words up to a depth, deduplicated on exact
  product values.

Both return the shortest witness, ties broken lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .exact import DimensionError, Matrix

Word = tuple[int, ...]

DEFAULT_MAX_CLOSURE = 2 ** 16
DEFAULT_MAX_ELEMENTS = 2 ** 20


class ResourceLimitError(RuntimeError):
    """A search exceeded its configured element cap."""


@dataclass(frozen=True)
class MmpInstance:
    generators: tuple[Matrix, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("an instance needs at least one generator")
        d = gens[0].rows
        for g in gens:
            if g.shape != (d, d):
                raise DimensionError(f"all generators must be {d}x{d}, got {g.rows}x{g.cols}")

    @property
    def dim(self) -> int:
        return self.generators[0].rows

    @property
    def k(self) -> int:
        return len(self.generators)

    def is_nonnegative(self) -> bool:
        return all(g.is_nonnegative() for g in self.generators)


@dataclass(frozen=True)
class Mortal:
    witness: Word
    verdict = "mortal"


@dataclass(frozen=True)
class Immortal:
    verdict = "immortal"


@dataclass(frozen=True)
class Inconclusive:
    depth_searched: int
    verdict = "inconclusive"


MortalityVerdict = Union[Mortal, Immortal, Inconclusive]


def word_product(generators: Sequence[Matrix], word: Sequence[int]) -> Matrix:
    """``M[jn] @ ... @ M[j1]``; the empty word gives the identity."""
    d = generators[0].rows
    result = Matrix.identity(d)
    for j in word:
        if not 1 <= j <= len(generators):
            raise IndexError(f"generator index {j} out of range 1..{len(generators)}")
        result = generators[j - 1] @ result
    return result


class BoolMatrix:
    """Square 0/1 matrix packed as one bitmask per row.

    Bit ``b`` of ``rows[a]`` is entry ``(a, b)``.
    """

    __slots__ = ("dim", "rows")

    def __init__(self, dim: int, rows: Sequence[int]):
        if len(rows) != dim:
            raise DimensionError("row count must equal the dimension")
        limit = 1 << dim
        if any(r < 0 or r >= limit for r in rows):
            raise ValueError("row mask out of range")
        self.dim = dim
        self.rows = tuple(rows)

    @classmethod
    def from_pattern(cls, data: Sequence[Sequence[int]]) -> BoolMatrix:
        dim = len(data)
        return cls(dim, [sum(1 << b for b, x in enumerate(row) if x) for row in data])

    @classmethod
    def zero(cls, dim: int) -> BoolMatrix:
        return cls(dim, [0] * dim)

    def to_pattern(self) -> list[list[int]]:
        return [[(r >> b) & 1 for b in range(self.dim)] for r in self.rows]

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __mul__(self, other: BoolMatrix) -> BoolMatrix:
        return bool_product(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoolMatrix):
            return NotImplemented
        return self.dim == other.dim and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"BoolMatrix({self.to_pattern()})"


def bool_project(m: Matrix) -> BoolMatrix:
    """Zero pattern of a non-negative matrix: 1 where the entry is positive."""
    if not m.is_square:
        raise DimensionError("only square matrices are projected")
    if not m.is_nonnegative():
        raise ValueError("bool_project needs an entrywise non-negative matrix")
    d = m.rows
    return BoolMatrix(d, [sum(1 << b for b, x in enumerate(m.row_nums(a)) if x) for a in range(d)])


def bool_product(p: BoolMatrix, q: BoolMatrix) -> BoolMatrix:
    """``(pq)'``: row ``a`` of the result is the OR of the rows ``k`` of ``q`` with ``p[a,k] = 1``."""
    if p.dim != q.dim:
        raise DimensionError(f"cannot multiply {p.dim}x{p.dim} by {q.dim}x{q.dim}")
    qrows = q.rows
    out = []
    for r in p.rows:
        acc = 0
        k = 0
        while r:
            if r & 1:
                acc |= qrows[k]
            r >>= 1
            k += 1
        out.append(acc)
    return BoolMatrix(p.dim, out)


def decide_nonneg_mortality(inst: MmpInstance, max_elements: int = DEFAULT_MAX_CLOSURE) -> Mortal | Immortal:
    """Decide whether the semigroup generated by non-negative matrices contains 0.

    Breadth-first closure under the Boolean product; the first time the zero
    pattern shows up its word is the shortest, lexicographically smallest
    witness. Exceeding ``max_elements`` distinct patterns raises
    :class:`ResourceLimitError`.
    """
    if not inst.is_nonnegative():
        raise ValueError("decide_nonneg_mortality needs entrywise non-negative generators")
    gens = [bool_project(g) for g in inst.generators]
    return _bool_closure_search(gens, max_elements)


def _bool_closure_search(gens: Sequence[BoolMatrix], max_elements: int) -> Mortal | Immortal:
    d = gens[0].dim
    seen: dict[BoolMatrix, Word] = {}
    frontier: list[BoolMatrix] = []
    for j, g in enumerate(gens, 1):
        if g.is_zero():
            return Mortal((j,))
        if g not in seen:
            seen[g] = (j,)
            frontier.append(g)
    while frontier:
        nxt = []
        for elem in frontier:
            word = seen[elem]
            for j, g in enumerate(gens, 1):
                prod = bool_product(g, elem)
                if prod in seen:
                    continue
                if prod.is_zero():
                    return Mortal(word + (j,))
                seen[prod] = word + (j,)
                nxt.append(prod)
                if len(seen) > max_elements:
                    raise ResourceLimitError(
                        f"Boolean closure exceeded {max_elements} elements "
                        f"(the semigroup bound is 2**(d*d) = 2**{d * d})"
                    )
        frontier = nxt
    return Immortal()


def boolean_closure(inst: MmpInstance, max_elements: int = DEFAULT_MAX_CLOSURE) -> dict[BoolMatrix, Word]:
    """All zero patterns in the generated semigroup, each with its canonical word."""
    if not inst.is_nonnegative():
        raise ValueError("boolean_closure needs entrywise non-negative generators")
    gens = [bool_project(g) for g in inst.generators]
    seen: dict[BoolMatrix, Word] = {}
    frontier = []
    for j, g in enumerate(gens, 1):
        if g not in seen:
            seen[g] = (j,)
            frontier.append(g)
    while frontier:
        nxt = []
        for elem in frontier:
            for j, g in enumerate(gens, 1):
                prod = bool_product(g, elem)
                if prod not in seen:
                    seen[prod] = seen[elem] + (j,)
                    nxt.append(prod)
        if len(seen) > max_elements:
            raise ResourceLimitError(f"Boolean closure exceeded {max_elements} elements")
        frontier = nxt
    return seen


def bounded_mortality_search(
    inst: MmpInstance, max_depth: int, max_elements: int = DEFAULT_MAX_ELEMENTS
) -> Mortal | Inconclusive:
    """Look for a zero product among words of length at most ``max_depth``.

    Never answers "immortal": the general problem is undecidable. Products
    already met at a smaller depth are not expanded again, since every
    extension of them was reached earlier with a shorter word.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    gens = inst.generators
    seen: set[Matrix] = set()
    frontier: list[tuple[Matrix, Word]] = []
    for j, g in enumerate(gens, 1):
        if g.is_zero():
            return Mortal((j,))
        if g not in seen:
            seen.add(g)
            frontier.append((g, (j,)))
    depth = 1
    while frontier and depth < max_depth:
        depth += 1
        nxt = []
        for prod, word in frontier:
            for j, g in enumerate(gens, 1):
                p = g @ prod
                if p.is_zero():
                    return Mortal(word + (j,))
                if p in seen:
                    continue
                seen.add(p)
                nxt.append((p, word + (j,)))
                if len(seen) > max_elements:
                    raise ResourceLimitError(f"bounded search exceeded {max_elements} distinct products")
        frontier = nxt
    return Inconclusive(max_depth)
