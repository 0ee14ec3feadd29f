"""Sequential selective measurements, quantum and classical.

Outcome words follow the same temporal convention as everywhere else: the
first outcome acts first, so the operator for ``(j1, ..., jn)`` is
``A[jn] @ ... @ A[j1]``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact import DimensionError, Matrix
from .mortality import (
    DEFAULT_MAX_CLOSURE,
    Immortal,
    MmpInstance,
    Mortal,
    ResourceLimitError,
    Word,
    decide_nonneg_mortality,
    word_product,
)
from .reduction import QuantumDevice

DEFAULT_MAX_WORDS = 2 ** 20


class ImpossibleOutcomeError(ValueError):
    """The requested outcome has probability zero; no post-measurement state exists."""


@dataclass(frozen=True)
class State:
    """Real rational density matrix.

    Only built through :meth:`maximally_mixed` or :meth:`from_factor`, both
    positive semidefinite by construction.
    """

    rho: Matrix

    @property
    def dim(self) -> int:
        return self.rho.rows

    @classmethod
    def maximally_mixed(cls, d: int) -> State:
        return cls(Matrix.identity(d).scale(Fraction(1, d)))

    @classmethod
    def from_factor(cls, g: Matrix) -> State:
        """``G^T G / tr(G^T G)``."""
        gram = g.T @ g
        tr = gram.trace()
        if tr == 0:
            raise ValueError("factor must be nonzero")
        return cls(gram.scale(1 / tr))

    def is_full_rank(self) -> bool:
        from .exact import rank

        return rank(self.rho) == self.dim


def _check_outcome(device_k: int, j: int):
    if not 1 <= j <= device_k:
        raise IndexError(f"outcome {j} out of range 1..{device_k}")


def _weighted_trace(p: Matrix, rho: Matrix) -> Fraction:
    """``tr(P rho P^T)`` via one product: ``sum_ik (P rho)_ik P_ik``."""
    pr = p @ rho
    return Fraction(sum(x * y for x, y in zip(pr.nums, p.nums)), pr.den * p.den)


def apply_outcome(state: State, device: QuantumDevice, j: int) -> tuple[State, Fraction]:
    _check_outcome(device.k, j)
    if state.dim != device.dim:
        raise DimensionError("state and device dimensions differ")
    a = device.kraus[j - 1]
    unnormalized = a @ state.rho @ a.T
    prob = unnormalized.trace()
    if prob == 0:
        raise ImpossibleOutcomeError(f"outcome {j} has probability 0 on this state")
    return State(unnormalized.scale(1 / prob)), prob


def sequence_probability(device: QuantumDevice, word: Sequence[int], state: State | None = None) -> Fraction:
    """Exact ``tr(A_jn ... A_j1 rho A_j1^T ... A_jn^T)``; ``state`` defaults to maximally mixed."""
    if state is not None and state.dim != device.dim:
        raise DimensionError("state and device dimensions differ")
    if not word:
        return Fraction(1)
    p = word_product(device.kraus, word)
    if state is None:
        return Fraction(sum(x * x for x in p.nums), p.den * p.den * device.dim)
    return _weighted_trace(p, state.rho)


def chained_probability(device: QuantumDevice, word: Sequence[int], state: State) -> Fraction:
    """Same quantity as :func:`sequence_probability`, by successive state updates.

    Returns 0 as soon as an intermediate outcome is impossible.
    """
    total = Fraction(1)
    for j in word:
        try:
            state, prob = apply_outcome(state, device, j)
        except ImpossibleOutcomeError:
            return Fraction(0)
        total *= prob
    return total


def occurs_ever(device: QuantumDevice, word: Sequence[int]) -> bool:
    """False iff the Kraus product is the zero matrix, i.e. the word never occurs on a full-rank input."""
    for j in word:
        _check_outcome(device.k, j)
    return not word_product(device.kraus, word).is_zero()


@dataclass(frozen=True)
class EmptyPortReport:
    """Minimal never-observed outcome words up to ``max_depth``.

    ``exhausted`` is set when every branch died before the depth limit, in
    which case ``words`` is the complete list at every depth.
    """

    words: tuple[Word, ...]
    max_depth: int
    exhausted: bool = False


def _grow(
    gens: Sequence[Matrix],
    frontier: dict[Matrix, list[Word]],
    cache: dict[Matrix, list[Matrix]],
) -> dict[Matrix, list[Word]]:
    nxt: dict[Matrix, list[Word]] = defaultdict(list)
    for prod, words in frontier.items():
        children = cache.get(prod)
        if children is None:
            children = [g @ prod for g in gens]
            cache[prod] = children
        for j, child in enumerate(children, 1):
            nxt[child].extend(w + (j,) for w in words)
    return nxt


def _sort_words(words) -> tuple[Word, ...]:
    return tuple(sorted(words, key=lambda w: (len(w), w)))


def find_empty_ports(
    device: QuantumDevice, max_depth: int, max_words: int = DEFAULT_MAX_WORDS
) -> EmptyPortReport:
    """Every word of length ``<= max_depth`` whose product is zero but whose proper prefixes are not.

    The outcome tree is explored level by level. Branches stop at a zero
    product, and each distinct partial product is multiplied out only once no
    matter how many words lead to it.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    d = device.dim
    zero = Matrix.zeros(d)
    frontier: dict[Matrix, list[Word]] = {Matrix.identity(d): [()]}
    cache: dict[Matrix, list[Matrix]] = {}
    found: list[Word] = []
    for _ in range(max_depth):
        frontier = _grow(device.kraus, frontier, cache)
        found.extend(frontier.pop(zero, []))
        if sum(len(w) for w in frontier.values()) > max_words:
            raise ResourceLimitError(f"empty-port search exceeded {max_words} live words")
        if not frontier:
            return EmptyPortReport(_sort_words(found), max_depth, exhausted=True)
    return EmptyPortReport(_sort_words(found), max_depth)


@dataclass(frozen=True)
class ClassicalDevice:
    """Column-stochastic matrix split into non-negative outcome parts."""

    parts: tuple[Matrix, ...]

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a classical device needs at least one part")
        d = parts[0].rows
        for q in parts:
            if q.shape != (d, d):
                raise DimensionError("parts must all be square of one size")
            if not q.is_nonnegative():
                raise ValueError("parts must be entrywise non-negative")
        total = parts[0]
        for q in parts[1:]:
            total = total + q
        sums = [sum(total[i, c] for i in range(d)) for c in range(d)]
        if any(s != 1 for s in sums):
            raise ValueError(f"sum of parts is not column-stochastic (column sums {[str(s) for s in sums]})")

    @property
    def dim(self) -> int:
        return self.parts[0].rows

    @property
    def k(self) -> int:
        return len(self.parts)


def classical_sequence_probability(cdev: ClassicalDevice, word: Sequence[int], q: Sequence) -> Fraction:
    """Total mass of ``Q_jn ... Q_j1 q``."""
    vec = [Fraction(x) for x in q]
    if len(vec) != cdev.dim:
        raise DimensionError(f"probability vector has length {len(vec)}, device dimension is {cdev.dim}")
    if any(x < 0 for x in vec) or sum(vec) != 1:
        raise ValueError("q must be a probability vector")
    d = cdev.dim
    for j in word:
        _check_outcome(cdev.k, j)
        part = cdev.parts[j - 1]
        vec = [sum(part[i, c] * vec[c] for c in range(d)) for i in range(d)]
    return sum(vec, Fraction(0))


@dataclass(frozen=True)
class ExistsEmptyPort:
    witness: Word
    verdict = "exists_empty_port"


@dataclass(frozen=True)
class AllOccur:
    verdict = "all_occur"


def _occurrence_from_mortality(gens: Sequence[Matrix], max_elements: int) -> ExistsEmptyPort | AllOccur:
    result = decide_nonneg_mortality(MmpInstance(tuple(gens)), max_elements=max_elements)
    if isinstance(result, Mortal):
        return ExistsEmptyPort(result.witness)
    assert isinstance(result, Immortal)
    return AllOccur()


def decide_cmop(cdev: ClassicalDevice, max_elements: int = DEFAULT_MAX_CLOSURE) -> ExistsEmptyPort | AllOccur:
    """Decide whether some outcome sequence of a classical device never occurs."""
    return _occurrence_from_mortality(cdev.parts, max_elements)


def decide_nonneg_qmop(device: QuantumDevice, max_elements: int = DEFAULT_MAX_CLOSURE) -> ExistsEmptyPort | AllOccur:
    """Same decision for quantum devices whose Kraus operators are entrywise non-negative."""
    if not all(a.is_nonnegative() for a in device.kraus):
        raise ValueError("Kraus operators must be entrywise non-negative for this decision")
    return _occurrence_from_mortality(device.kraus, max_elements)


@dataclass(frozen=True)
class MpsFamily:
    """Site matrices of a translation-invariant MPS with both boundaries fixed to ``e_1``."""

    matrices: tuple[Matrix, ...]

    def __post_init__(self):
        mats = tuple(self.matrices)
        object.__setattr__(self, "matrices", mats)
        if not mats:
            raise ValueError("an MPS family needs at least one matrix")
        d = mats[0].rows
        for a in mats:
            if a.shape != (d, d):
                raise DimensionError("MPS matrices must all be square of one size")

    @property
    def dim(self) -> int:
        return self.matrices[0].rows

    @property
    def k(self) -> int:
        return len(self.matrices)


def mps_amplitude(fam: MpsFamily, word: Sequence[int]) -> Fraction:
    """``<e_1| A_jn ... A_j1 |e_1>``."""
    for j in word:
        _check_outcome(fam.k, j)
    return word_product(fam.matrices, word)[0, 0]


@dataclass(frozen=True)
class MpsSearchResult:
    """Words up to ``max_depth`` with zero amplitude. An empty list proves nothing beyond that depth."""

    words: tuple[Word, ...]
    max_depth: int
    searched: int = field(default=0)


def find_unobservable_mps(fam: MpsFamily, max_depth: int, max_words: int = DEFAULT_MAX_WORDS) -> MpsSearchResult:
    if max_depth < 1:
        raise ValueError("max_depth must be at least 1")
    frontier: dict[Matrix, list[Word]] = {Matrix.identity(fam.dim): [()]}
    cache: dict[Matrix, list[Matrix]] = {}
    found: list[Word] = []
    searched = 0
    for _ in range(max_depth):
        frontier = _grow(fam.matrices, frontier, cache)
        live = sum(len(w) for w in frontier.values())
        searched += live
        if live > max_words:
            raise ResourceLimitError(f"MPS search exceeded {max_words} words at one depth")
        for prod, words in frontier.items():
            if prod.nums[0] == 0:
                found.extend(words)
    return MpsSearchResult(_sort_words(found), max_depth, searched)
