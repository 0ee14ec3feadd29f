"""From an 8-generator 3x3 mortality instance to a 9-outcome measurement device.

The construction pads the instance with sign-flipped copies so that the sum
of ``M^T M`` becomes diagonal, then tops the diagonal up to ``c**2`` with four
diagonal matrices read off a four-square decomposition. Stacking five
``3x3`` blocks per outcome and scaling by ``4/(5c)`` gives eight Kraus
operators whose ``A^T A`` sum to ``(16/25) 1_3``; the ninth operator
``(3/5) 1_3 ⊕ 1_12`` completes the identity on all 15 dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact import DimensionError, Matrix, ceil_two_sqrt, direct_sum, four_square_decompose, hstack, vstack
from .mortality import MmpInstance, Word

SIGN_FLIPS = (
    Matrix.diag([-1, 1, 1]),
    Matrix.diag([1, -1, 1]),
    Matrix.diag([1, 1, -1]),
)

NUM_GENERATORS = 8
BLOCK = 3
DEVICE_DIM = 15
DEVICE_K = 9


@dataclass(frozen=True)
class QuantumDevice:
    """A selective measurement given by rational Kraus operators.

    Completeness is not enforced on construction so that broken devices can be
    loaded and reported on; see :func:`validate_device`.
    """

    kraus: tuple[Matrix, ...]

    def __post_init__(self):
        ops = tuple(self.kraus)
        object.__setattr__(self, "kraus", ops)
        if not ops:
            raise ValueError("a device needs at least one Kraus operator")
        d = ops[0].rows
        for a in ops:
            if a.shape != (d, d):
                raise DimensionError("Kraus operators must all be square of one size")

    @property
    def dim(self) -> int:
        return self.kraus[0].rows

    @property
    def k(self) -> int:
        return len(self.kraus)

    def completeness_sum(self) -> Matrix:
        total = Matrix.zeros(self.dim)
        for a in self.kraus:
            total = total + a.T @ a
        return total


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    difference: Matrix | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_device(device: QuantumDevice) -> ValidationReport:
    """Check ``sum_j A_j^T A_j == 1`` exactly; on failure report ``sum - 1``."""
    diff = device.completeness_sum() - Matrix.identity(device.dim)
    if diff.is_zero():
        return ValidationReport(True)
    return ValidationReport(False, diff)


@dataclass(frozen=True)
class ReductionCertificate:
    T: Matrix
    c: int
    extended: tuple[Matrix, ...]  # M_1 .. M_40
    device: QuantumDevice

    def gram_sum(self, upto: int) -> Matrix:
        """``sum_{j <= upto} M_j^T M_j`` over the extended generators."""
        total = Matrix.zeros(BLOCK)
        for m in self.extended[:upto]:
            total = total + m.T @ m
        return total


def build_kraus_from_mmp(inst: MmpInstance) -> ReductionCertificate:
    gens = inst.generators
    if len(gens) != NUM_GENERATORS:
        raise ValueError(f"the reduction needs exactly {NUM_GENERATORS} generators, got {len(gens)}")
    for m in gens:
        if m.shape != (BLOCK, BLOCK) or not m.is_integral:
            raise ValueError("every generator must be a 3x3 integer matrix")

    t = Matrix.zeros(BLOCK)
    for m in gens:
        t = t + m.T @ m
    diag_t = [t.nums[i * BLOCK + i] for i in range(BLOCK)]

    # c = 0 only when every generator vanishes; 1 keeps the scale defined
    c = max(1, ceil_two_sqrt(max(diag_t)))

    extended = list(gens)
    for p in SIGN_FLIPS:
        extended.extend(m @ p for m in gens)
    squares = [four_square_decompose(c * c - 4 * tii) for tii in diag_t]
    for k in range(4):
        extended.append(Matrix.diag([squares[i][k] for i in range(BLOCK)]))
    extended.extend(Matrix.zeros(BLOCK) for _ in range(4))

    scale = Fraction(4, 5 * c)
    pad = Matrix.zeros(DEVICE_DIM, DEVICE_DIM - BLOCK)
    kraus = []
    for j in range(NUM_GENERATORS):
        column = vstack([extended[j + NUM_GENERATORS * s] for s in range(5)])
        kraus.append(hstack([column, pad]).scale(scale))
    kraus.append(direct_sum(Matrix.identity(BLOCK).scale(Fraction(3, 5)), Matrix.identity(DEVICE_DIM - BLOCK)))
    return ReductionCertificate(T=t, c=c, extended=tuple(extended), device=QuantumDevice(tuple(kraus)))


def map_word_q_to_m(word: Sequence[int]) -> Word:
    """Drop the outcomes of the completing operator (index 9)."""
    for j in word:
        if not 1 <= j <= DEVICE_K:
            raise ValueError(f"outcome {j} out of range 1..{DEVICE_K}")
    return tuple(j for j in word if j != DEVICE_K)


def compute_probability_gap(device: QuantumDevice) -> tuple[Fraction, int]:
    """Return ``(delta, N)`` with ``N = max_j N_j**2`` and ``delta = 1/(d N)``.

    ``N_j`` is the least common denominator of ``A_j``, the smallest integer
    making ``N_j A_j`` integral.
    """
    n = max(a.den for a in device.kraus) ** 2
    return Fraction(1, device.dim * n), n


def scale_numerators(device: QuantumDevice) -> list[tuple[Matrix, int]]:
    """``(Z_j, N_j)`` with ``A_j = Z_j / N_j`` and ``Z_j`` integral."""
    return [(Matrix(a.rows, a.cols, a.nums), a.den) for a in device.kraus]
