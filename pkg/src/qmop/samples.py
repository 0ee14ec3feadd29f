"""Seeded random instances for tests and benchmarks."""

from __future__ import annotations

import random
from fractions import Fraction

from .exact import Matrix
from .measurement import ClassicalDevice
from .mortality import MmpInstance
from .reduction import QuantumDevice


def random_int_matrix(rng: random.Random, d: int, lo: int = -5, hi: int = 5) -> Matrix:
    return Matrix.from_rows([[rng.randint(lo, hi) for _ in range(d)] for _ in range(d)])


def random_mmp(rng: random.Random, k: int = 8, d: int = 3, lo: int = -5, hi: int = 5) -> MmpInstance:
    return MmpInstance(tuple(random_int_matrix(rng, d, lo, hi) for _ in range(k)))


def random_unimodular(rng: random.Random, d: int, steps: int = 6) -> tuple[Matrix, Matrix]:
    """Return ``(U, U^-1)`` built from random integer row operations."""
    u = Matrix.identity(d)
    u_inv = Matrix.identity(d)
    for _ in range(steps):
        i, j = rng.sample(range(d), 2)
        f = rng.choice([-2, -1, 1, 2])
        e = Matrix.identity(d) + Matrix.unit(d, i, j).scale(f)
        e_inv = Matrix.identity(d) - Matrix.unit(d, i, j).scale(f)
        u = e @ u
        u_inv = u_inv @ e_inv
    return u, u_inv


def planted_mortal_mmp(rng: random.Random, d: int = 3, k: int = 8) -> MmpInstance:
    """Random instance with a planted zero product of length at most 3.

    Either one generator is a conjugated strictly upper-triangular matrix
    (nilpotent) or two rank-one generators annihilate each other.
    """
    gens = [random_int_matrix(rng, d, -3, 3) for _ in range(k)]
    if rng.random() < 0.5:
        u, u_inv = random_unimodular(rng, d, steps=3)
        strict = [[rng.randint(-2, 2) if j > i else 0 for j in range(d)] for i in range(d)]
        strict[0][1] = strict[0][1] or 1
        gens[rng.randrange(k)] = u @ Matrix.from_rows(strict) @ u_inv
    else:
        x = [rng.randint(-2, 2) for _ in range(d)]
        x[0] = x[0] or 1
        y = [rng.randint(-2, 2) for _ in range(d)]
        y[-1] = y[-1] or 1
        # v orthogonal to x: v = x[1] e_0 - x[0] e_1
        v = [x[1], -x[0]] + [0] * (d - 2)
        u = [rng.randint(-2, 2) for _ in range(d)]
        u[1] = u[1] or 1
        first = Matrix.from_rows([[xi * yj for yj in y] for xi in x])
        second = Matrix.from_rows([[ui * vj for vj in v] for ui in u])
        a, b = rng.sample(range(k), 2)
        gens[a], gens[b] = first, second
    return MmpInstance(tuple(gens))


def rational_sphere_point(rng: random.Random, k: int, spread: int = 3) -> list[Fraction]:
    """Rational point on the unit sphere in ``k`` dimensions (inverse stereographic projection)."""
    if k == 1:
        return [Fraction(rng.choice([-1, 1]))]
    t = [Fraction(rng.randint(-spread, spread), rng.randint(1, spread)) for _ in range(k - 1)]
    s = sum(x * x for x in t)
    return [2 * x / (s + 1) for x in t] + [(s - 1) / (s + 1)]


def random_rational_orthogonal(rng: random.Random, d: int, spread: int = 2) -> Matrix:
    """Cayley transform ``(1 - S)(1 + S)^-1`` of a random rational skew-symmetric ``S``."""
    if d == 1:
        return Matrix.identity(1).scale(rng.choice([-1, 1]))
    rows = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            x = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
            rows[i][j], rows[j][i] = x, -x
    s = Matrix.from_rows(rows)
    one = Matrix.identity(d)
    return (one - s) @ _inverse(one + s)


def _inverse(m: Matrix) -> Matrix:
    n = m.rows
    a = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.to_rows())]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [x / piv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return Matrix.from_rows([row[n:] for row in a])


def random_device(rng: random.Random, d: int, k: int, zero_rate: float = 0.3) -> QuantumDevice:
    """Rational device ``A_j = O_j D_j R`` that is complete by construction.

    ``O_j`` and ``R`` are rational orthogonal and the diagonal ``D_j`` satisfy
    ``sum_j D_j**2 = 1`` entrywise, each diagonal position taking its weights
    from a rational point on the unit sphere. Some weights are zeroed out
    (and the remainder renormalized by another sphere point) so that zero
    probabilities actually occur.
    """
    weights = []
    for _ in range(d):
        live = [j for j in range(k) if rng.random() >= zero_rate] or [rng.randrange(k)]
        point = rational_sphere_point(rng, len(live))
        col = [Fraction(0)] * k
        for j, x in zip(live, point):
            col[j] = x
        weights.append(col)
    r = random_rational_orthogonal(rng, d)
    kraus = []
    for j in range(k):
        dj = Matrix.diag([weights[i][j] for i in range(d)])
        kraus.append(random_rational_orthogonal(rng, d) @ dj @ r)
    return QuantumDevice(tuple(kraus))


def random_classical_device(rng: random.Random, d: int, k: int, zero_rate: float = 0.5) -> ClassicalDevice:
    """Split a random column-stochastic matrix into ``k`` non-negative parts.

    Each column's unit mass is spread over random (row, part) cells; a high
    ``zero_rate`` leaves many cells empty so that zero products are common.
    """
    cells = [[[Fraction(0)] * d for _ in range(d)] for _ in range(k)]
    for c in range(d):
        slots = [(j, r) for j in range(k) for r in range(d) if rng.random() >= zero_rate]
        if not slots:
            slots = [(rng.randrange(k), rng.randrange(d))]
        raw = [rng.randint(1, 4) for _ in slots]
        total = sum(raw)
        for (j, r), w in zip(slots, raw):
            cells[j][r][c] += Fraction(w, total)
    return ClassicalDevice(tuple(Matrix.from_rows(part) for part in cells))


def random_stochastic(rng: random.Random, d: int) -> Matrix:
    return random_classical_device(rng, d, 1, zero_rate=0.0).parts[0]
