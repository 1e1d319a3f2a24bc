"""Approximating a set by subcubes and juntas.

Subcube statistics for all 3^n subcubes at once come from a ternary
"sum transform" of the membership vector: along every axis the pair
``(x0, x1)`` becomes ``(x0, x1, x0 + x1)``, i.e. fixed-0, fixed-1, moving.
The resulting flat index of a subcube is ``sum(d_i * 3**(i-1))`` with digit
``d_i`` in {0: fixed to 0, 1: fixed to 1, 2: moving}.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from . import analytic
from .analytic import BoundConfig, DEFAULT_CONFIG
from .cube import (
    CubeSet,
    Subcube,
    _check_same_dim,
    excess,
    realize_subcube,
    section_sizes,
    subcube_distance,
)
from .errors import CoordinateOutOfRange, DimensionTooLarge, EmptySet, NoCase1

EXACT_MAX_DIM = 14


@dataclass(frozen=True)
class GreedyStep:
    coordinate: int
    value: int
    gamma: Fraction
    dimension: int


@dataclass(frozen=True)
class FitResult:
    cube: Subcube
    symdiff: int
    delta: Fraction
    method: str
    trace: tuple = field(default=())


@dataclass(frozen=True)
class Decomposition:
    N: int
    B_size: int
    D_size: int
    phi: Fraction
    psi: Fraction
    bound: float


def subcube_counts(member: np.ndarray, n: int) -> np.ndarray:
    """|A ∩ C| for every subcube C, flat base-3 index (see module docstring)."""
    x = np.asarray(member, dtype=np.int64).reshape((2,) * n)
    for ax in range(n):
        x0 = np.take(x, 0, axis=ax)
        x1 = np.take(x, 1, axis=ax)
        x = np.stack([x0, x1, x0 + x1], axis=ax)
    return x.reshape(-1)


@lru_cache(maxsize=4)
def codim_table(n: int) -> np.ndarray:
    t = np.zeros(1, dtype=np.int8)
    for _ in range(n):
        t = np.add.outer(t, np.array([1, 1, 0], dtype=np.int8)).ravel()
    return t


def decode_subcube(n: int, index: int) -> Subcube:
    fixed = []
    for i in range(1, n + 1):
        index, d = divmod(index, 3)
        if d < 2:
            fixed.append((i, d))
    return Subcube(n, tuple(fixed))


def _pick(n: int, candidates: np.ndarray) -> Subcube:
    # candidates share the primary key and the codimension
    return min((decode_subcube(n, int(c)) for c in candidates), key=lambda S: S.fixed)


def fit_exact(A: CubeSet) -> FitResult:
    """Global minimizer of |A Δ C| over all 3^n subcubes.

    Ties go to the smaller codimension, then the lexicographically smallest
    fixed assignment.
    """
    if A.size == 0:
        raise EmptySet("cannot fit the empty set")
    if A.n > EXACT_MAX_DIM:
        raise DimensionTooLarge(f"exact fitting enumerates 3^n subcubes; n <= {EXACT_MAX_DIM}")
    n = A.n
    counts = subcube_counts(A.membership(), n)
    codim = codim_table(n).astype(np.int64)
    symdiff = A.size + (np.int64(1) << (n - codim)) - 2 * counts
    key = symdiff * (n + 1) + codim
    best = key.min()
    cube = _pick(n, np.flatnonzero(key == best))
    d = int(best // (n + 1))
    return FitResult(cube, d, Fraction(d, A.size), "exact")


def _compress(bits: int, m: int, pos: int, upper: bool) -> int:
    """Section of an m-dimensional bitset along 0-based axis ``pos``."""
    c = CubeSet(m, bits)
    arr = c.membership().reshape(1 << (m - pos - 1), 2, 1 << pos)
    return CubeSet.from_membership(m - 1, arr[:, int(upper), :].ravel()).bits


def fit_greedy(
    A: CubeSet,
    config: BoundConfig = DEFAULT_CONFIG,
    heuristic: bool = False,
    case1_threshold: Optional[float] = None,
) -> FitResult:
    """Iterated sectioning towards a subcube.

    Repeatedly fixes the coordinate with the smallest section ratio γ to the
    value of its larger section, until the current set is its whole ambient
    cube or fills more than a ``1 - ε₀`` fraction of it.

    In strict mode (``heuristic=False``) the run must stay inside the
    hypotheses of the stability argument: ``ε₀ <= config.epsilon_c`` and, at
    every step, ``γ <= ε₀ / (5(log2 5 - 2))`` (or ``case1_threshold``).
    Otherwise :class:`NoCase1` is raised.  Heuristic mode never fails.
    """
    if A.size == 0:
        raise EmptySet("cannot fit the empty set")
    eps0 = excess(A)
    threshold = eps0 / analytic.CASE1_SLOPE if case1_threshold is None else case1_threshold
    if not heuristic and eps0 > config.epsilon_c:
        raise NoCase1(
            f"excess {eps0:.6g} exceeds epsilon_c = {config.epsilon_c}; "
            "the stability bound does not apply")
    coords = list(range(1, A.n + 1))
    bits, m = A.bits, A.n
    trace = []
    while True:
        size = bits.bit_count()
        p = Fraction(size, 1 << m)
        if p == 1 or p > 1 - eps0:
            break
        best = None
        for pos in range(m):
            up, lo = section_sizes(CubeSet(m, bits), pos + 1)
            gamma = Fraction(min(up, lo), size)
            if best is None or gamma < best[0]:
                best = (gamma, pos, up, lo)
        gamma, pos, up, lo = best
        if gamma > threshold and not heuristic:
            raise NoCase1(
                f"no coordinate with γ <= {threshold:.6g} in dimension {m} "
                f"(smallest γ = {gamma})")
        value = 1 if up > lo else 0
        trace.append(GreedyStep(coords[pos], value, gamma, m))
        bits = _compress(bits, m, pos, bool(value))
        del coords[pos]
        m -= 1
    cube = Subcube(A.n, tuple(sorted((s.coordinate, s.value) for s in trace)))
    d = subcube_distance(A, cube)
    return FitResult(cube, d, Fraction(d, A.size), "greedy", tuple(trace))


def decompose(A: CubeSet, C: Subcube) -> Decomposition:
    """Split A Δ C into B = C \\ A and D = A \\ C with the matching lower bound."""
    _check_same_dim(A, C)
    if A.size == 0:
        raise EmptySet("decomposition needs a nonempty set")
    cbits = realize_subcube(C).bits
    b = (cbits & ~A.bits).bit_count()
    d = (A.bits & ~cbits).bit_count()
    bound = analytic.decomposition_bound(A.n, A.size, b, d, C.codim)
    return Decomposition(C.codim, b, d, Fraction(b, A.size), Fraction(d, A.size), bound)


def _fiber_counts(A: CubeSet, J: tuple) -> np.ndarray:
    """Counts of A on each assignment of the coordinates in J (sorted)."""
    n = A.n
    x = A.membership().reshape((2,) * n)
    # axis a of x is coordinate n - a
    keep = [n - j for j in J]
    drop = tuple(a for a in range(n) if a not in keep)
    return x.sum(axis=drop, dtype=np.int64).reshape(-1)


def junta_distance(A: CubeSet, J: Iterable[int]) -> int:
    """min |A Δ B| over sets B whose membership depends only on coordinates J."""
    J = tuple(sorted(set(J)))
    for j in J:
        if not 1 <= j <= A.n:
            raise CoordinateOutOfRange(f"coordinate {j} not in [1, {A.n}]")
    counts = _fiber_counts(A, J)
    fiber = 1 << (A.n - len(J))
    return int(np.minimum(counts, fiber - counts).sum())


def dense_subcube(A: CubeSet, max_codim: int) -> tuple[Subcube, Fraction]:
    """Subcube of codimension <= max_codim maximizing |A ∩ C| / |C|.

    Ties go to the smaller codimension, then the lexicographically smallest
    fixed assignment.
    """
    n = A.n
    max_codim = max(0, min(max_codim, n))
    if n <= EXACT_MAX_DIM:
        counts = subcube_counts(A.membership(), n)
        codim = codim_table(n).astype(np.int64)
        # density * 2^n as an exact integer
        score = np.where(codim <= max_codim, counts << codim, -1)
        best = score.max()
        tied = np.flatnonzero(score == best)
        low = codim[tied].min()
        cube = _pick(n, tied[codim[tied] == low])
        return cube, Fraction(int(best), 1 << n)
    best_key, best_cube = None, None
    for k in range(max_codim + 1):
        for J in itertools.combinations(range(1, n + 1), k):
            counts = _fiber_counts(A, J)
            for idx, c in enumerate(counts):
                # fiber index bits run from the highest coordinate in J down
                vals = [(idx >> (len(J) - 1 - r)) & 1 for r in range(len(J))]
                fixed = tuple(sorted(zip(reversed(J), vals)))
                key = (-(int(c) << k), k, fixed)
                if best_key is None or key < best_key:
                    best_key, best_cube = key, Subcube(n, fixed)
    return best_cube, Fraction(-best_key[0], 1 << n)

