"""Concrete set families: binary-order initial segments, tribes, and the
near-subcube family that makes the power-of-two stability bound tight."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cube import MAX_DIM, CubeSet, Subcube, full_mask, low_mask
from .errors import DimensionOutOfRange, InvalidParameters, SizeOutOfRange


def harper_set(n: int, k: int) -> CubeSet:
    """First ``k`` sets of the binary ordering, i.e. vertices ``0 .. k-1``."""
    if not 1 <= n <= MAX_DIM:
        raise DimensionOutOfRange(f"n must be in [1, {MAX_DIM}], got {n}")
    if not 0 <= k <= 1 << n:
        raise SizeOutOfRange(f"k must be in [0, 2^{n}], got {k}")
    return CubeSet(n, (1 << k) - 1)


def tribes(k: int, l: int) -> CubeSet:
    """Vectors that vanish on at least one of ``l`` consecutive blocks of size ``k``."""
    if k < 1 or l < 1:
        raise InvalidParameters("tribe size and count must be positive")
    n = k * l
    if n > MAX_DIM:
        raise DimensionOutOfRange(f"tribes({k},{l}) needs n = {n} > {MAX_DIM}")
    bits = 0
    for t in range(l):
        block = full_mask(n)
        for c in range(t * k + 1, (t + 1) * k + 1):
            block &= low_mask(n, c)
        bits |= block
    return CubeSet(n, bits)


@dataclass(frozen=True)
class TribesStats:
    k: int
    l: int
    n: int
    size: int
    boundary: int
    beta: Fraction


def tribes_stats(k: int, l: int) -> TribesStats:
    """Closed-form size, boundary and per-coordinate influence of ``tribes(k, l)``.

    Pure integer/rational arithmetic, so ``n = k*l`` may be far beyond 24.
    """
    if k < 1 or l < 1:
        raise InvalidParameters("tribe size and count must be positive")
    n = k * l
    q = Fraction((1 << k) - 1, 1 << k)
    size = (1 - q ** l) * (1 << n)
    boundary = n * (1 << (n - k)) * q ** (l - 1)
    beta = Fraction(1, 1 << (k - 1)) * q ** (l - 1)
    assert size.denominator == 1 and boundary.denominator == 1
    return TribesStats(k, l, n, int(size), int(boundary), beta)


def isoperimetric_ratio(size: int, boundary: int, n: int) -> float:
    """|∂A| / (|A| log2(2^n/|A|)) for arbitrarily large integers."""
    if not 0 < size < 1 << n:
        raise InvalidParameters("ratio needs 0 < size < 2^n")
    return boundary / size / (n - math.log2(size))


@dataclass(frozen=True)
class TribesVariant:
    j: int
    s: int
    k: int
    l: int
    bound: Fraction

    @property
    def n(self) -> int:
        return self.k * self.l

    def ratio(self) -> float:
        """Exact-count isoperimetric ratio of the variant (log evaluated last)."""
        st = tribes_stats(self.k, self.l)
        return isoperimetric_ratio(st.size, st.boundary, st.n)


def tribes_variant_params(j: int, s: int) -> TribesVariant:
    """Tribe size ``2**j`` and count ``2**(2**(j-s) - j)``; ratio bound ``1/(1 - 2**-s)``."""
    if s < 1:
        raise InvalidParameters("s must be >= 1 (the bound 1/(1-2^-s) diverges at s = 0)")
    if j < s or (1 << (j - s)) < j:
        raise InvalidParameters(f"l = 2^(2^(j-s) - j) is not a positive integer for j={j}, s={s}")
    k = 1 << j
    l = 1 << ((1 << (j - s)) - j)
    return TribesVariant(j, s, k, l, 1 / (1 - Fraction(1, 1 << s)))


def extremal_near_cube(n: int, N: int, M: int) -> tuple[CubeSet, Subcube]:
    """Codimension-N subcube with one codim-(N+M) piece moved outside it.

    ``C = P([n-N])``, ``B = {x ∪ {n-N}: x ⊂ [n-N-M]}`` is removed and
    ``D = {x ∪ {n}: x ⊂ [n-N-M]}`` is added.
    """
    if not (1 <= N <= n - 1 and 2 <= M <= n - N):
        raise InvalidParameters(f"need 1 <= N <= n-1 and 2 <= M <= n-N, got n={n}, N={N}, M={M}")
    if n > MAX_DIM:
        raise DimensionOutOfRange(f"n must be <= {MAX_DIM}")
    base = (1 << (1 << (n - N - M))) - 1
    C = (1 << (1 << (n - N))) - 1
    B = base << (1 << (n - N - 1))
    D = base << (1 << (n - 1))
    A = CubeSet(n, (C & ~B) | D)
    cube = Subcube(n, tuple((i, 0) for i in range(n - N + 1, n + 1)))
    return A, cube
