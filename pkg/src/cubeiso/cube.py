"""Exact subsets of the discrete cube {0,1}^n and their boundary statistics.

A vertex ``x ⊂ [n]`` is stored as the integer ``v = sum(2**(i-1) for i in x)``,
so coordinate ``i`` is bit ``i - 1``.  A :class:`CubeSet` keeps its membership
vector as a single Python ``int`` whose bit ``v`` is set iff ``v`` is in the
set; shifts, masks and ``int.bit_count`` then give every edge count without
touching individual vertices.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .errors import (
    BadCharacter,
    BadLength,
    CoordinateOutOfRange,
    DimensionMismatch,
    DimensionOutOfRange,
    EmptySet,
    VertexOutOfRange,
)

MAX_DIM = 24
_HEX_RE = re.compile(r"^[0-9a-f]*$")


@lru_cache(maxsize=None)
def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def low_mask(n: int, i: int) -> int:
    """Bits of all vertices whose coordinate ``i`` is 0."""
    s = 1 << (i - 1)
    return full_mask(n) // ((1 << (2 * s)) - 1) * ((1 << s) - 1)


@dataclass(frozen=True)
class CubeSet:
    """A subset of {0,1}^n held as a 2^n-bit membership integer."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DIM:
            raise DimensionOutOfRange(f"n must be in [0, {MAX_DIM}], got {self.n}")
        if self.bits < 0 or self.bits > full_mask(self.n):
            raise VertexOutOfRange("membership bits beyond 2^n vertices")

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, v: int) -> bool:
        return 0 <= v < (1 << self.n) and bool(self.bits >> v & 1)

    def __iter__(self):
        return iter(self.vertices())

    @property
    def size(self) -> int:
        return self.bits.bit_count()

    def vertices(self) -> list[int]:
        return [int(v) for v in np.flatnonzero(self.membership())]

    def membership(self) -> np.ndarray:
        """Boolean vector of length 2^n."""
        N = 1 << self.n
        raw = self.bits.to_bytes(max(1, (N + 7) // 8), "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")
        return bits[:N].astype(bool)

    @classmethod
    def from_membership(cls, n: int, member) -> "CubeSet":
        member = np.asarray(member, dtype=bool)
        if member.shape != (1 << n,):
            raise BadLength(f"membership vector must have length 2^{n}")
        packed = np.packbits(member, bitorder="little").tobytes()
        return cls(n, int.from_bytes(packed, "little"))

    def __repr__(self) -> str:
        return f"CubeSet(n={self.n}, size={self.size}, hex={to_hex(self)!r})"


@dataclass(frozen=True)
class Subcube:
    """Fixed-coordinate description of a subcube.

    ``fixed`` is a tuple of ``(coordinate, value)`` pairs with strictly
    increasing 1-based coordinates.
    """

    n: int
    fixed: tuple = field(default=())

    def __post_init__(self):
        if not 0 <= self.n <= MAX_DIM:
            raise DimensionOutOfRange(f"n must be in [0, {MAX_DIM}], got {self.n}")
        fixed = tuple((int(i), int(a)) for i, a in self.fixed)
        object.__setattr__(self, "fixed", fixed)
        prev = 0
        for i, a in fixed:
            if not prev < i <= self.n:
                raise CoordinateOutOfRange(
                    f"fixed coordinates must be strictly increasing in [1, {self.n}]")
            if a not in (0, 1):
                raise ValueError(f"fixed value must be 0 or 1, got {a}")
            prev = i

    @classmethod
    def from_dict(cls, n: int, assignment: dict) -> "Subcube":
        return cls(n, tuple(sorted(assignment.items())))

    @property
    def codim(self) -> int:
        return len(self.fixed)

    @property
    def dim(self) -> int:
        return self.n - len(self.fixed)

    @property
    def size(self) -> int:
        return 1 << self.dim

    def __str__(self) -> str:
        if not self.fixed:
            return f"Q{self.n}"
        return "{" + ", ".join(f"x{i}={a}" for i, a in self.fixed) + "}"


def _check_coordinate(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise CoordinateOutOfRange(f"coordinate {i} not in [1, {n}]")


def _check_same_dim(a, b) -> None:
    if a.n != b.n:
        raise DimensionMismatch(f"dimensions differ: {a.n} vs {b.n}")


def make_set(n: int, vertices: Iterable[int] = ()) -> CubeSet:
    if not 1 <= n <= MAX_DIM:
        raise DimensionOutOfRange(f"n must be in [1, {MAX_DIM}], got {n}")
    N = 1 << n
    bits = 0
    for v in vertices:
        v = int(v)
        if not 0 <= v < N:
            raise VertexOutOfRange(f"vertex {v} not in [0, {N})")
        bits |= 1 << v
    return CubeSet(n, bits)


def full_cube(n: int) -> CubeSet:
    return CubeSet(n, full_mask(n))


def hex_width(n: int) -> int:
    return max(1, (1 << n) // 4)


def to_hex(A: CubeSet) -> str:
    """Lowercase hex, most significant nibble first; bit v is vertex v."""
    return format(A.bits, f"0{hex_width(A.n)}x")


def from_hex(n: int, text: str) -> CubeSet:
    if not 0 <= n <= MAX_DIM:
        raise DimensionOutOfRange(f"n must be in [0, {MAX_DIM}], got {n}")
    if len(text) != hex_width(n):
        raise BadLength(f"expected {hex_width(n)} hex characters for n={n}, got {len(text)}")
    if not _HEX_RE.match(text):
        raise BadCharacter(f"hex string must be lowercase [0-9a-f]: {text!r}")
    bits = int(text, 16) if text else 0
    if bits > full_mask(n):
        raise BadCharacter(f"hex value {text!r} sets bits beyond 2^{n} vertices")
    return CubeSet(n, bits)


def sections(A: CubeSet, i: int) -> tuple[CubeSet, CubeSet]:
    """Upper and lower ``i``-sections, both in dimension ``n - 1``.

    Coordinates above ``i`` shift down by one.
    """
    _check_coordinate(A.n, i)
    m = A.membership().reshape(1 << (A.n - i), 2, 1 << (i - 1))
    upper = CubeSet.from_membership(A.n - 1, m[:, 1, :].ravel())
    lower = CubeSet.from_membership(A.n - 1, m[:, 0, :].ravel())
    return upper, lower


def section_sizes(A: CubeSet, i: int) -> tuple[int, int]:
    """(|A_i^+|, |A_i^-|) without materializing the sections."""
    _check_coordinate(A.n, i)
    lower = (A.bits & low_mask(A.n, i)).bit_count()
    return A.size - lower, lower


def direction_boundary(A: CubeSet, i: int) -> int:
    _check_coordinate(A.n, i)
    s = 1 << (i - 1)
    return ((A.bits ^ (A.bits >> s)) & low_mask(A.n, i)).bit_count()


def edge_boundary(A: CubeSet) -> int:
    return sum(direction_boundary(A, i) for i in range(1, A.n + 1))


def internal_edges(A: CubeSet) -> int:
    b = A.bits
    return sum(
        (b & (b >> (1 << (i - 1))) & low_mask(A.n, i)).bit_count()
        for i in range(1, A.n + 1)
    )


def excess(A: CubeSet) -> float:
    """Average out-degree above the isoperimetric minimum, |∂A|/|A| - log2(2^n/|A|)."""
    k = A.size
    if k == 0:
        raise EmptySet("excess is undefined for the empty set")
    return edge_boundary(A) / k - (A.n - math.log2(k))


def symdiff_size(A: CubeSet, B: CubeSet) -> int:
    _check_same_dim(A, B)
    return (A.bits ^ B.bits).bit_count()


def complement(A: CubeSet) -> CubeSet:
    return CubeSet(A.n, A.bits ^ full_mask(A.n))


def realize_subcube(S: Subcube) -> CubeSet:
    bits = full_mask(S.n)
    for i, a in S.fixed:
        low = low_mask(S.n, i)
        bits &= low if a == 0 else full_mask(S.n) ^ low
    return CubeSet(S.n, bits)


def subcube_distance(A: CubeSet, S: Subcube) -> int:
    _check_same_dim(A, S)
    return symdiff_size(A, realize_subcube(S))


def spanning_subcube(A: CubeSet) -> Optional[Subcube]:
    """The smallest subcube containing a nonempty ``A`` (None for the empty set)."""
    if A.size == 0:
        return None
    fixed = []
    for i in range(1, A.n + 1):
        up, lo = section_sizes(A, i)
        if up == 0:
            fixed.append((i, 0))
        elif lo == 0:
            fixed.append((i, 1))
    return Subcube(A.n, tuple(fixed))


def is_subcube(A: CubeSet) -> bool:
    S = spanning_subcube(A)
    return S is not None and S.size == A.size


@dataclass(frozen=True)
class InfluenceProfile:
    """Per-coordinate boundary statistics of one set.

    ``gamma`` and ``epsilon0`` raise :class:`EmptySet` for the empty set.
    """

    n: int
    size: int
    dir_boundary: tuple
    upper_sizes: tuple
    boundary: int

    @property
    def beta(self) -> tuple:
        half = 1 << (self.n - 1)
        return tuple(Fraction(d, half) for d in self.dir_boundary)

    @property
    def total_influence(self) -> Fraction:
        return Fraction(self.boundary, 1 << (self.n - 1))

    @property
    def p(self) -> Fraction:
        return Fraction(self.size, 1 << self.n)

    @property
    def gamma(self) -> tuple:
        if self.size == 0:
            raise EmptySet("gamma is undefined for the empty set")
        return tuple(
            Fraction(min(u, self.size - u), self.size) for u in self.upper_sizes)

    @property
    def epsilon0(self) -> float:
        if self.size == 0:
            raise EmptySet("excess is undefined for the empty set")
        return self.boundary / self.size - (self.n - math.log2(self.size))


def influences(A: CubeSet) -> InfluenceProfile:
    if A.n < 1:
        raise DimensionOutOfRange("influences need n >= 1")
    dirs = tuple(direction_boundary(A, i) for i in range(1, A.n + 1))
    ups = tuple(section_sizes(A, i)[0] for i in range(1, A.n + 1))
    return InfluenceProfile(A.n, A.size, dirs, ups, sum(dirs))
