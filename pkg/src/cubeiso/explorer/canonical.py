"""Orbit representatives under the cube's automorphism group.

The group is generated by coordinate permutations and coordinate
complementations (order 2^n n!).  The canonical form of a set is the orbit
member with the smallest membership integer, which is also the smallest
hex string.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from ..cube import CubeSet
from ..errors import DimensionTooLarge

MAX_CANONICAL_DIM = 6


@lru_cache(maxsize=None)
def vertex_action(n: int) -> np.ndarray:
    """(2^n n!, 2^n) table: row g maps vertex v to g(v).

    g = (flip f, permutation π) sends v to π(v XOR f), where π moves bit j to
    bit π[j].
    """
    N = 1 << n
    v = np.arange(N, dtype=np.int64)
    rows = []
    for perm in itertools.permutations(range(n)):
        w = np.zeros(N, dtype=np.int64)
        for j, pj in enumerate(perm):
            w |= ((v >> j) & 1) << pj
        rows.append(w[v[None, :] ^ v[:, None]])
    return np.concatenate(rows).astype(np.int8)


def _check(n: int) -> None:
    if n > MAX_CANONICAL_DIM:
        raise DimensionTooLarge(f"canonical forms are computed for n <= {MAX_CANONICAL_DIM}")


def orbit_masks(A: CubeSet) -> np.ndarray:
    """Membership integers of g·A for every group element g (uint64)."""
    _check(A.n)
    table = vertex_action(A.n)
    verts = np.array(A.vertices(), dtype=np.int64)
    if verts.size == 0:
        return np.zeros(table.shape[0], dtype=np.uint64)
    images = table[:, verts].astype(np.uint64)
    return np.bitwise_or.reduce(np.left_shift(np.uint64(1), images), axis=1)


def canonical_form(A: CubeSet) -> CubeSet:
    return CubeSet(A.n, int(orbit_masks(A).min()))


def orbit_size(A: CubeSet) -> int:
    return int(np.unique(orbit_masks(A)).size)


def apply_group_element(A: CubeSet, perm, flip: int) -> CubeSet:
    """Image of A under v -> π(v XOR flip); ``perm[j]`` is the image of bit j."""
    bits = 0
    for v in A.vertices():
        u = v ^ flip
        w = 0
        for j, pj in enumerate(perm):
            w |= ((u >> j) & 1) << pj
        bits |= 1 << w
    return CubeSet(A.n, bits)
