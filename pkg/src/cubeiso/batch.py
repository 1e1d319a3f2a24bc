"""Vectorized counterparts of the cube-core statistics.

Two layouts are supported:

* *masks*: a 1-d ``uint64`` array, one whole set per entry (``n <= 6``);
  used by the exhaustive scans.
* *words*: a ``(B, 2**n // 64)`` ``uint64`` array, one set per row with
  vertex ``v`` at bit ``v % 64`` of word ``v // 64`` (``n >= 6``); used for
  random sampling at larger ``n``.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .cube import Subcube, low_mask, realize_subcube

U64 = np.uint64


def popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x).astype(np.int64)


def _check_mask_dim(n: int) -> None:
    if not 1 <= n <= 6:
        raise ValueError("mask layout needs 1 <= n <= 6")


def sizes(masks: np.ndarray) -> np.ndarray:
    return popcount(masks)


def upper_sizes(masks: np.ndarray, n: int) -> np.ndarray:
    """(B, n) array of |A_i^+|."""
    _check_mask_dim(n)
    out = np.empty((masks.size, n), dtype=np.int64)
    for i in range(1, n + 1):
        high = U64(low_mask(n, i) ^ ((1 << (1 << n)) - 1))
        out[:, i - 1] = popcount(masks & high)
    return out


def direction_boundaries(masks: np.ndarray, n: int) -> np.ndarray:
    """(B, n) array of ∂_i A."""
    _check_mask_dim(n)
    out = np.empty((masks.size, n), dtype=np.int64)
    for i in range(1, n + 1):
        s = U64(1 << (i - 1))
        out[:, i - 1] = popcount((masks ^ (masks >> s)) & U64(low_mask(n, i)))
    return out


def internal_edges(masks: np.ndarray, n: int) -> np.ndarray:
    _check_mask_dim(n)
    total = np.zeros(masks.size, dtype=np.int64)
    for i in range(1, n + 1):
        s = U64(1 << (i - 1))
        total += popcount(masks & (masks >> s) & U64(low_mask(n, i)))
    return total


def excess(boundary: np.ndarray, size: np.ndarray, n: int) -> np.ndarray:
    """Float excess; NaN where size is 0."""
    with np.errstate(divide="ignore", invalid="ignore"):
        k = size.astype(np.float64)
        return np.where(size > 0, boundary / k - (n - np.log2(k)), np.nan)


@lru_cache(maxsize=None)
def subcube_table(n: int) -> tuple:
    """All 3^n subcubes sorted by (codimension, fixed assignment).

    Returns ``(subcubes, masks, codims)``; ``masks`` is a uint64 array.
    """
    _check_mask_dim(n)
    cubes = []
    for pattern in itertools.product((0, 1, None), repeat=n):
        fixed = tuple((i + 1, a) for i, a in enumerate(pattern) if a is not None)
        cubes.append(Subcube(n, fixed))
    cubes.sort(key=lambda S: (S.codim, S.fixed))
    masks = np.array([realize_subcube(S).bits for S in cubes], dtype=U64)
    codims = np.array([S.codim for S in cubes], dtype=np.int64)
    return tuple(cubes), masks, codims


def exact_fit(masks: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Minimal |A Δ C| over all subcubes, with the tie-broken subcube index.

    Index refers to :func:`subcube_table`; ties go to the smaller codimension,
    then the lexicographically smaller fixed assignment.
    """
    _, cube_masks, _ = subcube_table(n)
    d = popcount(masks[:, None] ^ cube_masks[None, :])
    idx = np.argmin(d, axis=1)
    return d[np.arange(masks.size), idx], idx


def subcube_intersections(masks: np.ndarray, n: int) -> np.ndarray:
    """(B, 3^n) array of |A ∩ C| in :func:`subcube_table` order."""
    _, cube_masks, _ = subcube_table(n)
    return popcount(masks[:, None] & cube_masks[None, :])


def words_direction_counts(words: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-direction boundary and internal edge counts in the word layout.

    Returns two ``(B, n)`` int arrays: ∂_i A and the number of direction-i
    edges with both ends in A.
    """
    if n < 6:
        raise ValueError("word layout needs n >= 6")
    B, W = words.shape
    if W != (1 << n) // 64:
        raise ValueError("word count does not match n")
    bnd = np.empty((B, n), dtype=np.int64)
    inner = np.empty((B, n), dtype=np.int64)
    for i in range(1, n + 1):
        s = 1 << (i - 1)
        if s < 64:
            low = U64(low_mask(6, i))
            shifted = words >> U64(s)
            bnd[:, i - 1] = popcount((words ^ shifted) & low).sum(axis=1)
            inner[:, i - 1] = popcount(words & shifted & low).sum(axis=1)
        else:
            ws = s // 64
            v = words.reshape(B, W // (2 * ws), 2, ws)
            lo, hi = v[:, :, 0, :], v[:, :, 1, :]
            bnd[:, i - 1] = popcount(lo ^ hi).sum(axis=(1, 2))
            inner[:, i - 1] = popcount(lo & hi).sum(axis=(1, 2))
    return bnd, inner


def words_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype="<u8").tobytes(), "little")


def log2_exact_power(k: int):
    """``t`` if ``k == 2**t`` else None."""
    return k.bit_length() - 1 if k > 0 and k & (k - 1) == 0 else None

