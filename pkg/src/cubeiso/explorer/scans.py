"""Exhaustive and randomized verification scans.

Exhaustive scans walk every membership mask ``1 .. 2^(2^n) - 1`` in fixed
chunks of consecutive masks.  Each chunk is reduced to a :class:`Partial`
independently and the partials are merged in chunk order, so a report does
not depend on how many worker processes handled the chunks.
"""
from __future__ import annotations

import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .. import batch
from ..analytic import CASE1_SLOPE
from ..cube import CubeSet, Subcube, hex_width, realize_subcube
from ..errors import DimensionTooLarge, DomainError, ParameterError, UnknownSuite
from .report import Partial, Row, ScanReport, Violation

GUARD = 1e-9
CHUNK = 1 << 12
PROGRESS_EVERY = 1 << 20
MAX_EXHAUSTIVE_DIM = 5

SUITES = ("eq1", "handshake", "lemma-cases", "remark-influences", "theorem5")
DEFAULT_GRID = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(3, 4), Fraction(1))


def _hex(mask: int, n: int) -> str:
    return format(int(mask), f"0{hex_width(n)}x")


def _check_dim(n: int) -> None:
    if not 1 <= n <= MAX_EXHAUSTIVE_DIM:
        raise DimensionTooLarge(
            f"exhaustive scans support 1 <= n <= {MAX_EXHAUSTIVE_DIM}, got {n}")


def _masks(lo: int, hi: int) -> np.ndarray:
    return np.arange(lo, hi, dtype=np.uint64)


class _Stats:
    """Per-chunk vectorized statistics shared by the suites."""

    def __init__(self, masks: np.ndarray, n: int):
        self.n = n
        self.masks = masks
        self.k = batch.sizes(masks)
        self.dirs = batch.direction_boundaries(masks, n)
        self.bnd = self.dirs.sum(axis=1)
        self.ups = batch.upper_sizes(masks, n)
        self.eps = batch.excess(self.bnd, self.k, n)

    def select(self, keep: np.ndarray) -> "_Stats":
        out = object.__new__(_Stats)
        out.n = self.n
        for name in ("masks", "k", "dirs", "bnd", "ups", "eps"):
            setattr(out, name, getattr(self, name)[keep])
        return out


def _power_of_two(k: np.ndarray) -> np.ndarray:
    return (k > 0) & ((k & (k - 1)) == 0)


def _log2_int(k: np.ndarray) -> np.ndarray:
    return np.log2(np.maximum(k, 1)).round().astype(np.int64)


def _bucket_min(part: Partial, keys, values, masks, exact=None, **extras):
    """Add one bucket per distinct key, keeping the minimum of ``exact``
    (falls back to ``values``) and reporting ``values`` at that witness."""
    exact = values if exact is None else exact
    for key in np.unique(keys):
        sel = keys == key
        ex = exact[sel]
        best = ex.min()
        cand = masks[sel][ex == best]
        w = int(cand.min())
        val = values[sel][masks[sel] == w][0]
        part.add(int(key), int(sel.sum()), _Ranked(best, val), w,
                 **{name: int(arr[sel].sum()) for name, arr in extras.items()})


class _Ranked:
    """Bucket value ordered by an exact key but reported as a float."""

    __slots__ = ("rank", "value")

    def __init__(self, rank, value):
        self.rank, self.value = rank, float(value)

    def __lt__(self, other):
        return self.rank < other.rank

    def __gt__(self, other):
        return self.rank > other.rank

    def __eq__(self, other):
        return self.rank == other.rank

    def __reduce__(self):
        return (_Ranked, (self.rank, self.value))


# ---------------------------------------------------------------- suites

def _suite_eq1(st: _Stats, part: Partial) -> None:
    n = st.n
    st = st.select(st.k > 0)
    lower = st.k * (n - np.log2(st.k.astype(float)))
    bad = st.bnd < lower - GUARD
    for m, b, lo in zip(st.masks[bad], st.bnd[bad], lower[bad]):
        part.violations.append((int(m), "eq1:lower-bound", float(lo), int(b)))
    pow2 = _power_of_two(st.k)
    equal = pow2 & (st.bnd == st.k * (n - _log2_int(st.k)))
    _, cube_masks, _ = batch.subcube_table(n)
    is_cube = np.isin(st.masks, cube_masks)
    for m in st.masks[equal & ~is_cube]:
        part.violations.append((int(m), "eq1:equality-not-subcube", "subcube", "not a subcube"))
    for m in st.masks[is_cube & ~equal]:
        part.violations.append((int(m), "eq1:subcube-not-equality", "equality", "strict"))
    part.counters["sets"] += int(st.masks.size)
    part.counters["equality_count"] += int(equal.sum())
    _bucket_min(part, st.k, st.eps, st.masks, exact=st.bnd, equality=equal)


def _suite_handshake(st: _Stats, part: Partial) -> None:
    inner = batch.internal_edges(st.masks, st.n)
    bad = 2 * inner + st.bnd != st.n * st.k
    for m, e, b, k in zip(st.masks[bad], inner[bad], st.bnd[bad], st.k[bad]):
        part.violations.append((int(m), "handshake", int(st.n * k), int(2 * e + b)))
    part.counters["sets"] += int(st.masks.size)
    _bucket_min(part, st.k, st.bnd.astype(float), st.masks, exact=st.bnd)


def _gammas(st: _Stats) -> np.ndarray:
    small = np.minimum(st.ups, st.k[:, None] - st.ups)
    return small / st.k[:, None]


def _suite_lemma_cases(st: _Stats, part: Partial) -> None:
    st = st.select(st.k > 0)
    gam = _gammas(st)
    eps = st.eps[:, None]
    case1 = gam <= eps / CASE1_SLOPE + GUARD
    case2 = gam > 0.5 - eps - GUARD
    bad = ~(case1 | case2)
    rows, cols = np.nonzero(bad)
    for r, c in zip(rows, cols):
        part.violations.append((int(st.masks[r]), f"lemma-cases:i={c + 1}",
                                "case 1 or case 2", float(gam[r, c])))
    part.counters["sets"] += int(st.masks.size)
    part.counters["pairs"] += int(gam.size)
    _bucket_min(part, st.k, st.eps, st.masks, exact=st.bnd,
                case1=case1.sum(axis=1), case2=case2.sum(axis=1),
                both=(case1 & case2).sum(axis=1))


def _suite_remark(st: _Stats, part: Partial) -> None:
    st = st.select(st.k > 0)
    k = st.k[:, None]
    small = np.minimum(st.ups, k - st.ups)
    gam = small / k
    eps = st.eps[:, None]
    thr = eps / CASE1_SLOPE
    case1 = gam <= thr + GUARD
    case2 = gam > 0.5 - eps - GUARD
    # case 1: ∂_i >= (1 - 2γ)|A| exactly, and >= (1 - 2 thr)|A| in floats
    bad1 = case1 & ((st.dirs < k - 2 * small) | (st.dirs < (1 - 2 * thr) * k - GUARD))
    # case 2: ∂_i < 3 ε₀ |A|
    bad2 = case2 & ~(st.dirs < 3 * eps * k + GUARD)
    for label, bad, expected in (("case1-large", bad1, "beta_i >= 2(1-2 gamma_i)p"),
                                 ("case2-small", bad2, "beta_i < 6 eps0 p")):
        rows, cols = np.nonzero(bad)
        for r, c in zip(rows, cols):
            part.violations.append((int(st.masks[r]), f"remark-influences:{label}:i={c + 1}",
                                    expected, int(st.dirs[r, c])))
    part.counters["sets"] += int(st.masks.size)
    part.counters["case1_checks"] += int(case1.sum())
    part.counters["case2_checks"] += int(case2.sum())
    _bucket_min(part, st.k, st.eps, st.masks, exact=st.bnd,
                case1=case1.sum(axis=1), case2=case2.sum(axis=1))


def _xlog2(x: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, -x * np.log2(np.where(x > 0, x, 1.0)), 0.0)


def _suite_theorem5(st: _Stats, part: Partial) -> None:
    st = st.select(_power_of_two(st.k))
    if st.masks.size == 0:
        return
    sd, _ = batch.exact_fit(st.masks, st.n)
    delta = sd / st.k
    applies = delta <= 1 / math.e
    lhs = _xlog2(delta)
    bad = applies & (lhs > st.eps + GUARD)
    for m, l, e in zip(st.masks[bad], lhs[bad], st.eps[bad]):
        part.violations.append((int(m), "theorem5", f"<= {float(e)!r} + 1e-9", float(l)))
    part.counters["sets"] += int(st.masks.size)
    part.counters["checked"] += int(applies.sum())
    slack = st.eps - lhs
    sel = applies
    if sel.any():
        _bucket_min(part, st.k[sel], slack[sel], st.masks[sel], checked=np.ones(int(sel.sum()), int))


_SUITE_FNS = {
    "eq1": _suite_eq1,
    "handshake": _suite_handshake,
    "lemma-cases": _suite_lemma_cases,
    "remark-influences": _suite_remark,
    "theorem5": _suite_theorem5,
}


# ---------------------------------------------------------------- driver

def _chunk_job(args) -> Partial:
    kind, n, params, lo, hi = args
    part = Partial()
    st = _Stats(_masks(lo, hi), n)
    _CHUNK_FNS[kind](st, part, **params)
    return part


def _run(kind: str, n: int, params: dict, workers: int = 1, progress: bool = True) -> Partial:
    if workers < 1:
        raise ParameterError("workers must be >= 1")
    total = 1 << (1 << n)
    jobs = [(kind, n, params, lo, min(lo + CHUNK, total)) for lo in range(1, total, CHUNK)]
    merged = Partial()
    done = 0
    if workers == 1:
        results = map(_chunk_job, jobs)
        pool = None
    else:
        pool = ProcessPoolExecutor(max_workers=workers)
        results = pool.map(_chunk_job, jobs, chunksize=max(1, len(jobs) // (4 * workers)))
    try:
        for (_, _, _, lo, hi), part in zip(jobs, results):
            merged.merge(part)
            before, done = done, done + (hi - lo)
            if progress and done // PROGRESS_EVERY > before // PROGRESS_EVERY:
                print(f"[{kind} n={n}] {done}/{total - 1} sets", file=sys.stderr, flush=True)
    finally:
        if pool is not None:
            pool.shutdown()
    merged.violations.sort(key=lambda v: (v[0], v[1]))
    return merged


def _rows(part: Partial, n: int, key_fn: Callable[[object], dict]) -> list:
    rows = []
    for key in sorted(part.buckets):
        count, value, mask, extra = part.buckets[key]
        if isinstance(value, _Ranked):
            value = value.value
        rows.append(Row(key_fn(key), count, value,
                        None if mask is None else _hex(mask, n), dict(sorted(extra.items()))))
    return rows


def _violations(part: Partial, n: int) -> list:
    return [Violation(_hex(m, n), check, exp, act) for m, check, exp, act in part.violations]


def verify_suite(n: int, suite: str, workers: int = 1, progress: bool = True) -> ScanReport:
    """Exhaustive check of one theorem-backed statement over all nonempty sets."""
    if suite not in _SUITE_FNS:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    _check_dim(n)
    part = _run(f"suite:{suite}", n, {}, workers, progress)
    summary = {"violations": len(part.violations), **dict(sorted(part.counters.items()))}
    return ScanReport(
        scan_id=f"verify/{suite}", n=n, parameters={"suite": suite},
        rows=_rows(part, n, lambda k: {"size": k}),
        violations=_violations(part, n), summary=summary)


# ---------------------------------------------------------------- f-table

def extremal_exists(n: int, t: int, dstar: Fraction) -> bool:
    """Whether the near-subcube construction realizes δ* with |A| = 2^t in Q_n."""
    if dstar <= 0 or dstar.numerator != 1:
        return False
    den = dstar.denominator
    if den & (den - 1) or den < 2:
        return False
    M = den.bit_length()  # δ* = 2^-(M-1)
    return 1 <= n - t and 2 <= M <= t


def conjectured_f(dstar: Fraction) -> Optional[float]:
    """j 2^-j when δ* = 2^-j, else None."""
    den = dstar.denominator
    if dstar.numerator != 1 or den < 2 or den & (den - 1):
        return None
    j = den.bit_length() - 1
    return j / den


def _chunk_ftable(st: _Stats, part: Partial, grid: Sequence) -> None:
    st = st.select(_power_of_two(st.k))
    if st.masks.size == 0:
        return
    sd, _ = batch.exact_fit(st.masks, st.n)
    t = _log2_int(st.k)
    for gi, d in enumerate(grid):
        d = Fraction(d)
        sel = sd * d.denominator >= d.numerator * st.k
        if not sel.any():
            continue
        keys = t[sel] * len(grid) + gi
        _bucket_min(part, keys, st.eps[sel], st.masks[sel], exact=st.bnd[sel])


def f_table(n: int, grid: Iterable = DEFAULT_GRID, workers: int = 1,
            progress: bool = True) -> ScanReport:
    """Minimum excess among sets of size 2^t whose exact subcube distance is >= δ*|A|."""
    _check_dim(n)
    grid = tuple(Fraction(d) for d in grid)
    for d in grid:
        if not 0 < d <= 1:
            raise DomainError(f"δ* must lie in (0, 1], got {d}")
    part = _run("ftable", n, {"grid": grid}, workers, progress)
    rows = _rows(part, n, lambda key: {"t": key // len(grid), "delta": grid[key % len(grid)]})
    violations = _violations(part, n)
    f_est = {}
    for r in rows:
        d, t = r.key["delta"], r.key["t"]
        c = conjectured_f(d)
        r.extra["conjectured"] = c
        if extremal_exists(n, t, d):
            bound = float(-d * math.log2(d))
            r.extra["construction_value"] = bound
            if not r.value <= bound + GUARD:
                violations.append(Violation(r.witness, f"ftable:achievability t={t} delta={d}",
                                            f"<= {bound!r}", r.value))
        cur = f_est.get(d)
        if cur is None or r.value < cur[0]:
            f_est[d] = (r.value, r.witness)
    constants = {
        str(d): {"f_estimate": v, "witness": w, "conjectured": conjectured_f(d)}
        for d, (v, w) in sorted(f_est.items())
    }
    return ScanReport("scan/f-table", n, {"grid": list(grid)}, rows, violations,
                      constants, {"violations": len(violations), **dict(part.counters)})


# ---------------------------------------------------------------- constants

def _chunk_constant(st: _Stats, part: Partial, which: str) -> None:
    n = st.n
    full = 1 << n
    st = st.select((st.k > 0) & (st.k < full))
    half = 1 << (n - 1)
    beta = np.sort(st.dirs / half, axis=1)
    p = st.k / full
    if which == "talagrand":
        flagged = (st.dirs == half).any(axis=1)
        with np.errstate(divide="ignore"):
            terms = np.where((beta > 0) & (beta < 1),
                             beta / -np.log2(np.where(beta > 0, beta, 0.5)), 0.0)
        ratio = terms.sum(axis=1) / (p * (1 - p))
        ok = ~flagged
    else:
        if n < 2:
            raise DomainError("the KKL bound is vacuous for n < 2")
        flagged = np.zeros(st.k.size, dtype=bool)
        ratio = (beta ** 2).sum(axis=1) * n / (p ** 2 * (1 - p) ** 2 * math.log(n) ** 2)
        ok = ~flagged
    part.counters["flagged"] += int(flagged.sum())
    part.counters["sets"] += int(st.k.size)
    if ok.any():
        _bucket_min(part, st.k[ok], ratio[ok], st.masks[ok])
    for k in np.unique(st.k[flagged]):
        part.add(int(k), 0, flagged=int((st.k[flagged] == k).sum()))


def constant_scan(n: int, which: str, workers: int = 1, progress: bool = True,
                  reference: Optional[float] = None) -> ScanReport:
    """Smallest Talagrand or KKL ratio over all sets with 0 < |A| < 2^n."""
    if which not in ("talagrand", "kkl"):
        raise ParameterError(f"which must be 'talagrand' or 'kkl', got {which!r}")
    _check_dim(n)
    if which == "kkl" and n < 2:
        raise DomainError("the KKL bound is vacuous for n < 2")
    part = _run(f"constant:{which}", n, {"which": which}, workers, progress)
    rows = _rows(part, n, lambda k: {"size": k})
    ref = reference if reference is not None else (2.0 if which == "talagrand" else 4.0)
    valued = [r for r in rows if r.value is not None]
    best = min(valued, key=lambda r: (r.value, r.witness)) if valued else None
    constants = {
        "min_ratio": None if best is None else best.value,
        "witness": None if best is None else best.witness,
        "reference": ref,
        "min_ratio_at_least_reference": None if best is None else best.value >= ref,
    }
    return ScanReport(f"scan/{which}", n, {"which": which}, rows, [], constants,
                      dict(sorted(part.counters.items())))


# ---------------------------------------------------------------- probes

def _chunk_density(st: _Stats, part: Partial, l_primes: Sequence) -> None:
    n = st.n
    full = 1 << n
    st = st.select((st.k > 0) & (2 * st.k <= full))
    if st.masks.size == 0:
        return
    inter = batch.subcube_intersections(st.masks, n)
    _, _, codims = batch.subcube_table(n)
    log_inv_p = n - np.log2(st.k.astype(float))
    L = np.ceil(st.bnd / (st.k * log_inv_p) - GUARD).astype(np.int64)
    # |A ∩ C| 2^codim / |A| = density / p
    scaled = inter << codims[None, :]
    for li, lp in enumerate(l_primes):
        cap = np.minimum(np.ceil(lp * log_inv_p - GUARD), n).astype(np.int64)
        allowed = codims[None, :] <= cap[:, None]
        best = np.where(allowed, scaled, -1).max(axis=1)
        ratio = best / st.k
        keys = li * (n * n + 1) + L
        # maximum density is the statistic; the bucket keeps its worst (minimum) case
        _bucket_min(part, keys, ratio, st.masks)


def conjecture_probe(n: int, which: str, l_primes: Sequence = (1, 2, 3), workers: int = 1,
                     progress: bool = True) -> ScanReport:
    """Report statistics relevant to the open conjectures; never asserts."""
    _check_dim(n)
    if which == "allj":
        grid = tuple(Fraction(1, 1 << j) for j in range(1, max(n, 2)))
        table = f_table(n, grid, workers, progress)
        rows = []
        for j, d in enumerate(grid, start=1):
            est = table.constants.get(str(d))
            value = None if est is None else est["f_estimate"]
            count = sum(r.count for r in table.rows if r.key["delta"] == d)
            rows.append(Row({"j": j, "delta": d}, count, value,
                            None if est is None else est["witness"],
                            {"conjectured": j / (1 << j),
                             "matches": None if value is None
                             else abs(value - j / (1 << j)) <= GUARD}))
        return ScanReport("probe/allj", n, {"grid": list(grid)}, rows, table.violations,
                          {}, {"violations": len(table.violations)})
    if which == "density":
        l_primes = tuple(l_primes)
        part = _run("density", n, {"l_primes": l_primes}, workers, progress)
        stride = n * n + 1
        rows = _rows(part, n, lambda key: {"L_prime": l_primes[key // stride],
                                           "L_bucket": key % stride})
        for r in rows:
            r.extra["empirical_delta"] = r.value - 1
        return ScanReport("probe/density", n, {"l_primes": list(l_primes)}, rows, [], {},
                          dict(part.counters))
    raise ParameterError(f"which must be 'allj' or 'density', got {which!r}")


_CHUNK_FNS = {f"suite:{name}": (lambda fn: lambda st, part: fn(st, part))(fn)
              for name, fn in _SUITE_FNS.items()}
_CHUNK_FNS["ftable"] = _chunk_ftable
_CHUNK_FNS["density"] = _chunk_density
_CHUNK_FNS["constant:talagrand"] = _chunk_constant
_CHUNK_FNS["constant:kkl"] = _chunk_constant


# ---------------------------------------------------------------- random

def stream_seed(master: int, unit: int) -> int:
    """Seed of work unit ``unit``: master XOR unit, within 64 bits."""
    return (int(master) ^ int(unit)) & ((1 << 64) - 1)


def random_perturbed_subcube(n: int, t: int, m: int, seed: int) -> tuple[CubeSet, Subcube]:
    """A random t-dimensional subcube with m distinct vertices toggled.

    Sampling order from ``numpy.random.default_rng(seed)``: the n-t fixed
    coordinates (without replacement), their values, then the m toggled
    vertices (without replacement, uniform over the whole cube).
    """
    if not 0 <= t <= n:
        raise ParameterError(f"need 0 <= t <= n, got t={t}, n={n}")
    if not 0 <= m <= (1 << t) // 2:
        raise ParameterError(f"need 0 <= m <= 2^(t-1), got m={m}")
    rng = np.random.default_rng(seed)
    coords = sorted(int(c) + 1 for c in rng.choice(n, size=n - t, replace=False))
    values = [int(x) for x in rng.integers(0, 2, size=n - t)]
    planted = Subcube(n, tuple(zip(coords, values)))
    bits = realize_subcube(planted).bits
    for v in rng.choice(1 << n, size=m, replace=False):
        bits ^= 1 << int(v)
    return CubeSet(n, bits), planted


def _random_handshake_job(args):
    n, count, seed, unit = args
    rng = np.random.default_rng(stream_seed(seed, unit))
    bad = []
    if n >= 6:
        words = rng.integers(0, 1 << 64, size=(count, (1 << n) // 64), dtype=np.uint64,
                             endpoint=False)
        bnd, inner = batch.words_direction_counts(words, n)
        k = batch.popcount(words).sum(axis=1)
        lhs = 2 * inner.sum(axis=1) + bnd.sum(axis=1)
        for r in np.flatnonzero(lhs != n * k):
            bad.append((unit, int(r), int(n * k[r]), int(lhs[r])))
    else:
        masks = rng.integers(0, 1 << (1 << n), size=count, dtype=np.uint64, endpoint=False)
        k = batch.sizes(masks)
        lhs = 2 * batch.internal_edges(masks, n) + batch.direction_boundaries(masks, n).sum(axis=1)
        for r in np.flatnonzero(lhs != n * k):
            bad.append((unit, int(r), int(n * k[r]), int(lhs[r])))
    return count, int(k.sum()), bad


def random_handshake(n: int, count: int, seed: int = 0, workers: int = 1,
                     unit: int = 1000) -> ScanReport:
    """2E(A) + |∂A| = n|A| on uniformly random sets (each vertex kept w.p. 1/2)."""
    if not 1 <= n <= 24:
        raise DimensionTooLarge("random scans support 1 <= n <= 24")
    units = [(n, min(unit, count - s), seed, i) for i, s in enumerate(range(0, count, unit))]
    if workers == 1:
        results = list(map(_random_handshake_job, units))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_random_handshake_job, units))
    violations = [Violation(f"unit={u},row={r}", "handshake", e, a)
                  for _, _, bad in results for u, r, e, a in bad]
    summary = {"sets": sum(c for c, _, _ in results),
               "total_size": sum(s for _, s, _ in results),
               "violations": len(violations)}
    return ScanReport("random/handshake", n, {"count": count, "seed": seed, "unit": unit},
                      [], violations, {}, summary)
