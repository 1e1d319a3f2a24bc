import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cubeiso import batch, cube, fitting
from cubeiso.analytic import CASE1_SLOPE, BoundConfig
from cubeiso.constructions import extremal_near_cube, harper_set, tribes
from cubeiso.cube import CubeSet, Subcube
from cubeiso.errors import CoordinateOutOfRange, DimensionTooLarge, EmptySet, NoCase1
from cubeiso.fitting import decompose, dense_subcube, fit_exact, fit_greedy, junta_distance

C37 = harper_set(3, 7)
T22 = tribes(2, 2)


def sets(min_n=1, max_n=5, nonempty=True):
    lo = 1 if nonempty else 0
    return st.integers(min_n, max_n).flatmap(
        lambda n: st.integers(lo, (1 << (1 << n)) - 1).map(lambda b: CubeSet(n, b)))


# ------------------------------------------------------------- exact

def test_fit_exact_examples():
    S = Subcube(4, ((2, 1), (4, 0)))
    r = fit_exact(cube.realize_subcube(S))
    assert (r.cube, r.symdiff, r.delta, r.method) == (S, 0, 0, "exact")
    r = fit_exact(C37)
    assert r.cube.codim == 0 and r.symdiff == 1 and r.delta == Fraction(1, 7)
    r = fit_exact(T22)
    assert r.cube.fixed == ((1, 0), (2, 0)) and r.symdiff == 3 and r.delta == Fraction(3, 7)


def test_fit_exact_errors():
    with pytest.raises(EmptySet):
        fit_exact(cube.make_set(3, []))
    with pytest.raises(DimensionTooLarge):
        fit_exact(cube.make_set(15, [0]))


@settings(max_examples=150)
@given(sets(1, 5))
def test_fit_exact_matches_oracle(A):
    sd, codim, fixed = oracles.fit_exact(A.n, set(A.vertices()))
    r = fit_exact(A)
    assert (r.symdiff, r.cube.codim, r.cube.fixed) == (sd, codim, fixed)
    assert r.symdiff == cube.subcube_distance(A, r.cube)


def test_ternary_counts_against_oracle():
    rng = np.random.default_rng(3)
    for n in (1, 2, 3, 5):
        A = CubeSet(n, int(rng.integers(0, 1 << min(1 << n, 62))))
        counts = fitting.subcube_counts(A.membership(), n)
        for idx in range(3 ** n):
            S = fitting.decode_subcube(n, idx)
            assert counts[idx] == (A.bits & cube.realize_subcube(S).bits).bit_count()
            assert fitting.codim_table(n)[idx] == S.codim


def test_fit_exact_zero_iff_subcube_n4():
    sd, idx = batch.exact_fit(np.arange(1, 1 << 16, dtype=np.uint64), 4)
    zero = {b for b, d in zip(range(1, 1 << 16), sd) if d == 0}
    subcubes = {cube.realize_subcube(Subcube(4, f)).bits for f, _ in oracles.all_subcubes(4)}
    assert zero == subcubes


def test_batch_exact_fit_agrees_with_fit_exact():
    rng = np.random.default_rng(11)
    masks = rng.integers(1, 1 << 16, size=400, dtype=np.uint64)
    sd, idx = batch.exact_fit(masks, 4)
    cubes, _, _ = batch.subcube_table(4)
    for m, d, i in zip(masks, sd, idx):
        r = fit_exact(CubeSet(4, int(m)))
        assert r.symdiff == d and r.cube == cubes[i]


def test_fit_exact_n14_runs():
    A = cube.realize_subcube(Subcube(14, ((3, 1), (9, 0))))
    A = CubeSet(14, A.bits ^ 0b1011)
    r = fit_exact(A)
    assert r.cube == Subcube(14, ((3, 1), (9, 0))) and r.symdiff == 3


# ------------------------------------------------------------- greedy

def test_greedy_recovers_subcubes():
    for n in range(1, 6):
        for fixed, _ in oracles.all_subcubes(n):
            S = Subcube(n, fixed)
            r = fit_greedy(cube.realize_subcube(S))
            assert r.cube == S and r.delta == 0
            assert [s.gamma for s in r.trace] == [0] * len(fixed)
            assert sorted(s.coordinate for s in r.trace) == [i for i, _ in fixed]


def test_greedy_extremal_example():
    A, C = extremal_near_cube(6, 1, 3)
    r = fit_greedy(A, heuristic=True)
    assert r.cube == C == Subcube(6, ((6, 0),))
    assert r.delta == Fraction(1, 4)
    assert fit_exact(A).cube == C
    step, = r.trace
    assert (step.coordinate, step.value, step.dimension) == (6, 0, 6)
    # with the stability threshold raised past ε0 = 1/2 the strict run agrees
    assert fit_greedy(A, BoundConfig(epsilon_c=0.6)).cube == C


def test_greedy_stops_immediately_on_c37():
    r = fit_greedy(C37, heuristic=True)
    assert r.cube.codim == 0 and r.delta == Fraction(1, 7) and r.trace == ()
    assert fit_greedy(C37, BoundConfig(epsilon_c=0.3)).delta == Fraction(1, 7)


def test_greedy_strict_failures():
    with pytest.raises(NoCase1):
        fit_greedy(T22)                       # ε0 ≈ 0.52 above the 0.05 default
    A, _ = extremal_near_cube(6, 1, 3)
    with pytest.raises(NoCase1):
        fit_greedy(A, BoundConfig(epsilon_c=0.6), case1_threshold=0.0)
    r = fit_greedy(T22, heuristic=True)
    assert r.method == "greedy" and r.symdiff >= fit_exact(T22).symdiff
    with pytest.raises(EmptySet):
        fit_greedy(cube.make_set(3, []))


def test_greedy_threshold_override():
    r = fit_greedy(T22, BoundConfig(epsilon_c=0.9), case1_threshold=0.5)
    assert r.trace and r.trace[0].gamma <= Fraction(1, 2)


@settings(max_examples=150)
@given(sets(1, 5))
def test_greedy_matches_oracle(A):
    n = A.n
    s = set(A.vertices())
    eps0 = cube.excess(A)
    ref = oracles.greedy(n, s, eps0, strict=False)
    assert fit_greedy(A, heuristic=True).cube.fixed == ref
    strict = oracles.greedy(n, s, eps0, strict=True)
    cfg = BoundConfig(epsilon_c=0.99)
    if strict is None:
        with pytest.raises(NoCase1):
            fit_greedy(A, cfg)
    elif eps0 <= 0.99:
        assert fit_greedy(A, cfg).cube.fixed == strict


def test_greedy_never_beats_exact_n4():
    for bits in range(1, 1 << 16):
        A = CubeSet(4, bits)
        assert fit_greedy(A, heuristic=True).symdiff >= fit_exact(A).symdiff


def test_three_excess_bound_uncapped_has_large_excess_violators():
    # without the ε0 <= epsilon_c hypothesis the 3ε0 bound fails, but only for ε0 > 1/2
    violators = 0
    for bits in range(1, 1 << 16):
        A = CubeSet(4, bits)
        eps0 = cube.excess(A)
        if eps0 <= 1e-12:
            continue
        r = fit_greedy(A, heuristic=True)
        # the case-1 condition held at every step, only the ε0 cap is lifted
        assert all(s.gamma <= eps0 / CASE1_SLOPE for s in r.trace)
        if not r.symdiff < 3 * eps0 * A.size:
            violators += 1
            assert eps0 > 0.5
    assert violators > 0


# ------------------------------------------------------------- decomposition

def test_decompose():
    A, C = extremal_near_cube(4, 1, 2)
    d = decompose(A, C)
    assert (d.N, d.B_size, d.D_size) == (1, 2, 2)
    assert d.phi == d.psi == Fraction(1, 4)
    assert d.bound == cube.edge_boundary(A) == 12
    d = decompose(T22, Subcube(4, ((1, 0), (2, 0))))
    assert d.B_size + d.D_size == 3 and d.B_size == 0


@settings(max_examples=100)
@given(sets(2, 6), st.data())
def test_decompose_invariants(A, data):
    fixed = data.draw(st.lists(st.tuples(st.integers(1, A.n), st.integers(0, 1)),
                               unique_by=lambda p: p[0]))
    C = Subcube(A.n, tuple(sorted(fixed)))
    d = decompose(A, C)
    assert d.B_size + d.D_size == cube.subcube_distance(A, C)
    assert d.phi >= 0 and d.psi >= 0


# ------------------------------------------------------------- juntas

def test_junta_examples():
    assert junta_distance(T22, [1, 2, 3, 4]) == 0
    assert junta_distance(T22, {1, 2}) == 3
    dictator = cube.realize_subcube(Subcube(4, ((1, 1),)))
    assert junta_distance(dictator, [1]) == 0
    assert junta_distance(dictator, []) == 8
    with pytest.raises(CoordinateOutOfRange):
        junta_distance(T22, [5])


def _junta_oracle(n, s, J):
    total = 0
    for vals in itertools.product((0, 1), repeat=len(J)):
        fiber = {v for v in range(2 ** n) if all(oracles.coord(v, j) == a for j, a in zip(J, vals))}
        inside = len(fiber & s)
        total += min(inside, len(fiber) - inside)
    return total


@settings(max_examples=100)
@given(sets(1, 6, nonempty=False), st.data())
def test_junta_oracle_and_monotone(A, data):
    J = sorted(data.draw(st.sets(st.integers(1, A.n))))
    extra = sorted(set(J) | data.draw(st.sets(st.integers(1, A.n))))
    dj = junta_distance(A, J)
    assert dj == _junta_oracle(A.n, set(A.vertices()), J)
    assert junta_distance(A, extra) <= dj


# ------------------------------------------------------------- dense subcubes

def test_dense_examples():
    S, d = dense_subcube(T22, 0)
    assert S.codim == 0 and d == Fraction(7, 16)
    dictator = cube.realize_subcube(Subcube(4, ((1, 1),)))
    assert dense_subcube(dictator, 1) == (Subcube(4, ((1, 1),)), 1)
    assert dense_subcube(T22, 2) == (Subcube(4, ((1, 0), (2, 0))), 1)
    assert dense_subcube(cube.make_set(3, []), 2) == (Subcube(3, ()), 0)


def _dense_oracle(n, s, max_codim):
    best = None
    for fixed, verts in oracles.all_subcubes(n):
        if len(fixed) > max_codim:
            continue
        key = (-Fraction(len(s & verts), len(verts)), len(fixed), fixed)
        best = key if best is None or key < best else best
    return best[2], -best[0]


@settings(max_examples=100)
@given(sets(1, 5, nonempty=False), st.integers(0, 5))
def test_dense_oracle_and_monotone(A, c):
    c = min(c, A.n)
    S, d = dense_subcube(A, c)
    assert (S.fixed, d) == _dense_oracle(A.n, set(A.vertices()), c)
    assert d >= Fraction(A.size, 1 << A.n)
    if c < A.n:
        assert dense_subcube(A, c + 1)[1] >= d


def test_dense_large_n_path_agrees(monkeypatch):
    rnd = random.Random(5)
    cases = [CubeSet(n, rnd.getrandbits(1 << n)) for n in (3, 4, 5, 6) for _ in range(8)]
    expected = [(A, c, dense_subcube(A, c)) for A in cases for c in range(A.n + 1)]
    monkeypatch.setattr(fitting, "EXACT_MAX_DIM", 0)
    for A, c, want in expected:
        assert dense_subcube(A, c) == want
