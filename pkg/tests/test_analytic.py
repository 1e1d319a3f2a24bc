import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cubeiso import analytic, cube
from cubeiso.analytic import (
    F,
    BoundConfig,
    binary_entropy,
    corollary_bound,
    decomposition_bound,
    delta0,
    delta1,
    g,
    h,
    iso_lower_bound,
    kkl_functional,
    talagrand_functional,
)
from cubeiso.constructions import extremal_near_cube, tribes
from cubeiso.cube import Subcube
from cubeiso.errors import DomainError

# reference values from the hand-written bisection oracle (200 halvings)
DELTA1_AT_0_2 = 0.04456327
DELTA0_AT_0_05 = 0.01776117
G_MAX = 0.0663422307
G_ARGMAX = 0.0459849301


def test_config_validation():
    c = BoundConfig()
    assert (c.epsilon_c, c.root_tol, c.talagrand_K, c.kkl_C) == (0.05, 1e-12, 2.0, 4.0)
    for bad in (0, 1, -0.1):
        with pytest.raises(DomainError):
            BoundConfig(epsilon_c=bad)
    with pytest.raises(DomainError):
        BoundConfig(root_tol=0)


# ------------------------------------------------------------- entropy family

def test_entropy_examples():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0) == 0.0 == binary_entropy(1)
    assert binary_entropy(0.2) == pytest.approx(0.721928, abs=1e-6)
    for bad in (-0.1, 1.1):
        with pytest.raises(DomainError):
            binary_entropy(bad)


def test_F_examples():
    assert F(0.2) == pytest.approx(math.log2(5) - 2, abs=1e-15)
    assert F(0) == 0.0 and F(0.5) == 0.0
    assert F(0.1) == pytest.approx(0.268996, abs=1e-6)
    assert F(0.1) >= analytic.CASE1_SLOPE * 0.1
    with pytest.raises(DomainError):
        F(0.6)


def test_F_maximum_at_one_fifth():
    grid = np.linspace(0, 0.5, 5001)
    vals = [F(x) for x in grid]
    assert grid[int(np.argmax(vals))] == pytest.approx(0.2, abs=1e-4)


def test_h_g_examples():
    assert h(1 / math.e) == pytest.approx(1 / (math.e * math.log(2)), abs=1e-15)
    assert h(1 / math.e) == pytest.approx(0.530738, abs=1e-6)
    assert h(0.25) == 0.5
    assert analytic.G_ARGMAX == pytest.approx(G_ARGMAX, abs=1e-8)
    assert g(analytic.G_ARGMAX) == pytest.approx(G_MAX, abs=1e-8)
    assert analytic.G_MAX == pytest.approx(g(analytic.G_ARGMAX), abs=1e-15)
    for bad in (0, -1, 1.5):
        with pytest.raises(DomainError):
            h(bad)
        with pytest.raises(DomainError):
            g(bad)


def test_g_maximum_location_by_grid():
    grid = np.linspace(1e-6, 0.2, 200001)
    vals = -grid * np.log2(grid) - 3 * grid
    i = int(np.argmax(vals))
    assert grid[i] == pytest.approx(G_ARGMAX, abs=1e-5)
    assert vals[i] == pytest.approx(G_MAX, abs=1e-9)


def test_entropy_properties_on_grid():
    xs = np.linspace(0, 1, 1001)
    H = np.array([binary_entropy(x) for x in xs])
    assert np.allclose(H, H[::-1], atol=1e-15)
    assert np.all(H[1:-1] >= (H[:-2] + H[2:]) / 2 - 1e-15)
    for eta in np.linspace(0, 0.5, 501):
        assert 1 - binary_entropy(0.5 - eta) <= 2 * eta + 1e-12
    for gam in np.linspace(0, 0.2, 2001):
        assert F(gam) >= analytic.CASE1_SLOPE * gam - 1e-12


def test_h_monotone_branches():
    left = [h(x) for x in np.linspace(1e-6, 1 / math.e, 2000)]
    right = [h(x) for x in np.linspace(1 / math.e, 1, 2000)]
    assert all(a < b for a, b in zip(left, left[1:]))
    assert all(a > b for a, b in zip(right, right[1:]))


# ------------------------------------------------------------- roots

@pytest.mark.parametrize("j", range(2, 21))
def test_delta1_dyadic(j):
    assert abs(delta1(j * 2.0 ** -j) - 2.0 ** -j) <= 1e-12


def test_delta1_examples():
    assert delta1(0.5) == pytest.approx(0.25, abs=1e-12)
    assert delta1(3 / 8) == pytest.approx(1 / 8, abs=1e-12)
    ref = oracles.bisect(lambda x: -x * math.log2(x) if x else 0.0, 0.0, 1 / math.e, 0.2)
    assert ref == pytest.approx(DELTA1_AT_0_2, abs=1e-8)
    assert delta1(0.2) == pytest.approx(ref, abs=1e-12)
    for bad in (0, -0.1, 0.531):
        with pytest.raises(DomainError):
            delta1(bad)


def test_delta0_examples():
    fn = lambda x: (-x * math.log2(x) if x else 0.0) - 3 * x
    ref = oracles.bisect(fn, 0.0, G_ARGMAX, 0.05)
    assert ref == pytest.approx(DELTA0_AT_0_05, abs=1e-8)
    assert abs(delta0(0.05) - ref) <= 1e-10
    with pytest.raises(DomainError):
        delta0(0.1)
    with pytest.raises(DomainError):
        delta0(0.0)


def test_delta0_asymptotics():
    # δ0(ε) log2(1/ε) / ε -> 1; the error shrinks like log log(1/ε) / log(1/ε)
    prev = None
    for e in (1e-16, 1e-32, 1e-64, 1e-128, 1e-256):
        r = delta0(e, BoundConfig(root_tol=e * 1e-6)) * math.log2(1 / e) / e
        err = abs(r - 1)
        assert prev is None or err < prev
        prev = err
    assert prev < 0.02


@settings(max_examples=200)
@given(st.floats(1e-6, analytic.H_MAX - 1e-9), st.floats(1e-6, analytic.G_MAX - 1e-9))
def test_roots_invert(e1, e0):
    x1 = delta1(e1)
    assert 0 < x1 < 1 / math.e
    assert abs(h(x1) - e1) <= 1e-10
    x0 = delta0(e0)
    assert 0 < x0 <= analytic.G_ARGMAX
    assert abs(g(x0) - e0) <= 1e-10


def test_roots_monotone():
    e = np.linspace(0.001, 0.06, 60)
    d0 = [delta0(x) for x in e]
    d1 = [delta1(x) for x in e]
    assert all(a < b for a, b in zip(d0, d0[1:]))
    assert all(a < b for a, b in zip(d1, d1[1:]))


# ------------------------------------------------------------- bounds

def test_bound_examples():
    assert iso_lower_bound(4, 8) == 8.0
    assert corollary_bound(10, 5, 0.25) == 176.0
    for n, t in [(5, 2), (8, 3), (10, 10)]:
        assert corollary_bound(n, t, 0.5) == 2 ** t * (n - t) + 2 ** (t - 1)
    with pytest.raises(DomainError):
        iso_lower_bound(3, 0)
    with pytest.raises(DomainError):
        corollary_bound(4, 2, 0.75)
    with pytest.raises(DomainError):
        corollary_bound(4, 5, 0.25)


def test_decomposition_bound_examples():
    assert decomposition_bound(4, 8, 2, 2, 1) == 12.0
    assert decomposition_bound(5, 16, 2, 2, 1) == 24.0
    for n, N in [(4, 1), (6, 3), (10, 0)]:
        assert decomposition_bound(n, 1 << (n - N), 0, 0, N) == N * (1 << (n - N))
    with pytest.raises(DomainError):
        decomposition_bound(4, 0, 1, 1, 1)


@pytest.mark.parametrize("n,N,M", [(4, 1, 2), (5, 1, 3), (6, 2, 3), (8, 3, 4)])
def test_decomposition_bound_tight_on_extremal(n, N, M):
    A, C = extremal_near_cube(n, N, M)
    b = d = 1 << (n - N - M)
    assert decomposition_bound(n, A.size, b, d, N) == pytest.approx(cube.edge_boundary(A), abs=1e-9)


# ------------------------------------------------------------- functionals

def test_talagrand_subcube_formula():
    for n in range(4, 11):
        for t in range(0, n - 1):
            S = cube.realize_subcube(Subcube(n, tuple((i, 0) for i in range(t + 1, n + 1))))
            f = talagrand_functional(cube.influences(S))
            c = n - t
            assert f.lhs == pytest.approx(c * 2.0 ** -(c - 1) / (c - 1), rel=1e-12)
            assert f.ratio == pytest.approx(analytic.talagrand_subcube_ratio(n, t), rel=1e-12)
    assert analytic.talagrand_subcube_ratio(8, 5) == pytest.approx(6 / 1.75, abs=1e-12)
    assert analytic.talagrand_subcube_ratio(60, 0) == pytest.approx(2 * 60 / 59, rel=1e-12)


def test_talagrand_flags():
    dictator = cube.realize_subcube(Subcube(4, ((2, 1),)))
    assert talagrand_functional(cube.influences(dictator)).lhs == math.inf
    empty = cube.make_set(4, [])
    f = talagrand_functional(cube.influences(empty))
    assert f.lhs == 0.0 and f.rhs_over_constant == 0.0


def test_kkl_examples():
    dictator = cube.realize_subcube(Subcube(4, ((1, 1),)))
    f = kkl_functional(cube.influences(dictator), 4)
    assert f.lhs == 1.0
    assert f.rhs_over_constant == pytest.approx(math.log(4) ** 2 / 64, abs=1e-15)
    assert f.rhs_over_constant == pytest.approx(0.0300283, abs=1e-7)
    assert f.ratio == pytest.approx(33.3019, abs=1e-4)
    assert kkl_functional(cube.influences(tribes(2, 2))).lhs == pytest.approx(9 / 16)
    f = kkl_functional(cube.influences(cube.make_set(4, [])))
    assert (f.lhs, f.rhs_over_constant) == (0.0, 0.0)
    with pytest.raises(DomainError):
        kkl_functional(cube.influences(cube.make_set(1, [0])))


def test_functionals_use_exact_betas():
    prof = cube.influences(tribes(2, 3))
    beta = Fraction(9, 32)
    f = talagrand_functional(prof)
    assert f.lhs == pytest.approx(6 * float(beta) / math.log2(32 / 9), rel=1e-14)
