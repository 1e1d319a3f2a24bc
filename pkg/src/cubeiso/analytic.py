"""Closed-form bound functions and their inverses.

Root finding is plain bisection on intervals where the function is known to
be monotone; domains are enforced with :class:`DomainError` instead of being
clamped.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.optimize import bisect

from .errors import DomainError

LOG2_5_MINUS_2 = math.log2(5) - 2
#: slope of the linear lower bound F(γ) >= CASE1_SLOPE * γ on [0, 1/5]
CASE1_SLOPE = 5 * LOG2_5_MINUS_2
H_MAX = 1 / (math.e * math.log(2))
G_ARGMAX = 2 ** -(3 + 1 / math.log(2))
G_MAX = G_ARGMAX / math.log(2)


@dataclass(frozen=True)
class BoundConfig:
    """Stand-ins for the unspecified absolute constants.

    epsilon_c: excess threshold under which the stability theorems are applied.
    root_tol: bisection tolerance on the function value.
    talagrand_K, kkl_C: reference constants used only in reports.
    """

    epsilon_c: float = 0.05
    root_tol: float = 1e-12
    talagrand_K: float = 2.0
    kkl_C: float = 4.0

    def __post_init__(self):
        if not 0 < self.epsilon_c < 1:
            raise DomainError(f"epsilon_c must lie in (0, 1), got {self.epsilon_c}")
        if not self.root_tol > 0:
            raise DomainError(f"root_tol must be positive, got {self.root_tol}")


DEFAULT_CONFIG = BoundConfig()


def _xlog(x: float) -> float:
    return 0.0 if x == 0 else -x * math.log2(x)


def binary_entropy(gamma: float) -> float:
    if not 0 <= gamma <= 1:
        raise DomainError(f"binary entropy needs 0 <= γ <= 1, got {gamma}")
    return _xlog(gamma) + _xlog(1 - gamma)


def F(gamma: float) -> float:
    """H2(γ) - 2γ on [0, 1/2]; concave, maximal at γ = 1/5."""
    if not 0 <= gamma <= 0.5:
        raise DomainError(f"F needs 0 <= γ <= 1/2, got {gamma}")
    return binary_entropy(gamma) - 2 * gamma


def h(x: float) -> float:
    if not 0 < x <= 1:
        raise DomainError(f"h needs 0 < x <= 1, got {x}")
    return _xlog(x)


def g(x: float) -> float:
    if not 0 < x <= 1:
        raise DomainError(f"g needs 0 < x <= 1, got {x}")
    return _xlog(x) - 3 * x


def _increasing_root(fn, target: float, hi: float, tol: float) -> float:
    # fn(0) = 0 < target <= fn(hi), fn increasing on [0, hi]
    return bisect(lambda x: fn(x) - target, 0.0, hi, xtol=tol / 64, maxiter=1100)


def delta1(eps: float, config: BoundConfig = DEFAULT_CONFIG) -> float:
    """Root of x log2(1/x) = eps in (0, 1/e)."""
    if not 0 < eps <= H_MAX - config.root_tol:
        raise DomainError(f"delta1 needs 0 < ε <= {H_MAX - config.root_tol:.6f}, got {eps}")
    return _increasing_root(_xlog, eps, 1 / math.e, config.root_tol)


def delta0(eps: float, config: BoundConfig = DEFAULT_CONFIG) -> float:
    """Smallest positive root of x log2(1/x) - 3x = eps."""
    if not 0 < eps <= G_MAX - config.root_tol:
        raise DomainError(
            f"delta0 needs 0 < ε <= {G_MAX - config.root_tol:.6f} (max of g), got {eps}")
    return _increasing_root(lambda x: _xlog(x) - 3 * x, eps, G_ARGMAX, config.root_tol)


def iso_lower_bound(n: int, size: int) -> float:
    if not 1 <= size <= 1 << n:
        raise DomainError(f"size must be in [1, 2^{n}], got {size}")
    return size * (n - math.log2(size))


def corollary_bound(n: int, t: int, delta: float) -> float:
    """2^t (n - t + δ log2(1/δ))."""
    if not 0 <= t <= n:
        raise DomainError(f"t must be in [0, {n}], got {t}")
    if not 0 < delta <= 0.5:
        raise DomainError(f"δ must be in (0, 1/2], got {delta}")
    return 2 ** t * (n - t + _xlog(delta))


def decomposition_bound(n: int, size_a: int, size_b: int, size_d: int, N: int) -> float:
    """N|A| + |B|(log2(2^n/|B|) - N) + |D|(log2(2^n/|D|) - N - 2).

    Empty B or D contribute nothing.
    """
    if size_a < 1 or size_b < 0 or size_d < 0:
        raise DomainError("need |A| >= 1 and |B|, |D| >= 0")
    if not 0 <= N <= n:
        raise DomainError(f"codimension must be in [0, {n}], got {N}")
    total = float(N * size_a)
    if size_b:
        total += size_b * (n - math.log2(size_b) - N)
    if size_d:
        total += size_d * (n - math.log2(size_d) - N - 2)
    return total


class Functional(NamedTuple):
    lhs: float
    rhs_over_constant: float

    @property
    def ratio(self) -> float:
        if self.rhs_over_constant == 0:
            return math.inf if self.lhs > 0 else math.nan
        return self.lhs / self.rhs_over_constant


def talagrand_functional(profile) -> Functional:
    """Σ β_i / log2(1/β_i) and p(1-p).

    β_i = 0 contributes nothing; any β_i = 1 makes the term undefined and the
    left side is reported as +inf.
    """
    lhs = 0.0
    for b in profile.beta:
        if b == 1:
            return Functional(math.inf, float(profile.p * (1 - profile.p)))
        if b > 0:
            bf = float(b)
            lhs += bf / -math.log2(bf)
    return Functional(lhs, float(profile.p * (1 - profile.p)))


def kkl_functional(profile, n: int | None = None) -> Functional:
    """Σ β_i² and p²(1-p)²(ln n)²/n."""
    n = profile.n if n is None else n
    if n < 2:
        raise DomainError("the KKL bound is vacuous for n < 2")
    lhs = float(sum(b * b for b in profile.beta))
    p = float(profile.p)
    return Functional(lhs, p * p * (1 - p) ** 2 * math.log(n) ** 2 / n)


def talagrand_subcube_ratio(n: int, t: int) -> float:
    """Closed form of the Talagrand ratio for a t-dimensional subcube of Q_n."""
    c = n - t
    if c < 2:
        raise DomainError("the closed form needs codimension >= 2")
    return 2 * c / ((c - 1) * (1 - 2.0 ** -c))
