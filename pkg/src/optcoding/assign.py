"""Minimum-cost assignment of magnitudes to probability-ranked types.

The central fact this module implements and tests against an exhaustive
oracle: over all ways of drawing V magnitudes from a given multiset, the
mean cost sum(p_i * g(l_i)) is minimized exactly by the V smallest
magnitudes placed in nondecreasing order, and this holds simultaneously
for every strictly increasing cost transform g.  Correlation diagnostics
(concordant/discordant pair counts, Kendall tau, Pearson r) quantify how
far a given assignment is from that optimum.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RankedDistribution",
    "MagnitudeMultiset",
    "CostFunction",
    "Assignment",
    "mean_cost",
    "optimal_assignment",
    "unconstrained_optimum",
    "brute_force_minimum",
    "pair_counts",
    "kendall_tau",
    "pearson_r",
    "is_optimal",
]

# Inputs whose total is further than this from 1 are rejected instead of
# being silently rescaled.
PROBABILITY_SUM_TOL = 1e-9

# Hard caps for the exhaustive search; |pool|! / (|pool| - V)! orderings.
BRUTE_FORCE_MAX_V = 8
BRUTE_FORCE_MAX_POOL = 10


def _frozen_vector(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("expected a nonempty 1-D vector")
    if not np.all(np.isfinite(arr)):
        raise ValueError("values must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class RankedDistribution:
    """Probability vector over ranks 1..V, sorted nonincreasingly.

    Totals off from 1 by at most 1e-9 are rescaled; anything worse is an
    error.  The stored array is read-only, so instances are safe to share.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=float, copy=True)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a nonempty 1-D vector")
        if not np.all(np.isfinite(p)):
            raise ValueError("probs must be finite")
        if np.any(p < 0):
            raise ValueError("probs must be nonnegative")
        if np.any(p[:-1] < p[1:]):
            raise ValueError("probs must be sorted nonincreasingly (rank 1 first)")
        total = float(p.sum())
        if abs(total - 1.0) > PROBABILITY_SUM_TOL:
            raise ValueError(
                f"probs sum to {total!r}; must be 1 within {PROBABILITY_SUM_TOL}"
            )
        p /= total
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_weights(cls, weights) -> "RankedDistribution":
        """Build a distribution from nonnegative weights: sort descending, normalize."""
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty 1-D vector")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        total = w.sum()
        if total <= 0:
            raise ValueError("weights must not all be zero")
        return cls(np.sort(w)[::-1] / total)

    @property
    def size(self) -> int:
        return int(self.probs.size)

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True, eq=False)
class MagnitudeMultiset:
    """Multiset of candidate magnitudes (string lengths, durations, ...).

    Values are stored sorted ascending; multiplicity matters, order does not.
    Zero magnitudes model the degenerate "empty string" regime and must be
    enabled explicitly.
    """

    values: np.ndarray
    allow_zero: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("magnitude multiset must be a nonempty 1-D vector")
        if not np.all(np.isfinite(v)):
            raise ValueError("magnitudes must be finite")
        lower_ok = np.all(v >= 0) if self.allow_zero else np.all(v > 0)
        if not lower_ok:
            bound = ">= 0 (allow_zero)" if self.allow_zero else "> 0"
            raise ValueError(f"magnitudes must be {bound}")
        v.sort()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.size


@dataclass(frozen=True)
class CostFunction:
    """Strictly increasing transform of a magnitude into an energetic cost.

    Kinds: "identity" (g(x) = x), "power" (g(x) = x**k, k > 0) and
    "exponential" (g(x) = base**x, base > 1).  All are strictly increasing
    on the positive reals, which is the property the optimality result needs.
    """

    kind: str
    param: float | None = None

    def __post_init__(self):
        if self.kind == "identity":
            if self.param is not None:
                raise ValueError("identity cost takes no parameter")
        elif self.kind == "power":
            if self.param is None or self.param <= 0:
                raise ValueError("power cost needs exponent k > 0")
        elif self.kind == "exponential":
            if self.param is None or self.param <= 1:
                raise ValueError("exponential cost needs base > 1")
        else:
            raise ValueError(f"unknown cost kind {self.kind!r}")

    @classmethod
    def identity(cls) -> "CostFunction":
        return cls("identity")

    @classmethod
    def power(cls, k: float) -> "CostFunction":
        return cls("power", float(k))

    @classmethod
    def exponential(cls, base: float) -> "CostFunction":
        return cls("exponential", float(base))

    def __call__(self, x):
        if self.kind == "identity":
            return np.asarray(x, dtype=float) if np.ndim(x) else float(x)
        if self.kind == "power":
            return np.power(x, self.param) if np.ndim(x) else float(x) ** self.param
        return np.power(self.param, x) if np.ndim(x) else self.param ** float(x)


@dataclass(frozen=True, eq=False)
class Assignment:
    """Magnitudes l_1..l_V assigned to ranks (index 0 holds the top rank's)."""

    magnitudes: np.ndarray

    def __post_init__(self):
        m = _frozen_vector(self.magnitudes)
        if np.any(m < 0):
            raise ValueError("assigned magnitudes must be nonnegative")
        object.__setattr__(self, "magnitudes", m)

    def __len__(self) -> int:
        return int(self.magnitudes.size)

    def __iter__(self):
        return iter(self.magnitudes.tolist())


def _check_sizes(dist: RankedDistribution, asg: Assignment) -> None:
    if len(asg) != dist.size:
        raise ValueError(
            f"distribution has {dist.size} ranks but assignment has {len(asg)} magnitudes"
        )


def mean_cost(dist: RankedDistribution, asg: Assignment, g: CostFunction) -> float:
    """Mean energetic cost sum(p_i * g(l_i)).

    With the identity transform and integer lengths this is the familiar
    mean code length.
    """
    _check_sizes(dist, asg)
    return float(dist.probs @ g(asg.magnitudes))


def optimal_assignment(dist: RankedDistribution, ms: MagnitudeMultiset) -> Assignment:
    """The V smallest magnitudes of the pool, in nondecreasing order.

    This single assignment minimizes the mean cost for *every* strictly
    increasing cost transform at once.  Ties among equal magnitudes make
    other permutations of the tied values co-optimal; the stable sorted
    pick is the canonical representative.
    """
    V = dist.size
    if ms.size < V:
        raise ValueError(f"pool of {ms.size} magnitudes cannot cover {V} ranks")
    return Assignment(ms.values[:V])


def unconstrained_optimum(dist: RankedDistribution, l_min: float = 0.0) -> Assignment:
    """With no pool constraint every rank takes the minimum magnitude l_min."""
    if l_min < 0:
        raise ValueError("l_min must be nonnegative")
    return Assignment(np.full(dist.size, float(l_min)))


def brute_force_minimum(
    dist: RankedDistribution, ms: MagnitudeMultiset, g: CostFunction
) -> float:
    """Exact minimum mean cost over all ordered selections of V pool elements.

    Exhaustive oracle for `optimal_assignment`; guarded to V <= 8 and pool
    size <= 10 because the search space is |pool|!/(|pool|-V)! orderings.
    """
    V = dist.size
    if V > BRUTE_FORCE_MAX_V or ms.size > BRUTE_FORCE_MAX_POOL:
        raise ValueError(
            f"exhaustive search guard exceeded: need V <= {BRUTE_FORCE_MAX_V} "
            f"and pool <= {BRUTE_FORCE_MAX_POOL}"
        )
    if ms.size < V:
        raise ValueError(f"pool of {ms.size} magnitudes cannot cover {V} ranks")
    p = dist.probs
    best = math.inf
    chunk: list[tuple[float, ...]] = []

    def flush() -> None:
        nonlocal best
        costs = g(np.array(chunk)) @ p
        best = min(best, float(costs.min()))
        chunk.clear()

    for perm in itertools.permutations(ms.values.tolist(), V):
        chunk.append(perm)
        if len(chunk) >= 1 << 16:
            flush()
    if chunk:
        flush()
    return best


def pair_counts(dist: RankedDistribution, asg: Assignment) -> tuple[int, int]:
    """Exact counts (n_c, n_d) of concordant and discordant pairs.

    A pair i < j is concordant when sign(p_i - p_j) * sign(l_i - l_j) = +1
    and discordant when it is -1; pairs tied in either coordinate count
    toward neither.  Counting walks the probability-tie groups once and
    keeps cumulative magnitude counts, so it stays exact (integer) while
    avoiding the O(V^2) scan over pairs.
    """
    _check_sizes(dist, asg)
    p = dist.probs
    _, codes = np.unique(asg.magnitudes, return_inverse=True)
    n_bins = int(codes.max()) + 1
    seen = np.zeros(n_bins, dtype=np.int64)
    starts = np.flatnonzero(np.r_[True, p[:-1] > p[1:]])
    ends = np.r_[starts[1:], p.size]
    n_c = 0
    n_d = 0
    for s, e in zip(starts, ends):
        grp = np.bincount(codes[s:e], minlength=n_bins)
        cum = np.cumsum(seen)
        smaller = cum - seen  # previously seen magnitudes strictly below
        larger = cum[-1] - cum  # strictly above
        n_c += int(grp @ larger)
        n_d += int(grp @ smaller)
        seen += grp
    return n_c, n_d


def kendall_tau(dist: RankedDistribution, asg: Assignment) -> float:
    """Kendall tau between probabilities and magnitudes: (n_c - n_d) / C(V, 2)."""
    V = dist.size
    if V < 2:
        raise ValueError("Kendall tau needs at least 2 ranks")
    n_c, n_d = pair_counts(dist, asg)
    return (n_c - n_d) / (V * (V - 1) / 2)


def pearson_r(p, lam) -> float:
    """Pearson correlation with population moments.

    r = (mean(p * lam) - mean(p) * mean(lam)) / (std(p) * std(lam)), with
    population (not sample) standard deviations.  At fixed means and
    deviations this is an affine function of the scalar product p . lam,
    so minimizing the mean cost and minimizing r are the same problem.
    """
    p = np.asarray(p, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if p.shape != lam.shape or p.ndim != 1 or p.size < 2:
        raise ValueError("pearson_r needs two equal-length vectors of size >= 2")
    sp = p.std()
    sl = lam.std()
    if sp == 0.0 or sl == 0.0:
        raise ValueError("correlation is not defined when a standard deviation is zero")
    cov = (p * lam).mean() - p.mean() * lam.mean()
    return float(cov / (sp * sl))


def is_optimal(
    dist: RankedDistribution, asg: Assignment, ms: MagnitudeMultiset
) -> bool:
    """True iff the assignment holds the pool's V smallest values in nondecreasing order."""
    _check_sizes(dist, asg)
    used = Counter(asg.magnitudes.tolist())
    avail = Counter(ms.values.tolist())
    if used - avail:
        raise ValueError("assignment is not a sub-multiset of the magnitude pool")
    smallest = Counter(ms.values[: dist.size].tolist())
    if used != smallest:
        return False
    m = asg.magnitudes
    return bool(np.all(m[:-1] <= m[1:]))
