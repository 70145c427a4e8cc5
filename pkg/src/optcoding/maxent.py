"""Maximum-entropy rank distributions built from length-vs-rank laws.

Maximizing rank entropy subject to a mean-cost constraint yields
p_i = exp(-alpha * l_i) / Z.  The three length laws of interest give the
classic families: l_i = i yields the geometric distribution, l_i = log i
yields the zeta (power-law) distribution, and the exact enumeration
length yields a step-shaped power law.  The Zipf-Mandelbrot family and
the Hurwitz/Riemann zeta normalizers are provided alongside sampling and
maximum-likelihood fitting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np
from scipy import optimize

from .codebook import code_length_for_rank

__all__ = [
    "riemann_zeta",
    "hurwitz_zeta",
    "LengthLaw",
    "LinearLength",
    "LogLength",
    "CodeLength",
    "MaxentSpec",
    "ZetaParams",
    "ZipfMandelbrotParams",
    "GeometricParams",
    "EntropyValue",
    "maxent_pmf",
    "zeta_pmf",
    "zipf_mandelbrot_pmf",
    "geometric_pmf",
    "entropy",
    "sample",
    "FitResult",
    "fit_mle",
]

_TAIL_BOUND = 1e-13
_SAMPLE_HEAD = 1 << 16


def hurwitz_zeta(alpha: float, b: float) -> float:
    """sum_{i>=0} (i + b)^(-alpha), absolute error well below 1e-10.

    Direct summation of the first M terms plus the Euler-Maclaurin tail
    (integral, half-term and two Bernoulli corrections).  The first
    omitted correction bounds the truncation error; M is the smallest
    head length that drives that bound below 1e-13, so calls with a
    large offset b cost almost nothing.
    """
    alpha = float(alpha)
    b = float(b)
    if alpha <= 1:
        raise ValueError("hurwitz_zeta diverges for alpha <= 1")
    if b <= 0:
        raise ValueError("hurwitz_zeta requires b > 0")
    log_factor = (
        math.log(alpha)
        + math.log1p(alpha)
        + math.log(alpha + 2)
        + math.log(alpha + 3)
        + math.log(alpha + 4)
        - math.log(30240.0)
    )
    log_target = math.log(_TAIL_BOUND)
    m = 0
    while log_factor - (alpha + 5) * math.log(m + b) >= log_target:
        m = max(16, m * 4)
        if m > 1 << 26:  # unreachable for alpha > 1, b > 0 in float range
            break
    head = float(np.sum((np.arange(m) + b) ** -alpha)) if m else 0.0
    x = m + b
    tail = (
        x ** (1 - alpha) / (alpha - 1)
        + 0.5 * x**-alpha
        + alpha * x ** (-alpha - 1) / 12.0
        - alpha * (alpha + 1) * (alpha + 2) * x ** (-alpha - 3) / 720.0
    )
    return head + tail


def riemann_zeta(alpha: float) -> float:
    """sum_{j>=1} j^(-alpha), absolute error well below 1e-10."""
    return hurwitz_zeta(alpha, 1.0)


class LengthLaw:
    """A length-vs-rank law: callable rank -> magnitude.

    Subclasses with infinite-support partition sums in closed (or zeta)
    form override `partition`; anything else needs a truncation.
    """

    def __call__(self, i: int) -> float:
        raise NotImplementedError

    def partition(self, alpha: float) -> float:
        raise ValueError(
            "no closed partition sum for this length law; set a truncation"
        )


@dataclass(frozen=True)
class LinearLength(LengthLaw):
    """l_i = i.  Partition sum is a geometric series; converges for alpha > 0."""

    def __call__(self, i: int) -> float:
        return float(i)

    def partition(self, alpha: float) -> float:
        if alpha <= 0:
            raise ValueError("linear length law needs alpha > 0")
        r = math.exp(-alpha)
        return r / (1.0 - r)


@dataclass(frozen=True)
class LogLength(LengthLaw):
    """l_i = log(i) / log(base).

    exp(-alpha * log_base i) = i^(-alpha / ln base), so the effective
    power-law exponent is alpha / ln(base) and must exceed 1 for the
    partition sum to converge.
    """

    base: float = math.e

    def __post_init__(self):
        if self.base <= 1:
            raise ValueError("log length law needs base > 1")

    def __call__(self, i: int) -> float:
        if i < 1:
            raise ValueError("rank must be >= 1")
        return math.log(i) / math.log(self.base)

    def effective_exponent(self, alpha: float) -> float:
        return alpha / math.log(self.base)

    def partition(self, alpha: float) -> float:
        a_eff = self.effective_exponent(alpha)
        if a_eff <= 1:
            raise ValueError(
                f"partition sum diverges: effective exponent {a_eff!r} <= 1"
            )
        return riemann_zeta(a_eff)


@dataclass(frozen=True)
class CodeLength(LengthLaw):
    """Exact enumeration length of the rank-i string over `base_size` symbols.

    Ranks sharing a length form blocks of base_size**l strings, so the
    partition sum collapses to a geometric series in base_size * exp(-alpha);
    convergence needs alpha > ln(base_size).
    """

    base_size: int
    min_length: int = 1

    def __post_init__(self):
        if self.base_size < 1:
            raise ValueError("base_size must be >= 1")
        if self.min_length < 0:
            raise ValueError("min_length must be nonnegative")

    def __call__(self, i: int) -> float:
        return float(code_length_for_rank(self.base_size, self.min_length, i))

    def partition(self, alpha: float) -> float:
        r = self.base_size * math.exp(-alpha)
        if r >= 1:
            raise ValueError(
                f"partition sum diverges: need alpha > ln({self.base_size})"
            )
        return r**self.min_length / (1.0 - r)


@dataclass(frozen=True)
class MaxentSpec:
    """Maximum-entropy rank distribution p_i = exp(-alpha * l_i) / Z."""

    alpha: float
    length_law: Callable[[int], float]
    truncation: int | None = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.truncation is not None and self.truncation < 1:
            raise ValueError("truncation must be >= 1")

    def partition(self) -> float:
        if self.truncation is not None:
            lengths = np.array(
                [self.length_law(j) for j in range(1, self.truncation + 1)]
            )
            return float(np.exp(-self.alpha * lengths).sum())
        if isinstance(self.length_law, LengthLaw):
            return self.length_law.partition(self.alpha)
        raise ValueError(
            "infinite support with an arbitrary length law: set a truncation"
        )


def maxent_pmf(spec: MaxentSpec, i: int) -> float:
    """Probability of rank i under the maximum-entropy distribution."""
    if i < 1:
        raise ValueError("rank must be >= 1")
    if spec.truncation is not None and i > spec.truncation:
        return 0.0
    z = spec.partition()
    return math.exp(-spec.alpha * spec.length_law(i)) / z


@dataclass(frozen=True)
class ZetaParams:
    """Zeta (discrete power-law) distribution p_i = i^(-alpha) / zeta(alpha)."""

    alpha: float

    def __post_init__(self):
        if self.alpha <= 1:
            raise ValueError("zeta distribution needs alpha > 1")


@dataclass(frozen=True)
class ZipfMandelbrotParams:
    """Shifted power law p_i = (i + b)^(-alpha) / hurwitz_zeta(alpha, b)."""

    alpha: float
    b: float

    def __post_init__(self):
        if self.alpha <= 1:
            raise ValueError("Zipf-Mandelbrot needs alpha > 1")
        if self.b <= 0:
            raise ValueError("Zipf-Mandelbrot needs offset b > 0")


@dataclass(frozen=True)
class GeometricParams:
    """Geometric distribution p_i = q * (1 - q)^(i - 1) on ranks 1, 2, ..."""

    q: float

    def __post_init__(self):
        if not 0 < self.q < 1:
            raise ValueError("geometric distribution needs q in (0, 1)")


def zeta_pmf(params: ZetaParams, i: int) -> float:
    if i < 1:
        raise ValueError("rank must be >= 1")
    return i ** -params.alpha / riemann_zeta(params.alpha)


def zipf_mandelbrot_pmf(params: ZipfMandelbrotParams, i: int) -> float:
    """Probability at support index i >= 0.

    The support index starts at 0, matching the normalizer
    hurwitz_zeta(alpha, b) = sum_{i>=0} (i + b)^(-alpha); the type of
    frequency rank r corresponds to index i = r - 1.  With b = 1 the law
    is exactly the zeta distribution under that rank shift:
    pmf(i) = (i + 1)^(-alpha) / hurwitz_zeta(alpha, 1) = zeta_pmf(i + 1).
    """
    if i < 0:
        raise ValueError("support index must be >= 0")
    return (i + params.b) ** -params.alpha / hurwitz_zeta(params.alpha, params.b)


def geometric_pmf(params: GeometricParams, i: int) -> float:
    if i < 1:
        raise ValueError("rank must be >= 1")
    return params.q * (1.0 - params.q) ** (i - 1)


@dataclass(frozen=True)
class EntropyValue:
    """Entropy with its unit spelled out ("nats" or "bits")."""

    value: float
    unit: str

    def __post_init__(self):
        if self.unit not in ("nats", "bits"):
            raise ValueError("unit must be 'nats' or 'bits'")
        if self.value < -1e-12:
            raise ValueError("entropy must be nonnegative")


def entropy(
    pmf: Callable[[int], float], truncation: int, unit: str = "nats"
) -> EntropyValue:
    """H = -sum p_i log p_i over ranks 1..truncation, with 0 log 0 = 0.

    The truncated mass must be within 1e-6 of 1; pick the truncation so the
    missing tail is negligible for the family at hand.
    """
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    p = np.array([pmf(i) for i in range(1, truncation + 1)], dtype=float)
    if np.any(p < 0):
        raise ValueError("pmf values must be nonnegative")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-6:
        raise ValueError(
            f"pmf mass over the truncation is {total!r}; not normalized within 1e-6"
        )
    pos = p[p > 0]
    h = float(-(pos * np.log(pos)).sum())
    if unit == "bits":
        return EntropyValue(h / math.log(2.0), "bits")
    return EntropyValue(h, "nats")


def _power_family_ranks(alpha: float, b: float, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF ranks for P(rank r) = (r - 1 + b)^(-alpha) / hurwitz_zeta(alpha, b).

    A cached cumulative table covers the head; draws landing beyond it are
    inverted exactly through the Hurwitz-zeta tail, so heavy tails need no
    gigantic table.
    """
    z = hurwitz_zeta(alpha, b)
    head = (np.arange(_SAMPLE_HEAD) + b) ** -alpha
    cdf = np.cumsum(head) / z
    ranks = np.searchsorted(cdf, u, side="left") + 1
    ranks = ranks.astype(np.int64)
    oversized: dict[int, int] = {}
    for idx in np.flatnonzero(u > cdf[-1]):
        target = (1.0 - u[idx]) * z  # want smallest r with zeta(alpha, r + b) <= target
        lo = _SAMPLE_HEAD
        hi = lo * 2
        while hurwitz_zeta(alpha, hi + b) > target:
            lo = hi
            hi *= 2
        while lo < hi:
            mid = (lo + hi) // 2
            if hurwitz_zeta(alpha, mid + b) <= target:
                hi = mid
            else:
                lo = mid + 1
        if lo < 2**63:
            ranks[idx] = lo
        else:
            oversized[int(idx)] = lo
    if oversized:
        out = ranks.astype(object)
        for idx, r in oversized.items():
            out[idx] = r
        return out
    return ranks


def sample(family, seed, n: int, *, truncation: int | None = None) -> np.ndarray:
    """Draw n i.i.d. ranks (>= 1) by inverse CDF; deterministic per seed.

    Accepts GeometricParams, ZetaParams, ZipfMandelbrotParams, a MaxentSpec,
    or a bare pmf callable.  Callables and MaxentSpecs without closed-form
    partitions need a truncation; the table is then renormalized over it.
    For the Zipf-Mandelbrot family the returned rank r corresponds to
    support index r - 1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    if isinstance(family, GeometricParams):
        k = np.ceil(np.log1p(-u) / math.log1p(-family.q))
        return np.maximum(k, 1.0).astype(np.int64)
    if isinstance(family, ZetaParams):
        return _power_family_ranks(family.alpha, 1.0, u)
    if isinstance(family, ZipfMandelbrotParams):
        return _power_family_ranks(family.alpha, family.b, u)
    if isinstance(family, MaxentSpec):
        if family.truncation is not None:
            pmf = lambda i: maxent_pmf(family, i)  # noqa: E731
            return _table_ranks(pmf, family.truncation, u)
        if isinstance(family.length_law, LinearLength):
            q = 1.0 - math.exp(-family.alpha)
            return sample(GeometricParams(q), seed, n)
        if isinstance(family.length_law, LogLength):
            return _power_family_ranks(
                family.length_law.effective_exponent(family.alpha), 1.0, u
            )
        raise ValueError("cannot sample this maxent spec without a truncation")
    if callable(family):
        if truncation is None:
            raise ValueError("sampling a bare pmf needs a truncation")
        return _table_ranks(family, truncation, u)
    raise TypeError(f"cannot sample from {type(family).__name__}")


def _table_ranks(pmf, truncation: int, u: np.ndarray) -> np.ndarray:
    p = np.array([pmf(i) for i in range(1, truncation + 1)], dtype=float)
    if np.any(p < 0) or p.sum() <= 0:
        raise ValueError("invalid pmf table")
    cdf = np.cumsum(p) / p.sum()
    return (np.searchsorted(cdf, u, side="left") + 1).astype(np.int64)


@dataclass(frozen=True)
class FitResult:
    """Maximum-likelihood fit of one family to observed rank counts."""

    family: str
    params: dict
    log_likelihood: float
    n: int
    support: tuple[int, int]

    def to_json_dict(self) -> dict:
        return {
            "schema": "fit/1",
            "family": self.family,
            "params": dict(self.params),
            "log_likelihood": self.log_likelihood,
            "n": self.n,
            "support": list(self.support),
        }


def _as_rank_counts(observed) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(observed, Mapping):
        items = sorted(observed.items())
        ranks = np.array([r for r, _ in items], dtype=np.int64)
        counts = np.array([c for _, c in items], dtype=np.int64)
    else:
        ranks, counts = np.unique(np.asarray(observed, dtype=np.int64), return_counts=True)
    if ranks.size == 0:
        raise ValueError("no observations")
    if np.any(ranks < 1):
        raise ValueError("ranks must be >= 1")
    if np.any(counts < 1):
        raise ValueError("counts must be >= 1")
    return ranks, counts


def fit_mle(observed, family: str) -> FitResult:
    """Maximum-likelihood parameters for "geometric", "zeta" or "zipf-mandelbrot".

    `observed` is either a mapping rank -> count or a sequence of observed
    ranks.  The geometric MLE is the closed form q = 1/mean; the power-law
    families use bracketed numerical search.  Needs at least two distinct
    observed ranks.
    """
    ranks, counts = _as_rank_counts(observed)
    if ranks.size < 2:
        raise ValueError("need at least 2 distinct observed ranks")
    n = int(counts.sum())
    support = (int(ranks.min()), int(ranks.max()))
    rf = ranks.astype(float)
    cf = counts.astype(float)

    if family == "geometric":
        mean = float(rf @ cf) / n
        q = 1.0 / mean
        if not 0 < q < 1:
            raise ValueError("geometric MLE is degenerate for this data")
        ll = n * math.log(q) + float((rf - 1.0) @ cf) * math.log1p(-q)
        return FitResult("geometric", {"q": q}, ll, n, support)

    if family == "zeta":
        s = float(np.log(rf) @ cf)
        if s == 0.0:
            raise ValueError("all observations at rank 1: zeta MLE is degenerate")

        def nll(a: float) -> float:
            return a * s + n * math.log(riemann_zeta(a))

        res = optimize.minimize_scalar(
            nll, bounds=(1.0 + 1e-9, 64.0), method="bounded",
            options={"xatol": 1e-10},
        )
        alpha = float(res.x)
        return FitResult("zeta", {"alpha": alpha}, -float(res.fun), n, support)

    if family == "zipf-mandelbrot":
        # rank r sits at support index r - 1: weight (r - 1 + b)^(-alpha)
        def nll(theta) -> float:
            a, b = theta
            return a * float(np.log(rf - 1.0 + b) @ cf) + n * math.log(
                hurwitz_zeta(a, b)
            )

        start = fit_mle(dict(zip(ranks.tolist(), counts.tolist())), "zeta")
        res = optimize.minimize(
            nll,
            x0=[start.params["alpha"], 1.0],
            method="L-BFGS-B",
            bounds=[(1.0 + 1e-6, 64.0), (1e-6, 1e6)],
        )
        alpha, b = (float(v) for v in res.x)
        return FitResult(
            "zipf-mandelbrot", {"alpha": alpha, "b": b}, -float(res.fun), n, support
        )

    raise ValueError(f"unknown family {family!r}")
