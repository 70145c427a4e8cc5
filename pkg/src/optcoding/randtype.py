"""Random typing: letters at random, a word boundary with probability p_s.

Every word of length l has the same probability, so word probability is a
closed function of length alone, rank probability is a closed function of
rank (through the enumeration length law), and the process turns out to be
an optimal non-singular code for its own output distribution.  The module
provides those closed forms, a seeded generator, and the optimality check.
"""

from __future__ import annotations

import math
import string
from dataclasses import dataclass

import numpy as np

from . import assign, codebook

__all__ = [
    "RandomTypingParams",
    "AbbreviationLaw",
    "word_probability",
    "rank_probability",
    "rank_probabilities",
    "abbreviation_law",
    "generate",
    "word_ranks",
    "OptimalityReport",
    "verify_optimality",
    "figure2_data",
]

_LETTERS = string.ascii_lowercase


@dataclass(frozen=True, eq=False)
class RandomTypingParams:
    """Alphabet size N, stop probability p_s in (0, 1), minimum length l_min.

    p_s = 0 never terminates a word and p_s = 1 pins every word at l_min,
    so both are rejected.  An optional letter bias (length-N probability
    vector) applies to generation only; the closed-form laws hold for
    uniform letters.
    """

    N: int
    p_s: float
    l_min: int = 1
    letter_bias: np.ndarray | None = None

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("alphabet size N must be >= 1")
        if not 0.0 < self.p_s < 1.0:
            raise ValueError("p_s must be strictly between 0 and 1")
        if self.l_min < 0:
            raise ValueError("l_min must be nonnegative")
        if self.letter_bias is not None:
            bias = np.array(self.letter_bias, dtype=float, copy=True)
            if bias.shape != (self.N,):
                raise ValueError(f"letter_bias must have length {self.N}")
            if np.any(bias <= 0) or not np.all(np.isfinite(bias)):
                raise ValueError("letter_bias entries must be finite and positive")
            total = float(bias.sum())
            if abs(total - 1.0) > 1e-9:
                raise ValueError("letter_bias must sum to 1")
            bias /= total
            bias.flags.writeable = False
            object.__setattr__(self, "letter_bias", bias)


def _require_uniform(params: RandomTypingParams) -> None:
    if params.letter_bias is not None:
        raise ValueError(
            "closed-form laws assume uniform letters; letter bias is supported "
            "by generate() only"
        )


def word_probability(params: RandomTypingParams, l: int) -> float:
    """Probability of one specific word of length l:
    ((1 - p_s) / N)^l * p_s / (1 - p_s)^l_min."""
    _require_uniform(params)
    if l < params.l_min:
        raise ValueError(f"word length {l} is below l_min={params.l_min}")
    return ((1.0 - params.p_s) / params.N) ** l * params.p_s / (
        1.0 - params.p_s
    ) ** params.l_min


def rank_probability(params: RandomTypingParams, i: int) -> float:
    """Probability of the rank-i word: the word-probability law evaluated at
    the enumeration length of rank i."""
    _require_uniform(params)
    length = codebook.code_length_for_rank(params.N, params.l_min, i)
    return word_probability(params, length)


def _lengths_for_ranks(N: int, l_min: int, i_max: int) -> np.ndarray:
    """Enumeration length of every rank 1..i_max, vectorized via block bounds."""
    bounds = []
    length = l_min
    count = 0
    while count < i_max:
        count += N**length
        bounds.append(count)
        length += 1
    ranks = np.arange(1, i_max + 1)
    return l_min + np.searchsorted(np.array(bounds), ranks, side="left")


def rank_probabilities(params: RandomTypingParams, i_max: int) -> np.ndarray:
    """Vector of rank probabilities for ranks 1..i_max."""
    _require_uniform(params)
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    lengths = _lengths_for_ranks(params.N, params.l_min, i_max)
    scale = params.p_s / (1.0 - params.p_s) ** params.l_min
    return scale * ((1.0 - params.p_s) / params.N) ** lengths


@dataclass(frozen=True)
class AbbreviationLaw:
    """Linear law length = a * log(probability) + b_const, with a < 0.

    Inverts the word-probability law exactly (natural logarithm), so more
    probable words are shorter by construction.
    """

    a: float
    b_const: float

    def __post_init__(self):
        if not self.a < 0:
            raise ValueError("slope a must be negative")

    def predict_length(self, p: float) -> float:
        if not 0 < p <= 1:
            raise ValueError("probability must be in (0, 1]")
        return self.a * math.log(p) + self.b_const


def abbreviation_law(params: RandomTypingParams) -> AbbreviationLaw:
    """Constants of the exact length-vs-log-probability line."""
    _require_uniform(params)
    a = 1.0 / math.log((1.0 - params.p_s) / params.N)
    b_const = a * math.log((1.0 - params.p_s) ** params.l_min / params.p_s)
    return AbbreviationLaw(a, b_const)


def generate(params: RandomTypingParams, seed, n_words: int) -> list[str]:
    """n_words i.i.d. words: l_min forced letters, then stop with p_s per position.

    Letters are lowercase latin (so N <= 26 here), uniform unless
    letter_bias is set.  Deterministic per seed.
    """
    if n_words < 1:
        raise ValueError("n_words must be >= 1")
    if params.N > len(_LETTERS):
        raise ValueError("generator uses lowercase latin letters; needs N <= 26")
    rng = np.random.default_rng(seed)
    lengths = params.l_min + rng.geometric(params.p_s, n_words) - 1
    total = int(lengths.sum())
    if params.letter_bias is None:
        codes = rng.integers(0, params.N, total)
    else:
        codes = rng.choice(params.N, size=total, p=params.letter_bias)
    text = (codes + ord("a")).astype(np.uint8).tobytes().decode("ascii")
    ends = np.cumsum(lengths)
    starts = ends - lengths
    return [text[a:b] for a, b in zip(starts.tolist(), ends.tolist())]


def word_ranks(params: RandomTypingParams, words) -> np.ndarray:
    """Enumeration rank of each word (inverse of the i-th-string map).

    Words must be over the first N lowercase letters and at least l_min
    long.  Length groups are ranked with vectorized int64 arithmetic while
    the ranks fit; longer words (rank beyond 2**62) fall back to exact
    Python integers, and the result is then an object array.
    """
    N, l_min = params.N, params.l_min
    if N > len(_LETTERS):
        raise ValueError("word_ranks handles latin alphabets (N <= 26)")
    words = list(words)
    lengths = np.array([len(w) for w in words], dtype=np.int64)
    if np.any(lengths < l_min):
        raise ValueError(f"all words must have length >= l_min={l_min}")
    ranks: list = [0] * len(words)
    order = np.argsort(lengths, kind="stable")
    pos = 0
    while pos < len(order):
        length = int(lengths[order[pos]])
        end = pos
        while end < len(order) and lengths[order[end]] == length:
            end += 1
        idx = order[pos:end].tolist()
        base = codebook.string_count_through_length(N, l_min, length - 1)
        if length == 0:
            for k in idx:
                ranks[k] = base + 1
        elif codebook.string_count_through_length(N, l_min, length) < 2**62:
            blob = "".join(words[k] for k in idx).encode("ascii")
            mat = np.frombuffer(blob, dtype=np.uint8).reshape(len(idx), length) - ord("a")
            if np.any(mat < 0) or np.any(mat >= N):
                raise ValueError("words use letters outside the first N")
            values = mat @ (N ** np.arange(length - 1, -1, -1, dtype=np.int64))
            for k, v in zip(idx, values.tolist()):
                ranks[k] = base + v + 1
        else:
            for k in idx:
                value = 0
                for ch in words[k]:
                    digit = ord(ch) - ord("a")
                    if not 0 <= digit < N:
                        raise ValueError("words use letters outside the first N")
                    value = value * N + digit
                ranks[k] = base + value + 1
        pos = end
    if max(ranks) < 2**63:
        return np.array(ranks, dtype=np.int64)
    return np.array(ranks, dtype=object)


@dataclass(frozen=True)
class OptimalityReport:
    """Outcome of the analytic optimality checks up to a maximum rank."""

    i_max: int
    checks: dict
    failures: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_optimality(params: RandomTypingParams, i_max: int) -> OptimalityReport:
    """Check that random typing behaves as an optimal non-singular code.

    Builds the analytic rank table up to i_max and verifies: words of equal
    length are equally probable; probability never increases with rank and
    drops strictly across length boundaries; the induced length assignment
    satisfies the optimality conditions against the pool of all available
    string lengths; and every complete length block uses all of its
    base_size**l distinct strings.
    """
    _require_uniform(params)
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    N, l_min = params.N, params.l_min
    probs = rank_probabilities(params, i_max)
    lengths = _lengths_for_ranks(N, l_min, i_max)
    failures = []
    checks = {}

    same = True
    decreasing = True
    for length in np.unique(lengths):
        block = probs[lengths == length]
        if block.min() != block.max():
            same = False
    steps = np.diff(probs)
    if np.any(steps > 0):
        decreasing = False
    boundary = np.flatnonzero(np.diff(lengths) > 0)
    if np.any(steps[boundary] >= 0):
        decreasing = False
    checks["equal_length_equiprobable"] = same
    if not same:
        failures.append("words of equal length are not equally probable")
    checks["probability_nonincreasing"] = decreasing
    if not decreasing:
        failures.append("rank probabilities do not decrease stepwise")

    # Pool of available magnitudes: lengths of every string through one
    # length beyond the table, so "the V smallest" is a real constraint.
    top = int(lengths.max()) + 1
    pool = np.repeat(
        np.arange(l_min, top + 1), [N**k for k in range(l_min, top + 1)]
    ).astype(float)
    dist = assign.RankedDistribution(probs / probs.sum())
    asg = assign.Assignment(lengths.astype(float))
    ms = assign.MagnitudeMultiset(pool, allow_zero=(l_min == 0))
    optimal = assign.is_optimal(dist, asg, ms)
    checks["assignment_optimal"] = optimal
    if not optimal:
        failures.append("length assignment violates the optimality conditions")

    if N <= 26:
        alphabet = codebook.Alphabet.latin(N)
        table = [codebook.nth_string(alphabet, l_min, i) for i in range(1, i_max + 1)]
        complete = len(set(table)) == len(table)
        for length in range(l_min, int(lengths.max())):  # complete blocks only
            if sum(len(w) == length for w in table) != N**length:
                complete = False
        checks["all_strings_of_used_lengths"] = complete
        if not complete:
            failures.append("some available strings of a used length are unused")

    return OptimalityReport(i_max, checks, tuple(failures))


def figure2_data(
    params: RandomTypingParams, i_max: int
) -> tuple[np.ndarray, np.ndarray]:
    """(rank, probability) series of the exact rank law for ranks 1..i_max.

    The series is a step function: plateaus span the rank blocks that share
    a length, with boundaries at the cumulative string counts.
    """
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    ranks = np.arange(1, i_max + 1, dtype=np.int64)
    return ranks, rank_probabilities(params, i_max)
