"""String enumeration and non-singular code tables.

Strings over an N-symbol alphabet are enumerated by length, ties broken
lexicographically by symbol index.  The length of the i-th string obeys a
closed form (`code_length_for_rank`), and assigning the i-th string to the
i-th most probable type yields the non-singular code table with minimal
mean length.  `classify` places a table in the singular / non-singular /
uniquely-decodable / instantaneous hierarchy, deciding unique decodability
with the Sardinas-Patterson procedure.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .assign import RankedDistribution

__all__ = [
    "Alphabet",
    "CodeTable",
    "CodeClass",
    "string_count_through_length",
    "code_length_for_rank",
    "nth_string",
    "rank_of_string",
    "optimal_nonsingular_code",
    "uniquely_decodable_lengths",
    "classify",
    "segmentations",
    "mean_code_length",
]


@dataclass(frozen=True, eq=False)
class Alphabet:
    """Ordered sequence of distinct single-character symbols."""

    symbols: tuple[str, ...]

    def __post_init__(self):
        syms = tuple(self.symbols)
        if not syms:
            raise ValueError("alphabet must have at least one symbol")
        if any(not isinstance(s, str) or len(s) != 1 for s in syms):
            raise ValueError("alphabet symbols must be single characters")
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet symbols must be pairwise distinct")
        object.__setattr__(self, "symbols", syms)
        object.__setattr__(self, "_index", {s: k for k, s in enumerate(syms)})

    @classmethod
    def from_string(cls, s: str) -> "Alphabet":
        return cls(tuple(s))

    @classmethod
    def latin(cls, n: int) -> "Alphabet":
        """The first n lowercase latin letters."""
        if not 1 <= n <= 26:
            raise ValueError("latin alphabet supports 1..26 symbols")
        return cls(tuple("abcdefghijklmnopqrstuvwxyz"[:n]))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol: str) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise ValueError(f"symbol {symbol!r} is not in the alphabet") from None

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._index


@dataclass(frozen=True, eq=False)
class CodeTable:
    """Mapping from rank 1..V to a code string over a fixed alphabet."""

    codes: tuple[str, ...]
    alphabet: Alphabet

    def __post_init__(self):
        codes = tuple(self.codes)
        if not codes:
            raise ValueError("code table must have at least one entry")
        for c in codes:
            if any(ch not in self.alphabet for ch in c):
                raise ValueError(f"code {c!r} uses symbols outside the alphabet")
        object.__setattr__(self, "codes", codes)

    @property
    def size(self) -> int:
        return len(self.codes)

    def __len__(self) -> int:
        return self.size

    def code(self, rank: int) -> str:
        if not 1 <= rank <= self.size:
            raise ValueError(f"rank must be in 1..{self.size}")
        return self.codes[rank - 1]

    def lengths(self) -> np.ndarray:
        return np.array([len(c) for c in self.codes], dtype=np.int64)

    def items(self):
        """(rank, code) pairs in rank order."""
        return list(enumerate(self.codes, start=1))

    def to_tsv(self) -> str:
        lines = ["rank\tcode"]
        lines += [f"{rank}\t{code}" for rank, code in self.items()]
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "schema": "codes/1",
            "alphabet": list(self.alphabet.symbols),
            "codes": list(self.codes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


@dataclass(frozen=True)
class CodeClass:
    """Flags of the code-class hierarchy: instantaneous implies uniquely
    decodable implies non-singular."""

    non_singular: bool
    uniquely_decodable: bool
    instantaneous: bool

    def __post_init__(self):
        if self.instantaneous and not self.uniquely_decodable:
            raise ValueError("instantaneous codes are uniquely decodable")
        if self.uniquely_decodable and not self.non_singular:
            raise ValueError("uniquely decodable codes are non-singular")

    @property
    def singular(self) -> bool:
        return not self.non_singular

    @property
    def label(self) -> str:
        """The tightest class the table belongs to."""
        if self.instantaneous:
            return "instantaneous"
        if self.uniquely_decodable:
            return "uniquely decodable"
        if self.non_singular:
            return "non-singular"
        return "singular"


def string_count_through_length(N: int, l_min: int, l: int) -> int:
    """Number of distinct strings with length in [l_min, l] over N symbols."""
    if N < 1:
        raise ValueError("alphabet size must be >= 1")
    if l < l_min:
        return 0
    if N == 1:
        return l - l_min + 1
    return (N ** (l + 1) - N**l_min) // (N - 1)


def code_length_for_rank(N: int, l_min: int, i: int) -> int:
    """Length of the i-th string in length-then-lexicographic order.

    Equals ceil(log_N((1 - 1/N) * i + N**(l_min - 1))) for N > 1 and
    i + l_min - 1 for N = 1.  Computed with integer arithmetic so block
    boundaries (i exactly filling all strings of a length) never suffer
    float rounding.
    """
    if N < 1:
        raise ValueError("alphabet size must be >= 1")
    if l_min < 0:
        raise ValueError("l_min must be nonnegative")
    if i < 1:
        raise ValueError("rank must be >= 1")
    if N == 1:
        return i + l_min - 1
    # smallest l with sum_{k=l_min..l} N^k >= i, i.e. N^(l+1) >= (N-1) i + N^l_min
    target = (N - 1) * i + N**l_min
    length = l_min
    power = N ** (l_min + 1)
    while power < target:
        length += 1
        power *= N
    return length


def nth_string(alphabet: Alphabet, l_min: int, i: int) -> str:
    """The i-th string of length >= l_min, ordered by length then lexicographically."""
    N = alphabet.size
    length = code_length_for_rank(N, l_min, i)
    if length == 0:
        return ""
    if N == 1:
        return alphabet.symbols[0] * length
    offset = i - 1 - string_count_through_length(N, l_min, length - 1)
    digits = []
    for _ in range(length):
        offset, d = divmod(offset, N)
        digits.append(alphabet.symbols[d])
    return "".join(reversed(digits))


def rank_of_string(alphabet: Alphabet, l_min: int, s: str) -> int:
    """Inverse of `nth_string`: the enumeration rank of a given string."""
    N = alphabet.size
    length = len(s)
    if length < l_min:
        raise ValueError(f"string {s!r} is shorter than l_min={l_min}")
    value = 0
    for ch in s:
        value = value * N + alphabet.index(ch)
    return string_count_through_length(N, l_min, length - 1) + value + 1


def optimal_nonsingular_code(
    dist: RankedDistribution,
    alphabet: Alphabet,
    l_min: int = 1,
    *,
    allow_empty: bool = False,
) -> CodeTable:
    """Shortest-strings-to-highest-ranks table: rank i gets the i-th string.

    The result is non-singular by construction and has minimal mean length
    among all non-singular tables for the distribution.  The empty string
    (l_min = 0) must be enabled explicitly; it then occupies rank 1.
    """
    if l_min < 0:
        raise ValueError("l_min must be nonnegative")
    if l_min == 0 and not allow_empty:
        raise ValueError("l_min = 0 (empty code string) requires allow_empty=True")
    codes = tuple(nth_string(alphabet, l_min, i) for i in range(1, dist.size + 1))
    return CodeTable(codes, alphabet)


def uniquely_decodable_lengths(dist: RankedDistribution, N: int) -> np.ndarray:
    """Shannon code lengths ceil(-log_N p_i); they satisfy the Kraft inequality.

    The ceiling is resolved with rational comparisons against N**-k, so
    dyadic probabilities land on the integer instead of next to it.  A
    probability within 1e-12 relative of N**-k counts as reaching it: that
    absorbs the representation error of values like 1/3 that have no exact
    float, at the price of the Kraft sum exceeding 1 by at most the same
    sliver for inputs deliberately placed just under a boundary.
    """
    if N < 2:
        raise ValueError("uniquely decodable lengths need an alphabet of size >= 2")
    if np.any(dist.probs <= 0):
        raise ValueError("all probabilities must be positive")
    log_n = math.log(N)
    snap = 1 + Fraction(1, 10**12)
    lengths = np.empty(dist.size, dtype=np.int64)
    for idx, p in enumerate(dist.probs.tolist()):
        k = max(0, math.ceil(-math.log(p) / log_n))
        fp = Fraction(p) * snap
        while k > 0 and Fraction(1, N ** (k - 1)) <= fp:
            k -= 1
        while Fraction(1, N**k) > fp:
            k += 1
        lengths[idx] = k
    return lengths


def _is_prefix_free(codes: tuple[str, ...]) -> bool:
    ordered = sorted(codes)
    return not any(
        ordered[k + 1].startswith(ordered[k]) for k in range(len(ordered) - 1)
    )


def _dangling_suffixes(prefixes, words) -> set[str]:
    out = set()
    for a in prefixes:
        for b in words:
            if b != a and b.startswith(a):
                out.add(b[len(a):])
    return out


def _is_uniquely_decodable(codes: tuple[str, ...]) -> bool:
    """Sardinas-Patterson test.

    Iteratively derive dangling suffixes from the codeword set; the code
    fails exactly when some derived suffix is itself a codeword.  All
    suffixes are substrings of codewords, so the visited set makes the
    iteration terminate.
    """
    words = set(codes)
    frontier = _dangling_suffixes(words, words)
    seen: set[str] = set()
    while frontier:
        if frontier & words:
            return False
        seen |= frontier
        nxt: set[str] = set()
        nxt |= _dangling_suffixes(frontier, words)
        nxt |= _dangling_suffixes(words, frontier)
        frontier = nxt - seen
    return True


def classify(table: CodeTable) -> CodeClass:
    """Tightest class of the table in the code hierarchy."""
    codes = table.codes
    non_singular = len(set(codes)) == len(codes)
    if not non_singular:
        return CodeClass(False, False, False)
    if "" in codes:
        # An empty codeword disappears under concatenation, so segmentation
        # is never unique.
        return CodeClass(True, False, False)
    ud = _is_uniquely_decodable(codes)
    inst = _is_prefix_free(codes)
    return CodeClass(True, ud, inst)


def segmentations(
    message: str, table: CodeTable, cap: int = 100
) -> list[tuple[int, ...]]:
    """All parses of the message into table codes, as rank tuples, up to `cap`.

    An empty list means the message is unparseable; two or more parses are a
    direct witness that the table is not uniquely decodable.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if any(ch not in table.alphabet for ch in message):
        raise ValueError("message uses symbols outside the table's alphabet")
    if "" in table.codes:
        raise ValueError("tables containing the empty code admit unbounded parse families")
    entries = table.items()
    out: list[tuple[int, ...]] = []
    stack: list[int] = []

    def walk(pos: int) -> None:
        if len(out) >= cap:
            return
        if pos == len(message):
            out.append(tuple(stack))
            return
        for rank, code in entries:
            if message.startswith(code, pos):
                stack.append(rank)
                walk(pos + len(code))
                stack.pop()
                if len(out) >= cap:
                    return

    walk(0)
    return out


def mean_code_length(table: CodeTable, dist: RankedDistribution) -> float:
    """Mean length sum(p_i * len(code_i)) of the table under the distribution."""
    if table.size != dist.size:
        raise ValueError(
            f"table has {table.size} entries but distribution has {dist.size} ranks"
        )
    return float(dist.probs @ table.lengths())
