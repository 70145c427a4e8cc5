"""Corpus pipeline: frequency tables, abbreviation testing, optimal recoding.

Tokenizes plain text into a frequency table carrying one magnitude per
type (character count by default, durations via a sidecar), measures the
frequency-magnitude Kendall tau, computes the frequency spectrum, fits
rank distributions, and rebuilds the vocabulary as an optimal
non-singular code to compare actual versus minimal mean length.
"""

from __future__ import annotations

import json
import math
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from . import assign, codebook, maxent

__all__ = [
    "FrequencyTable",
    "AbbreviationResult",
    "RecodingResult",
    "FitComparison",
    "AnalysisReport",
    "tokenize",
    "build_table",
    "table_from_tokens",
    "abbreviation_analysis",
    "optimal_recoding",
    "frequency_spectrum",
    "rank_frequency_fit",
    "analyze",
    "read_text",
    "read_magnitudes",
]

ABBREVIATION_NOTE = (
    "tau <= 0 is a necessary condition for optimal coding; "
    "a non-significant tau does not rule out efficient coding"
)

# Models with fewer distinct ranks than this are flagged as fitted on
# too little data for a meaningful comparison.
SPARSE_FIT_THRESHOLD = 5


@dataclass(frozen=True, eq=False)
class FrequencyTable:
    """Types with frequencies (nonincreasing) and magnitudes, plus the token total.

    Rank ties are broken by first occurrence in the source, so the table is
    identical however the counting is chunked.
    """

    types: tuple[str, ...]
    frequencies: np.ndarray
    magnitudes: np.ndarray
    total_tokens: int

    def __post_init__(self):
        types = tuple(self.types)
        freqs = np.array(self.frequencies, dtype=np.int64, copy=True)
        mags = np.array(self.magnitudes, dtype=float, copy=True)
        if not types:
            raise ValueError("frequency table must not be empty")
        if freqs.shape != (len(types),) or mags.shape != (len(types),):
            raise ValueError("types, frequencies and magnitudes must align")
        if np.any(freqs < 1):
            raise ValueError("frequencies must be positive")
        if np.any(freqs[:-1] < freqs[1:]):
            raise ValueError("frequencies must be sorted nonincreasingly")
        if np.any(mags < 0) or not np.all(np.isfinite(mags)):
            raise ValueError("magnitudes must be finite and nonnegative")
        if int(freqs.sum()) != self.total_tokens:
            raise ValueError("frequencies must sum to total_tokens")
        freqs.flags.writeable = False
        mags.flags.writeable = False
        object.__setattr__(self, "types", types)
        object.__setattr__(self, "frequencies", freqs)
        object.__setattr__(self, "magnitudes", mags)

    @property
    def size(self) -> int:
        return len(self.types)

    def probabilities(self) -> np.ndarray:
        return self.frequencies / self.total_tokens

    def ranked_distribution(self) -> assign.RankedDistribution:
        return assign.RankedDistribution(self.probabilities())

    def to_tsv(self) -> str:
        lines = ["type\tfrequency\tmagnitude"]
        for t, f, m in zip(self.types, self.frequencies.tolist(), self.magnitudes.tolist()):
            lines.append(f"{t}\t{f}\t{m!r}")
        return "\n".join(lines) + "\n"


def tokenize(text: str, *, lowercase: bool = False, strip_punctuation: bool = True) -> list[str]:
    """Whitespace tokenization with optional case folding and punctuation strip.

    Punctuation stripping removes leading and trailing characters whose
    Unicode category is P*; tokens empty after stripping are dropped.
    """
    tokens = []
    for raw in text.split():
        tok = raw
        if strip_punctuation:
            start, end = 0, len(tok)
            while start < end and unicodedata.category(tok[start]).startswith("P"):
                start += 1
            while end > start and unicodedata.category(tok[end - 1]).startswith("P"):
                end -= 1
            tok = tok[start:end]
        if lowercase:
            tok = tok.casefold()
        if tok:
            tokens.append(tok)
    return tokens


def _grapheme_count(token: str) -> int:
    import regex

    return len(regex.findall(r"\X", token))


def _default_magnitude(token: str, mode: str) -> float:
    if mode == "chars":
        return float(len(token))
    if mode == "graphemes":
        return float(_grapheme_count(token))
    raise ValueError(f"unknown magnitude mode {mode!r}")


def table_from_tokens(
    tokens: Iterable[str],
    *,
    magnitude: str = "chars",
    magnitudes: Mapping[str, float] | None = None,
) -> FrequencyTable:
    """Frequency table from an already-tokenized stream.

    Magnitude defaults to the character count of each type ("graphemes"
    counts extended grapheme clusters instead); a sidecar mapping overrides
    the default per type.
    """
    counts: dict[str, int] = {}
    for tok in tokens:
        counts[tok] = counts.get(tok, 0) + 1
    if not counts:
        raise ValueError("empty input: no tokens")
    first_seen = {t: k for k, t in enumerate(counts)}
    ordered = sorted(counts, key=lambda t: (-counts[t], first_seen[t]))
    freqs = [counts[t] for t in ordered]
    mags = []
    for t in ordered:
        if magnitudes is not None and t in magnitudes:
            mags.append(float(magnitudes[t]))
        else:
            mags.append(_default_magnitude(t, magnitude))
    return FrequencyTable(tuple(ordered), np.array(freqs), np.array(mags), sum(freqs))


def build_table(
    source,
    *,
    lowercase: bool = False,
    strip_punctuation: bool = True,
    magnitude: str = "chars",
    magnitudes: Mapping[str, float] | None = None,
) -> FrequencyTable:
    """Frequency table from raw text (a string or an iterable of lines)."""
    if isinstance(source, str):
        source = [source]

    def token_stream():
        for chunk in source:
            yield from tokenize(chunk, lowercase=lowercase, strip_punctuation=strip_punctuation)

    return table_from_tokens(token_stream(), magnitude=magnitude, magnitudes=magnitudes)


@dataclass(frozen=True)
class AbbreviationResult:
    """Kendall tau between frequency and magnitude, with raw pair counts.

    z_score is the normal-approximation score for tau, reported as a
    descriptive statistic only.
    """

    tau: float
    n_c: int
    n_d: int
    z_score: float
    note: str = ABBREVIATION_NOTE


def abbreviation_analysis(table: FrequencyTable) -> AbbreviationResult:
    """Frequency-vs-magnitude concordance of the table."""
    if table.size < 2:
        raise ValueError("abbreviation analysis needs at least 2 types")
    dist = table.ranked_distribution()
    asg = assign.Assignment(table.magnitudes)
    n_c, n_d = assign.pair_counts(dist, asg)
    tau = assign.kendall_tau(dist, asg)
    v = table.size
    z = (n_c - n_d) / math.sqrt(v * (v - 1) * (2 * v + 5) / 18.0)
    return AbbreviationResult(tau, n_c, n_d, z)


@dataclass(frozen=True, eq=False)
class RecodingResult:
    """Mean magnitude before and after optimal non-singular recoding."""

    l_actual: float
    l_optimal: float
    code_table: codebook.CodeTable

    @property
    def efficiency_ratio(self) -> float:
        return self.l_optimal / self.l_actual


def optimal_recoding(
    table: FrequencyTable,
    alphabet: codebook.Alphabet,
    l_min: int = 1,
    *,
    verify_character_counts: bool = False,
) -> RecodingResult:
    """Recode every type with the shortest available distinct string.

    l_actual weighs the current magnitudes by type probability; l_optimal
    is the mean length of the optimal non-singular table over the given
    alphabet.  l_optimal <= l_actual is guaranteed only when the current
    magnitudes are character counts over the same alphabet; pass
    verify_character_counts=True to enforce that the magnitudes are the
    types' character counts.
    """
    if verify_character_counts:
        expected = np.array([float(len(t)) for t in table.types])
        if not np.array_equal(expected, table.magnitudes):
            raise ValueError(
                "magnitudes are not character counts; length comparison "
                "against a string code is not meaningful"
            )
    dist = table.ranked_distribution()
    code_table = codebook.optimal_nonsingular_code(dist, alphabet, l_min)
    l_actual = float(dist.probs @ table.magnitudes)
    l_optimal = codebook.mean_code_length(code_table, dist)
    return RecodingResult(l_actual, l_optimal, code_table)


def frequency_spectrum(table: FrequencyTable) -> dict[int, int]:
    """n_f: how many types occur exactly f times, keyed by ascending f."""
    values, counts = np.unique(table.frequencies, return_counts=True)
    return {int(f): int(n) for f, n in zip(values, counts)}


@dataclass(frozen=True)
class FitComparison:
    """Per-family fits ranked by log-likelihood (best first)."""

    results: tuple[maxent.FitResult, ...]
    warning: str | None = None

    @property
    def best(self) -> maxent.FitResult:
        return self.results[0]


def rank_frequency_fit(
    table: FrequencyTable,
    families: tuple[str, ...] = ("zeta", "zipf-mandelbrot", "geometric"),
) -> FitComparison:
    """Fit rank-distribution families to the table and rank them by likelihood."""
    if table.size < 2:
        raise ValueError("rank-frequency fitting needs at least 2 types")
    observed = {i + 1: int(f) for i, f in enumerate(table.frequencies.tolist())}
    results = sorted(
        (maxent.fit_mle(observed, fam) for fam in families),
        key=lambda r: r.log_likelihood,
        reverse=True,
    )
    warning = None
    if table.size < SPARSE_FIT_THRESHOLD:
        warning = (
            f"only {table.size} distinct ranks: too few for a meaningful "
            "model comparison"
        )
    return FitComparison(tuple(results), warning)


@dataclass(frozen=True, eq=False)
class AnalysisReport:
    """Full corpus report: concordance, recoding lengths, fitted models."""

    tau: float
    n_c: int
    n_d: int
    z_score: float
    l_actual: float
    l_optimal: float
    fits: tuple[maxent.FitResult, ...]
    fit_warning: str | None = None

    @property
    def efficiency_ratio(self) -> float:
        return self.l_optimal / self.l_actual

    def to_json_dict(self) -> dict:
        return {
            "schema": "analysis/1",
            "tau": self.tau,
            "n_c": self.n_c,
            "n_d": self.n_d,
            "z_score": self.z_score,
            "note": ABBREVIATION_NOTE,
            "l_actual": self.l_actual,
            "l_optimal": self.l_optimal,
            "efficiency_ratio": self.efficiency_ratio,
            "fits": [f.to_json_dict() for f in self.fits],
            "fit_warning": self.fit_warning,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def analyze(
    table: FrequencyTable,
    alphabet: codebook.Alphabet,
    l_min: int = 1,
    *,
    fit_families: tuple[str, ...] = ("zeta", "zipf-mandelbrot", "geometric"),
) -> AnalysisReport:
    """Run the whole pipeline on a prepared frequency table."""
    abbrev = abbreviation_analysis(table)
    recoding = optimal_recoding(table, alphabet, l_min)
    fits = rank_frequency_fit(table, fit_families)
    return AnalysisReport(
        tau=abbrev.tau,
        n_c=abbrev.n_c,
        n_d=abbrev.n_d,
        z_score=abbrev.z_score,
        l_actual=recoding.l_actual,
        l_optimal=recoding.l_optimal,
        fits=fits.results,
        fit_warning=fits.warning,
    )


def read_text(path) -> str:
    """Read a UTF-8 text file; undecodable bytes raise with their offset."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ValueError(
            f"undecodable byte at offset {exc.start} in {path}: {exc.reason}"
        ) from exc


def read_magnitudes(path) -> dict[str, float]:
    """Sidecar TSV of per-type magnitudes: `type<TAB>magnitude` per line.

    Blank lines and lines starting with '#' are skipped; duplicate types
    are an error.
    """
    out: dict[str, float] = {}
    text = read_text(path)
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected `type<TAB>magnitude`")
        t, m = parts
        if t in out:
            raise ValueError(f"{path}:{lineno}: duplicate type {t!r}")
        value = float(m)
        if not value > 0 or not math.isfinite(value):
            raise ValueError(f"{path}:{lineno}: magnitude must be positive and finite")
        out[t] = value
    if not out:
        raise ValueError(f"{path}: no magnitude entries")
    return out
