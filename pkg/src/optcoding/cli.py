"""Command-line surface with deterministic, machine-readable outputs.

Subcommands: codes, lengths, simulate, fit, analyze, figure, oracle.
Exit codes: 0 success, 2 usage error, 3 numeric or domain error, 4 I/O
error.  Identical invocations (same flags and seed) produce byte-identical
artifacts, and no output file is created on any error path.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import assign, codebook, corpus, maxent, randtype

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_IO = 4

_SEP = {"tsv": "\t", "csv": ","}


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # single-line diagnostic, exit 2
        raise SystemExit(self._fail(message))

    def _fail(self, message) -> int:
        print(f"{self.prog}: usage error: {message}", file=sys.stderr)
        return EXIT_USAGE


def _write_output(text: str, path: str | None) -> None:
    """Emit to stdout, or atomically to a file (no partial file on failure)."""
    if path is None:
        sys.stdout.write(text)
        return
    tmp = f"{path}.tmp.{os.getpid()}"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table_text(header: tuple[str, ...], rows, fmt: str) -> str:
    sep = _SEP[fmt]
    lines = [sep.join(header)]
    lines += [sep.join(str(cell) for cell in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _cmd_codes(args) -> str:
    alphabet = codebook.Alphabet.from_string(args.alphabet)
    if args.ranks < 1:
        raise ValueError("--ranks must be >= 1")
    dist = assign.RankedDistribution(np.full(args.ranks, 1.0 / args.ranks))
    table = codebook.optimal_nonsingular_code(
        dist, alphabet, args.lmin, allow_empty=args.allow_empty
    )
    if args.format == "json":
        return table.to_json()
    return _table_text(("rank", "code"), table.items(), args.format)


def _cmd_lengths(args) -> str:
    if args.imax < 1:
        raise ValueError("--imax must be >= 1")
    if args.N < 1:
        raise ValueError("--N must be >= 1")
    if args.lmin < 0:
        raise ValueError("--lmin must be >= 0")
    rows = (
        (i, codebook.code_length_for_rank(args.N, args.lmin, i))
        for i in range(1, args.imax + 1)
    )
    return _table_text(("i", "l_i"), rows, args.format)


def _cmd_figure(args) -> str:
    params = randtype.RandomTypingParams(args.N, args.ps, args.lmin)
    ranks, probs = randtype.figure2_data(params, args.imax)
    rows = zip(ranks.tolist(), (str(p) for p in probs.tolist()))
    return _table_text(("i", "p_i"), rows, args.format)


def _cmd_simulate(args) -> str:
    bias = None
    if args.bias is not None:
        bias = np.array([float(x) for x in args.bias.split(",")])
    params = randtype.RandomTypingParams(args.N, args.ps, args.lmin, bias)
    words = randtype.generate(params, args.seed, args.words)
    table = corpus.table_from_tokens(words)
    abbrev = corpus.abbreviation_analysis(table) if table.size >= 2 else None
    recoding = corpus.optimal_recoding(
        table, codebook.Alphabet.latin(args.N), args.lmin
    )
    payload = {
        "schema": "simulate/1",
        "N": args.N,
        "p_s": args.ps,
        "l_min": args.lmin,
        "seed": args.seed,
        "n_words": args.words,
        "n_types": table.size,
        "tau": abbrev.tau if abbrev else None,
        "n_c": abbrev.n_c if abbrev else None,
        "n_d": abbrev.n_d if abbrev else None,
        "z_score": abbrev.z_score if abbrev else None,
        "l_actual": recoding.l_actual,
        "l_optimal": recoding.l_optimal,
        "efficiency_ratio": recoding.efficiency_ratio,
    }
    if args.text_out is not None:  # written only once the analysis succeeded
        _write_output(" ".join(words) + "\n", args.text_out)
    return _json_text(payload)


def _read_rank_counts(path) -> dict[int, int]:
    text = corpus.read_text(path)
    out: dict[int, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.replace(",", "\t").split()
        if lineno == 1 and parts and not parts[0].lstrip("-").isdigit():
            continue  # header row
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected `rank<TAB>count`")
        rank, count = int(parts[0]), int(parts[1])
        if rank in out:
            raise ValueError(f"{path}:{lineno}: duplicate rank {rank}")
        out[rank] = count
    if not out:
        raise ValueError(f"{path}: no rank counts found")
    return out


def _cmd_fit(args) -> str:
    observed = _read_rank_counts(args.input)
    families = (
        ("zeta", "zipf-mandelbrot", "geometric")
        if args.family == "all"
        else (args.family,)
    )
    results = sorted(
        (maxent.fit_mle(observed, fam) for fam in families),
        key=lambda r: r.log_likelihood,
        reverse=True,
    )
    if len(results) == 1:
        return _json_text(results[0].to_json_dict())
    return _json_text(
        {"schema": "fit/1", "results": [r.to_json_dict() for r in results]}
    )


def _cmd_analyze(args) -> str:
    text = corpus.read_text(args.input)
    magnitudes = (
        corpus.read_magnitudes(args.magnitudes) if args.magnitudes else None
    )
    table = corpus.build_table(
        text,
        lowercase=args.lowercase,
        strip_punctuation=not args.keep_punctuation,
        magnitude="graphemes" if args.graphemes else "chars",
        magnitudes=magnitudes,
    )
    report = corpus.analyze(
        table, codebook.Alphabet.from_string(args.alphabet), args.lmin
    )
    if args.table_out is not None:
        _write_output(table.to_tsv(), args.table_out)
    return report.to_json()


def _cmd_oracle(args) -> str:
    if args.instances < 1:
        raise ValueError("--instances must be >= 1")
    rng = np.random.default_rng(args.seed)
    costs = [
        assign.CostFunction.identity(),
        assign.CostFunction.power(2.0),
        assign.CostFunction.exponential(float(np.e)),
    ]
    lines = []
    failures = 0
    for k in range(args.instances):
        v = int(rng.integers(2, 8))  # V in 2..7
        pool = int(rng.integers(v, 10))  # pool in V..9
        dist = assign.RankedDistribution.from_weights(rng.random(v) + 1e-3)
        ms = assign.MagnitudeMultiset(rng.uniform(0.1, 10.0, pool))
        g = costs[int(rng.integers(0, len(costs)))]
        opt = assign.optimal_assignment(dist, ms)
        lhs = assign.mean_cost(dist, opt, g)
        rhs = assign.brute_force_minimum(dist, ms, g)
        ok = abs(lhs - rhs) <= 1e-12 and assign.is_optimal(dist, opt, ms)
        if not ok:
            failures += 1
        lines.append(
            f"instance {k:03d} V={v} pool={pool} g={g.kind}: "
            f"{'ok' if ok else f'FAIL sorted={lhs!r} exhaustive={rhs!r}'}"
        )
    lines.append(f"oracle: {args.instances - failures}/{args.instances} ok")
    if failures:
        sys.stdout.write("\n".join(lines) + "\n")
        raise ValueError(f"oracle failed on {failures} of {args.instances} instances")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="optcoding", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("codes", help="optimal non-singular code table")
    p.add_argument("--alphabet", required=True, help="alphabet symbols, e.g. 'ab'")
    p.add_argument("--ranks", type=int, required=True, help="number of ranks V")
    p.add_argument("--lmin", type=int, default=1)
    p.add_argument("--allow-empty", action="store_true",
                   help="permit the empty string (needed for --lmin 0)")
    p.add_argument("--format", choices=("tsv", "csv", "json"), default="tsv")
    p.add_argument("--output")
    p.set_defaults(run=_cmd_codes)

    p = sub.add_parser("lengths", help="length of the i-th string, i = 1..imax")
    p.add_argument("--N", type=int, required=True, help="alphabet size")
    p.add_argument("--lmin", type=int, default=1)
    p.add_argument("--imax", type=int, required=True)
    p.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    p.add_argument("--output")
    p.set_defaults(run=_cmd_lengths)

    p = sub.add_parser("figure", help="exact rank-probability series of random typing")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--ps", type=float, required=True, help="stop probability in (0,1)")
    p.add_argument("--lmin", type=int, default=1)
    p.add_argument("--imax", type=int, required=True)
    p.add_argument("--format", choices=("csv", "tsv"), default="csv")
    p.add_argument("--output")
    p.set_defaults(run=_cmd_figure)

    p = sub.add_parser("simulate", help="generate a random-typing corpus and analyze it")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--ps", type=float, required=True)
    p.add_argument("--lmin", type=int, default=1)
    p.add_argument("--words", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bias", help="comma-separated letter probabilities (length N)")
    p.add_argument("--text-out", help="also write the generated corpus here")
    p.add_argument("--output")
    p.set_defaults(run=_cmd_simulate)

    p = sub.add_parser("fit", help="maximum-likelihood fit of rank distributions")
    p.add_argument("--input", required=True, help="TSV/CSV of `rank count` rows")
    p.add_argument(
        "--family",
        choices=("zeta", "zipf-mandelbrot", "geometric", "all"),
        default="all",
    )
    p.add_argument("--output")
    p.set_defaults(run=_cmd_fit)

    p = sub.add_parser("analyze", help="corpus pipeline: table, tau, recoding, fits")
    p.add_argument("--input", required=True, help="plain-text corpus file")
    p.add_argument("--magnitudes", help="sidecar TSV `type<TAB>magnitude`")
    p.add_argument("--alphabet", default="abcdefghijklmnopqrstuvwxyz",
                   help="recoding alphabet (default: 26 latin letters)")
    p.add_argument("--lmin", type=int, default=1)
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--keep-punctuation", action="store_true")
    p.add_argument("--graphemes", action="store_true",
                   help="count grapheme clusters instead of characters")
    p.add_argument("--table-out", help="also write the frequency table TSV here")
    p.add_argument("--output")
    p.set_defaults(run=_cmd_analyze)

    p = sub.add_parser("oracle", help="exhaustive cross-check of the sorted optimum")
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(run=_cmd_oracle)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits itself on --help/usage errors
        return int(exc.code or 0)
    try:
        text = args.run(args)
        _write_output(text, getattr(args, "output", None))
    except ValueError as exc:
        print(f"optcoding: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (OSError, UnicodeDecodeError) as exc:
        print(f"optcoding: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
