"""Command-line pipeline: score a corpus, evaluate rankings, build reports.

Commands
  score      per-(segment, annotator) metric table plus an ALL row per segment
  rank-eval  Spearman/SATRA table for one annotator view, with Williams flags
  loo        leave-one-out table: each annotator against the others' mean PETpW
  tails      overlap between the gold tail and each metric's tail, per cut
  report     everything above plus weighted stats, clusters, and scatter data

All outputs are plain TSV/CSV/JSON, byte-identical across reruns on the same
inputs. Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .corpus import (
    ALL_ANNOTATORS,
    Corpus,
    CorpusError,
    Segment,
    escape_field,
    load_corpus,
    tokenize,
    unescape_field,
)
from .rankeval import (
    METRIC_POLARITY,
    RankInstance,
    effort_oriented,
    rank_by,
    satra,
    spearman,
    tail_overlap,
)
from .stats import cluster_annotators, weighted_mean_std, williams_test
from .taskmetrics import SegmentScores, all_view, score_segment
from .textmetrics import bleu, meteor_lite, ter

METRICS = ("TER", "BLEU", "METEOR", "DA", "HTER", "HBLEU", "HMETEOR", "KEYS_PER_CHAR", "PETPW")
LOO_METRICS = ("DA", "HTER", "HBLEU", "HMETEOR", "KEYS_PER_CHAR", "PETPW")
GOLD_METRIC = "PETPW"

SCORES_HEADER = (
    "segment_id",
    "annotator_id",
    "mt_tokens",
    "pe_time_sec",
    "petpw",
    "keys_per_char",
    "hter",
    "hbleu",
    "hmeteor",
    "ter",
    "bleu",
    "meteor",
    "da",
)

_METRIC_FIELD = {
    "TER": "ter",
    "BLEU": "bleu",
    "METEOR": "meteor",
    "DA": "da",
    "HTER": "hter",
    "HBLEU": "hbleu",
    "HMETEOR": "hmeteor",
    "KEYS_PER_CHAR": "keys_per_char",
    "PETPW": "petpw",
}

THREADS_ENV = "PE_RANK_THREADS"


class CliError(ValueError):
    """Bad input to a command; reported on stderr with exit status 1."""


def _workers() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError:
        raise CliError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise CliError(f"{THREADS_ENV} must be >= 1")
    return value


def _map_ordered(fn: Callable, items: Sequence) -> list:
    """Apply fn to items, preserving order; parallel when allowed."""
    workers = _workers()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# scores table


def _reference_only_row(seg: Segment) -> SegmentScores:
    hyp = tokenize(seg.mt)
    ind_ref = tokenize(seg.reference)
    return SegmentScores(
        segment_id=seg.id,
        annotator_id=ALL_ANNOTATORS,
        mt_tokens=len(hyp),
        pe_time_sec=None,
        petpw=None,
        keys_per_char=None,
        hter=None,
        hbleu=None,
        hmeteor=None,
        ter=ter(hyp, ind_ref).score,
        bleu=bleu(hyp, ind_ref),
        meteor=meteor_lite(hyp, ind_ref).score,
        da=seg.da,
    )


def score_corpus(corpus: Corpus) -> list[SegmentScores]:
    """Score every (segment, annotator) pair plus an ALL row per segment.

    Rows come back sorted by segment id, then annotator id, with the ALL row
    last within each segment. Segments without sessions get a reference-only
    ALL row.
    """
    sessions_index = corpus.sessions_by_segment()
    segments = sorted(corpus.segments, key=lambda s: s.id)

    def one(seg: Segment) -> list[SegmentScores]:
        rows = [score_segment(seg, sess) for sess in sessions_index[seg.id]]
        rows.append(all_view(rows) if rows else _reference_only_row(seg))
        return rows

    return [row for chunk in _map_ordered(one, segments) for row in chunk]


def _fmt(value: float | int | None) -> str:
    if value is None:
        return ""
    return repr(value) if isinstance(value, float) else str(value)


def write_scores(rows: Sequence[SegmentScores], path: str | Path) -> None:
    lines = ["\t".join(SCORES_HEADER)]
    for r in rows:
        lines.append(
            "\t".join(
                (
                    escape_field(r.segment_id),
                    escape_field(r.annotator_id),
                    str(r.mt_tokens),
                    _fmt(r.pe_time_sec),
                    _fmt(r.petpw),
                    _fmt(r.keys_per_char),
                    _fmt(r.hter),
                    _fmt(r.hbleu),
                    _fmt(r.hmeteor),
                    _fmt(r.ter),
                    _fmt(r.bleu),
                    _fmt(r.meteor),
                    _fmt(r.da),
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_scores(path: str | Path) -> list[SegmentScores]:
    """Parse a scores file written by `score` (or an equivalent producer)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read scores file: {exc}") from None
    lines = [line for line in text.split("\n") if line]
    if not lines:
        raise CliError("scores file is empty")
    header = tuple(lines[0].split("\t"))
    if header != SCORES_HEADER:
        raise CliError(
            "scores file header mismatch: expected "
            + "\t".join(SCORES_HEADER).replace("\t", ", ")
        )
    rows: list[SegmentScores] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(SCORES_HEADER):
            raise CliError(f"scores line {lineno}: wrong field count")
        named = dict(zip(SCORES_HEADER, fields))

        def opt_float(column: str) -> float | None:
            raw = named[column]
            if raw == "":
                return None
            try:
                return float(raw)
            except ValueError:
                raise CliError(
                    f"scores line {lineno}: non-numeric {column} {raw!r}"
                ) from None

        try:
            mt_tokens = int(named["mt_tokens"])
        except ValueError:
            raise CliError(f"scores line {lineno}: non-numeric mt_tokens") from None
        ter_v = opt_float("ter")
        bleu_v = opt_float("bleu")
        meteor_v = opt_float("meteor")
        if ter_v is None or bleu_v is None or meteor_v is None:
            raise CliError(f"scores line {lineno}: missing reference-based metric")
        rows.append(
            SegmentScores(
                segment_id=unescape_field(named["segment_id"]),
                annotator_id=unescape_field(named["annotator_id"]),
                mt_tokens=mt_tokens,
                pe_time_sec=opt_float("pe_time_sec"),
                petpw=opt_float("petpw"),
                keys_per_char=opt_float("keys_per_char"),
                hter=opt_float("hter"),
                hbleu=opt_float("hbleu"),
                hmeteor=opt_float("hmeteor"),
                ter=ter_v,
                bleu=bleu_v,
                meteor=meteor_v,
                da=opt_float("da"),
            )
        )
    return rows


def _annotators(rows: Sequence[SegmentScores]) -> list[str]:
    return sorted({r.annotator_id for r in rows if r.annotator_id != ALL_ANNOTATORS})


def _view_rows(rows: Sequence[SegmentScores], annotator: str) -> list[SegmentScores]:
    """All rows of one annotator view, sorted by segment id, gap-checked."""
    universe = sorted({r.segment_id for r in rows})
    selected = {r.segment_id: r for r in rows if r.annotator_id == annotator}
    if not selected:
        raise CliError(f"no rows for annotator '{annotator}'")
    missing = [sid for sid in universe if sid not in selected]
    if missing:
        raise CliError(
            f"scores incomplete for annotator '{annotator}': missing segment '{missing[0]}'"
        )
    return [selected[sid] for sid in universe]


def _metric_vector(
    view: Sequence[SegmentScores], metric: str
) -> list[float] | None:
    field = _METRIC_FIELD[metric]
    values = [getattr(r, field) for r in view]
    if any(v is None for v in values):
        if metric == "DA":
            return None  # DA column is optional; callers omit its rows
        raise CliError(f"scores incomplete: missing {metric} value")
    return values


# ---------------------------------------------------------------------------
# rank-eval


def _satra_for_values(
    view: Sequence[SegmentScores],
    values: Sequence[float],
    metric: str,
    times: Sequence[float],
) -> float:
    by_id = {r.segment_id: i for i, r in enumerate(view)}
    ranking = rank_by(
        {r.segment_id: v for r, v in zip(view, values)}, METRIC_POLARITY[metric]
    )
    return satra(
        RankInstance(
            segment_ids=tuple(ranking),
            times=tuple(times[by_id[sid]] for sid in ranking),
            lengths=tuple(view[by_id[sid]].mt_tokens for sid in ranking),
        )
    )


def build_rank_table(
    view: Sequence[SegmentScores], williams_alpha: float = 0.01
) -> dict:
    """Rho and SATRA per metric for one annotator view, with Williams flags.

    The PETPW row is the oracle: the gold measurement ranked by itself.
    Pairs whose Williams statistic is undefined (tiny n, perfect correlation)
    get null p-values instead of failing the whole table.
    """
    gold = [r.petpw for r in view]
    if any(v is None for v in gold):
        raise CliError("scores file has no PETPW gold (corpus without sessions?)")
    times = [r.pe_time_sec for r in view]
    if any(t is None for t in times):
        raise CliError("scores file has no pe_time_sec (corpus without sessions?)")
    available = []
    vectors: dict[str, list[float]] = {}
    notes: list[str] = []
    for metric in METRICS:
        values = _metric_vector(view, metric)
        if values is None:
            notes.append(f"metric {metric} unavailable; rows omitted")
            continue
        available.append(metric)
        vectors[metric] = values
    oriented = {
        m: effort_oriented(vectors[m], METRIC_POLARITY[m]) for m in available
    }
    rho = {m: spearman(oriented[m], gold) for m in available}
    satra_scores = {
        m: _satra_for_values(view, vectors[m], m, times) for m in available
    }
    ranked_metrics = [m for m in available if m != GOLD_METRIC]
    best = max(ranked_metrics, key=lambda m: rho[m]) if ranked_metrics else None

    def williams_pair(a: str, b: str) -> tuple[float | None, float | None]:
        try:
            r12 = spearman(oriented[a], oriented[b])
            result = williams_test(r12, rho[a], rho[b], len(view))
        except ValueError:
            return None, None
        return result.t_stat, result.p_one_tailed

    pairs = []
    for i, a in enumerate(ranked_metrics):
        for b in ranked_metrics[i + 1 :]:
            t_stat, p = williams_pair(a, b)
            pairs.append(
                {
                    "metric_a": a,
                    "metric_b": b,
                    "t": t_stat,
                    "p": p,
                    "significant": None if p is None else p < williams_alpha,
                }
            )
    rows = []
    for metric in available:
        p_vs_best: float | None = None
        sig_vs_best: bool | None = None
        if best is not None and metric != best and metric != GOLD_METRIC:
            # one-tailed: is the best metric's correlation genuinely larger?
            _, p_vs_best = williams_pair(best, metric)
            sig_vs_best = None if p_vs_best is None else p_vs_best < williams_alpha
        rows.append(
            {
                "metric": metric,
                "rho": rho[metric],
                "satra": satra_scores[metric],
                "best": metric == best,
                "p_vs_best": p_vs_best,
                "sig_vs_best": sig_vs_best,
            }
        )
    return {"rows": rows, "williams_pairs": pairs, "notes": notes}


# ---------------------------------------------------------------------------
# leave-one-out


@dataclass(frozen=True)
class LOOGold:
    """Effort gold for one held-out annotator: the others' mean PETpW."""

    annotator_id: str
    segment_ids: tuple[str, ...]
    gold_petpw: tuple[float, ...]
    gold_times: tuple[float, ...]


def loo_gold(rows: Sequence[SegmentScores], annotator: str) -> LOOGold:
    """Per-segment mean PETpW and mean time of every *other* annotator."""
    annotators = _annotators(rows)
    if len(annotators) < 2:
        raise CliError("leave-one-out requires at least 2 annotators")
    if annotator not in annotators:
        raise CliError(f"unknown annotator '{annotator}'")
    others = [a for a in annotators if a != annotator]
    views = {a: _view_rows(rows, a) for a in others}
    ids = [r.segment_id for r in views[others[0]]]
    gold_petpw: list[float] = []
    gold_times: list[float] = []
    for i, sid in enumerate(ids):
        pws = []
        times = []
        for a in others:
            row = views[a][i]
            if row.petpw is None or row.pe_time_sec is None:
                raise CliError(f"missing PETPW for annotator '{a}', segment '{sid}'")
            pws.append(row.petpw)
            times.append(row.pe_time_sec)
        gold_petpw.append(sum(pws) / len(pws))
        gold_times.append(sum(times) / len(times))
    return LOOGold(
        annotator_id=annotator,
        segment_ids=tuple(ids),
        gold_petpw=tuple(gold_petpw),
        gold_times=tuple(gold_times),
    )


def build_loo_table(rows: Sequence[SegmentScores]) -> dict:
    """Rho/SATRA of each annotator's metrics against the others' mean PETpW."""
    annotators = _annotators(rows)
    if len(annotators) < 2:
        raise CliError("leave-one-out requires at least 2 annotators")
    table = []
    notes: list[str] = []
    for annotator in annotators:
        view = _view_rows(rows, annotator)
        gold = loo_gold(rows, annotator)
        for metric in LOO_METRICS:
            values = _metric_vector(view, metric)
            if values is None:
                note = f"metric {metric} unavailable; rows omitted"
                if note not in notes:
                    notes.append(note)
                continue
            oriented = effort_oriented(values, METRIC_POLARITY[metric])
            table.append(
                {
                    "annotator": annotator,
                    "metric": metric,
                    "rho": spearman(oriented, list(gold.gold_petpw)),
                    "satra": _satra_for_values(view, values, metric, gold.gold_times),
                }
            )
    return {"rows": table, "notes": notes}


# ---------------------------------------------------------------------------
# tails


def build_tails(
    rows: Sequence[SegmentScores], side: str, max_cut: int, step: int
) -> dict:
    """Overlap counts between the gold PETpW tail and each metric's tail.

    `best` compares the least-effort ends, `worst` the reversed rankings.
    Computed on the ALL (annotator-averaged) view.
    """
    if side not in ("best", "worst"):
        raise CliError(f"side must be 'best' or 'worst', got {side!r}")
    view = _view_rows(rows, ALL_ANNOTATORS)
    n = len(view)
    if max_cut > n:
        raise CliError(f"max cut {max_cut} exceeds {n} segments")
    if step < 1 or max_cut < 1:
        raise CliError("step and max cut must be >= 1")
    gold = [r.petpw for r in view]
    if any(v is None for v in gold):
        raise CliError("scores file has no PETPW gold (corpus without sessions?)")
    cuts = list(range(step, max_cut + 1, step))
    gold_rank = rank_by(
        {r.segment_id: v for r, v in zip(view, gold)},
        METRIC_POLARITY[GOLD_METRIC],
    )
    if side == "worst":
        gold_rank = list(reversed(gold_rank))
    out = []
    notes: list[str] = []
    for metric in METRICS:
        values = _metric_vector(view, metric)
        if values is None:
            notes.append(f"metric {metric} unavailable; rows omitted")
            continue
        metric_rank = rank_by(
            {r.segment_id: v for r, v in zip(view, values)}, METRIC_POLARITY[metric]
        )
        if side == "worst":
            metric_rank = list(reversed(metric_rank))
        for cut, overlap in zip(cuts, tail_overlap(gold_rank, metric_rank, cuts)):
            out.append({"cut": cut, "metric": metric, "overlap": overlap})
    out.sort(key=lambda r: (r["cut"], METRICS.index(r["metric"])))
    return {"rows": out, "notes": notes}


# ---------------------------------------------------------------------------
# report-only tables


def build_stats_table(rows: Sequence[SegmentScores]) -> dict:
    """Weighted mean/std of every metric per annotator view; weights are MT words."""
    views = _annotators(rows) + [ALL_ANNOTATORS]
    table = []
    notes: list[str] = []
    for annotator in views:
        view = _view_rows(rows, annotator)
        weights = [float(r.mt_tokens) for r in view]
        for metric in METRICS:
            field = _METRIC_FIELD[metric]
            values = [getattr(r, field) for r in view]
            if any(v is None for v in values):
                note = f"metric {metric} unavailable for '{annotator}'; rows omitted"
                notes.append(note)
                continue
            mean, std = weighted_mean_std(values, weights)
            table.append(
                {"annotator": annotator, "metric": metric, "mean": mean, "std": std}
            )
    return {"rows": table, "notes": notes}


SCATTER_METRICS = tuple(m for m in METRICS if m != GOLD_METRIC)


def build_scatter(rows: Sequence[SegmentScores]) -> list[tuple[str, str, str, float, float]]:
    """(segment_id, annotator, metric, value, petpw) rows for plotting."""
    out: list[tuple[str, str, str, float, float]] = []
    ordered = sorted(rows, key=lambda r: (r.segment_id, r.annotator_id))
    for r in ordered:
        if r.petpw is None:
            continue
        for metric in SCATTER_METRICS:
            value = getattr(r, _METRIC_FIELD[metric])
            if value is None:
                continue
            out.append((r.segment_id, r.annotator_id, metric, value, r.petpw))
    return out


def petpw_by_annotator(rows: Sequence[SegmentScores]) -> dict[str, list[float]]:
    result: dict[str, list[float]] = {}
    for annotator in _annotators(rows):
        view = _view_rows(rows, annotator)
        values = [r.petpw for r in view]
        if any(v is None for v in values):
            raise CliError(f"missing PETPW for annotator '{annotator}'")
        result[annotator] = values
    return result


# ---------------------------------------------------------------------------
# commands


def _write_tsv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    lines = ["\t".join(header)]
    for row in rows:
        lines.append("\t".join("" if v is None else _fmt_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return escape_field(str(value))


def _check_finite(label: str, values: Iterable[float]) -> None:
    for v in values:
        if not math.isfinite(v):
            raise RuntimeError(f"internal invariant violation: non-finite {label}")


def cmd_score(args: argparse.Namespace) -> None:
    corpus = load_corpus(args.segments, args.sessions)
    rows = score_corpus(corpus)
    write_scores(rows, args.out)


def _rank_table_rows(table: dict) -> list[Sequence]:
    return [
        (
            r["metric"],
            r["rho"],
            r["satra"],
            r["best"],
            r["p_vs_best"],
            r["sig_vs_best"],
        )
        for r in table["rows"]
    ]


_RANK_HEADER = ("metric", "rho", "satra", "best", "p_vs_best", "sig_vs_best")
_PAIR_HEADER = ("metric_a", "metric_b", "t", "p", "significant")


def cmd_rank_eval(args: argparse.Namespace) -> None:
    rows = read_scores(args.scores)
    view = _view_rows(rows, args.annotator)
    table = build_rank_table(view, williams_alpha=args.williams_alpha)
    _check_finite("rho/satra", (v for r in table["rows"] for v in (r["rho"], r["satra"])))
    out = Path(args.out)
    _write_tsv(out, _RANK_HEADER, _rank_table_rows(table))
    pairs_path = out.with_name(out.name + ".williams.tsv")
    _write_tsv(
        pairs_path,
        _PAIR_HEADER,
        (
            (p["metric_a"], p["metric_b"], p["t"], p["p"], p["significant"])
            for p in table["williams_pairs"]
        ),
    )


def cmd_loo(args: argparse.Namespace) -> None:
    rows = read_scores(args.scores)
    table = build_loo_table(rows)
    _check_finite("rho/satra", (v for r in table["rows"] for v in (r["rho"], r["satra"])))
    _write_tsv(
        Path(args.out),
        ("annotator", "metric", "rho", "satra"),
        ((r["annotator"], r["metric"], r["rho"], r["satra"]) for r in table["rows"]),
    )


def cmd_tails(args: argparse.Namespace) -> None:
    rows = read_scores(args.scores)
    table = build_tails(rows, args.side, args.max, args.step)
    _write_tsv(
        Path(args.out),
        ("cut", "metric", "overlap"),
        ((r["cut"], r["metric"], r["overlap"]) for r in table["rows"]),
    )


def _stage(name: str, fn: Callable, *fn_args):
    try:
        return fn(*fn_args)
    except (CorpusError, CliError, ValueError, OSError) as exc:
        raise CliError(f"{name}: {exc}") from None


def cmd_report(args: argparse.Namespace) -> None:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    corpus = _stage("load", load_corpus, args.segments, args.sessions)
    rows = _stage("score", score_corpus, corpus)
    _stage("score", write_scores, rows, out_dir / "scores.tsv")

    notes: list[str] = []
    stats_table = _stage("stats", build_stats_table, rows)
    notes.extend(f"stats: {n}" for n in dict.fromkeys(stats_table["notes"]))
    _write_tsv(
        out_dir / "stats.tsv",
        ("annotator", "metric", "mean", "std"),
        (
            (r["annotator"], r["metric"], r["mean"], r["std"])
            for r in stats_table["rows"]
        ),
    )

    annotator_views = _annotators(rows) + [ALL_ANNOTATORS]
    ranking_table: dict[str, dict] = {}
    ranking_rows: list[Sequence] = []
    pair_rows: list[Sequence] = []
    for annotator in annotator_views:
        view = _stage("rank-eval", _view_rows, rows, annotator)
        table = _stage("rank-eval", build_rank_table, view, args.williams_alpha)
        ranking_table[annotator] = table
        notes.extend(f"rank-eval[{annotator}]: {n}" for n in table["notes"])
        for r in table["rows"]:
            ranking_rows.append(
                (annotator, r["metric"], r["rho"], r["satra"], r["best"], r["p_vs_best"], r["sig_vs_best"])
            )
        for p in table["williams_pairs"]:
            pair_rows.append(
                (annotator, p["metric_a"], p["metric_b"], p["t"], p["p"], p["significant"])
            )
    _check_finite(
        "rho/satra",
        (
            v
            for table in ranking_table.values()
            for r in table["rows"]
            for v in (r["rho"], r["satra"])
        ),
    )
    _write_tsv(out_dir / "ranking.tsv", ("annotator",) + _RANK_HEADER, ranking_rows)
    _write_tsv(out_dir / "williams.tsv", ("annotator",) + _PAIR_HEADER, pair_rows)

    loo_table = _stage("loo", build_loo_table, rows)
    notes.extend(f"loo: {n}" for n in loo_table["notes"])
    _write_tsv(
        out_dir / "loo.tsv",
        ("annotator", "metric", "rho", "satra"),
        ((r["annotator"], r["metric"], r["rho"], r["satra"]) for r in loo_table["rows"]),
    )

    n_segments = len({r.segment_id for r in rows})
    max_cut = min(500, n_segments)
    step = min(50, max_cut)
    tails = {}
    for side in ("best", "worst"):
        table = _stage("tails", build_tails, rows, side, max_cut, step)
        tails[side] = table["rows"]
        notes.extend(f"tails[{side}]: {n}" for n in table["notes"])
        _write_tsv(
            out_dir / f"tails_{side}.tsv",
            ("cut", "metric", "overlap"),
            ((r["cut"], r["metric"], r["overlap"]) for r in table["rows"]),
        )

    annotators = _annotators(rows)
    if len(annotators) >= 2:
        clusters = _stage(
            "clusters",
            lambda: cluster_annotators(petpw_by_annotator(rows), args.ks_alpha),
        )
    else:
        clusters = []
        notes.append("clusters: fewer than 2 annotators; clustering skipped")
    _write_tsv(
        out_dir / "clusters.tsv",
        ("cluster", "annotator"),
        (
            (idx, annotator)
            for idx, cluster in enumerate(clusters)
            for annotator in cluster
        ),
    )

    scatter = _stage("scatter", build_scatter, rows)
    with open(out_dir / "scatter.csv", "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("segment_id", "annotator", "metric_name", "metric_value", "petpw"))
        for sid, annotator, metric, value, gold in scatter:
            writer.writerow((sid, annotator, metric, repr(value), repr(gold)))

    report = {
        "stats_tables": stats_table["rows"],
        "ranking_table": {
            annotator: {
                "rows": table["rows"],
                "williams_pairs": table["williams_pairs"],
            }
            for annotator, table in ranking_table.items()
        },
        "loo_table": loo_table["rows"],
        "tails": tails,
        "clusters": clusters,
        "scatter_csv": "scatter.csv",
        "notes": notes,
    }
    (out_dir / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pe-rank",
        description="Evaluate how well MT quality metrics rank segments by post-editing effort.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score every (segment, annotator) pair")
    p.add_argument("--segments", required=True, help="segments.tsv path")
    p.add_argument("--sessions", required=True, help="sessions.tsv path")
    p.add_argument("--out", required=True, help="output scores.tsv path")
    p.set_defaults(fn=cmd_score)

    p = sub.add_parser("rank-eval", help="Spearman/SATRA table for one annotator view")
    p.add_argument("--scores", required=True, help="scores.tsv path")
    p.add_argument("--annotator", required=True, help="annotator id or ALL")
    p.add_argument("--out", required=True, help="output TSV path")
    p.add_argument("--williams-alpha", type=float, default=0.01)
    p.set_defaults(fn=cmd_rank_eval)

    p = sub.add_parser("loo", help="leave-one-out evaluation per annotator")
    p.add_argument("--scores", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_loo)

    p = sub.add_parser("tails", help="gold/metric tail overlap per cut")
    p.add_argument("--scores", required=True)
    p.add_argument("--side", required=True, choices=("best", "worst"))
    p.add_argument("--max", type=int, required=True, help="largest cut")
    p.add_argument("--step", type=int, required=True, help="cut spacing")
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_tails)

    p = sub.add_parser("report", help="full pipeline into a report directory")
    p.add_argument("--segments", required=True)
    p.add_argument("--sessions", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--williams-alpha", type=float, default=0.01)
    p.add_argument("--ks-alpha", type=float, default=0.05)
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args.fn(args)
    except (CorpusError, CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - invariant violations land here
        print(f"internal error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
