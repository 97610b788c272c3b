"""Loading, validation, and tokenization of post-editing evaluation corpora.

A corpus couples translation segments (source, MT output, independent
reference, optional DA score) with post-editing sessions (the PE'ed text, the
seconds it took, and the keystrokes pressed). Both sides arrive as UTF-8
tab-separated files; text fields are escaped so they never contain raw tabs
or newlines on disk.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

TokenList = list[str]

SEGMENT_REQUIRED = ("id", "system_id", "source", "mt", "reference")
SEGMENT_OPTIONAL = ("da",)
SESSION_REQUIRED = ("segment_id", "annotator_id", "pe_text", "pe_time_sec", "keystrokes")

# Annotator label reserved for the averaged view in score files.
ALL_ANNOTATORS = "ALL"


class CorpusError(ValueError):
    """Malformed corpus file or violated corpus invariant."""


@dataclass(frozen=True)
class Segment:
    """One translation unit: source, MT output, reference, optional DA."""

    id: str
    system_id: str
    source: str
    mt: str
    reference: str
    da: float | None = None


@dataclass(frozen=True)
class PESession:
    """One annotator's post-edit of one segment."""

    segment_id: str
    annotator_id: str
    pe_text: str
    pe_time_sec: float
    keystrokes: int


@dataclass(frozen=True)
class Corpus:
    """Immutable segment/session collection; safe for concurrent reads."""

    segments: tuple[Segment, ...]
    sessions: tuple[PESession, ...]
    annotators: frozenset[str]

    def segment_by_id(self) -> dict[str, Segment]:
        return {s.id: s for s in self.segments}

    def sessions_by_segment(self) -> dict[str, list[PESession]]:
        index: dict[str, list[PESession]] = {s.id: [] for s in self.segments}
        for sess in self.sessions:
            index[sess.segment_id].append(sess)
        for sessions in index.values():
            sessions.sort(key=lambda s: s.annotator_id)
        return index


@dataclass(frozen=True)
class ValidationWarning:
    kind: str  # "missing-session" | "zero-time" | "missing-da"
    message: str


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def tokenize(text: str) -> TokenList:
    """Lowercase and split into tokens.

    Whitespace separates chunks; leading and trailing punctuation characters
    of each chunk become single-character tokens of their own, interior
    punctuation stays attached ("it's" survives, "hours." splits).
    """
    tokens: TokenList = []
    for chunk in text.lower().split():
        lead: list[str] = []
        while chunk and _is_punct(chunk[0]):
            lead.append(chunk[0])
            chunk = chunk[1:]
        trail: list[str] = []
        while chunk and _is_punct(chunk[-1]):
            trail.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(lead)
        if chunk:
            tokens.append(chunk)
        tokens.extend(reversed(trail))
    return tokens


def mt_char_count(text: str) -> int:
    """Unicode scalar values in the raw text, excluding outer whitespace."""
    return len(text.strip())


def escape_field(value: str) -> str:
    return (
        value.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\n", "\\n")
        .replace("\r", "\\r")
    )


_UNESCAPES = {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}


def unescape_field(value: str) -> str:
    if "\\" not in value:
        return value
    out: list[str] = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch == "\\" and i + 1 < len(value) and value[i + 1] in _UNESCAPES:
            out.append(_UNESCAPES[value[i + 1]])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _iter_lines(source: str | Path | Iterable[str]) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source


def _parse_table(
    source: str | Path | Iterable[str],
    required: tuple[str, ...],
    optional: tuple[str, ...],
    label: str,
) -> Iterator[tuple[int, dict[str, str]]]:
    """Yield (line_number, row_dict) for each data row; line 1 is the header."""
    lines = _iter_lines(source)
    header: list[str] | None = None
    lineno = 0
    for raw in lines:
        lineno += 1
        line = raw.rstrip("\r\n")
        if not line:
            continue
        if header is None:
            header = line.split("\t")
            seen: set[str] = set()
            for col in header:
                if col in seen:
                    raise CorpusError(f"{label}: duplicate column '{col}'")
                seen.add(col)
            for col in required:
                if col not in header:
                    raise CorpusError(f"{label}: missing required column '{col}'")
            known = set(required) | set(optional)
            for col in header:
                if col not in known:
                    raise CorpusError(f"{label}: unexpected column '{col}'")
            continue
        fields = line.split("\t")
        if len(fields) != len(header):
            raise CorpusError(
                f"{label}: line {lineno}: expected {len(header)} fields, got {len(fields)}"
            )
        yield lineno, dict(zip(header, fields))
    if header is None:
        raise CorpusError(f"{label}: empty input (header row required)")


def _parse_float(raw: str, label: str, lineno: int, column: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise CorpusError(
            f"{label}: line {lineno}: non-numeric {column} {raw!r}"
        ) from None
    if value != value or value in (float("inf"), float("-inf")):
        raise CorpusError(f"{label}: line {lineno}: non-finite {column} {raw!r}")
    return value


def load_corpus(
    segments_source: str | Path | Iterable[str],
    sessions_source: str | Path | Iterable[str],
) -> Corpus:
    """Load and cross-validate the two corpus files.

    Raises CorpusError naming the offending id, column, or line for duplicate
    segment ids, missing columns, unparseable numbers, sessions that reference
    unknown segments, and empty text fields.
    """
    segments: list[Segment] = []
    by_id: dict[str, Segment] = {}
    for lineno, row in _parse_table(
        segments_source, SEGMENT_REQUIRED, SEGMENT_OPTIONAL, "segments"
    ):
        sid = unescape_field(row["id"])
        if not sid.strip():
            raise CorpusError(f"segments: line {lineno}: empty segment id")
        if sid in by_id:
            raise CorpusError(f"segments: duplicate segment id '{sid}'")
        mt = unescape_field(row["mt"])
        reference = unescape_field(row["reference"])
        if not mt.strip():
            raise CorpusError(f"segments: segment '{sid}': empty mt text")
        if not reference.strip():
            raise CorpusError(f"segments: segment '{sid}': empty reference text")
        da_raw = row.get("da", "")
        da = _parse_float(da_raw, "segments", lineno, "da") if da_raw else None
        seg = Segment(
            id=sid,
            system_id=unescape_field(row["system_id"]),
            source=unescape_field(row["source"]),
            mt=mt,
            reference=reference,
            da=da,
        )
        if not tokenize(seg.mt):
            raise CorpusError(f"segments: segment '{sid}': mt tokenizes to nothing")
        segments.append(seg)
        by_id[sid] = seg

    sessions: list[PESession] = []
    seen_pairs: set[tuple[str, str]] = set()
    for lineno, row in _parse_table(sessions_source, SESSION_REQUIRED, (), "sessions"):
        sid = unescape_field(row["segment_id"])
        if sid not in by_id:
            raise CorpusError(
                f"sessions: line {lineno}: unknown segment id '{sid}'"
            )
        annotator = unescape_field(row["annotator_id"])
        if not annotator.strip():
            raise CorpusError(f"sessions: line {lineno}: empty annotator id")
        if annotator == ALL_ANNOTATORS:
            raise CorpusError(
                f"sessions: line {lineno}: annotator id '{ALL_ANNOTATORS}' is reserved"
            )
        pair = (sid, annotator)
        if pair in seen_pairs:
            raise CorpusError(
                f"sessions: duplicate session for segment '{sid}', annotator '{annotator}'"
            )
        seen_pairs.add(pair)
        pe_text = unescape_field(row["pe_text"])
        if not pe_text.strip():
            raise CorpusError(f"sessions: line {lineno}: empty pe_text")
        pe_time = _parse_float(row["pe_time_sec"], "sessions", lineno, "pe_time_sec")
        if pe_time < 0:
            raise CorpusError(f"sessions: line {lineno}: negative pe_time_sec")
        try:
            keystrokes = int(row["keystrokes"])
        except ValueError:
            raise CorpusError(
                f"sessions: line {lineno}: non-numeric keystrokes {row['keystrokes']!r}"
            ) from None
        if keystrokes < 0:
            raise CorpusError(f"sessions: line {lineno}: negative keystrokes")
        sessions.append(
            PESession(
                segment_id=sid,
                annotator_id=annotator,
                pe_text=pe_text,
                pe_time_sec=pe_time,
                keystrokes=keystrokes,
            )
        )

    return Corpus(
        segments=tuple(segments),
        sessions=tuple(sessions),
        annotators=frozenset(s.annotator_id for s in sessions),
    )


def validate_corpus(corpus: Corpus) -> list[ValidationWarning]:
    """Report gaps without mutating anything; empty list means complete."""
    warnings: list[ValidationWarning] = []
    covered = {(s.segment_id, s.annotator_id) for s in corpus.sessions}
    for seg in corpus.segments:
        for annotator in sorted(corpus.annotators):
            if (seg.id, annotator) not in covered:
                warnings.append(
                    ValidationWarning(
                        kind="missing-session",
                        message=f"annotator '{annotator}' has no session for segment '{seg.id}'",
                    )
                )
    for sess in corpus.sessions:
        if sess.pe_time_sec == 0:
            warnings.append(
                ValidationWarning(
                    kind="zero-time",
                    message=(
                        f"zero post-editing time for segment '{sess.segment_id}', "
                        f"annotator '{sess.annotator_id}'"
                    ),
                )
            )
    for seg in corpus.segments:
        if seg.da is None:
            warnings.append(
                ValidationWarning(
                    kind="missing-da",
                    message=f"segment '{seg.id}' has no DA score",
                )
            )
    return warnings


def serialize_segments(corpus: Corpus) -> str:
    """Render segments as TSV text; inverse of the loader, field-exact."""
    lines = ["\t".join(SEGMENT_REQUIRED + SEGMENT_OPTIONAL)]
    for s in corpus.segments:
        da = "" if s.da is None else repr(s.da)
        lines.append(
            "\t".join(
                (
                    escape_field(s.id),
                    escape_field(s.system_id),
                    escape_field(s.source),
                    escape_field(s.mt),
                    escape_field(s.reference),
                    da,
                )
            )
        )
    return "\n".join(lines) + "\n"


def serialize_sessions(corpus: Corpus) -> str:
    lines = ["\t".join(SESSION_REQUIRED)]
    for s in corpus.sessions:
        lines.append(
            "\t".join(
                (
                    escape_field(s.segment_id),
                    escape_field(s.annotator_id),
                    escape_field(s.pe_text),
                    repr(s.pe_time_sec),
                    str(s.keystrokes),
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_corpus(corpus: Corpus, segments_path: str | Path, sessions_path: str | Path) -> None:
    Path(segments_path).write_text(serialize_segments(corpus), encoding="utf-8")
    Path(sessions_path).write_text(serialize_sessions(corpus), encoding="utf-8")
