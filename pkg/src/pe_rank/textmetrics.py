"""Sentence-level text similarity metrics over token lists.

All operations are pure functions of their inputs. The same functions serve
two roles: scored against an independent reference they give TER/BLEU/METEOR,
scored against the post-edited version of the hypothesis they give the
human-targeted variants (HTER/HBLEU/HMETEOR).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

# Standard TER shift constraints: blocks of at most this many tokens may be
# moved; the move distance is unbounded.
MAX_SHIFT_BLOCK = 10

# Exact chunk minimization for METEOR is bounded to this sentence length;
# longer sentences fall back to the greedy aligner.
METEOR_EXACT_LIMIT = 20

# Chunk minimization over maximum matchings is NP-hard in general; natural
# sentences stay far below this node budget, but adversarial inputs (many
# repeats of the same token) would otherwise take exponential time. When the
# budget runs out the best alignment found so far is used.
METEOR_SEARCH_BUDGET = 400_000


@dataclass(frozen=True)
class TerResult:
    edits: int
    ref_len: int
    score: float
    breakdown: dict[str, int]


@dataclass(frozen=True)
class MeteorResult:
    matches: int
    chunks: int
    precision: float
    recall: float
    fmean: float
    penalty: float
    score: float


def word_edit_distance(hyp: Sequence[str], ref: Sequence[str]) -> int:
    """Levenshtein distance over tokens with unit costs."""
    if len(hyp) < len(ref):  # fewer columns, same result (the metric is symmetric)
        hyp, ref = ref, hyp
    prev = list(range(len(ref) + 1))
    for i, h in enumerate(hyp, 1):
        cur = [i] + [0] * len(ref)
        for j, r in enumerate(ref, 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (h != r))
        prev = cur
    return prev[-1]


def _edit_breakdown(hyp: Sequence[str], ref: Sequence[str]) -> tuple[int, int, int]:
    """(insertions, deletions, substitutions) along one fixed-preference optimal path.

    Transforms hyp into ref: a deletion removes a hyp token, an insertion adds
    a ref token. Co-optimal paths can trade a substitution for other kinds, so
    the backtrace prefers match, then substitution, then deletion.
    """
    n, m = len(hyp), len(ref)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dist[i][0] = i
    for j in range(m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            dist[i][j] = min(
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
                dist[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1]),
            )
    ins = dels = subs = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and dist[i][j] == dist[i - 1][j - 1] + (hyp[i - 1] != ref[j - 1]):
            if hyp[i - 1] != ref[j - 1]:
                subs += 1
            i -= 1
            j -= 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return ins, dels, subs


def _shift_candidates(
    hyp: list[str], ref: Sequence[str]
) -> Iterator[tuple[int, int, int, list[str]]]:
    """Yield (block_start, block_len, dest, shifted_hyp) for every legal shift.

    A block is shiftable when it exactly matches a contiguous reference span
    and does not already match the reference at its current position.
    """
    n = len(hyp)
    for b in range(n):
        for length in range(1, min(MAX_SHIFT_BLOCK, n - b) + 1):
            block = hyp[b : b + length]
            if block == list(ref[b : b + length]):
                continue  # aligned in place; moving it is not a repair
            removed = hyp[:b] + hyp[b + length :]
            seen_dests: set[int] = set()
            for rpos in range(len(ref) - length + 1):
                if list(ref[rpos : rpos + length]) != block:
                    continue
                dest = min(rpos, len(removed))
                if dest == b or dest in seen_dests:
                    continue
                seen_dests.add(dest)
                yield b, length, dest, removed[:dest] + block + removed[dest:]


def ter(hyp: Sequence[str], ref: Sequence[str]) -> TerResult:
    """Translation edit rate with greedy block shifts.

    Repeatedly applies the shift that most reduces the remaining edit
    distance (ties: smallest block start, then shortest block, then leftmost
    destination); each shift costs one edit and is only taken when it strictly
    reduces the distance, so total edits never exceed the plain edit distance.
    """
    if not ref:
        raise ValueError("empty reference")
    current = list(hyp)
    shifts = 0
    dist = word_edit_distance(current, ref)
    while dist > 0:
        best_key: tuple[int, int, int, int] | None = None
        best_hyp: list[str] | None = None
        for b, length, dest, shifted in _shift_candidates(current, ref):
            gain = dist - word_edit_distance(shifted, ref)
            if gain < 1:
                continue
            key = (-gain, b, length, dest)
            if best_key is None or key < best_key:
                best_key = key
                best_hyp = shifted
        if best_key is None:
            break
        shifts += 1
        dist += best_key[0]  # key stores -gain
        current = best_hyp or current
    ins, dels, subs = _edit_breakdown(current, ref)
    edits = shifts + dist
    return TerResult(
        edits=edits,
        ref_len=len(ref),
        score=edits / len(ref),
        breakdown={
            "insertions": ins,
            "deletions": dels,
            "substitutions": subs,
            "shifts": shifts,
        },
    )


def _ngram_counts(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(hyp: Sequence[str], ref: Sequence[str], max_n: int = 4) -> float:
    """Sentence BLEU with add-one smoothing on zero counts for n >= 2.

    Returns 0 when the hypothesis is empty or shares no unigram with the
    reference. Brevity penalty exp(1 - |ref|/|hyp|) applies only to short
    hypotheses.
    """
    if max_n < 1:
        raise ValueError("max_n must be >= 1")
    if not ref:
        raise ValueError("empty reference")
    if not hyp:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        hyp_counts = _ngram_counts(hyp, n)
        ref_counts = _ngram_counts(ref, n)
        matched = sum(min(count, ref_counts[g]) for g, count in hyp_counts.items())
        total = max(len(hyp) - n + 1, 0)
        if n == 1:
            if matched == 0:
                return 0.0
        elif matched == 0:
            matched += 1
            total += 1
        log_sum += math.log(matched / total)
    brevity = math.exp(1 - len(ref) / len(hyp)) if len(hyp) < len(ref) else 1.0
    return brevity * math.exp(log_sum / max_n)


def _greedy_chunks(hyp: Sequence[str], ref: Sequence[str], need: Counter) -> int:
    ref_positions: dict[str, list[int]] = {}
    for j, w in enumerate(ref):
        ref_positions.setdefault(w, []).append(j)
    used = [False] * len(ref)
    left = dict(need)
    chunks = 0
    ext = -1  # ref index that would continue the current chunk
    for i, w in enumerate(hyp):
        if left.get(w, 0) == 0:
            ext = -1
            continue
        if 0 <= ext < len(ref) and ref[ext] == w and not used[ext]:
            j = ext
        else:
            # start a new chunk where the longest common run begins
            j = -1
            best_run = -1
            for p in ref_positions[w]:
                if used[p]:
                    continue
                run = 0
                while (
                    i + run < len(hyp)
                    and p + run < len(ref)
                    and hyp[i + run] == ref[p + run]
                    and not used[p + run]
                ):
                    run += 1
                if run > best_run:
                    best_run = run
                    j = p
            chunks += 1
        used[j] = True
        left[w] -= 1
        ext = j + 1
    return chunks


def _longest_common_run(hyp: Sequence[str], ref: Sequence[str]) -> int:
    best = 0
    prev = [0] * (len(ref) + 1)
    for i in range(1, len(hyp) + 1):
        cur = [0] * (len(ref) + 1)
        for j in range(1, len(ref) + 1):
            if hyp[i - 1] == ref[j - 1]:
                cur[j] = prev[j - 1] + 1
                if cur[j] > best:
                    best = cur[j]
        prev = cur
    return best


def _exact_min_chunks(
    hyp: Sequence[str], ref: Sequence[str], need: Counter, upper: int
) -> int:
    """Minimum chunk count over all maximum one-to-one alignments.

    Depth-first over hypothesis positions with branch-and-bound. Chunks only
    grow as matches are added, and the remaining matches need at least
    ceil(remaining / longest-common-run) further chunks (minus one if a chunk
    is currently open), so partial states that cannot beat the incumbent are
    pruned.
    """
    ref_positions: dict[str, list[int]] = {}
    for j, w in enumerate(ref):
        ref_positions.setdefault(w, []).append(j)
    # occurrences of hyp[i] at or after i, for the may-we-skip test
    occ_after = [0] * len(hyp)
    tally: Counter = Counter()
    for i in range(len(hyp) - 1, -1, -1):
        tally[hyp[i]] += 1
        occ_after[i] = tally[hyp[i]]
    max_run = max(1, _longest_common_run(hyp, ref))
    total_needed = sum(need.values())
    matched_of: Counter = Counter()
    best = upper
    seen: dict[tuple[int, int, int], int] = {}
    nodes = 0

    def dfs(i: int, mask: int, ext_j: int, chunks: int, matched: int) -> None:
        nonlocal best, nodes
        if nodes >= METEOR_SEARCH_BUDGET:
            return
        nodes += 1
        remaining = total_needed - matched
        floor = -(-remaining // max_run)  # ceil
        if ext_j >= 0 and floor > 0:
            floor -= 1  # the open chunk can absorb one run
        if chunks + floor >= best:
            return
        key = (i, mask, ext_j)
        prior = seen.get(key)
        if prior is not None and prior <= chunks:
            return
        seen[key] = chunks
        if i == len(hyp):
            best = chunks
            return
        w = hyp[i]
        needed = need[w] - matched_of[w]
        if needed > 0:
            candidates = []
            for j in ref_positions[w]:
                if mask >> j & 1:
                    continue
                if j == ext_j:
                    candidates.append((-(len(ref) + 1), j))  # extension first
                    continue
                run = 0
                while (
                    i + run < len(hyp)
                    and j + run < len(ref)
                    and hyp[i + run] == ref[j + run]
                    and not mask >> (j + run) & 1
                ):
                    run += 1
                candidates.append((-run, j))
            candidates.sort()
            matched_of[w] += 1
            for _, j in candidates:
                dfs(
                    i + 1,
                    mask | (1 << j),
                    j + 1,
                    chunks + (0 if j == ext_j else 1),
                    matched + 1,
                )
            matched_of[w] -= 1
        if needed <= 0 or occ_after[i] - 1 >= needed:
            dfs(i + 1, mask, -1, chunks, matched)

    dfs(0, 0, -1, 0, 0)
    return best


def meteor_lite(hyp: Sequence[str], ref: Sequence[str]) -> MeteorResult:
    """Exact-match METEOR with the original parameter set.

    Unigram matches are the per-type count minima; among all maximum
    alignments the one with the fewest chunks is chosen (exactly up to
    METEOR_EXACT_LIMIT tokens and METEOR_SEARCH_BUDGET nodes, greedily
    above either limit).
    """
    if not ref:
        raise ValueError("empty reference")
    hyp_counts = Counter(hyp)
    ref_counts = Counter(ref)
    need = Counter(
        {w: min(c, ref_counts[w]) for w, c in hyp_counts.items() if ref_counts[w]}
    )
    matches = sum(need.values())
    if matches == 0:
        return MeteorResult(0, 0, 0.0, 0.0, 0.0, 0.0, 0.0)
    chunks = _greedy_chunks(hyp, ref, need)
    if chunks > 1 and len(hyp) <= METEOR_EXACT_LIMIT and len(ref) <= METEOR_EXACT_LIMIT:
        chunks = _exact_min_chunks(hyp, ref, need, chunks)
    precision = matches / len(hyp)
    recall = matches / len(ref)
    fmean = 10 * precision * recall / (recall + 9 * precision)
    penalty = 0.5 * (chunks / matches) ** 3
    return MeteorResult(
        matches=matches,
        chunks=chunks,
        precision=precision,
        recall=recall,
        fmean=fmean,
        penalty=penalty,
        score=fmean * (1 - penalty),
    )
