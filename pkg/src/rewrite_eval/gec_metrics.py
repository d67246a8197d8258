"""Grammar-correction metrics: token edit extraction, M2-style P/R/F-beta, and GLEU."""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence

from .corpus import Corpus, GoldEdit, GoldEditSet
from .errors import MetricError, StructureError
from .tokenization import TokenSeq, tokenize

__all__ = [
    "Edit",
    "EditSet",
    "PRFScore",
    "SentenceM2",
    "SentenceGleu",
    "align",
    "extract_edits",
    "apply_edits",
    "f_beta",
    "m2_sentence_stats",
    "m2_score",
    "ngram_counts",
    "gleu_sentence_stats",
    "gleu",
    "derive_gold_from_references",
    "references_from_gold",
]

MATCH, SUBSTITUTE, DELETE, INSERT = "M", "S", "D", "I"


class Edit(NamedTuple):
    start: int
    end: int
    replacement: str


@dataclass(frozen=True)
class EditSet:
    sentence_id: int
    edits: tuple[Edit, ...]

    def __len__(self):
        return len(self.edits)

    def __iter__(self):
        return iter(self.edits)


def _texts(seq) -> list[str]:
    if isinstance(seq, str):
        return tokenize(seq).texts
    if isinstance(seq, TokenSeq):
        return seq.texts
    return list(seq)


def align(source: Sequence[str], target: Sequence[str]) -> list[str]:
    """Minimum-cost token alignment as a list of operation codes (M, S, D, I).

    Substituting tokens that differ only in case costs nothing but is still a
    substitution, so the edit survives. Among equal-cost alignments the
    backtrace prefers match, then substitution, deletion, insertion.
    """
    m, n = len(source), len(target)
    low_s = [t.lower() for t in source]
    low_t = [t.lower() for t in target]
    dist = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        dist[i][0] = i
    for j in range(1, n + 1):
        dist[0][j] = j
    for i in range(1, m + 1):
        row, prev = dist[i], dist[i - 1]
        for j in range(1, n + 1):
            sub = prev[j - 1] + (0 if low_s[i - 1] == low_t[j - 1] else 1)
            row[j] = min(sub, prev[j] + 1, row[j - 1] + 1)

    ops: list[str] = []
    i, j = m, n
    while i or j:
        here = dist[i][j]
        if i and j:
            diag = dist[i - 1][j - 1]
            if source[i - 1] == target[j - 1] and diag == here:
                ops.append(MATCH)
                i, j = i - 1, j - 1
                continue
            if source[i - 1] != target[j - 1] and diag + (low_s[i - 1] != low_t[j - 1]) == here:
                ops.append(SUBSTITUTE)
                i, j = i - 1, j - 1
                continue
        if i and dist[i - 1][j] + 1 == here:
            ops.append(DELETE)
            i -= 1
        else:
            ops.append(INSERT)
            j -= 1
    ops.reverse()
    return ops


def edits_from_ops(ops: Iterable[str], source: Sequence[str], target: Sequence[str]) -> list[Edit]:
    """Merge each maximal run of non-match operations into one span edit."""
    edits = []
    i = j = 0
    run_start = None
    for op in list(ops) + [MATCH]:
        if op == MATCH:
            if run_start is not None:
                si, sj = run_start
                edits.append(Edit(si, i, " ".join(target[sj:j])))
                run_start = None
            i, j = i + 1, j + 1
            continue
        if run_start is None:
            run_start = (i, j)
        if op in (SUBSTITUTE, DELETE):
            i += 1
        if op in (SUBSTITUTE, INSERT):
            j += 1
    return edits


def extract_edits(source, target, sentence_id: int = 0) -> EditSet:
    """Edits turning ``source`` into ``target`` (token sequences or raw strings)."""
    src, tgt = _texts(source), _texts(target)
    return EditSet(sentence_id, tuple(edits_from_ops(align(src, tgt), src, tgt)))


def apply_edits(source, edits: Iterable[Edit]) -> list[str]:
    tokens = _texts(source)
    for edit in sorted(edits, key=lambda e: (e.start, e.end), reverse=True):
        tokens[edit.start:edit.end] = edit.replacement.split()
    return tokens


def f_beta(precision: float, recall: float, beta: float = 0.5) -> float:
    if precision == 0 and recall == 0:
        return 0.0
    b2 = beta * beta
    return (1 + b2) * precision * recall / (b2 * precision + recall)


@dataclass(frozen=True)
class PRFScore:
    tp: int
    fp: int
    fn: int
    beta: float = 0.5

    @property
    def precision(self) -> float:
        denom = self.tp + self.fp
        return 1.0 if denom == 0 else self.tp / denom

    @property
    def recall(self) -> float:
        denom = self.tp + self.fn
        return 1.0 if denom == 0 else self.tp / denom

    @property
    def f_beta(self) -> float:
        return f_beta(self.precision, self.recall, self.beta)


class SentenceM2(NamedTuple):
    sentence_id: int
    tp: int
    fp: int
    fn: int
    annotator_id: int


def _norm(text: str) -> str:
    return " ".join(text.split())


def _count_matches(hyp: Sequence[Edit], gold: Sequence[GoldEdit]) -> int:
    accepted = {(g.start, g.end): {_norm(r) for r in g.replacements} for g in gold}
    return sum(
        1 for e in hyp if _norm(e.replacement) in accepted.get((e.start, e.end), ())
    )


def m2_sentence_stats(
    corpus: Corpus,
    gold: Sequence[GoldEditSet],
    beta: float = 0.5,
    tokenizer: Callable[[str], TokenSeq] = tokenize,
) -> list[SentenceM2]:
    """Per-sentence edit counts against the most favourable annotator."""
    corpus.require_predictions()
    by_sentence: dict[int, list[GoldEditSet]] = defaultdict(list)
    for gs in gold:
        if not 0 <= gs.sentence_id < len(corpus):
            raise StructureError(f"gold edits refer to unknown sentence id {gs.sentence_id}")
        by_sentence[gs.sentence_id].append(gs)

    stats = []
    for rec in corpus.records:
        src = tokenizer(rec.source)
        hyp = extract_edits(src, tokenizer(rec.prediction), rec.id).edits
        candidates = sorted(by_sentence.get(rec.id, ()), key=lambda g: g.annotator_id)
        if not candidates:
            candidates = [GoldEditSet(rec.id, 0, ())]
        best = None
        for gs in candidates:
            if any(e.end > len(src) for e in gs.edits):
                raise StructureError(
                    f"sentence {rec.id}: gold edit span exceeds {len(src)} source tokens"
                )
            tp = _count_matches(hyp, gs.edits)
            score = PRFScore(tp, len(hyp) - tp, len(gs.edits) - tp, beta)
            # strict '>' keeps the lowest annotator id on ties
            if best is None or score.f_beta > best[0].f_beta:
                best = (score, gs.annotator_id)
        score, annotator = best
        stats.append(SentenceM2(rec.id, score.tp, score.fp, score.fn, annotator))
    return stats


def m2_score(
    corpus: Corpus,
    gold: Sequence[GoldEditSet],
    beta: float = 0.5,
    tokenizer: Callable[[str], TokenSeq] = tokenize,
) -> PRFScore:
    """Corpus-level precision, recall and F-beta over extracted hypothesis edits.

    Counts are summed over sentences before the ratios are taken. For each
    sentence the annotator giving the best sentence F-beta is used; a
    sentence without gold sets counts as one annotator with no edits.
    """
    stats = m2_sentence_stats(corpus, gold, beta, tokenizer)
    return PRFScore(
        sum(s.tp for s in stats), sum(s.fp for s in stats), sum(s.fn for s in stats), beta
    )


def derive_gold_from_references(
    corpus: Corpus, tokenizer: Callable[[str], TokenSeq] = tokenize
) -> list[GoldEditSet]:
    """Treat every reference as one annotator whose edits are extracted from the source."""
    corpus.require_references()
    gold = []
    for rec in corpus.records:
        src = tokenizer(rec.source)
        for k, ref in enumerate(rec.references):
            edits = extract_edits(src, tokenizer(ref), rec.id).edits
            gold.append(
                GoldEditSet(rec.id, k, tuple(GoldEdit(e.start, e.end, (e.replacement,)) for e in edits))
            )
    return gold


def references_from_gold(corpus: Corpus, gold: Sequence[GoldEditSet]) -> list[tuple[str, ...]]:
    """One corrected sentence per annotator (first alternative of each edit), ordered by annotator id.

    Sentences without gold sets get their source as the only reference.
    """
    by_sentence: dict[int, list[GoldEditSet]] = defaultdict(list)
    for gs in gold:
        by_sentence[gs.sentence_id].append(gs)
    refs = []
    for rec in corpus.records:
        sets = sorted(by_sentence.get(rec.id, ()), key=lambda g: g.annotator_id)
        if not sets:
            refs.append((rec.source,))
            continue
        refs.append(tuple(
            " ".join(apply_edits(rec.source.split(), [Edit(e.start, e.end, e.replacement) for e in gs.edits]))
            for gs in sets
        ))
    return refs


def ngram_counts(tokens: Sequence[str], max_n: int = 4, min_n: int = 1) -> Counter:
    """All n-grams of orders ``min_n..max_n`` pooled into one multiset."""
    counts: Counter = Counter()
    for n in range(min_n, max_n + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i:i + n])] += 1
    return counts


class SentenceGleu(NamedTuple):
    sentence_id: int
    matches: int
    hyp_total: int
    ref_total: int
    reference_index: int

    @property
    def score(self) -> float:
        if self.hyp_total == 0 or self.ref_total == 0:
            return 0.0
        return min(self.matches / self.hyp_total, self.matches / self.ref_total)


def gleu_sentence_stats(corpus: Corpus, max_n: int = 4) -> list[SentenceGleu]:
    corpus.require_predictions()
    corpus.require_references()
    stats = []
    for rec in corpus.records:
        hyp = ngram_counts(tokenize(rec.prediction).texts, max_n)
        hyp_total = sum(hyp.values())
        best = None
        for k, ref_text in enumerate(rec.references):
            ref = ngram_counts(tokenize(ref_text).texts, max_n)
            cand = SentenceGleu(rec.id, sum((hyp & ref).values()), hyp_total, sum(ref.values()), k)
            # ties on score resolve on counts, never on reference position
            key = (cand.score, cand.matches, -cand.ref_total)
            if best is None or key > best[0]:
                best = (key, cand)
        stats.append(best[1])
    return stats


def gleu(corpus: Corpus, max_n: int = 4, aggregate: str = "corpus") -> float:
    """Multi-reference GLEU as min(precision, recall) over pooled 1..max_n-grams.

    With ``aggregate="corpus"`` matches and totals are summed over sentences
    (each against its best reference) before taking the minimum;
    ``aggregate="sentence"`` averages the per-sentence scores instead.
    """
    if max_n < 1:
        raise MetricError("max_n must be at least 1")
    stats = gleu_sentence_stats(corpus, max_n)
    if aggregate == "sentence":
        return math.fsum(s.score for s in stats) / len(stats) if stats else 0.0
    if aggregate != "corpus":
        raise MetricError(f"unknown GLEU aggregate {aggregate!r}")
    matches = sum(s.matches for s in stats)
    hyp_total = sum(s.hyp_total for s in stats)
    ref_total = sum(s.ref_total for s in stats)
    if hyp_total == 0 or ref_total == 0:
        return 0.0
    return min(matches / hyp_total, matches / ref_total)
