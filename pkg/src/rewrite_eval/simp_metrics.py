"""Simplification metrics: SARI, Flesch Reading Ease, Flesch-Kincaid grade, and length statistics."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .corpus import Corpus
from .errors import MetricError, UndefinedInputError
from .tokenization import count_sentences, count_syllables, tokenize

__all__ = [
    "SariBreakdown",
    "LengthStats",
    "ReadabilityCounts",
    "sari_ngram_scores",
    "sentence_sari",
    "sari",
    "readability_counts",
    "fre",
    "fkgl",
    "length_stats",
]


def _ratio(num: float, denom: float) -> float:
    # nothing required and nothing done counts as perfect
    if denom == 0:
        return 1.0
    return num / denom


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _reference_weights(references: Sequence[Counter]) -> dict:
    """Mean count of every n-gram over the references (the fraction containing it, for unique n-grams)."""
    total: Counter = Counter()
    for ref in references:
        total.update(ref)
    k = len(references)
    return {g: c / k for g, c in total.items()}


def sari_ngram_scores(
    source: Sequence[str], prediction: Sequence[str], references: Sequence[Sequence[str]], n: int
) -> tuple[float, float, float]:
    """(add, keep, delete) scores in [0, 1] for one sentence and one n-gram order.

    Multiset intersection is ``min`` and difference is ``max(0, a - b)``,
    with references collapsed into fractional counts.
    """
    inp = _ngrams(source, n)
    pred = _ngrams(prediction, n)
    ref = _reference_weights([_ngrams(r, n) for r in references])
    grams = set(inp) | set(pred) | set(ref)

    kept = kept_good = kept_gold = 0.0
    deleted = deleted_good = 0.0
    added = added_good = added_gold = 0.0
    for g in grams:
        i, p, r = inp.get(g, 0), pred.get(g, 0), ref.get(g, 0.0)
        kept += min(i, p)
        kept_gold += min(i, r)
        kept_good += min(i, p, r)
        del_sys, del_gold = max(0, i - p), max(0.0, i - r)
        deleted += del_sys
        deleted_good += min(del_sys, del_gold)
        add_sys, add_gold = max(0, p - i), max(0.0, r - i)
        added += add_sys
        added_gold += add_gold
        added_good += min(add_sys, add_gold)

    keep = _f1(_ratio(kept_good, kept), _ratio(kept_good, kept_gold))
    delete = _ratio(deleted_good, deleted)
    add = _f1(_ratio(added_good, added), _ratio(added_good, added_gold))
    return add, keep, delete


@dataclass(frozen=True)
class SariBreakdown:
    """Per-order SARI components on a 0-100 scale; index 0 is unigrams."""

    add_n: tuple[float, ...]
    keep_n: tuple[float, ...]
    delete_n: tuple[float, ...]

    @property
    def sari(self) -> float:
        parts = self.add_n + self.keep_n + self.delete_n
        return math.fsum(parts) / len(parts)

    @property
    def add(self) -> float:
        return math.fsum(self.add_n) / len(self.add_n)

    @property
    def keep(self) -> float:
        return math.fsum(self.keep_n) / len(self.keep_n)

    @property
    def delete(self) -> float:
        return math.fsum(self.delete_n) / len(self.delete_n)


def _sari_tokens(text: str) -> list[str]:
    return [t.lower() for t in tokenize(text).texts]


def sentence_sari(source: str, prediction: str, references: Sequence[str], max_n: int = 4) -> SariBreakdown:
    if not references:
        raise MetricError("SARI needs at least one reference")
    src, pred = _sari_tokens(source), _sari_tokens(prediction)
    refs = [_sari_tokens(r) for r in references]
    scores = [sari_ngram_scores(src, pred, refs, n) for n in range(1, max_n + 1)]
    return SariBreakdown(
        tuple(100 * s[0] for s in scores),
        tuple(100 * s[1] for s in scores),
        tuple(100 * s[2] for s in scores),
    )


def sari(corpus: Corpus, max_n: int = 4) -> SariBreakdown:
    """Corpus SARI: each per-order component is averaged over sentences, then all 3*max_n are averaged."""
    corpus.require_predictions()
    corpus.require_references()
    if max_n < 1:
        raise MetricError("max_n must be at least 1")
    per_sentence = [sentence_sari(r.source, r.prediction, r.references, max_n) for r in corpus.records]
    if not per_sentence:
        raise MetricError("cannot compute SARI on an empty corpus")

    def mean_by_order(attr):
        return tuple(
            math.fsum(getattr(s, attr)[k] for s in per_sentence) / len(per_sentence) for k in range(max_n)
        )

    return SariBreakdown(mean_by_order("add_n"), mean_by_order("keep_n"), mean_by_order("delete_n"))


@dataclass(frozen=True)
class ReadabilityCounts:
    words: int
    sentences: int
    syllables: int


def readability_counts(text: str) -> ReadabilityCounts:
    words = tokenize(text).words
    if not words:
        raise UndefinedInputError(f"readability is undefined for text without words: {text!r}")
    return ReadabilityCounts(
        words=len(words),
        sentences=count_sentences(text),
        syllables=sum(count_syllables(w.text) for w in words),
    )


def fre(text: str) -> float:
    """Flesch Reading Ease, unclamped.

    >>> round(fre("The cat sat on the mat."), 9)
    116.145
    """
    c = readability_counts(text)
    return 206.835 - 1.015 * (c.words / c.sentences) - 84.6 * (c.syllables / c.words)


def fkgl(text: str) -> float:
    c = readability_counts(text)
    return 0.39 * (c.words / c.sentences) + 11.8 * (c.syllables / c.words) - 15.59


@dataclass(frozen=True)
class LengthStats:
    l_in: float
    l_pred: float
    l_ref: Optional[float]
    compression: float

    @property
    def lengthening(self) -> bool:
        return self.compression > 1


def length_stats(corpus: Corpus) -> LengthStats:
    """Mean word counts of inputs, predictions and references, and their compression ratio."""
    corpus.require_predictions()
    if not len(corpus):
        raise MetricError("cannot compute length statistics on an empty corpus")
    in_counts = [len(tokenize(r.source).words) for r in corpus.records]
    if 0 in in_counts:
        raise UndefinedInputError(f"source {in_counts.index(0)} has no words")
    pred_counts = [len(tokenize(r.prediction).words) for r in corpus.records]
    ref_counts = [len(tokenize(ref).words) for r in corpus.records for ref in r.references]
    n = len(corpus)
    total_in, total_pred = sum(in_counts), sum(pred_counts)
    return LengthStats(
        l_in=total_in / n,
        l_pred=total_pred / n,
        l_ref=sum(ref_counts) / len(ref_counts) if ref_counts else None,
        compression=total_pred / total_in,
    )
