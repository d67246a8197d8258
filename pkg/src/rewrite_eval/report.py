"""Metric reports: evaluation of a scored corpus and deterministic JSON/CSV serialization."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from .corpus import Corpus, GoldEditSet, Task
from .errors import UndefinedInputError
from .gec_metrics import derive_gold_from_references, gleu, gleu_sentence_stats, m2_sentence_stats, PRFScore
from .hallucination import hallucination_rate
from .simp_metrics import fkgl, fre, length_stats, sari, sentence_sari
from .tokenization import tokenize

__all__ = [
    "MetricReport",
    "evaluate_gec",
    "evaluate_simp",
    "evaluate",
    "mean_readability",
    "file_digest",
    "config_hash",
    "to_json",
    "write_report",
    "write_csv",
]

FLOAT_DECIMALS = 6


@dataclass
class MetricReport:
    task: Task
    metrics: dict[str, Any]
    provenance: dict[str, Any] = field(default_factory=dict)
    per_sentence: Optional[list[dict[str, Any]]] = None
    stages: Optional[list[dict[str, Any]]] = None

    def as_dict(self) -> dict:
        out = {"task": Task(self.task).value, "metrics": self.metrics, "provenance": self.provenance}
        if self.per_sentence is not None:
            out["per_sentence"] = self.per_sentence
        if self.stages is not None:
            out["stages"] = self.stages
        return out


def mean_readability(texts: Sequence[str]) -> tuple[Optional[float], Optional[float], int]:
    """Mean FRE and FKGL over texts that contain words, and how many texts were skipped."""
    fres, fkgls = [], []
    for text in texts:
        try:
            fres.append(fre(text))
            fkgls.append(fkgl(text))
        except UndefinedInputError:
            continue
    skipped = len(texts) - len(fres)
    if not fres:
        return None, None, skipped
    return math.fsum(fres) / len(fres), math.fsum(fkgls) / len(fkgls), skipped


def evaluate_gec(
    corpus: Corpus,
    gold: Optional[Sequence[GoldEditSet]] = None,
    beta: float = 0.5,
    max_n: int = 4,
    recognizer=None,
    per_sentence: bool = False,
) -> tuple[dict, Optional[list[dict]]]:
    """GLEU, M2 P/R/F-beta and entity hallucination for a grammar corpus.

    Without an explicit ``gold`` every reference becomes one annotator.
    GLEU is skipped (reported as None) if the corpus has no references.
    """
    corpus.require_predictions()
    has_refs = all(r.references for r in corpus.records)
    if gold is None:
        gold = derive_gold_from_references(corpus)
    m2_rows = m2_sentence_stats(corpus, gold, beta)
    prf = PRFScore(sum(s.tp for s in m2_rows), sum(s.fp for s in m2_rows), sum(s.fn for s in m2_rows), beta)
    ner = hallucination_rate(corpus, recognizer)
    f_key = "m2_f05" if beta == 0.5 else f"m2_f{beta:g}".replace(".", "")
    metrics = {
        "gleu": gleu(corpus, max_n) if has_refs else None,
        "m2_precision": prf.precision,
        "m2_recall": prf.recall,
        f_key: prf.f_beta,
        "m2_beta": beta,
        "m2_tp": prf.tp,
        "m2_fp": prf.fp,
        "m2_fn": prf.fn,
        "ner_rate": ner.rate,
    }
    rows = None
    if per_sentence:
        gleu_rows = gleu_sentence_stats(corpus, max_n) if has_refs else [None] * len(corpus)
        rows = []
        for rec, g, m, h in zip(corpus.records, gleu_rows, m2_rows, ner.per_example):
            rows.append({
                "id": rec.id,
                "gleu": None if g is None else g.score,
                "gleu_reference": None if g is None else g.reference_index,
                "tp": m.tp,
                "fp": m.fp,
                "fn": m.fn,
                "annotator": m.annotator_id,
                "hallucinated": h.hallucinated,
                "novel_entities": list(h.novel_entities),
            })
    return metrics, rows


def _optional(fn, text):
    try:
        return fn(text)
    except UndefinedInputError:
        return None


def evaluate_simp(
    corpus: Corpus, max_n: int = 4, recognizer=None, per_sentence: bool = False
) -> tuple[dict, Optional[list[dict]]]:
    """SARI with its breakdown, mean readability of predictions, lengths and hallucination."""
    corpus.require_predictions()
    breakdown = sari(corpus, max_n)
    lengths = length_stats(corpus)
    mean_fre, mean_fkgl, skipped = mean_readability(corpus.predictions)
    ner = hallucination_rate(corpus, recognizer)
    metrics = {
        "sari": breakdown.sari,
        "sari_add": breakdown.add,
        "sari_keep": breakdown.keep,
        "sari_delete": breakdown.delete,
        "sari_add_n": list(breakdown.add_n),
        "sari_keep_n": list(breakdown.keep_n),
        "sari_delete_n": list(breakdown.delete_n),
        "fre": mean_fre,
        "fkgl": mean_fkgl,
        "readability_skipped": skipped,
        "l_in": lengths.l_in,
        "l_pred": lengths.l_pred,
        "l_ref": lengths.l_ref,
        "compression": lengths.compression,
        "lengthening": lengths.lengthening,
        "ner_rate": ner.rate,
    }
    rows = None
    if per_sentence:
        rows = []
        for rec, h in zip(corpus.records, ner.per_example):
            rows.append({
                "id": rec.id,
                "sari": sentence_sari(rec.source, rec.prediction, rec.references, max_n).sari,
                "fre": _optional(fre, rec.prediction),
                "fkgl": _optional(fkgl, rec.prediction),
                "len_in": len(tokenize(rec.source).words),
                "len_pred": len(tokenize(rec.prediction).words),
                "hallucinated": h.hallucinated,
                "novel_entities": list(h.novel_entities),
            })
    return metrics, rows


def evaluate(corpus: Corpus, gold=None, beta=0.5, max_n=4, recognizer=None, per_sentence=False):
    if corpus.task is Task.GRAMMAR:
        return evaluate_gec(corpus, gold, beta, max_n, recognizer, per_sentence)
    return evaluate_simp(corpus, max_n, recognizer, per_sentence)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"), default=str)


def config_hash(settings: dict) -> str:
    return hashlib.sha256(_canonical(settings).encode("utf-8")).hexdigest()


def _round_floats(obj):
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return None
        value = round(obj, FLOAT_DECIMALS)
        return 0.0 if value == 0 else value
    if isinstance(obj, dict):
        return {str(k): _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def to_json(report: MetricReport) -> str:
    """Stable JSON: sorted keys, floats rounded to six decimals, trailing newline."""
    return json.dumps(_round_floats(report.as_dict()), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_report(report: MetricReport, path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_json(report))


def _flatten(prefix: str, value, out: list):
    if isinstance(value, list):
        for k, v in enumerate(value, start=1):
            _flatten(f"{prefix}_{k}", v, out)
    else:
        out.append((prefix, value))


def write_csv(report: MetricReport, path) -> None:
    """Plot-ready long table with columns ``stage,metric,value`` (stage is ``final`` or a number)."""
    rows: list[tuple] = []
    blocks = [("final", report.metrics)]
    blocks += [(str(s["index"]), s["metrics"]) for s in (report.stages or [])]
    for stage, metrics in blocks:
        flat: list = []
        for name in sorted(metrics):
            _flatten(name, _round_floats(metrics[name]), flat)
        rows.extend((stage, name, value) for name, value in flat)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["stage", "metric", "value"])
        writer.writerows(rows)
