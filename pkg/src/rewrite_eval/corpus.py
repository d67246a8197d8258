"""Parallel evaluation corpora: line-parallel text, M2 gold edits, and intermediate CSVs."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .errors import LoadError, M2ParseError, MetricError, StructureError

__all__ = [
    "Task",
    "SentenceRecord",
    "Corpus",
    "GoldEdit",
    "GoldEditSet",
    "load_parallel",
    "load_m2",
    "attach_references",
    "read_lines",
    "save_intermediate",
    "load_intermediate",
]


class Task(str, Enum):
    GRAMMAR = "grammar"
    SIMPLIFICATION = "simplification"


@dataclass(frozen=True)
class SentenceRecord:
    id: int
    source: str
    references: tuple[str, ...] = ()
    prediction: Optional[str] = None


@dataclass(frozen=True)
class Corpus:
    task: Task
    records: tuple[SentenceRecord, ...]
    reference_count: int = 0
    ragged: bool = False

    def __post_init__(self):
        object.__setattr__(self, "task", Task(self.task))
        object.__setattr__(self, "records", tuple(self.records))
        for i, rec in enumerate(self.records):
            if rec.id != i:
                raise StructureError(f"record ids must be contiguous from 0; position {i} has id {rec.id}")
            if not rec.source.strip():
                raise LoadError("empty source sentence", line_number=i + 1)
        if not self.ragged:
            for rec in self.records:
                if len(rec.references) != self.reference_count:
                    raise StructureError(
                        f"record {rec.id} has {len(rec.references)} references, expected {self.reference_count}"
                    )
        with_pred = sum(rec.prediction is not None for rec in self.records)
        if 0 < with_pred < len(self.records):
            raise StructureError(
                f"predictions must be present for all records or none ({with_pred} of {len(self.records)})"
            )

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def has_predictions(self) -> bool:
        return bool(self.records) and self.records[0].prediction is not None

    @property
    def sources(self) -> list[str]:
        return [r.source for r in self.records]

    @property
    def predictions(self) -> list[Optional[str]]:
        return [r.prediction for r in self.records]

    def require_predictions(self) -> None:
        if not self.has_predictions:
            raise MetricError("corpus has no predictions to score")

    def require_references(self) -> None:
        missing = [r.id for r in self.records if not r.references]
        if missing:
            raise MetricError(f"{len(missing)} record(s) have no references (first id {missing[0]})")

    def with_predictions(self, predictions: Sequence[str]) -> "Corpus":
        if len(predictions) != len(self.records):
            raise StructureError(
                f"got {len(predictions)} predictions for {len(self.records)} records"
            )
        records = tuple(replace(r, prediction=p) for r, p in zip(self.records, predictions))
        return replace(self, records=records)

    def with_references(self, references: Sequence[Sequence[str]]) -> "Corpus":
        if len(references) != len(self.records):
            raise StructureError(f"got references for {len(references)} of {len(self.records)} records")
        counts = {len(r) for r in references}
        ragged = len(counts) > 1
        records = tuple(replace(rec, references=tuple(refs)) for rec, refs in zip(self.records, references))
        return replace(self, records=records, reference_count=max(counts, default=0), ragged=ragged)

    @classmethod
    def from_lists(
        cls,
        sources: Sequence[str],
        references: Sequence[Sequence[str]] = (),
        predictions: Optional[Sequence[str]] = None,
        task: Task | str = Task.GRAMMAR,
    ) -> "Corpus":
        """Build a corpus from in-memory lists; ``references[j][i]`` is reference ``j`` of sentence ``i``."""
        for j, refs in enumerate(references):
            if len(refs) != len(sources):
                raise StructureError(f"reference set {j} has {len(refs)} lines, source has {len(sources)}")
        if predictions is not None and len(predictions) != len(sources):
            raise StructureError(f"predictions have {len(predictions)} lines, source has {len(sources)}")
        records = tuple(
            SentenceRecord(
                id=i,
                source=src,
                references=tuple(refs[i] for refs in references),
                prediction=None if predictions is None else predictions[i],
            )
            for i, src in enumerate(sources)
        )
        return cls(Task(task), records, reference_count=len(references))


@dataclass(frozen=True)
class GoldEdit:
    """A gold edit; ``replacements`` holds every acceptable alternative (M2 ``a||b``)."""

    start: int
    end: int
    replacements: tuple[str, ...] = ("",)

    @property
    def replacement(self) -> str:
        return self.replacements[0]


@dataclass(frozen=True)
class GoldEditSet:
    sentence_id: int
    annotator_id: int
    edits: tuple[GoldEdit, ...] = field(default_factory=tuple)


def read_lines(path) -> list[str]:
    with open(path, encoding="utf-8", newline="") as fh:
        data = fh.read()
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [ln[:-1] if ln.endswith("\r") else ln for ln in lines]


def load_parallel(
    source_path,
    reference_paths: Iterable = (),
    prediction_path=None,
    task: Task | str = Task.GRAMMAR,
) -> Corpus:
    """Load line-parallel source, reference and prediction files.

    Lines lose only a trailing carriage return; other whitespace is kept.
    Empty reference and prediction lines are legitimate values. An empty
    source line is a :class:`LoadError`.
    """
    sources = read_lines(source_path)
    for i, line in enumerate(sources, start=1):
        if not line.strip():
            raise LoadError("empty source sentence", path=source_path, line_number=i)

    def checked(path) -> list[str]:
        lines = read_lines(path)
        if len(lines) != len(sources):
            raise StructureError(
                f"{path} has {len(lines)} lines but source {source_path} has {len(sources)}"
            )
        return lines

    references = [checked(p) for p in reference_paths]
    predictions = checked(prediction_path) if prediction_path is not None else None
    return Corpus.from_lists(sources, references, predictions, task=task)


def attach_references(corpus: Corpus, reference_paths: Iterable) -> Corpus:
    """Add line-parallel reference files to an existing corpus (e.g. one loaded from M2)."""
    columns = []
    for path in reference_paths:
        lines = read_lines(path)
        if len(lines) != len(corpus):
            raise StructureError(f"{path} has {len(lines)} lines but the corpus has {len(corpus)} records")
        columns.append(lines)
    return corpus.with_references([tuple(col[i] for col in columns) for i in range(len(corpus))])


def _parse_a_line(line: str, lineno: int, path) -> tuple[int, GoldEdit | None]:
    fields = line[2:].split("|||")
    if len(fields) < 6:
        raise M2ParseError(f"expected 6 '|||'-separated fields, got {len(fields)}", path, lineno)
    span = fields[0].split()
    try:
        start, end = int(span[0]), int(span[1])
        annotator = int(fields[5])
    except (ValueError, IndexError):
        raise M2ParseError(f"bad span or annotator in {line!r}", path, lineno) from None
    etype = fields[1].strip()
    if etype == "noop" or (start, end) == (-1, -1):
        return annotator, None
    if not 0 <= start <= end:
        raise M2ParseError(f"invalid span {start} {end}", path, lineno)
    alternatives = tuple(
        "" if alt.strip() == "-NONE-" else " ".join(alt.split()) for alt in fields[2].split("||")
    )
    return annotator, GoldEdit(start, end, alternatives)


def load_m2(gold_path, task: Task | str = Task.GRAMMAR) -> tuple[Corpus, list[GoldEditSet]]:
    """Parse an M2 gold file into a prediction-less corpus and per-annotator edit sets.

    A sentence without any ``A`` lines produces no edit sets; scoring treats
    it as a single annotator asking for no edits. ``noop`` lines yield an
    annotator with an empty edit list.
    """
    sources: list[str] = []
    # per sentence: annotator id -> list of edits
    groups: list[dict[int, list[GoldEdit]]] = []
    for lineno, line in enumerate(read_lines(gold_path), start=1):
        if not line.strip():
            continue
        if line.startswith("S "):
            sources.append(" ".join(line[2:].split()))
            groups.append({})
            if not sources[-1]:
                raise LoadError("empty source sentence", gold_path, lineno)
        elif line.startswith("A "):
            if not sources:
                raise StructureError(f"{gold_path}:line {lineno}: 'A' line before any 'S' line")
            annotator, edit = _parse_a_line(line, lineno, gold_path)
            edits = groups[-1].setdefault(annotator, [])
            if edit is not None:
                n_tokens = len(sources[-1].split())
                if edit.end > n_tokens:
                    raise M2ParseError(
                        f"span {edit.start} {edit.end} exceeds sentence length {n_tokens}", gold_path, lineno
                    )
                edits.append(edit)
        else:
            raise M2ParseError(f"unrecognised line {line[:20]!r}", gold_path, lineno)

    gold: list[GoldEditSet] = []
    for sid, by_annotator in enumerate(groups):
        for annotator in sorted(by_annotator):
            edits = sorted(by_annotator[annotator], key=lambda e: (e.start, e.end))
            for prev, cur in zip(edits, edits[1:]):
                if prev.end > cur.start:
                    raise StructureError(
                        f"{gold_path}: sentence {sid} annotator {annotator} has overlapping edits "
                        f"({prev.start},{prev.end}) and ({cur.start},{cur.end})"
                    )
            gold.append(GoldEditSet(sid, annotator, tuple(edits)))
    records = tuple(SentenceRecord(i, s) for i, s in enumerate(sources))
    return Corpus(Task(task), records, reference_count=0, ragged=True), gold


def save_intermediate(corpus: Corpus, path) -> None:
    """Write ``id,source,prediction`` rows (RFC 4180 quoting, UTF-8) ordered by id."""
    corpus.require_predictions()
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(["id", "source", "prediction"])
        for rec in sorted(corpus.records, key=lambda r: r.id):
            writer.writerow([rec.id, rec.source, rec.prediction])


def load_intermediate(path, task: Task | str = Task.GRAMMAR) -> Corpus:
    """Read a CSV written by :func:`save_intermediate` back into a corpus without references."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["id", "source", "prediction"]:
            raise StructureError(f"{path}: expected header id,source,prediction, got {header}")
        rows = sorted(((int(r[0]), r[1], r[2]) for r in reader), key=lambda r: r[0])
    records = tuple(SentenceRecord(i, src, (), pred) for i, src, pred in rows)
    return Corpus(Task(task), records)


def _writable_dir(path) -> None:
    # raises OSError if the directory cannot be created or written
    os.makedirs(path, exist_ok=True)
    probe = Path(path) / ".write-probe"
    with open(probe, "w"):
        pass
    probe.unlink()
