"""Named-entity hallucination rate with a pluggable recognizer.

An example hallucinates when its prediction mentions an entity that its
input does not. The built-in :class:`HeuristicRecognizer` finds entities
from capitalization; anything with a ``__call__(text) -> EntitySet`` works in
its place, and :class:`CommandRecognizer` delegates to an external process.
"""

from __future__ import annotations

import re
import subprocess
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Iterable, Optional, Sequence

from .corpus import Corpus
from .errors import RewriteEvalError
from .tokenization import Kind, tokenize

__all__ = [
    "EntitySet",
    "normalize_entity",
    "load_stoplist",
    "HeuristicRecognizer",
    "CommandRecognizer",
    "recognize",
    "HallucinationReport",
    "hallucination_rate",
]


def normalize_entity(text: str) -> str:
    return " ".join(text.lower().split())


class EntitySet(frozenset):
    """A frozenset of normalized entity strings; empty strings are dropped."""

    def __new__(cls, entities: Iterable[str] = ()):
        normalized = (normalize_entity(e) for e in entities)
        return super().__new__(cls, (e for e in normalized if e))


def load_stoplist(path=None) -> frozenset[str]:
    """Read one lowercase token per line; the bundled list is used when ``path`` is None."""
    if path is None:
        text = resources.files("rewrite_eval").joinpath("data/stoplist.txt").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


_YEAR = re.compile(r"[12]\d{3}")


class HeuristicRecognizer:
    """Capitalization-based entity finder.

    Entities are maximal runs of capitalized word tokens inside a sentence,
    with common words from the stoplist trimmed off the front of each run
    (this is what drops a sentence-initial "The" or a lone "I"), plus
    standalone four-digit year-like numbers.
    """

    def __init__(self, stoplist: Optional[Iterable[str]] = None):
        self.stoplist = load_stoplist() if stoplist is None else frozenset(s.lower() for s in stoplist)

    def _runs(self, text: str) -> list[list[str]]:
        runs: list[list[str]] = []
        current: list[str] = []
        for tok in tokenize(text):
            if tok.kind is Kind.WORD and tok.text[0].isupper():
                current.append(tok.text)
                continue
            if current:
                runs.append(current)
                current = []
            if tok.kind is Kind.NUMBER and _YEAR.fullmatch(tok.text):
                runs.append([tok.text])
        if current:
            runs.append(current)
        return runs

    def __call__(self, text: str) -> EntitySet:
        entities = []
        for run in self._runs(text):
            while run and run[0].lower() in self.stoplist:
                run = run[1:]
            if run:
                entities.append(" ".join(run))
        return EntitySet(entities)

    def recognize_many(self, texts: Sequence[str]) -> list[EntitySet]:
        return [self(t) for t in texts]


class CommandRecognizer:
    """Run an external recognizer as a child process.

    The process receives one text per line on stdin and must print one line
    per text, each a tab-separated list of entities (an empty line for none).
    """

    def __init__(self, argv: Sequence[str], timeout: Optional[float] = None):
        self.argv = list(argv)
        self.timeout = timeout

    def recognize_many(self, texts: Sequence[str]) -> list[EntitySet]:
        payload = "".join(" ".join(t.split()) + "\n" for t in texts)
        proc = subprocess.run(
            self.argv, input=payload, capture_output=True, text=True, encoding="utf-8",
            timeout=self.timeout, check=False,
        )
        if proc.returncode != 0:
            raise RewriteEvalError(
                f"recognizer {self.argv[0]} exited with {proc.returncode}: {proc.stderr.strip()}"
            )
        lines = proc.stdout.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if len(lines) != len(texts):
            raise RewriteEvalError(
                f"recognizer {self.argv[0]} returned {len(lines)} lines for {len(texts)} texts"
            )
        return [EntitySet(line.rstrip("\r").split("\t")) for line in lines]

    def __call__(self, text: str) -> EntitySet:
        return self.recognize_many([text])[0]


_default = None


def recognize(text: str, recognizer: Optional[Callable[[str], EntitySet]] = None) -> EntitySet:
    global _default
    if recognizer is None:
        if _default is None:
            _default = HeuristicRecognizer()
        recognizer = _default
    return EntitySet(recognizer(text))


@dataclass(frozen=True)
class ExampleResult:
    id: int
    hallucinated: bool
    novel_entities: tuple[str, ...]


@dataclass(frozen=True)
class HallucinationReport:
    per_example: tuple[ExampleResult, ...]

    @property
    def rate(self) -> float:
        if not self.per_example:
            return 0.0
        return 100 * sum(e.hallucinated for e in self.per_example) / len(self.per_example)


def _recognize_all(recognizer, texts: Sequence[str]) -> list[EntitySet]:
    many = getattr(recognizer, "recognize_many", None)
    if many is not None:
        return [EntitySet(e) for e in many(texts)]
    return [EntitySet(recognizer(t)) for t in texts]


def hallucination_rate(corpus: Corpus, recognizer=None) -> HallucinationReport:
    """Percentage of examples whose prediction introduces at least one entity absent from the input."""
    corpus.require_predictions()
    if recognizer is None:
        recognizer = HeuristicRecognizer()
    records = sorted(corpus.records, key=lambda r: r.id)
    src_entities = _recognize_all(recognizer, [r.source for r in records])
    pred_entities = _recognize_all(recognizer, [r.prediction for r in records])
    results = []
    for rec, src, pred in zip(records, src_entities, pred_entities):
        novel = tuple(sorted(pred - src))
        results.append(ExampleResult(rec.id, bool(novel), novel))
    return HallucinationReport(tuple(results))
