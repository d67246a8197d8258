"""Single-pass and cascaded rewriting: stage ``k+1`` rewrites the output of stage ``k``."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence

from ..corpus import Corpus, _writable_dir, save_intermediate
from ..errors import BackendError, ConfigError, PipelineError, UsageError
from .backends import Backend, complete
from .prompts import DecodingConfig, PromptTemplate, render_prompt

__all__ = ["Stage", "CascadeJob", "RecordFailure", "StageResult", "CascadeResult", "run_cascade"]

log = logging.getLogger(__name__)

MAX_STAGES = 3


@dataclass(frozen=True)
class Stage:
    backend_id: str
    template: PromptTemplate
    decoding: DecodingConfig = field(default_factory=DecodingConfig)


@dataclass(frozen=True)
class CascadeJob:
    stages: tuple[Stage, ...]
    intermediate_dir: Optional[Path] = None
    max_workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if not 1 <= len(self.stages) <= MAX_STAGES:
            raise ConfigError(f"a cascade has 1 to {MAX_STAGES} stages, got {len(self.stages)}")
        if self.max_workers < 1:
            raise ConfigError("max_workers must be at least 1")


@dataclass(frozen=True)
class RecordFailure:
    record_id: int
    error: str


@dataclass(frozen=True)
class StageResult:
    index: int
    backend_id: str
    corpus: Corpus
    failures: tuple[RecordFailure, ...]
    intermediate_path: Optional[Path] = None


@dataclass(frozen=True)
class CascadeResult:
    corpus: Corpus
    stages: tuple[StageResult, ...]

    @property
    def failures(self) -> list[tuple[int, RecordFailure]]:
        return [(s.index, f) for s in self.stages for f in s.failures]


def _run_stage(
    index: int,
    stage: Stage,
    backend: Backend,
    corpus: Corpus,
    inputs: Sequence[str],
    max_workers: int,
    sleep: Callable[[float], None],
) -> tuple[list[str], list[RecordFailure]]:
    def one(rid: int):
        text = inputs[rid]
        try:
            prompt = render_prompt(stage.template, text)
            out = complete(
                backend, prompt, stage.decoding,
                text=text, record_id=rid, completion_cue=stage.template.completion_cue, sleep=sleep,
            )
            return out, None
        except (BackendError, UsageError) as exc:
            return text, RecordFailure(rid, f"{type(exc).__name__}: {exc}")

    ids = [r.id for r in corpus.records]
    if max_workers == 1:
        results = [one(rid) for rid in ids]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            # map preserves input order, so results line up with ids
            results = list(pool.map(one, ids))
    outputs = [r[0] for r in results]
    failures = [r[1] for r in results if r[1] is not None]
    if ids and len(failures) == len(ids):
        raise PipelineError(f"stage {index} ({stage.backend_id}): every record failed; first: {failures[0].error}")
    for f in failures:
        log.warning("stage %d record %d failed, carrying text forward: %s", index, f.record_id, f.error)
    return outputs, failures


def run_cascade(
    job: CascadeJob,
    corpus: Corpus,
    backends: Mapping[str, Backend],
    sleep: Callable[[float], None] = time.sleep,
) -> CascadeResult:
    """Run every stage over the corpus; stage 1 reads the sources, later stages the previous outputs.

    Records whose request fails keep their latest successful text and are
    listed in the stage's failures. After each stage an ``stage<k>.csv``
    intermediate is written when ``job.intermediate_dir`` is set.
    """
    missing = [s.backend_id for s in job.stages if s.backend_id not in backends]
    if missing:
        raise ConfigError(f"unregistered backend(s): {', '.join(sorted(set(missing)))}")
    for rec in corpus.records:
        if not rec.source:
            raise UsageError(f"record {rec.id} has an empty source")
    if job.intermediate_dir is not None:
        _writable_dir(job.intermediate_dir)

    current = corpus.sources
    stage_results = []
    for index, stage in enumerate(job.stages, start=1):
        outputs, failures = _run_stage(
            index, stage, backends[stage.backend_id], corpus, current, job.max_workers, sleep
        )
        staged = corpus.with_predictions(outputs)
        path = None
        if job.intermediate_dir is not None:
            path = Path(job.intermediate_dir) / f"stage{index}.csv"
            save_intermediate(staged, path)
        stage_results.append(StageResult(index, stage.backend_id, staged, tuple(failures), path))
        current = outputs
    return CascadeResult(stage_results[-1].corpus, tuple(stage_results))
