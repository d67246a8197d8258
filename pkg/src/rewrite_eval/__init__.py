"""Evaluation toolkit for grammar correction and text simplification systems.

Metrics (GLEU, M2 P/R/F0.5, SARI, FRE/FKGL, compression, named-entity
hallucination rate), corpus loading, and single-pass or cascaded rewriting
through pluggable model backends.
"""

from .corpus import Corpus, GoldEdit, GoldEditSet, SentenceRecord, Task, load_m2, load_parallel, save_intermediate
from .errors import (
    BackendError,
    ConfigError,
    CorpusError,
    MetricError,
    PipelineError,
    RewriteEvalError,
    UndefinedInputError,
    UsageError,
)
from .gec_metrics import (
    Edit,
    EditSet,
    PRFScore,
    apply_edits,
    derive_gold_from_references,
    extract_edits,
    f_beta,
    gleu,
    m2_score,
)
from .hallucination import EntitySet, HeuristicRecognizer, hallucination_rate, recognize
from .inference import EchoBackend, FileBackend, HttpBackend, complete, render_prompt, run_cascade
from .pipeline import load_config, run_config
from .report import MetricReport, evaluate, to_json
from .simp_metrics import LengthStats, SariBreakdown, fkgl, fre, length_stats, sari
from .tokenization import TokenSeq, count_sentences, count_syllables, tokenize

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "GoldEdit",
    "GoldEditSet",
    "SentenceRecord",
    "Task",
    "load_m2",
    "load_parallel",
    "save_intermediate",
    "RewriteEvalError",
    "CorpusError",
    "ConfigError",
    "UsageError",
    "MetricError",
    "UndefinedInputError",
    "BackendError",
    "PipelineError",
    "Edit",
    "EditSet",
    "PRFScore",
    "apply_edits",
    "extract_edits",
    "gleu",
    "m2_score",
    "f_beta",
    "derive_gold_from_references",
    "EchoBackend",
    "FileBackend",
    "HttpBackend",
    "complete",
    "render_prompt",
    "run_cascade",
    "load_config",
    "run_config",
    "MetricReport",
    "evaluate",
    "to_json",
    "EntitySet",
    "HeuristicRecognizer",
    "hallucination_rate",
    "recognize",
    "LengthStats",
    "SariBreakdown",
    "fkgl",
    "fre",
    "length_stats",
    "sari",
    "TokenSeq",
    "count_sentences",
    "count_syllables",
    "tokenize",
]
