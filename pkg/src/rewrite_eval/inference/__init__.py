from .backends import (
    Backend,
    CompletionRequest,
    EchoBackend,
    FileBackend,
    HttpBackend,
    TransientBackendError,
    build_backend,
    clean_completion,
    complete,
)
from .cascade import CascadeJob, CascadeResult, RecordFailure, Stage, StageResult, run_cascade
from .prompts import (
    DecodingConfig,
    PromptTemplate,
    Strategy,
    default_decoding,
    default_template,
    render_prompt,
)

__all__ = [
    "Backend",
    "CompletionRequest",
    "EchoBackend",
    "FileBackend",
    "HttpBackend",
    "TransientBackendError",
    "build_backend",
    "clean_completion",
    "complete",
    "CascadeJob",
    "CascadeResult",
    "RecordFailure",
    "Stage",
    "StageResult",
    "run_cascade",
    "DecodingConfig",
    "PromptTemplate",
    "Strategy",
    "default_decoding",
    "default_template",
    "render_prompt",
]
