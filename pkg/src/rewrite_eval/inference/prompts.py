from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..corpus import Task
from ..errors import UsageError

__all__ = ["Strategy", "DecodingConfig", "PromptTemplate", "render_prompt", "default_template", "default_decoding"]


class Strategy(str, Enum):
    GREEDY = "greedy"
    SAMPLED = "sampled"


DEFAULT_MAX_NEW_TOKENS = {Task.GRAMMAR: 60, Task.SIMPLIFICATION: 80}


@dataclass(frozen=True)
class DecodingConfig:
    strategy: Strategy = Strategy.GREEDY
    temperature: float = 0.0
    max_new_tokens: int = 60
    stop_marker: Optional[str] = "\n"

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.temperature < 0:
            raise UsageError("temperature must be >= 0")
        if self.max_new_tokens < 1:
            raise UsageError("max_new_tokens must be positive")

    @property
    def effective_temperature(self) -> float:
        """Temperature actually sent to a backend; greedy decoding always sends 0."""
        return 0.0 if self.strategy is Strategy.GREEDY else self.temperature


def default_decoding(task: Task | str) -> DecodingConfig:
    return DecodingConfig(max_new_tokens=DEFAULT_MAX_NEW_TOKENS[Task(task)])


@dataclass(frozen=True)
class PromptTemplate:
    task: Task
    prefix: str
    separator: str
    completion_cue: str

    def __post_init__(self):
        object.__setattr__(self, "task", Task(self.task))

    def render(self, text: str) -> str:
        return render_prompt(self, text)


_DEFAULTS = {
    Task.GRAMMAR: ("Correct this text: ", " | ", "Corrected:"),
    Task.SIMPLIFICATION: ("Simplify this text: ", " | ", "Simplified:"),
}


def default_template(task: Task | str) -> PromptTemplate:
    task = Task(task)
    return PromptTemplate(task, *_DEFAULTS[task])


def render_prompt(template: PromptTemplate, text: str) -> str:
    """``prefix + text + separator + completion_cue``, byte for byte; the input is not trimmed.

    >>> render_prompt(default_template("grammar"), "I goes home")
    'Correct this text: I goes home | Corrected:'
    """
    if not text:
        raise UsageError("cannot render a prompt for empty input")
    return template.prefix + text + template.separator + template.completion_cue
