"""Rule-based tokenizer plus the word, syllable and sentence counters used by the metrics.

Tokens are produced by splitting on Unicode whitespace and then peeling
punctuation off both ends of every chunk. Apostrophes and hyphens inside a
word stay attached (``don't``, ``state-of-the-art``) and decimal numbers are
kept whole (``3.5``).

>>> [t.text for t in tokenize("He goes home.")]
['He', 'goes', 'home', '.']
>>> [t.kind.value for t in tokenize("3.5 Turbo,")]
['number', 'word', 'punctuation']
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

__all__ = [
    "Kind",
    "Token",
    "TokenSeq",
    "tokenize",
    "detokenize",
    "count_syllables",
    "count_sentences",
    "word_count",
]


class Kind(str, Enum):
    WORD = "word"
    NUMBER = "number"
    PUNCTUATION = "punctuation"


@dataclass(frozen=True)
class Token:
    text: str
    kind: Kind

    @property
    def is_word(self) -> bool:
        """True for tokens that count as words in readability and length statistics."""
        return self.kind is not Kind.PUNCTUATION


@dataclass(frozen=True)
class TokenSeq(Sequence[Token]):
    """An immutable token sequence that remembers the text it came from."""

    tokens: tuple[Token, ...]
    source_text: str = ""

    def __getitem__(self, index):
        if isinstance(index, slice):
            return TokenSeq(self.tokens[index], self.source_text)
        return self.tokens[index]

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __eq__(self, other):
        # source_text is provenance only; two sequences are equal when their tokens are
        if isinstance(other, TokenSeq):
            return self.tokens == other.tokens
        return NotImplemented

    def __hash__(self):
        return hash(self.tokens)

    @property
    def texts(self) -> list[str]:
        return [t.text for t in self.tokens]

    @property
    def words(self) -> list[Token]:
        return [t for t in self.tokens if t.is_word]


_NUMBER = re.compile(r"\d+(?:[.,]\d+)*")


def _is_core(ch: str) -> bool:
    return ch.isalnum()


def _punct_runs(chunk: str) -> list[str]:
    """Split an all-punctuation string into runs of one repeated character ("..." stays together)."""
    return [m.group(0) for m in re.finditer(r"(.)\1*", chunk, flags=re.DOTALL)]


def _classify(text: str) -> Kind:
    if not any(_is_core(c) for c in text):
        return Kind.PUNCTUATION
    if _NUMBER.fullmatch(text):
        return Kind.NUMBER
    return Kind.WORD


def tokenize(text: str) -> TokenSeq:
    tokens: list[Token] = []
    for chunk in text.split():
        start, end = 0, len(chunk)
        while start < end and not _is_core(chunk[start]):
            start += 1
        while end > start and not _is_core(chunk[end - 1]):
            end -= 1
        if start == end:
            tokens.extend(Token(p, Kind.PUNCTUATION) for p in _punct_runs(chunk))
            continue
        tokens.extend(Token(p, Kind.PUNCTUATION) for p in _punct_runs(chunk[:start]))
        core = chunk[start:end]
        tokens.append(Token(core, _classify(core)))
        tokens.extend(Token(p, Kind.PUNCTUATION) for p in _punct_runs(chunk[end:]))
    return TokenSeq(tuple(tokens), text)


def detokenize(tokens: TokenSeq | Sequence[Token]) -> str:
    """Join tokens with single spaces. ``tokenize(detokenize(t)) == t`` for any tokenizer output."""
    return " ".join(t.text for t in tokens)


_VOWEL_GROUP = re.compile(r"[aeiouy]+")


def count_syllables(word: str) -> int:
    """Estimate syllables as vowel groups, discounting a silent final ``e``.

    The final ``e`` is treated as silent when it forms its own vowel group,
    is not preceded by ``l`` (``table`` keeps two), and removing it leaves at
    least one syllable. Never returns less than 1.

    >>> count_syllables("simplification"), count_syllables("make"), count_syllables("the")
    (5, 1, 1)
    """
    lowered = word.lower()
    count = len(_VOWEL_GROUP.findall(lowered))
    if (
        count > 1
        and len(lowered) >= 2
        and lowered.endswith("e")
        and lowered[-2] not in "aeiouyl"
    ):
        count -= 1
    return max(count, 1)


_TERMINATOR = re.compile(r"[.!?]+(?=\s|$)")


def count_sentences(text: str) -> int:
    """Count sentences; a run of ``.``, ``!`` or ``?`` ends one sentence.

    A terminator run only counts when followed by whitespace or the end of
    the text, so ``3.5`` is not a boundary. Segments without any letter or
    digit are not sentences. Always at least 1.
    """
    segments = _TERMINATOR.split(text)
    return max(1, sum(1 for s in segments if any(c.isalnum() for c in s)))


def word_count(text: str | TokenSeq) -> int:
    seq = tokenize(text) if isinstance(text, str) else text
    return sum(1 for t in seq if t.is_word)
