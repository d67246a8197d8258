"""Random corpora over a small vocabulary whose syllable counts are known by hand."""

import random

from oracles import SYLLABLES

WORDS = sorted(SYLLABLES)
LOWER_WORDS = [w for w in WORDS if w.islower()]
PUNCT = [".", ",", "!", "?"]
CASE_FLIP = {"the": "The", "The": "the", "cat": "Cat", "Cat": "cat"}


def random_tokens(rng: random.Random, max_len: int = 6, min_len: int = 0, min_words: int = 0):
    length = rng.randint(min_len, max_len)
    tokens = [rng.choice(PUNCT) if rng.random() < 0.15 else rng.choice(WORDS) for _ in range(length)]
    while sum(t not in PUNCT for t in tokens) < min_words:
        tokens[rng.randrange(len(tokens))] = rng.choice(WORDS)
    return tokens


def perturb(rng: random.Random, tokens, max_len: int = 6):
    """A nearby sequence: a few random substitutions, deletions, insertions and case flips."""
    out = list(tokens)
    for _ in range(rng.randint(0, 3)):
        op = rng.choice("sdic")
        if op == "s" and out:
            out[rng.randrange(len(out))] = rng.choice(WORDS)
        elif op == "d" and out:
            del out[rng.randrange(len(out))]
        elif op == "i" and len(out) < max_len:
            out.insert(rng.randint(0, len(out)), rng.choice(WORDS))
        elif op == "c" and out:
            k = rng.randrange(len(out))
            out[k] = CASE_FLIP.get(out[k], out[k])
    return out[:max_len]


def tiny_corpus(rng: random.Random):
    """(sources, references[j][i], predictions) as token lists; at most 3 sentences, 2 refs, 6 tokens."""
    n_sent = rng.randint(1, 3)
    n_refs = rng.randint(1, 2)
    sources = [random_tokens(rng, min_len=1, min_words=1) for _ in range(n_sent)]
    refs = [[perturb(rng, s) for s in sources] for _ in range(n_refs)]
    preds = [perturb(rng, s) if rng.random() < 0.8 else random_tokens(rng) for s in sources]
    return sources, refs, preds
