#!/usr/bin/env python3
# Tokens, syllables and sentences: the counting layer every metric sits on.

from rewrite_eval import count_sentences, count_syllables, tokenize

text = "Don't simplify state-of-the-art models, said 3.5 people... Really?"
seq = tokenize(text)

for tok in seq:
    print(f"{tok.text:>18}  {tok.kind.value}")

# words are word and number tokens, punctuation is left out
print("words:", len(seq.words))

# vowel groups with a silent final e; never below 1
for word in ["cat", "make", "table", "simplification", "the"]:
    print(word, count_syllables(word))

# "3.5" is not a sentence boundary, "..." counts once
print("sentences:", count_sentences(text))
