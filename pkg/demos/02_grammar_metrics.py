#!/usr/bin/env python3
# Scoring grammar correction: edit extraction, M2 precision/recall/F0.5 and GLEU.

from rewrite_eval import Corpus, apply_edits, extract_edits, gleu, m2_score
from rewrite_eval.gec_metrics import derive_gold_from_references, m2_sentence_stats

# Edits come from a token-level Levenshtein alignment. Adjacent changes merge.
src, tgt = "I am going to school", "I go to school"
edits = extract_edits(src, tgt)
print(edits.edits)
print(apply_edits(src, edits.edits))  # round-trips to the target tokens

sources = ["He go to school every day .", "She have two cat .", "They was happy ."]
refs_a = ["He goes to school every day .", "She has two cats .", "They were happy ."]
refs_b = ["He goes to school each day .", "She has two cats .", "They were glad ."]
system = ["He goes to school every day .", "She has two cat .", "They is happy ."]

corpus = Corpus.from_lists(sources, [refs_a, refs_b], system)

# Without an M2 file, every reference becomes an annotator.
gold = derive_gold_from_references(corpus)
score = m2_score(corpus, gold)
print(f"tp={score.tp} fp={score.fp} fn={score.fn}")
print(f"P={score.precision:.3f} R={score.recall:.3f} F0.5={score.f_beta:.3f}")

# which annotator each sentence was scored against
for row in m2_sentence_stats(corpus, gold):
    print(row)

# GLEU: min(precision, recall) over pooled 1..4-grams, best reference per sentence
print("GLEU corpus  :", round(gleu(corpus), 4))
print("GLEU sentence:", round(gleu(corpus, aggregate="sentence"), 4))
