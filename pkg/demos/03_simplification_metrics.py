#!/usr/bin/env python3
# Scoring simplification: SARI with its add/keep/delete parts, readability, length.

from rewrite_eval import Corpus, Task, fkgl, fre, length_stats, sari
from rewrite_eval.simp_metrics import sentence_sari

one = sentence_sari("the big cat sat", "the cat", ["the cat sat"])
print("SARI:", round(one.sari, 4))
print("add   ", [round(x, 2) for x in one.add_n])
print("keep  ", [round(x, 2) for x in one.keep_n])
print("delete", [round(x, 2) for x in one.delete_n])

sources = [
    "The committee, after a lengthy deliberation, ultimately decided to postpone the vote.",
    "Elephants are remarkably intelligent animals that live in complex social groups.",
]
refs = [
    ["The committee decided to delay the vote.", "After a long talk, the vote was put off."],
    ["Elephants are very smart animals.", "Elephants are smart and live in groups."],
]
preds = ["The committee delayed the vote.", "Elephants are smart animals that live in groups."]
corpus = Corpus.from_lists(sources, [[r[0] for r in refs], [r[1] for r in refs]], preds, Task.SIMPLIFICATION)

score = sari(corpus)
print(f"corpus SARI={score.sari:.2f} add={score.add:.2f} keep={score.keep:.2f} delete={score.delete:.2f}")

# Flesch Reading Ease goes up and the grade level goes down as text gets simpler
for text in sources + preds:
    print(f"FRE={fre(text):7.2f}  FKGL={fkgl(text):6.2f}  {text}")

stats = length_stats(corpus)
print(f"L_in={stats.l_in} L_pred={stats.l_pred} L_ref={stats.l_ref} compression={stats.compression:.3f}")
