#!/usr/bin/env python3
# Named-entity hallucination: how often a rewrite mentions an entity its input did not.

from rewrite_eval import Corpus, HeuristicRecognizer, hallucination_rate, recognize

print(recognize("Paris is in France."))
print(recognize("The cat sat."))
print(recognize("He met Anna Maria Lopez in 1999."))

sources = ["We met in the park.", "The river was cold.", "Anna sings well.", "Prices rose."]
preds = ["We met in Paris.", "The river was cold.", "Anna sings well.", "Prices rose in 2021 in Berlin."]
report = hallucination_rate(Corpus.from_lists(sources, [], preds))
for row in report.per_example:
    print(row)
print("rate:", report.rate)

# Any callable from text to a set of strings can stand in for the heuristic.
table = {"We met in Paris.": {"paris"}}
print("stub rate:", hallucination_rate(Corpus.from_lists(sources, [], preds), lambda t: table.get(t, set())).rate)

# A custom stoplist changes what counts as a capitalized common word.
print(HeuristicRecognizer(stoplist={"prices"})("Prices rose in Berlin."))
