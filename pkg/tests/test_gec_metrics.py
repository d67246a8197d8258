import random

import pytest
from hypothesis import given, strategies as st

import oracles
from synthetic import WORDS
from rewrite_eval.corpus import Corpus, GoldEdit, GoldEditSet
from rewrite_eval.errors import MetricError, StructureError
from rewrite_eval.gec_metrics import (
    Edit,
    PRFScore,
    align,
    apply_edits,
    derive_gold_from_references,
    extract_edits,
    f_beta,
    gleu,
    gleu_sentence_stats,
    m2_score,
    m2_sentence_stats,
    ngram_counts,
    references_from_gold,
)


def test_single_substitution():
    assert extract_edits("He go home", "He goes home").edits == (Edit(1, 2, "goes"),)


def test_identical_sentences_have_no_edits():
    assert extract_edits("He goes home", "He goes home").edits == ()


def test_substitution_and_deletion_merge():
    assert extract_edits("I am going", "I go").edits == (Edit(1, 3, "go"),)


def test_merge_rule_agrees_with_exhaustive_search():
    src, tgt = "I am going".split(), "I go".split()
    assert oracles.edits_oracle(src, tgt) == [(1, 3, "go")]
    # several optimal alignments exist; preference order picks one, merging makes them agree
    optimal = {ops for c, ops in oracles.all_alignments(tuple(src), tuple(tgt)) if c == 2}
    assert len(optimal) > 1


def test_case_only_change_is_free_but_still_an_edit():
    assert align(["the", "cat"], ["The", "cat"]) == ["S", "M"]
    assert extract_edits("the cat", "The cat").edits == (Edit(0, 1, "The"),)


def test_pure_insertion_and_deletion():
    assert extract_edits("a c", "a b c").edits == (Edit(1, 1, "b"),)
    assert extract_edits("a b c", "a c").edits == (Edit(1, 2, ""),)
    assert extract_edits("", "x y").edits == (Edit(0, 0, "x y"),)


def test_edits_match_brute_force_on_random_pairs():
    rng = random.Random(11)
    for _ in range(300):
        src = [rng.choice(WORDS[:6]) for _ in range(rng.randint(0, 5))]
        tgt = [rng.choice(WORDS[:6]) for _ in range(rng.randint(0, 5))]
        assert [tuple(e) for e in extract_edits(src, tgt).edits] == oracles.edits_oracle(src, tgt)


token = st.sampled_from(["a", "b", "c", "A", "the", ".", "x"])


@given(st.lists(token, max_size=8), st.lists(token, max_size=8))
def test_round_trip(src, tgt):
    edits = extract_edits(src, tgt).edits
    assert apply_edits(src, edits) == tgt


@given(st.lists(token, max_size=8), st.lists(token, max_size=8))
def test_edits_sorted_disjoint_and_in_range(src, tgt):
    edits = extract_edits(src, tgt).edits
    for e in edits:
        assert 0 <= e.start <= e.end <= len(src)
    for a, b in zip(edits, edits[1:]):
        # merged runs never touch: at least one matched token separates them
        assert a.end < b.start


def _corpus(sources, refs, preds):
    return Corpus.from_lists(sources, [refs], preds)


def test_m2_exact_match():
    corpus = _corpus(["He go home"], ["He goes home"], ["He goes home"])
    gold = [GoldEditSet(0, 0, (GoldEdit(1, 2, ("goes",)),))]
    score = m2_score(corpus, gold)
    assert (score.tp, score.fp, score.fn) == (1, 0, 0)
    assert score.precision == score.recall == score.f_beta == 1.0


def test_m2_empty_hypothesis():
    corpus = _corpus(["a b c"], ["x b y"], ["a b c"])
    gold = [GoldEditSet(0, 0, (GoldEdit(0, 1, ("x",)), GoldEdit(2, 3, ("y",))))]
    score = m2_score(corpus, gold)
    assert (score.tp, score.fp, score.fn) == (0, 0, 2)
    assert score.recall == 0.0
    assert score.precision == 1.0
    assert score.f_beta == 0.0


def test_f_half_closed_form():
    assert f_beta(0.6, 0.3, 0.5) == 0.5


def test_prf_zero_over_zero_is_one():
    assert PRFScore(0, 0, 0).precision == 1.0
    assert PRFScore(0, 0, 0).recall == 1.0
    assert PRFScore(0, 0, 0).f_beta == 1.0
    assert PRFScore(0, 3, 2).f_beta == 0.0


def test_m2_best_annotator_and_tie_rule():
    corpus = _corpus(["He go home"], ["x"], ["He went home"])
    gold = [
        GoldEditSet(0, 2, (GoldEdit(1, 2, ("went",)),)),
        GoldEditSet(0, 0, (GoldEdit(1, 2, ("goes",)),)),
        GoldEditSet(0, 1, (GoldEdit(1, 2, ("went",)),)),
    ]
    stats = m2_sentence_stats(corpus, gold)
    assert stats[0].annotator_id == 1
    assert (stats[0].tp, stats[0].fp, stats[0].fn) == (1, 0, 0)


def test_m2_alternatives_and_whitespace_normalisation():
    corpus = _corpus(["a b"], ["x"], ["a  dog  house"])
    gold = [GoldEditSet(0, 0, (GoldEdit(1, 2, ("cat", "dog house")),))]
    assert m2_score(corpus, gold).tp == 1


def test_m2_matching_is_case_sensitive():
    corpus = _corpus(["the cat"], ["x"], ["the cat"])
    hyp_upper = _corpus(["the cat"], ["x"], ["The cat"])
    gold = [GoldEditSet(0, 0, (GoldEdit(0, 1, ("the",)),))]
    assert m2_score(hyp_upper, gold).tp == 0
    assert m2_score(corpus, gold).fn == 1


def test_m2_unannotated_sentence_means_no_edits_needed():
    corpus = _corpus(["a b", "c d"], ["x", "y"], ["a b", "c e"])
    score = m2_score(corpus, [])
    assert (score.tp, score.fp, score.fn) == (0, 1, 0)


def test_m2_errors():
    corpus = _corpus(["a"], ["a"], ["a"])
    with pytest.raises(StructureError):
        m2_score(corpus, [GoldEditSet(5, 0, ())])
    with pytest.raises(MetricError):
        m2_score(Corpus.from_lists(["a"]), [])


def _random_corpus(rng, n=6):
    sources, preds, refs0, refs1 = [], [], [], []
    for _ in range(n):
        src = [rng.choice(WORDS[:8]) for _ in range(rng.randint(1, 5))]
        mutate = lambda s: [rng.choice(WORDS[:8]) if rng.random() < 0.3 else t for t in s]
        sources.append(" ".join(src))
        preds.append(" ".join(mutate(src)))
        refs0.append(" ".join(mutate(src)))
        refs1.append(" ".join(mutate(src)))
    return sources, preds, refs0, refs1


@given(st.randoms(use_true_random=False))
def test_m2_permutation_invariant(rand):
    sources, preds, r0, r1 = _random_corpus(rand)
    order = list(range(len(sources)))
    rand.shuffle(order)
    pick = lambda xs: [xs[i] for i in order]
    a = Corpus.from_lists(sources, [r0, r1], preds)
    b = Corpus.from_lists(pick(sources), [pick(r0), pick(r1)], pick(preds))
    sa, sb = m2_score(a, derive_gold_from_references(a)), m2_score(b, derive_gold_from_references(b))
    assert (sa.tp, sa.fp, sa.fn) == (sb.tp, sb.fp, sb.fn)


@given(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50), st.sampled_from([0.25, 0.5, 1.0, 2.0]))
def test_f_beta_monotone_in_tp(tp, fp, fn, beta):
    assert PRFScore(tp + 1, fp, fn, beta).f_beta >= PRFScore(tp, fp, fn, beta).f_beta - 1e-12


def test_gleu_hand_example():
    corpus = _corpus(["the cat sat"], ["the cat sat"], ["the cat"])
    stats = gleu_sentence_stats(corpus, max_n=2)[0]
    assert (stats.matches, stats.hyp_total, stats.ref_total) == (3, 3, 5)
    assert gleu(corpus, max_n=2) == pytest.approx(0.6, abs=1e-12)


def test_gleu_perfect_and_disjoint():
    assert gleu(_corpus(["a b c", "d e"], ["a b c", "e d"], ["a b c", "e d"])) == 1.0
    assert gleu(_corpus(["a b c"], ["a b c"], ["x y"])) == 0.0
    assert gleu(_corpus(["a b c"], ["a b c"], [""])) == 0.0


def test_gleu_sentence_aggregate():
    corpus = _corpus(["a", "b"], ["the cat sat", "x"], ["the cat", "x"])
    assert gleu(corpus, max_n=2, aggregate="sentence") == pytest.approx((0.6 + 1.0) / 2)
    with pytest.raises(MetricError):
        gleu(corpus, aggregate="median")


def test_gleu_requires_references():
    with pytest.raises(MetricError):
        gleu(Corpus.from_lists(["a"], [], ["a"]))


@given(st.randoms(use_true_random=False))
def test_gleu_reference_order_invariant_and_bounded(rand):
    sources, preds, r0, r1 = _random_corpus(rand)
    forward = gleu(Corpus.from_lists(sources, [r0, r1], preds))
    backward = gleu(Corpus.from_lists(sources, [r1, r0], preds))
    assert forward == backward
    assert 0.0 <= forward <= 1.0


@given(st.randoms(use_true_random=False))
def test_gleu_is_one_when_hypothesis_is_some_reference(rand):
    sources, _, r0, r1 = _random_corpus(rand)
    preds = [a if rand.random() < 0.5 else b for a, b in zip(r0, r1)]
    assert gleu(Corpus.from_lists(sources, [r0, r1], preds)) == 1.0


def test_ngram_counts_pooled():
    counts = ngram_counts(["a", "b", "a"], max_n=2)
    assert counts == {("a",): 2, ("b",): 1, ("a", "b"): 1, ("b", "a"): 1}


def test_references_from_gold_applies_edits():
    corpus = Corpus(task="grammar", records=Corpus.from_lists(["He go to school", "fine"]).records)
    gold = [
        GoldEditSet(0, 0, (GoldEdit(1, 2, ("goes",)),)),
        GoldEditSet(0, 1, (GoldEdit(1, 2, ("went",)), GoldEdit(2, 3, ("",)))),
    ]
    assert references_from_gold(corpus, gold) == [("He goes to school", "He went school"), ("fine",)]
