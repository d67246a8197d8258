import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from synthetic import tiny_corpus
from rewrite_eval.corpus import Corpus, Task
from rewrite_eval.errors import MetricError, UndefinedInputError
from rewrite_eval.simp_metrics import fkgl, fre, length_stats, sari, sari_ngram_scores, sentence_sari
from rewrite_eval.tokenization import tokenize


def simp(sources, refs, preds):
    return Corpus.from_lists(sources, refs, preds, Task.SIMPLIFICATION)


# 1345/18, enumerated by hand: add (100, 100, 0, 100), keep (80, 0, 100, 100), delete (50, 200/3, 100, 100)
BIG_CAT_SARI = Fraction(1345, 18)


def test_sari_regression_value():
    oracle = oracles.sari_oracle(["the big cat sat".split()], ["the cat".split()], [["the cat sat".split()]])
    assert oracle == BIG_CAT_SARI
    result = sentence_sari("the big cat sat", "the cat", ["the cat sat"])
    assert result.sari == pytest.approx(float(BIG_CAT_SARI), abs=1e-12)
    assert result.add_n == (100.0, 100.0, 0.0, 100.0)
    assert result.keep_n == pytest.approx((80.0, 0.0, 100.0, 100.0))
    assert result.delete_n == pytest.approx((50.0, 200 / 3, 100.0, 100.0))


def test_sari_perfect_system():
    corpus = simp(["the big cat sat", "a b c d"], [["the cat sat", "a c"]], ["the cat sat", "a c"])
    assert sari(corpus).sari == 100.0


def test_sari_copying_input_scores_zero_on_add():
    corpus = simp(["the big cat sat"], [["a small dog ran"]], ["the big cat sat"])
    result = sari(corpus)
    assert result.add_n == (0.0, 0.0, 0.0, 0.0)
    assert result.sari < 100


def test_sari_fractional_reference_counts():
    # "b" is kept by one of two references: weight 1/2
    add, keep, delete = sari_ngram_scores(["a", "b"], ["a", "b"], [["a", "b"], ["a"]], 1)
    assert keep == pytest.approx(float(2 * 1 * Fraction(3, 4) / (1 + Fraction(3, 4))))
    assert delete == 1.0 and add == 1.0


def test_sari_is_case_insensitive():
    a = sentence_sari("The cat", "the cat", ["THE CAT"])
    assert a.sari == 100.0


def test_sari_requires_references():
    with pytest.raises(MetricError):
        sari(simp(["a"], [], ["a"]))


@given(st.randoms(use_true_random=False))
def test_sari_matches_oracle_and_is_bounded(rand):
    src, refs, preds = tiny_corpus(rand)
    join = lambda rows: [" ".join(r) for r in rows]
    corpus = simp(join(src), [join(r) for r in refs], join(preds))
    result = sari(corpus)
    by_sentence = [[r[i] for r in refs] for i in range(len(src))]
    assert result.sari == pytest.approx(float(oracles.sari_oracle(src, preds, by_sentence)), abs=1e-9)
    for part in result.add_n + result.keep_n + result.delete_n:
        assert 0.0 <= part <= 100.0


@given(st.randoms(use_true_random=False))
def test_sari_reference_order_invariant(rand):
    src, refs, preds = tiny_corpus(rand)
    join = lambda rows: [" ".join(r) for r in rows]
    forward = sari(simp(join(src), [join(r) for r in refs], join(preds))).sari
    backward = sari(simp(join(src), [join(r) for r in reversed(refs)], join(preds))).sari
    assert forward == pytest.approx(backward, abs=1e-12)


@given(st.lists(st.sampled_from("abc"), max_size=6), st.lists(st.sampled_from("abc"), max_size=6))
def test_every_prediction_ngram_is_kept_or_added(src, pred):
    # partition identity behind keep/add: |P| = |I and P| + |P - I| for every order
    for n in (1, 2):
        I, P = oracles.ngram_list(src, n), oracles.ngram_list(pred, n)
        grams = set(P)
        kept = sum(min(I.count(g), P.count(g)) for g in grams)
        added = sum(max(0, P.count(g) - I.count(g)) for g in grams)
        assert kept + added == len(P)


def test_fre_fkgl_hand_values():
    assert fre("The cat sat on the mat.") == pytest.approx(116.145, abs=1e-9)
    assert fre("Cat") == pytest.approx(121.22, abs=1e-9)
    assert fkgl("The cat sat on the mat.") == pytest.approx(-1.45, abs=1e-9)


def test_fre_unclamped():
    assert fre("Cat") > 100
    assert fre("simplification simplification simplification simplification") < 0


def test_readability_undefined_without_words():
    with pytest.raises(UndefinedInputError):
        fre("...")
    with pytest.raises(UndefinedInputError):
        fkgl("")


@pytest.mark.parametrize("metric", [fre, fkgl])
def test_duplication_keeps_ratios(metric):
    text = "The cat sat on the mat. The elephant goes to the river."
    assert metric(text + " " + text) == pytest.approx(metric(text), abs=1e-9)


def test_three_syllable_words_raise_grade():
    base = "The cat sat on the mat."
    heavier = "Elephant elephant elephant elephant elephant elephant."
    assert fkgl(heavier) > fkgl(base)


@given(st.lists(st.sampled_from(["The", "cat", "sat", ".", "elephant", "!", "3.5"]), min_size=1, max_size=12),
       st.sampled_from([" ", "  ", "\t", " \n "]))
def test_readability_ignores_whitespace_layout(tokens, gap):
    if not any(t not in oracles.PUNCTUATION for t in tokens):
        return
    assert fre(" ".join(tokens)) == fre(gap.join(tokens))
    assert fkgl(" ".join(tokens)) == fkgl(gap.join(tokens))


def test_length_stats_examples():
    half = length_stats(simp(["a b c d", "e f"], [["a b", "e"]], ["a b", "e"]))
    assert half.compression == 0.5
    assert (half.l_in, half.l_pred, half.l_ref) == (3.0, 1.5, 1.5)
    same = length_stats(simp(["a b c"], [["a"]], ["a b c"]))
    assert same.compression == 1.0 and not same.lengthening
    longer = length_stats(simp(["a b"], [["a"]], ["a b c ,"]))
    assert longer.compression == 1.5 and longer.lengthening


def test_length_stats_reference_mean_over_all_references():
    stats = length_stats(simp(["a b", "c"], [["a", "c d e"], ["", "c"]], ["a", "c"]))
    assert stats.l_ref == pytest.approx((1 + 3 + 0 + 1) / 4)


def test_length_stats_rejects_wordless_source():
    with pytest.raises(UndefinedInputError):
        length_stats(simp(["a", "..."], [], ["a", "b"]))


word_lists = st.lists(st.sampled_from(["a", "b", "c", "."]), max_size=5)
sentence_pairs = st.lists(
    st.tuples(word_lists.map(lambda w: ["w"] + w), word_lists), min_size=1, max_size=4
)


@given(sentence_pairs, sentence_pairs)
def test_compression_of_concatenation_is_a_mediant(first, second):
    def words(tokens):
        return len(tokenize(" ".join(tokens)).words)

    def corpus(pairs):
        return simp([" ".join(s) for s, _ in pairs], [], [" ".join(p) for _, p in pairs])

    exact = lambda pairs: Fraction(sum(words(p) for _, p in pairs), sum(words(s) for s, _ in pairs))
    lo, hi = sorted([exact(first), exact(second)])
    both = exact(first + second)
    assert lo <= both <= hi
    assert length_stats(corpus(first + second)).compression == pytest.approx(float(both), abs=1e-12)


def test_compression_matches_oracle_on_random_corpora():
    rng = random.Random(3)
    for _ in range(50):
        src, refs, preds = tiny_corpus(rng)
        corpus = simp([" ".join(s) for s in src], [], [" ".join(p) for p in preds])
        assert length_stats(corpus).compression == pytest.approx(
            float(oracles.compression_oracle(src, preds)), abs=1e-12
        )
