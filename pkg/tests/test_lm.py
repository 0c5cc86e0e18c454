import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import read_segmented
from oracles import sequence_logprob, textbook_prob
from sc2tc.lm import (
    BOS,
    EOS,
    UNK,
    ModelLoadError,
    NgramCounts,
    TrainingError,
    UniformModel,
    deserialize_model,
    load_model,
    perplexity,
    save_model,
    serialize_model,
    train_ngram,
)

corpora = st.lists(st.lists(st.sampled_from("abcde"), min_size=1, max_size=6), min_size=1, max_size=12)
smoothings = st.sampled_from(["kneser_ney", "witten_bell", "add_k"])


def test_uniform_model_perplexity_is_event_count():
    m = UniformModel(["a", "b", "c"])
    assert len(m.event_space()) == 5
    assert perplexity(m, [["a", "b"], ["zz"]]) == pytest.approx(5.0, rel=1e-12)


def test_single_token_kneser_ney_by_hand():
    # events (<s>,a) and (a,</s>); V_events = {a, </s>, <unk>}.
    # Every count is 1, so both discounts are 1 and all mass goes to the
    # lower order: P(a|<s>) = P(</s>|a) = 1/3.
    m = train_ngram([["a"]], order=2)
    p, q = m.prob((BOS,), "a"), m.prob(("a",), EOS)
    assert p == pytest.approx(1 / 3, abs=1e-15)
    assert q == pytest.approx(1 / 3, abs=1e-15)
    assert perplexity(m, [["a"]]) == pytest.approx((p * q) ** -0.5, rel=1e-12)


def test_single_token_witten_bell_by_hand():
    # unigram: (1 + 2/3) / (2 + 2) = 5/12; bigram: (1 + 5/12) / 2 = 17/24
    m = train_ngram([["a"]], order=2, smoothing="witten_bell")
    assert m.prob((BOS,), "a") == pytest.approx(17 / 24, abs=1e-15)
    assert m.prob(("a",), EOS) == pytest.approx(17 / 24, abs=1e-15)
    assert perplexity(m, [["a"]]) == pytest.approx(24 / 17, rel=1e-12)


def test_add_k_by_hand():
    m = train_ngram([["a"]], order=2, smoothing="add_k", k=1.0)
    assert m.prob((BOS,), "a") == pytest.approx(2 / 4)
    assert m.prob(("zz",), "a") == pytest.approx(1 / 3)  # unseen context: uniform


def test_add_zero_gives_unk_no_mass():
    m = train_ngram([["a", "b"]], order=2, smoothing="add_k", k=0.0)
    assert m.logprob((BOS,), "zz") == -math.inf
    assert m.prob((BOS,), "a") == 1.0


def test_kneser_ney_discount_from_count_of_counts():
    # top-order counts: (<s>,a)=3, (a,</s>)=2, (a,b)=1, (b,</s>)=1 -> n1=2, n2=1 -> D=0.5
    corpus = [["a"], ["a"], ["a", "b"]]
    m = train_ngram(corpus, order=2)
    assert m._discounts[2] == pytest.approx(2 / (2 + 2 * 1))


@given(corpora, st.integers(min_value=1, max_value=3), st.sampled_from(["kneser_ney", "witten_bell"]))
@settings(max_examples=40, deadline=None)
def test_matches_textbook_recursion(corpus, order, smoothing):
    m = train_ngram(corpus, order, smoothing)
    histories = [(BOS,) * (order - 1), tuple(corpus[0][: order - 1]), ("e",) * (order - 1), ("q",) * (order - 1)]
    for h in histories:
        h = ((BOS,) * (order - 1) + h)[-(order - 1):] if order > 1 else ()
        for tok in m.event_space() + ["q"]:
            assert m.prob(h, tok) == pytest.approx(textbook_prob(corpus, order, h, tok, smoothing), rel=1e-12)


@given(corpora, st.integers(min_value=1, max_value=4), smoothings, st.lists(st.sampled_from("abcdefq"), max_size=3))
@settings(max_examples=60, deadline=None)
def test_distributions_normalize(corpus, order, smoothing, history):
    m = train_ngram(corpus, order, smoothing, k=0.5)
    state = tuple(history[-(order - 1):]) if order > 1 else ()
    total = math.fsum(math.exp(m.logprob(state, e)) for e in m.event_space())
    assert abs(total - 1.0) <= 1e-9


@given(corpora, st.integers(min_value=1, max_value=3), smoothings)
@settings(max_examples=40, deadline=None)
def test_oov_always_has_mass(corpus, order, smoothing):
    m = train_ngram(corpus, order, smoothing, k=0.5)
    assert m.logprob(m.initial_state(), "never-seen") > -math.inf
    assert m.normalize_token("never-seen") == UNK


@given(corpora, corpora, st.integers(min_value=1, max_value=3))
def test_counts_merge_equals_concatenation(a, b, order):
    merged = NgramCounts.from_corpus(a, order).merge(NgramCounts.from_corpus(b, order))
    assert merged == NgramCounts.from_corpus(a + b, order)


@given(corpora, st.integers(min_value=1, max_value=3))
@settings(max_examples=30, deadline=None)
def test_log_prob_is_chain_rule(corpus, order):
    m = train_ngram(corpus, order)
    for sent in corpus[:3]:
        assert m.log_prob(sent, eos=True) == pytest.approx(sequence_logprob(m, sent), abs=1e-12)


def test_perplexity_counts_eos_events():
    m = train_ngram([["a", "b"]], order=2)
    lp = m.log_prob(["a", "b"], eos=True)
    assert perplexity(m, [["a", "b"]]) == pytest.approx(math.exp(-lp / 3))


def test_training_text_beats_shuffled_text():
    corpus = read_segmented("desk_sc.txt")
    m = train_ngram(corpus, order=3)
    rng = random.Random(0)
    flat = [t for s in corpus for t in s]
    rng.shuffle(flat)
    shuffled, i = [], 0
    for s in corpus:
        shuffled.append(flat[i : i + len(s)])
        i += len(s)
    assert perplexity(m, corpus) < perplexity(m, shuffled)


@pytest.mark.parametrize("bad", [[["a", ""]], [[BOS]], [[EOS, "a"]], [[UNK]], [["a b"]]])
def test_invalid_tokens_rejected(bad):
    with pytest.raises(TrainingError):
        train_ngram(bad)


def test_empty_corpus_and_bad_order():
    with pytest.raises(TrainingError):
        train_ngram([])
    with pytest.raises(TrainingError):
        train_ngram([["a"]], order=0)
    with pytest.raises(TrainingError):
        train_ngram([["a"]], smoothing="good_turing")


@given(corpora, st.integers(min_value=1, max_value=3), smoothings)
@settings(max_examples=30, deadline=None)
def test_serialization_round_trip(corpus, order, smoothing):
    m = train_ngram(corpus, order, smoothing, k=0.25)
    blob = serialize_model(m)
    again = deserialize_model(blob)
    assert serialize_model(again) == blob
    for tok in m.event_space():
        assert again.logprob(m.initial_state(), tok) == m.logprob(m.initial_state(), tok)


def test_serialization_is_byte_stable(tmp_path):
    corpus = read_segmented("desk_sc.txt")
    a, b = tmp_path / "a.lm", tmp_path / "b.lm"
    save_model(train_ngram(corpus), a)
    save_model(train_ngram(list(reversed(corpus))), b)
    assert a.read_bytes() == b.read_bytes()
    assert load_model(a).order == 3


def test_corrupt_models_rejected():
    blob = serialize_model(train_ngram([["a", "b"]]))
    head, body = blob.split(b"\n", 1)
    flipped = head + b"\n" + body[:-2] + bytes([body[-2] ^ 1]) + body[-1:]
    for bad in (b"", b"garbage\n{}", blob[:-5], flipped, blob.replace(b" 1 ", b" 9 ", 1)):
        with pytest.raises(ModelLoadError):
            deserialize_model(bad)


def test_add_zero_unigram_against_count_oracle():
    # events: a, EOS, a, EOS, b, EOS -> a:2, b:1, EOS:3 over 6 events
    corpus = [["a"], ["a"], ["b"]]
    m = train_ngram(corpus, order=1, smoothing="add_k", k=0.0)
    events = Counter(t for s in corpus for t in s + [EOS])
    total = sum(events.values())
    for tok in ("a", "b", EOS):
        assert m.prob((), tok) == events[tok] / total
    assert m.prob((), "a") == pytest.approx(1 / 3)
    assert m.log_prob(["a", "b"]) == pytest.approx(math.log(1 / 3) + math.log(1 / 6))


def test_add_one_closed_form():
    m = train_ngram([["x"]], order=2, smoothing="add_k", k=1.0)
    # events {x, EOS, UNK}: (1 + 1) / (1 + 3)
    assert m.prob((BOS,), "x") == pytest.approx(2 / (1 + 3))


def test_empty_log_prob_is_zero():
    assert train_ngram([["a"]]).log_prob([]) == 0.0


def _tv_to_uniform(m, state):
    events = m.event_space()
    return 0.5 * sum(abs(m.prob(state, e) - 1 / len(events)) for e in events)


@given(corpora, st.floats(min_value=0.0, max_value=5.0), st.floats(min_value=0.0, max_value=5.0))
@settings(max_examples=40, deadline=None)
def test_larger_k_is_closer_to_uniform(corpus, k1, k2):
    lo, hi = sorted((k1, k2))
    counts = NgramCounts.from_corpus(corpus, 2)
    from sc2tc.lm import NgramModel

    small, large = NgramModel(counts, "add_k", lo), NgramModel(counts, "add_k", hi)
    for state in [(BOS,)] + [(t,) for t in sorted(small.vocabulary)]:
        assert _tv_to_uniform(large, state) <= _tv_to_uniform(small, state) + 1e-12


def test_desk_round_trip_on_random_queries():
    m = train_ngram(read_segmented("desk_sc.txt"), order=3)
    again = deserialize_model(serialize_model(m))
    rng = random.Random(11)
    pool = sorted(m.vocabulary) + [BOS, EOS, "未见"]
    for _ in range(1000):
        state, tok = (rng.choice(pool), rng.choice(pool)), rng.choice(pool)
        assert again.logprob(state, tok) == m.logprob(state, tok)
