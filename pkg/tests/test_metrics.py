import io
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sc2tc.mapping import load_mapping_table
from sc2tc.metrics import EvalAccumulator, count_ambiguous, edit_distance, evaluate, format_report, zipf_slope

TABLE = load_mapping_table(io.StringIO("发\t發 髮\n头\t頭\n展\t展\n干\t幹 乾 干\n"))


def test_hand_computed_fixture():
    # ambiguous source chars: 发, 发 -> 2; one substitution in line 2
    report = evaluate(["頭髮", "髮展"], ["頭髮", "發展"], ["头发", "发展"], TABLE)
    assert report.ded == 500.0
    assert report.sa == 50.0
    assert report.total_edit_distance == 1
    assert report.total_ambiguous_chars == 2
    assert report.ambiguity_side == "source"


def test_perfect_predictions():
    report = evaluate(["頭髮", "發展"], ["頭髮", "發展"], ["头发", "发展"], TABLE)
    assert (report.ded, report.sa) == (0.0, 100.0)


def test_no_ambiguous_characters_flags_ded_undefined():
    report = evaluate(["頭"], ["頭"], ["头"], TABLE)
    assert report.ded == 0.0 and not report.ded_defined


def test_ambiguity_counts_with_multiplicity():
    assert count_ambiguous("发发干头x", TABLE) == 3


def test_length_mismatch():
    with pytest.raises(ValueError):
        evaluate(["a"], ["a", "b"], ["a"], TABLE)


def test_accumulator_matches_batch():
    acc = EvalAccumulator(TABLE)
    for p, r, s in [("頭髮", "頭髮", "头发"), ("髮展", "發展", "发展")]:
        acc.add(p, r, s)
    assert acc.report() == evaluate(["頭髮", "髮展"], ["頭髮", "發展"], ["头发", "发展"], TABLE)


def test_report_format_is_key_value():
    text = format_report(evaluate(["頭"], ["頭"], ["头"], TABLE))
    fields = dict(line.split(": ", 1) for line in text.splitlines())
    assert fields["ded"] == "0.0" and fields["sa"] == "100.0" and fields["ded_defined"] == "false"


@pytest.mark.parametrize(
    "a, b, d",
    [("", "", 0), ("abc", "", 3), ("kitten", "sitting", 3), ("發展", "髮展", 1), ("flaw", "lawn", 2), ("ab", "ba", 2)],
)
def test_edit_distance_known_values(a, b, d):
    assert edit_distance(a, b) == d


def _zipf_counts(exponent, n, scale=10**6):
    return {f"w{r}": max(1, round(scale * r ** -exponent)) for r in range(1, n + 1)}


def test_zipf_slope_on_exact_power_law():
    stats = zipf_slope(_zipf_counts(1.2, 500))
    assert stats.slope == pytest.approx(1.2, abs=0.01)
    assert stats.fit_range == 500 and stats.distinct_tokens == 500


@given(st.integers(min_value=2, max_value=50), st.integers(min_value=2, max_value=1000))
def test_zipf_slope_scale_invariant_exactly(n, factor):
    rng = random.Random(n)
    counts = {f"t{i}": rng.randint(1, 100) for i in range(n)}
    if len(set(counts.values())) == 1:
        counts["t0"] += 1
    base = zipf_slope(counts)
    assert zipf_slope({t: c * factor for t, c in counts.items()}).slope == base.slope


def test_zipf_top_k_truncates_fit_only():
    stats = zipf_slope(_zipf_counts(1.0, 100), top_k=10)
    assert stats.fit_range == 10 and len(stats.ranked) == 100


def test_zipf_flat_distribution_has_zero_slope():
    assert zipf_slope(["a", "b", "c"]).slope == 0.0


def test_zipf_needs_two_tokens():
    with pytest.raises(ValueError):
        zipf_slope(["a", "a"])


def test_zipf_ranking_ties_by_token():
    assert [t for t, _ in zipf_slope(["b", "a", "c", "c"]).ranked] == ["c", "a", "b"]


def test_three_over_six_fixture():
    # distances 2 and 1 over 4 + 2 ambiguous source characters -> 3/6 * 1000
    src = ["发发干干", "发干"]
    ref = ["發髮幹乾", "發幹"]
    pred = ["髮發幹乾", "髮幹"]
    report = evaluate(pred, ref, src, TABLE)
    assert (report.total_edit_distance, report.total_ambiguous_chars) == (3, 6)
    assert report.ded == 500.0
    assert report.sa == 0.0  # neither sentence is exact


def test_unit_of_metric():
    report = evaluate(["髮" + "頭" * 999], ["發" + "頭" * 999], ["发" * 1000], TABLE)
    assert report.ded == 1.0


@given(st.permutations(range(4)))
def test_evaluate_is_permutation_equivariant(order):
    src = ["头发", "发展", "干", "头"]
    ref = ["頭髮", "發展", "乾", "頭"]
    pred = ["頭髮", "髮展", "幹", "頭"]
    base = evaluate(pred, ref, src, TABLE)
    assert evaluate([pred[i] for i in order], [ref[i] for i in order], [src[i] for i in order], TABLE) == base


@given(st.integers(min_value=0, max_value=2**32))
def test_zipf_invariant_to_token_renaming(seed):
    rng = random.Random(seed)
    counts = {f"t{i}": rng.randint(1, 50) for i in range(30)}
    renamed = {f"x{rng.random()}{t}": c for t, c in counts.items()}
    assert zipf_slope(renamed).slope == zipf_slope(counts).slope
