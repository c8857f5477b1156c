import math
import re
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from symbench.metrics import (
    PairScore,
    bleu,
    exact_match,
    score_pair,
    substring_score,
    tokenize,
)

# §4.2-style truncation pair: the prediction drops the final clause.
FULL_ROUTE = (
    "to the west, then to the west, then to the north, then to the north, "
    "then to the north, then to the north"
)
CUT_ROUTE = (
    "to the west, then to the west, then to the north, then to the north, "
    "then to the north"
)


def reference_bleu(prediction, target):
    """Deliberately different implementation: regex tokenizer, Fraction
    precisions, explicit clipping — used only to cross-check `bleu`."""
    pred = re.findall(r"[^\s.,]+|[.,]", prediction)
    ref = re.findall(r"[^\s.,]+|[.,]", target)
    if not pred:
        return 0.0
    precisions = []
    for n in range(1, 5):
        pred_grams = [tuple(pred[i : i + n]) for i in range(len(pred) - n + 1)]
        ref_counts = Counter(tuple(ref[i : i + n]) for i in range(len(ref) - n + 1))
        clipped = 0
        for gram, count in Counter(pred_grams).items():
            clipped += min(count, ref_counts.get(gram, 0))
        if n == 1:
            if clipped == 0:
                return 0.0
            precisions.append(Fraction(clipped, len(pred_grams)))
        else:
            precisions.append(Fraction(clipped + 1, len(pred_grams) + 1))
    geo = math.exp(sum(math.log(p) for p in precisions) / 4)
    if len(pred) < len(ref):
        geo *= math.exp(1 - Fraction(len(ref), len(pred)))
    return min(1.0, geo)


def test_tokenize_detaches_punctuation():
    assert tokenize("garden.") == ["garden", "."]
    assert tokenize("a ball, a pen, and a sock.") == [
        "a", "ball", ",", "a", "pen", ",", "and", "a", "sock", ".",
    ]
    assert tokenize("") == []


def test_exact_match_is_strict_after_strip():
    assert exact_match("garden.", "garden.") == 1
    assert exact_match("  garden. ", "garden.") == 1
    assert exact_match("garden", "garden.") == 0


def test_substring_score_counts_predicted_statements():
    target = "The bin contains a ball. The box contains no objects."
    assert substring_score(target, target) == 1.0
    assert substring_score("The bin contains a ball.", target) == 1.0
    half = substring_score("The bin contains a ball. The box contains a pen.", target)
    assert half == 0.5
    assert substring_score("", target) == 0.0
    assert substring_score("...", target) == 0.0


def test_substring_score_on_truncated_route():
    # the cut route has no '.', so it is a single statement inside the target
    assert substring_score(CUT_ROUTE, FULL_ROUTE) == 1.0
    assert substring_score(FULL_ROUTE, CUT_ROUTE) == 0.0


def test_bleu_perfect_and_empty():
    text = "The bin contains a ball."
    assert bleu(text, text) == 1.0
    assert bleu("", text) == 0.0
    assert bleu("zebra", text) == 0.0  # no unigram overlap


def test_bleu_brevity_penalty_hand_computed():
    # pred "a b" vs ref "a b c": all matched, clipped p2..p4 smooth to 1,
    # so the score is exactly the brevity penalty exp(1 - 3/2).
    assert bleu("a b", "a b c") == pytest.approx(math.exp(-0.5), abs=1e-12)
    # equal-length predictions take no penalty
    assert bleu("a b x", "a b c") < 1.0
    assert bleu("a b c", "a b c") == 1.0


def test_bleu_matches_reference_on_fixed_pairs():
    pairs = [
        (CUT_ROUTE, FULL_ROUTE),
        ("The bin contains a ball.", "The bin contains a ball and a snake."),
        ("garden.", "garden."),
        ("bedroom.", "garden."),
        ("to the west.", "to the west, then to the north."),
        ("a b", "a b c"),
    ]
    for pred, tgt in pairs:
        assert bleu(pred, tgt) == pytest.approx(reference_bleu(pred, tgt), abs=1e-9)


def test_truncated_route_scores():
    score = score_pair(CUT_ROUTE, FULL_ROUTE)
    assert score.exact == 0
    assert score.substring == 1.0
    assert 0.0 < score.bleu < 1.0


def test_score_pair_short_circuits_on_exact():
    score = score_pair(" garden. ", "garden.")
    assert (score.exact, score.substring, score.bleu) == (1, 1.0, 1.0)


def test_pair_score_validation():
    with pytest.raises(ValueError, match="exact"):
        PairScore(exact=2, substring=0.0, bleu=0.0)
    with pytest.raises(ValueError, match="substring"):
        PairScore(exact=0, substring=1.5, bleu=0.0)
    with pytest.raises(ValueError, match="bleu"):
        PairScore(exact=0, substring=0.0, bleu=-0.1)


sentence = st.lists(
    st.sampled_from("the a bin box ball snake quilt contains and no objects , .".split()),
    min_size=0,
    max_size=20,
).map(" ".join)


@given(sentence, sentence)
@settings(max_examples=400, deadline=None)
def test_scores_are_bounded_and_reference_agrees(pred, tgt):
    score = score_pair(pred, tgt)
    assert score.exact in (0, 1)
    assert 0.0 <= score.substring <= 1.0
    assert 0.0 <= score.bleu <= 1.0
    assert bleu(pred, tgt) == pytest.approx(reference_bleu(pred, tgt), abs=1e-9)
    if score.exact:
        assert score.substring == 1.0
        assert score.bleu == 1.0
