"""Scoring functions for (prediction, target) text pairs.

Three views of correctness: exact match is all-or-nothing, the substring
score gives per-statement partial credit, and BLEU-4 grades n-gram overlap.
All are pure and deterministic; tokenization needs no external tools.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

BLEU_MAX_ORDER = 4


@dataclass(frozen=True)
class PairScore:
    exact: int
    substring: float
    bleu: float

    def __post_init__(self):
        if self.exact not in (0, 1):
            raise ValueError(f"exact must be 0 or 1, got {self.exact}")
        for name in ("substring", "bleu"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


def exact_match(prediction: str, target: str) -> int:
    return int(prediction.strip() == target.strip())


def substring_score(prediction: str, target: str) -> float:
    """Fraction of predicted statements (split at '.') that occur verbatim
    inside the target; an over-claiming prediction loses credit per statement."""
    statements = [s.strip() for s in prediction.split(".")]
    statements = [s for s in statements if s]
    if not statements:
        return 0.0
    hits = sum(1 for s in statements if s in target)
    return hits / len(statements)


def tokenize(text: str) -> list[str]:
    """Whitespace tokens with '.' and ',' detached as their own tokens."""
    return text.replace(".", " . ").replace(",", " , ").split()


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(prediction: str, target: str) -> float:
    """Sentence-level BLEU-4, add-one smoothed for orders ≥ 2."""
    pred = tokenize(prediction)
    ref = tokenize(target)
    if not pred:
        return 0.0
    log_sum = 0.0
    for n in range(1, BLEU_MAX_ORDER + 1):
        pred_ngrams = _ngrams(pred, n)
        ref_ngrams = _ngrams(ref, n)
        matched = sum(min(count, ref_ngrams[g]) for g, count in pred_ngrams.items())
        total = sum(pred_ngrams.values())
        if n == 1:
            if matched == 0:
                return 0.0
            precision = matched / total
        else:
            precision = (matched + 1) / (total + 1)
        log_sum += math.log(precision) / BLEU_MAX_ORDER
    brevity = 1.0 if len(pred) >= len(ref) else math.exp(1.0 - len(ref) / len(pred))
    return min(1.0, brevity * math.exp(log_sum))


def score_pair(prediction: str, target: str) -> PairScore:
    if exact_match(prediction, target):
        return PairScore(exact=1, substring=1.0, bleu=1.0)
    return PairScore(
        exact=0,
        substring=substring_score(prediction, target),
        bleu=bleu(prediction, target),
    )
