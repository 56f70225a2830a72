"""Leakage metrics over observation-class sizes.

All three measures read a vector of class sizes (reals, so expected sizes
under a randomized policy are welcome) and report how much uncertainty about
the secret survives once the attacker has pinned down the class:

* shannon:   (1/B) * sum_i B_i * log2(B_i)
* guessing:  (1/(2B)) * sum_i B_i**2 + 1/2
* minguess:  min over non-empty classes of (B_i + 1) / 2

with B the total size.  Empty classes contribute nothing.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

__all__ = ["EntropyMeasure", "entropy", "post_policy_entropy"]


class EntropyMeasure(str, Enum):
    SHANNON = "shannon"
    GUESSING = "guessing"
    MINGUESS = "minguess"


def entropy(sizes, measure: EntropyMeasure | str) -> float:
    """Evaluate one leakage measure on a vector of class sizes."""
    measure = EntropyMeasure(measure)
    b = np.asarray(sizes, dtype=float).ravel()
    if b.size == 0:
        raise ValueError("sizes must be non-empty")
    if np.any(b < 0):
        raise ValueError("class sizes must be non-negative")
    total = float(b.sum())
    if total <= 0:
        raise ValueError("at least one class size must be positive")
    pos = b[b > 0]
    if measure is EntropyMeasure.SHANNON:
        return float((pos * np.log2(pos)).sum() / total)
    if measure is EntropyMeasure.GUESSING:
        return float((pos * pos).sum() / (2.0 * total) + 0.5)
    return float((pos.min() + 1.0) / 2.0)


def post_policy_entropy(policy, classes, measure: EntropyMeasure | str) -> float:
    """Entropy of the expected class sizes induced by a mitigation policy."""
    from .policy import ensure_valid, expected_sizes

    ensure_valid(policy, classes)
    return entropy(expected_sizes(policy, classes.sizes), measure)
