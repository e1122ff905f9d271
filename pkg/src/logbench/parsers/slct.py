"""Frequent (position, token) mining (SLCT)."""

from __future__ import annotations

from collections import Counter
from typing import Sequence

from ..model import WILDCARD
from .config import SLCTConfig


def frequent_pairs(rows, weights, support: int) -> set:
    counts: Counter = Counter()
    for row, w in zip(rows, weights):
        for pair in enumerate(row):
            counts[pair] += w
    return {pair for pair, c in counts.items() if c >= support}


def slct(entries: Sequence[tuple], config: SLCTConfig = SLCTConfig()) -> list:
    """Parse ``(tokens, weight)`` entries.

    Each message keeps the tokens at its frequent positions and gets
    wildcards elsewhere. Messages with no frequent position are outliers and
    map to None unless ``promote_outliers`` is set, in which case they become
    their own template.
    """
    rows = [tuple(tokens) for tokens, _ in entries]
    weights = [w for _, w in entries]
    frequent = frequent_pairs(rows, weights, config.support)
    out = []
    for row in rows:
        hits = [(i, tok) in frequent for i, tok in enumerate(row)]
        if any(hits):
            out.append(tuple(tok if hit else WILDCARD for tok, hit in zip(row, hits)))
        else:
            out.append(row if config.promote_outliers else None)
    return out
