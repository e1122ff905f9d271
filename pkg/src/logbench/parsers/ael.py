"""Abstraction via binning and reconciliation (AEL).

Masked messages are binned by (token count, wildcard count). Within a bin,
distinct messages are merged into the first event whose template they
disagree with on at most ``merge`` of their positions.
"""

from __future__ import annotations

from typing import Sequence

from ..model import WILDCARD, merge_tokens
from .config import AELConfig


def _disagreement(template, tokens) -> int:
    return sum(1 for t, x in zip(template, tokens) if t != WILDCARD and t != x)


def ael(entries: Sequence[tuple], config: AELConfig = AELConfig()) -> list[tuple]:
    """Parse ``(tokens, weight)`` entries; returns the template of every entry."""
    rows = [tuple(tokens) for tokens, _ in entries]
    bins: dict[tuple, list[tuple]] = {}
    for row in rows:
        key = (len(row), sum(1 for t in row if t == WILDCARD))
        members = bins.setdefault(key, [])
        members.append(row)

    event_of: dict[tuple, int] = {}
    events: list[tuple] = []
    for (length, _), members in bins.items():
        bin_events: list[int] = []
        limit = config.merge * length
        for row in members:
            if row in event_of:
                continue
            target = None
            for eid in bin_events:
                if _disagreement(events[eid], row) <= limit:
                    target = eid
                    break
            if target is None:
                events.append(row)
                target = len(events) - 1
                bin_events.append(target)
            else:
                events[target] = merge_tokens(events[target], row)
            event_of[row] = target
    return [events[event_of[row]] for row in rows]
