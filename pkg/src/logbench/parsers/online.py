"""Shared state handling for the streaming parsers."""

from __future__ import annotations

from typing import Iterable, Sequence

from ..model import EventTemplate


class OnlineParser:
    """Base class holding the evolving template store.

    Cluster ids are dense integers from 0 in creation order. ``templates[i]``
    is the current token tuple of cluster ``i`` and ``counts[i]`` the total
    weight of messages assigned to it so far.
    """

    def __init__(self, config):
        self.config = config
        self.templates: list[tuple] = []
        self.counts: list[int] = []

    def _new_cluster(self, tokens: tuple) -> int:
        self.templates.append(tuple(tokens))
        self.counts.append(0)
        return len(self.templates) - 1

    def step(self, tokens: Sequence[str], weight: int = 1) -> int:
        raise NotImplementedError

    def template(self, cluster_id: int) -> EventTemplate:
        return EventTemplate(self.templates[cluster_id])

    def __len__(self):
        return len(self.templates)

    def run(self, entries: Iterable[tuple]) -> list[tuple]:
        """Feed ``(tokens, weight)`` entries in order; return each entry's final template."""
        ids = [self.step(tokens, weight) for tokens, weight in entries]
        return [self.templates[i] for i in ids]
