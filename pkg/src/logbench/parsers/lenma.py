"""Streaming clustering on word-length vectors (LenMa)."""

from __future__ import annotations

from ..model import merge_tokens
from .config import LenMaConfig
from .online import OnlineParser
from .similarity import cosine


class LenMaParser(OnlineParser):
    """Each cluster keeps the word lengths of its first message as its
    representative. A message joins the same-length cluster with the highest
    cosine similarity if it reaches ``sigma``.
    """

    def __init__(self, config: LenMaConfig = LenMaConfig()):
        super().__init__(config)
        self._by_length: dict[int, list[int]] = {}
        self._vectors: list[list[int]] = []

    def _new_cluster(self, tokens):
        cid = super()._new_cluster(tokens)
        self._vectors.append([len(t) for t in tokens])
        self._by_length.setdefault(len(tokens), []).append(cid)
        return cid

    def step(self, tokens, weight: int = 1) -> int:
        tokens = tuple(tokens)
        vec = [len(t) for t in tokens]
        best, best_sim = None, -1.0
        for cid in self._by_length.get(len(tokens), ()):
            sim = cosine(vec, self._vectors[cid]) if tokens else 1.0
            if sim > best_sim:
                best, best_sim = cid, sim
        if best is None or best_sim < self.config.sigma - 1e-12:
            cid = self._new_cluster(tokens)
        else:
            cid = best
            tpl = self.templates[cid]
            if tpl != tokens:
                self.templates[cid] = merge_tokens(tpl, tokens)
        self.counts[cid] += weight
        return cid
