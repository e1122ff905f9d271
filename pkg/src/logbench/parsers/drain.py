"""Online parsing with a fixed-depth prefix tree (Drain)."""

from __future__ import annotations

from ..model import WILDCARD, merge_tokens
from .config import DrainConfig
from .online import OnlineParser


class _Node:
    __slots__ = ("children", "clusters", "exact")

    def __init__(self):
        self.children = {}
        self.clusters = []
        self.exact = {}  # template tuple -> lowest cluster id holding it


def _has_digit(token: str) -> bool:
    return any(ch.isdigit() for ch in token)


class DrainParser(OnlineParser):
    """Route by token count and the leading ``depth - 2`` tokens, then pick the
    most similar template in the leaf.

    Tokens with a digit (and masked tokens) go down a shared ``<*>`` branch.
    A message identical to a template already in its leaf always joins it.
    """

    def __init__(self, config: DrainConfig = DrainConfig()):
        super().__init__(config)
        self.root = _Node()

    def _leaf(self, tokens):
        node = self.root.children.get(len(tokens))
        if node is None:
            node = self.root.children[len(tokens)] = _Node()
        max_children = self.config.max_children
        for tok in tokens[:self.config.depth - 2]:
            key = WILDCARD if (tok == WILDCARD or _has_digit(tok)) else tok
            child = node.children.get(key)
            if child is None:
                if key != WILDCARD and len(node.children) >= max_children:
                    key = WILDCARD
                    child = node.children.get(key)
                if child is None:
                    child = node.children[key] = _Node()
            node = child
        return node

    def _match(self, leaf, tokens):
        # a message identical to a stored template joins it, even when the
        # template is mostly wildcards and would miss the similarity gate
        cid = leaf.exact.get(tokens)
        if cid is not None:
            return cid
        best, best_sim = None, -1.0
        n = len(tokens) or 1
        for cid in leaf.clusters:
            tpl = self.templates[cid]
            same = 0
            for t, x in zip(tpl, tokens):
                if t == x and t != WILDCARD:
                    same += 1
            sim = same / n if tokens else 1.0
            if sim > best_sim:
                best, best_sim = cid, sim
        if best is not None and best_sim >= self.config.st:
            return best
        return None

    def step(self, tokens, weight: int = 1) -> int:
        tokens = tuple(tokens)
        leaf = self._leaf(tokens)
        cid = self._match(leaf, tokens)
        if cid is None:
            cid = self._new_cluster(tokens)
            leaf.clusters.append(cid)
            leaf.exact.setdefault(tokens, cid)
        else:
            tpl = self.templates[cid]
            if tpl != tokens:
                new = merge_tokens(tpl, tokens)
                if new != tpl:
                    self.templates[cid] = new
                    if leaf.exact.get(tpl) == cid:
                        del leaf.exact[tpl]
                    leaf.exact.setdefault(new, cid)
        self.counts[cid] += weight
        return cid
