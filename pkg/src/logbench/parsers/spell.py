"""Streaming parser keyed on the longest common subsequence (Spell)."""

from __future__ import annotations

from collections import Counter

from ..model import WILDCARD
from .config import SpellConfig
from .online import OnlineParser
from .similarity import lcs


def lcs_template(template, tokens, common=None):
    """Rebuild a template from its LCS with ``tokens``.

    Common tokens stay constant. Between two consecutive common tokens the
    gaps of both sides are compared: equal-length gaps become one wildcard
    per position, unequal gaps collapse into a single wildcard.
    """
    if common is None:
        common = lcs(template, tokens)
    out = []
    i = j = 0
    for tok in common:
        gi = i
        while template[i] != tok:
            i += 1
        gj = j
        while tokens[j] != tok:
            j += 1
        _emit_gap(out, i - gi, j - gj)
        out.append(tok)
        i += 1
        j += 1
    _emit_gap(out, len(template) - i, len(tokens) - j)
    return tuple(out)


def _emit_gap(out, left, right):
    if not left and not right:
        return
    if left == right:
        out.extend([WILDCARD] * left)
    elif not out or out[-1] != WILDCARD:
        out.append(WILDCARD)


class SpellParser(OnlineParser):
    """Match each message to the stored template sharing the longest LCS.

    Only constant template tokens count towards the LCS, so masked
    parameters never make unrelated messages look alike. A template
    qualifies when ``|lcs| >= tau * len(message)``. Ties go to the lowest
    template id. A message identical to a stored template always joins it.
    """

    def __init__(self, config: SpellConfig = SpellConfig()):
        super().__init__(config)
        self._constants: list[tuple] = []
        self._bags: list[Counter] = []
        self._exact: dict[tuple, int] = {}  # template tuple -> lowest cluster id

    def _new_cluster(self, tokens):
        cid = super()._new_cluster(tokens)
        self._constants.append(())
        self._bags.append(Counter())
        self._index(cid)
        return cid

    def _index(self, cid, old=None):
        if old is not None and self._exact.get(old) == cid:
            del self._exact[old]
        self._exact.setdefault(self.templates[cid], cid)
        consts = tuple(t for t in self.templates[cid] if t != WILDCARD)
        self._constants[cid] = consts
        self._bags[cid] = Counter(consts)

    def match(self, tokens):
        """Return ``(cluster_id, common)`` for the best qualifying template or None."""
        cid = self._exact.get(tokens)
        if cid is not None:
            # identical to a stored template: join it even if too few of its
            # tokens are constants to pass the LCS gate
            return cid, self._constants[cid]
        need = self.config.tau * len(tokens)
        bag = Counter(tokens)
        best, best_len, best_common = None, -1, None
        for cid, consts in enumerate(self._constants):
            # multiset overlap bounds the LCS length from above
            bound = sum((bag & self._bags[cid]).values())
            if bound < need or bound <= best_len:
                continue
            common = lcs(consts, tokens)
            if len(common) >= need and len(common) > best_len:
                best, best_len, best_common = cid, len(common), common
        if best is None:
            return None
        return best, best_common

    def step(self, tokens, weight: int = 1) -> int:
        tokens = tuple(tokens)
        found = self.match(tokens)
        if found is None:
            cid = self._new_cluster(tokens)
        else:
            cid, common = found
            tpl = self.templates[cid]
            if tpl != tokens:
                new = lcs_template(tpl, tokens, common)
                if new != tpl:
                    self.templates[cid] = new
                    self._index(cid, tpl)
        self.counts[cid] += weight
        return cid
