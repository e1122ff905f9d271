"""Iterative partitioning (IPLoM): split by length, by the least variable
token position, then by the mapping between the two most variable positions.
"""

from __future__ import annotations

from typing import Sequence

from ..model import WILDCARD
from .config import IPLoMConfig

MM_KEY = ("M-M",)


def _unique_counts(rows, idxs, width):
    return [len({rows[i][c] for i in idxs}) for c in range(width)]


def _split_on(rows, idxs, column):
    groups: dict[str, list[int]] = {}
    for i in idxs:
        groups.setdefault(rows[i][column], []).append(i)
    return list(groups.values())


def split_by_position(rows, idxs):
    """Step 2 on an index subset of ``rows`` (all the same length)."""
    if len(idxs) <= 1 or not rows[idxs[0]]:
        return [list(idxs)]
    counts = _unique_counts(rows, idxs, len(rows[idxs[0]]))
    column = min(range(len(counts)), key=lambda c: (counts[c], c))
    return _split_on(rows, idxs, column)


def mapping_positions(counts):
    """The two columns with the most distinct values, leftmost on ties."""
    if len(counts) < 2:
        return None
    order = sorted(range(len(counts)), key=lambda c: (-counts[c], c))
    p1, p2 = sorted(order[:2])
    if counts[p1] == 1 and counts[p2] == 1:
        return None
    return p1, p2


def _rank_side(card, lines, lower, upper):
    """Decide which side of a 1-M / M-1 relation to split on.

    ``distance`` is the share of distinct many-side values among the lines
    carrying the relation. Returns "one" (many side holds variables), "many"
    (many side looks constant) or None when the distance falls between the
    bounds and the relation stays unsplit.
    """
    distance = card / lines if lines else 1.0
    if distance <= lower:
        return "many"
    if distance >= upper:
        return "one"
    return None


def split_by_bijection(rows, idxs, weights, config: IPLoMConfig):
    """Step 3 on an index subset of ``rows``."""
    if len(idxs) <= 1:
        return [list(idxs)]
    width = len(rows[idxs[0]])
    counts = _unique_counts(rows, idxs, width)
    if width > 2:
        constant_share = sum(1 for c in counts if c == 1) / width
        if constant_share >= config.ct:
            return [list(idxs)]
    pos = mapping_positions(counts)
    if pos is None:
        return [list(idxs)]
    p1, p2 = pos

    fwd: dict[str, set] = {}
    back: dict[str, set] = {}
    lines1: dict[str, int] = {}
    lines2: dict[str, int] = {}
    for i in idxs:
        a, b = rows[i][p1], rows[i][p2]
        fwd.setdefault(a, set()).add(b)
        back.setdefault(b, set()).add(a)
        w = weights[i]
        lines1[a] = lines1.get(a, 0) + w
        lines2[b] = lines2.get(b, 0) + w

    # whether every value on the far side maps back to one value only;
    # cached per value so fan-out checks stay linear in the partition size
    fans_out: dict[str, bool] = {}
    fans_in: dict[str, bool] = {}
    groups: dict[tuple, list[int]] = {}
    for i in idxs:
        a, b = rows[i][p1], rows[i][p2]
        targets, sources = fwd[a], back[b]
        if a not in fans_out:
            fans_out[a] = len(targets) > 1 and all(len(back[t]) == 1 for t in targets)
        if b not in fans_in:
            fans_in[b] = len(sources) > 1 and all(len(fwd[s]) == 1 for s in sources)
        if len(targets) == 1 and len(sources) == 1:
            key = ("p1", a)
        elif fans_out[a]:
            # one p1 value fanning out to many p2 values
            side = _rank_side(len(targets), lines1[a], config.lower, config.upper)
            key = {"one": ("p1", a), "many": ("p2", b)}.get(side, MM_KEY)
        elif fans_in[b]:
            side = _rank_side(len(sources), lines2[b], config.lower, config.upper)
            key = {"one": ("p2", b), "many": ("p1", a)}.get(side, MM_KEY)
        else:
            key = MM_KEY
        groups.setdefault(key, []).append(i)
    return list(groups.values())


def extract_template(rows, idxs) -> tuple:
    first = rows[idxs[0]]
    out = []
    for c, tok in enumerate(first):
        out.append(tok if all(rows[i][c] == tok for i in idxs) else WILDCARD)
    return tuple(out)


def iplom(entries: Sequence[tuple], config: IPLoMConfig = IPLoMConfig()) -> list[tuple]:
    """Parse ``(tokens, weight)`` entries; returns the template of every entry."""
    # identical rows always share a partition, so work on distinct rows only
    index: dict[tuple, int] = {}
    rows: list[tuple] = []
    weights: list[int] = []
    row_of = []
    for tokens, w in entries:
        row = tuple(tokens)
        pos = index.get(row)
        if pos is None:
            pos = index[row] = len(rows)
            rows.append(row)
            weights.append(0)
        weights[pos] += w
        row_of.append(pos)

    by_length: dict[int, list[int]] = {}
    for i, row in enumerate(rows):
        by_length.setdefault(len(row), []).append(i)

    result: list = [None] * len(rows)
    for idxs in by_length.values():
        for part in _refine(rows, weights, idxs, config):
            tpl = extract_template(rows, part)
            for i in part:
                result[i] = tpl
    return [result[p] for p in row_of]


def _weight(weights, idxs):
    return sum(weights[i] for i in idxs)


def _refine(rows, weights, idxs, config):
    if _weight(weights, idxs) <= config.support:
        return [idxs]
    out = []
    for sub in split_by_position(rows, idxs):
        if _weight(weights, sub) <= config.support:
            out.append(sub)
            continue
        out.extend(split_by_bijection(rows, sub, weights, config))
    return out


def iplom_partition_by_position(partition: Sequence[Sequence[str]]) -> list[list[tuple]]:
    rows = [tuple(r) for r in partition]
    return [[rows[i] for i in sub] for sub in split_by_position(rows, list(range(len(rows))))]


def iplom_partition_by_bijection(partition: Sequence[Sequence[str]], lower: float = 0.25,
                                 upper: float = 0.9, ct: float = 1.0, weights=None) -> list[list[tuple]]:
    rows = [tuple(r) for r in partition]
    weights = list(weights) if weights is not None else [1] * len(rows)
    config = IPLoMConfig(lower=lower, upper=upper, ct=ct)
    subs = split_by_bijection(rows, list(range(len(rows))), weights, config)
    return [[rows[i] for i in sub] for sub in subs]
