"""Token-sequence similarity measures shared by the parsers."""

from __future__ import annotations

import math
from typing import Sequence

from ..model import WILDCARD, EventTemplate, TemplateError


def lcs(a: Sequence[str], b: Sequence[str]) -> list[str]:
    """Longest common subsequence of two token sequences.

    Among equally long answers the one using the earliest positions of ``a``
    is returned.
    """
    n, m = len(a), len(b)
    if not n or not m:
        return []
    # suffix table: rows[i][j] = |lcs(a[i:], b[j:])|
    rows = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        ai = a[i]
        row, below = rows[i], rows[i + 1]
        for j in range(m - 1, -1, -1):
            if ai == b[j]:
                row[j] = below[j + 1] + 1
            else:
                row[j] = below[j] if below[j] >= row[j + 1] else row[j + 1]
    out = []
    i = j = 0
    while i < n and j < m:
        if a[i] == b[j]:
            out.append(a[i])
            i += 1
            j += 1
        elif rows[i][j + 1] == rows[i][j]:
            j += 1
        else:
            i += 1
    return out


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b):
            cur.append(prev[j] + 1 if x == y else max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def seq_similarity(template, tokens: Sequence[str]) -> float:
    """Fraction of template positions holding a constant equal to the token."""
    ttoks = template.tokens if isinstance(template, EventTemplate) else template
    if len(ttoks) != len(tokens):
        raise TemplateError(f"length mismatch: {len(ttoks)} vs {len(tokens)}")
    if not ttoks:
        return 1.0
    same = 0
    for t, x in zip(ttoks, tokens):
        if t == x and t != WILDCARD:
            same += 1
    return same / len(ttoks)


def length_vector_similarity(a: Sequence[str], b: Sequence[str]):
    """Cosine similarity of per-token character counts, or None on length mismatch."""
    if len(a) != len(b):
        return None
    if not a:
        return 1.0
    return cosine([len(t) for t in a], [len(t) for t in b])


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    dot = sum(x * y for x, y in zip(u, v))
    norm = math.sqrt(sum(x * x for x in u)) * math.sqrt(sum(y * y for y in v))
    if norm == 0:
        return 0.0
    return min(1.0, dot / norm)
