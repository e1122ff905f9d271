"""Unified parse entry point: mask, optionally dedup and partition, run a
parser core per partition, then merge everything into one template table.
"""

from __future__ import annotations

import functools
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from ..model import (
    WILDCARD,
    EventTemplate,
    LogRecord,
    ParseAssignment,
    TemplateTable,
    tokenize,
)
from ..preprocessing import DEFAULT_MASKS, apply_masks, partition_key
from .ael import ael
from .config import ParserKind, kind_of, make_config
from .drain import DrainParser
from .iplom import iplom
from .lenma import LenMaParser
from .slct import slct
from .spell import SpellParser

log = logging.getLogger(__name__)

ONLINE_PARSERS = {
    ParserKind.DRAIN: DrainParser,
    ParserKind.SPELL: SpellParser,
    ParserKind.LENMA: LenMaParser,
}
OFFLINE_PARSERS = {
    ParserKind.IPLOM: iplom,
    ParserKind.AEL: ael,
    ParserKind.SLCT: slct,
}


@dataclass
class PipelineOptions:
    masks: tuple = DEFAULT_MASKS
    dedup: bool = False
    partition: bool = False
    workers: int = 1
    delimiters: str = " "


@dataclass
class ParseOutput:
    table: TemplateTable
    assignments: list
    outliers: list = field(default_factory=list)

    @property
    def coverage(self) -> bool:
        return not self.outliers

    def groups(self) -> dict:
        """line_id -> group label; every outlier line is its own group."""
        labels = {a.line_id: a.template_id for a in self.assignments}
        for line_id in self.outliers:
            labels[line_id] = -line_id
        return labels


def new_state(kind, config=None):
    kind = ParserKind.parse(kind)
    if kind not in ONLINE_PARSERS:
        raise ValueError(f"{kind.value} is not an online parser")
    return ONLINE_PARSERS[kind](config if config is not None else make_config(kind))


def parse_online_step(state, tokens: Sequence[str], weight: int = 1) -> int:
    return state.step(tokens, weight)


def run_core(kind, config, entries: Sequence[tuple]) -> list:
    """Run one parser over ``(tokens, weight)`` entries; one template (or None) per entry."""
    kind = ParserKind.parse(kind)
    if kind in ONLINE_PARSERS:
        return ONLINE_PARSERS[kind](config).run(entries)
    return OFFLINE_PARSERS[kind](entries, config)


def normalize(tokens: Sequence[str]) -> tuple:
    """Widen any token holding a masked span to a whole-token wildcard."""
    return tuple(WILDCARD if WILDCARD in t else t for t in tokens)


@functools.lru_cache(maxsize=4096)
def _hole_regex(masked: str):
    pieces = masked.split(WILDCARD)
    return re.compile("(.+?)".join(re.escape(p) for p in pieces))


def _capture(raw: str, masked: str) -> str:
    # "/<*>" against "/10.0.0.1" yields "10.0.0.1"; anything ambiguous keeps the raw token
    if masked == raw or masked == WILDCARD or masked.count(WILDCARD) != 1:
        return raw
    m = _hole_regex(masked).fullmatch(raw)
    return m.group(1) if m else raw


def _align(template: Sequence[str], tokens: Sequence[str]):
    """Match a template whose wildcards may span zero or more tokens.

    Returns one space-joined capture per wildcard or None.
    """
    n, m = len(template), len(tokens)
    memo: dict = {}

    def go(i, j):
        key = (i, j)
        if key in memo:
            return memo[key]
        if i == n:
            res = [] if j == m else None
        elif template[i] == WILDCARD:
            res = None
            for k in range(j, m + 1):
                rest = go(i + 1, k)
                if rest is not None:
                    res = [" ".join(tokens[j:k])] + rest
                    break
        elif j < m and template[i] == tokens[j]:
            res = go(i + 1, j + 1)
        else:
            res = None
        memo[key] = res
        return res

    return go(0, 0)


def extract_parameters(template: Sequence[str], raw_tokens: Sequence[str],
                       masked_tokens: Sequence[str]) -> tuple:
    """Parameter values of one message for its template.

    Position-wise against the raw tokens when lengths agree, where a masked
    sub-token span contributes only the masked part. Falls back to a
    variable-width alignment on raw then masked tokens.
    """
    if len(template) == len(raw_tokens) == len(masked_tokens):
        params = []
        for t, raw, masked in zip(template, raw_tokens, masked_tokens):
            if t == WILDCARD:
                params.append(_capture(raw, masked))
            elif t != raw:
                break
        else:
            return tuple(params)
    for tokens in (raw_tokens, masked_tokens):
        params = _align(template, tokens)
        if params is not None:
            return tuple(params)
    return ("",) * sum(1 for t in template if t == WILDCARD)


def _process_unit(kind, config, contents: Sequence[str], masks, dedup: bool, delimiters: str):
    """Parse one partition's contents; returns (template, parameters) per content."""
    if dedup:
        raw_index: dict[str, int] = {}
        raw_of = []
        for c in contents:
            pos = raw_index.get(c)
            if pos is None:
                pos = raw_index[c] = len(raw_index)
            raw_of.append(pos)
        distinct = list(raw_index)
        weights = [0] * len(distinct)
        for pos in raw_of:
            weights[pos] += 1
    else:
        distinct, raw_of, weights = contents, None, None

    masked = [apply_masks(c, masks) for c in distinct]
    mtoks = [tokenize(s, delimiters) for s in masked]
    ntoks = [normalize(t) if WILDCARD in s else tuple(t) for s, t in zip(masked, mtoks)]

    if dedup:
        # masking can make distinct raw lines identical; merge those too
        entry_index: dict[tuple, int] = {}
        entries: list[list] = []
        entry_of = []
        for toks, w in zip(ntoks, weights):
            pos = entry_index.get(toks)
            if pos is None:
                pos = entry_index[toks] = len(entries)
                entries.append([toks, 0])
            entries[pos][1] += w
            entry_of.append(pos)
        templates = run_core(kind, config, [tuple(e) for e in entries])
        per_distinct = [templates[p] for p in entry_of]
    else:
        per_distinct = run_core(kind, config, [(t, 1) for t in ntoks])

    results = []
    for c, tpl, mt in zip(distinct, per_distinct, mtoks):
        if tpl is None:
            results.append(None)
        else:
            results.append((tpl, extract_parameters(tpl, tokenize(c, delimiters), mt)))
    if dedup:
        return [results[p] for p in raw_of]
    return results


def parse(kind, config, records: Iterable[LogRecord], options: Optional[PipelineOptions] = None) -> ParseOutput:
    """Parse ``records`` with one parser and return the merged result.

    Output is deterministic for a given input, config and option set, and
    independent of the worker count.
    """
    kind = ParserKind.parse(kind)
    if config is None:
        config = make_config(kind)
    elif kind_of(config) is not kind:
        raise ValueError(f"config {config!r} does not belong to {kind.value}")
    options = options or PipelineOptions()
    records = list(records)

    if options.partition:
        groups: dict = {}
        for i, rec in enumerate(records):
            groups.setdefault(partition_key(rec), []).append(i)
        units = list(groups.values())
    else:
        units = [list(range(len(records)))]

    args = [(kind, config, [records[i].content for i in unit], tuple(options.masks),
             options.dedup, options.delimiters) for unit in units]
    if options.workers > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=options.workers) as pool:
            unit_results = list(pool.map(_process_unit, *zip(*args)))
    else:
        unit_results = [_process_unit(*a) for a in args]

    per_record: list = [None] * len(records)
    for unit, res in zip(units, unit_results):
        for i, r in zip(unit, res):
            per_record[i] = r
    return assemble(records, per_record)


def assemble(records: Sequence[LogRecord], per_record: Sequence) -> ParseOutput:
    """Build the final table in line order: ids are dense in first-seen order."""
    table = TemplateTable()
    assignments = []
    outliers = []
    ids: dict[tuple, int] = {}
    order = sorted(range(len(records)), key=lambda i: records[i].line_id)
    for i in order:
        res = per_record[i]
        line_id = records[i].line_id
        if res is None:
            outliers.append(line_id)
            continue
        tpl, params = res
        tid = ids.get(tpl)
        if tid is None:
            tid = ids[tpl] = table.add(EventTemplate(tpl))
        table.increment(tid)
        assignments.append(ParseAssignment(line_id, tid, params))
    return ParseOutput(table, assignments, outliers)
