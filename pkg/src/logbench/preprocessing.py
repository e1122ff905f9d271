"""Masking, deduplication and header partitioning applied ahead of parsing."""

from __future__ import annotations

import re
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .model import WILDCARD, LogRecord


@dataclass(frozen=True)
class MaskRule:
    name: str
    pattern: str
    replacement: str = WILDCARD

    def __post_init__(self):
        try:
            re.compile(self.pattern)
        except re.error as exc:
            raise ValueError(f"mask rule {self.name!r}: bad pattern: {exc}") from None
        if any(ch.isspace() for ch in self.replacement):
            raise ValueError(f"mask rule {self.name!r}: replacement must not contain whitespace")

    @cached_property
    def regex(self) -> re.Pattern:
        return re.compile(self.pattern)


# Order matters: IPs before plain numbers, ids before numbers.
DEFAULT_MASKS = (
    MaskRule("ip", r"(?<![\w.])\d{1,3}(?:\.\d{1,3}){3}(?::\d{1,5})?(?![\w.])"),
    MaskRule("path", r"(?<![\w/.<])(?:/[\w.\-]+){2,}/?"),
    # identifier tokens carrying a run of >= 8 hex characters and at least one digit
    MaskRule("hexid", r"(?<![\w\-])(?=[\w\-]*\d)[\w\-]*?[0-9a-fA-F]{8,}[\w\-]*"),
    MaskRule("number", r"(?<![\w.])[-+]?\d+(?:\.\d+)?(?![\w.])"),
)


def apply_masks(content: str, rules: Sequence[MaskRule] = DEFAULT_MASKS) -> str:
    for rule in rules:
        content = rule.regex.sub(rule.replacement, content)
    return content


def mask_records(records: Iterable[LogRecord], rules: Sequence[MaskRule] = DEFAULT_MASKS) -> list[LogRecord]:
    return [LogRecord(r.line_id, apply_masks(r.content, rules), r.header) for r in records]


@dataclass
class DedupEntry:
    content: str
    multiplicity: int = 0
    line_ids: list = field(default_factory=list)


def deduplicate(records: Sequence[LogRecord]):
    """Collapse records with identical content.

    Returns ``(entries, expansion)`` where entries are in first-seen order and
    ``expansion[i]`` is the entry index holding ``records[i]``.
    """
    index: dict[str, int] = {}
    entries: list[DedupEntry] = []
    expansion: list[int] = []
    for rec in records:
        pos = index.get(rec.content)
        if pos is None:
            pos = index[rec.content] = len(entries)
            entries.append(DedupEntry(rec.content))
        entry = entries[pos]
        entry.multiplicity += 1
        entry.line_ids.append(rec.line_id)
        expansion.append(pos)
    return entries, expansion


def expand(per_entry: Sequence, expansion: Sequence[int]) -> list:
    """Map a per-entry result list back onto the original record order."""
    return [per_entry[i] for i in expansion]


@dataclass(frozen=True, order=True)
class PartitionKey:
    level: str = ""
    component: str = ""


LEVEL_FIELDS = ("Level",)
COMPONENT_FIELDS = ("Component",)


def partition_key(record: LogRecord) -> PartitionKey:
    header = record.header or {}
    level = next((header[f] for f in LEVEL_FIELDS if f in header), "")
    component = next((header[f] for f in COMPONENT_FIELDS if f in header), "")
    return PartitionKey(level.strip(), component.strip())


def partition(records: Iterable[LogRecord]) -> "OrderedDict[PartitionKey, list[LogRecord]]":
    """Group records by (level, component), keeping first-seen key order."""
    groups: OrderedDict[PartitionKey, list[LogRecord]] = OrderedDict()
    for rec in records:
        groups.setdefault(partition_key(rec), []).append(rec)
    return groups
