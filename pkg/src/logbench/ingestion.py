"""Reading raw log files into records and writing parse results as CSV."""

from __future__ import annotations

import ast
import csv
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

from .model import (
    EventTemplate,
    LogRecord,
    ParseAssignment,
    TemplateTable,
    event_id,
    parse_event_id,
    parse_template,
    render_template,
)

log = logging.getLogger(__name__)

CONTENT_FIELD = "Content"
STRUCTURED_HEADER = ["LineId", "EventId", "EventTemplate", "ParameterList"]
TEMPLATES_HEADER = ["EventId", "EventTemplate", "Occurrences"]

_FIELD_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class FormatError(ValueError):
    """Malformed log format string; ``position`` is the offending offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class LogFormat:
    spec: str
    fields: tuple
    regex: re.Pattern

    def extract(self, line: str):
        """Return ``(header, content)`` or None when the line does not fit."""
        m = self.regex.match(line)
        if m is None:
            return None
        groups = m.groupdict()
        content = groups.pop(CONTENT_FIELD)
        return groups, content


def compile_format(spec: str) -> LogFormat:
    """Compile a ``<Field>`` style format string into a header extractor.

    Header fields match minimally, the ``<Content>`` field takes the rest of
    the line. Literal text between fields must appear verbatim.
    """
    fields: list[str] = []
    parts: list[str] = []
    pos = 0
    while pos < len(spec):
        lt = spec.find("<", pos)
        if lt < 0:
            parts.append(re.escape(spec[pos:]))
            break
        if lt > pos:
            parts.append(re.escape(spec[pos:lt]))
        gt = spec.find(">", lt)
        if gt < 0:
            raise FormatError("unterminated field", lt)
        name = spec[lt + 1:gt]
        if not _FIELD_NAME.fullmatch(name):
            raise FormatError(f"invalid field name {name!r}", lt)
        if name in fields:
            raise FormatError(f"duplicate field {name!r}", lt)
        if CONTENT_FIELD in fields:
            raise FormatError("fields after <Content>", lt)
        fields.append(name)
        if name == CONTENT_FIELD:
            parts.append(f"(?P<{name}>.*)")
        else:
            parts.append(f"(?P<{name}>.*?)")
        pos = gt + 1
    if CONTENT_FIELD not in fields:
        raise FormatError("format has no <Content> field", len(spec))
    if not parts[-1].startswith(f"(?P<{CONTENT_FIELD}>"):
        raise FormatError("literal text after <Content>", spec.rfind(">") + 1)
    return LogFormat(spec, tuple(fields), re.compile("^" + "".join(parts) + "$", re.DOTALL))


@dataclass
class DatasetDescriptor:
    name: str
    path: Path
    log_format: str = "<Content>"
    truth_path: Optional[Path] = None
    mask_set: Optional[str] = None
    multiline: bool = False
    parser_configs: dict = field(default_factory=dict)


@dataclass
class ReadStats:
    lines: int = 0
    records: int = 0
    fallbacks: int = 0
    folded: int = 0


def iter_lines(path) -> Iterator[str]:
    with open(path, "r", encoding="utf-8", errors="replace", newline=None) as fh:
        for line in fh:
            yield line.rstrip("\n")


def records_from_lines(lines: Iterable[str], fmt: LogFormat, multiline: bool = False,
                       stats: Optional[ReadStats] = None) -> Iterator[LogRecord]:
    stats = stats if stats is not None else ReadStats()
    pending: Optional[tuple] = None
    for line in lines:
        stats.lines += 1
        parsed = fmt.extract(line)
        if parsed is None:
            if multiline and pending is not None:
                pending = (pending[0], pending[1] + "\n" + line)
                stats.folded += 1
                continue
            stats.fallbacks += 1
            parsed = ({}, line)
        if pending is not None:
            stats.records += 1
            yield LogRecord(stats.records, pending[1], pending[0])
        pending = parsed
    if pending is not None:
        stats.records += 1
        yield LogRecord(stats.records, pending[1], pending[0])


def read_records(ds: DatasetDescriptor, stats: Optional[ReadStats] = None) -> Iterator[LogRecord]:
    """Stream the records of a dataset's raw log file.

    Lines that do not fit the format become header-less records holding the
    whole line. In multiline mode such lines are instead appended to the
    previous record's content.
    """
    stats = stats if stats is not None else ReadStats()
    fmt = compile_format(ds.log_format)
    yield from records_from_lines(iter_lines(ds.path), fmt, ds.multiline, stats)
    if stats.fallbacks:
        log.warning("%s: %d of %d lines did not match format %r",
                    ds.name, stats.fallbacks, stats.lines, ds.log_format)


def format_parameters(params: Sequence[str]) -> str:
    return "[" + ",".join(repr(p) for p in params) + "]"


def parse_parameters(text: str) -> tuple:
    value = ast.literal_eval(text)
    if not isinstance(value, list):
        raise ValueError(f"ParameterList is not a list: {text!r}")
    return tuple(value)


def write_structured(assignments: Iterable[ParseAssignment], table: TemplateTable, path) -> None:
    rows = sorted(assignments, key=lambda a: a.line_id)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(STRUCTURED_HEADER)
        for a in rows:
            tpl = table.template(a.template_id)
            writer.writerow([a.line_id, event_id(a.template_id), render_template(tpl),
                             format_parameters(a.parameters)])


def write_templates(table: TemplateTable, path) -> None:
    rows = sorted(table, key=lambda item: (-item[2], item[0]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TEMPLATES_HEADER)
        for tid, tpl, count in rows:
            writer.writerow([event_id(tid), render_template(tpl), count])


def _check_header(found, expected, path):
    if found is None or [h.strip() for h in found[:len(expected)]] != expected:
        raise ValueError(f"{path}: expected CSV header {','.join(expected)}, got {found}")


def read_structured(path) -> tuple[list[ParseAssignment], dict[int, EventTemplate]]:
    """Read a structured file back into assignments and the id -> template map."""
    assignments = []
    templates: dict[int, EventTemplate] = {}
    with open(path, "r", encoding="utf-8", errors="replace", newline="") as fh:
        reader = csv.reader(fh)
        _check_header(next(reader, None), STRUCTURED_HEADER, path)
        for row in reader:
            tid = parse_event_id(row[1])
            templates.setdefault(tid, parse_template(row[2]))
            assignments.append(ParseAssignment(int(row[0]), tid, parse_parameters(row[3])))
    return assignments, templates


def read_templates(path) -> TemplateTable:
    with open(path, "r", encoding="utf-8", errors="replace", newline="") as fh:
        reader = csv.reader(fh)
        _check_header(next(reader, None), TEMPLATES_HEADER, path)
        rows = [(parse_event_id(r[0]), parse_template(r[1]), int(r[2])) for r in reader]
    table = TemplateTable()
    for tid, tpl, count in sorted(rows, key=lambda r: r[0]):
        if table.add(tpl, count) != tid:
            raise ValueError(f"{path}: EventIds are not dense")
    return table


def truncate_file(src, dst, size: int) -> int:
    """Copy the longest prefix of ``src`` made of whole lines and at most ``size`` bytes."""
    with open(src, "rb") as fh:
        data = fh.read(size)
        more = fh.read(1)
    if more and not data.endswith(b"\n"):
        cut = data.rfind(b"\n")
        data = data[:cut + 1] if cut >= 0 else b""
    with open(dst, "wb") as fh:
        fh.write(data)
    return len(data)
