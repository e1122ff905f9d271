"""Core log domain types: records, templates, and the template registry.

A template is a tuple of tokens in which the literal ``<*>`` marks a
parameter position. Constant tokens are compared verbatim; wildcards are
always whole tokens.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

WILDCARD = "<*>"
DEFAULT_DELIMITERS = " "


class TemplateError(ValueError):
    pass


@dataclass(frozen=True, slots=True)
class LogRecord:
    line_id: int
    content: str
    header: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.line_id < 1:
            raise ValueError(f"line_id must be >= 1, got {self.line_id}")


@dataclass(frozen=True, slots=True)
class EventTemplate:
    tokens: tuple

    def __post_init__(self):
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))

    @classmethod
    def parse(cls, text: str) -> "EventTemplate":
        return cls(tuple(tokenize(text)))

    @property
    def wildcard_count(self) -> int:
        return sum(1 for tok in self.tokens if tok == WILDCARD)

    def __len__(self):
        return len(self.tokens)

    def __str__(self):
        return render_template(self)


@dataclass(frozen=True, slots=True)
class ParseAssignment:
    line_id: int
    template_id: int
    parameters: tuple = ()


@functools.lru_cache(maxsize=32)
def _splitter(delimiters: str):
    return re.compile("[" + re.escape(delimiters) + "]+")


def tokenize(content: str, delimiters: str = DEFAULT_DELIMITERS) -> list[str]:
    """Split ``content`` on runs of any character in ``delimiters``.

    Empty tokens are never produced, so leading/trailing delimiters and
    delimiter runs are dropped.
    """
    if not delimiters:
        raise ValueError("delimiters must be non-empty")
    if delimiters == " ":
        return [tok for tok in content.split(" ") if tok]
    return [tok for tok in _splitter(delimiters).split(content) if tok]


def is_wildcard(token: str) -> bool:
    return token == WILDCARD


def render_template(template: EventTemplate | Sequence[str]) -> str:
    tokens = template.tokens if isinstance(template, EventTemplate) else template
    return " ".join(tokens)


def parse_template(text: str) -> EventTemplate:
    return EventTemplate.parse(text)


def match_template(template: EventTemplate | Sequence[str], tokens: Sequence[str]):
    """Return the wildcard captures of ``tokens`` against ``template``.

    Returns None when the lengths differ or a constant token disagrees.
    """
    ttoks = template.tokens if isinstance(template, EventTemplate) else template
    if len(ttoks) != len(tokens):
        return None
    params = []
    for expected, actual in zip(ttoks, tokens):
        if expected == WILDCARD:
            params.append(actual)
        elif expected != actual:
            return None
    return params


def merge_templates(a: EventTemplate, b: EventTemplate) -> EventTemplate:
    if len(a.tokens) != len(b.tokens):
        raise TemplateError(
            f"cannot merge templates of length {len(a.tokens)} and {len(b.tokens)}"
        )
    return EventTemplate(merge_tokens(a.tokens, b.tokens))


def merge_tokens(a: Sequence[str], b: Sequence[str]) -> tuple:
    return tuple(x if x == y else WILDCARD for x, y in zip(a, b))


def substitute(template: EventTemplate, parameters: Sequence[str]) -> list[str]:
    """Fill the wildcards of ``template`` with ``parameters`` in order."""
    if len(parameters) != template.wildcard_count:
        raise TemplateError(
            f"{template.wildcard_count} wildcards but {len(parameters)} parameters"
        )
    it = iter(parameters)
    return [next(it) if tok == WILDCARD else tok for tok in template.tokens]


def event_id(template_id: int) -> str:
    return f"E{template_id}"


def parse_event_id(text: str) -> int:
    if not text.startswith("E") or not text[1:].isdigit():
        raise ValueError(f"malformed EventId {text!r}")
    return int(text[1:])


class TemplateTable:
    """Registry of distinct templates with dense, stable integer ids.

    Ids start at 1 and follow insertion order. Adding a template whose
    rendered form is already registered returns the existing id.
    """

    def __init__(self):
        self._templates: list[EventTemplate] = []
        self._counts: list[int] = []
        self._index: dict[str, int] = {}

    def add(self, template: EventTemplate, count: int = 0) -> int:
        key = render_template(template)
        tid = self._index.get(key)
        if tid is None:
            self._templates.append(template)
            self._counts.append(0)
            tid = len(self._templates)
            self._index[key] = tid
        if count:
            self.increment(tid, count)
        return tid

    def lookup(self, template: EventTemplate | str):
        key = template if isinstance(template, str) else render_template(template)
        return self._index.get(key)

    def increment(self, template_id: int, n: int = 1):
        if n < 0:
            raise ValueError("occurrence increments must be non-negative")
        self._counts[template_id - 1] += n

    def template(self, template_id: int) -> EventTemplate:
        if not 1 <= template_id <= len(self._templates):
            raise KeyError(template_id)
        return self._templates[template_id - 1]

    def count(self, template_id: int) -> int:
        if not 1 <= template_id <= len(self._templates):
            raise KeyError(template_id)
        return self._counts[template_id - 1]

    def __contains__(self, template_id) -> bool:
        return isinstance(template_id, int) and 1 <= template_id <= len(self._templates)

    def __len__(self):
        return len(self._templates)

    def __iter__(self) -> Iterator[tuple[int, EventTemplate, int]]:
        for i, (tpl, cnt) in enumerate(zip(self._templates, self._counts), start=1):
            yield i, tpl, cnt

    @property
    def total(self) -> int:
        return sum(self._counts)

    def canonical(self) -> dict[str, int]:
        """Rendered template -> occurrences; equal for tables that differ only by ids."""
        return {render_template(t): c for _, t, c in self}

    @classmethod
    def from_items(cls, items: Iterable[tuple[EventTemplate, int]]) -> "TemplateTable":
        table = cls()
        for tpl, cnt in items:
            table.add(tpl, cnt)
        return table
