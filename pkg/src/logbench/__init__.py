"""Log parsing toolkit with a benchmark harness for grouping accuracy,
volume robustness and parsing efficiency."""

from .model import (
    WILDCARD,
    EventTemplate,
    LogRecord,
    ParseAssignment,
    TemplateTable,
    match_template,
    merge_templates,
    render_template,
    tokenize,
)
from .parsers import ParserKind, PipelineOptions, make_config, parse

__version__ = "0.1.0"

__all__ = [
    "WILDCARD", "EventTemplate", "LogRecord", "ParseAssignment", "TemplateTable",
    "match_template", "merge_templates", "render_template", "tokenize",
    "ParserKind", "PipelineOptions", "make_config", "parse",
]
