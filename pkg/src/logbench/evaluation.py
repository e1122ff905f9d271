"""Grouping accuracy, sampling, parameter sweeps and volume experiments."""

from __future__ import annotations

import csv
import gc
import itertools
import logging
import random
import time
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .ingestion import compile_format, records_from_lines
from .model import LogRecord
from .parsers import ParserKind, PipelineOptions, config_items, make_config, parse

log = logging.getLogger(__name__)


@dataclass
class GroundTruth:
    templates: dict  # line_id -> truth template string

    def groups(self) -> dict:
        return dict(self.templates)

    def restrict(self, line_ids: Iterable[int]) -> "GroundTruth":
        return GroundTruth({i: self.templates[i] for i in line_ids})

    def __len__(self):
        return len(self.templates)

    @property
    def template_count(self) -> int:
        return len(set(self.templates.values()))


def load_truth(path) -> GroundTruth:
    """Read a labelled CSV with at least LineId and EventTemplate columns."""
    with open(path, "r", encoding="utf-8", errors="replace", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = {"LineId", "EventTemplate"} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        return GroundTruth({int(row["LineId"]): row["EventTemplate"] for row in reader})


def write_truth(truth: GroundTruth, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["LineId", "EventTemplate"])
        for line_id in sorted(truth.templates):
            writer.writerow([line_id, truth.templates[line_id]])


def grouping_accuracy(predicted: Mapping, truth: Mapping) -> float:
    """Share of messages whose predicted group has exactly the members of
    their true group. Group labels themselves are irrelevant.
    """
    if not truth:
        raise ValueError("grouping_accuracy needs at least one message")
    if predicted.keys() != truth.keys():
        raise ValueError("predicted and truth cover different messages")
    pred_sizes = Counter(predicted.values())
    truth_sizes = Counter(truth.values())
    # a predicted group is exact iff all its members share one truth label
    # and that truth group has the same size
    pairs = Counter((predicted[k], truth[k]) for k in truth)
    correct = 0
    for (p, t), n in pairs.items():
        if n == pred_sizes[p] == truth_sizes[t]:
            correct += n
    return correct / len(truth)


def sample_messages(records: Sequence[LogRecord], n: int, seed) -> list:
    """Uniform sample without replacement, kept in original order."""
    records = list(records)
    if n >= len(records):
        if n > len(records):
            log.warning("requested %d messages but only %d available", n, len(records))
        return records
    picks = sorted(random.Random(seed).sample(range(len(records)), n))
    return [records[i] for i in picks]


@dataclass
class EvaluationResult:
    parser: str
    dataset: str
    pa: float
    wall_time: float
    templates: int
    config: object = None
    seed: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.pa <= 1.0:
            raise ValueError(f"PA out of range: {self.pa}")
        if self.wall_time < 0:
            raise ValueError("negative wall time")


def evaluate(kind, config, records: Sequence[LogRecord], truth: GroundTruth,
             options: Optional[PipelineOptions] = None, dataset: str = "",
             seed=None) -> EvaluationResult:
    kind = ParserKind.parse(kind)
    start = time.perf_counter()
    out = parse(kind, config, records, options)
    elapsed = time.perf_counter() - start
    expected = {r.line_id for r in records}
    pa = grouping_accuracy(out.groups(), truth.restrict(expected).groups())
    return EvaluationResult(kind.value, dataset, pa, elapsed, len(out.table), config, seed)


def expand_grid(axes: Mapping[str, Sequence]) -> list[dict]:
    keys = sorted(axes)
    return [dict(zip(keys, values)) for values in itertools.product(*(axes[k] for k in keys))]


_DEFAULT_AXES = {
    ParserKind.DRAIN: {"depth": [3, 4], "st": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8]},
    ParserKind.SPELL: {"tau": [0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9]},
    ParserKind.LENMA: {"sigma": [0.5, 0.6, 0.7, 0.75, 0.8, 0.85, 0.88, 0.9, 0.92, 0.95, 0.98]},
    ParserKind.IPLOM: {"ct": [0.25, 0.35, 0.45, 0.55], "lower": [0.1, 0.25, 0.4]},
    ParserKind.AEL: {"merge": [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]},
    ParserKind.SLCT: {"support": [1, 2, 3, 5, 8, 10, 20, 50, 100, 200], "promote_outliers": [True]},
}


def default_grid(kind) -> list[dict]:
    return expand_grid(_DEFAULT_AXES[ParserKind.parse(kind)])


def _sweep_key(result: EvaluationResult):
    return (-result.pa, result.templates, repr(config_items(result.config)))


def sweep_parameters(kind, grid: Sequence[Mapping], records: Sequence[LogRecord],
                     truth: GroundTruth, options: Optional[PipelineOptions] = None,
                     dataset: str = "", seed=None, base: Optional[Mapping] = None) -> EvaluationResult:
    """Evaluate every grid point and return the best result.

    Best means highest PA, then fewest templates, then the lexicographically
    smallest config.
    """
    kind = ParserKind.parse(kind)
    grid = list(grid)
    if not grid:
        raise ValueError("empty parameter grid")
    results = []
    for point in grid:
        config = make_config(kind, {**(base or {}), **point})
        results.append(evaluate(kind, config, records, truth, options, dataset, seed))
    return min(results, key=_sweep_key)


@dataclass
class VolumePoint:
    size: int
    wall_time: float = 0.0
    pa: Optional[float] = None
    timed_out: bool = False
    messages: int = 0

    def __post_init__(self):
        if self.size <= 0:
            raise ValueError("size must be positive")


def read_prefix(path, size: int) -> list[str]:
    """Whole lines from the first ``size`` bytes of ``path``."""
    with open(path, "rb") as fh:
        data = fh.read(size)
        more = fh.read(1)
    if more and not data.endswith(b"\n"):
        cut = data.rfind(b"\n")
        data = data[:cut + 1] if cut >= 0 else b""
    return data.decode("utf-8", errors="replace").splitlines()


def measure_efficiency(kind, config, path, sizes: Sequence[int], budget: float,
                       log_format: str = "<Content>", truth: Optional[GroundTruth] = None,
                       options: Optional[PipelineOptions] = None,
                       repeats: int = 1) -> list[VolumePoint]:
    """Time a fixed-config parse on growing prefixes of one log file.

    Each prefix ends at the last full line within the requested byte size.
    With ``repeats > 1`` the fastest of that many runs is reported, which
    damps scheduler noise on shared machines. Once a run exceeds ``budget``
    seconds, it and every larger size are reported as timed out.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    kind = ParserKind.parse(kind)
    sizes = list(sizes)
    if sizes != sorted(sizes):
        raise ValueError("sizes must be ascending")
    fmt = compile_format(log_format)
    file_size = Path(path).stat().st_size
    if sizes and sizes[-1] > file_size:
        log.warning("%s holds %d bytes, less than the requested %d", path, file_size, sizes[-1])
    points = []
    exceeded = budget <= 0
    for size in sizes:
        if exceeded:
            points.append(VolumePoint(size, timed_out=True))
            continue
        elapsed = None
        for _ in range(repeats):
            records = out = None
            gc.collect()  # leftovers of the previous run should not be billed here
            start = time.perf_counter()
            records = list(records_from_lines(read_prefix(path, size), fmt))
            out = parse(kind, config, records, options)
            run = time.perf_counter() - start
            elapsed = run if elapsed is None else min(elapsed, run)
            if run > budget:
                break
        point = VolumePoint(size, elapsed, messages=len(records))
        if elapsed > budget:
            point.timed_out = exceeded = True
        elif truth is not None and records and all(r.line_id in truth.templates for r in records):
            point.pa = grouping_accuracy(out.groups(), truth.restrict(r.line_id for r in records).groups())
        points.append(point)
    return points


@dataclass
class Summary:
    minimum: float
    q25: float
    median: float
    q75: float
    maximum: float
    mean: float
    count: int


def five_number(values: Sequence[float]) -> Summary:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("no values to summarise")
    q = np.quantile(arr, [0.0, 0.25, 0.5, 0.75, 1.0], method="linear")
    return Summary(*(float(x) for x in q), float(arr.mean()), int(arr.size))


def robustness_summary(results: Iterable[EvaluationResult]) -> dict:
    """Per-parser five-number PA summary, parsers in ascending order of mean PA."""
    by_parser = defaultdict(list)
    for r in results:
        by_parser[r.parser].append(r.pa)
    summaries = {p: five_number(v) for p, v in by_parser.items()}
    return dict(sorted(summaries.items(), key=lambda kv: (kv[1].mean, kv[0])))
