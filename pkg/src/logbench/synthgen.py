"""Synthetic corpora generated from known templates, with ground truth."""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .evaluation import GroundTruth
from .model import WILDCARD, EventTemplate, LogRecord, render_template


@dataclass(frozen=True)
class IntRange:
    low: int = 0
    high: int = 99999

    def draw(self, rng: random.Random) -> str:
        return str(rng.randint(self.low, self.high))


@dataclass(frozen=True)
class TokenPool:
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("token pool is empty")
        object.__setattr__(self, "values", tuple(self.values))

    def draw(self, rng: random.Random) -> str:
        return rng.choice(self.values)


@dataclass(frozen=True)
class HexId:
    length: int = 16
    prefix: str = ""

    def draw(self, rng: random.Random) -> str:
        # ids always carry a digit, like the ids the default masks target
        while True:
            body = "".join(rng.choice("0123456789abcdef") for _ in range(self.length))
            if any(ch.isdigit() for ch in body):
                return self.prefix + body


@dataclass
class TemplateSpec:
    template: EventTemplate
    generators: Sequence = ()
    weight: float = 1.0
    level: str = "INFO"
    component: str = "app"

    def __post_init__(self):
        if isinstance(self.template, str):
            self.template = EventTemplate.parse(self.template)
        if len(self.generators) != self.template.wildcard_count:
            raise ValueError(f"{render_template(self.template)!r}: "
                             f"{self.template.wildcard_count} wildcards but "
                             f"{len(self.generators)} generators")
        if self.weight <= 0:
            raise ValueError("weight must be positive")


def parse_generator(text: str):
    """``int:LOW-HIGH``, ``hex:LEN[:PREFIX]`` or ``pool:a|b|c``."""
    kind, _, arg = text.strip().partition(":")
    if kind == "int":
        low, _, high = arg.partition("-")
        return IntRange(int(low), int(high))
    if kind == "hex":
        length, _, prefix = arg.partition(":")
        return HexId(int(length), prefix)
    if kind == "pool":
        return TokenPool(tuple(v for v in arg.split("|") if v))
    raise ValueError(f"unknown generator {text!r}")


def _constants(specs):
    return {tok for s in specs for tok in s.template.tokens if tok != WILDCARD}


def _instantiate(spec: TemplateSpec, rng, banned, adversarial, max_tries=100):
    gens = iter(spec.generators)
    out = []
    for tok in spec.template.tokens:
        if tok != WILDCARD:
            out.append(tok)
            continue
        gen = next(gens)
        value = gen.draw(rng)
        tries = 0
        while not adversarial and value in banned:
            tries += 1
            if tries >= max_tries:
                raise ValueError(f"generator {gen!r} keeps producing constant tokens")
            value = gen.draw(rng)
        out.append(value)
    return out


def iter_corpus(specs: Sequence[TemplateSpec], n: int, seed, adversarial: bool = False,
                start_line: int = 1):
    """Yield ``(record, truth_template)`` pairs; see :func:`generate_corpus`."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not specs:
        raise ValueError("no template specs")
    rng = random.Random(seed)
    banned = _constants(specs)
    chosen = rng.choices(range(len(specs)), weights=[s.weight for s in specs], k=n)
    rng.shuffle(chosen)
    rendered = [render_template(s.template) for s in specs]
    for offset, idx in enumerate(chosen):
        spec = specs[idx]
        tokens = _instantiate(spec, rng, banned, adversarial)
        header = {"Level": spec.level, "Component": spec.component}
        yield LogRecord(start_line + offset, " ".join(tokens), header), rendered[idx]


def generate_corpus(specs: Sequence[TemplateSpec], n: int, seed, adversarial: bool = False,
                    start_line: int = 1):
    """Draw ``n`` messages from ``specs`` in proportion to their weights.

    Returns ``(records, truth)``. Unless ``adversarial`` is set, parameter
    values never coincide with a constant token of any spec.
    """
    records = []
    truth = {}
    for rec, tpl in iter_corpus(specs, n, seed, adversarial, start_line):
        records.append(rec)
        truth[rec.line_id] = tpl
    return records, GroundTruth(truth)


SYNTH_FORMAT = "<Level> <Component>: <Content>"


def format_line(record: LogRecord) -> str:
    h = record.header
    return f"{h.get('Level', 'INFO')} {h.get('Component', 'app')}: {record.content}"


def write_corpus(records: Iterable[LogRecord], path) -> int:
    """Write records in the synthetic line format; returns the line count."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            n += 1
            fh.write(format_line(rec))
            fh.write("\n")
    return n


def _word(rng, taken, low=3, high=9):
    while True:
        w = "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(low, high)))
        if w not in taken:
            taken.add(w)
            return w


def random_specs(count: int, seed, lengths: Optional[Sequence[int]] = None,
                 wildcard_share: float = 0.3, levels=("INFO",), components=("app",),
                 pool_size: int = 0) -> list[TemplateSpec]:
    """Random templates with pairwise-disjoint constant words.

    ``lengths`` fixes the token count of each template (distinct lengths make
    the truth grouping the only perfect one). The first token is always a
    constant. Parameters draw from integer, hex-id and, when ``pool_size`` is
    positive, word-pool generators.
    """
    rng = random.Random(seed)
    if lengths is None:
        lengths = [rng.randint(4, 12) for _ in range(count)]
    if len(lengths) != count:
        raise ValueError("need one length per template")
    taken: set = set()
    specs = []
    for i, length in enumerate(lengths):
        tokens, gens = [], []
        for pos in range(length):
            if pos > 0 and rng.random() < wildcard_share:
                tokens.append(WILDCARD)
                roll = rng.random()
                if pool_size and roll < 0.3:
                    gens.append(TokenPool(tuple(_word(rng, taken) for _ in range(pool_size))))
                elif roll < 0.65:
                    gens.append(IntRange(0, 10 ** rng.randint(2, 6)))
                else:
                    gens.append(HexId(rng.choice([8, 12, 16])))
            else:
                tokens.append(_word(rng, taken))
        specs.append(TemplateSpec(EventTemplate(tuple(tokens)), gens,
                                  weight=rng.uniform(0.5, 2.0),
                                  level=levels[i % len(levels)],
                                  component=components[i % len(components)]))
    return specs
