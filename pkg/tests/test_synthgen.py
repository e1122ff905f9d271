from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from logbench.ingestion import compile_format, records_from_lines
from logbench.model import EventTemplate, WILDCARD, match_template, tokenize
from logbench.synthgen import (
    SYNTH_FORMAT,
    HexId,
    IntRange,
    TemplateSpec,
    TokenPool,
    generate_corpus,
    parse_generator,
    random_specs,
    write_corpus,
)


def test_constant_spec():
    records, truth = generate_corpus([TemplateSpec("VM terminated.")], 5, seed=0)
    assert {r.content for r in records} == {"VM terminated."}
    assert truth.template_count == 1 and len(truth) == 5


def test_weights_respected():
    specs = [TemplateSpec("a <*>", [IntRange(0, 9)], weight=3),
             TemplateSpec("b <*>", [IntRange(0, 9)], weight=1)]
    _, truth = generate_corpus(specs, 4000, seed=42)
    counts = Counter(truth.templates.values())
    assert abs(counts["a <*>"] - 3000) <= 150
    assert abs(counts["b <*>"] - 1000) <= 50


def test_same_seed_same_corpus(tmp_path):
    specs = random_specs(5, seed=1)
    for name in ("x", "y"):
        write_corpus(generate_corpus(specs, 200, seed=3)[0], tmp_path / name)
    assert (tmp_path / "x").read_bytes() == (tmp_path / "y").read_bytes()


def test_spec_validation():
    with pytest.raises(ValueError):
        TemplateSpec("a <*>", [])
    with pytest.raises(ValueError):
        TemplateSpec("a", [], weight=0)
    with pytest.raises(ValueError):
        generate_corpus([], 3, seed=0)
    with pytest.raises(ValueError):
        generate_corpus([TemplateSpec("a")], 0, seed=0)


def test_parse_generator():
    assert parse_generator("int:1-5") == IntRange(1, 5)
    assert parse_generator("hex:8:blk_") == HexId(8, "blk_")
    assert parse_generator("pool:a|b") == TokenPool(("a", "b"))
    with pytest.raises(ValueError):
        parse_generator("zzz:1")


def test_non_adversarial_values_avoid_constants():
    specs = [TemplateSpec("x <*>", [TokenPool(("x", "y"))])]
    records, _ = generate_corpus(specs, 50, seed=0)
    assert {r.content for r in records} == {"x y"}
    with pytest.raises(ValueError):
        generate_corpus([TemplateSpec("x <*>", [TokenPool(("x",))])], 1, seed=0)
    adv, _ = generate_corpus([TemplateSpec("x <*>", [TokenPool(("x",))])], 2, seed=0,
                             adversarial=True)
    assert adv[0].content == "x x"


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1000), st.integers(1, 6))
def test_messages_match_their_templates(seed, count):
    specs = random_specs(count, seed=seed, pool_size=3)
    records, truth = generate_corpus(specs, 60, seed=seed)
    for rec in records:
        tpl = EventTemplate.parse(truth.templates[rec.line_id])
        assert match_template(tpl, tokenize(rec.content)) is not None
        assert tpl.tokens[0] != WILDCARD


def test_random_specs_disjoint_constants():
    specs = random_specs(12, seed=5, lengths=list(range(3, 15)))
    seen = set()
    for s in specs:
        consts = {t for t in s.template.tokens if t != WILDCARD}
        assert not consts & seen
        seen |= consts
    assert [len(s.template) for s in specs] == list(range(3, 15))


def test_written_corpus_reads_back(tmp_path):
    specs = random_specs(3, seed=2, levels=("INFO", "WARN"), components=("a", "b"))
    records, _ = generate_corpus(specs, 50, seed=1)
    write_corpus(records, tmp_path / "c.log")
    back = list(records_from_lines((tmp_path / "c.log").read_text().splitlines(),
                                   compile_format(SYNTH_FORMAT)))
    assert back == records
