import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import BLOCK_MSG, oracle_corpus
from logbench.evaluation import grouping_accuracy
from logbench.model import WILDCARD, EventTemplate, LogRecord, TemplateError, match_template, tokenize
from logbench.parsers import (
    ConfigError,
    IPLoMConfig,
    ParserKind,
    PipelineOptions,
    SLCTConfig,
    ael,
    extract_parameters,
    iplom,
    iplom_partition_by_bijection,
    iplom_partition_by_position,
    lcs,
    lcs_template,
    length_vector_similarity,
    make_config,
    new_state,
    parse,
    parse_online_step,
    seq_similarity,
    slct,
)
from logbench.parsers.pipeline import normalize
from logbench.preprocessing import apply_masks

FULL = [k for k in ParserKind if k.full_coverage]
small_tokens = st.lists(st.sampled_from("abcd"), max_size=7)


def brute_lcs_len(a, b):
    for size in range(min(len(a), len(b)), 0, -1):
        subs = set(itertools.combinations(b, size))
        if any(c in subs for c in itertools.combinations(a, size)):
            return size
    return 0


def is_subsequence(sub, seq):
    it = iter(seq)
    return all(tok in it for tok in sub)


# --- similarity helpers ---------------------------------------------------

def test_lcs_examples():
    assert lcs(["a", "b", "c"], ["a", "c"]) == ["a", "c"]
    assert lcs(["x", "y", "z"], ["x", "y", "z"]) == ["x", "y", "z"]
    # both single-token answers exist; the earliest in the first argument wins
    assert lcs(["x", "y"], ["y", "x"]) == ["x"]


@given(small_tokens, small_tokens)
def test_lcs_matches_brute_force(a, b):
    common = lcs(a, b)
    assert len(common) == brute_lcs_len(a, b)
    assert is_subsequence(common, a) and is_subsequence(common, b)


def test_seq_similarity_examples():
    t = EventTemplate.parse
    assert seq_similarity(t("a b"), ["a", "b"]) == 1.0
    assert seq_similarity(t("a <*>"), ["a", "x"]) == 0.5
    assert seq_similarity(t("a b"), ["c", "d"]) == 0.0
    with pytest.raises(TemplateError):
        seq_similarity(t("a"), ["a", "b"])


def test_length_vector_similarity_examples():
    assert length_vector_similarity(["ab", "c"], ["xy", "z"]) == pytest.approx(1.0)
    assert length_vector_similarity(["abc", "d"], ["abc", "d"]) == pytest.approx(1.0)
    assert length_vector_similarity(["a", "bbbb"], ["aaaa", "b"]) == pytest.approx(8 / 17)
    assert length_vector_similarity(["a"], ["a", "b"]) is None


# --- online parsers -------------------------------------------------------

def masked(text):
    return normalize(tokenize(apply_masks(text)))


def test_drain_two_message_trace():
    state = new_state("Drain")
    a = parse_online_step(state, masked("Received block blk_1a2b3c4d5e of size 5 from 10.0.0.1"))
    b = parse_online_step(state, masked("Received block blk_9f8e7d6c5b of size 77 from 10.0.0.2"))
    assert a == b
    assert state.templates[a] == ("Received", "block", WILDCARD, "of", "size", WILDCARD,
                                  "from", WILDCARD)


def test_spell_trace():
    state = new_state("Spell", make_config("Spell", {"tau": 0.5}))
    first = parse_online_step(state, ["a", "b", "c"])
    second = parse_online_step(state, ["a", "d", "c"])
    assert first == second
    assert state.templates[first] == ("a", WILDCARD, "c")


def test_lcs_template_gaps():
    assert lcs_template(("a", "b", "c"), ("a", "d", "c")) == ("a", WILDCARD, "c")
    assert lcs_template(("a", "b", "c"), ("a", "x", "y", "c")) == ("a", WILDCARD, "c")


@pytest.mark.parametrize("kind", ["Drain", "Spell", "LenMa"])
def test_first_message_becomes_template(kind):
    state = new_state(kind)
    cid = parse_online_step(state, ["alpha", "beta", "gamma"])
    assert state.templates[cid] == ("alpha", "beta", "gamma")
    assert state.counts[cid] == 1


def test_lenma_splits_on_length_profile():
    state = new_state("LenMa", make_config("LenMa", {"sigma": 0.99}))
    a = parse_online_step(state, ["open", "file", "x"])
    b = parse_online_step(state, ["open", "file", "y"])
    c = parse_online_step(state, ["a", "verylongtoken", "y"])
    assert a == b != c


# --- offline parsers ------------------------------------------------------

def test_slct_example():
    out = slct([(("a", "b"), 1), (("a", "c"), 1)], SLCTConfig(support=2))
    assert out == [("a", WILDCARD), ("a", WILDCARD)]


def test_slct_outliers_and_promotion():
    entries = [(("a", "b"), 1), (("a", "c"), 1), (("z", "q"), 1)]
    assert slct(entries, SLCTConfig(support=2))[2] is None
    assert slct(entries, SLCTConfig(support=2, promote_outliers=True))[2] == ("z", "q")


def test_iplom_never_mixes_lengths():
    entries = [(("a", "b"), 1), (("a", "b", "c"), 1), (("a", "x"), 1)]
    out = iplom(entries, IPLoMConfig())
    assert all(len(t) == len(e[0]) for t, e in zip(out, entries))


def test_ael_identical_messages():
    out = ael([(("x", "y", "z"), 1)] * 5)
    assert set(out) == {("x", "y", "z")}


def test_iplom_partition_by_position():
    assert iplom_partition_by_position([("a", "x"), ("a", "y")]) == [[("a", "x"), ("a", "y")]]
    assert iplom_partition_by_position([("a", "x")]) == [[("a", "x")]]
    assert iplom_partition_by_position([("a", "x"), ("b", "x")]) == [[("a", "x"), ("b", "x")]]


def test_iplom_partition_by_bijection():
    one_to_one = [("x", "p", "k"), ("y", "q", "k"), ("x", "p", "k"), ("y", "q", "k")]
    assert len(iplom_partition_by_bijection(one_to_one)) == 2
    same = [("x", "p"), ("x", "p")]
    assert iplom_partition_by_bijection(same) == [same]
    # 3x3 cross product: every value maps to every value (M-M)
    cross = [(a, b) for a in "xyz" for b in "pqr"]
    parts = iplom_partition_by_bijection(cross, lower=0.25, upper=0.9)
    assert len(parts) == 1 and sorted(parts[0]) == sorted(cross)


def test_config_validation():
    with pytest.raises(ConfigError):
        make_config("Drain", {"depth": 2})
    with pytest.raises(ConfigError):
        make_config("Drain", {"nope": 1})
    with pytest.raises(ConfigError):
        make_config("SLCT", {"support": 0})
    with pytest.raises(ConfigError):
        ParserKind.parse("Foo")
    assert make_config("drain", {"st": "0.5"}).st == 0.5


# --- pipeline -------------------------------------------------------------

def test_extract_parameters_block_message():
    tpl = ("Received", "block", WILDCARD, "of", "size", WILDCARD, "from", WILDCARD)
    raw = tokenize(BLOCK_MSG)
    params = extract_parameters(tpl, raw, tokenize(apply_masks(BLOCK_MSG)))
    assert params == ("blk_-562725280853087685", "67108864", "10.251.91.84")


def test_extract_parameters_variable_width():
    # an unequal-gap wildcard can absorb several raw tokens
    assert extract_parameters(("a", WILDCARD, "c"), ["a", "x", "y", "c"], ["a", "x", "y", "c"]) == ("x y",)


@pytest.mark.parametrize("kind", list(ParserKind))
def test_block_message_single(kind):
    out = parse(kind, make_config(kind, {"support": 1} if kind is ParserKind.SLCT else {}),
                [LogRecord(1, BLOCK_MSG)])
    assert len(out.table) == 1 and len(out.assignments) == 1


def multi_level(records):
    return [LogRecord(r.line_id, r.content, {"Level": "INFO", "Component": "x"}) for r in records]


@pytest.mark.parametrize("kind", list(ParserKind))
def test_partition_single_key_matches_plain(kind, small_oracle):
    records, _ = small_oracle
    records = multi_level(records)
    plain = parse(kind, None, records)
    split = parse(kind, None, records, PipelineOptions(partition=True))
    assert plain.table.canonical() == split.table.canonical()


def test_partitioned_workers_match_serial(small_oracle):
    records, _ = small_oracle
    recs = [LogRecord(r.line_id, r.content, {"Level": "INFO", "Component": "c%d" % (r.line_id % 3)})
            for r in records]
    serial = parse("Drain", None, recs, PipelineOptions(partition=True))
    pooled = parse("Drain", None, recs, PipelineOptions(partition=True, workers=2))
    assert serial.table.canonical() == pooled.table.canonical()
    assert serial.assignments == pooled.assignments


@pytest.mark.parametrize("kind", list(ParserKind))
def test_parse_is_deterministic(kind, small_oracle):
    records, _ = small_oracle
    a, b = parse(kind, None, records), parse(kind, None, records)
    assert a.assignments == b.assignments and a.outliers == b.outliers
    assert list(a.table) == list(b.table)


@pytest.mark.parametrize("kind", list(ParserKind))
def test_ids_dense_in_first_seen_order(kind, small_oracle):
    records, _ = small_oracle
    out = parse(kind, None, records)
    seen = []
    for a in sorted(out.assignments, key=lambda a: a.line_id):
        if a.template_id not in seen:
            seen.append(a.template_id)
    assert seen == list(range(1, len(out.table) + 1))


def test_parse_rejects_foreign_config():
    with pytest.raises(ValueError):
        parse("Drain", make_config("Spell"), [LogRecord(1, "x")])


# --- properties -----------------------------------------------------------

corpus_seeds = st.integers(min_value=0, max_value=10_000)


def random_corpus(seed, n=300):
    rng = random.Random(seed)
    vocab = ["open", "close", "read", "write", "disk", "user", "err", "ok"]
    lines = []
    for i in range(n):
        k = rng.randint(1, 6)
        toks = [rng.choice(vocab) if rng.random() < 0.7 else str(rng.randint(0, 999))
                for _ in range(k)]
        lines.append(LogRecord(i + 1, " ".join(toks)))
    return lines


@settings(max_examples=15, deadline=None)
@given(corpus_seeds)
def test_full_coverage_and_soundness(seed):
    records = random_corpus(seed)
    for kind in FULL:
        out = parse(kind, None, records)
        assert out.coverage and not out.outliers
        assert {a.line_id for a in out.assignments} == {r.line_id for r in records}
        by_id = {r.line_id: r for r in records}
        for a in out.assignments:
            tpl = out.table.template(a.template_id)
            toks = masked(by_id[a.line_id].content)
            if kind in (ParserKind.SPELL,):
                continue  # LCS templates may collapse gaps of different widths
            assert match_template(tpl, toks) is not None, (kind, tpl, toks)


@settings(max_examples=15, deadline=None)
@given(corpus_seeds)
def test_slct_coverage_flag(seed):
    records = random_corpus(seed, n=60)
    out = parse("SLCT", make_config("SLCT", {"support": 5}), records)
    assert out.coverage == (not out.outliers)
    assert len(out.assignments) + len(out.outliers) == len(records)


@settings(max_examples=10, deadline=None)
@given(corpus_seeds)
def test_slct_outliers_grow_with_support(seed):
    records = random_corpus(seed, n=80)
    previous = set()
    for s in (1, 2, 4, 8, 16, 32):
        outliers = set(parse("SLCT", make_config("SLCT", {"support": s}), records).outliers)
        assert previous <= outliers
        previous = outliers


@settings(max_examples=10, deadline=None)
@given(corpus_seeds, st.randoms(use_true_random=False))
def test_offline_grouping_permutation_invariant(seed, rnd):
    records = random_corpus(seed, n=120)
    shuffled = list(records)
    rnd.shuffle(shuffled)
    for kind in ("IPLoM", "SLCT"):
        a = parse(kind, None, records).groups()
        b = parse(kind, None, shuffled).groups()
        assert grouping_accuracy(a, b) == 1.0


@settings(max_examples=10, deadline=None)
@given(corpus_seeds)
def test_dedup_preserves_table(seed):
    records = random_corpus(seed, n=200)
    records += [LogRecord(len(records) + i + 1, r.content) for i, r in enumerate(records[:100])]
    for kind in ("Drain", "AEL", "IPLoM", "SLCT"):
        plain = parse(kind, None, records)
        deduped = parse(kind, None, records, PipelineOptions(dedup=True))
        assert plain.table.canonical() == deduped.table.canonical(), kind
        assert plain.groups() == deduped.groups()


def test_oracle_corpus_perfect_at_defaults():
    records, truth = oracle_corpus(templates=6, n=600, seed=11)
    for kind in ("Drain", "IPLoM", "AEL"):
        out = parse(kind, None, records)
        assert grouping_accuracy(out.groups(), truth.groups()) == 1.0
