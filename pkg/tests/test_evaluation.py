import math

import pytest
from hypothesis import given, strategies as st

from conftest import oracle_corpus
from logbench.evaluation import (
    EvaluationResult,
    GroundTruth,
    VolumePoint,
    default_grid,
    evaluate,
    five_number,
    grouping_accuracy,
    load_truth,
    measure_efficiency,
    read_prefix,
    robustness_summary,
    sample_messages,
    sweep_parameters,
    write_truth,
)
from logbench.model import LogRecord
from logbench.parsers import ParserKind, make_config
from logbench.synthgen import SYNTH_FORMAT, write_corpus


def as_map(labels):
    return {i + 1: lab for i, lab in enumerate(labels)}


def brute_pa(pred, truth):
    """Definition, applied literally: compare membership sets line by line."""
    ok = 0
    for k in truth:
        p_members = {j for j in pred if pred[j] == pred[k]}
        t_members = {j for j in truth if truth[j] == truth[k]}
        ok += p_members == t_members
    return ok / len(truth)


def test_pa_worked_example():
    assert grouping_accuracy(as_map(["E1", "E4", "E5"]), as_map(["E1", "E2", "E2"])) == 1 / 3


def test_pa_relabeling_and_merge():
    truth = as_map(["A", "A", "B"])
    assert grouping_accuracy(as_map(["x", "x", "y"]), truth) == 1.0
    assert grouping_accuracy(as_map(["X"] * 4), as_map(["A", "A", "B", "B"])) == 0.0


def test_pa_errors():
    with pytest.raises(ValueError):
        grouping_accuracy({}, {})
    with pytest.raises(ValueError):
        grouping_accuracy({1: "a"}, {2: "a"})


labels = st.lists(st.sampled_from("abcd"), min_size=1, max_size=12)


@given(labels, st.data())
def test_pa_matches_definition(truth_labels, data):
    pred_labels = data.draw(st.lists(st.sampled_from("wxyz"), min_size=len(truth_labels),
                                     max_size=len(truth_labels)))
    pred, truth = as_map(pred_labels), as_map(truth_labels)
    pa = grouping_accuracy(pred, truth)
    assert pa == pytest.approx(brute_pa(pred, truth))
    assert 0.0 <= pa <= 1.0
    assert grouping_accuracy(truth, truth) == 1.0


def recs(n):
    return [LogRecord(i + 1, f"m{i}") for i in range(n)]


def test_sampling():
    records = recs(50)
    assert sample_messages(records, 50, seed=1) == records
    a, b = sample_messages(records, 10, seed=4), sample_messages(records, 10, seed=4)
    assert a == b and len(a) == 10
    assert [r.line_id for r in a] == sorted(r.line_id for r in a)


def test_sampling_too_many_warns(caplog):
    assert len(sample_messages(recs(3), 5, seed=0)) == 3
    assert "only 3 available" in caplog.text


def test_truth_roundtrip(tmp_path):
    truth = GroundTruth({1: "a <*>", 2: "b", 3: "a <*>"})
    write_truth(truth, tmp_path / "t.csv")
    assert load_truth(tmp_path / "t.csv") == truth
    assert truth.template_count == 2
    (tmp_path / "bad.csv").write_text("LineId,Other\n1,x\n")
    with pytest.raises(ValueError):
        load_truth(tmp_path / "bad.csv")


def test_result_validation():
    with pytest.raises(ValueError):
        EvaluationResult("Drain", "d", 1.5, 0.0, 1)
    with pytest.raises(ValueError):
        EvaluationResult("Drain", "d", 0.5, -1.0, 1)
    with pytest.raises(ValueError):
        VolumePoint(0)


def test_default_grids_are_bounded():
    for kind in ParserKind:
        grid = default_grid(kind)
        assert 10 <= len(grid) <= 16
        for point in grid:
            make_config(kind, point)


def test_sweep_finds_perfect_config():
    records, truth = oracle_corpus(templates=5, n=400, seed=2)
    single = sweep_parameters("Drain", [{"st": 0.4}], records, truth)
    assert single.config.st == 0.4
    best = sweep_parameters("Drain", [{"st": 0.99}, {"st": 0.4}], records, truth)
    assert best.pa == 1.0 and best.config.st == 0.4
    with pytest.raises(ValueError):
        sweep_parameters("Drain", [], records, truth)


def test_sweep_tie_prefers_fewer_templates():
    records, truth = oracle_corpus(templates=5, n=400, seed=2)
    grid = [{"st": st} for st in (0.2, 0.4, 0.6, 0.8, 0.95)]
    results = [evaluate("Drain", make_config("Drain", g), records, truth) for g in grid]
    best = sweep_parameters("Drain", grid, records, truth)
    ranked = sorted(results, key=lambda r: (-r.pa, r.templates))
    assert (best.pa, best.templates) == (ranked[0].pa, ranked[0].templates)


def test_five_number_summary():
    s = five_number([0.7])
    assert s.minimum == s.q25 == s.median == s.q75 == s.maximum == 0.7
    s = five_number([0.0, 1.0])
    assert (s.minimum, s.median, s.maximum) == (0.0, 0.5, 1.0)
    assert (s.q25, s.q75) == (0.25, 0.75)
    with pytest.raises(ValueError):
        five_number([])


def test_robustness_ordering():
    results = [EvaluationResult("A", "d1", 0.9, 0, 1), EvaluationResult("B", "d1", 0.3, 0, 1),
               EvaluationResult("A", "d2", 0.9, 0, 1), EvaluationResult("B", "d2", 0.3, 0, 1)]
    summary = robustness_summary(results)
    assert list(summary) == ["B", "A"]
    assert math.isclose(summary["A"].mean, 0.9)


@pytest.fixture(scope="module")
def corpus_file(tmp_path_factory):
    records, truth = oracle_corpus(templates=5, n=3000, seed=9)
    path = tmp_path_factory.mktemp("eff") / "c.log"
    write_corpus(records, path)
    return path, truth


def test_read_prefix_whole_lines(corpus_file):
    path, _ = corpus_file
    lines = read_prefix(path, 1000)
    assert sum(len(l) + 1 for l in lines) <= 1000
    assert read_prefix(path, 10 ** 9) == path.read_text().splitlines()


def test_efficiency_points(corpus_file):
    path, truth = corpus_file
    cfg = make_config("Drain")
    (point,) = measure_efficiency("Drain", cfg, path, [20_000], 60, SYNTH_FORMAT, truth)
    assert point.messages > 0 and not point.timed_out and point.pa == 1.0
    points = measure_efficiency("Drain", cfg, path, [10_000, 20_000], 0, SYNTH_FORMAT)
    assert all(p.timed_out for p in points)
    with pytest.raises(ValueError):
        measure_efficiency("Drain", cfg, path, [20_000, 10_000], 60)


def test_efficiency_time_nondecreasing(corpus_file):
    path, _ = corpus_file
    points = measure_efficiency("Drain", make_config("Drain"), path, [2_000, 200_000], 60,
                                SYNTH_FORMAT)
    assert points[0].messages < points[1].messages
    assert points[0].wall_time <= points[1].wall_time
