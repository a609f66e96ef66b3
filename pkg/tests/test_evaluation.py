import random

import pytest

from repositories.groundtruth_repository import GroundTruthRepository
from repositories.keyword_repository import KeywordRepository
from schemas.keyword import RankedKeywords
from services.evaluation_service import EvaluationService, evaluate, format_table
from utils.errors import GroundTruthError


def test_hit_at_second_position():
    report = evaluate({"s": ["win32", "flystudio", "worm"]}, {"s": "flystudio"})
    assert report.top(1) == 0.0
    assert all(report.top(n) == 1.0 for n in range(2, 11))


def test_accuracy_is_fraction_of_evaluated():
    outputs = {"a": ["x", "y", "delf"], "b": ["x", "y", "z"]}
    report = evaluate(outputs, {"a": "delf", "b": "nuj"})
    assert report.top(3) == 0.5
    assert report.hits[3] == 1
    assert report.evaluated == 2


def test_match_is_case_insensitive():
    assert evaluate({"s": ["flystudio"]}, {"s": "FlyStudio"}).top(1) == 1.0


def test_missing_outputs_are_unevaluable():
    report = evaluate({"a": ["delf"]}, {"a": "Delf", "b": "Nuj"})
    assert report.evaluated == 1
    assert report.unevaluable == 1
    assert report.unevaluable_ids == ["b"]
    assert report.top(1) == 1.0


def test_accuracy_monotone_in_n():
    rng = random.Random(0)
    vocab = ["delf", "nuj", "win32", "worm", "gen", "agent", "flystudio", "plankton"]
    for _ in range(30):
        outputs = {f"s{k}": rng.sample(vocab, rng.randint(0, 6)) for k in range(15)}
        truth = {f"s{k}": rng.choice(vocab) for k in range(15)}
        report = evaluate(outputs, truth)
        values = [report.top(n) for n in range(1, 11)]
        assert values == sorted(values)


def test_evaluate_accepts_ranked_keywords():
    ranked = [RankedKeywords(sample_id="s", entries=[("nuj", 3), ("worm", 2)], top_n=5)]
    assert evaluate(ranked, {"s": "Worm"}).top(2) == 1.0


def test_format_table_has_all_columns():
    table = format_table(evaluate({"s": ["a"]}, {"s": "a"}))
    assert "Top-1" in table and "Top-10" in table
    assert "evaluated: 1" in table


def _write_gt(tmp_path, text):
    path = tmp_path / "gt.csv"
    path.write_bytes(text if isinstance(text, bytes) else text.encode("utf-8"))
    return GroundTruthRepository(str(path))


def test_groundtruth_load(tmp_path):
    repo = _write_gt(tmp_path, "sample_id,family\nabc,Flystudio\n\ndef,Delf\n")
    assert repo.load() == {"abc": "Flystudio", "def": "Delf"}


@pytest.mark.parametrize("text, line_no", [
    ("id,family\nabc,Delf\n", 1),
    ("sample_id,family\nabc,Delf\nbroken\n", 3),
    ("sample_id,family\nabc,Delf,extra\n", 2),
    ("sample_id,family\n,Delf\n", 2),
    ("sample_id,family\nabc,Delf\nabc,Nuj\n", 3),
    (b"sample_id,family\nabc,\xffDelf\n", 2),
    ("", 1),
])
def test_groundtruth_errors_name_the_line(tmp_path, text, line_no):
    with pytest.raises(GroundTruthError) as exc:
        _write_gt(tmp_path, text).load()
    assert exc.value.line_no == line_no
    assert f"line {line_no}" in str(exc.value)


def test_groundtruth_missing_file(tmp_path):
    with pytest.raises(GroundTruthError):
        GroundTruthRepository(str(tmp_path / "nope.csv")).load()


def test_groundtruth_save_round_trip(tmp_path):
    repo = GroundTruthRepository(str(tmp_path / "gt.csv"))
    repo.save([("a", "Delf"), ("b", "Nuj")])
    assert repo.load() == {"a": "Delf", "b": "Nuj"}


def test_evaluation_service_reads_files(tmp_path):
    KeywordRepository(str(tmp_path / "out.tsv")).save([
        RankedKeywords(sample_id="a", entries=[("win32", 6), ("flystudio", 10)], top_n=5),
        RankedKeywords(sample_id="b", entries=[("delf", 9)], top_n=5),
    ])
    GroundTruthRepository(str(tmp_path / "gt.csv")).save([("a", "Flystudio"), ("b", "Nuj"), ("c", "Delf")])
    report = EvaluationService(str(tmp_path / "out.tsv"), str(tmp_path / "gt.csv")).run()
    assert report.top(1) == 0.0
    assert report.top(2) == 0.5
    assert report.unevaluable == 1
