import json

import pytest
import yaml

from rewrite_eval.corpus import Corpus, Task
from rewrite_eval.errors import ConfigError
from rewrite_eval.pipeline import load_config, run_config
from rewrite_eval.report import MetricReport, evaluate_gec, evaluate_simp, mean_readability, to_json, write_csv


def test_to_json_is_stable_and_rounded():
    report = MetricReport(Task.GRAMMAR, {"b": 1 / 3, "a": -1e-9, "c": [2 / 3, None]}, {"z": 1})
    text = to_json(report)
    assert text.endswith("\n")
    data = json.loads(text)
    assert list(data["metrics"]) == ["a", "b", "c"]
    assert data["metrics"] == {"a": 0.0, "b": 0.333333, "c": [0.666667, None]}
    assert to_json(report) == text


def test_csv_flattens_lists(tmp_path):
    report = MetricReport(Task.SIMPLIFICATION, {"sari_add_n": [1.0, 2.0], "sari": 3.0})
    path = tmp_path / "m.csv"
    write_csv(report, path)
    assert path.read_text().splitlines() == [
        "stage,metric,value", "final,sari,3.0", "final,sari_add_n_1,1.0", "final,sari_add_n_2,2.0",
    ]


def test_mean_readability_skips_wordless_texts():
    fre, fkgl, skipped = mean_readability(["Cat", "...", ""])
    assert fre == pytest.approx(121.22)
    assert skipped == 2
    assert mean_readability(["?"]) == (None, None, 1)


def test_simp_report_flags_lengthening():
    corpus = Corpus.from_lists(["a b"], [["a"]], ["a b c d"], Task.SIMPLIFICATION)
    metrics, rows = evaluate_simp(corpus, per_sentence=True)
    assert metrics["compression"] == 2.0
    assert metrics["lengthening"] is True
    assert rows[0]["len_pred"] == 4


def test_gec_report_with_other_beta():
    corpus = Corpus.from_lists(["a b"], [["a c"]], ["a c"])
    metrics, _ = evaluate_gec(corpus, beta=1.0)
    assert metrics["m2_f1"] == 1.0
    assert metrics["m2_beta"] == 1.0


def test_pipeline_with_m2_gold(tmp_path):
    (tmp_path / "gold.m2").write_text(
        "S He go home .\nA 1 2|||R:VERB|||goes|||REQUIRED|||-NONE-|||0\n\nS Fine .\n", encoding="utf-8"
    )
    (tmp_path / "pred.txt").write_text("He goes home .\nFine .\n", encoding="utf-8")
    cfg = {
        "task": "grammar",
        "data": {"gold_m2": "gold.m2"},
        "backends": {"f": {"type": "file", "path": "pred.txt"}},
        "stages": [{"backend": "f"}],
        "output": {},
    }
    (tmp_path / "c.yaml").write_text(yaml.safe_dump(cfg), encoding="utf-8")
    report = run_config(load_config(tmp_path / "c.yaml"))
    assert report.metrics["m2_f05"] == 1.0
    # references rebuilt from the gold edits, so GLEU is perfect too
    assert report.metrics["gleu"] == 1.0


def test_load_config_rejects_bad_yaml(tmp_path):
    (tmp_path / "c.yaml").write_text("task: [unclosed", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "c.yaml")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.yaml")
