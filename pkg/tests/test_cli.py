import csv
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from devsumm.cli import main
from devsumm.corpus import RELEVANT_TYPES, load_corpus
from devsumm.features import extract_features
from devsumm.similarity import fit_bounds

DATA = Path(__file__).parent / "data"
CORPUS = str(DATA / "corpus.jsonl")
GOLD = str(DATA / "gold.jsonl")
WEEK = "2020-01-06..2020-01-13"


def summarize(*extra):
    return main(["summarize", "--corpus", CORPUS, "--gold", GOLD, "--window", WEEK, "--project", "project-01",
                 "--budget-evals", "300", "--seed", "4", *extra])


class TestValidate:
    def test_table1(self, capsys):
        assert main(["validate", "--corpus", str(DATA / "table1_corpus.jsonl")]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 1 + 15 + 1
        assert lines[1].startswith("Issue titles (IT)")
        assert lines[-1].split()[1] == "15"

    def test_bad_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.jsonl"
        bad.write_text((DATA / "table1_corpus.jsonl").read_text().replace('"type": "MD"', '"type": "XX"'))
        assert main(["validate", "--corpus", str(bad)]) == 2
        err = capsys.readouterr().err
        assert "bad.jsonl:12:" in err and "XX" in err

    def test_missing_file(self, tmp_path):
        assert main(["validate", "--corpus", str(tmp_path / "none.jsonl")]) == 2


class TestSummarize:
    def test_five_lines(self, tmp_path, capsys):
        assert summarize("--algo", "rls_restricted", "--out", str(tmp_path)) == 0
        out = capsys.readouterr().out.splitlines()
        assert len(out) == 5
        rec = json.loads((tmp_path / "summary.jsonl").read_text())
        assert 0 <= rec["score"] <= 1 and rec["valid"] and len(rec["sids"]) == 5
        assert (tmp_path / "summary.txt").read_text().splitlines() == out

    def test_deterministic(self, tmp_path):
        for d in ("a", "b"):
            assert summarize("--algo", "random_search", "--mode", "feature", "--out", str(tmp_path / d)) == 0
        assert (tmp_path / "a" / "summary.jsonl").read_bytes() == (tmp_path / "b" / "summary.jsonl").read_bytes()

    def test_subset_selects_relevant_only(self, tmp_path):
        corpus = load_corpus(CORPUS)
        relevant = {t.value for t in RELEVANT_TYPES}
        for algo in ("greedy", "rls_unrestricted", "random_search"):
            assert summarize("--algo", algo, "--scenario", "subset", "--out", str(tmp_path / algo)) == 0
            rec = json.loads((tmp_path / algo / "summary.jsonl").read_text())
            assert rec["sids"]
            assert {corpus[a].atype.value for a, _ in rec["sids"]} <= relevant

    def test_types_scenario(self, tmp_path):
        assert summarize("--scenario", "types", "--types", "CM,IT", "--out", str(tmp_path)) == 0
        rec = json.loads((tmp_path / "summary.jsonl").read_text())
        assert {a.split("/")[-1].split("-")[0] for a, _ in rec["sids"]} <= {"CM", "IT"}

    def test_empty_pool(self, tmp_path):
        empty = tmp_path / "c.jsonl"
        empty.write_text("")
        code = main(["summarize", "--corpus", str(empty), "--gold", GOLD, "--window", WEEK, "--budget-evals", "5"])
        assert code == 3

    def test_no_gold_for_window(self):
        assert main(["summarize", "--corpus", CORPUS, "--gold", GOLD, "--window", "2021-01-01..2021-01-08"]) == 2

    def test_usage_errors(self):
        for argv in (["summarize"], ["bogus"], ["summarize", "--corpus", CORPUS, "--gold", GOLD, "--window", WEEK,
                                                "--budget-secs", "1", "--budget-evals", "3"]):
            with pytest.raises(SystemExit) as e:
                main(argv)
            assert e.value.code == 1
        with pytest.raises(SystemExit) as e:
            summarize("--max-len", "0")
        assert e.value.code == 1

    def test_bad_window(self):
        assert main(["summarize", "--corpus", CORPUS, "--gold", GOLD, "--window", "yesterday"]) == 2


class TestBenchmarkAndAnalyze:
    @pytest.fixture(scope="class")
    @classmethod
    def runs_dir(cls, tmp_path_factory):
        out = tmp_path_factory.mktemp("bench")
        code = main(["benchmark", "--corpus", CORPUS, "--gold", GOLD, "--scenario", "all", "--scenario", "subset",
                     "--algo", "greedy", "random_search", "rls_restricted", "--budget-evals", "100", "--max-len", "3",
                     "--out", str(out)])
        assert code == 0
        return out

    def test_outputs(self, runs_dir):
        for name in ("runs.jsonl", "distributions.csv", "contributions.csv", "mwu.csv"):
            assert (runs_dir / name).stat().st_size > 0
        lines = (runs_dir / "runs.jsonl").read_text().splitlines()
        assert len(lines) == 8 * 2 * 2 * 3

    def test_contributions(self, runs_dir, capsys):
        assert main(["analyze", "contributions", "--runs", str(runs_dir / "runs.jsonl"), "--corpus", CORPUS]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[-1].startswith("relevant:")

    def test_compare(self, runs_dir, capsys):
        assert main(["analyze", "compare", "--runs", str(runs_dir / "runs.jsonl"), "--a", "greedy",
                     "--b", "random_search", "--mode", "word", "--scenario", "all"]) == 0
        assert "U=" in capsys.readouterr().out

    def test_mwu(self, runs_dir, tmp_path):
        assert main(["analyze", "mwu", "--runs", str(runs_dir / "runs.jsonl"), "--out", str(tmp_path / "m.csv")]) == 0
        rows = list(csv.reader(open(tmp_path / "m.csv")))
        assert rows[0] == ["mode", "scenario", "algoA", "algoB", "U", "p"]
        assert len(rows) == 1 + 2 * 2 * 3


class TestFeaturesDump:
    def test_header_and_bounds(self, tmp_path):
        out = tmp_path / "f.csv"
        assert main(["features", "dump", "--corpus", str(DATA / "table1_corpus.jsonl"), "--out", str(out)]) == 0
        rows = list(csv.reader(open(out)))
        assert rows[0] == [f"F{i}" for i in range(1, 27)]
        matrix = np.array([[float(v) for v in r] for r in rows[1:]])
        corpus = load_corpus(DATA / "table1_corpus.jsonl")
        sentences = [s for a in corpus for s in corpus.sentences(a.id)]
        assert len(matrix) == len(sentences)
        b = fit_bounds([extract_features(s.raw) for s in sentences])
        assert np.array_equal(b.lo, matrix.min(axis=0)) and np.array_equal(b.hi, matrix.max(axis=0))

    def test_with_ids_and_window(self, capsys):
        assert main(["features", "dump", "--corpus", CORPUS, "--window", WEEK, "--project", "project-02",
                     "--scenario", "single:CM", "--with-ids"]) == 0
        rows = list(csv.reader(capsys.readouterr().out.splitlines()))
        assert rows[0][:3] == ["artefact", "index", "F1"]
        assert rows[1:] and all(r[0].startswith("project-02/w01/CM-") for r in rows[1:])


def test_fixtures_reproduce_committed_data(tmp_path):
    assert main(["fixtures", "--out", str(tmp_path), "--seed", "3"]) == 0
    assert (tmp_path / "corpus.jsonl").read_bytes() == (DATA / "corpus.jsonl").read_bytes()
    assert (tmp_path / "gold.jsonl").read_bytes() == (DATA / "gold.jsonl").read_bytes()


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "devsumm.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("devsumm ")
