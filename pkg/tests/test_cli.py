import json

import pytest

from symcheck.cli import main
from symcheck.operators import catalog, grad_power, save_op


@pytest.fixture
def ops_dir(tmp_path):
    d = tmp_path / "ops"
    d.mkdir()
    save_op(catalog("gradient", 2), d / "gradient2.json")
    save_op(catalog("sym_gradient", 2), d / "symgrad2.json")
    save_op(catalog("divergence", 2), d / "div2.json")
    save_op(grad_power(1, 2, 2), d / "fullgrad2.json")
    save_op(catalog("bilaplacian", 2), d / "bilap2.json")
    save_op(catalog("d2_laplacian", 2), d / "d2lap2.json")
    save_op(catalog("cauchy_riemann", 2), d / "cr2.json")
    return d


def read(path):
    with open(path) as fh:
        return json.load(fh)


class TestAnalyze:
    def test_gradient(self, ops_dir, tmp_path, capsys):
        out = tmp_path / "r.json"
        code = main(["analyze", "--op", str(ops_dir / "gradient2.json"),
                     "--out", str(out)])
        assert code == 0
        rep = read(out)
        assert rep["schema"] == "symcheck-report/1"
        res = rep["results"]
        assert res["elliptic_C"] is True
        assert res["constant_rank_C"] is True
        assert res["cancelling"] is True
        assert res["r"] == 0

    def test_cauchy_riemann(self, ops_dir, tmp_path):
        out = tmp_path / "r.json"
        assert main(["analyze", "--op", str(ops_dir / "cr2.json"),
                     "--out", str(out)]) == 0
        res = read(out)["results"]
        assert res["elliptic_C"] is False
        assert res["elliptic_R"] == "UNCERTIFIED_YES"
        assert res["constant_rank_C"] is False

    def test_divergence(self, ops_dir, tmp_path):
        out = tmp_path / "r.json"
        assert main(["analyze", "--op", str(ops_dir / "div2.json"),
                     "--out", str(out)]) == 0
        res = read(out)["results"]
        assert res["cancelling"] is False
        assert res["dim_W"] == 1

    def test_missing_file(self, tmp_path, capsys):
        assert main(["analyze", "--op", str(tmp_path / "nope.json")]) == 4

    def test_malformed_json(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        assert main(["analyze", "--op", str(bad)]) == 4


class TestCompare:
    def test_holds_with_certificate(self, ops_dir, tmp_path):
        out = tmp_path / "r.json"
        code = main(["compare", "-a", str(ops_dir / "symgrad2.json"),
                     "-A", str(ops_dir / "fullgrad2.json"),
                     "--mode", "korn", "--out", str(out)])
        assert code == 0
        res = read(out)["results"]
        assert res["inclusion_holds"] is True
        assert res["factorization"]["s"] == 1
        assert res["quotient"]["degree_bound"] == 3

    def test_fails_with_witness(self, ops_dir, tmp_path):
        out = tmp_path / "r.json"
        code = main(["compare", "-a", str(ops_dir / "div2.json"),
                     "-A", str(ops_dir / "fullgrad2.json"), "--out", str(out)])
        assert code == 0
        res = read(out)["results"]
        assert res["inclusion_holds"] is False
        assert "witness" in res

    def test_hypotheses_not_met(self, ops_dir, tmp_path):
        out = tmp_path / "r.json"
        code = main(["compare", "-a", str(ops_dir / "bilap2.json"),
                     "-A", str(ops_dir / "d2lap2.json"), "--out", str(out)])
        assert code == 2
        assert read(out)["status"] == "HYPOTHESES_NOT_MET"


class TestExperiment:
    def test_korn2(self, ops_dir, tmp_path):
        out = tmp_path / "r.json"
        code = main(["experiment", "korn2",
                     "-a", str(ops_dir / "symgrad2.json"),
                     "-A", str(ops_dir / "fullgrad2.json"),
                     "--trials", "300", "--out", str(out)])
        assert code == 0
        assert abs(read(out)["results"]["constant_p2"] - 2 ** 0.5) < 1e-6

    def test_korn2_inclusion_failure(self, ops_dir, tmp_path):
        out = tmp_path / "r.json"
        code = main(["experiment", "korn2",
                     "-a", str(ops_dir / "div2.json"),
                     "-A", str(ops_dir / "fullgrad2.json"),
                     "--trials", "50", "--out", str(out)])
        assert code == 2
        assert read(out)["status"] == "INCLUSION_FAILS"

    def test_blowup(self, ops_dir, tmp_path):
        out = tmp_path / "r.json"
        code = main(["experiment", "blowup",
                     "-a", str(ops_dir / "div2.json"),
                     "-A", str(ops_dir / "fullgrad2.json"),
                     "--grid", "128", "--out", str(out)])
        assert code == 0
        summary = read(out)["results"]["experiment"]["summary"]
        assert summary["rhs_status"] == "INFINITE_RATIO"
        assert abs(summary["loglog_slope"] - 1.0) < 0.05

    def test_bb(self, tmp_path):
        out = tmp_path / "r.json"
        code = main(["experiment", "bb", "--k", "1", "--N", "2",
                     "--trials", "50", "--grid", "32", "--out", str(out)])
        assert code == 0
        assert read(out)["results"]["experiment"]["summary"]["max_ratio"] > 0

    def test_missing_pair_arguments(self, capsys):
        with pytest.raises(SystemExit):
            main(["experiment", "korn2"])


class TestCatalogCommand:
    def test_writes_an_operator_file(self, tmp_path):
        out = tmp_path / "op.json"
        assert main(["catalog", "sym_gradient", "--N", "2",
                     "--out", str(out)]) == 0
        assert main(["analyze", "--op", str(out),
                     "--out", str(tmp_path / "r.json")]) == 0

    def test_unknown_name(self):
        assert main(["catalog", "nonsense", "--N", "2"]) == 4


class TestDeterminism:
    def test_analyze_reports_are_byte_identical(self, ops_dir, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            main(["analyze", "--op", str(ops_dir / "gradient2.json"),
                  "--seed", "3", "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()

    def test_experiment_reports_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for out in (a, b):
            main(["experiment", "bb", "--k", "1", "--N", "2", "--trials", "40",
                  "--grid", "32", "--seed", "11", "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()
