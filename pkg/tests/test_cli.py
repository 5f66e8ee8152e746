"""Tests for the cochain file format, the check registry, and the CLI.

The JSON report list is the machine interface, so the tests pin its shape:
sorted keys, wall_time_ms fixed to 0, a counterexample field only on
failing cells, and byte-identical output for identical (check, n, seed,
trials) invocations.  Exit codes: 0 all-pass, 1 any failure, 2 for usage
or input errors.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from kostantcheck import cli
from kostantcheck.checks import CHECK_NAMES, CHECKS, run_check
from kostantcheck.cochain_io import (
    CochainFormatError,
    cochain_to_doc,
    doc_to_cochain,
    format_rational,
    load_cochain,
    parse_rational,
    save_cochain,
)
from kostantcheck.feff import Report, build_maps, transfer
from kostantcheck.gla import graded_sl
from kostantcheck.kostant import Cochain, costar

F = Fraction


def sample_cochain(blocks=(1, 1, 2), deg=2, seed=0, terms=4) -> Cochain:
    alg = graded_sl(blocks)
    rng = random.Random(seed)
    c = Cochain(alg, deg)
    for _ in range(terms):
        T = tuple(sorted(rng.sample(range(alg.dim_neg), deg)))
        c.add_term(T, alg.basis_mat(rng.randrange(alg.dim)),
                   F(rng.randint(1, 5), rng.randint(1, 3)))
    return c


class TestRationalStrings:
    def test_format(self) -> None:
        assert format_rational(F(1, 2)) == "1/2"
        assert format_rational(F(-3)) == "-3"
        assert format_rational(F(0)) == "0"

    def test_parse(self) -> None:
        assert parse_rational("7/3", "x") == F(7, 3)
        assert parse_rational("-4", "x") == F(-4)
        assert parse_rational(4, "x") == F(4)

    @pytest.mark.parametrize("bad", ["1.5", "3/0", "1/-2", "", "a", 2.5, None])
    def test_rejects_non_rationals(self, bad) -> None:
        with pytest.raises(CochainFormatError, match="x:"):
            parse_rational(bad, "x")


class TestCochainDocuments:
    def test_round_trip_through_doc(self) -> None:
        c = sample_cochain()
        assert doc_to_cochain(cochain_to_doc(c)) == c

    def test_round_trip_through_file(self, tmp_path) -> None:
        c = sample_cochain(blocks=(2, 3), deg=2, seed=1)
        path = str(tmp_path / "c.json")
        save_cochain(c, path)
        assert load_cochain(path) == c

    def test_doc_is_deterministic(self) -> None:
        c = sample_cochain(seed=2)
        assert cochain_to_doc(c) == cochain_to_doc(c)
        doc = cochain_to_doc(c)
        indices = [tuple(v["indices"]) for v in doc["values"]]
        assert indices == sorted(indices)

    @pytest.mark.parametrize("mutate,message", [
        (lambda d: d["algebra"].__setitem__("type", "gl"), "only \"sl\""),
        (lambda d: d["algebra"].__setitem__("m", 5), "block sum"),
        (lambda d: d["grading"].__setitem__("blocks", [4]), "at least two"),
        (lambda d: d["grading"].__setitem__("blocks", [0, 4]), "positive integers"),
        (lambda d: d.__setitem__("degree", -1), "non-negative"),
        (lambda d: d.__setitem__("degree", "2"), "non-negative"),
        (lambda d: d.__setitem__("values", {}), "expected a list"),
        (lambda d: d.pop("degree"), "missing key 'degree'"),
        (lambda d: d["values"][0].__setitem__("indices", [0]), "expected 2 integers"),
        (lambda d: d["values"][0].__setitem__("indices", [0, 99]), "basis range"),
        (lambda d: d["values"][0].__setitem__("indices", [3, 1]), "strictly increasing"),
        (lambda d: d["values"][0].__setitem__("indices", [1, 1]), "strictly increasing"),
        (lambda d: d["values"][1].__setitem__(
            "indices", list(d["values"][0]["indices"])), "duplicate index tuple"),
        (lambda d: d["values"][0].__setitem__("matrix", [["0"]]), "array"),
        (lambda d: d["values"][0]["matrix"][0].__setitem__(0, "1.5"), "rational"),
        (lambda d: d["values"][0]["matrix"][0].__setitem__(0, "7"), "not traceless"),
    ])
    def test_validation_errors(self, mutate, message) -> None:
        doc = cochain_to_doc(sample_cochain(seed=3, terms=6))
        assert len(doc["values"]) >= 2
        mutate(doc)
        with pytest.raises(CochainFormatError, match=message):
            doc_to_cochain(doc)

    def test_malformed_json_error_names_the_location(self, tmp_path) -> None:
        path = tmp_path / "broken.json"
        path.write_text("{nope", encoding="utf-8")
        with pytest.raises(CochainFormatError) as err:
            load_cochain(str(path))
        assert str(path) in str(err.value)
        assert ":1:" in str(err.value)


class TestCheckRegistry:
    def test_registry_names_and_windows(self) -> None:
        assert len(CHECK_NAMES) == 13
        assert set(CHECKS) == {
            "jacobi", "hodge", "codiff-lift", "bianchi-path",
            "path-normality", "beta-secondsum", "ag-costar", "norm-modules",
            "normalize-step", "memberships", "torsion-transfer", "rho-ricci",
            "harmonic-types",
        }
        for name, (min_n, _) in CHECKS.items():
            assert min_n in (2, 3), name

    @pytest.mark.parametrize("name", ["ag-costar", "norm-modules",
                                      "normalize-step", "rho-ricci"])
    def test_below_window_returns_none(self, name: str) -> None:
        assert run_check(name, 2, 0, 1) is None

    def test_unknown_name_raises(self) -> None:
        with pytest.raises(ValueError):
            run_check("curvature", 2, 0, 1)

    def test_cells_are_deterministic(self) -> None:
        a = run_check("rho-ricci", 3, 5, 2)
        b = run_check("rho-ricci", 3, 5, 2)
        assert a == b
        assert a is not None and a.ok

    def test_sampled_cell_passes(self) -> None:
        rep = run_check("ag-costar", 3, 1, 2)
        assert rep is not None and rep.ok and rep.cases > 0


class TestVerifyCommand:
    def run_json(self, capsys, *argv: str):
        rc = cli.main(["verify", "--format", "json", *argv])
        return rc, capsys.readouterr().out

    def test_json_runs_are_byte_identical(self, capsys) -> None:
        args = ("--check", "rho-ricci", "--n-min", "3", "--n-max", "3",
                "--seed", "5", "--trials", "2")
        rc1, out1 = self.run_json(capsys, *args)
        rc2, out2 = self.run_json(capsys, *args)
        assert rc1 == rc2 == 0
        assert out1 == out2
        rows = json.loads(out1)
        assert rows == [{"check": "rho-ricci", "n": 3, "status": "PASS",
                         "cases_run": rows[0]["cases_run"], "wall_time_ms": 0}]
        assert rows[0]["cases_run"] > 0

    def test_window_skips_produce_no_rows(self, capsys) -> None:
        rc, out = self.run_json(capsys, "--check", "norm-modules",
                                "--n-min", "2", "--n-max", "2")
        assert rc == 0
        assert json.loads(out) == []

    def test_text_format_table(self, capsys) -> None:
        rc = cli.main(["verify", "--check", "memberships",
                       "--n-min", "2", "--n-max", "2"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "CHECK" in out and "TIME_MS" in out
        assert "memberships" in out and "PASS" in out
        assert "1 report(s), all PASS" in out

    def test_bad_range_is_a_usage_error(self, capsys) -> None:
        rc = cli.main(["verify", "--n-min", "3", "--n-max", "2"])
        assert rc == 2
        assert "exceeds" in capsys.readouterr().err

    def test_unknown_check_is_rejected_by_the_parser(self) -> None:
        with pytest.raises(SystemExit) as err:
            cli.main(["verify", "--check", "curvature"])
        assert err.value.code == 2

    def test_failing_cell_sets_exit_code_and_counterexample(
            self, capsys, monkeypatch) -> None:
        stub = Report(name="jacobi", n=2, ok=False, cases=3,
                      failures=["stub mismatch"], details={})
        monkeypatch.setattr(cli, "run_check", lambda *a: stub)
        rc, out = self.run_json(capsys, "--check", "jacobi",
                                "--n-min", "2", "--n-max", "2")
        assert rc == 1
        rows = json.loads(out)
        assert rows[0]["status"] == "FAIL"
        assert rows[0]["counterexample"] == "stub mismatch"
        rc = cli.main(["verify", "--check", "jacobi",
                       "--n-min", "2", "--n-max", "2"])
        text = capsys.readouterr().out
        assert rc == 1
        assert "counterexample: stub mismatch" in text
        assert "1 FAIL" in text


class TestCostarCommand:
    def test_matches_the_library_operator(self, tmp_path, capsys) -> None:
        c = sample_cochain(blocks=(2, 3), deg=2, seed=4)
        src, dst = str(tmp_path / "in.json"), str(tmp_path / "out.json")
        save_cochain(c, src)
        assert cli.main(["costar", "--input", src, "--output", dst]) == 0
        assert load_cochain(dst) == costar(c)

    def test_degree_zero_is_rejected(self, tmp_path, capsys) -> None:
        src, dst = str(tmp_path / "in.json"), str(tmp_path / "out.json")
        save_cochain(Cochain(graded_sl((1, 1, 2)), 0), src)
        assert cli.main(["costar", "--input", src, "--output", dst]) == 2
        assert "degree >= 1" in capsys.readouterr().err

    def test_missing_input_is_an_input_error(self, tmp_path, capsys) -> None:
        rc = cli.main(["costar", "--input", str(tmp_path / "absent.json"),
                       "--output", str(tmp_path / "out.json")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err

    def test_malformed_input_is_an_input_error(self, tmp_path, capsys) -> None:
        src = tmp_path / "in.json"
        src.write_text('{"algebra": {"type": "gl"}}', encoding="utf-8")
        rc = cli.main(["costar", "--input", str(src),
                       "--output", str(tmp_path / "out.json")])
        assert rc == 2
        assert "error:" in capsys.readouterr().err


class TestTransferCommand:
    def test_matches_the_library_transfer(self, tmp_path) -> None:
        c = sample_cochain(blocks=(1, 1, 2), deg=2, seed=5)
        src, dst = str(tmp_path / "in.json"), str(tmp_path / "out.json")
        save_cochain(c, src)
        rc = cli.main(["transfer", "--input", src, "--source", "path",
                       "--output", dst])
        assert rc == 0
        out = load_cochain(dst)
        assert out == transfer(c, build_maps(2, "path"))
        kernel = build_maps(2, "path").gt.index_of_neg[(2, 1)]
        assert all(kernel not in T for T in out.data)

    def test_source_grading_mismatch(self, tmp_path, capsys) -> None:
        c = sample_cochain(blocks=(1, 1, 2), deg=2, seed=6)
        src = str(tmp_path / "in.json")
        save_cochain(c, src)
        rc = cli.main(["transfer", "--input", src, "--source", "ag",
                       "--output", str(tmp_path / "out.json")])
        assert rc == 2
        assert "needs the grading" in capsys.readouterr().err

    def test_wrong_degree_is_rejected(self, tmp_path, capsys) -> None:
        src = str(tmp_path / "in.json")
        save_cochain(sample_cochain(blocks=(1, 1, 2), deg=1, seed=7), src)
        rc = cli.main(["transfer", "--input", src, "--source", "path",
                       "--output", str(tmp_path / "out.json")])
        assert rc == 2
        assert "degree-2" in capsys.readouterr().err
