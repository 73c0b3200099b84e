"""End-to-end checks of the command line front end.

Each command is driven through ``cli.main`` in-process; one test runs
the installed console script for real.  Exit codes under test: 0 ok,
1 usage or failed check, 2 limits, 3 parse, 4 bad input, 5 realization.
"""

import json
import subprocess
import sys

import pytest

from satsys import cli
from satsys.covers import cover_from_json
from satsys.grid import GridShape
from satsys.transfer import from_json, generate, iter_saturated_systems


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_claw(path):
    claw = generate(GridShape(1, 1), [((0, 0), (1, 1))])
    path.write_text(claw.to_json())
    return path


class TestCount:
    def test_single_value(self, capsys):
        code, out, err = run(capsys, "count", "1", "1")
        assert code == 0 and out == "7\n"

    def test_base_row_value(self, capsys):
        code, out, _ = run(capsys, "count", "3", "0")
        assert code == 0 and out == "8\n"

    def test_method_choice(self, capsys):
        for method in ("recurrence", "closed", "egf", "codes", "bruteforce"):
            code, out, _ = run(capsys, "count", "2", "1", "--method", method)
            assert code == 0 and out == "23\n"

    def test_all_methods_agree(self, capsys):
        code, out, err = run(capsys, "count", "2", "2", "--all-methods")
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 5
        assert {line.split()[1] for line in lines} == {"115"}

    def test_all_methods_prunes_infeasible(self, capsys):
        code, out, _ = run(capsys, "count", "10", "10", "--all-methods")
        names = {line.split()[0] for line in out.strip().splitlines()}
        assert code == 0 and names == {"recurrence", "closed", "egf"}

    def test_table(self, capsys, tmp_path):
        target = tmp_path / "t.csv"
        code, out, _ = run(
            capsys, "count", "2", "2", "--table", "--output", str(target)
        )
        assert code == 0 and out == ""
        rows = target.read_text().splitlines()
        assert rows[0] == "m\\n,0,1,2"
        assert rows[3] == "2,4,23,115"

    def test_over_limit(self, capsys):
        code, _, err = run(capsys, "count", "65", "65", "--method", "egf")
        assert code == 2 and "limit" in err
        code, _, err = run(capsys, "count", "9", "9", "--method", "codes")
        assert code == 2 and "limit" in err
        code, _, err = run(capsys, "count", "3", "2", "--method", "bruteforce")
        assert code == 2 and "limit" in err

    def test_budget_overrides_limit_with_warning(self, capsys):
        code, out, err = run(
            capsys, "count", "65", "0", "--budget", "1"
        )
        assert code == 0 and "warning" in err
        assert out == f"{2 ** 65}\n"

    def test_bruteforce_budget_exhaustion(self, capsys):
        code, _, err = run(
            capsys, "count", "2", "2", "--method", "bruteforce",
            "--budget", "50",
        )
        assert code == 2 and "exceeded" in err


class TestEnumerate:
    def test_codes_listing(self, capsys):
        code, out, _ = run(capsys, "enumerate", "1", "1", "--format", "codes")
        assert code == 0
        assert out.splitlines() == [
            "0|0", "0|1", "0|2", "1|0", "1|1", "2|0", "2|2",
        ]

    def test_json_lines_parse_and_count(self, capsys):
        code, out, _ = run(capsys, "enumerate", "2", "1")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 23
        covers = [cover_from_json(line) for line in lines]
        assert len(set(covers)) == 23

    def test_dot_blocks(self, capsys):
        code, out, _ = run(capsys, "enumerate", "1", "0", "--format", "dot")
        assert code == 0 and out.count("digraph cover {") == 2

    def test_population_over_budget(self, capsys):
        code, _, err = run(capsys, "enumerate", "8", "8")
        assert code == 2 and "budget" in err

    def test_budget_raises_cap(self, capsys):
        code, out, _ = run(
            capsys, "enumerate", "1", "3", "--format", "codes",
            "--budget", "100",
        )
        assert code == 0 and len(out.splitlines()) == 73

    def test_wide_shape_matches_closed_count(self, capsys):
        from satsys.counting import count_closed_form

        code, out, _ = run(capsys, "enumerate", "3", "2")
        assert code == 0
        assert len(out.splitlines()) == count_closed_form(3, 2)

    def test_chain_shape(self, capsys):
        code, out, _ = run(capsys, "enumerate", "0", "2")
        assert code == 0 and len(out.splitlines()) == 4

    def test_round_trip_through_verify(self, capsys, tmp_path):
        code, out, _ = run(capsys, "enumerate", "2", "2", "--format", "json")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 115
        for idx in (0, 57, 114):
            blob = tmp_path / f"c{idx}.json"
            blob.write_text(lines[idx])
            code, out, _ = run(capsys, "verify", str(blob))
            assert code == 0 and "codes:" in out


class TestVerify:
    def test_saturated_system(self, capsys, tmp_path):
        target = next(iter_saturated_systems(GridShape(1, 2)))
        blob = tmp_path / "sys.json"
        blob.write_text(target.to_json())
        code, out, _ = run(capsys, "verify", str(blob))
        assert code == 0 and "saturated: yes" in out

    def test_valid_but_not_saturated(self, capsys, tmp_path):
        blob = write_claw(tmp_path / "claw.json")
        code, out, _ = run(capsys, "verify", str(blob))
        assert code == 0 and "saturated: no" in out

    def test_axiom_violation(self, capsys, tmp_path):
        blob = tmp_path / "bad.json"
        blob.write_text(
            json.dumps({"m": 1, "n": 1, "relations": [[[0, 1], [1, 1]]]})
        )
        code, out, _ = run(capsys, "verify", str(blob))
        assert code == 1 and "restriction: 1 violation" in out

    def test_cover_violation(self, capsys, tmp_path):
        blob = tmp_path / "cover.json"
        blob.write_text(
            json.dumps(
                {"m": 1, "n": 1, "horizontal": [[0, 1]], "vertical": []}
            )
        )
        code, out, _ = run(capsys, "verify", str(blob))
        assert code == 1 and "column_prefix: 1 violation" in out

    def test_cover_codes_reported(self, capsys, tmp_path):
        from satsys.covers import CodePair, cover_from_codes

        cover = cover_from_codes(GridShape(3, 2), CodePair((3, 1, 1), (2, 3)))
        blob = tmp_path / "cover.json"
        blob.write_text(cover.to_json())
        code, out, _ = run(capsys, "verify", str(blob))
        assert code == 0 and "codes: 3,1,1|2,3" in out

    def test_garbage(self, capsys, tmp_path):
        blob = tmp_path / "garbage.json"
        blob.write_text("{broken")
        code, _, err = run(capsys, "verify", str(blob))
        assert code == 3 and "not valid JSON" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", str(tmp_path / "absent.json"))
        assert code == 3 and "cannot read" in err

    def test_wrong_structure(self, capsys, tmp_path):
        blob = tmp_path / "odd.json"
        blob.write_text(json.dumps({"m": 1, "n": 1, "stuff": []}))
        code, _, err = run(capsys, "verify", str(blob))
        assert code == 3

    def test_malformed_relations(self, capsys, tmp_path):
        blob = tmp_path / "odd.json"
        blob.write_text(json.dumps({"m": 1, "n": 1, "relations": [[1, 2]]}))
        code, _, err = run(capsys, "verify", str(blob))
        assert code == 3


class TestRealize:
    def test_certificate(self, capsys, tmp_path):
        targets = list(iter_saturated_systems(GridShape(1, 1)))
        blob = tmp_path / "sys.json"
        blob.write_text(targets[3].to_json())
        code, out, _ = run(capsys, "realize", str(blob), "5", "7")
        assert code == 0
        doc = json.loads(out)
        assert doc["verified"] is True
        assert doc["p"] == 5 and doc["q"] == 7
        assert doc["witness"] % 7 == 0 and doc["witness"] > 0
        assert from_json(json.dumps(doc["target"])) == targets[3]

    def test_not_saturated(self, capsys, tmp_path):
        blob = write_claw(tmp_path / "claw.json")
        code, _, err = run(capsys, "realize", str(blob), "5", "7")
        assert code == 4 and "not saturated" in err

    def test_axiom_violation(self, capsys, tmp_path):
        blob = tmp_path / "bad.json"
        blob.write_text(
            json.dumps({"m": 1, "n": 1, "relations": [[[0, 1], [1, 1]]]})
        )
        code, _, err = run(capsys, "realize", str(blob), "5", "7")
        assert code == 4 and "not a transfer system" in err

    def test_bad_primes(self, capsys, tmp_path):
        target = next(iter_saturated_systems(GridShape(1, 1)))
        blob = tmp_path / "sys.json"
        blob.write_text(target.to_json())
        for p, q in ((3, 7), (5, 5), (6, 7)):
            code, _, err = run(capsys, "realize", str(blob), str(p), str(q))
            assert code == 4

    def test_wrong_shape(self, capsys, tmp_path):
        target = next(iter_saturated_systems(GridShape(2, 1)))
        blob = tmp_path / "sys.json"
        blob.write_text(target.to_json())
        code, _, err = run(capsys, "realize", str(blob), "5", "7")
        assert code == 4 and "shape" in err

    def test_parse_failure(self, capsys, tmp_path):
        blob = tmp_path / "nope.json"
        blob.write_text("[]")
        code, _, _ = run(capsys, "realize", str(blob), "5", "7")
        assert code == 3

    def test_output_file(self, capsys, tmp_path):
        target = next(iter_saturated_systems(GridShape(1, 2)))
        blob = tmp_path / "sys.json"
        blob.write_text(target.to_json())
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out_path in (first, second):
            code, _, _ = run(
                capsys, "realize", str(blob), "5", "7",
                "--output", str(out_path),
            )
            assert code == 0
        assert first.read_bytes() == second.read_bytes()
        assert json.loads(first.read_text())["verified"] is True

    def test_verification_failure_dumps_both_systems(
        self, capsys, tmp_path, monkeypatch
    ):
        from satsys.modular import RealizationError

        targets = list(iter_saturated_systems(GridShape(1, 1)))
        blob = tmp_path / "sys.json"
        blob.write_text(targets[3].to_json())

        def fail(system, p, q, budget):
            raise RealizationError("planted", targets[3], targets[0])

        monkeypatch.setattr(cli, "realize", fail)
        code, _, err = run(capsys, "realize", str(blob), "5", "7")
        assert code == 5
        assert "target:" in err and "produced:" in err


class TestReport:
    def test_writes_files(self, capsys, tmp_path):
        out_dir = tmp_path / "rep"
        code, out, err = run(
            capsys, "report", "2", "2", "--output", str(out_dir)
        )
        assert code == 0
        assert (out_dir / "counts.csv").exists()
        assert (out_dir / "heatmap.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
        assert (out_dir / "gallery_2x2.png").exists()
        assert "gallery" not in err

    def test_skips_large_gallery(self, capsys, tmp_path):
        out_dir = tmp_path / "rep"
        code, _, err = run(capsys, "report", "3", "3", "--output", str(out_dir))
        assert code == 0 and "skipping the gallery" in err
        assert not list(out_dir.glob("gallery*"))


class TestSelftest:
    @staticmethod
    def fake_results(ok):
        from satsys.acceptance import CriterionResult

        return [
            CriterionResult(1, "stub one", True, "fine", 0.01),
            CriterionResult(2, "stub two", ok, "fine" if ok else "broke", 0.02),
        ]

    def test_all_passing(self, capsys, monkeypatch):
        from satsys import acceptance

        monkeypatch.setattr(
            acceptance, "run_all", lambda quick: self.fake_results(True)
        )
        code, out, _ = run(capsys, "selftest")
        assert code == 0 and "2/2 passed" in out

    def test_failure_reported(self, capsys, monkeypatch):
        from satsys import acceptance

        monkeypatch.setattr(
            acceptance, "run_all", lambda quick: self.fake_results(False)
        )
        code, out, _ = run(capsys, "selftest", "--full")
        assert code == 1
        assert "FAIL" in out and "broke" in out and "repro" in out
        assert "1/2 passed" in out


class TestUsage:
    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["bogus"])
        assert exc.value.code == 1

    def test_missing_argument(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["count", "1"])
        assert exc.value.code == 1

    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "satsys.cli", "count", "1", "2"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0 and proc.stdout == "23\n"
