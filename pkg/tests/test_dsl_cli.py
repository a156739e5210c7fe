import json
import subprocess
import sys
from importlib import resources
from pathlib import Path

import pytest

from forcelab import dsl, runner
from forcelab.errors import DslError

MINIMAL = """
(ground M (vstage 2))
(forcing P3 (elems one a b) (le (a one) (b one)) (top one))
(name sig P3 (pairs ((check {}) a)))
(formula f1 P3 (eq sig (check {})))
(query q1 (forces P3 b f1))
"""


def bundled(name: str) -> str:
    return (resources.files("forcelab") / "scenarios" / name).read_text()


def bundled_names() -> list[str]:
    root = resources.files("forcelab") / "scenarios"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".fl"))


class TestParser:
    def test_minimal(self):
        sc = dsl.parse(MINIMAL)
        assert "P3" in sc.forcings
        assert sc.queries[0][0] == "q1"

    def test_comments_and_whitespace(self):
        sc = dsl.parse("; hi\n(ground M (vstage 1)) ; tail\n")
        assert "M" in sc.grounds

    def test_unresolved_reference(self):
        with pytest.raises(DslError) as err:
            dsl.parse("(forcing P (elems one) (top one))\n(name sig P unknown)\n")
        assert "unknown" in str(err.value)

    def test_error_carries_location(self):
        with pytest.raises(DslError) as err:
            dsl.parse("(ground M (vstage 1))\n(bogus)\n")
        assert "2:" in str(err.value)

    def test_unterminated_form(self):
        with pytest.raises(DslError):
            dsl.parse("(ground M (vstage 1)")

    def test_validator_runs_at_load(self):
        with pytest.raises(DslError):
            dsl.parse("(forcing P (elems one a) (le (a one)) (top one))\n"
                      "(name sig P (pairs ((check {}) zzz)))\n")

    def test_set_literals(self):
        sc = dsl.parse("(ground M (elems {} {{}} nat:2))")
        assert len(sc.grounds["M"][0]) == 3

    def test_roundtrip_minimal(self):
        sc = dsl.parse(MINIMAL)
        again = dsl.parse(sc.serialize())
        assert sc == again

    def test_fo_layer(self):
        sc = dsl.parse(MINIMAL + "(pool pl P3 (sig))\n"
                       "(formula refl P3 (all 0 (eq v0 v0)))\n"
                       "(query q2 (forces-fo P3 one refl pl))\n")
        fid, phi, _, layer = sc.formulas["refl"]
        assert layer == "fo"
        report = runner.run(sc)
        assert [r.verdict for r in report.records] == ["FORCED", "FORCED"]

    def test_fo_layer_rejects_mixing(self):
        with pytest.raises(DslError):
            dsl.parse(MINIMAL + "(formula bad P3 (eq sig v0))\n")

    def test_quantifier_needs_fo_body(self):
        with pytest.raises(DslError):
            dsl.parse(MINIMAL + "(formula bad P3 (ex 0 (ing a)))\n")

    def test_fo_normal_form_enforced(self):
        with pytest.raises(DslError):
            dsl.parse(MINIMAL + "(formula bad P3 (ex 0 (mem v0 v5)))\n")

    @pytest.mark.parametrize("name", bundled_names())
    def test_roundtrip_bundled(self, name):
        sc = dsl.parse(bundled(name))
        again = dsl.parse(sc.serialize())
        assert sc == again
        assert again.serialize() == sc.serialize()


class TestRunner:
    def test_minimal_report(self):
        sc = dsl.parse(MINIMAL)
        report = runner.run(sc)
        assert report.records[0].rid == "q1"
        assert report.records[0].verdict == "FORCED"
        assert report.failures == 0

    def test_empty_scenario(self):
        report = runner.run(dsl.parse("(ground M (vstage 1))"))
        assert report.records == []

    def test_suite_filter(self):
        sc = dsl.parse(bundled("p3_basics.fl"))
        report = runner.run(sc, suites=["completion-iso"])
        kinds = {r.kind for r in report.records if r.verdict == "HEADER"}
        assert kinds == {"completion-iso"}

    def test_broken_projection_suite_fails(self):
        sc = dsl.parse("(suite s (approachability 1 2 plain (corrupt identity)))")
        report = runner.run(sc)
        assert report.failures >= 1

    def test_every_suite_kind_has_anchor(self):
        assert set(runner.SUITE_ANCHORS) == set(dsl.SUITE_KINDS)
        assert len(set(runner.SUITE_ANCHORS.values())) == len(dsl.SUITE_KINDS)


def run_cli(args: list[str], cwd: str | None = None) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "forcelab.cli", *args],
                          capture_output=True, text=True, cwd=cwd)


@pytest.fixture()
def scenario_file(tmp_path: Path) -> Path:
    path = tmp_path / "mini.fl"
    path.write_text(MINIMAL)
    return path


class TestCli:
    def test_run_exit_zero(self, scenario_file):
        out = run_cli(["run", "--scenario", str(scenario_file)])
        assert out.returncode == 0
        assert "RESULT q1 FORCED" in out.stdout

    def test_check(self, scenario_file):
        out = run_cli(["check", str(scenario_file)])
        assert out.returncode == 0 and out.stdout.startswith("OK")

    def test_check_bad_file(self, tmp_path):
        bad = tmp_path / "bad.fl"
        bad.write_text("(nonsense)")
        out = run_cli(["check", str(bad)])
        assert out.returncode == 2

    def test_missing_file_is_usage_error(self):
        out = run_cli(["run", "--scenario", "no-such-file.fl"])
        assert out.returncode == 2

    def test_failures_exit_one(self, tmp_path):
        path = tmp_path / "fail.fl"
        path.write_text("(suite s (approachability 1 2 plain (corrupt identity)))\n")
        out = run_cli(["run", "--scenario", str(path)])
        assert out.returncode == 1
        assert "FAIL" in out.stdout

    def test_jsonl_records_parse(self, scenario_file):
        out = run_cli(["run", "--scenario", str(scenario_file), "--format", "jsonl"])
        lines = [json.loads(line) for line in out.stdout.splitlines()]
        assert lines[0]["id"] == "q1"
        assert lines[0]["verdict"] == "FORCED"

    @pytest.mark.parametrize("name", bundled_names())
    def test_bundled_deterministic(self, name, tmp_path):
        path = tmp_path / name
        path.write_text(bundled(name))
        first = run_cli(["run", "--scenario", str(path), "--seed", "3"])
        second = run_cli(["run", "--scenario", str(path), "--seed", "3"])
        assert first.returncode == 0, first.stdout + first.stderr
        assert first.stdout == second.stdout

    def test_jsonl_agrees_with_text(self, tmp_path):
        name = "p3_basics.fl"
        path = tmp_path / name
        path.write_text(bundled(name))
        text = run_cli(["run", "--scenario", str(path)]).stdout
        jsonl = run_cli(["run", "--scenario", str(path), "--format", "jsonl"]).stdout
        text_records = []
        for line in text.splitlines():
            if line.startswith("SUITE "):
                rid, payload = line[6:].split(" :: ", 1)
                text_records.append((rid, "HEADER", payload))
            else:
                body = line[len("RESULT "):]
                rid, rest = body.split(" ", 1)
                verdict, _, payload = rest.partition(" ")
                text_records.append((rid, verdict, payload))
        json_records = [(obj["id"], obj["verdict"], obj["payload"])
                        for obj in map(json.loads, jsonl.splitlines())]
        assert text_records == json_records
