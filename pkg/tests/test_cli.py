import json

import pytest
from click.testing import CliRunner

from geoagent.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def machine_record(runner, args):
    result = runner.invoke(main, ["--machine", *args])
    assert result.exit_code == 0, result.output
    lines = [l for l in result.output.splitlines() if l.strip()]
    assert len(lines) == 1  # exactly one structured record per invocation
    return json.loads(lines[0])


class TestClassify:
    def test_paper_cl(self, runner):
        result = runner.invoke(main, ["classify", "--ll", "30", "--pl", "10",
                                      "--pass200", "60"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "CL"

    def test_machine_record(self, runner):
        record = machine_record(runner, ["classify", "--ll", "60", "--pl", "50",
                                         "--pass200", "60"])
        assert record["symbol"] == "MH"
        assert record["rationale"]

    def test_batch(self, runner, fixtures_dir):
        record = machine_record(
            runner, ["classify", "--batch", str(fixtures_dir / "samples.json")]
        )
        symbols = [r.get("symbol") for r in record["results"]]
        assert symbols == ["CL", "MH", "GW", "GW-GM"]

    def test_missing_branch_input_is_domain_error(self, runner):
        result = runner.invoke(main, ["classify", "--pass200", "60"])
        assert result.exit_code == 1
        assert "liquid_limit" in result.output

    def test_unknown_flag_usage_error(self, runner):
        result = runner.invoke(main, ["classify", "--bogus", "1"])
        assert result.exit_code == 2


class TestCalc:
    def test_bearing_pisa(self, runner):
        record = machine_record(runner, ["calc", "bearing", "--su", "35", "--sc", "1.11"])
        assert record["q_f"] == pytest.approx(199.689)
        assert record["factors"]["Nc"] == 5.14

    def test_bearing_by_shape(self, runner):
        record = machine_record(
            runner, ["calc", "bearing", "--su", "35", "--shape", "circular"]
        )
        assert record["q_f"] == pytest.approx(199.689)

    def test_maxload_pisa(self, runner):
        result = runner.invoke(main, ["calc", "maxload", "--qf", "199.689",
                                      "--diameter", "20", "--depth", "5"])
        assert result.exit_code == 0
        assert "98022" in result.output
        assert "kN" in result.output

    def test_trucks_paper(self, runner):
        record = machine_record(runner, ["calc", "trucks", "--volume", "500",
                                         "--capacity", "25", "--loss", "0.10"])
        assert record["trucks"] == 22

    def test_audit_paper(self, runner):
        record = machine_record(runner, [
            "calc", "audit", "--terms", "15x1,100x5,18.92x3", "--claimed", "734.6",
        ])
        assert record["recomputed"] == pytest.approx(571.76)
        assert record["matches"] is False

    def test_wall(self, runner):
        record = machine_record(runner, [
            "calc", "wall", "--gamma", "18", "--height", "4", "--phi", "30",
            "--mu", "0.5", "--vertical", "200", "--base", "2.5",
            "--moment", "20", "--qult", "600",
        ])
        assert record["middle_third_ok"] is True
        assert record["required_fos"] == 1.25

    def test_wall_geometry_error_exit_1(self, runner):
        result = runner.invoke(main, [
            "calc", "wall", "--gamma", "18", "--height", "4", "--phi", "30",
            "--mu", "0.5", "--vertical", "200", "--base", "2.0",
            "--moment", "400", "--qult", "600",
        ])
        assert result.exit_code == 1


class TestRetrievalCommands:
    @pytest.fixture
    def index_dir(self, runner, tmp_path, fixtures_dir):
        out = tmp_path / "idx"
        result = runner.invoke(main, [
            "index", str(fixtures_dir / "diggs" / "schema_notes.txt"),
            "--out", str(out), "--max-tokens", "80", "--overlap", "8",
        ])
        assert result.exit_code == 0, result.output
        return out

    def test_search(self, runner, index_dir):
        record = machine_record(
            runner, ["search", "plastic limit water content", "--index", str(index_dir)]
        )
        assert 1 <= len(record["hits"]) <= 5
        scores = [h["score"] for h in record["hits"]]
        assert scores == sorted(scores, reverse=True)

    def test_search_golden_stability(self, runner, index_dir):
        first = machine_record(
            runner, ["search", "water content", "--index", str(index_dir)]
        )
        second = machine_record(
            runner, ["search", "water content", "--index", str(index_dir)]
        )
        assert first == second

    def test_ask_scripted(self, runner, index_dir, fixtures_dir):
        record = machine_record(runner, [
            "ask", "What is the XML tag to store plastic limit in DIGGS?",
            "--index", str(index_dir),
            "--backend", f"scripted:{fixtures_dir / 'sessions' / 'diggs_answer.txt'}",
        ])
        assert record["status"] == "ok"
        assert "diggs_geo:waterContent" in record["answer"]


class TestDiggsCommands:
    def test_emit_parse_round_trip(self, runner, tmp_path):
        result = runner.invoke(main, ["diggs", "emit", "--values", "11.9,11.7,11.4"])
        assert result.exit_code == 0
        assert 'gml:id="tr1"' in result.output
        path = tmp_path / "doc.xml"
        path.write_text(result.output)
        record = machine_record(runner, ["diggs", "parse", str(path)])
        assert record["trials"] == [11.9, 11.7, 11.4]

    def test_parse_error_exit_1(self, runner, tmp_path):
        path = tmp_path / "bad.xml"
        path.write_text("<broken")
        result = runner.invoke(main, ["diggs", "parse", str(path)])
        assert result.exit_code == 1


class TestAgentCommand:
    def test_pisa_run(self, runner, fixtures_dir, tmp_path):
        import shutil

        memory = tmp_path / "mem.json"
        shutil.copy(fixtures_dir / "memory" / "longterm.json", memory)
        record = machine_record(runner, [
            "agent", "run",
            "--task", "Calculate the maximum load for the Pisa tower.",
            "--report", str(fixtures_dir / "pisa_report.pdf"),
            "--backend", f"scripted:{fixtures_dir / 'sessions' / 'pisa.txt'}",
            "--memory", str(memory),
        ])
        assert record["succeeded"] is True
        assert "98.022 MN" in record["final_answer"]

    def test_failed_run_exit_1(self, runner, fixtures_dir):
        result = runner.invoke(main, [
            "agent", "run", "--task", "never finishes",
            "--backend", f"scripted:{fixtures_dir / 'sessions' / 'no_final.txt'}",
            "--max-steps", "3",
        ])
        assert result.exit_code == 1

    def test_repl(self, runner, fixtures_dir):
        result = runner.invoke(main, [
            "agent", "repl",
            "--backend", f"scripted:{fixtures_dir / 'sessions' / 'unknown_tool.txt'}",
        ], input="compute the circular shape factor\n\n")
        assert result.exit_code == 0
        assert "1.11" in result.output


class TestConfig:
    def test_show_defaults(self, runner):
        record = machine_record(runner, ["config", "show"])
        assert record["k"] == 5
        assert record["token_budget"] == 32000
        assert record["required_fos"] == 1.25
        assert record["temperature"] == 0.0
        assert record["max_steps"] == 10
        assert record["kernel"] in ("numba", "numpy")

    def test_unknown_subcommand_exit_2(self, runner):
        assert runner.invoke(main, ["frobnicate"]).exit_code == 2
