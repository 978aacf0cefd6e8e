import json

import pytest
from click.testing import CliRunner

from aicwb import persistence
from aicwb.cli import main
from aicwb.fixture import build_fixture

from conftest import fixed_clock


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def fixture_path(tmp_path):
    session, _ = build_fixture(session_id="clifix", clock=fixed_clock)
    path = tmp_path / "case.aic.json"
    persistence.save_session_to_path(session, path)
    return str(path)


class TestInit:
    def test_creates_document(self, runner, tmp_path):
        path = tmp_path / "collision.aic.json"
        result = runner.invoke(main, ["init", str(path), "--name", "collision-avoidance"])
        assert result.exit_code == 0, result.output
        assert path.exists()
        loaded = persistence.load_session_from_path(path)
        assert loaded.name == "collision-avoidance"
        assert loaded.steps[0] == "in_progress"

    def test_refuses_to_overwrite(self, runner, tmp_path):
        path = tmp_path / "x.aic.json"
        runner.invoke(main, ["init", str(path), "--name", "a"])
        result = runner.invoke(main, ["init", str(path), "--name", "b"])
        assert result.exit_code == 2

    def test_threshold_env_var(self, runner, tmp_path):
        path = tmp_path / "x.aic.json"
        result = runner.invoke(
            main,
            ["init", str(path), "--name", "a"],
            env={"AICWB_RED_FLAG_THRESHOLD": "3"},
        )
        assert result.exit_code == 0
        assert persistence.load_session_from_path(path).config.red_flag_threshold == 3


class TestMissingSession:
    @pytest.mark.parametrize(
        "args",
        [
            ["status", "nope.aic.json"],
            ["validate", "nope.aic.json"],
            ["factors", "nope.aic.json"],
            ["step-complete", "nope.aic.json", "1"],
        ],
    )
    def test_exit_2_with_message(self, runner, tmp_path, args):
        with runner.isolated_filesystem(temp_dir=tmp_path):
            result = runner.invoke(main, args)
        assert result.exit_code == 2
        assert "does not exist" in result.output


class TestSubmit:
    def test_missing_prefix_exits_1_and_leaves_file_untouched(self, runner, tmp_path):
        path = tmp_path / "s.aic.json"
        runner.invoke(main, ["init", str(path), "--name", "s"])
        before = path.read_bytes()
        result = runner.invoke(
            main, ["step-submit", str(path), "1", "--text", "Aircraft may collide."]
        )
        assert result.exit_code == 1
        assert "The architect asserts that" in result.output
        assert path.read_bytes() == before

    def test_submit_to_locked_step_exits_1(self, runner, tmp_path):
        path = tmp_path / "s.aic.json"
        runner.invoke(main, ["init", str(path), "--name", "s"])
        result = runner.invoke(
            main,
            ["step-submit", str(path), "5", "--text",
             "The architect asserts that this is premature"],
        )
        assert result.exit_code == 1

    def test_submit_reads_stdin_and_persists(self, runner, tmp_path):
        path = tmp_path / "s.aic.json"
        runner.invoke(main, ["init", str(path), "--name", "s"])
        result = runner.invoke(
            main,
            ["step-submit", str(path), "1"],
            input="The architect asserts that (x_y) matters\n",
        )
        assert result.exit_code == 0, result.output
        assert "factors: x_y" in result.output
        loaded = persistence.load_session_from_path(path)
        assert len(loaded.assertions) == 1

    def test_complete_then_status(self, runner, tmp_path):
        path = tmp_path / "s.aic.json"
        runner.invoke(main, ["init", str(path), "--name", "s"])
        runner.invoke(
            main,
            ["step-submit", str(path), "1", "--text",
             "The architect asserts that something is unsafe"],
        )
        result = runner.invoke(main, ["step-complete", str(path), "1"])
        assert result.exit_code == 0
        status = runner.invoke(main, ["status", str(path), "--json"])
        summary = json.loads(status.output)
        assert summary["steps"][0]["status"] == "complete"
        assert summary["steps"][1]["status"] == "in_progress"


class TestReviseReconfirm:
    def test_revision_reports_stale_steps(self, runner, tmp_path):
        path = tmp_path / "s.aic.json"
        runner.invoke(main, ["init", str(path), "--name", "s"])
        runner.invoke(
            main,
            ["step-submit", str(path), "1", "--text",
             "The architect asserts that v1"],
        )
        runner.invoke(main, ["step-complete", str(path), "1"])
        runner.invoke(
            main,
            ["step-submit", str(path), "2", "--text",
             "The architect asserts that systems exist"],
        )
        runner.invoke(main, ["step-complete", str(path), "2"])
        loaded = persistence.load_session_from_path(path)
        target = loaded.current_assertions(1)[0]
        result = runner.invoke(
            main,
            ["step-revise", str(path), "1", target.id,
             "--rationale", "missing assumption",
             "--text", "The architect asserts that v2"],
        )
        assert result.exit_code == 0, result.output
        assert "stale steps awaiting reconfirmation: 2" in result.output
        result = runner.invoke(main, ["step-reconfirm", str(path), "2"])
        assert result.exit_code == 0
        summary = json.loads(
            runner.invoke(main, ["status", str(path), "--json"]).output
        )
        assert summary["stale_steps"] == []


class TestReadCommands:
    def test_steps_json_lists_eight(self, runner):
        result = runner.invoke(main, ["steps", "--json"])
        catalog = json.loads(result.output)
        assert len(catalog) == 8

    def test_step_open_shows_prompt(self, runner, fixture_path):
        result = runner.invoke(main, ["step-open", fixture_path, "4"])
        assert result.exit_code == 0
        assert "A purpose can be defined as a verb" in result.output

    def test_validate_clean_fixture_exit_0(self, runner, fixture_path):
        result = runner.invoke(main, ["validate", fixture_path])
        assert result.exit_code == 0
        assert "no findings" in result.output

    def test_validate_defect_exit_1(self, runner, fixture_path, tmp_path):
        doc = json.loads(open(fixture_path, "rb").read().decode("utf-8"))
        doc["session"]["assertions"][0]["text"] = "broken"
        bad = tmp_path / "bad.aic.json"
        bad.write_text(json.dumps(doc), encoding="utf-8")
        result = runner.invoke(main, ["validate", str(bad)])
        assert result.exit_code == 1
        assert "TEMPLATE_PREFIX" in result.output

    def test_factors_table_top_row(self, runner, fixture_path):
        result = runner.invoke(main, ["factors", fixture_path])
        assert result.exit_code == 0
        first_row = result.output.splitlines()[0]
        assert first_row.startswith("own_aircraft_pilot_decision_making_process")
        assert "most_influential" in first_row

    def test_factors_json(self, runner, fixture_path):
        result = runner.invoke(main, ["factors", fixture_path, "--json"])
        report = json.loads(result.output)
        assert report["entries"][0]["token"] == (
            "own_aircraft_pilot_decision_making_process"
        )

    def test_read_commands_are_deterministic_and_non_mutating(
        self, runner, fixture_path
    ):
        before = open(fixture_path, "rb").read()
        a = runner.invoke(main, ["report", fixture_path])
        b = runner.invoke(main, ["report", fixture_path])
        assert a.output == b.output
        assert "# Articulation report: collision-avoidance" in a.output
        assert open(fixture_path, "rb").read() == before

    def test_expected_version_conflict_exits_1(self, runner, fixture_path):
        before = open(fixture_path, "rb").read()
        result = runner.invoke(
            main,
            ["step-reconfirm", fixture_path, "2", "--expected-version", "1"],
        )
        assert result.exit_code == 1
        assert open(fixture_path, "rb").read() == before
