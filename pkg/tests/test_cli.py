"""End-to-end CLI behavior: reports, exit codes, determinism, CSV."""

import csv
import io
import json
import math
import subprocess
import sys

import pytest

from depthreat.cli import main

FIXTURE_ARGS = None  # populated by _fixture_args


def _fixture_args(fixture_dir, *names):
    args = [
        "--registry", str(fixture_dir / "registry.json"),
        "--advisories", str(fixture_dir / "advisories.json"),
    ]
    for name in names or ("alpha", "beta", "gamma"):
        args += ["--history", str(fixture_dir / f"history_app_{name}.json")]
    return args


def _run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestScan:
    def test_matches_expected_fixture_report(self, fixture_dir, tmp_path, capsys):
        out = tmp_path / "scan.json"
        code, _, _ = _run(
            ["scan", *_fixture_args(fixture_dir), "--at", "2016-05-01T00:00:00Z",
             "--out", str(out)],
            capsys,
        )
        assert code == 0
        report = json.loads(out.read_text())
        expected = json.loads((fixture_dir / "expected_scan.json").read_text())
        assert report["applications"] == expected["applications"]
        assert report["cohort"] == expected["cohort"]
        assert report["errors"] == []
        assert report["schema_version"] == 1
        assert report["tool"]["name"] == "depthreat"
        assert report["config"]["at"] == "2016-05-01T00:00:00Z"

    def test_byte_identical_across_runs(self, fixture_dir, tmp_path, capsys):
        out = tmp_path / "scan.json"
        args = ["scan", *_fixture_args(fixture_dir), "--at", "2016-05-01",
                "--out", str(out)]
        assert main(args) == 0
        first = out.read_bytes()
        assert main(args) == 0
        capsys.readouterr()
        assert out.read_bytes() == first

    def test_missing_advisories_exits_1_without_output(
        self, fixture_dir, tmp_path, capsys
    ):
        out = tmp_path / "never.json"
        code, stdout, stderr = _run(
            [
                "scan",
                "--registry", str(fixture_dir / "registry.json"),
                "--advisories", str(tmp_path / "absent.json"),
                "--history", str(fixture_dir / "history_app_alpha.json"),
                "--at", "2016-05-01",
                "--out", str(out),
            ],
            capsys,
        )
        assert code == 1
        assert not out.exists()
        assert "advisories" in stderr

    def test_one_corrupt_history_is_partial(self, fixture_dir, tmp_path, capsys):
        corrupt = tmp_path / "corrupt.json"
        corrupt.write_text("{ not json")
        out = tmp_path / "scan.json"
        code, _, _ = _run(
            [
                "scan",
                *_fixture_args(fixture_dir, "alpha", "beta"),
                "--history", str(corrupt),
                "--at", "2016-05-01",
                "--out", str(out),
            ],
            capsys,
        )
        assert code == 2
        report = json.loads(out.read_text())
        assert len(report["applications"]) == 2
        assert len(report["errors"]) == 1
        assert report["errors"][0]["source"] == str(corrupt)

    def test_date_only_expands_to_midnight(self, fixture_dir, capsys):
        code, stdout, _ = _run(
            ["scan", *_fixture_args(fixture_dir), "--at", "2016-05-01"],
            capsys,
        )
        assert code == 0
        report = json.loads(stdout)
        assert report["applications"][0]["at"] == "2016-05-01T00:00:00Z"

    def test_paper_preset_keeps_fixture_apps(self, fixture_dir, capsys):
        code, stdout, _ = _run(
            ["scan", *_fixture_args(fixture_dir), "--at", "2016-05-01",
             "--preset", "paper-2019"],
            capsys,
        )
        assert code == 0
        report = json.loads(stdout)
        assert len(report["applications"]) == 3
        assert report["filtered"] == []

    def test_maturity_flags_filter_with_reasons(self, fixture_dir, capsys):
        code, stdout, _ = _run(
            ["scan", *_fixture_args(fixture_dir), "--at", "2016-05-01",
             "--min-commits", "200"],
            capsys,
        )
        assert code == 0
        report = json.loads(stdout)
        assert [a["application"] for a in report["applications"]] == [
            "app-beta",
            "app-gamma",
        ]
        assert report["filtered"] == [
            {"application": "app-alpha", "reasons": ["min_commits"]}
        ]

    def test_csv_projection(self, fixture_dir, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        code, _, _ = _run(
            ["scan", *_fixture_args(fixture_dir), "--at", "2016-05-01",
             "--format", "csv", "--out", str(out)],
            capsys,
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 12  # 4 + 3 + 5 declared dependencies at that instant
        by_key = {(r["application"], r["package"]): r for r in rows}
        assert by_key[("app-alpha", "auth-gate")]["outcome"] == "high"
        assert by_key[("app-alpha", "auth-gate")]["blame"] == "application-to-blame"
        assert by_key[("app-gamma", "tmpl-forge")]["state"] == "unresolvable"

    def test_parallel_jobs_identical_output(self, fixture_dir, tmp_path, capsys):
        serial = tmp_path / "serial.json"
        parallel = tmp_path / "parallel.json"
        base = ["scan", *_fixture_args(fixture_dir), "--at", "2016-05-01"]
        assert main(base + ["--out", str(serial)]) == 0
        assert main(base + ["--jobs", "4", "--out", str(parallel)]) == 0
        capsys.readouterr()
        serial_doc = json.loads(serial.read_text())
        parallel_doc = json.loads(parallel.read_text())
        for doc in (serial_doc, parallel_doc):
            del doc["config"]["jobs"], doc["config"]["out"]
        assert serial_doc == parallel_doc


class TestEvolve:
    def test_matches_expected_fixture_report(self, fixture_dir, capsys):
        code, stdout, _ = _run(
            ["evolve", *_fixture_args(fixture_dir), "--snapshots", "5"],
            capsys,
        )
        assert code == 0
        report = json.loads(stdout)
        expected = json.loads((fixture_dir / "expected_evolve.json").read_text())
        assert report["intervals"] == expected["intervals"]

    def test_k_zero_is_usage_error(self, fixture_dir, capsys):
        code, _, stderr = _run(
            ["evolve", *_fixture_args(fixture_dir), "--snapshots", "0"],
            capsys,
        )
        assert code == 1
        assert "snapshots" in stderr

    def test_k_one_equals_scan_at_each_lifespan_end(self, fixture_dir, capsys):
        for name, last in [
            ("alpha", "2017-03-01T18:00:00Z"),
            ("beta", "2017-02-10T16:30:00Z"),
            ("gamma", "2017-01-20T13:45:00Z"),
        ]:
            code, stdout, _ = _run(
                ["evolve", *_fixture_args(fixture_dir, name), "--snapshots", "1"],
                capsys,
            )
            assert code == 0
            evolve_report = json.loads(stdout)
            code, stdout, _ = _run(
                ["scan", *_fixture_args(fixture_dir, name), "--at", last],
                capsys,
            )
            assert code == 0
            scan_report = json.loads(stdout)
            assert (
                evolve_report["intervals"][0]["applications"]
                == scan_report["applications"]
            )
            assert evolve_report["intervals"][0]["cohort"] == scan_report["cohort"]


class TestBlame:
    def test_matches_expected_fixture_report(self, fixture_dir, capsys):
        code, stdout, _ = _run(
            ["blame", *_fixture_args(fixture_dir), "--snapshots", "5"],
            capsys,
        )
        assert code == 0
        report = json.loads(stdout)
        expected = json.loads((fixture_dir / "expected_blame.json").read_text())
        assert report["intervals"] == expected["intervals"]

    def test_interval_without_high_findings_has_null_shares(
        self, fixture_dir, capsys
    ):
        _, stdout, _ = _run(
            ["blame", *_fixture_args(fixture_dir), "--snapshots", "5"],
            capsys,
        )
        first = json.loads(stdout)["intervals"][0]["blame"]
        assert first["high_findings"] == 0
        assert first["package_to_blame_share"] is None
        assert first["application_to_blame_share"] is None
        assert first["major_barrier_share"] is None


class TestStats:
    def _write_samples(self, tmp_path, x, y):
        x_file = tmp_path / "x.txt"
        y_file = tmp_path / "y.txt"
        x_file.write_text("\n".join(str(v) for v in x))
        y_file.write_text("\n".join(str(v) for v in y))
        return str(x_file), str(y_file)

    def test_worked_example(self, tmp_path, capsys):
        x_file, y_file = self._write_samples(tmp_path, [3, 4], [1, 2])
        code, stdout, _ = _run(["stats", x_file, y_file], capsys)
        assert code == 0
        result = json.loads(stdout)["result"]
        assert result["u_statistic"] == 4
        assert math.isclose(result["p_value"], 1 / 6)
        assert result["delta"] == 1.0
        assert result["magnitude"] == "large"

    def test_identical_files(self, tmp_path, capsys):
        x_file, y_file = self._write_samples(tmp_path, [1, 2, 3], [1, 2, 3])
        code, stdout, _ = _run(["stats", x_file, y_file], capsys)
        result = json.loads(stdout)["result"]
        assert result["delta"] == 0.0
        assert result["magnitude"] == "negligible"

    def test_separated_samples_render_floor(self, tmp_path, capsys):
        x_file, y_file = self._write_samples(
            tmp_path, [100 + i for i in range(60)], list(range(60))
        )
        code, stdout, _ = _run(["stats", x_file, y_file], capsys)
        assert json.loads(stdout)["result"]["p_value_rendered"] == "< 2.2e-16"

    def test_empty_sample_exits_1(self, tmp_path, capsys):
        x_file, y_file = self._write_samples(tmp_path, [], [1])
        code, _, stderr = _run(["stats", x_file, y_file], capsys)
        assert code == 1
        assert "non-empty" in stderr


class TestIngest:
    def test_validate_inputs(self, fixture_dir, capsys):
        code, stdout, _ = _run(
            [
                "ingest",
                "--registry", str(fixture_dir / "registry.json"),
                "--advisories", str(fixture_dir / "advisories.json"),
            ],
            capsys,
        )
        assert code == 0
        assert "6 packages" in stdout
        assert "9 reports read" in stdout
        assert "1 malicious-kind excluded" in stdout
        assert "8 retained" in stdout

    def test_repo_to_history_json(self, tmp_path, capsys):
        repo = tmp_path / "repo"
        repo.mkdir()
        env = {
            "GIT_AUTHOR_NAME": "T", "GIT_AUTHOR_EMAIL": "t@example.com",
            "GIT_COMMITTER_NAME": "T", "GIT_COMMITTER_EMAIL": "t@example.com",
            "GIT_AUTHOR_DATE": "2015-03-01T12:00:00+00:00",
            "GIT_COMMITTER_DATE": "2015-03-01T12:00:00+00:00",
            "HOME": str(tmp_path),
        }
        subprocess.run(["git", "-C", str(repo), "init", "-q"], check=True, env=env)
        (repo / "package.json").write_text('{"dependencies": {"a": "^1.0.0"}}')
        subprocess.run(["git", "-C", str(repo), "add", "-A"], check=True, env=env)
        subprocess.run(
            ["git", "-C", str(repo), "commit", "-q", "-m", "init"],
            check=True, env=env,
        )
        out = tmp_path / "history.json"
        code, _, _ = _run(
            ["ingest", "--repo", str(repo), "--application", "mined-app",
             "--out", str(out)],
            capsys,
        )
        assert code == 0
        document = json.loads(out.read_text())
        assert document["application"] == "mined-app"
        assert document["snapshots"][0]["dependencies"] == [
            {"package": "a", "constraint": "^1.0.0"}
        ]

    def test_invalid_registry_exits_1(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("[]")
        code, _, stderr = _run(["ingest", "--registry", str(bad)], capsys)
        assert code == 1
        assert "registry invalid" in stderr

    def test_requires_exactly_one_action(self, capsys):
        code, _, stderr = _run(["ingest"], capsys)
        assert code == 1


class TestUsage:
    def test_missing_required_flag_is_exit_1(self, capsys):
        code, _, _ = _run(["scan", "--at", "2016-05-01"], capsys)
        assert code == 1

    def test_no_history_sources(self, fixture_dir, capsys):
        code, _, stderr = _run(
            [
                "scan",
                "--registry", str(fixture_dir / "registry.json"),
                "--advisories", str(fixture_dir / "advisories.json"),
                "--at", "2016-05-01",
            ],
            capsys,
        )
        assert code == 1
        assert "--history" in stderr or "--repo" in stderr

    def test_console_entry_point(self, fixture_dir):
        result = subprocess.run(
            [sys.executable, "-m", "depthreat.cli", "--help"],
            capture_output=True,
            text=True,
        )
        assert result.returncode == 0
        assert "scan" in result.stdout
