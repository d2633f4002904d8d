"""Manifest parsing, history loading, git mining, and the maturity filter."""

import io
import json
import shutil
import subprocess
from datetime import datetime, timedelta, timezone

import pytest

from depthreat.errors import (
    FormatError,
    ManifestParseError,
    NoManifestHistoryError,
    NotARepositoryError,
)
from depthreat.history import (
    ManifestHistory,
    ManifestSnapshot,
    MaturityCriteria,
    extract_history,
    load_history,
    paper_2019_criteria,
    parse_manifest,
    passes_maturity_filter,
    render_history,
    snapshot_at,
)

UTC = timezone.utc

git_available = pytest.mark.skipif(
    shutil.which("git") is None, reason="git not installed"
)


class TestParseManifest:
    def test_production_only(self):
        specs = parse_manifest(
            json.dumps(
                {"dependencies": {"a": "^1.0.0"}, "devDependencies": {"b": "*"}}
            )
        )
        assert [(s.package, s.constraint_text) for s in specs] == [("a", "^1.0.0")]

    def test_empty_map(self):
        assert parse_manifest(json.dumps({"dependencies": {}})) == []

    def test_missing_map(self):
        assert parse_manifest(json.dumps({"name": "app"})) == []

    def test_unsupported_specifier_carried(self):
        (spec,) = parse_manifest(
            json.dumps({"dependencies": {"a": "git+https://example.com/a.git"}})
        )
        assert spec.constraint is None
        assert spec.unsupported_reason == "unsupported-specifier"
        assert spec.constraint_text == "git+https://example.com/a.git"

    def test_overlapping_name_production_wins(self):
        specs = parse_manifest(
            json.dumps(
                {
                    "dependencies": {"a": "^2.0.0"},
                    "devDependencies": {"a": "^1.0.0", "b": "*"},
                }
            )
        )
        assert [(s.package, s.constraint_text) for s in specs] == [("a", "^2.0.0")]

    def test_not_json(self):
        with pytest.raises(ManifestParseError):
            parse_manifest(b"not json {")

    def test_wrong_shape(self):
        with pytest.raises(ManifestParseError):
            parse_manifest(json.dumps({"dependencies": ["a"]}))


def _history_doc(**overrides):
    doc = {
        "application": "app",
        "total_commits": 120,
        "contributors": 4,
        "first_commit_at": "2015-01-01T00:00:00Z",
        "last_commit_at": "2017-06-01T00:00:00Z",
        "snapshots": [
            {
                "commit_id": "c1",
                "committed_at": "2015-02-01T00:00:00Z",
                "dependencies": [{"package": "a", "constraint": "^1.0.0"}],
            },
            {
                "commit_id": "c2",
                "committed_at": "2016-02-01T00:00:00Z",
                "dependencies": [
                    {"package": "a", "constraint": "^1.0.0"},
                    {"package": "b", "constraint": "~2.0.0"},
                ],
            },
        ],
    }
    doc.update(overrides)
    return doc


def _load(doc):
    return load_history(io.BytesIO(json.dumps(doc).encode()))


class TestLoadHistory:
    def test_minimal(self):
        history = _load(_history_doc())
        assert history.application == "app"
        assert len(history.snapshots) == 2

    def test_out_of_order_sorted_with_warning(self, caplog):
        doc = _history_doc()
        doc["snapshots"].reverse()
        history = _load(doc)
        assert [s.commit_id for s in history.snapshots] == ["c1", "c2"]
        assert any("not sorted" in message for message in caplog.messages)

    def test_duplicate_package_rejected(self):
        doc = _history_doc()
        doc["snapshots"][0]["dependencies"].append(
            {"package": "a", "constraint": "*"}
        )
        with pytest.raises(FormatError):
            _load(doc)

    def test_missing_field_rejected(self):
        doc = _history_doc()
        del doc["contributors"]
        with pytest.raises(FormatError):
            _load(doc)

    def test_snapshot_outside_lifespan_rejected(self):
        doc = _history_doc(first_commit_at="2015-03-01T00:00:00Z")
        with pytest.raises(FormatError):
            _load(doc)

    def test_render_round_trip(self):
        doc = _history_doc()
        history = _load(doc)
        assert render_history(history) == doc


class TestSnapshotAt:
    def _history(self):
        return _load(_history_doc())

    def test_between_snapshots(self):
        snapshot = snapshot_at(self._history(), datetime(2015, 6, 1, tzinfo=UTC))
        assert snapshot.commit_id == "c1"

    def test_exactly_at_commit_instant(self):
        snapshot = snapshot_at(self._history(), datetime(2016, 2, 1, tzinfo=UTC))
        assert snapshot.commit_id == "c2"

    def test_before_first_is_none(self):
        assert snapshot_at(self._history(), datetime(2015, 1, 15, tzinfo=UTC)) is None

    def test_right_continuous_against_linear_scan(self):
        history = self._history()
        t = datetime(2015, 1, 20, tzinfo=UTC)
        while t < datetime(2016, 6, 1, tzinfo=UTC):
            expected = None
            for snapshot in history.snapshots:
                if snapshot.committed_at <= t:
                    expected = snapshot
            assert snapshot_at(history, t) is expected
            t += timedelta(days=11, hours=7)


class TestMaturityFilter:
    def _history(self, commits=150, contributors=4, dependencies=3,
                 first="2016-06-01T00:00:00Z", last="2017-06-01T00:00:00Z"):
        deps = [
            {"package": f"p{i}", "constraint": "^1.0.0"} for i in range(dependencies)
        ]
        return _load(
            _history_doc(
                total_commits=commits,
                contributors=contributors,
                first_commit_at=first,
                last_commit_at=last,
                snapshots=[
                    {
                        "commit_id": "c1",
                        "committed_at": first,
                        "dependencies": deps,
                    }
                ],
            )
        )

    def test_paper_thresholds_pass(self):
        history = self._history(commits=100, contributors=3, dependencies=3)
        passed, reasons = passes_maturity_filter(history, paper_2019_criteria())
        assert passed and reasons == []

    def test_commit_boundary(self):
        history = self._history(commits=99, contributors=3, dependencies=3)
        passed, reasons = passes_maturity_filter(history, paper_2019_criteria())
        assert not passed and reasons == ["min_commits"]

    def test_more_than_two_contributors_is_strict(self):
        history = self._history(contributors=2)
        passed, reasons = passes_maturity_filter(history, paper_2019_criteria())
        assert not passed and reasons == ["min_contributors"]

    def test_more_than_two_dependencies_is_strict(self):
        history = self._history(dependencies=2)
        passed, reasons = passes_maturity_filter(history, paper_2019_criteria())
        assert not passed and reasons == ["min_dependencies"]

    def test_created_before_is_strict(self):
        history = self._history(
            first="2017-01-01T00:00:00Z", last="2017-06-01T00:00:00Z"
        )
        passed, reasons = passes_maturity_filter(history, paper_2019_criteria())
        assert not passed and "created_before" in reasons

    def test_active_after_is_strict(self):
        history = self._history(
            first="2015-01-01T00:00:00Z", last="2017-01-01T00:00:00Z"
        )
        passed, reasons = passes_maturity_filter(history, paper_2019_criteria())
        assert not passed and "active_after" in reasons

    def test_disabled_criteria_skipped(self):
        history = self._history(commits=5, contributors=1)
        passed, _ = passes_maturity_filter(history, MaturityCriteria())
        assert passed

    def test_multiple_reasons_listed(self):
        history = self._history(commits=5, contributors=1, dependencies=1)
        _, reasons = passes_maturity_filter(history, paper_2019_criteria())
        assert reasons == ["min_commits", "min_contributors", "min_dependencies"]


# -- git mining ---------------------------------------------------------------

# (commit message, manifest content or None to skip touching it, author)
EDIT_SCRIPT = [
    ("init", {"dependencies": {"left-pad": "^1.0.0"}}, "ana@example.com"),
    ("docs", None, "ana@example.com"),
    (
        "add dep",
        {"dependencies": {"left-pad": "^1.0.0", "express": "~4.0.0"}},
        "bob@example.com",
    ),
    ("refactor", None, "cole@example.com"),
    (
        "pin dep",
        {"dependencies": {"left-pad": "=1.2.0", "express": "~4.0.0"}},
        "ana@example.com",
    ),
]


@pytest.fixture()
def fixture_repo(tmp_path):
    repo = tmp_path / "repo"
    repo.mkdir()

    def run(*args, **env_dates):
        env = {
            "GIT_AUTHOR_NAME": "Tester",
            "GIT_COMMITTER_NAME": "Tester",
            "GIT_COMMITTER_EMAIL": "tester@example.com",
            "HOME": str(tmp_path),
        }
        env.update(env_dates)
        subprocess.run(
            ["git", "-C", str(repo), *args],
            check=True,
            capture_output=True,
            env=env,
        )

    run("init", "-q")
    base = datetime(2015, 3, 1, 12, 0, 0, tzinfo=UTC)
    expected_snapshots = []
    for position, (message, manifest, author) in enumerate(EDIT_SCRIPT):
        when = base + timedelta(days=30 * position)
        stamp = when.strftime("%Y-%m-%dT%H:%M:%S+00:00")
        if manifest is not None:
            (repo / "package.json").write_text(json.dumps(manifest))
            expected_snapshots.append((when, manifest))
        (repo / "notes.txt").write_text(message)
        run("add", "-A")
        run(
            "commit",
            "-q",
            "-m",
            message,
            GIT_AUTHOR_EMAIL=author,
            GIT_AUTHOR_DATE=stamp,
            GIT_COMMITTER_DATE=stamp,
        )
    return repo, expected_snapshots


@git_available
class TestExtractHistory:
    def test_matches_edit_script(self, fixture_repo):
        repo, expected = fixture_repo
        history = extract_history(str(repo))
        assert history.total_commits == len(EDIT_SCRIPT)
        assert history.contributors == 3  # distinct author emails
        assert len(history.snapshots) == len(expected)
        for snapshot, (when, manifest) in zip(history.snapshots, expected):
            assert snapshot.committed_at == when
            declared = {
                spec.package: spec.constraint_text for spec in snapshot.dependencies
            }
            assert declared == manifest["dependencies"]

    def test_agrees_with_exported_history(self, fixture_repo):
        repo, _ = fixture_repo
        mined = extract_history(str(repo), application="app")
        exported = render_history(mined)
        loaded = load_history(io.BytesIO(json.dumps(exported).encode()))
        assert loaded == mined

    def test_not_a_repository(self, tmp_path):
        with pytest.raises(NotARepositoryError):
            extract_history(str(tmp_path / "nowhere"))

    def test_no_manifest_history(self, tmp_path):
        repo = tmp_path / "bare"
        repo.mkdir()
        env = {
            "GIT_AUTHOR_NAME": "T",
            "GIT_AUTHOR_EMAIL": "t@example.com",
            "GIT_COMMITTER_NAME": "T",
            "GIT_COMMITTER_EMAIL": "t@example.com",
            "HOME": str(tmp_path),
        }
        subprocess.run(["git", "-C", str(repo), "init", "-q"], check=True, env=env)
        (repo / "readme.md").write_text("hi")
        subprocess.run(["git", "-C", str(repo), "add", "-A"], check=True, env=env)
        subprocess.run(
            ["git", "-C", str(repo), "commit", "-q", "-m", "init"],
            check=True,
            env=env,
        )
        with pytest.raises(NoManifestHistoryError):
            extract_history(str(repo))
