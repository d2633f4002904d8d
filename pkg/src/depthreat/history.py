"""Dependency-change timelines of applications.

A ManifestHistory is the time-ordered sequence of production-dependency lists
extracted from an application's manifest changes, either mined from a git
repository or loaded from a pre-exported history-json file. Only production
dependencies participate: development dependencies never reach production.
"""

from __future__ import annotations

import bisect
import json
import logging
import subprocess
from dataclasses import dataclass
from datetime import datetime
from typing import IO

from .errors import (
    FormatError,
    ManifestParseError,
    NoManifestHistoryError,
    NotARepositoryError,
    RangeParseError,
    UnsupportedSpecifierError,
)
from .semver import VersionRange, parse_range
from .timeutil import parse_rfc3339, render_rfc3339

logger = logging.getLogger(__name__)

MANIFEST_NAME = "package.json"


@dataclass(frozen=True)
class DependencySpec:
    """One declared dependency. ``constraint`` is None when the raw
    specifier is not a semver range; ``constraint_text`` is always kept
    verbatim for audit."""

    package: str
    constraint_text: str
    constraint: VersionRange | None
    unsupported_reason: str | None = None


@dataclass(frozen=True)
class ManifestSnapshot:
    commit_id: str
    committed_at: datetime
    dependencies: tuple[DependencySpec, ...]


@dataclass(frozen=True)
class ManifestHistory:
    application: str
    snapshots: tuple[ManifestSnapshot, ...]
    first_commit_at: datetime
    last_commit_at: datetime
    total_commits: int
    contributors: int

    def __post_init__(self):
        if not self.snapshots:
            raise FormatError(f"history of {self.application!r} has no snapshots")
        for snapshot in self.snapshots:
            if not (
                self.first_commit_at <= snapshot.committed_at <= self.last_commit_at
            ):
                raise FormatError(
                    f"snapshot {snapshot.commit_id} of {self.application!r} "
                    "falls outside the commit lifespan"
                )


def parse_manifest(content: bytes | str) -> list[DependencySpec]:
    """Extract production dependencies from manifest file content.

    The development-dependency map is ignored entirely; with the production
    map taking the name, an overlapping development entry never surfaces.
    Unparseable constraints are carried as unsupported, not dropped.
    """
    try:
        document = json.loads(content)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ManifestParseError(f"manifest is not JSON: {exc}") from None
    if not isinstance(document, dict):
        raise ManifestParseError("manifest root must be an object")
    dependencies = document.get("dependencies", {})
    if not isinstance(dependencies, dict):
        raise ManifestParseError('manifest "dependencies" must be an object')
    specs = []
    for package, constraint_text in dependencies.items():
        if not isinstance(constraint_text, str):
            raise ManifestParseError(
                f"constraint of {package!r} must be a string"
            )
        specs.append(_make_spec(package, constraint_text))
    return specs


def _make_spec(package: str, constraint_text: str) -> DependencySpec:
    try:
        constraint = parse_range(constraint_text)
        reason = None
    except UnsupportedSpecifierError:
        constraint = None
        reason = "unsupported-specifier"
    except RangeParseError:
        constraint = None
        reason = "malformed-range"
    return DependencySpec(package, constraint_text, constraint, reason)


def snapshot_at(history: ManifestHistory, t: datetime) -> ManifestSnapshot | None:
    """Latest snapshot committed at or before ``t``; None when ``t``
    precedes the first snapshot."""
    times = [snapshot.committed_at for snapshot in history.snapshots]
    position = bisect.bisect_right(times, t)
    if position == 0:
        return None
    return history.snapshots[position - 1]


@dataclass(frozen=True)
class MaturityCriteria:
    """Activity thresholds an application must meet to enter a cohort.
    None disables a criterion."""

    min_commits: int | None = None
    min_contributors: int | None = None
    min_dependencies: int | None = None
    created_before: datetime | None = None
    active_after: datetime | None = None


# thresholds used by the shipped "paper-2019" preset: >=100 commits, more
# than two contributors, more than two dependencies, created before 2017,
# still active after the start of 2017
def paper_2019_criteria() -> MaturityCriteria:
    cutoff = parse_rfc3339("2017-01-01T00:00:00Z")
    return MaturityCriteria(
        min_commits=100,
        min_contributors=3,
        min_dependencies=3,
        created_before=cutoff,
        active_after=cutoff,
    )


def passes_maturity_filter(
    history: ManifestHistory, criteria: MaturityCriteria
) -> tuple[bool, list[str]]:
    """True plus an empty list, or False plus one reason per failed
    criterion. The dependency count is taken from the final snapshot."""
    reasons = []
    if criteria.min_commits is not None and history.total_commits < criteria.min_commits:
        reasons.append("min_commits")
    if (
        criteria.min_contributors is not None
        and history.contributors < criteria.min_contributors
    ):
        reasons.append("min_contributors")
    if criteria.min_dependencies is not None:
        final_count = len(history.snapshots[-1].dependencies)
        if final_count < criteria.min_dependencies:
            reasons.append("min_dependencies")
    if (
        criteria.created_before is not None
        and history.first_commit_at >= criteria.created_before
    ):
        reasons.append("created_before")
    if (
        criteria.active_after is not None
        and history.last_commit_at <= criteria.active_after
    ):
        reasons.append("active_after")
    return not reasons, reasons


# -- history-json ------------------------------------------------------------


def load_history(source: IO) -> ManifestHistory:
    """Load the history-json format. Out-of-order snapshots are sorted with
    a warning; duplicate package names within one snapshot are an error."""
    try:
        document = json.load(source)
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"history file is not valid JSON: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from None
    if not isinstance(document, dict):
        raise FormatError("history file must be a JSON object")
    for required in (
        "application",
        "total_commits",
        "contributors",
        "first_commit_at",
        "last_commit_at",
        "snapshots",
    ):
        if required not in document:
            raise FormatError(f"history file is missing {required!r}")
    if not isinstance(document["snapshots"], list) or not document["snapshots"]:
        raise FormatError("history file needs a non-empty snapshots list")

    snapshots = []
    for position, entry in enumerate(document["snapshots"]):
        if not isinstance(entry, dict):
            raise FormatError(f"snapshot #{position} is not an object")
        dependencies = entry.get("dependencies")
        if not isinstance(dependencies, list):
            raise FormatError(f"snapshot #{position} needs a dependencies list")
        specs = []
        seen = set()
        for dep in dependencies:
            if not isinstance(dep, dict) or "package" not in dep or "constraint" not in dep:
                raise FormatError(
                    f"snapshot #{position}: dependencies need package/constraint"
                )
            if dep["package"] in seen:
                raise FormatError(
                    f"snapshot #{position}: duplicate package {dep['package']!r}"
                )
            seen.add(dep["package"])
            specs.append(_make_spec(dep["package"], dep["constraint"]))
        snapshots.append(
            ManifestSnapshot(
                commit_id=str(entry.get("commit_id", f"snapshot-{position}")),
                committed_at=parse_rfc3339(entry["committed_at"]),
                dependencies=tuple(specs),
            )
        )

    ordered = sorted(snapshots, key=lambda s: s.committed_at)
    if [s.commit_id for s in ordered] != [s.commit_id for s in snapshots]:
        logger.warning(
            "history of %r was not sorted by commit time; sorted on load",
            document["application"],
        )
    return ManifestHistory(
        application=document["application"],
        snapshots=tuple(ordered),
        first_commit_at=parse_rfc3339(document["first_commit_at"]),
        last_commit_at=parse_rfc3339(document["last_commit_at"]),
        total_commits=int(document["total_commits"]),
        contributors=int(document["contributors"]),
    )


def render_history(history: ManifestHistory) -> dict:
    """Inverse of load_history; used to export mined repositories."""
    return {
        "application": history.application,
        "total_commits": history.total_commits,
        "contributors": history.contributors,
        "first_commit_at": render_rfc3339(history.first_commit_at),
        "last_commit_at": render_rfc3339(history.last_commit_at),
        "snapshots": [
            {
                "commit_id": snapshot.commit_id,
                "committed_at": render_rfc3339(snapshot.committed_at),
                "dependencies": [
                    {"package": spec.package, "constraint": spec.constraint_text}
                    for spec in snapshot.dependencies
                ],
            }
            for snapshot in history.snapshots
        ],
    }


# -- git mining --------------------------------------------------------------


def _git(repo_path: str, *args: str) -> str:
    result = subprocess.run(
        ["git", "-C", repo_path, *args],
        capture_output=True,
        text=True,
    )
    if result.returncode != 0:
        raise subprocess.CalledProcessError(
            result.returncode, result.args, result.stdout, result.stderr
        )
    return result.stdout


def extract_history(repo_path: str, application: str | None = None) -> ManifestHistory:
    """Mine a git repository for its manifest-change timeline.

    One snapshot per commit that touched the root manifest, each carrying
    the commit hash and committer date (UTC). Contributor identity is the
    distinct author email. Commits where the manifest is absent (deleted)
    are skipped with a warning.
    """
    try:
        _git(repo_path, "rev-parse", "--git-dir")
    except (subprocess.CalledProcessError, FileNotFoundError, NotADirectoryError):
        raise NotARepositoryError(repo_path) from None

    commit_dates = _git(repo_path, "log", "--format=%cI").splitlines()
    total_commits = len(commit_dates)
    emails = _git(repo_path, "log", "--format=%ae").splitlines()
    contributors = len(set(emails))
    first_commit_at = parse_rfc3339(commit_dates[-1])
    last_commit_at = parse_rfc3339(commit_dates[0])

    manifest_log = _git(
        repo_path, "log", "--format=%H %cI", "--", MANIFEST_NAME
    ).splitlines()
    if not manifest_log:
        raise NoManifestHistoryError(
            f"no commit in {repo_path!r} ever touched {MANIFEST_NAME}"
        )

    snapshots = []
    for line in manifest_log:
        commit_id, committed_text = line.split(" ", 1)
        try:
            content = _git(repo_path, "show", f"{commit_id}:{MANIFEST_NAME}")
        except subprocess.CalledProcessError:
            logger.warning(
                "manifest absent at commit %s (deleted); snapshot skipped",
                commit_id,
            )
            continue
        try:
            dependencies = parse_manifest(content)
        except ManifestParseError as exc:
            logger.warning("manifest at commit %s unusable: %s", commit_id, exc)
            continue
        snapshots.append(
            ManifestSnapshot(
                commit_id=commit_id,
                committed_at=parse_rfc3339(committed_text),
                dependencies=tuple(dependencies),
            )
        )
    if not snapshots:
        raise NoManifestHistoryError(
            f"no readable manifest revision found in {repo_path!r}"
        )
    snapshots.sort(key=lambda s: s.committed_at)

    if application is None:
        application = repo_path.rstrip("/").rsplit("/", 1)[-1]
    return ManifestHistory(
        application=application,
        snapshots=tuple(snapshots),
        first_commit_at=first_commit_at,
        last_commit_at=last_commit_at,
        total_commits=total_commits,
        contributors=contributors,
    )
