"""Snapshot assessment: resolve, match, classify, aggregate, attribute.

For one application snapshot this module resolves every declared dependency
against the release index, matches the resolved versions against the advisory
store, grades each match on the three-step threat ladder, aggregates multiple
matches per dependency by taking the worst, and works out who is responsible
for the high-threat findings.

Boundary semantics, deliberately asymmetric: an advisory event at exactly t
counts as having occurred (knowledge is inclusive, erring toward higher
threat), while a registry release at exactly t is not yet installable
(availability is exclusive).

Everything here is a pure function over immutable inputs; per-application and
per-snapshot assessments can run fully in parallel.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from datetime import datetime

from .advisories import Advisory, AdvisoryStore, find_vulnerabilities
from .errors import NoSnapshotBeforeError, UnknownPackageError
from .history import DependencySpec, ManifestHistory, snapshot_at
from .registry import ReleaseIndex
from .semver import Version, VersionRange, satisfies


class ThreatLevel(enum.IntEnum):
    """How exploitable a matched vulnerability is at an instant: unknown to
    everyone (LOW), reported but unpublished (MEDIUM), public (HIGH).
    Distinct from severity; purely a function of the lifecycle clock."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3

    def render(self) -> str:
        return self.name.lower()


class BlameKind(enum.Enum):
    PACKAGE = "package-to-blame"
    APPLICATION = "application-to-blame"


@dataclass(frozen=True)
class Blame:
    """Responsibility for a high-threat finding. ``major_barrier`` is
    meaningful only for application-to-blame: every available safe version
    sits in a different major release than the resolved one."""

    kind: BlameKind
    major_barrier: bool = False


class ResolutionState(enum.Enum):
    RESOLVED = "resolved"
    UNRESOLVABLE = "unresolvable"
    UNKNOWN_PACKAGE = "unknown-package"
    UNSUPPORTED = "unsupported-specifier"
    MALFORMED = "malformed-range"


@dataclass(frozen=True)
class DependencyAssessment:
    spec: DependencySpec
    state: ResolutionState
    resolved: Version | None
    advisories_matched: tuple[tuple[Advisory, ThreatLevel], ...]
    overall: ThreatLevel | None  # None = not vulnerable (when resolved)
    blame: Blame | None

    @property
    def excluded(self) -> bool:
        return self.state is not ResolutionState.RESOLVED

    @property
    def vulnerable(self) -> bool:
        return self.overall is not None


@dataclass(frozen=True)
class SnapshotAssessment:
    application: str
    at: datetime
    commit_id: str
    assessments: tuple[DependencyAssessment, ...]

    @property
    def n_dependencies(self) -> int:
        """Resolved, non-excluded dependencies (the denominator)."""
        return sum(1 for a in self.assessments if not a.excluded)

    @property
    def m_vulnerable(self) -> int:
        return sum(1 for a in self.assessments if a.vulnerable)

    @property
    def per_level_counts(self) -> dict[ThreatLevel, int]:
        counts = {level: 0 for level in ThreatLevel}
        for assessment in self.assessments:
            if assessment.overall is not None:
                counts[assessment.overall] += 1
        return counts


def classify(advisory: Advisory, t: datetime) -> ThreatLevel:
    """Threat ladder at instant t: HIGH once published, MEDIUM once
    reported, LOW before anyone knows. A missing publication time means
    not-yet-published, never 'assume published'."""
    if advisory.published_at is not None and advisory.published_at <= t:
        return ThreatLevel.HIGH
    if advisory.reported_at <= t:
        return ThreatLevel.MEDIUM
    return ThreatLevel.LOW


def safe_versions_before(
    advisory: Advisory,
    index: ReleaseIndex,
    t: datetime,
    constraint: VersionRange | None = None,
) -> list[Version]:
    """Versions released strictly before t that the advisory's patched range
    accepts. A prerelease fix only counts when the application's constraint
    itself admits prereleases on that triple: an ordinary application could
    not have installed it otherwise."""
    if advisory.patched is None:
        return []
    try:
        releases = index.releases(advisory.package)
    except UnknownPackageError:
        return []
    safe = []
    for record in releases:
        if not (record.released_at < t):
            continue
        if not satisfies(record.version, advisory.patched):
            continue
        if record.version.prerelease and not _admits_prerelease(
            constraint, record.version
        ):
            continue
        safe.append(record.version)
    return safe


def _admits_prerelease(constraint: VersionRange | None, version: Version) -> bool:
    if constraint is None:
        return False
    for comparators in constraint.alternatives:
        for comparator in comparators:
            if (
                comparator.version.prerelease
                and comparator.version.triple == version.triple
            ):
                return True
    return False


def attribute_blame(
    advisory: Advisory,
    index: ReleaseIndex,
    resolved: Version,
    t: datetime,
    constraint: VersionRange | None = None,
) -> Blame:
    """For a published (high-threat) advisory: the package is to blame when
    no safe version existed before t; otherwise the application is to blame
    for not updating, with the major-barrier flag set when every safe
    version requires crossing a major release."""
    safe = safe_versions_before(advisory, index, t, constraint)
    if not safe:
        return Blame(BlameKind.PACKAGE)
    barrier = all(version.major != resolved.major for version in safe)
    return Blame(BlameKind.APPLICATION, major_barrier=barrier)


def _combine_blames(blames: list[Blame]) -> Blame:
    """Dependency-level verdict over the high-threat advisories: if any one
    of them has no fix, updating cannot fully protect the application, so
    the package side carries the blame; otherwise a single advisory whose
    fixes all live in another major already forces a major upgrade."""
    if any(blame.kind is BlameKind.PACKAGE for blame in blames):
        return Blame(BlameKind.PACKAGE)
    return Blame(
        BlameKind.APPLICATION,
        major_barrier=any(blame.major_barrier for blame in blames),
    )


def assess_dependency(
    index: ReleaseIndex,
    store: AdvisoryStore,
    spec: DependencySpec,
    t: datetime,
) -> DependencyAssessment:
    """Resolve one dependency at t and grade it. Never raises: every failure
    mode becomes an excluded assessment with its cause recorded."""
    if spec.constraint is None:
        state = (
            ResolutionState.UNSUPPORTED
            if spec.unsupported_reason == "unsupported-specifier"
            else ResolutionState.MALFORMED
        )
        return DependencyAssessment(spec, state, None, (), None, None)
    try:
        resolved = index.resolve_at(spec.package, spec.constraint, t)
    except UnknownPackageError:
        return DependencyAssessment(
            spec, ResolutionState.UNKNOWN_PACKAGE, None, (), None, None
        )
    if resolved is None:
        return DependencyAssessment(
            spec, ResolutionState.UNRESOLVABLE, None, (), None, None
        )

    matched = find_vulnerabilities(store, spec.package, resolved)
    graded = tuple((advisory, classify(advisory, t)) for advisory in matched)
    if not graded:
        return DependencyAssessment(
            spec, ResolutionState.RESOLVED, resolved, (), None, None
        )
    overall = max(level for _, level in graded)
    blame = None
    if overall is ThreatLevel.HIGH:
        blame = _combine_blames(
            [
                attribute_blame(advisory, index, resolved, t, spec.constraint)
                for advisory, level in graded
                if level is ThreatLevel.HIGH
            ]
        )
    return DependencyAssessment(
        spec, ResolutionState.RESOLVED, resolved, graded, overall, blame
    )


def assess_snapshot(
    index: ReleaseIndex,
    store: AdvisoryStore,
    history: ManifestHistory,
    t: datetime,
) -> SnapshotAssessment:
    """Assess every dependency declared in the manifest state in force
    at t. Raises NoSnapshotBeforeError when t precedes the history."""
    snapshot = snapshot_at(history, t)
    if snapshot is None:
        raise NoSnapshotBeforeError(
            f"{history.application!r} has no manifest at or before {t.isoformat()}"
        )
    assessments = tuple(
        assess_dependency(index, store, spec, t) for spec in snapshot.dependencies
    )
    return SnapshotAssessment(
        application=history.application,
        at=t,
        commit_id=snapshot.commit_id,
        assessments=assessments,
    )
