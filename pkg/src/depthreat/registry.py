"""Per-package release timelines and point-in-time version resolution.

A ReleaseIndex answers "what would npm have installed at time t": the
highest-precedence version satisfying the constraint among releases published
strictly before t. The index is immutable after ingestion, so concurrent
read-only queries need no coordination.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import IO, Iterable, Mapping

import requests

from .errors import (
    DuplicateReleaseError,
    FormatError,
    MalformedVersionError,
    MetadataParseError,
    NetworkError,
    PackumentNotFoundError,
    UnknownPackageError,
)
from .semver import Version, VersionRange, parse_version
from .semver._backend import kernel
from .timeutil import parse_rfc3339, render_rfc3339

logger = logging.getLogger(__name__)

# packument "time" entries that are not release timestamps
_PACKUMENT_META_KEYS = ("created", "modified")


@dataclass(frozen=True)
class ReleaseRecord:
    version: Version
    released_at: datetime


class _PackageTimeline:
    """Release records of one package, sorted by version precedence, plus
    the parallel arrays the comparator kernel scans."""

    __slots__ = ("records", "_keys", "_has_pres", "_triples", "_epochs")

    def __init__(self, records: list[ReleaseRecord]):
        records = sorted(records, key=lambda r: r.version.key)
        self.records = tuple(records)
        self._keys = [r.version.key for r in records]
        self._has_pres = [bool(r.version.prerelease) for r in records]
        self._triples = [r.version.triple for r in records]
        self._epochs = [r.released_at.timestamp() for r in records]

    def best_before(self, constraint: VersionRange, t: datetime) -> Version | None:
        index = kernel.best_match(
            self._keys,
            self._has_pres,
            self._triples,
            self._epochs,
            t.timestamp(),
            constraint._encoded,
        )
        if index < 0:
            return None
        return self.records[index].version


@dataclass(frozen=True)
class ReleaseIndex:
    """Map from package name to its release timeline. Names are exact and
    case-sensitive, npm-style."""

    _timelines: Mapping[str, _PackageTimeline] = field(default_factory=dict)

    @classmethod
    def from_records(
        cls, packages: Mapping[str, Iterable[ReleaseRecord]]
    ) -> "ReleaseIndex":
        timelines = {}
        for name, records in packages.items():
            records = list(records)
            seen = set()
            for record in records:
                rendered = record.version.render()
                if rendered in seen:
                    raise DuplicateReleaseError(
                        f"duplicate release {name}@{rendered}"
                    )
                seen.add(rendered)
            timelines[name] = _PackageTimeline(records)
        return cls(timelines)

    def __contains__(self, package: str) -> bool:
        return package in self._timelines

    def package_names(self) -> list[str]:
        return sorted(self._timelines)

    def releases(self, package: str) -> tuple[ReleaseRecord, ...]:
        try:
            return self._timelines[package].records
        except KeyError:
            raise UnknownPackageError(package) from None

    def resolve_at(
        self, package: str, constraint: VersionRange, t: datetime
    ) -> Version | None:
        """Highest-precedence version satisfying ``constraint`` among
        releases published strictly before ``t``; None when the package is
        known but nothing satisfies.

        Raises UnknownPackageError when the package is absent, which callers
        must report distinctly from an unresolvable constraint.
        """
        try:
            timeline = self._timelines[package]
        except KeyError:
            raise UnknownPackageError(package) from None
        return timeline.best_before(constraint, t)


def resolve_at(
    index: ReleaseIndex, package: str, constraint: VersionRange, t: datetime
) -> Version | None:
    return index.resolve_at(package, constraint, t)


def ingest_registry_dump(source: IO) -> ReleaseIndex:
    """Load the release-index-json format:

        {"packages": {"<name>": [{"version": "1.0.0",
                                  "released_at": "2015-01-01T00:00:00Z"}, ...]}}

    Duplicate (package, version) pairs and malformed entries are rejected;
    this is our own interchange format, so it is strict.
    """
    try:
        document = json.load(source)
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"release index is not valid JSON: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from None
    if not isinstance(document, dict) or not isinstance(
        document.get("packages"), dict
    ):
        raise FormatError('release index must be {"packages": {...}}')
    packages: dict[str, list[ReleaseRecord]] = {}
    for name, entries in document["packages"].items():
        if not name or not isinstance(name, str):
            raise FormatError(f"invalid package name {name!r}")
        if not isinstance(entries, list):
            raise FormatError(f"releases of {name!r} must be a list")
        records = []
        for entry in entries:
            if not isinstance(entry, dict) or set(entry) != {
                "version",
                "released_at",
            }:
                raise FormatError(
                    f"release of {name!r} must have exactly "
                    f"version/released_at: {entry!r}"
                )
            try:
                version = parse_version(entry["version"])
            except MalformedVersionError as exc:
                raise FormatError(f"package {name!r}: {exc}") from None
            records.append(
                ReleaseRecord(
                    version=version,
                    released_at=parse_rfc3339(entry["released_at"]),
                )
            )
        packages[name] = records
    return ReleaseIndex.from_records(packages)


def render_registry_dump(index: ReleaseIndex) -> dict:
    """Inverse of ingest_registry_dump (modulo per-package sort order)."""
    return {
        "packages": {
            name: [
                {
                    "version": record.version.render(),
                    "released_at": render_rfc3339(record.released_at),
                }
                for record in index.releases(name)
            ]
            for name in index.package_names()
        }
    }


def fetch_packument(endpoint: str, package: str, *, timeout: float = 30.0) -> list[ReleaseRecord]:
    """Fetch release records from an npm-registry-compatible endpoint.

    Reads the packument's top-level "time" map, skipping the created/modified
    meta entries. Unparseable version keys are skipped with a warning: real
    registries contain legacy garbage and analysis must proceed.
    """
    url = endpoint.rstrip("/") + "/" + package
    try:
        response = requests.get(url, timeout=timeout)
    except requests.RequestException as exc:
        raise NetworkError(f"cannot reach {url}: {exc}") from None
    if response.status_code == 404:
        raise PackumentNotFoundError(package)
    if response.status_code != 200:
        raise NetworkError(f"{url} returned HTTP {response.status_code}")
    try:
        document = response.json()
    except ValueError as exc:
        raise MetadataParseError(f"packument for {package!r} is not JSON: {exc}")
    time_map = document.get("time") if isinstance(document, dict) else None
    if not isinstance(time_map, dict):
        raise MetadataParseError(f'packument for {package!r} lacks a "time" map')
    records = []
    for version_text, released_text in time_map.items():
        if version_text in _PACKUMENT_META_KEYS:
            continue
        try:
            version = parse_version(version_text)
        except Exception:
            logger.warning(
                "skipping unparseable version %r of package %r",
                version_text,
                package,
            )
            continue
        records.append(
            ReleaseRecord(version=version, released_at=parse_rfc3339(released_text))
        )
    return records
