"""Vulnerability reports and version matching.

Advisories carry the two lifecycle instants the classifier needs (reported_at,
published_at) plus affected/patched ranges in node-semver syntax. Adapters
for upstream schemas must normalize their range syntax before ingestion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from typing import IO, Iterable, Mapping

from .errors import DuplicateAdvisoryIdError, FormatError, RangeParseError
from .semver import Version, VersionRange, parse_range, satisfies
from .timeutil import parse_rfc3339, render_rfc3339

# advisories of this kind are typo-squats, not vulnerable code; they are
# dropped at ingest and tallied in the curation report
MALICIOUS_PACKAGE_KIND = "Malicious Package"


@dataclass(frozen=True)
class Advisory:
    id: str
    package: str
    title: str
    kind: str
    affected: VersionRange
    patched: VersionRange | None
    reported_at: datetime
    published_at: datetime | None

    # raw range texts kept for faithful re-serialization
    affected_text: str = field(default="", compare=False)
    patched_text: str | None = field(default=None, compare=False)


@dataclass(frozen=True)
class CurationReport:
    total_advisories: int
    excluded_advisories: int
    excluded_packages: tuple[str, ...]
    overlap_warnings: tuple[str, ...]

    @property
    def retained_advisories(self) -> int:
        return self.total_advisories - self.excluded_advisories


@dataclass(frozen=True)
class AdvisoryStore:
    """Advisories grouped by package; ids unique store-wide; per-package
    lists id-ordered for deterministic output."""

    by_package: Mapping[str, tuple[Advisory, ...]]

    @classmethod
    def from_advisories(cls, advisories: Iterable[Advisory]) -> "AdvisoryStore":
        grouped: dict[str, list[Advisory]] = {}
        seen_ids = set()
        for advisory in advisories:
            if advisory.id in seen_ids:
                raise DuplicateAdvisoryIdError(f"duplicate advisory id {advisory.id!r}")
            seen_ids.add(advisory.id)
            grouped.setdefault(advisory.package, []).append(advisory)
        return cls(
            {
                package: tuple(sorted(group, key=lambda a: a.id))
                for package, group in grouped.items()
            }
        )

    def __len__(self) -> int:
        return sum(len(group) for group in self.by_package.values())

    def packages(self) -> list[str]:
        return sorted(self.by_package)

    def advisories_for(self, package: str) -> tuple[Advisory, ...]:
        return self.by_package.get(package, ())


def find_vulnerabilities(
    store: AdvisoryStore, package: str, version: Version
) -> list[Advisory]:
    """All advisories for the package whose affected range the version
    satisfies, in id order. Empty list means not vulnerable."""
    return [
        advisory
        for advisory in store.advisories_for(package)
        if satisfies(version, advisory.affected)
    ]


def ingest_advisories(source: IO) -> tuple[AdvisoryStore, CurationReport]:
    """Load the advisories-json format (an array of advisory objects) and
    curate it: advisories of the malicious-package kind are excluded and
    counted, and advisories whose affected and patched ranges can overlap
    are flagged as warnings (anomalous timelines are accepted verbatim)."""
    try:
        document = json.load(source)
    except json.JSONDecodeError as exc:
        raise FormatError(
            f"advisories file is not valid JSON: {exc.msg}",
            line=exc.lineno,
            column=exc.colno,
        ) from None
    if not isinstance(document, list):
        raise FormatError("advisories file must be a JSON array")

    retained: list[Advisory] = []
    excluded = 0
    excluded_packages: list[str] = []
    warnings: list[str] = []
    for position, entry in enumerate(document):
        advisory = _parse_advisory_entry(entry, position)
        if advisory.kind == MALICIOUS_PACKAGE_KIND:
            excluded += 1
            if advisory.package not in excluded_packages:
                excluded_packages.append(advisory.package)
            continue
        if advisory.patched is not None and _ranges_may_overlap(
            advisory.affected, advisory.patched
        ):
            warnings.append(
                f"advisory {advisory.id}: affected and patched ranges overlap"
            )
        retained.append(advisory)

    store = AdvisoryStore.from_advisories(retained)
    report = CurationReport(
        total_advisories=len(document),
        excluded_advisories=excluded,
        excluded_packages=tuple(excluded_packages),
        overlap_warnings=tuple(warnings),
    )
    return store, report


def _parse_advisory_entry(entry, position: int) -> Advisory:
    if not isinstance(entry, dict):
        raise FormatError(f"advisory #{position} is not an object")
    for required in ("id", "package", "affected", "reported_at"):
        if entry.get(required) in (None, ""):
            raise FormatError(f"advisory #{position} is missing {required!r}")
    try:
        affected = parse_range(entry["affected"])
        patched_text = entry.get("patched")
        patched = parse_range(patched_text) if patched_text is not None else None
    except RangeParseError as exc:
        raise FormatError(f"advisory {entry['id']!r}: {exc}") from None
    published_text = entry.get("published_at")
    return Advisory(
        id=str(entry["id"]),
        package=entry["package"],
        title=entry.get("title", ""),
        kind=entry.get("kind", ""),
        affected=affected,
        patched=patched,
        reported_at=parse_rfc3339(entry["reported_at"]),
        published_at=(
            parse_rfc3339(published_text) if published_text is not None else None
        ),
        affected_text=entry["affected"],
        patched_text=patched_text,
    )


def render_advisory_store(store: AdvisoryStore) -> list[dict]:
    """Inverse of ingest_advisories for the retained set; re-ingesting the
    rendered output is a no-op (curation is idempotent)."""
    rendered = []
    for package in store.packages():
        for advisory in store.advisories_for(package):
            rendered.append(
                {
                    "id": advisory.id,
                    "package": advisory.package,
                    "title": advisory.title,
                    "kind": advisory.kind,
                    "affected": advisory.affected_text or advisory.affected.render(),
                    "patched": (
                        advisory.patched_text
                        if advisory.patched_text is not None
                        else (advisory.patched.render() if advisory.patched else None)
                    ),
                    "reported_at": render_rfc3339(advisory.reported_at),
                    "published_at": (
                        render_rfc3339(advisory.published_at)
                        if advisory.published_at
                        else None
                    ),
                }
            )
    return rendered


# -- range overlap heuristic -------------------------------------------------

_LOWEST = Version(0, 0, 0, (0,))


def _ranges_may_overlap(a: VersionRange, b: VersionRange) -> bool:
    """Conservative interval check on the primitive comparators; ignores the
    prerelease-exclusion rule, so it can flag overlaps that evaluation would
    exclude. Good enough for an ingest warning."""
    for set_a in a.alternatives:
        for set_b in b.alternatives:
            if _comparator_sets_may_overlap(set_a, set_b):
                return True
    return False


def _comparator_sets_may_overlap(set_a, set_b) -> bool:
    lower = (_LOWEST, True)  # (bound, inclusive)
    upper: tuple[Version, bool] | None = None
    pins: list[Version] = []
    for comparator in (*set_a, *set_b):
        op, version = comparator.op, comparator.version
        if op == "=":
            pins.append(version)
        elif op in (">", ">="):
            candidate = (version, op == ">=")
            if candidate[0] > lower[0] or (candidate[0] == lower[0] and not candidate[1]):
                lower = candidate
        else:  # < or <=
            candidate = (version, op == "<=")
            if upper is None or candidate[0] < upper[0] or (
                candidate[0] == upper[0] and not candidate[1]
            ):
                upper = candidate
    if pins:
        if any(pin.key != pins[0].key for pin in pins):
            return False
        pin = pins[0]
        below = pin < lower[0] or (pin == lower[0] and not lower[1])
        above = upper is not None and (
            pin > upper[0] or (pin == upper[0] and not upper[1])
        )
        return not (below or above)
    if upper is None:
        return True
    if lower[0] < upper[0]:
        return True
    return lower[0] == upper[0] and lower[1] and upper[1]
