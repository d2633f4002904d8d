"""Machine-readable report assembly.

JSON is the canonical format: stable key order (sorted), stable list order
(input order for applications, id order for advisories), no wall-clock
fields, so identical inputs and flags produce byte-identical bytes. CSV is a
flattened projection of the same data for spreadsheet use.
"""

from __future__ import annotations

import csv
import io
import json

from . import __version__
from .assessment import (
    Blame,
    BlameKind,
    DependencyAssessment,
    SnapshotAssessment,
    ThreatLevel,
)
from .stats import CohortSummary, StatResult, format_p_value
from .timeutil import render_rfc3339

SCHEMA_VERSION = 1


def envelope(command: str, config: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "depthreat", "version": __version__},
        "command": command,
        "config": config,
    }


def _blame_dict(blame: Blame | None):
    if blame is None:
        return None
    return {
        "kind": blame.kind.value,
        "major_barrier": (
            blame.major_barrier if blame.kind is BlameKind.APPLICATION else None
        ),
    }


def dependency_dict(assessment: DependencyAssessment) -> dict:
    return {
        "package": assessment.spec.package,
        "constraint": assessment.spec.constraint_text,
        "state": assessment.state.value,
        "resolved": assessment.resolved.render() if assessment.resolved else None,
        "advisories": [
            {"id": advisory.id, "threat": level.render()}
            for advisory, level in assessment.advisories_matched
        ],
        "outcome": (
            assessment.overall.render()
            if assessment.overall is not None
            else ("not-vulnerable" if not assessment.excluded else "excluded")
        ),
        "blame": _blame_dict(assessment.blame),
    }


def snapshot_dict(snapshot: SnapshotAssessment) -> dict:
    counts = snapshot.per_level_counts
    return {
        "application": snapshot.application,
        "at": render_rfc3339(snapshot.at),
        "commit_id": snapshot.commit_id,
        "n_dependencies": snapshot.n_dependencies,
        "m_vulnerable": snapshot.m_vulnerable,
        "per_level_counts": {
            level.render(): counts[level] for level in ThreatLevel
        },
        "dependencies": [
            dependency_dict(assessment) for assessment in snapshot.assessments
        ],
    }


def cohort_dict(summary: CohortSummary) -> dict:
    high_total = summary.package_blame + summary.application_blame
    return {
        "n_applications": summary.n_applications,
        "n_total": summary.n_total,
        "m_total": summary.m_total,
        "vulnerable_applications": summary.vulnerable_applications,
        "vulnerable_application_fraction": summary.vulnerable_application_fraction,
        "median_vulnerable_fraction": summary.median_vulnerable_fraction,
        "vulnerable_fractions": {
            application: fraction
            for application, fraction in zip(
                summary.fraction_applications, summary.vulnerable_fractions
            )
        },
        "per_level": {
            level.render(): {
                "fractions": list(summary.per_level_fractions[level]),
                "median_fraction": summary.median_level_fraction(level),
            }
            for level in ThreatLevel
        },
        "blame": {
            "high_findings": high_total,
            "package_to_blame": summary.package_blame,
            "application_to_blame": summary.application_blame,
            "major_barrier": summary.major_barrier,
            # undefined (not zero) when there is nothing to apportion
            "package_to_blame_share": (
                summary.package_blame / high_total if high_total else None
            ),
            "application_to_blame_share": (
                summary.application_blame / high_total if high_total else None
            ),
            "major_barrier_share": (
                summary.major_barrier / summary.application_blame
                if summary.application_blame
                else None
            ),
        },
    }


def scan_report(config, snapshots, summary, errors) -> dict:
    report = envelope("scan", config)
    report["applications"] = [snapshot_dict(s) for s in snapshots]
    report["cohort"] = cohort_dict(summary)
    report["errors"] = errors
    return report


def interval_dict(index, k, summaries_snapshots) -> dict:
    summary, snapshots = summaries_snapshots
    return {
        "index": index,
        "lifespan_position": f"{round(100 * index / k)}%",
        "cohort": cohort_dict(summary),
        "applications": [snapshot_dict(s) for s in snapshots],
    }


def evolve_report(config, k, intervals, errors) -> dict:
    report = envelope("evolve", config)
    report["snapshots"] = k
    report["intervals"] = [
        interval_dict(index, k, pair) for index, pair in enumerate(intervals, start=1)
    ]
    report["errors"] = errors
    return report


def blame_report(config, k, intervals, errors) -> dict:
    report = envelope("blame", config)
    report["snapshots"] = k
    report["intervals"] = [
        {
            "index": index,
            "lifespan_position": f"{round(100 * index / k)}%",
            "blame": cohort_dict(summary)["blame"],
        }
        for index, (summary, _snapshots) in enumerate(intervals, start=1)
    ]
    report["errors"] = errors
    return report


def stats_report(config, result: StatResult) -> dict:
    report = envelope("stats", config)
    report["result"] = {
        "u_statistic": result.u_statistic,
        "p_value": max(result.p_value, 0.0),
        "p_value_rendered": format_p_value(result.p_value),
        "delta": result.delta,
        "magnitude": result.magnitude.value,
    }
    return report


def to_json_bytes(report: dict) -> bytes:
    return (json.dumps(report, indent=2, sort_keys=True) + "\n").encode()


# -- CSV projection ----------------------------------------------------------


def to_csv_text(report: dict) -> str:
    command = report.get("command")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if command == "scan":
        _scan_rows(writer, report["applications"])
    elif command in ("evolve", "blame"):
        _interval_rows(writer, report)
    elif command == "stats":
        writer.writerow(["u_statistic", "p_value", "delta", "magnitude"])
        result = report["result"]
        writer.writerow(
            [
                result["u_statistic"],
                result["p_value_rendered"],
                result["delta"],
                result["magnitude"],
            ]
        )
    else:
        raise ValueError(f"no CSV projection for {command!r} reports")
    return buffer.getvalue()


def _scan_rows(writer, applications):
    writer.writerow(
        [
            "application",
            "at",
            "package",
            "constraint",
            "state",
            "resolved",
            "outcome",
            "advisories",
            "blame",
            "major_barrier",
        ]
    )
    for app in applications:
        for dep in app["dependencies"]:
            blame = dep["blame"] or {}
            writer.writerow(
                [
                    app["application"],
                    app["at"],
                    dep["package"],
                    dep["constraint"],
                    dep["state"],
                    dep["resolved"] or "",
                    dep["outcome"],
                    ";".join(a["id"] for a in dep["advisories"]),
                    blame.get("kind", ""),
                    blame.get("major_barrier", ""),
                ]
            )


def _interval_rows(writer, report):
    writer.writerow(
        [
            "interval",
            "lifespan_position",
            "n_applications",
            "n_total",
            "m_total",
            "vulnerable_applications",
            "vulnerable_application_fraction",
            "package_to_blame",
            "application_to_blame",
            "package_to_blame_share",
            "application_to_blame_share",
            "major_barrier_share",
        ]
    )
    for interval in report["intervals"]:
        cohort = interval.get("cohort", {})
        blame = interval.get("blame") or cohort.get("blame", {})
        writer.writerow(
            [
                interval["index"],
                interval["lifespan_position"],
                cohort.get("n_applications", ""),
                cohort.get("n_total", ""),
                cohort.get("m_total", ""),
                cohort.get("vulnerable_applications", ""),
                _cell(cohort.get("vulnerable_application_fraction")),
                blame.get("package_to_blame", ""),
                blame.get("application_to_blame", ""),
                _cell(blame.get("package_to_blame_share")),
                _cell(blame.get("application_to_blame_share")),
                _cell(blame.get("major_barrier_share")),
            ]
        )


def _cell(value):
    return "" if value is None else value
