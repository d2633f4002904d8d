"""Command-line front end.

Subcommands: scan (assess every application at one instant), evolve
(k snapshots across each application's lifespan), blame (responsibility for
high-threat findings per interval), stats (compare two numeric samples),
ingest (mine/validate/fetch input files).

Exit codes: 0 success, 1 input error, 2 partial failure (some applications
skipped; causes listed in the report's "errors" array).
"""

from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import advisories as advisories_mod
from . import history as history_mod
from . import registry as registry_mod
from . import report as report_mod
from .assessment import assess_snapshot
from .errors import (
    DegenerateLifespanError,
    DepthreatError,
    EmptySampleError,
    NoSnapshotBeforeError,
)
from .stats import compare_samples, segment_lifespan, summarize_cohort
from .timeutil import parse_rfc3339

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_PARTIAL = 2

PAPER_PRESET = "paper-2019"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Usage problems are input errors (exit 1), never exit 2 — that code
    is reserved for partial failures."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="depthreat",
        description=(
            "Reconstruct which dependency versions a manifest resolved to at "
            "any historical instant, which were vulnerable, how threatening "
            "each vulnerability was, and who is responsible for the "
            "high-threat exposures."
        ),
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    scan = subparsers.add_parser("scan", help="assess applications at one instant")
    _add_input_flags(scan)
    scan.add_argument("--at", required=True, help="snapshot instant (RFC 3339)")
    _add_output_flags(scan)

    evolve = subparsers.add_parser(
        "evolve", help="assess applications across their lifespans"
    )
    _add_input_flags(evolve)
    evolve.add_argument(
        "--snapshots", type=int, required=True, metavar="K",
        help="number of equal lifespan intervals",
    )
    _add_output_flags(evolve)

    blame = subparsers.add_parser(
        "blame", help="attribute responsibility for high-threat findings"
    )
    _add_input_flags(blame)
    blame.add_argument(
        "--snapshots", type=int, required=True, metavar="K",
        help="number of equal lifespan intervals",
    )
    _add_output_flags(blame)

    stats = subparsers.add_parser(
        "stats", help="Mann-Whitney U (one-sided) and Cliff's delta"
    )
    stats.add_argument("x_file", help="first sample, whitespace-separated numbers")
    stats.add_argument("y_file", help="second sample")
    _add_output_flags(stats)

    ingest = subparsers.add_parser(
        "ingest", help="mine a repository, fetch registry metadata, or validate inputs"
    )
    ingest.add_argument("--repo", help="git repository to mine into history-json")
    ingest.add_argument("--application", help="application name for --repo output")
    ingest.add_argument(
        "--fetch-package", action="append", default=[], metavar="NAME",
        help="fetch release records for a package (repeatable)",
    )
    ingest.add_argument("--endpoint", help="npm-registry-compatible base URL")
    ingest.add_argument("--registry", help="release-index-json file to validate")
    ingest.add_argument("--advisories", help="advisories-json file to validate")
    ingest.add_argument("--out", help="output path (default: stdout)")

    return parser


def _add_input_flags(subparser) -> None:
    subparser.add_argument("--registry", required=True, help="release-index-json file")
    subparser.add_argument("--advisories", required=True, help="advisories-json file")
    subparser.add_argument(
        "--history", action="append", default=[], metavar="FILE",
        help="history-json file (repeatable)",
    )
    subparser.add_argument(
        "--repo", action="append", default=[], metavar="PATH",
        help="git repository to mine (repeatable)",
    )
    subparser.add_argument(
        "--preset", choices=[PAPER_PRESET],
        help="apply a named maturity-filter preset",
    )
    subparser.add_argument("--min-commits", type=int)
    subparser.add_argument("--min-contributors", type=int)
    subparser.add_argument("--min-dependencies", type=int)
    subparser.add_argument("--created-before", metavar="RFC3339")
    subparser.add_argument("--active-after", metavar="RFC3339")
    subparser.add_argument(
        "--jobs", type=int, default=1, help="worker pool size (default 1)"
    )


def _add_output_flags(subparser) -> None:
    subparser.add_argument("--format", choices=["json", "csv"], default="json")
    subparser.add_argument("--out", help="output path (default: stdout)")


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "scan":
            return _cmd_scan(args)
        if args.command == "evolve":
            return _cmd_evolve(args)
        if args.command == "blame":
            return _cmd_blame(args)
        if args.command == "stats":
            return _cmd_stats(args)
        return _cmd_ingest(args)
    except (_UsageError, DepthreatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def _load_shared_inputs(args):
    try:
        with open(args.registry, "rb") as handle:
            index = registry_mod.ingest_registry_dump(handle)
    except (OSError, DepthreatError) as exc:
        raise _UsageError(f"cannot load registry {args.registry!r}: {exc}")
    try:
        with open(args.advisories, "rb") as handle:
            store, _curation = advisories_mod.ingest_advisories(handle)
    except (OSError, DepthreatError) as exc:
        raise _UsageError(f"cannot load advisories {args.advisories!r}: {exc}")
    return index, store


def _maturity_criteria(args):
    criteria = (
        history_mod.paper_2019_criteria()
        if args.preset == PAPER_PRESET
        else history_mod.MaturityCriteria()
    )
    overrides = {}
    if args.min_commits is not None:
        overrides["min_commits"] = args.min_commits
    if args.min_contributors is not None:
        overrides["min_contributors"] = args.min_contributors
    if args.min_dependencies is not None:
        overrides["min_dependencies"] = args.min_dependencies
    if args.created_before is not None:
        overrides["created_before"] = parse_rfc3339(args.created_before, allow_date=True)
    if args.active_after is not None:
        overrides["active_after"] = parse_rfc3339(args.active_after, allow_date=True)
    if overrides:
        from dataclasses import replace

        criteria = replace(criteria, **overrides)
    return criteria


def _collect_histories(args):
    """Load every requested history; returns (histories, errors, filtered)."""
    if not args.history and not args.repo:
        raise _UsageError("at least one --history or --repo is required")
    histories = []
    errors = []
    for path in args.history:
        try:
            with open(path, "rb") as handle:
                histories.append(history_mod.load_history(handle))
        except (OSError, DepthreatError) as exc:
            errors.append({"source": path, "cause": str(exc)})
    for path in args.repo:
        try:
            histories.append(history_mod.extract_history(path))
        except (OSError, DepthreatError) as exc:
            errors.append({"source": path, "cause": str(exc)})

    criteria = _maturity_criteria(args)
    kept, filtered = [], []
    for history in histories:
        passed, reasons = history_mod.passes_maturity_filter(history, criteria)
        if passed:
            kept.append(history)
        else:
            filtered.append({"application": history.application, "reasons": reasons})
    return kept, errors, filtered


def _shared_config(args, **extra) -> dict:
    config = {
        "registry": args.registry,
        "advisories": args.advisories,
        "history": list(args.history),
        "repo": list(args.repo),
        "preset": args.preset,
        "maturity": {
            "min_commits": args.min_commits,
            "min_contributors": args.min_contributors,
            "min_dependencies": args.min_dependencies,
            "created_before": args.created_before,
            "active_after": args.active_after,
        },
        "jobs": args.jobs,
        "format": args.format,
        "out": args.out,
    }
    config.update(extra)
    return config


def _emit(args, report: dict) -> None:
    if args.format == "csv":
        payload = report_mod.to_csv_text(report).encode()
    else:
        payload = report_mod.to_json_bytes(report)
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode())


def _exit_code(successes: int, errors: list) -> int:
    if errors and successes:
        return EXIT_PARTIAL
    if errors:
        return EXIT_INPUT_ERROR
    return EXIT_OK


def _run_pool(jobs, tasks, worker):
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(worker, tasks))
    return [worker(task) for task in tasks]


def _cmd_scan(args) -> int:
    at = parse_rfc3339(args.at, allow_date=True)
    index, store = _load_shared_inputs(args)
    histories, errors, filtered = _collect_histories(args)

    def worker(history):
        try:
            return assess_snapshot(index, store, history, at)
        except NoSnapshotBeforeError as exc:
            errors.append({"source": history.application, "cause": str(exc)})
            return None

    snapshots = [s for s in _run_pool(args.jobs, histories, worker) if s is not None]
    summary = summarize_cohort(snapshots)
    config = _shared_config(args, at=args.at)
    report = report_mod.scan_report(config, snapshots, summary, errors)
    report["filtered"] = filtered
    _emit(args, report)
    return _exit_code(len(snapshots), errors)


def _assess_intervals(args, index, store):
    """Shared evolve/blame machinery: per-application schedules, one cohort
    summary per interval position."""
    if args.snapshots < 1:
        raise _UsageError("--snapshots must be >= 1")
    histories, errors, filtered = _collect_histories(args)
    k = args.snapshots

    def worker(history):
        try:
            schedule = segment_lifespan(
                history.first_commit_at,
                history.last_commit_at,
                k,
                history.application,
            )
        except DegenerateLifespanError as exc:
            errors.append({"source": history.application, "cause": str(exc)})
            return None
        per_interval = []
        for t in schedule.snapshot_times:
            try:
                per_interval.append(assess_snapshot(index, store, history, t))
            except NoSnapshotBeforeError:
                per_interval.append(None)
        return per_interval

    rows = [row for row in _run_pool(args.jobs, histories, worker) if row is not None]
    intervals = []
    for position in range(k):
        at_position = [row[position] for row in rows if row[position] is not None]
        intervals.append(
            (summarize_cohort(at_position, schedule_index=position + 1), at_position)
        )
    return intervals, errors, filtered, len(rows)


def _cmd_evolve(args) -> int:
    index, store = _load_shared_inputs(args)
    intervals, errors, filtered, successes = _assess_intervals(args, index, store)
    config = _shared_config(args, snapshots=args.snapshots)
    report = report_mod.evolve_report(config, args.snapshots, intervals, errors)
    report["filtered"] = filtered
    _emit(args, report)
    return _exit_code(successes, errors)


def _cmd_blame(args) -> int:
    index, store = _load_shared_inputs(args)
    intervals, errors, filtered, successes = _assess_intervals(args, index, store)
    config = _shared_config(args, snapshots=args.snapshots)
    report = report_mod.blame_report(config, args.snapshots, intervals, errors)
    report["filtered"] = filtered
    _emit(args, report)
    return _exit_code(successes, errors)


def _read_sample(path: str) -> list[float]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read sample {path!r}: {exc}")
    try:
        values = [float(token) for token in text.split()]
    except ValueError as exc:
        raise _UsageError(f"sample {path!r} is not numeric: {exc}")
    return values


def _cmd_stats(args) -> int:
    x = _read_sample(args.x_file)
    y = _read_sample(args.y_file)
    try:
        result = compare_samples(x, y)
    except EmptySampleError as exc:
        raise _UsageError(str(exc))
    config = {"x_file": args.x_file, "y_file": args.y_file, "format": args.format}
    report = report_mod.stats_report(config, result)
    _emit(args, report)
    if args.out:
        rendered = report["result"]
        print(
            f"U={rendered['u_statistic']} p={rendered['p_value_rendered']} "
            f"delta={rendered['delta']} magnitude={rendered['magnitude']}"
        )
    return EXIT_OK


def _cmd_ingest(args) -> int:
    import json

    actions = [
        bool(args.repo),
        bool(args.fetch_package),
        bool(args.registry or args.advisories),
    ]
    if sum(actions) != 1:
        raise _UsageError(
            "ingest needs exactly one of: --repo, --fetch-package, "
            "--registry/--advisories"
        )

    if args.repo:
        try:
            history = history_mod.extract_history(args.repo, args.application)
        except DepthreatError as exc:
            raise _UsageError(str(exc))
        payload = json.dumps(history_mod.render_history(history), indent=2) + "\n"
        _write_or_print(args.out, payload)
        return EXIT_OK

    if args.fetch_package:
        if not args.endpoint:
            raise _UsageError("--fetch-package requires --endpoint")
        packages = {}
        for name in args.fetch_package:
            try:
                records = registry_mod.fetch_packument(args.endpoint, name)
            except DepthreatError as exc:
                raise _UsageError(f"cannot fetch {name!r}: {exc}")
            packages[name] = records
        index = registry_mod.ReleaseIndex.from_records(packages)
        payload = json.dumps(registry_mod.render_registry_dump(index), indent=2) + "\n"
        _write_or_print(args.out, payload)
        return EXIT_OK

    lines = []
    if args.registry:
        try:
            with open(args.registry, "rb") as handle:
                index = registry_mod.ingest_registry_dump(handle)
        except (OSError, DepthreatError) as exc:
            raise _UsageError(f"registry invalid: {exc}")
        releases = sum(len(index.releases(name)) for name in index.package_names())
        lines.append(
            f"registry ok: {len(index.package_names())} packages, "
            f"{releases} releases"
        )
    if args.advisories:
        try:
            with open(args.advisories, "rb") as handle:
                store, curation = advisories_mod.ingest_advisories(handle)
        except (OSError, DepthreatError) as exc:
            raise _UsageError(f"advisories invalid: {exc}")
        lines.append(
            f"advisories ok: {curation.total_advisories} reports read, "
            f"{curation.excluded_advisories} malicious-kind excluded "
            f"({len(curation.excluded_packages)} packages), "
            f"{curation.retained_advisories} retained, "
            f"{len(curation.overlap_warnings)} overlap warnings"
        )
    _write_or_print(args.out, "".join(line + "\n" for line in lines))
    return EXIT_OK


def _write_or_print(out: str | None, payload: str) -> None:
    if out:
        Path(out).write_text(payload)
    else:
        sys.stdout.write(payload)


if __name__ == "__main__":
    sys.exit(main())
