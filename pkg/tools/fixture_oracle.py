#!/usr/bin/env python3
"""Brute-force expectations for the bundled ecosystem fixture.

Deliberately independent of the depthreat package: it re-derives every scan,
evolve, and blame verdict from the raw fixture JSON with its own minimal
version ordering and constraint evaluation, written as plain nested loops.
The fixture's constraint vocabulary is restricted (full-triple caret/tilde,
primitive comparators, pins, star, whitespace conjunction) so this stays
short and auditable; the script asserts those restrictions hold.

    python tools/fixture_oracle.py          # rewrite expected_*.json
    python tools/fixture_oracle.py --check  # verify frozen files match
"""

import json
import sys
from datetime import datetime, timezone
from pathlib import Path

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "fixture"
SCAN_AT = "2016-05-01T00:00:00Z"
INTERVALS = 5
APPLICATIONS = ["app_alpha", "app_beta", "app_gamma"]


# -- minimal independent semver -----------------------------------------------


def parse_ts(text):
    return datetime.fromisoformat(text.replace("Z", "+00:00")).astimezone(
        timezone.utc
    )


def render_ts(instant):
    return instant.strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_ver(text):
    """-> (major, minor, patch, prerelease-ids or None)."""
    core, _, pre = text.partition("-")
    major, minor, patch = (int(part) for part in core.split("."))
    if not pre:
        return (major, minor, patch, None)
    ids = tuple(int(p) if p.isdigit() else p for p in pre.split("."))
    return (major, minor, patch, ids)


def cmp_ver(a, b):
    for left, right in zip(a[:3], b[:3]):
        if left != right:
            return -1 if left < right else 1
    pre_a, pre_b = a[3], b[3]
    if pre_a is None and pre_b is None:
        return 0
    if pre_a is None:
        return 1  # release outranks any prerelease of the same triple
    if pre_b is None:
        return -1
    for ia, ib in zip(pre_a, pre_b):
        if ia == ib:
            continue
        a_num, b_num = isinstance(ia, int), isinstance(ib, int)
        if a_num and b_num:
            return -1 if ia < ib else 1
        if a_num != b_num:
            return -1 if a_num else 1  # numeric ids sort below alphanumeric
        return -1 if ia < ib else 1
    if len(pre_a) != len(pre_b):
        return -1 if len(pre_a) < len(pre_b) else 1
    return 0


def desugar(constraint):
    """-> list of (op, version) conjuncts; [] means any release version."""
    constraint = constraint.strip()
    if constraint == "*":
        return []
    conjuncts = []
    for token in constraint.split():
        if token.startswith("^"):
            base = parse_ver(token[1:])
            major, minor, patch = base[:3]
            if major > 0:
                upper = (major + 1, 0, 0, None)
            elif minor > 0:
                upper = (0, minor + 1, 0, None)
            else:
                upper = (0, 0, patch + 1, None)
            conjuncts += [(">=", base), ("<", upper)]
        elif token.startswith("~"):
            base = parse_ver(token[1:])
            conjuncts += [(">=", base), ("<", (base[0], base[1] + 1, 0, None))]
        elif token.startswith(">="):
            conjuncts.append((">=", parse_ver(token[2:])))
        elif token.startswith("<="):
            conjuncts.append(("<=", parse_ver(token[2:])))
        elif token.startswith(">"):
            conjuncts.append((">", parse_ver(token[1:])))
        elif token.startswith("<"):
            conjuncts.append(("<", parse_ver(token[1:])))
        elif token.startswith("="):
            conjuncts.append(("=", parse_ver(token[1:])))
        else:
            conjuncts.append(("=", parse_ver(token)))
    # fixture restriction: no prerelease comparators, so the prerelease
    # admission rule reduces to "prerelease versions never satisfy"
    assert all(v[3] is None for _op, v in conjuncts), constraint
    return conjuncts


def sat(version, conjuncts):
    if version[3] is not None:
        return False  # see desugar(): no prerelease comparators in fixture
    for op, bound in conjuncts:
        order = cmp_ver(version, bound)
        ok = {
            "=": order == 0,
            "<": order < 0,
            "<=": order <= 0,
            ">": order > 0,
            ">=": order >= 0,
        }[op]
        if not ok:
            return False
    return True


# -- fixture loading -----------------------------------------------------------


def load_fixture():
    registry = {}
    raw = json.loads((FIXTURE / "registry.json").read_text())
    for name, entries in raw["packages"].items():
        registry[name] = [
            (parse_ver(e["version"]), parse_ts(e["released_at"]), e["version"])
            for e in entries
        ]
    advisories = []
    for entry in json.loads((FIXTURE / "advisories.json").read_text()):
        if entry["kind"] == "Malicious Package":
            continue
        advisories.append(
            {
                "id": entry["id"],
                "package": entry["package"],
                "affected": desugar(entry["affected"]),
                "patched": (
                    desugar(entry["patched"]) if entry["patched"] is not None else None
                ),
                "reported": parse_ts(entry["reported_at"]),
                "published": (
                    parse_ts(entry["published_at"])
                    if entry["published_at"] is not None
                    else None
                ),
            }
        )
    histories = []
    for name in APPLICATIONS:
        histories.append(
            json.loads((FIXTURE / f"history_{name}.json").read_text())
        )
    return registry, advisories, histories


# -- assessment by brute force --------------------------------------------------


def resolve(registry, package, conjuncts, t):
    """(state, version-triple, rendered) by scanning every release."""
    if package not in registry:
        return "unknown-package", None, None
    best = None
    for version, released, rendered in registry[package]:
        if not (released < t):
            continue
        if not sat(version, conjuncts):
            continue
        if best is None or cmp_ver(version, best[0]) > 0:
            best = (version, rendered)
    if best is None:
        return "unresolvable", None, None
    return "resolved", best[0], best[1]


def classify(advisory, t):
    if advisory["published"] is not None and advisory["published"] <= t:
        return "high"
    if advisory["reported"] <= t:
        return "medium"
    return "low"


def blame_for(advisory, registry, resolved, t):
    safe = []
    if advisory["patched"] is not None:
        for version, released, _rendered in registry.get(advisory["package"], []):
            if version[3] is not None:
                continue  # no fixture constraint admits prereleases
            if released < t and sat(version, advisory["patched"]):
                safe.append(version)
    if not safe:
        return {"kind": "package-to-blame", "major_barrier": None}
    barrier = all(version[0] != resolved[0] for version in safe)
    return {"kind": "application-to-blame", "major_barrier": barrier}


LEVELS = ("low", "medium", "high")


def assess_app(registry, advisories, history, t):
    snapshot = None
    for candidate in history["snapshots"]:
        if parse_ts(candidate["committed_at"]) <= t:
            snapshot = candidate
    if snapshot is None:
        return None
    deps = []
    for dep in snapshot["dependencies"]:
        constraint = dep["constraint"]
        if constraint.startswith(("git+", "git:", "http:", "https:", "file:")):
            deps.append(_dep(dep, "unsupported-specifier"))
            continue
        conjuncts = desugar(constraint)
        state, resolved, rendered = resolve(registry, dep["package"], conjuncts, t)
        if state != "resolved":
            deps.append(_dep(dep, state))
            continue
        matched = sorted(
            (
                advisory
                for advisory in advisories
                if advisory["package"] == dep["package"]
                and sat(resolved, advisory["affected"])
            ),
            key=lambda advisory: advisory["id"],
        )
        levels = [classify(advisory, t) for advisory in matched]
        if not matched:
            deps.append(_dep(dep, "resolved", rendered, [], "not-vulnerable", None))
            continue
        overall = max(levels, key=LEVELS.index)
        blame = None
        if overall == "high":
            parts = [
                blame_for(advisory, registry, resolved, t)
                for advisory, level in zip(matched, levels)
                if level == "high"
            ]
            if any(part["kind"] == "package-to-blame" for part in parts):
                blame = {"kind": "package-to-blame", "major_barrier": None}
            else:
                blame = {
                    "kind": "application-to-blame",
                    "major_barrier": any(part["major_barrier"] for part in parts),
                }
        deps.append(
            _dep(
                dep,
                "resolved",
                rendered,
                [
                    {"id": advisory["id"], "threat": level}
                    for advisory, level in zip(matched, levels)
                ],
                overall,
                blame,
            )
        )
    n = sum(1 for d in deps if d["state"] == "resolved")
    vulnerable = [d for d in deps if d["outcome"] in LEVELS]
    counts = {level: 0 for level in LEVELS}
    for d in vulnerable:
        counts[d["outcome"]] += 1
    return {
        "application": history["application"],
        "at": render_ts(t),
        "commit_id": snapshot["commit_id"],
        "n_dependencies": n,
        "m_vulnerable": len(vulnerable),
        "per_level_counts": counts,
        "dependencies": deps,
    }


def _dep(dep, state, resolved=None, advisories=None, outcome="excluded", blame=None):
    return {
        "package": dep["package"],
        "constraint": dep["constraint"],
        "state": state,
        "resolved": resolved,
        "advisories": advisories or [],
        "outcome": outcome,
        "blame": blame,
    }


def median(values):
    ordered = sorted(values)
    middle = len(ordered) // 2
    if len(ordered) % 2:
        return ordered[middle]
    return (ordered[middle - 1] + ordered[middle]) / 2


def cohort(apps):
    fractions = {}
    per_level = {level: [] for level in LEVELS}
    n_total = m_total = vulnerable_apps = 0
    package_blame = application_blame = barrier = 0
    for app in apps:
        n, m = app["n_dependencies"], app["m_vulnerable"]
        n_total += n
        m_total += m
        if m >= 1:
            vulnerable_apps += 1
        if n > 0:
            fractions[app["application"]] = m / n
        if m > 0:
            for level in LEVELS:
                per_level[level].append(app["per_level_counts"][level] / m)
        for dep in app["dependencies"]:
            if dep["blame"] is None:
                continue
            if dep["blame"]["kind"] == "package-to-blame":
                package_blame += 1
            else:
                application_blame += 1
                if dep["blame"]["major_barrier"]:
                    barrier += 1
    high = package_blame + application_blame
    return {
        "n_applications": len(apps),
        "n_total": n_total,
        "m_total": m_total,
        "vulnerable_applications": vulnerable_apps,
        "vulnerable_application_fraction": (
            vulnerable_apps / len(apps) if apps else None
        ),
        "median_vulnerable_fraction": (
            median(list(fractions.values())) if fractions else None
        ),
        "vulnerable_fractions": fractions,
        "per_level": {
            level: {
                "fractions": per_level[level],
                "median_fraction": (
                    median(per_level[level]) if per_level[level] else None
                ),
            }
            for level in LEVELS
        },
        "blame": {
            "high_findings": high,
            "package_to_blame": package_blame,
            "application_to_blame": application_blame,
            "major_barrier": barrier,
            "package_to_blame_share": package_blame / high if high else None,
            "application_to_blame_share": application_blame / high if high else None,
            "major_barrier_share": (
                barrier / application_blame if application_blame else None
            ),
        },
    }


def expected_scan(registry, advisories, histories):
    t = parse_ts(SCAN_AT)
    apps = [assess_app(registry, advisories, h, t) for h in histories]
    apps = [a for a in apps if a is not None]
    return {"at": SCAN_AT, "applications": apps, "cohort": cohort(apps)}


def interval_times(history, k):
    first = parse_ts(history["first_commit_at"])
    last = parse_ts(history["last_commit_at"])
    span = last - first
    return [first + (span * i) / k for i in range(1, k + 1)]


def expected_evolve(registry, advisories, histories, k):
    rows = [
        [assess_app(registry, advisories, h, t) for t in interval_times(h, k)]
        for h in histories
    ]
    intervals = []
    for position in range(k):
        apps = [row[position] for row in rows if row[position] is not None]
        intervals.append(
            {
                "index": position + 1,
                "lifespan_position": f"{round(100 * (position + 1) / k)}%",
                "cohort": cohort(apps),
                "applications": apps,
            }
        )
    return {"snapshots": k, "intervals": intervals}


def expected_blame(evolve):
    return {
        "snapshots": evolve["snapshots"],
        "intervals": [
            {
                "index": interval["index"],
                "lifespan_position": interval["lifespan_position"],
                "blame": interval["cohort"]["blame"],
            }
            for interval in evolve["intervals"]
        ],
    }


def main():
    check = "--check" in sys.argv
    registry, advisories, histories = load_fixture()
    computed = {
        "expected_scan.json": expected_scan(registry, advisories, histories),
        "expected_evolve.json": expected_evolve(
            registry, advisories, histories, INTERVALS
        ),
    }
    computed["expected_blame.json"] = expected_blame(
        computed["expected_evolve.json"]
    )
    failures = 0
    for name, payload in computed.items():
        path = FIXTURE / name
        rendered = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        if check:
            if not path.exists() or path.read_text() != rendered:
                print(f"MISMATCH: {name}")
                failures += 1
            else:
                print(f"ok: {name}")
        else:
            path.write_text(rendered)
            print(f"wrote {path}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
