#!/usr/bin/env python3
"""Regenerate tests/data/semver_vectors.json against the real node-semver.

Requires node plus an installed semver package (npm install semver). The
fixture is committed, so this only needs to run when extending coverage:

    npm install semver --prefix /tmp/semver-oracle
    NODE_PATH=/tmp/semver-oracle/node_modules python tools/generate_semver_vectors.py

Parse, compare, satisfies, and range-validity verdicts all come from
node-semver itself. Desugar expectations are the canonical primitive form
this package renders; each desugar case additionally feeds boundary-probe
versions into the satisfies section, so a desugaring bug would surface as a
node disagreement.
"""

import json
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from depthreat.semver import parse_range  # noqa: E402
from depthreat.semver.version import Version  # noqa: E402

PARSE_CASES = [
    "0.0.0", "1.2.3", "10.20.30", "99999.99999.99999",
    "v1.2.3", " 1.2.3 ", "  v2.0.0", "1.0.0\n",
    "1.0.0-alpha", "1.0.0-alpha.1", "1.0.0-0.3.7", "1.0.0-x.7.z.92",
    "1.0.0-alpha+001", "1.0.0+20130313144700", "1.0.0-beta+exp.sha.5114f85",
    "1.0.0+build.1-aef.1-its-okay", "1.2.3-alpha.10.beta", "2.0.0-rc.1",
    "1.0.0--", "1.0.0-a-b.c-d", "1.0.0-0a", "1.0.0-00a", "1.0.0-0.0.0",
    "9007199254740991.0.0",
    # rejected by strict parsing
    "1.2", "1", "", "a.b.c", "1.2.3.4", "01.2.3", "1.02.3", "1.2.03",
    "1.2.3-", "1.2.3-.", "1.2.3-..", "1.2.3-01", "1.2.3-alpha..1",
    "1.2.3+", "1.2.3-+", "-1.2.3", "1.2.3 4", "1.2.x", "*", "latest",
    "vv1.2.3", "1.2.3-alpha_beta", "1.2.3+meta+meta", "v 1.2.3",
    "9007199254740992.0.0",
]

COMPARE_CASES = [
    ("1.0.0", "1.0.0"),
    ("1.0.0", "2.0.0"), ("2.0.0", "1.0.0"),
    ("2.1.0", "2.0.9"), ("1.0.10", "1.0.9"), ("1.10.0", "1.9.9"),
    ("0.0.1", "0.0.2"), ("10.0.0", "9.99.99"),
    # semver.org precedence chain
    ("1.0.0-alpha", "1.0.0-alpha.1"),
    ("1.0.0-alpha.1", "1.0.0-alpha.beta"),
    ("1.0.0-alpha.beta", "1.0.0-beta"),
    ("1.0.0-beta", "1.0.0-beta.2"),
    ("1.0.0-beta.2", "1.0.0-beta.11"),
    ("1.0.0-beta.11", "1.0.0-rc.1"),
    ("1.0.0-rc.1", "1.0.0"),
    ("1.0.0-alpha", "1.0.0"),
    ("1.0.0", "1.0.0-alpha"),
    ("1.0.0-1", "1.0.0-2"), ("1.0.0-2", "1.0.0-11"),
    ("1.0.0-1", "1.0.0-a"), ("1.0.0-a", "1.0.0-1"),
    ("1.0.0-alpha", "1.0.0-alpha.0"),
    ("1.0.0-alpha.0", "1.0.0-alpha"),
    ("1.0.0-alpha.1", "1.0.0-alpha.1"),
    ("1.0.0-A", "1.0.0-a"), ("1.0.0-a", "1.0.0-A"),
    ("1.0.0-Z", "1.0.0-a"),
    ("1.0.0--", "1.0.0-0"), ("1.0.0-0", "1.0.0--"),
    # build metadata never affects precedence
    ("1.0.0+build1", "1.0.0+build2"),
    ("1.0.0+build", "1.0.0"),
    ("1.0.0-alpha+x", "1.0.0-alpha+y"),
    ("0.9.9", "1.0.0-alpha"),
    ("1.0.1-alpha", "1.0.0"),
    ("v1.2.3", "1.2.3"),
    ("1.0.0-rc.1+build.1", "1.0.0-rc.1"),
    ("2.3.4", "v2.3.4"),
    ("1.0.0-beta.5", "1.0.0-beta.five"),
    ("3.0.0", "2.999.999"),
    ("0.1.0-9", "0.1.0-10"),
    ("0.1.0-foo.9", "0.1.0-foo.10"),
    ("0.1.0-foo", "0.1.0-foo.0"),
]

SATISFIES_CASES = [
    # primitive comparators
    ("1.5.0", ">1.0.0"), ("1.0.0", ">1.0.0"), ("0.9.0", ">1.0.0"),
    ("1.0.0", ">=1.0.0"), ("0.9.9", ">=1.0.0"),
    ("1.0.0", "<1.0.0"), ("0.9.9", "<1.0.0"),
    ("1.0.0", "<=1.0.0"), ("1.0.1", "<=1.0.0"),
    ("1.2.3", "=1.2.3"), ("1.2.4", "=1.2.3"),
    ("1.2.3", "1.2.3"), ("1.2.3", "v1.2.3"), ("v1.2.3", "1.2.3"),
    # conjunction
    ("1.2.8", ">=1.2.7 <1.3.0"), ("1.2.7", ">=1.2.7 <1.3.0"),
    ("1.3.0", ">=1.2.7 <1.3.0"), ("1.2.6", ">=1.2.7 <1.3.0"),
    ("1.2.9", ">= 1.2.7 < 1.3.0"),
    ("1.2.3", "1.2.3 4.5.6"),
    # disjunction
    ("1.2.9", "1.2.7 || >=1.2.9 <2.0.0"), ("1.2.7", "1.2.7 || >=1.2.9 <2.0.0"),
    ("1.2.8", "1.2.7 || >=1.2.9 <2.0.0"), ("2.0.0", "1.2.7 || >=1.2.9 <2.0.0"),
    ("1.9.9", "<1.0.0 || >1.5.0"),
    # caret
    ("1.2.3", "^1.2.3"), ("1.9.9", "^1.2.3"), ("2.0.0", "^1.2.3"),
    ("1.2.2", "^1.2.3"), ("1.2.0", "^1.2.0"), ("2.0.0", "^1.2.0"),
    ("0.2.5", "^0.2.3"), ("0.3.0", "^0.2.3"), ("0.2.2", "^0.2.3"),
    ("0.0.3", "^0.0.3"), ("0.0.4", "^0.0.3"), ("0.0.2", "^0.0.3"),
    ("1.5.0", "^1.x"), ("2.0.0", "^1.x"), ("0.9.0", "^1.x"),
    ("1.2.9", "^1.2.x"), ("1.3.0", "^1.2.x"),
    ("0.0.7", "^0.0.x"), ("0.1.0", "^0.0.x"), ("0.0.0", "^0.0.x"),
    ("0.5.0", "^0.x"), ("1.0.0", "^0.x"),
    # tilde
    ("1.2.5", "~1.2.3"), ("1.3.0", "~1.2.3"), ("1.2.2", "~1.2.3"),
    ("1.2.0", "~1.2"), ("1.2.9", "~1.2"), ("1.3.0", "~1.2"),
    ("1.0.0", "~1"), ("1.9.9", "~1"), ("2.0.0", "~1"), ("0.9.9", "~1"),
    ("0.2.4", "~0.2.3"), ("0.3.0", "~0.2.3"),
    ("1.2.5", "~>1.2.3"), ("1.3.0", "~>1.2.3"),
    # x-ranges and star
    ("1.9.9", "1.x"), ("2.0.0", "1.x"), ("1.0.0", "1.x"),
    ("1.2.9", "1.2.x"), ("1.3.0", "1.2.x"),
    ("1.2.3", "*"), ("0.0.0", "*"), ("99.99.99", "*"),
    ("1.2.3", ""), ("1.2.3", "1.2.*"), ("1.3.3", "1.2.*"),
    ("1.5.0", "1"), ("2.0.0", "1"), ("1.2.5", "1.2"),
    ("1.0.0", "=1.x"), ("1.2.0", "=1.2.x"), ("2.0.0", "=1.x"),
    # x-ranges with inequality operators
    ("1.3.0", ">1.2"), ("1.2.9", ">1.2"), ("1.2.0", ">=1.2"),
    ("1.1.9", ">=1.2"), ("2.0.0", ">1"), ("1.9.9", ">1"),
    ("1.1.9", "<1.2"), ("1.2.0", "<1.2"), ("1.2.9", "<=1.2"),
    ("1.3.0", "<=1.2"), ("0.9.9", "<1"), ("1.0.0", "<1"),
    ("1.9.9", "<=1"), ("2.0.0", "<=1"),
    # hyphen ranges
    ("1.5.0", "1.2.3 - 2.3.4"), ("1.2.3", "1.2.3 - 2.3.4"),
    ("2.3.4", "1.2.3 - 2.3.4"), ("2.3.5", "1.2.3 - 2.3.4"),
    ("1.2.2", "1.2.3 - 2.3.4"),
    ("1.2.0", "1.2 - 2.3.4"), ("1.1.9", "1.2 - 2.3.4"),
    ("2.3.9", "1.2.3 - 2.3"), ("2.4.0", "1.2.3 - 2.3"),
    ("2.9.9", "1.2.3 - 2"), ("3.0.0", "1.2.3 - 2"),
    ("1.0.0", "* - 2.0.0"), ("2.0.1", "* - 2.0.0"),
    # prerelease exclusion rule
    ("1.3.0-beta", "^1.2.0"), ("1.2.3-beta", ">=1.2.0"),
    ("1.0.0-rc1", "*"), ("1.0.0-rc1", ""), ("1.0.0-alpha", "1.x"),
    ("2.0.0-alpha", "^1.2.3"), ("1.2.3-alpha", "<2.0.0"),
    ("1.2.3-alpha", "1.2.3-alpha"), ("1.2.3-beta", ">=1.2.3-alpha"),
    ("1.2.3-alpha", ">1.2.3-alpha"), ("1.2.3-beta.2", ">1.2.3-beta"),
    ("1.2.4-beta", ">=1.2.3-alpha"), ("1.2.4", ">=1.2.3-alpha"),
    ("1.2.3-beta", "~1.2.3-alpha"), ("1.2.4-beta", "~1.2.3-alpha"),
    ("1.2.9", "~1.2.3-alpha"),
    ("2.0.0-rc.1", "^2.0.0-rc.0"), ("2.0.0", "^2.0.0-rc.0"),
    ("1.2.3-beta", "^2.0.0 || >=1.2.3-alpha"),
    ("1.2.3-beta", "1.2.3-alpha - 1.2.4"),
    ("1.2.3-beta", "1.2.3-alpha - 1.2.3-rc"),
    ("1.0.0-beta", "=1.0.0-beta"),
    ("1.0.0", ">=1.0.0-alpha"),
    ("0.7.0-beta", "<1.0.0"),
    # build metadata ignored during evaluation
    ("1.2.3+build99", "^1.2.3"), ("1.2.3+build", "=1.2.3"),
    ("1.2.3", ">=1.2.3+weird-build"),
    # impossible ranges
    ("1.2.3", ">*"), ("0.0.0", "<*"),
]

RANGE_PARSE_CASES = [
    "^1.2.3", "~1.2.3", "1.2.3", ">1.0.0", ">=1.0.0 <2.0.0",
    "1.2.3 - 2.3.4", "1.x", "1.2.x", "*", "", "=1.2.3", "^0.0.1",
    "~1", "^1.x", ">= 1.2.3", "< 2", "~> 1.2.3", "1.2.7 || >=1.2.9 <2.0.0",
    ">1.2.3 <1.2.5 || 2.x", "v1.2.3", "^v1.2.3", ">=v1.2",
    "1.2.3-alpha.1", ">=1.2.3-alpha.1 <2.0.0", ">*", "<*", "<=*", "=*",
    # rejected
    "not a range", ">>1.2.3", "^^1.2.3", "1.2.3 -", "- 1.2.3", ">=",
    "1.2.3-", "a.b.c", "^1.2.3.4", "1.2.3 || || 4", "==1.2.3",
    "1.2.3-alpha..", ">1.2.3-", "~1.-2.3",
]

# range -> expected canonical desugared form (primitive comparators only)
DESUGAR_CASES = [
    ("^1.2.3", ">=1.2.3 <2.0.0"),
    ("^0.2.3", ">=0.2.3 <0.3.0"),
    ("^0.0.3", ">=0.0.3 <0.0.4"),
    ("^1.2.x", ">=1.2.0 <2.0.0"),
    ("^0.0.x", ">=0.0.0 <0.1.0"),
    ("^0.0", ">=0.0.0 <0.1.0"),
    ("^1.x", ">=1.0.0 <2.0.0"),
    ("^0.x", ">=0.0.0 <1.0.0"),
    ("^1.2.3-beta.2", ">=1.2.3-beta.2 <2.0.0"),
    ("~1.2.3", ">=1.2.3 <1.3.0"),
    ("~1.2", ">=1.2.0 <1.3.0"),
    ("~1", ">=1.0.0 <2.0.0"),
    ("~0.2.3", ">=0.2.3 <0.3.0"),
    ("~1.2.3-beta.2", ">=1.2.3-beta.2 <1.3.0"),
    ("~>1.2.3", ">=1.2.3 <1.3.0"),
    ("1.2.3 - 2.3.4", ">=1.2.3 <=2.3.4"),
    ("1.2 - 2.3.4", ">=1.2.0 <=2.3.4"),
    ("1.2.3 - 2.3", ">=1.2.3 <2.4.0"),
    ("1.2.3 - 2", ">=1.2.3 <3.0.0"),
    ("1.x", ">=1.0.0 <2.0.0"),
    ("1.2.x", ">=1.2.0 <1.3.0"),
    ("1.2", ">=1.2.0 <1.3.0"),
    ("1", ">=1.0.0 <2.0.0"),
    ("*", "*"),
    ("", "*"),
    (">=1.2", ">=1.2.0"),
    (">1.2", ">=1.3.0"),
    (">1", ">=2.0.0"),
    ("<1.2", "<1.2.0"),
    ("<=1.2", "<1.3.0"),
    ("<=1", "<2.0.0"),
    ("=1.2.3", "=1.2.3"),
    ("1.2.3", "=1.2.3"),
    (">1.0.0", ">1.0.0"),
    (">=1.2.7 <1.3.0", ">=1.2.7 <1.3.0"),
    ("1.2.7 || >=1.2.9 <2.0.0", "=1.2.7 || >=1.2.9 <2.0.0"),
]


def _probe_versions(range_text):
    """Boundary probes derived from our desugared comparators."""
    probes = set()
    parsed = parse_range(range_text)
    for comparators in parsed.alternatives:
        for comp in comparators:
            v = comp.version
            probes.add(v.render())
            probes.add(Version(v.major, v.minor, v.patch).render())
            probes.add(Version(v.major, v.minor, v.patch + 1).render())
            probes.add(Version(v.major, v.minor + 1, 0).render())
            probes.add(Version(v.major + 1, 0, 0).render())
            if v.patch > 0:
                probes.add(Version(v.major, v.minor, v.patch - 1).render())
            probes.add(Version(v.major, v.minor, v.patch, (0,)).render())
            probes.add(Version(v.major, v.minor, v.patch, ("zzz",)).render())
    probes.update({"0.0.0", "99.99.99", "0.0.1-0"})
    return sorted(probes)


def main():
    satisfies_cases = list(SATISFIES_CASES)
    seen = set(satisfies_cases)
    for range_text, _expected in DESUGAR_CASES:
        for probe in _probe_versions(range_text):
            case = (probe, range_text)
            if case not in seen:
                seen.add(case)
                satisfies_cases.append(case)

    request = {
        "parse": PARSE_CASES,
        "compare": [list(c) for c in COMPARE_CASES],
        "satisfies": [list(c) for c in satisfies_cases],
        "range_parse": RANGE_PARSE_CASES,
    }
    result = subprocess.run(
        ["node", str(ROOT / "tools" / "semver_vector_eval.js")],
        input=json.dumps(request),
        capture_output=True,
        text=True,
        check=True,
    )
    verdicts = json.loads(result.stdout)
    verdicts["desugar"] = [
        {"range": r, "desugared": d} for r, d in DESUGAR_CASES
    ]
    out_path = ROOT / "tests" / "data" / "semver_vectors.json"
    out_path.write_text(json.dumps(verdicts, indent=1) + "\n")
    counts = {
        section: len(verdicts[section])
        for section in ("parse", "compare", "satisfies", "range_parse", "desugar")
    }
    print(f"wrote {out_path} against node-semver {verdicts['semver_version']}")
    print(f"cases: {counts} (total {sum(counts.values())})")


if __name__ == "__main__":
    main()
