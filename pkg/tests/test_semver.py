"""Version and range behavior, including full node-semver conformance."""

import pytest
from hypothesis import given, strategies as st

from depthreat.errors import (
    MalformedRangeError,
    MalformedVersionError,
    RangeParseError,
    UnsupportedSpecifierError,
)
from depthreat.semver import (
    Version,
    compare,
    parse_range,
    parse_version,
    satisfies,
)


def run_conformance(vectors):
    """Evaluate every vector; returns a list of mismatch descriptions."""
    mismatches = []

    for case in vectors["parse"]:
        text = case["input"]
        try:
            version = parse_version(text)
            ours = {
                "valid": True,
                "major": version.major,
                "minor": version.minor,
                "patch": version.patch,
                "prerelease": list(version.prerelease),
                "build": list(version.build),
            }
        except MalformedVersionError:
            ours = {"valid": False}
        theirs = {k: v for k, v in case.items() if k != "input"}
        if ours != theirs:
            mismatches.append(f"parse {text!r}: ours={ours} vectors={theirs}")

    for case in vectors["compare"]:
        result = compare(parse_version(case["a"]), parse_version(case["b"]))
        if result != case["result"]:
            mismatches.append(
                f"compare({case['a']!r}, {case['b']!r}): "
                f"ours={result} vectors={case['result']}"
            )

    for case in vectors["satisfies"]:
        result = satisfies(parse_version(case["version"]), parse_range(case["range"]))
        if result != case["result"]:
            mismatches.append(
                f"satisfies({case['version']!r}, {case['range']!r}): "
                f"ours={result} vectors={case['result']}"
            )

    for case in vectors["range_parse"]:
        try:
            parse_range(case["range"])
            ours = True
        except RangeParseError:
            ours = False
        if ours != case["valid"]:
            mismatches.append(
                f"range validity {case['range']!r}: ours={ours} "
                f"vectors={case['valid']}"
            )

    for case in vectors["desugar"]:
        rendered = parse_range(case["range"]).render()
        if rendered != case["desugared"]:
            mismatches.append(
                f"desugar {case['range']!r}: ours={rendered!r} "
                f"expected={case['desugared']!r}"
            )

    return mismatches


def test_conformance_vectors(semver_vectors):
    mismatches = run_conformance(semver_vectors)
    assert not mismatches, "\n".join(mismatches)


class TestParseVersion:
    def test_plain_triple(self):
        v = parse_version("1.2.3")
        assert (v.major, v.minor, v.patch) == (1, 2, 3)
        assert v.prerelease == () and v.build == ()

    def test_prerelease_identifiers_are_typed(self):
        v = parse_version("1.0.0-alpha.1")
        assert v.prerelease == ("alpha", 1)

    def test_partial_rejected(self):
        with pytest.raises(MalformedVersionError):
            parse_version("1.2")

    def test_leading_v_and_whitespace(self):
        assert parse_version(" v1.2.3 ") == parse_version("1.2.3")

    def test_component_overflow(self):
        with pytest.raises(MalformedVersionError):
            parse_version(f"{2**53}.0.0")

    def test_negative_component(self):
        with pytest.raises(MalformedVersionError):
            parse_version("-1.2.3")


class TestCompare:
    def test_equal(self):
        assert compare(parse_version("1.0.0"), parse_version("1.0.0")) == 0

    def test_prerelease_below_release(self):
        assert compare(parse_version("1.0.0-alpha"), parse_version("1.0.0")) == -1

    def test_build_ignored(self):
        a, b = parse_version("1.0.0+build1"), parse_version("1.0.0+build2")
        assert compare(a, b) == 0
        assert a != b  # field equality still sees the build difference


class TestParseRange:
    def test_caret_desugars(self):
        r = parse_range("^1.2.3")
        assert r.render() == ">=1.2.3 <2.0.0"

    def test_exact_pin(self):
        r = parse_range("1.2.3")
        assert [c.op for c in r.alternatives[0]] == ["="]

    def test_primitive(self):
        assert parse_range(">1.0.0").render() == ">1.0.0"

    def test_desugared_form_is_stable(self):
        for text in ("^1.2.3", "~0.4.2", "1.2 - 3", "1.x || >=4.0.0 <5.0.0", "*"):
            rendered = parse_range(text).render()
            reparsed = parse_range(rendered)
            assert reparsed == parse_range(text)
            assert reparsed.render() == rendered

    @pytest.mark.parametrize(
        "specifier",
        [
            "git+https://github.com/user/repo.git",
            "git://github.com/user/repo.git",
            "https://example.com/pkg.tgz",
            "file:../local-pkg",
            "user/repo",
            "latest",
            "next",
            "workspace:*",
        ],
    )
    def test_unsupported_specifiers_are_distinct(self, specifier):
        with pytest.raises(UnsupportedSpecifierError):
            parse_range(specifier)

    def test_garbage_is_malformed_not_unsupported(self):
        with pytest.raises(MalformedRangeError) as excinfo:
            parse_range(">>1.2.3")
        assert not isinstance(excinfo.value, UnsupportedSpecifierError)


class TestSatisfies:
    def test_plain(self):
        assert satisfies(parse_version("1.5.0"), parse_range(">1.0.0"))

    def test_caret_upper_bound(self):
        assert not satisfies(parse_version("2.0.0"), parse_range("^1.2.0"))

    def test_prerelease_excluded_without_anchor(self):
        assert not satisfies(parse_version("1.3.0-beta"), parse_range("^1.2.0"))

    def test_prerelease_admitted_on_same_triple(self):
        assert satisfies(parse_version("1.2.3-beta"), parse_range(">=1.2.3-alpha"))
        assert not satisfies(parse_version("1.2.4-beta"), parse_range(">=1.2.3-alpha"))


# -- properties ------------------------------------------------------------

prerelease_ident = st.one_of(
    st.integers(min_value=0, max_value=999),
    st.from_regex(r"[0-9A-Za-z-]*[A-Za-z-][0-9A-Za-z-]*", fullmatch=True).filter(
        lambda s: 0 < len(s) <= 8
    ),
)

versions = st.builds(
    Version,
    major=st.integers(min_value=0, max_value=40),
    minor=st.integers(min_value=0, max_value=40),
    patch=st.integers(min_value=0, max_value=40),
    prerelease=st.lists(prerelease_ident, max_size=3).map(tuple),
    build=st.lists(
        st.from_regex(r"[0-9A-Za-z-]{1,6}", fullmatch=True), max_size=2
    ).map(tuple),
)


@given(versions)
def test_parse_render_round_trip(v):
    assert parse_version(v.render()) == v


@given(versions, versions)
def test_compare_antisymmetric(a, b):
    assert compare(a, b) == -compare(b, a)


@given(versions, versions, versions)
def test_compare_transitive(a, b, c):
    if compare(a, b) <= 0 and compare(b, c) <= 0:
        assert compare(a, c) <= 0


@given(versions)
def test_compare_reflexive_equal(v):
    assert compare(v, v) == 0
    stripped = Version(v.major, v.minor, v.patch, v.prerelease)
    assert compare(v, stripped) == 0  # build never affects precedence
