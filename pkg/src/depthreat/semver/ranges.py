"""node-semver range expressions: parsing, desugaring, and evaluation.

Supported grammar: exact versions, primitive comparators (< <= > >= =),
hyphen ranges, x-ranges and ``*``, bare partials, tilde (also the ``~>``
spelling npm accepts), caret, whitespace conjunction, and ``||`` disjunction.
All sugar desugars to primitive comparator-sets at parse time, so evaluation
only ever sees ``(op, version)`` conjuncts.

Non-semver specifiers (git/tarball/URL/dist-tag/...) raise
UnsupportedSpecifierError so callers can count and exclude them instead of
conflating them with typos.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import MalformedRangeError, UnsupportedSpecifierError
from . import _kernel_py
from ._backend import kernel
from .version import _IDENT, MAX_COMPONENT, _NUMERIC, Version

OPERATORS = ("<", "<=", ">", ">=", "=")

_OP_CODES = {
    "<": _kernel_py.OP_LT,
    "<=": _kernel_py.OP_LE,
    ">": _kernel_py.OP_GT,
    ">=": _kernel_py.OP_GE,
    "=": _kernel_py.OP_EQ,
}

_XR = r"(?:0|[1-9]\d*|x|X|\*)"
_PARTIAL_RE = re.compile(
    rf"^v?(?P<major>{_XR})"
    rf"(?:\.(?P<minor>{_XR})"
    rf"(?:\.(?P<patch>{_XR})"
    rf"(?:-(?P<pre>{_IDENT}(?:\.{_IDENT})*))?"
    r"(?:\+(?P<build>[0-9A-Za-z-]+(?:\.[0-9A-Za-z-]+)*))?"
    r")?)?$"
)

_SIMPLE_OP_RE = re.compile(r"^(<=|>=|<|>|=|\^|~>|~)\s*")

# Specifier shapes npm accepts that are not semver ranges at all.
_URLISH_RE = re.compile(
    r"^(?:git(?:\+[a-z]+)?:|https?:|file:|npm:|workspace:|link:|github:)",
    re.IGNORECASE,
)
_DIST_TAG_RE = re.compile(r"^[A-Za-z][0-9A-Za-z_.-]*$")

# matches nothing: < 0.0.0-0 is below every version, prereleases included
_IMPOSSIBLE = ("<", Version(0, 0, 0, (0,)))


@dataclass(frozen=True)
class Comparator:
    """One primitive conjunct: operator plus a full version."""

    op: str
    version: Version

    def render(self) -> str:
        return f"{self.op}{self.version.render()}"

    def encode(self) -> tuple:
        return (
            _OP_CODES[self.op],
            self.version.key,
            bool(self.version.prerelease),
            self.version.triple,
        )


@dataclass(frozen=True)
class VersionRange:
    """Disjunction of comparator-sets; an empty set means "any release"."""

    alternatives: tuple[tuple[Comparator, ...], ...]
    _encoded: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        encoded = tuple(
            tuple(comp.encode() for comp in comps) for comps in self.alternatives
        )
        object.__setattr__(self, "_encoded", encoded)

    def render(self) -> str:
        parts = []
        for comps in self.alternatives:
            parts.append(" ".join(c.render() for c in comps) if comps else "*")
        return " || ".join(parts)

    def __str__(self) -> str:
        return self.render()


def satisfies(version: Version, version_range: VersionRange) -> bool:
    """npm semantics: some comparator-set fully holds, and a prerelease
    version additionally needs a prerelease comparator on its exact triple
    within that set."""
    return kernel.satisfies_key(
        version.key,
        bool(version.prerelease),
        version.triple,
        version_range._encoded,
    )


def parse_range(text: str) -> VersionRange:
    """Parse and desugar a range expression.

    Raises UnsupportedSpecifierError for non-range specifiers and
    MalformedRangeError for anything else that fails the grammar.
    """
    if not isinstance(text, str):
        raise MalformedRangeError(f"expected a range string, got {text!r}")
    stripped = text.strip()
    _reject_unsupported(stripped)
    alternatives = []
    for part in stripped.split("||"):
        try:
            alternatives.append(tuple(_parse_comparator_set(part.strip())))
        except MalformedRangeError:
            if _looks_like_dist_tag(stripped):
                raise UnsupportedSpecifierError(
                    f"dist-tag specifier is not a semver range: {text!r}"
                ) from None
            raise
    return VersionRange(tuple(alternatives))


def render_range(version_range: VersionRange) -> str:
    return version_range.render()


def _reject_unsupported(text: str) -> None:
    if _URLISH_RE.match(text):
        raise UnsupportedSpecifierError(f"non-registry specifier: {text!r}")
    if "/" in text:
        # github owner/repo shorthand
        raise UnsupportedSpecifierError(f"non-registry specifier: {text!r}")
    if text.endswith((".tgz", ".tar.gz", ".tar")):
        raise UnsupportedSpecifierError(f"tarball specifier: {text!r}")


def _looks_like_dist_tag(text: str) -> bool:
    # "latest", "next", "beta", ... look like names, not like broken ranges
    return bool(_DIST_TAG_RE.match(text)) and not _PARTIAL_RE.match(text)


def _parse_comparator_set(text: str) -> list[Comparator]:
    if not text:
        return []
    tokens = _merge_operator_tokens(text.split())
    if "-" in tokens:
        return _desugar_hyphen(tokens, text)
    comparators: list[Comparator] = []
    for token in tokens:
        comparators.extend(_desugar_simple(token))
    return comparators


def _merge_operator_tokens(tokens: list[str]) -> list[str]:
    """Reattach operators written with a space, e.g. ">= 1.2.3"."""
    merged: list[str] = []
    pending = None
    for token in tokens:
        if pending is not None:
            merged.append(pending + token)
            pending = None
        elif token in ("<", "<=", ">", ">=", "=", "^", "~", "~>"):
            pending = token
        else:
            merged.append(token)
    if pending is not None:
        raise MalformedRangeError(f"dangling operator in range: {pending!r}")
    return merged


class _Partial:
    """An x-range component list: None marks x/X/*/missing positions."""

    __slots__ = ("major", "minor", "patch", "prerelease")

    def __init__(self, major, minor, patch, prerelease):
        self.major = major
        self.minor = minor
        self.patch = patch
        self.prerelease = prerelease

    def exact_version(self) -> Version:
        return Version(self.major, self.minor, self.patch, self.prerelease)


def _parse_partial(token: str) -> _Partial:
    match = _PARTIAL_RE.match(token)
    if not match:
        raise MalformedRangeError(f"invalid range component: {token!r}")

    def component(name: str):
        raw = match.group(name)
        if raw is None or raw in ("x", "X", "*"):
            return None
        value = int(raw)
        if value > MAX_COMPONENT:
            raise MalformedRangeError(f"component too large: {token!r}")
        return value

    major, minor, patch = component("major"), component("minor"), component("patch")
    prerelease: tuple[int | str, ...] = ()
    if match.group("pre") is not None:
        if patch is None:
            raise MalformedRangeError(
                f"prerelease on a wildcard version: {token!r}"
            )
        prerelease = tuple(
            int(p) if _NUMERIC.match(p) else p for p in match.group("pre").split(".")
        )
    # a wildcard in a higher position blanks everything after it
    if major is None:
        minor = patch = None
    elif minor is None:
        patch = None
    return _Partial(major, minor, patch, prerelease)


def _cmp(op: str, major: int, minor: int, patch: int, pre=()) -> Comparator:
    return Comparator(op, Version(major, minor, patch, tuple(pre)))


def _desugar_simple(token: str) -> list[Comparator]:
    op_match = _SIMPLE_OP_RE.match(token)
    op = op_match.group(1) if op_match else "="
    rest = token[op_match.end():] if op_match else token
    p = _parse_partial(rest)

    if op in ("~", "~>"):
        return _desugar_tilde(p)
    if op == "^":
        return _desugar_caret(p)
    return _desugar_primitive(op, p)


def _desugar_primitive(op: str, p: _Partial) -> list[Comparator]:
    if p.major is None:
        if op in (">", "<"):
            return [Comparator(*_IMPOSSIBLE)]
        return []  # * and its >=/<=/= variants admit everything
    if p.minor is None:
        if op == "=":
            return [_cmp(">=", p.major, 0, 0), _cmp("<", p.major + 1, 0, 0)]
        if op == ">":
            return [_cmp(">=", p.major + 1, 0, 0)]
        if op == ">=":
            return [_cmp(">=", p.major, 0, 0)]
        if op == "<":
            return [_cmp("<", p.major, 0, 0)]
        return [_cmp("<", p.major + 1, 0, 0)]  # <=
    if p.patch is None:
        if op == "=":
            return [_cmp(">=", p.major, p.minor, 0), _cmp("<", p.major, p.minor + 1, 0)]
        if op == ">":
            return [_cmp(">=", p.major, p.minor + 1, 0)]
        if op == ">=":
            return [_cmp(">=", p.major, p.minor, 0)]
        if op == "<":
            return [_cmp("<", p.major, p.minor, 0)]
        return [_cmp("<", p.major, p.minor + 1, 0)]  # <=
    return [Comparator(op, p.exact_version())]


def _desugar_tilde(p: _Partial) -> list[Comparator]:
    if p.major is None:
        return []
    if p.minor is None:
        return [_cmp(">=", p.major, 0, 0), _cmp("<", p.major + 1, 0, 0)]
    if p.patch is None:
        return [_cmp(">=", p.major, p.minor, 0), _cmp("<", p.major, p.minor + 1, 0)]
    return [
        Comparator(">=", p.exact_version()),
        _cmp("<", p.major, p.minor + 1, 0),
    ]


def _desugar_caret(p: _Partial) -> list[Comparator]:
    if p.major is None:
        return []
    if p.minor is None:
        return [_cmp(">=", p.major, 0, 0), _cmp("<", p.major + 1, 0, 0)]
    if p.patch is None:
        if p.major > 0:
            return [_cmp(">=", p.major, p.minor, 0), _cmp("<", p.major + 1, 0, 0)]
        return [_cmp(">=", 0, p.minor, 0), _cmp("<", 0, p.minor + 1, 0)]
    lower = Comparator(">=", p.exact_version())
    if p.major > 0:
        return [lower, _cmp("<", p.major + 1, 0, 0)]
    if p.minor > 0:
        return [lower, _cmp("<", 0, p.minor + 1, 0)]
    return [lower, _cmp("<", 0, 0, p.patch + 1)]


def _desugar_hyphen(tokens: list[str], text: str) -> list[Comparator]:
    if len(tokens) != 3 or tokens[1] != "-":
        raise MalformedRangeError(f"invalid hyphen range: {text!r}")
    low, high = _parse_partial(tokens[0]), _parse_partial(tokens[2])
    comparators: list[Comparator] = []
    if low.major is not None:
        comparators.append(
            Comparator(
                ">=", Version(low.major, low.minor or 0, low.patch or 0, low.prerelease)
            )
        )
    if high.major is None:
        pass  # open upper end
    elif high.minor is None:
        comparators.append(_cmp("<", high.major + 1, 0, 0))
    elif high.patch is None:
        comparators.append(_cmp("<", high.major, high.minor + 1, 0))
    else:
        comparators.append(Comparator("<=", high.exact_version()))
    return comparators
