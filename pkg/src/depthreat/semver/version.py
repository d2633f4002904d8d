"""Strict semver version parsing, rendering, and precedence.

Versions follow the semver 2.0.0 grammar with two tolerated extras mirroring
how npm manifests are written in practice: a single leading ``v`` and
surrounding whitespace. Nothing else of npm's "loose" mode is emulated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..errors import MalformedVersionError

# node's Number.MAX_SAFE_INTEGER; larger components are rejected, not clamped
MAX_COMPONENT = 2**53 - 1

_IDENT = r"(?:0|[1-9]\d*|\d*[A-Za-z-][0-9A-Za-z-]*)"
_VERSION_RE = re.compile(
    r"^\s*v?"
    r"(?P<major>0|[1-9]\d*)\.(?P<minor>0|[1-9]\d*)\.(?P<patch>0|[1-9]\d*)"
    rf"(?:-(?P<pre>{_IDENT}(?:\.{_IDENT})*))?"
    r"(?:\+(?P<build>[0-9A-Za-z-]+(?:\.[0-9A-Za-z-]+)*))?"
    r"\s*$"
)

_NUMERIC = re.compile(r"^(?:0|[1-9]\d*)$")

# Precedence-key tags: numeric prerelease ids sort below alphanumeric ones,
# and the absence of a prerelease sorts above both.
_TAG_NUMERIC = 0
_TAG_ALPHA = 1
_TAG_RELEASE = 2

_RELEASE_KEY = ((_TAG_RELEASE, 0, ""),)


def _identifier_key(ident: int | str) -> tuple[int, int, str]:
    if isinstance(ident, int):
        return (_TAG_NUMERIC, ident, "")
    return (_TAG_ALPHA, 0, ident)


@dataclass(frozen=True)
class Version:
    """A parsed semver version.

    Equality compares all fields including build metadata; the ordering
    operators and :func:`compare` follow semver precedence, which ignores
    build metadata entirely.
    """

    major: int
    minor: int
    patch: int
    prerelease: tuple[int | str, ...] = ()
    build: tuple[str, ...] = ()
    key: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.prerelease:
            pre_key = tuple(_identifier_key(i) for i in self.prerelease)
        else:
            pre_key = _RELEASE_KEY
        object.__setattr__(
            self, "key", (self.major, self.minor, self.patch, pre_key)
        )

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.major, self.minor, self.patch)

    def render(self) -> str:
        text = f"{self.major}.{self.minor}.{self.patch}"
        if self.prerelease:
            text += "-" + ".".join(str(i) for i in self.prerelease)
        if self.build:
            text += "+" + ".".join(self.build)
        return text

    def __str__(self) -> str:
        return self.render()

    def __lt__(self, other: "Version") -> bool:
        return self.key < other.key

    def __le__(self, other: "Version") -> bool:
        return self.key <= other.key

    def __gt__(self, other: "Version") -> bool:
        return self.key > other.key

    def __ge__(self, other: "Version") -> bool:
        return self.key >= other.key


def parse_version(text: str) -> Version:
    """Parse a strict semver string (one leading ``v`` tolerated).

    Raises MalformedVersionError on anything else, including partials like
    ``1.2``, leading zeros, and components beyond 2**53 - 1.
    """
    if not isinstance(text, str):
        raise MalformedVersionError(f"expected a version string, got {text!r}")
    match = _VERSION_RE.match(text)
    if not match:
        raise MalformedVersionError(f"invalid version: {text!r}")
    major, minor, patch = (
        int(match.group("major")),
        int(match.group("minor")),
        int(match.group("patch")),
    )
    if max(major, minor, patch) > MAX_COMPONENT:
        raise MalformedVersionError(f"version component too large in {text!r}")
    prerelease: tuple[int | str, ...] = ()
    if match.group("pre") is not None:
        prerelease = tuple(
            int(part) if _NUMERIC.match(part) else part
            for part in match.group("pre").split(".")
        )
        for part in prerelease:
            if isinstance(part, int) and part > MAX_COMPONENT:
                raise MalformedVersionError(
                    f"prerelease component too large in {text!r}"
                )
    build: tuple[str, ...] = ()
    if match.group("build") is not None:
        build = tuple(match.group("build").split("."))
    return Version(major, minor, patch, prerelease, build)


def compare(a: Version, b: Version) -> int:
    """Semver precedence: -1, 0, or 1. Build metadata never participates."""
    if a.key < b.key:
        return -1
    if a.key > b.key:
        return 1
    return 0
