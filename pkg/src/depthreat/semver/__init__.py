"""node-semver compatible versions and ranges.

All values are immutable after construction and every operation is a pure
function, so the whole module is safe for unrestricted concurrent use.
"""

from ._backend import KERNEL_BACKEND, kernel
from .ranges import (
    Comparator,
    VersionRange,
    parse_range,
    render_range,
    satisfies,
)
from .version import MAX_COMPONENT, Version, compare, parse_version

__all__ = [
    "Comparator",
    "KERNEL_BACKEND",
    "MAX_COMPONENT",
    "Version",
    "VersionRange",
    "compare",
    "kernel",
    "parse_range",
    "parse_version",
    "render_range",
    "satisfies",
]
