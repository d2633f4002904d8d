"""RFC 3339 timestamp handling.

All instants in this package are timezone-aware UTC datetimes at second (or
finer) resolution. Inputs must carry an explicit offset; naive timestamps are
rejected to avoid silent timezone drift.
"""

from __future__ import annotations

import re
from datetime import datetime, timezone

from .errors import FormatError

_DATE_ONLY = re.compile(r"^\d{4}-\d{2}-\d{2}$")


def parse_rfc3339(text: str, *, allow_date: bool = False) -> datetime:
    """Parse an RFC 3339 timestamp into a UTC datetime.

    ``allow_date`` additionally accepts a bare ``YYYY-MM-DD``, expanded to
    midnight UTC (used by the CLI for flags like ``--at 2016-05-01``).
    """
    if not isinstance(text, str):
        raise FormatError(f"expected RFC 3339 timestamp, got {text!r}")
    raw = text.strip()
    if allow_date and _DATE_ONLY.match(raw):
        raw += "T00:00:00+00:00"
    # datetime.fromisoformat in 3.10 does not understand a literal Z offset
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    try:
        parsed = datetime.fromisoformat(raw)
    except ValueError as exc:
        raise FormatError(f"invalid RFC 3339 timestamp {text!r}: {exc}") from None
    if parsed.tzinfo is None:
        raise FormatError(f"timestamp {text!r} lacks a UTC offset")
    return parsed.astimezone(timezone.utc)


def render_rfc3339(instant: datetime) -> str:
    """Render a UTC datetime as a compact RFC 3339 string (trailing Z)."""
    instant = instant.astimezone(timezone.utc)
    if instant.microsecond:
        return instant.strftime("%Y-%m-%dT%H:%M:%S.%f") + "Z"
    return instant.strftime("%Y-%m-%dT%H:%M:%SZ")
