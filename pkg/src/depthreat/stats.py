"""Lifespan segmentation, cohort aggregation, and the two sample tests
used to compare threat-level distributions (one-sided Mann-Whitney U and
Cliff's delta)."""

from __future__ import annotations

import enum
import itertools
import math
import statistics
from dataclasses import dataclass
from datetime import datetime

from .assessment import BlameKind, SnapshotAssessment, ThreatLevel
from .errors import DegenerateLifespanError, EmptySampleError

# smallest p the reports render numerically; anything below prints as
# "< 2.2e-16"
P_VALUE_FLOOR = 2.2e-16

# exact permutation enumeration is feasible and preferred up to this pooled
# sample size; beyond it the normal approximation with tie and continuity
# corrections takes over
EXACT_LIMIT = 16


@dataclass(frozen=True)
class SnapshotSchedule:
    application: str
    snapshot_times: tuple[datetime, ...]


def segment_lifespan(
    first: datetime, last: datetime, k: int, application: str = ""
) -> SnapshotSchedule:
    """k instants equally spaced over (first, last], measured in elapsed
    time: t_i = first + i*(last-first)/k. The k-th time is exactly last."""
    if k < 1:
        raise ValueError(f"snapshot count must be >= 1, got {k}")
    if first >= last:
        raise DegenerateLifespanError(
            f"lifespan must satisfy first < last ({first} >= {last})"
        )
    span = last - first
    times = tuple(first + (span * i) / k for i in range(1, k + 1))
    return SnapshotSchedule(application=application, snapshot_times=times)


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        midrank = (i + j) / 2 + 1
        for position in order[i : j + 1]:
            ranks[position] = midrank
        i = j + 1
    return ranks


def mann_whitney_one_sided(x, y) -> tuple[float, float]:
    """U statistic for x and the one-sided p-value under the alternative
    that x is stochastically greater than y.

    Uses full permutation enumeration for pooled sizes up to 16 and the
    normal approximation (midrank ties, tie-corrected variance, continuity
    correction) beyond that.
    """
    x, y = list(x), list(y)
    if not x or not y:
        raise EmptySampleError("both samples must be non-empty")
    n1, n2 = len(x), len(y)
    pooled = x + y
    ranks = _midranks(pooled)
    rank_sum_x = sum(ranks[:n1])
    u_x = rank_sum_x - n1 * (n1 + 1) / 2

    if n1 + n2 <= EXACT_LIMIT:
        p = _exact_p(ranks, n1, u_x)
    else:
        p = _normal_p(pooled, ranks, n1, n2, u_x)
    return u_x, p


def _exact_p(ranks: list[float], n1: int, u_obs: float) -> float:
    """P(U >= observed) over all equally likely assignments of which pooled
    positions belong to x; ties are inherently honored because the midranks
    stay fixed."""
    offset = n1 * (n1 + 1) / 2
    at_least = 0
    total = 0
    for combo in itertools.combinations(range(len(ranks)), n1):
        total += 1
        u = sum(ranks[i] for i in combo) - offset
        # tolerance guards float summation of midranks (halves are exact,
        # but stay safe)
        if u >= u_obs - 1e-9:
            at_least += 1
    return at_least / total


def _normal_p(pooled, ranks, n1: int, n2: int, u_x: float) -> float:
    n = n1 + n2
    tie_sizes = {}
    for value in pooled:
        tie_sizes[value] = tie_sizes.get(value, 0) + 1
    tie_term = sum(t**3 - t for t in tie_sizes.values())
    variance = (n1 * n2 / 12) * ((n + 1) - tie_term / (n * (n - 1)))
    mean = n1 * n2 / 2
    if variance <= 0:
        return 1.0 if u_x <= mean else 0.0
    z = (u_x - mean - 0.5) / math.sqrt(variance)
    return 0.5 * math.erfc(z / math.sqrt(2))


class Magnitude(enum.Enum):
    NEGLIGIBLE = "negligible"
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"


# |delta| thresholds; a boundary value stays in the lower bucket and moves
# up only when strictly exceeded
_MAGNITUDE_STEPS = (
    (0.147, Magnitude.NEGLIGIBLE),
    (0.33, Magnitude.SMALL),
    (0.474, Magnitude.MEDIUM),
)


def magnitude_of(delta: float) -> Magnitude:
    size = abs(delta)
    for threshold, magnitude in _MAGNITUDE_STEPS:
        if size <= threshold:
            return magnitude
    return Magnitude.LARGE


def cliffs_delta(x, y) -> tuple[float, Magnitude]:
    """delta = (#{x_i > y_j} - #{x_i < y_j}) / (|x| * |y|), with the usual
    magnitude labels."""
    x, y = list(x), list(y)
    if not x or not y:
        raise EmptySampleError("both samples must be non-empty")
    greater = less = 0
    for xi in x:
        for yj in y:
            if xi > yj:
                greater += 1
            elif xi < yj:
                less += 1
    delta = (greater - less) / (len(x) * len(y))
    return delta, magnitude_of(delta)


@dataclass(frozen=True)
class StatResult:
    u_statistic: float
    p_value: float
    delta: float
    magnitude: Magnitude


def compare_samples(x, y) -> StatResult:
    u, p = mann_whitney_one_sided(x, y)
    delta, magnitude = cliffs_delta(x, y)
    return StatResult(u_statistic=u, p_value=p, delta=delta, magnitude=magnitude)


def format_p_value(p: float) -> str:
    """Report rendering: values below the floor print as an inequality."""
    if p < P_VALUE_FLOOR:
        return "< 2.2e-16"
    return format(p, ".6g")


# -- cohort aggregation -------------------------------------------------------


@dataclass(frozen=True)
class CohortSummary:
    """One cohort of applications assessed at aligned snapshot times."""

    schedule_index: int
    n_applications: int
    n_total: int
    m_total: int
    vulnerable_applications: int
    applications: tuple[str, ...]
    vulnerable_fractions: tuple[float, ...]  # per app with N > 0, aligned
    fraction_applications: tuple[str, ...]
    per_level_fractions: dict[ThreatLevel, tuple[float, ...]]  # apps with M > 0
    package_blame: int
    application_blame: int
    major_barrier: int

    @property
    def vulnerable_application_fraction(self) -> float | None:
        if self.n_applications == 0:
            return None
        return self.vulnerable_applications / self.n_applications

    @property
    def median_vulnerable_fraction(self) -> float | None:
        if not self.vulnerable_fractions:
            return None
        return statistics.median(self.vulnerable_fractions)

    def median_level_fraction(self, level: ThreatLevel) -> float | None:
        values = self.per_level_fractions[level]
        if not values:
            return None
        return statistics.median(values)


def summarize_cohort(
    assessments: list[SnapshotAssessment], schedule_index: int = 0
) -> CohortSummary:
    """Aggregate per-application snapshot assessments taken at the same
    schedule position. Applications that resolved zero dependencies
    contribute to counts but not to fraction distributions."""
    fractions = []
    fraction_apps = []
    per_level: dict[ThreatLevel, list[float]] = {level: [] for level in ThreatLevel}
    n_total = m_total = vulnerable_apps = 0
    package_blame = application_blame = major_barrier = 0
    for snapshot in assessments:
        n, m = snapshot.n_dependencies, snapshot.m_vulnerable
        n_total += n
        m_total += m
        if m >= 1:
            vulnerable_apps += 1
        if n > 0:
            fractions.append(m / n)
            fraction_apps.append(snapshot.application)
        if m > 0:
            counts = snapshot.per_level_counts
            for level in ThreatLevel:
                per_level[level].append(counts[level] / m)
        for assessment in snapshot.assessments:
            if assessment.blame is None:
                continue
            if assessment.blame.kind is BlameKind.PACKAGE:
                package_blame += 1
            else:
                application_blame += 1
                if assessment.blame.major_barrier:
                    major_barrier += 1
    return CohortSummary(
        schedule_index=schedule_index,
        n_applications=len(assessments),
        n_total=n_total,
        m_total=m_total,
        vulnerable_applications=vulnerable_apps,
        applications=tuple(s.application for s in assessments),
        vulnerable_fractions=tuple(fractions),
        fraction_applications=tuple(fraction_apps),
        per_level_fractions={
            level: tuple(values) for level, values in per_level.items()
        },
        package_blame=package_blame,
        application_blame=application_blame,
        major_barrier=major_barrier,
    )
