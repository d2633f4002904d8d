"""The compiled kernel and its pure-Python twin must be indistinguishable."""

import random
import subprocess
import sys

import pytest

from depthreat.semver import Version, parse_range
from depthreat.semver import _kernel_py

try:
    from depthreat.semver import _kernel_cy
except ImportError:
    _kernel_cy = None

compiled = pytest.mark.skipif(
    _kernel_cy is None, reason="compiled kernel not built"
)

RANGES = [
    "*",
    ">0.5.0",
    ">=1.0.0 <2.0.0",
    "^1.2.0",
    "~0.4.1",
    "=1.1.1",
    "^0.0.2",
    "1.x || >=2.1.0",
    ">=1.0.0-alpha.1",
    "<0.0.0-0",
]


def _random_version(rng):
    return Version(
        rng.randint(0, 2),
        rng.randint(0, 4),
        rng.randint(0, 4),
        prerelease=(
            tuple(
                rng.choice(["alpha", "beta", 0, 1, 7])
                for _ in range(rng.randint(1, 2))
            )
            if rng.random() < 0.3
            else ()
        ),
    )


@compiled
def test_satisfies_agreement():
    rng = random.Random(42)
    encoded_ranges = [parse_range(text)._encoded for text in RANGES]
    for _ in range(3000):
        version = _random_version(rng)
        encoded = rng.choice(encoded_ranges)
        args = (version.key, bool(version.prerelease), version.triple, encoded)
        assert _kernel_cy.satisfies_key(*args) == _kernel_py.satisfies_key(*args)


@compiled
def test_compare_agreement():
    rng = random.Random(43)
    for _ in range(3000):
        a, b = _random_version(rng), _random_version(rng)
        assert _kernel_cy.compare_keys(a.key, b.key) == _kernel_py.compare_keys(
            a.key, b.key
        )


@compiled
def test_best_match_agreement():
    rng = random.Random(44)
    for _ in range(500):
        versions = sorted(
            {_random_version(rng) for _ in range(rng.randint(1, 15))},
            key=lambda v: v.key,
        )
        keys = [v.key for v in versions]
        has_pres = [bool(v.prerelease) for v in versions]
        triples = [v.triple for v in versions]
        released = [float(rng.randint(0, 100)) for _ in versions]
        cutoff = float(rng.randint(0, 100))
        encoded = parse_range(rng.choice(RANGES))._encoded
        args = (keys, has_pres, triples, released, cutoff, encoded)
        assert _kernel_cy.best_match(*args) == _kernel_py.best_match(*args)


def test_pure_python_fallback_selected_by_env():
    probe = (
        "import depthreat.semver as s; print(s.KERNEL_BACKEND)"
    )
    result = subprocess.run(
        [sys.executable, "-c", probe],
        capture_output=True,
        text=True,
        env={"DEPTHREAT_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"},
    )
    assert result.stdout.strip() == "python"


@compiled
def test_compiled_backend_selected_by_default():
    probe = "import depthreat.semver as s; print(s.KERNEL_BACKEND)"
    result = subprocess.run(
        [sys.executable, "-c", probe],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin"},
    )
    assert result.stdout.strip() == "cython"
