"""Pure-Python comparator kernels.

These are the hot inner loops of range evaluation and time-travel resolution:
a full registry scan calls them once per release. The compiled twin in
``_kernel_cy.pyx`` implements the exact same contract; the active backend is
chosen in ``_backend``.

Data model shared by both backends:

* a version is passed as its precedence ``key`` (nested tuple, totally
  ordered by Python tuple comparison), a ``has_pre`` flag, and its
  ``(major, minor, patch)`` triple;
* a range is a tuple of comparator-sets; a comparator-set is a tuple of
  ``(op, key, has_pre, triple)`` comparators; an empty comparator-set
  matches any release version.
"""

BACKEND = "python"

OP_LT = 0
OP_LE = 1
OP_GT = 2
OP_GE = 3
OP_EQ = 4


def compare_keys(a, b):
    """Three-way precedence comparison of two version keys."""
    if a < b:
        return -1
    if a > b:
        return 1
    return 0


def _holds(op, vkey, ckey):
    if op == OP_LT:
        return vkey < ckey
    if op == OP_LE:
        return vkey <= ckey
    if op == OP_GT:
        return vkey > ckey
    if op == OP_GE:
        return vkey >= ckey
    return vkey == ckey


def satisfies_key(vkey, has_pre, triple, alternatives):
    """True iff some comparator-set is fully satisfied by the version.

    A version carrying a prerelease only satisfies a comparator-set that
    contains a comparator with a prerelease on the identical triple.
    """
    for comparators in alternatives:
        matched = True
        for op, ckey, c_has_pre, c_triple in comparators:
            if not _holds(op, vkey, ckey):
                matched = False
                break
        if not matched:
            continue
        if has_pre:
            allowed = False
            for _op, _ckey, c_has_pre, c_triple in comparators:
                if c_has_pre and c_triple == triple:
                    allowed = True
                    break
            if not allowed:
                continue
        return True
    return False


def best_match(keys, has_pres, triples, released, cutoff, alternatives):
    """Index of the highest-precedence release visible strictly before
    ``cutoff`` that satisfies the range, or -1.

    ``keys`` must be sorted ascending by precedence; ``released`` holds epoch
    seconds aligned with ``keys``.
    """
    for i in range(len(keys) - 1, -1, -1):
        if released[i] < cutoff and satisfies_key(
            keys[i], has_pres[i], triples[i], alternatives
        ):
            return i
    return -1
