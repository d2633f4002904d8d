# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled comparator kernels; behavioral twin of _kernel_py.

Keys and comparators stay ordinary Python tuples (precedence keys are nested
and variable-length), but the scan loops, operator dispatch, and the
prerelease gate run without interpreter overhead.
"""

BACKEND = "cython"

OP_LT = 0
OP_LE = 1
OP_GT = 2
OP_GE = 3
OP_EQ = 4

cdef extern from "Python.h":
    int PyObject_RichCompareBool(object o1, object o2, int opid) except -1
    cdef int Py_LT
    cdef int Py_LE
    cdef int Py_GT
    cdef int Py_GE
    cdef int Py_EQ


cdef inline int _rich_op(int op):
    if op == OP_LT:
        return Py_LT
    if op == OP_LE:
        return Py_LE
    if op == OP_GT:
        return Py_GT
    if op == OP_GE:
        return Py_GE
    return Py_EQ


def compare_keys(a, b):
    """Three-way precedence comparison of two version keys."""
    if PyObject_RichCompareBool(a, b, Py_LT):
        return -1
    if PyObject_RichCompareBool(a, b, Py_GT):
        return 1
    return 0


cdef bint _satisfies(object vkey, bint has_pre, object triple, tuple alternatives):
    cdef tuple comparators, comp
    cdef bint matched, allowed
    cdef int op
    for comparators in alternatives:
        matched = True
        for comp in comparators:
            op = <int> comp[0]
            if not PyObject_RichCompareBool(vkey, comp[1], _rich_op(op)):
                matched = False
                break
        if not matched:
            continue
        if has_pre:
            allowed = False
            for comp in comparators:
                if comp[2] and PyObject_RichCompareBool(triple, comp[3], Py_EQ):
                    allowed = True
                    break
            if not allowed:
                continue
        return True
    return False


def satisfies_key(vkey, has_pre, triple, alternatives):
    """True iff some comparator-set is fully satisfied by the version."""
    return _satisfies(vkey, has_pre, triple, alternatives)


def best_match(list keys, list has_pres, list triples, list released,
               double cutoff, tuple alternatives):
    """Index of the highest-precedence release visible strictly before
    ``cutoff`` that satisfies the range, or -1.
    """
    cdef Py_ssize_t i
    for i in range(len(keys) - 1, -1, -1):
        if <double> released[i] < cutoff and _satisfies(
            keys[i], <bint> has_pres[i], triples[i], alternatives
        ):
            return i
    return -1
