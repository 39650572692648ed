# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the loops in ``_purecore``; identical semantics."""


def qpoch(z, b, long m):
    cdef long s
    if m >= 0:
        acc = 1
        zs = z
        for s in range(m):
            acc = acc * (1 - zs)
            zs = zs * b
        return acc
    acc = 1
    zs = z * b ** m
    for s in range(-m):
        acc = acc * (1 - zs)
        zs = zs * b
    if acc == 0:
        raise ZeroDivisionError("vanishing q-shifted factorial in a denominator")
    return 1 / acc


def qpoch_inv(z, b, long m):
    cdef long s
    if m <= 0:
        acc = 1
        zs = z * b ** m
        for s in range(-m):
            acc = acc * (1 - zs)
            zs = zs * b
        return acc
    acc = 1
    zs = z
    for s in range(m):
        acc = acc * (1 - zs)
        zs = zs * b
    if acc == 0:
        raise ZeroDivisionError("vanishing q-shifted factorial in a denominator")
    return 1 / acc


def dot(coefs, values):
    acc = 0
    for c, v in zip(coefs, values):
        if v:
            acc = acc + c * v
    return acc


def fiber_sum(list terms, dict table, tuple key_prefix):
    cdef tuple mid
    acc = 0
    for mid, c in terms:
        v = table.get(key_prefix + mid)
        if v is None:
            raise KeyError(key_prefix + mid)
        if v:
            acc = acc + c * v
    return acc


def pair_sweep(list fwd, list trn, dict cache, R, long max_failures=0):
    cdef list failures = []
    cdef long pairs = 0
    cdef tuple inp, out, mid, key
    cdef list f_items, t_items
    for inp, f_items in fwd:
        for out, t_items in trn:
            lhs = 0
            for mid, coef in f_items:
                key = out + mid
                val = cache.get(key)
                if val is None:
                    val = R(*key)
                lhs = lhs + val * coef
            rhs = 0
            for mid, coef in t_items:
                key = mid + inp
                val = cache.get(key)
                if val is None:
                    val = R(*key)
                rhs = rhs + coef * val
            pairs += 1
            if lhs != rhs:
                failures.append((out, inp, lhs, rhs))
                if max_failures and len(failures) >= max_failures:
                    return pairs, failures
    return pairs, failures
