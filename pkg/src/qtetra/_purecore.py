"""Pure-Python hot loops; the reference the compiled ``_speedups`` module mirrors."""


def qpoch(z, b, m):
    """(z; b)_m for any integer m, with (z; b)_m = 1/(z b^m; b)_{-m} for m < 0."""
    if m >= 0:
        acc = 1
        zs = z
        for _ in range(m):
            acc = acc * (1 - zs)
            zs = zs * b
        return acc
    acc = 1
    zs = z * b ** m
    for _ in range(-m):
        acc = acc * (1 - zs)
        zs = zs * b
    if acc == 0:
        raise ZeroDivisionError("vanishing q-shifted factorial in a denominator")
    return 1 / acc


def qpoch_inv(z, b, m):
    """1 / (z; b)_m.  Finite (possibly zero) for every m < 0."""
    if m <= 0:
        acc = 1
        zs = z * b ** m
        for _ in range(-m):
            acc = acc * (1 - zs)
            zs = zs * b
        return acc
    acc = 1
    zs = z
    for _ in range(m):
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


def fiber_sum(terms, table, key_prefix):
    """sum(c * table[key_prefix + mid]) over (mid, c) in terms; a missing key raises KeyError."""
    acc = 0
    get = table.get
    for mid, c in terms:
        v = get(key_prefix + mid)
        if v is None:
            raise KeyError(key_prefix + mid)
        if v:
            acc = acc + c * v
    return acc


def pair_sweep(fwd, trn, cache, R, max_failures=0):
    """Compare sum_mid R(out|mid) M[mid,in] with sum_mid N[out,mid] R(mid|in).

    ``fwd`` is [(in, [(mid, coef)])], ``trn`` is [(out, [(mid, coef)])]; missing
    R values are computed through ``R(*key)`` (which fills ``cache``).
    Returns (pairs checked, [(out, in, lhs, rhs)] failures).
    """
    failures = []
    pairs = 0
    get = cache.get
    for inp, f_items in fwd:
        for out, t_items in trn:
            lhs = 0
            for mid, coef in f_items:
                key = out + mid
                val = get(key)
                if val is None:
                    val = R(*key)
                lhs = lhs + val * coef
            rhs = 0
            for mid, coef in t_items:
                key = mid + inp
                val = get(key)
                if val is None:
                    val = R(*key)
                rhs = rhs + coef * val
            pairs += 1
            if lhs != rhs:
                failures.append((out, inp, lhs, rhs))
                if max_failures and len(failures) >= max_failures:
                    return pairs, failures
    return pairs, failures
