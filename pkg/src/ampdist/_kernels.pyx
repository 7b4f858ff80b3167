# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled sign-configuration enumeration kernel.

Sums s_1*v_1 + ... + s_n*v_n componentwise over every sign configuration
compatible with a set of pinned signs.  Partial sums are kept as Shewchuk
expansions (the algorithm behind math.fsum), so the result is the correctly
rounded value of the mathematical sum and bit-identical to the pure-Python
fallback.
"""

from libc.math cimport fabs

BACKEND_NAME = "cython"

# Nonoverlapping partials span at most ~2098/53 exponent windows, so 64
# slots can never fill up for finite doubles.
DEF MAX_PARTIALS = 64
DEF MAX_DIRECTIONS = 64


cdef inline int _acc_add(double* p, int n, double x) except -1:
    cdef int i = 0
    cdef int j
    cdef double y, hi, lo, yr
    for j in range(n):
        y = p[j]
        if fabs(x) < fabs(y):
            x, y = y, x
        hi = x + y
        yr = hi - x
        lo = y - yr
        if lo != 0.0:
            p[i] = lo
            i += 1
        x = hi
    if x != 0.0:
        if i >= MAX_PARTIALS:
            raise OverflowError("partials overflow in exact accumulation")
        p[i] = x
        i += 1
    return i


cdef inline double _acc_total(double* p, int n):
    # Correctly rounded total of the partials, including the half-even
    # correction across multiple partials (same as math.fsum).
    cdef double hi = 0.0
    cdef double lo = 0.0
    cdef double x, y, yr
    if n > 0:
        n -= 1
        hi = p[n]
        while n > 0:
            x = hi
            n -= 1
            y = p[n]
            hi = x + y
            yr = hi - x
            lo = y - yr
            if lo != 0.0:
                break
        if n > 0 and ((lo < 0.0 and p[n - 1] < 0.0) or
                      (lo > 0.0 and p[n - 1] > 0.0)):
            y = lo * 2.0
            x = hi + y
            yr = x - hi
            if y == yr:
                hi = x
    return hi


def constrained_spin_sum(double[:, ::1] components,
                         long long[::1] fixed_idx,
                         long long[::1] fixed_sign):
    """Exact componentwise sum of signed direction vectors over configurations.

    See ampdist._kernels_py.constrained_spin_sum for the contract; results
    are bit-identical.
    """
    cdef Py_ssize_t n = components.shape[0]
    cdef Py_ssize_t nfix = fixed_idx.shape[0]
    if components.shape[1] != 3:
        raise ValueError("components must have shape (n, 3)")
    if n > MAX_DIRECTIONS:
        raise ValueError("too many directions for the compiled kernel")

    cdef int signs[MAX_DIRECTIONS]
    cdef int is_free[MAX_DIRECTIONS]
    cdef int free_axis[MAX_DIRECTIONS]
    cdef double px[MAX_PARTIALS]
    cdef double py[MAX_PARTIALS]
    cdef double pz[MAX_PARTIALS]
    cdef int ncx = 0, ncy = 0, ncz = 0
    cdef Py_ssize_t i, k, bit
    cdef int n_free = 0
    cdef long long cfg, count
    cdef double s

    for i in range(n):
        signs[i] = 1
        is_free[i] = 1
    for k in range(nfix):
        i = <Py_ssize_t> fixed_idx[k]
        if i < 0 or i >= n:
            raise ValueError("pinned axis index out of range")
        signs[i] = 1 if fixed_sign[k] > 0 else -1
        is_free[i] = 0
    for i in range(n):
        if is_free[i]:
            free_axis[n_free] = <int> i
            n_free += 1

    count = <long long> 1 << n_free
    for cfg in range(count):
        for bit in range(n_free):
            signs[free_axis[bit]] = 1 if ((cfg >> bit) & 1) == 0 else -1
        for i in range(n):
            s = <double> signs[i]
            ncx = _acc_add(px, ncx, s * components[i, 0])
            ncy = _acc_add(py, ncy, s * components[i, 1])
            ncz = _acc_add(pz, ncz, s * components[i, 2])

    return (_acc_total(px, ncx), _acc_total(py, ncy), _acc_total(pz, ncz))
