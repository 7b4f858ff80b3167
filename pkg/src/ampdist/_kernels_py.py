"""Pure-Python fallback for the sign-configuration enumeration kernel.

The kernel sums s_1*v_1 + ... + s_n*v_n componentwise over every sign
configuration (s_1, ..., s_n) compatible with a set of pinned signs.  The
accumulation is exact (math.fsum), so the returned triple is the correctly
rounded value of the mathematical sum.  The compiled kernel implements the
same algorithm and produces bit-identical results; this module is only
slower.
"""

from __future__ import annotations

import math

BACKEND_NAME = "python"


def constrained_spin_sum(components, fixed_idx, fixed_sign):
    """Exact componentwise sum of signed direction vectors over configurations.

    components: (n, 3) array-like of direction components.
    fixed_idx / fixed_sign: parallel sequences pinning axis ``fixed_idx[k]``
    to sign ``fixed_sign[k]`` (+1 or -1) in every configuration; all other
    axes range over both signs.

    Returns the (x, y, z) triple of correctly rounded sums over all
    2**(n - len(fixed_idx)) configurations.
    """
    rows = [(float(r[0]), float(r[1]), float(r[2])) for r in components]
    n = len(rows)
    pinned = {int(i): int(s) for i, s in zip(fixed_idx, fixed_sign)}
    free = [i for i in range(n) if i not in pinned]
    base = [pinned.get(i, 1) for i in range(n)]
    count = 1 << len(free)

    def terms(c):
        signs = list(base)
        for cfg in range(count):
            for bit, axis in enumerate(free):
                signs[axis] = 1 if (cfg >> bit) & 1 == 0 else -1
            for i in range(n):
                yield signs[i] * rows[i][c]

    return tuple(math.fsum(terms(c)) for c in range(3))
