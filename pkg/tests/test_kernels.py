"""Backend equivalence and exactness of the enumeration kernel."""

import itertools
import math

import numpy as np
import pytest

from ampdist import _backend, _kernels_py
from ampdist.algebra import UnitVector3

from conftest import random_unit

try:
    from ampdist import _kernels as _compiled
except ImportError:
    _compiled = None


def reference_sum(components, fixed):
    """Independent oracle: explicit itertools enumeration plus math.fsum."""
    n = len(components)
    free = [i for i in range(n) if i not in fixed]
    totals = []
    for c in range(3):
        terms = []
        for signs_free in itertools.product((1, -1), repeat=len(free)):
            signs = dict(fixed)
            signs.update(zip(free, signs_free))
            for i in range(n):
                terms.append(signs[i] * components[i][c])
        totals.append(math.fsum(terms))
    return tuple(totals)


def random_components(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def test_backend_matches_reference(rng):
    for _ in range(40):
        n = int(rng.integers(1, 10))
        comps = random_components(rng, n)
        fixed = {}
        if n >= 1 and rng.random() < 0.8:
            fixed[int(rng.integers(0, n))] = int(rng.choice([1, -1]))
        if n >= 3 and rng.random() < 0.5:
            fixed[int(rng.integers(0, n))] = int(rng.choice([1, -1]))
        assert _backend.constrained_spin_sum(comps, fixed) == reference_sum(
            comps, fixed
        )


@pytest.mark.skipif(_compiled is None, reason="compiled kernel not built")
def test_compiled_matches_python_bitwise(rng):
    for _ in range(60):
        n = int(rng.integers(1, 14))
        comps = np.ascontiguousarray(random_components(rng, n))
        fixed = {0: 1} if n == 1 else {0: 1, int(rng.integers(1, n)): -1}
        idx = np.fromiter(fixed.keys(), dtype=np.int64)
        sgn = np.fromiter(fixed.values(), dtype=np.int64)
        assert _compiled.constrained_spin_sum(
            comps, idx, sgn
        ) == _kernels_py.constrained_spin_sum(comps, idx, sgn)


def test_free_axes_cancel_exactly(rng):
    # With every axis free the exact sum is zero in every component.
    comps = random_components(rng, 6)
    assert _backend.constrained_spin_sum(comps, {}) == (0.0, 0.0, 0.0)


def test_all_axes_pinned_single_configuration(rng):
    comps = random_components(rng, 5)
    fixed = {i: int(rng.choice([1, -1])) for i in range(5)}
    got = _backend.constrained_spin_sum(comps, fixed)
    want = tuple(
        math.fsum(fixed[i] * comps[i][c] for i in range(5)) for c in range(3)
    )
    assert got == want


@pytest.mark.skipif(_compiled is None, reason="compiled kernel not built")
def test_compiled_rejects_bad_input():
    comps = np.zeros((3, 3))
    with pytest.raises(ValueError):
        _compiled.constrained_spin_sum(
            comps, np.array([5], dtype=np.int64), np.array([1], dtype=np.int64)
        )


def test_backend_name_reported():
    assert _backend.backend_name() in ("cython", "python")


def test_env_var_forces_python_backend():
    import os
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "from ampdist import backend_name; print(backend_name())"],
        env={**os.environ, "AMPDIST_PURE_PYTHON": "1"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"
