import numpy as np
import pytest

from ampdist.algebra import UnitVector3


@pytest.fixture
def rng():
    return np.random.default_rng(20260811)


def random_unit(rng) -> UnitVector3:
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return UnitVector3(*v)


def random_direction_set(rng, n):
    from ampdist.spin import DirectionSet

    # Rejection-sample until all pairs are distinct and non-antipodal.
    while True:
        try:
            return DirectionSet([random_unit(rng) for _ in range(n)])
        except ValueError:
            continue
