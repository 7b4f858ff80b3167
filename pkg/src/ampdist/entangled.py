"""Two-particle correlated ensembles and the total-null-spin (singlet) state.

The singlet constrains the pair to opposite signs along every direction:
allowed elementary states are (lam, -lam), with amplitude

    Z_T(lam, -lam) = Z(lam) - Z(-lam) = 2 * Z(lam).

Pair marginals over directions a (particle I) and b (particle II) collapse
to N * (s1*N_a - s2*N_b); Born's rule then gives the standard singlet table
P(s1, s2) = (1 - s1*s2*a.b)/4 and the correlation E(a, b) = -a.b.  Four
correlations combine into the CHSH quantity, which reaches 2*sqrt(2) while
an exhaustive sweep over deterministic local sign assignments never exceeds
2; the gap is the desk-scale Bell demonstration.

Closed forms and brute-force sums over the constrained subset agree bit for
bit, for the same reason as in the single-particle module: exact
accumulation plus power-of-two global factors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from ampdist import _backend
from ampdist.algebra import Quaternion, UnitVector3
from ampdist.ensemble import Axis, ProductSpace
from ampdist.spin import (
    ENUMERATION_LIMIT,
    DirectionSet,
    SpinConfiguration,
    spin_amplitude,
)

__all__ = [
    "SingletSpace",
    "PairOutcome",
    "CorrelationRecord",
    "CHSHResult",
    "singlet_amplitude",
    "pair_marginal",
    "pair_marginal_bruteforce",
    "triple_marginal",
    "triple_marginal_bruteforce",
    "pair_probabilities",
    "correlation",
    "correlation_record",
    "outcome_probability",
    "chsh",
    "classical_bound",
    "classical_strategies",
    "generic_correlated_space",
]

_SAME_TOL = 1e-9


@dataclass(frozen=True)
class PairOutcome:
    """Measured pair: direction and sign for each particle."""

    a: UnitVector3
    sign_i: int
    b: UnitVector3
    sign_ii: int

    def __post_init__(self):
        if self.sign_i not in (1, -1) or self.sign_ii not in (1, -1):
            raise ValueError("outcome signs must be +1 or -1")


@dataclass(frozen=True)
class CorrelationRecord:
    """One row of a correlation table: directions, pair table, E value."""

    a: UnitVector3
    b: UnitVector3
    ppp: float
    ppm: float
    pmp: float
    pmm: float
    e: float


@dataclass(frozen=True)
class CHSHResult:
    s: float
    abs_s: float
    e_ab: float
    e_ab2: float
    e_a2b: float
    e_a2b2: float


class SingletSpace:
    """Pairs (lam, -lam) over a shared direction set."""

    def __init__(self, directions: DirectionSet):
        self.directions = directions

    @property
    def n(self) -> int:
        return len(self.directions)

    def configurations(
        self,
    ) -> Iterator[tuple[SpinConfiguration, SpinConfiguration]]:
        for signs in itertools.product((1, -1), repeat=self.n):
            lam = SpinConfiguration(signs)
            yield lam, lam.flipped()

    def amplitude(self, lam: SpinConfiguration) -> Quaternion:
        return singlet_amplitude(lam, self.directions)

    def product_space(self) -> ProductSpace:
        """The same subset, expressed as a generic correlated product space."""
        axes_i = [Axis(f"s{k}^I", (1, -1)) for k in range(self.n)]
        axes_ii = [Axis(f"s{k}^II", (1, -1)) for k in range(self.n)]
        return generic_correlated_space(axes_i, axes_ii, 0)


def singlet_amplitude(config: SpinConfiguration, dirs: DirectionSet) -> Quaternion:
    """Amplitude of an allowed singlet state, Z(lam) - Z(-lam) = 2 Z(lam)."""
    return 2.0 * spin_amplitude(config, dirs)


def _check_pair_indices(dirs: DirectionSet, indices: Sequence[int]):
    n = len(dirs)
    for i in indices:
        if not 0 <= i < n:
            raise ValueError(f"direction index {i} out of range")
    if len(set(indices)) != len(indices):
        raise ValueError(
            "coincident directions are handled by the anticorrelation rule, "
            "not by marginal amplitudes"
        )


def pair_marginal(
    dirs: DirectionSet, a: int, sign_i: int, b: int, sign_ii: int
) -> Quaternion:
    """Closed-form singlet pair marginal 2*2**(n-2) * (s1*N_a - s2*N_b)."""
    _check_pair_indices(dirs, (a, b))
    comps = dirs.components
    factor = 2.0 * 2.0 ** (len(dirs) - 2)
    return Quaternion(
        0.0,
        factor * math.fsum((sign_i * comps[a, 0], -sign_ii * comps[b, 0])),
        factor * math.fsum((sign_i * comps[a, 1], -sign_ii * comps[b, 1])),
        factor * math.fsum((sign_i * comps[a, 2], -sign_ii * comps[b, 2])),
    )


def pair_marginal_bruteforce(
    dirs: DirectionSet, a: int, sign_i: int, b: int, sign_ii: int
) -> Quaternion:
    """Pair marginal by enumerating the allowed singlet configurations.

    Particle II signs are the negated particle I signs, so pinning
    (a, s1) on particle I and (b, s2) on particle II pins lam(a) = s1 and
    lam(b) = -s2; the sum of 2*Z(lam) runs over the remaining free signs.
    """
    _check_pair_indices(dirs, (a, b))
    if len(dirs) > ENUMERATION_LIMIT:
        raise ValueError("direction count exceeds the enumeration bound")
    raw = _backend.constrained_spin_sum(
        dirs.components, {int(a): int(sign_i), int(b): -int(sign_ii)}
    )
    return Quaternion(0.0, 2.0 * raw[0], 2.0 * raw[1], 2.0 * raw[2])


def triple_marginal(
    dirs: DirectionSet,
    a: int,
    sign_i: int,
    b: int,
    sign_ii_b: int,
    c: int,
    sign_ii_c: int,
) -> Quaternion:
    """Closed-form marginal 2*2**(n-3) * (s1*N_a - s2*N_b - s3*N_c).

    Direction a is measured on particle I, directions b and c on particle
    II.  Summing the pair over the c sign reproduces the pair marginal;
    Born weights do not add up the same way, which is the interference
    demonstration.
    """
    _check_pair_indices(dirs, (a, b, c))
    comps = dirs.components
    factor = 2.0 * 2.0 ** (len(dirs) - 3)
    return Quaternion(
        0.0,
        factor
        * math.fsum(
            (sign_i * comps[a, 0], -sign_ii_b * comps[b, 0], -sign_ii_c * comps[c, 0])
        ),
        factor
        * math.fsum(
            (sign_i * comps[a, 1], -sign_ii_b * comps[b, 1], -sign_ii_c * comps[c, 1])
        ),
        factor
        * math.fsum(
            (sign_i * comps[a, 2], -sign_ii_b * comps[b, 2], -sign_ii_c * comps[c, 2])
        ),
    )


def triple_marginal_bruteforce(
    dirs: DirectionSet,
    a: int,
    sign_i: int,
    b: int,
    sign_ii_b: int,
    c: int,
    sign_ii_c: int,
) -> Quaternion:
    """Triple marginal by enumeration over the allowed singlet subset."""
    _check_pair_indices(dirs, (a, b, c))
    if len(dirs) > ENUMERATION_LIMIT:
        raise ValueError("direction count exceeds the enumeration bound")
    raw = _backend.constrained_spin_sum(
        dirs.components,
        {int(a): int(sign_i), int(b): -int(sign_ii_b), int(c): -int(sign_ii_c)},
    )
    return Quaternion(0.0, 2.0 * raw[0], 2.0 * raw[1], 2.0 * raw[2])


def _relation(a: UnitVector3, b: UnitVector3) -> str:
    if math.dist(a.as_tuple(), b.as_tuple()) < _SAME_TOL:
        return "equal"
    if math.dist(a.as_tuple(), (-b).as_tuple()) < _SAME_TOL:
        return "antipodal"
    return "distinct"


def pair_probabilities(
    a: UnitVector3, b: UnitVector3, directions: DirectionSet | None = None
) -> dict[tuple[int, int], float]:
    """Singlet outcome table P(s1, s2) for measurements along a and b.

    Distinct directions go through pair marginals and Born's rule.  A shared
    direction is perfectly anticorrelated by construction (same-sign
    marginals vanish on the constrained subset), so the table is written
    down directly; an antipodal pair is the same case with one sign flipped.
    """
    rel = _relation(a, b)
    if rel == "equal":
        return {(1, 1): 0.0, (1, -1): 0.5, (-1, 1): 0.5, (-1, -1): 0.0}
    if rel == "antipodal":
        return {(1, 1): 0.5, (1, -1): 0.0, (-1, 1): 0.0, (-1, -1): 0.5}

    if directions is None:
        dirs = DirectionSet((a, b))
        ia, ib = 0, 1
    else:
        dirs = directions
        ha = dirs.find(a)
        hb = dirs.find(b)
        if ha is None or hb is None or ha[1] != 1 or hb[1] != 1:
            raise ValueError("both directions must belong to the direction set")
        ia, ib = ha[0], hb[0]

    axis_i = Axis("s^I", (1, -1))
    axis_ii = Axis("s^II", (1, -1))
    space = ProductSpace([axis_i, axis_ii])
    table = {
        (axis_i.index_of(s1), axis_ii.index_of(s2)): pair_marginal(
            dirs, ia, s1, ib, s2
        )
        for s1 in (1, -1)
        for s2 in (1, -1)
    }
    from ampdist.ensemble import AmplitudeDistribution

    dist = AmplitudeDistribution(space, table=table)
    return {k: v for k, v in dist.born_probabilities().items()}


def correlation(
    a: UnitVector3, b: UnitVector3, directions: DirectionSet | None = None
) -> float:
    """Correlation E(a, b) = sum s1*s2*P(s1, s2); equals -a.b."""
    probs = pair_probabilities(a, b, directions)
    return math.fsum(s1 * s2 * p for (s1, s2), p in probs.items())


def outcome_probability(outcome: PairOutcome) -> float:
    """Probability of one joint singlet outcome."""
    table = pair_probabilities(outcome.a, outcome.b)
    return table[(outcome.sign_i, outcome.sign_ii)]


def correlation_record(a: UnitVector3, b: UnitVector3) -> CorrelationRecord:
    """Full pair table and correlation for one direction pair."""
    table = pair_probabilities(a, b)
    e_value = math.fsum(s1 * s2 * p for (s1, s2), p in table.items())
    return CorrelationRecord(
        a=a,
        b=b,
        ppp=table[(1, 1)],
        ppm=table[(1, -1)],
        pmp=table[(-1, 1)],
        pmm=table[(-1, -1)],
        e=e_value,
    )


def chsh(
    a: UnitVector3, a2: UnitVector3, b: UnitVector3, b2: UnitVector3
) -> CHSHResult:
    """CHSH combination S = E(a,b) - E(a,b') + E(a',b) + E(a',b')."""
    e_ab = correlation(a, b)
    e_ab2 = correlation(a, b2)
    e_a2b = correlation(a2, b)
    e_a2b2 = correlation(a2, b2)
    s = e_ab - e_ab2 + e_a2b + e_a2b2
    return CHSHResult(s, abs(s), e_ab, e_ab2, e_a2b, e_a2b2)


def classical_strategies() -> list[dict[str, int | float]]:
    """All 16 deterministic local assignments with their CHSH values."""
    rows = []
    for sa, sa2, sb, sb2 in itertools.product((1, -1), repeat=4):
        s = sa * sb - sa * sb2 + sa2 * sb + sa2 * sb2
        rows.append({"sa": sa, "sa2": sa2, "sb": sb, "sb2": sb2, "S": float(s)})
    return rows


def classical_bound(*_directions) -> float:
    """Largest |S| over deterministic local strategies; always 2.

    Mixtures of strategies cannot exceed the extreme points, so exhaustive
    enumeration of the 16 sign assignments is the whole check.  Direction
    arguments are accepted for interface symmetry and ignored.
    """
    return max(abs(row["S"]) for row in classical_strategies())


def generic_correlated_space(
    axes_i: Sequence[Axis],
    axes_ii: Sequence[Axis],
    total: float | Sequence[float],
    tol: float = 1e-12,
) -> ProductSpace:
    """Constrained product space for pairwise-correlated numeric magnitudes.

    Axis k of particle I is paired with axis k of particle II and the
    constraint value_I + value_II = total holds for every pair (a scalar
    total applies to all pairs).  Amplitude distributions restricted to this
    space give zero probability to any outcome pair violating a constraint.
    """
    axes_i = list(axes_i)
    axes_ii = list(axes_ii)
    if len(axes_i) != len(axes_ii):
        raise ValueError("particle I and II axis lists must pair up")
    if not axes_i:
        raise ValueError("need at least one correlated pair")
    npairs = len(axes_i)
    if isinstance(total, (int, float)):
        totals = [float(total)] * npairs
    else:
        totals = [float(t) for t in total]
        if len(totals) != npairs:
            raise ValueError("one total per correlated pair")

    def constraint(cfg) -> bool:
        vals = cfg.values
        for k in range(npairs):
            if abs(float(vals[k]) + float(vals[npairs + k]) - totals[k]) > tol:
                return False
        return True

    return ProductSpace(list(axes_i) + list(axes_ii), constraint=constraint)
