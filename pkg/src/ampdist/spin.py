"""Spin-1/2 ensembles over finite direction sets.

An elementary spin state assigns a sign s_i to every direction n_i of a
finite set, and carries the quaternion amplitude

    Z(s_1, ..., s_n) = s_1*N(n_1) + ... + s_n*N(n_n)

with N(n) the pure imaginary unit quaternion of the direction.  Ensembles
pin some of the signs; marginal amplitudes over a target direction then
follow either by brute-force enumeration of the remaining free signs or by
the closed form 2**(n-2) * (sigma*N_c +/- N_t) for single-constraint
ensembles.  Both paths agree bit for bit: the enumeration accumulates terms
exactly (correct rounding, no intermediate rounding), and rescaling by a
power of two commutes with rounding.

Antipodal directions are excluded from direction sets; a sign along -n is
the negated sign along n, so carrying both would only double the state
space.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ampdist import _backend
from ampdist.algebra import Quaternion, UnitVector3
from ampdist.ensemble import NullEnsembleError

__all__ = [
    "DirectionSet",
    "SpinConfiguration",
    "SpinEnsemble",
    "spin_amplitude",
    "ensemble_marginal_bruteforce",
    "ensemble_marginal_closed",
    "up_probability",
    "sample_hidden_config",
    "sample_hidden_configs",
    "ENUMERATION_LIMIT",
]

# Dense enumeration cap: 2**24 quaternion additions is seconds-scale with the
# compiled kernel; beyond that only closed forms are offered.
ENUMERATION_LIMIT = 24

# Two directions closer than this (directly or after negation) are the same
# physical axis.
_DISTINCT_TOL = 1e-9


@dataclass(frozen=True)
class DirectionSet:
    """Ordered set of pairwise distinct, non-antipodal directions."""

    directions: tuple[UnitVector3, ...]

    def __init__(self, directions: Iterable[UnitVector3]):
        dirs = tuple(directions)
        if not dirs:
            raise ValueError("direction set is empty")
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                a, b = dirs[i], dirs[j]
                same = math.dist(a.as_tuple(), b.as_tuple())
                anti = math.dist(a.as_tuple(), (-b).as_tuple())
                if same < _DISTINCT_TOL or anti < _DISTINCT_TOL:
                    kind = "equal" if same < anti else "antipodal"
                    raise ValueError(
                        f"directions {i} and {j} are {kind} within {_DISTINCT_TOL}"
                    )
        object.__setattr__(self, "directions", dirs)

    def __len__(self) -> int:
        return len(self.directions)

    def __getitem__(self, i: int) -> UnitVector3:
        return self.directions[i]

    def __iter__(self):
        return iter(self.directions)

    @cached_property
    def components(self) -> np.ndarray:
        """(n, 3) float64 array of direction components."""
        return np.array([d.as_tuple() for d in self.directions], dtype=np.float64)

    def quaternion(self, i: int) -> Quaternion:
        return Quaternion.from_direction(self.directions[i])

    def find(self, direction: UnitVector3) -> tuple[int, int] | None:
        """Locate a direction up to sign: (index, +1) or (index, -1)."""
        for i, d in enumerate(self.directions):
            if math.dist(d.as_tuple(), direction.as_tuple()) < _DISTINCT_TOL:
                return i, 1
            if math.dist(d.as_tuple(), (-direction).as_tuple()) < _DISTINCT_TOL:
                return i, -1
        return None

    def extended(self, direction: UnitVector3) -> "DirectionSet":
        return DirectionSet(self.directions + (direction,))

    @classmethod
    def from_file(cls, path: str | Path) -> "DirectionSet":
        """Read a direction set from a JSON array of 3-element arrays."""
        raw = json.loads(Path(path).read_text())
        if not isinstance(raw, list):
            raise ValueError(f"{path}: expected a JSON array of 3-element arrays")
        dirs = []
        for k, row in enumerate(raw):
            if not isinstance(row, list) or len(row) != 3:
                raise ValueError(f"{path}: entry {k} is not a 3-element array")
            try:
                dirs.append(UnitVector3(*row))
            except ValueError as exc:
                raise ValueError(f"{path}: entry {k}: {exc}") from exc
        return cls(dirs)


@dataclass(frozen=True)
class SpinConfiguration:
    """Signs s_i in {+1, -1}, one per direction of the paired set."""

    signs: tuple[int, ...]

    def __init__(self, signs: Iterable[int]):
        sgn = tuple(int(s) for s in signs)
        if any(s not in (1, -1) for s in sgn):
            raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "signs", sgn)

    def __len__(self) -> int:
        return len(self.signs)

    def flipped(self) -> "SpinConfiguration":
        return SpinConfiguration(tuple(-s for s in self.signs))


@dataclass(frozen=True)
class SpinEnsemble:
    """Direction set plus pinned signs selecting a phase-space subset."""

    directions: DirectionSet
    constraints: tuple[tuple[int, int], ...]

    def __init__(
        self,
        directions: DirectionSet,
        constraints: Iterable[tuple[int, int]] = (),
    ):
        seen: dict[int, int] = {}
        for idx, sign in constraints:
            idx, sign = int(idx), int(sign)
            if not 0 <= idx < len(directions):
                raise ValueError(f"constraint index {idx} out of range")
            if sign not in (1, -1):
                raise ValueError("constraint sign must be +1 or -1")
            if seen.get(idx, sign) != sign:
                raise ValueError(f"direction {idx} constrained to both signs")
            seen[idx] = sign
        object.__setattr__(self, "directions", directions)
        object.__setattr__(
            self, "constraints", tuple(sorted(seen.items()))
        )

    @property
    def n(self) -> int:
        return len(self.directions)

    def constraint_map(self) -> dict[int, int]:
        return dict(self.constraints)


def spin_amplitude(config: SpinConfiguration, dirs: DirectionSet) -> Quaternion:
    """Quaternion amplitude sum s_i * N(n_i) of one elementary state."""
    if len(config) != len(dirs):
        raise ValueError("configuration length does not match direction count")
    comps = dirs.components
    signs = config.signs
    return Quaternion(
        0.0,
        math.fsum(signs[i] * comps[i, 0] for i in range(len(dirs))),
        math.fsum(signs[i] * comps[i, 1] for i in range(len(dirs))),
        math.fsum(signs[i] * comps[i, 2] for i in range(len(dirs))),
    )


def _marginal_pair_raw(
    ens: SpinEnsemble, target: int
) -> tuple[Quaternion, Quaternion]:
    # No target-constraint check: a pinned target yields one full bucket and
    # one empty (zero) bucket, which is what repeated measurement needs.
    fixed = ens.constraint_map()
    comps = ens.directions.components
    out = []
    for sign in (1, -1):
        pinned_sign = fixed.get(target)
        if pinned_sign is not None and pinned_sign != sign:
            out.append(Quaternion(0.0, 0.0, 0.0, 0.0))
            continue
        bucket = dict(fixed)
        bucket[target] = sign
        out.append(Quaternion(0.0, *_backend.constrained_spin_sum(comps, bucket)))
    return out[0], out[1]


def ensemble_marginal_bruteforce(
    ens: SpinEnsemble, target: int
) -> tuple[Quaternion, Quaternion]:
    """Marginal amplitudes (Z(+target), Z(-target)) by exhaustive enumeration.

    Sums the amplitude of every configuration compatible with the ensemble
    constraints and the target sign; 2**(n - #constraints - 1) terms per
    bucket, accumulated exactly.
    """
    if not 0 <= target < ens.n:
        raise ValueError(f"target index {target} out of range")
    if target in ens.constraint_map():
        raise ValueError(f"target direction {target} is already constrained")
    if ens.n > ENUMERATION_LIMIT:
        raise ValueError(
            f"{ens.n} directions exceed the enumeration bound {ENUMERATION_LIMIT}"
        )
    return _marginal_pair_raw(ens, target)


def ensemble_marginal_closed(
    ens: SpinEnsemble, target: int
) -> tuple[Quaternion, Quaternion]:
    """Closed-form marginals 2**(n-2) * (sigma*N_c +/- N_t).

    Only the single-constraint pattern has a closed form; anything else must
    go through the brute-force enumeration.  Matches the enumeration bit for
    bit.
    """
    if len(ens.constraints) != 1:
        raise ValueError(
            "closed form requires exactly one constraint; use brute force"
        )
    ((c, sigma),) = ens.constraints
    if not 0 <= target < ens.n:
        raise ValueError(f"target index {target} out of range")
    if target == c:
        raise ValueError("target direction is already constrained")
    comps = ens.directions.components
    factor = 2.0 ** (ens.n - 2)
    plus = Quaternion(
        0.0,
        factor * (sigma * comps[c, 0] + comps[target, 0]),
        factor * (sigma * comps[c, 1] + comps[target, 1]),
        factor * (sigma * comps[c, 2] + comps[target, 2]),
    )
    minus = Quaternion(
        0.0,
        factor * (sigma * comps[c, 0] - comps[target, 0]),
        factor * (sigma * comps[c, 1] - comps[target, 1]),
        factor * (sigma * comps[c, 2] - comps[target, 2]),
    )
    return plus, minus


def _born_pair(pair: tuple[Quaternion, Quaternion]) -> tuple[float, float]:
    wp, wm = pair[0].norm_sq(), pair[1].norm_sq()
    total = wp + wm
    if total == 0.0:
        raise NullEnsembleError("marginal pair is identically zero")
    return wp / total, wm / total


def up_probability(ens: SpinEnsemble, measure: UnitVector3) -> float:
    """Probability of a +1 outcome along ``measure``, via marginals and Born.

    The ensemble must carry exactly one constraint.  The measurement
    direction may coincide with a set member (up to sign, using the
    antisymmetry s(-n) = -s(n)) or be a new direction, in which case the
    set is extended; Born normalization makes the result independent of the
    number of spectator directions.
    """
    if len(ens.constraints) != 1:
        raise ValueError("up_probability requires a single-constraint ensemble")
    ((c, _sigma),) = ens.constraints
    hit = ens.directions.find(measure)
    if hit is None:
        dirs2 = ens.directions.extended(measure)
        ens2 = SpinEnsemble(dirs2, ens.constraints)
        pair = ensemble_marginal_closed(ens2, len(dirs2) - 1)
        flip = 1
    else:
        idx, flip = hit
        if idx == c:
            pair = _marginal_pair_raw(ens, idx)
        else:
            pair = ensemble_marginal_closed(ens, idx)
    p_plus, p_minus = _born_pair(pair)
    return p_plus if flip == 1 else p_minus


def _joint_pattern_probabilities(
    ens: SpinEnsemble, axes: Sequence[int]
) -> tuple[list[tuple[int, ...]], np.ndarray]:
    axes = [int(a) for a in axes]
    if len(set(axes)) != len(axes):
        raise ValueError("measurement axes must be distinct")
    for a in axes:
        if not 0 <= a < ens.n:
            raise ValueError(f"axis index {a} out of range")
    if ens.n > ENUMERATION_LIMIT:
        raise ValueError("direction count exceeds the enumeration bound")
    fixed = ens.constraint_map()
    comps = ens.directions.components
    patterns = list(itertools.product((1, -1), repeat=len(axes)))
    weights = []
    for pat in patterns:
        bucket = dict(fixed)
        ok = True
        for a, s in zip(axes, pat):
            if bucket.get(a, s) != s:
                ok = False
                break
            bucket[a] = s
        if not ok:
            weights.append(0.0)
            continue
        amp = Quaternion(0.0, *_backend.constrained_spin_sum(comps, bucket))
        weights.append(amp.norm_sq())
    total = math.fsum(weights)
    if total == 0.0:
        raise NullEnsembleError("joint marginal vanishes on the requested axes")
    return patterns, np.array(weights) / total


def sample_hidden_configs(
    ens: SpinEnsemble,
    axes: Sequence[int],
    size: int,
    rng: int | np.random.Generator = 0,
) -> np.ndarray:
    """Draw hidden sign patterns on the requested axes, Born-distributed.

    Returns an int8 array of shape (size, len(axes)).  Draws follow the Born
    probabilities of the joint marginal over the requested axes; the run is
    deterministic for a fixed seed.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    patterns, probs = _joint_pattern_probabilities(ens, axes)
    picks = rng.choice(len(patterns), size=int(size), p=probs)
    table = np.array(patterns, dtype=np.int8)
    return table[picks]


def sample_hidden_config(
    ens: SpinEnsemble,
    axes: Sequence[int],
    rng: int | np.random.Generator = 0,
) -> SpinConfiguration:
    """Draw one hidden configuration over the requested axes.

    The returned configuration pairs with the requested axes in the order
    given.  Only the measured axes are drawn: Born weights are not additive
    over discarded axes, so there is no consistent joint law to extend the
    draw to the full direction set.
    """
    row = sample_hidden_configs(ens, axes, 1, rng)[0]
    return SpinConfiguration(tuple(int(s) for s in row))
