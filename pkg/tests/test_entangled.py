import itertools
import math

import numpy as np
import pytest

from ampdist.algebra import I, J, K, Quaternion, UnitVector3
from ampdist.ensemble import AmplitudeDistribution, Axis, ProductSpace
from ampdist.entangled import (
    PairOutcome,
    SingletSpace,
    chsh,
    classical_bound,
    classical_strategies,
    correlation,
    correlation_record,
    generic_correlated_space,
    outcome_probability,
    pair_marginal,
    pair_marginal_bruteforce,
    pair_probabilities,
    singlet_amplitude,
    triple_marginal,
    triple_marginal_bruteforce,
)
from ampdist.spin import DirectionSet, SpinConfiguration, spin_amplitude

from conftest import random_direction_set, random_unit

X = UnitVector3(1, 0, 0)
Y = UnitVector3(0, 1, 0)
Z = UnitVector3(0, 0, 1)


def planar(deg):
    th = math.radians(deg)
    return UnitVector3(math.sin(th), 0.0, math.cos(th))


def test_singlet_amplitude_is_doubled_single_particle(rng):
    dirs = random_direction_set(rng, 4)
    for _ in range(10):
        cfg = SpinConfiguration(tuple(int(s) for s in rng.choice([1, -1], size=4)))
        direct = spin_amplitude(cfg, dirs) - spin_amplitude(cfg.flipped(), dirs)
        assert singlet_amplitude(cfg, dirs) == direct
        assert singlet_amplitude(cfg, dirs) == 2.0 * spin_amplitude(cfg, dirs)


def test_singlet_amplitude_single_direction():
    dirs = DirectionSet([X])
    assert singlet_amplitude(SpinConfiguration((1,)), dirs) == 2.0 * I
    assert singlet_amplitude(SpinConfiguration((-1,)), dirs) == -2.0 * I


def test_pair_marginal_two_directions():
    dirs = DirectionSet([X, Y])
    assert pair_marginal(dirs, 0, 1, 1, 1) == 2.0 * (I - J)
    assert pair_marginal(dirs, 0, 1, 1, -1) == 2.0 * (I + J)
    # global sign flip of both outcomes negates the amplitude
    assert pair_marginal(dirs, 0, -1, 1, -1) == -pair_marginal(dirs, 0, 1, 1, 1)


def test_pair_marginal_matches_bruteforce_bitwise(rng):
    for n in (2, 3, 5, 8):
        dirs = random_direction_set(rng, n)
        a, b = 0, n - 1
        for s1, s2 in itertools.product((1, -1), repeat=2):
            assert pair_marginal(dirs, a, s1, b, s2) == pair_marginal_bruteforce(
                dirs, a, s1, b, s2
            )


def test_pair_marginal_rejects_same_direction():
    dirs = DirectionSet([X, Y])
    with pytest.raises(ValueError, match="anticorrelation"):
        pair_marginal(dirs, 0, 1, 0, 1)


def test_triple_marginal_matches_bruteforce_bitwise(rng):
    for n in (3, 4, 6):
        dirs = random_direction_set(rng, n)
        for s1, s2, s3 in itertools.product((1, -1), repeat=3):
            closed = triple_marginal(dirs, 0, s1, 1, s2, 2, s3)
            brute = triple_marginal_bruteforce(dirs, 0, s1, 1, s2, 2, s3)
            assert closed == brute


def test_triple_sums_to_pair(rng):
    dirs = random_direction_set(rng, 3)
    for s1, s2 in itertools.product((1, -1), repeat=2):
        summed = triple_marginal(dirs, 0, s1, 1, s2, 2, 1) + triple_marginal(
            dirs, 0, s1, 1, s2, 2, -1
        )
        pair = pair_marginal(dirs, 0, s1, 1, s2)
        assert max(
            abs(a - b) for a, b in zip(summed.components(), pair.components())
        ) < 1e-12


def test_triple_interference_terms():
    # orthonormal directions: component weights 3 and 3, combined 8, cross 2
    zp = I - (J + K)
    zm = I - (J - K)
    assert zp.norm_sq() == 3.0
    assert zm.norm_sq() == 3.0
    assert (zp + zm).norm_sq() == 8.0
    cross = (zp + zm).norm_sq() - zp.norm_sq() - zm.norm_sq()
    assert cross == 2.0
    # the cross term is twice the Euclidean pairing of the two components
    assert cross == 2.0 * zp.dot(zm)


def test_triple_through_generic_interference_decomposition():
    a, b, c = X, UnitVector3.normalized(1, 1, 0), UnitVector3(0.5, math.sqrt(3) / 2, 0)
    dirs = DirectionSet([a, b, c])
    axes = [Axis("s1", (1, -1)), Axis("s2", (1, -1)), Axis("s3", (1, -1))]
    space = ProductSpace(axes)
    dist = AmplitudeDistribution(
        space,
        rule=lambda cfg: triple_marginal(
            dirs, 0, cfg.values[0], 1, cfg.values[1], 2, cfg.values[2]
        ),
    )
    for s1, s2 in itertools.product((1, -1), repeat=2):
        comp, cross = dist.interference_decomposition("s3", (s1, s2))
        zp = triple_marginal(dirs, 0, s1, 1, s2, 2, 1)
        zm = triple_marginal(dirs, 0, s1, 1, s2, 2, -1)
        assert comp == pytest.approx(zp.norm_sq() + zm.norm_sq(), rel=1e-14)
        assert cross == pytest.approx(2.0 * zp.dot(zm), rel=1e-12)
        # pair Born weight differs from the summed triple weights by the cross
        w_pair = pair_marginal(dirs, 0, s1, 1, s2).norm_sq()
        assert w_pair - comp == pytest.approx(cross, abs=1e-12)


def test_probability_non_additivity_values():
    # with k = s1 s2 (a.b): pair marginal gives (1-k)/4 while the summed
    # triple distribution gives (3-2k)/12; the normalized gap is -k/12
    a, b, c = X, UnitVector3.normalized(1, 1, 0), UnitVector3(0.5, math.sqrt(3) / 2, 0)
    dirs = DirectionSet([a, b, c])
    w3 = {
        (s1, s2, s3): triple_marginal(dirs, 0, s1, 1, s2, 2, s3).norm_sq()
        for s1, s2, s3 in itertools.product((1, -1), repeat=3)
    }
    w2 = {
        (s1, s2): pair_marginal(dirs, 0, s1, 1, s2).norm_sq()
        for s1, s2 in itertools.product((1, -1), repeat=2)
    }
    total3 = math.fsum(w3.values())
    total2 = math.fsum(w2.values())
    for s1, s2 in itertools.product((1, -1), repeat=2):
        k = s1 * s2 * a.dot(b)
        p_pair = w2[(s1, s2)] / total2
        p_sum = (w3[(s1, s2, 1)] + w3[(s1, s2, -1)]) / total3
        assert p_pair == pytest.approx((1 - k) / 4, abs=1e-12)
        assert p_sum == pytest.approx((3 - 2 * k) / 12, abs=1e-12)
        assert p_pair - p_sum == pytest.approx(-k / 12, abs=1e-12)
        assert abs(p_pair - p_sum) > 1e-3


def test_pair_probabilities_shared_direction():
    table = pair_probabilities(Z, Z)
    assert table[(1, 1)] == 0.0
    assert table[(-1, -1)] == 0.0
    assert table[(1, -1)] == 0.5
    assert table[(-1, 1)] == 0.5


def test_pair_probabilities_antipodal_direction():
    table = pair_probabilities(Z, UnitVector3(0, 0, -1))
    assert table[(1, 1)] == 0.5
    assert table[(1, -1)] == 0.0
    assert table[(-1, 1)] == 0.0
    assert table[(-1, -1)] == 0.5


def test_pair_probabilities_orthogonal():
    table = pair_probabilities(Z, X)
    for v in table.values():
        assert v == pytest.approx(0.25, abs=1e-12)


def test_pair_probabilities_formula(rng):
    for _ in range(200):
        a, b = random_unit(rng), random_unit(rng)
        if abs(a.dot(b)) > 1 - 1e-6:
            continue
        table = pair_probabilities(a, b)
        cos = a.dot(b)
        for (s1, s2), p in table.items():
            assert p == pytest.approx((1 - s1 * s2 * cos) / 4, abs=1e-12)


def test_pair_probabilities_at_120_degrees():
    b = UnitVector3(math.sin(math.radians(120)), 0, math.cos(math.radians(120)))
    table = pair_probabilities(Z, b)
    assert table[(1, 1)] == pytest.approx(0.375, abs=1e-12)
    assert table[(1, -1)] == pytest.approx(0.125, abs=1e-12)


def test_pair_probabilities_within_larger_set(rng):
    # Born normalization removes the direction-count dependence
    a, b = planar(10), planar(75)
    small = pair_probabilities(a, b)
    dirs = DirectionSet([a, b, Y, random_unit(rng)])
    large = pair_probabilities(a, b, directions=dirs)
    for key in small:
        assert small[key] == pytest.approx(large[key], abs=1e-12)


def test_no_signalling_local_marginals(rng):
    for _ in range(20):
        a, b = random_unit(rng), random_unit(rng)
        table = pair_probabilities(a, b)
        assert table[(1, 1)] + table[(1, -1)] == pytest.approx(0.5, abs=1e-12)
        assert table[(1, 1)] + table[(-1, 1)] == pytest.approx(0.5, abs=1e-12)


def test_correlation_values(rng):
    assert correlation(Z, Z) == -1.0
    assert correlation(Z, X) == pytest.approx(0.0, abs=1e-12)
    b = planar(45)
    assert correlation(Z, b) == pytest.approx(-math.sqrt(2) / 2, abs=1e-10)
    for _ in range(100):
        a, m = random_unit(rng), random_unit(rng)
        if abs(a.dot(m)) > 1 - 1e-6:
            continue
        assert correlation(a, m) == pytest.approx(-a.dot(m), abs=1e-12)


def test_outcome_probability_and_record(rng):
    a, b = planar(20), planar(80)
    record = correlation_record(a, b)
    assert record.ppp + record.ppm + record.pmp + record.pmm == pytest.approx(1.0)
    assert record.e == pytest.approx(-a.dot(b), abs=1e-12)
    assert outcome_probability(PairOutcome(a, 1, b, -1)) == pytest.approx(
        record.ppm, abs=1e-15
    )
    with pytest.raises(ValueError):
        PairOutcome(a, 2, b, 1)


def test_correlation_symmetric_under_particle_swap(rng):
    for _ in range(20):
        a, b = random_unit(rng), random_unit(rng)
        if abs(a.dot(b)) > 1 - 1e-6:
            continue
        assert correlation(a, b) == pytest.approx(correlation(b, a), abs=1e-12)


def test_chsh_optimal_angles():
    result = chsh(planar(0), planar(90), planar(45), planar(135))
    assert result.abs_s == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-12)


def test_chsh_degenerate_directions():
    result = chsh(Z, Z, Z, Z)
    assert result.s == pytest.approx(-2.0, abs=1e-12)


def test_chsh_tsirelson_bound(rng):
    for _ in range(300):
        dirs = []
        while len(dirs) < 4:
            v = random_unit(rng)
            dirs.append(v)
        result = chsh(*dirs)
        assert result.abs_s <= 2.0 * math.sqrt(2.0) + 1e-12


def test_classical_bound_always_two(rng):
    assert classical_bound() == 2.0
    assert classical_bound(Z, X, Y, Z) == 2.0
    rows = classical_strategies()
    assert len(rows) == 16
    assert max(abs(r["S"]) for r in rows) == 2.0
    assert min(abs(r["S"]) for r in rows) == 2.0  # every strategy sits at +/-2


def test_quantum_exceeds_classical():
    result = chsh(planar(0), planar(90), planar(45), planar(135))
    assert result.abs_s > classical_bound() + 0.8


def test_generic_correlated_space_pairs():
    ax_i = Axis("a^I", (1, -1))
    ax_ii = Axis("a^II", (1, -1))
    space = generic_correlated_space([ax_i], [ax_ii], 0)
    allowed = [cfg.values for cfg in space.configurations()]
    assert allowed == [(1, -1), (-1, 1)]


def test_generic_correlated_space_zero_probability_outside():
    ax_i = Axis("a^I", (1, -1))
    ax_ii = Axis("a^II", (1, -1))
    space = generic_correlated_space([ax_i], [ax_ii], 0)
    dist = AmplitudeDistribution(space, rule=lambda cfg: 1 + 0j)
    marg = dist.marginalize(["a^I", "a^II"])
    assert marg.amplitude((0, 0)) == 0j  # (+1, +1) violates the constraint
    probs = marg.born_probabilities()
    assert probs[(1, 1)] == 0.0
    assert probs[(-1, -1)] == 0.0
    assert probs[(1, -1)] == pytest.approx(0.5)


def test_generic_correlated_space_validation():
    ax = Axis("a", (1, -1))
    with pytest.raises(ValueError):
        generic_correlated_space([ax], [], 0)
    with pytest.raises(ValueError):
        generic_correlated_space([], [], 0)
    with pytest.raises(ValueError):
        generic_correlated_space([ax], [Axis("b", (1, -1))], (0, 0))


def test_singlet_space_matches_generic_enumeration(rng):
    dirs = random_direction_set(rng, 3)
    singlet = SingletSpace(dirs)
    direct = {
        tuple(lam.signs) + tuple(lam2.signs)
        for lam, lam2 in singlet.configurations()
    }
    generic = {cfg.values for cfg in singlet.product_space().configurations()}
    assert direct == generic
    assert len(direct) == 2**3


def test_singlet_space_amplitude_consistency(rng):
    dirs = random_direction_set(rng, 3)
    singlet = SingletSpace(dirs)
    for lam, lam2 in singlet.configurations():
        assert lam2.signs == tuple(-s for s in lam.signs)
        assert singlet.amplitude(lam) == 2.0 * spin_amplitude(lam, dirs)
