"""Ultrametric checks, ball relations, chains, and metrization."""

import random
from fractions import Fraction

import pytest

from ultrauniform.core import (
    Carrier,
    CarrierMismatch,
    Relation,
    ValidationError,
    eq_closure,
    is_equivalence,
)
from ultrauniform.oracle import (
    check_pseudometric,
    check_strong_triangle,
    random_equivalence,
    random_ultrametric,
)
from ultrauniform.pseudometric import (
    Chain,
    Pseudometric,
    PseudometricSystem,
    ball_relation,
    basis_from_system,
    chain_pm,
    descending_chain,
    is_na,
    metrize,
    sup_pm,
    system_from_na_basis,
    systems_equivalent,
    thresholds,
)
from ultrauniform.uniformity import DiagonalBasis, uniformity_equal

C3 = Carrier(3)
FULL3 = Relation.full(C3)
ID3 = Relation.identity(C3)
E01 = eq_closure(Relation.from_pairs(C3, [(0, 1)]))
ZERO3 = Pseudometric(C3, [[0] * 3 for _ in range(3)])


def pm(table, n=3):
    return Pseudometric(Carrier(n), table)


class TestConstruction:
    def test_rejects_asymmetry(self):
        with pytest.raises(ValueError, match="asymmetric"):
            pm([[0, 1, 1], [2, 0, 1], [1, 1, 0]])

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValueError, match="self-distance"):
            pm([[1, 1, 1], [1, 0, 1], [1, 1, 0]])

    def test_rejects_triangle_violation(self):
        with pytest.raises(ValueError, match="triangle"):
            pm([[0, 1, 3], [1, 0, 1], [3, 1, 0]])

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            pm([[0, -1, 1], [-1, 0, 1], [1, 1, 0]])

    def test_accepts_strings_and_fractions(self):
        d = pm([[0, "1/2", Fraction(1, 2)], ["1/2", 0, "1/2"], [Fraction(1, 2), "1/2", 0]])
        assert d.d(0, 1) == Fraction(1, 2)
        assert all(isinstance(v, Fraction) for row in d.dist for v in row)


class TestIsNa:
    def test_zero_metric(self):
        assert is_na(ZERO3)

    def test_zero_one_equivalence_metric(self):
        d = pm([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        assert is_na(d)

    def test_euclidean_chain_fails(self):
        d = pm([[0, 1, 2], [1, 0, 1], [2, 1, 0]])
        assert not is_na(d)

    def test_agrees_with_direct_triple_check(self):
        rng = random.Random(11)
        for _ in range(200):
            n = rng.randint(2, 6)
            d = random_ultrametric(rng, n)
            assert is_na(d) == check_strong_triangle(d.dist)
            assert check_pseudometric(d.dist)


class TestSup:
    def test_idempotent(self):
        d = pm([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert sup_pm([d, d]) == d

    def test_zero_is_neutral(self):
        d = pm([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert sup_pm([d, ZERO3]) == d

    def test_preserves_na_on_random_pairs(self):
        # oracle: the direct per-triple strong inequality check
        rng = random.Random(5)
        for _ in range(1000):
            n = rng.randint(2, 8)
            d1 = random_ultrametric(rng, n)
            d2 = random_ultrametric(rng, n)
            s = sup_pm([d1, d2])
            assert check_strong_triangle(s.dist)
            assert is_na(s)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            sup_pm([])

    def test_carrier_mismatch(self):
        with pytest.raises(CarrierMismatch):
            sup_pm([ZERO3, Pseudometric(Carrier(2), [[0, 0], [0, 0]])])


class TestBallRelation:
    def test_huge_radius_gives_full(self):
        d = pm([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert ball_relation(d, 2) == FULL3

    def test_zero_metric_any_radius(self):
        assert ball_relation(ZERO3, Fraction(1, 100)) == FULL3

    def test_threshold_reads_off(self):
        d = pm([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        assert ball_relation(d, Fraction(1, 2)) == E01

    def test_strictness_at_realized_value(self):
        d = pm([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        assert ball_relation(d, 1) == E01
        assert ball_relation(d, Fraction(3, 2)) == FULL3

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            ball_relation(ZERO3, 0)
        with pytest.raises(ValueError):
            ball_relation(ZERO3, Fraction(-1, 2))

    def test_equivalence_for_na_metrics(self):
        rng = random.Random(23)
        for _ in range(300):
            d = random_ultrametric(rng, rng.randint(2, 8))
            for eps in thresholds(d):
                assert is_equivalence(ball_relation(d, eps))


class TestBasisFromSystem:
    def test_single_zero_one_ultrametric(self):
        d = pm([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        b = basis_from_system(PseudometricSystem(C3, [d]))
        assert set(b.entourages) == {E01, FULL3}

    def test_zero_metric(self):
        b = basis_from_system(PseudometricSystem(C3, [ZERO3]))
        assert b.entourages == (FULL3,)

    def test_padic_ball_relations_are_congruences(self):
        from ultrauniform.cli import congruence_relation, padic_pseudometric

        d = padic_pseudometric(2, 8)
        b = basis_from_system(PseudometricSystem(Carrier(8), [d]))
        expected = {congruence_relation(8, 2**k) for k in range(4)}
        assert set(b.entourages) == expected


class TestSystemsEquivalent:
    def test_self(self):
        d = pm([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        m = PseudometricSystem(C3, [d])
        assert systems_equivalent(m, m)

    def test_scaling_invariance(self):
        d = pm([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        double = pm([[0, 0, 2], [0, 0, 2], [2, 2, 0]])
        assert systems_equivalent(
            PseudometricSystem(C3, [d]), PseudometricSystem(C3, [double])
        )

    def test_zero_vs_discrete(self):
        c2 = Carrier(2)
        zero = Pseudometric(c2, [[0, 0], [0, 0]])
        disc = Pseudometric(c2, [[0, 1], [1, 0]])
        assert not systems_equivalent(
            PseudometricSystem(c2, [zero]), PseudometricSystem(c2, [disc])
        )

    def test_carrier_mismatch(self):
        with pytest.raises(CarrierMismatch):
            systems_equivalent(
                PseudometricSystem(C3, [ZERO3]),
                PseudometricSystem(Carrier(2), [Pseudometric(Carrier(2), [[0, 0], [0, 0]])]),
            )


class TestChain:
    def test_two_step_chain_distance(self):
        d = chain_pm(Chain(C3, [FULL3, E01]))
        assert d.d(0, 1) == 0
        assert d.d(0, 2) == 1 and d.d(1, 2) == 1

    def test_trivial_chain(self):
        assert chain_pm(Chain(C3, [FULL3])) == ZERO3

    def test_three_step_chain(self):
        d = chain_pm(Chain(C3, [FULL3, E01, ID3]))
        assert d.d(0, 1) == Fraction(1, 2)
        assert d.d(0, 2) == 1 and d.d(1, 2) == 1
        assert all(d.d(x, x) == 0 for x in range(3))
        # independent verification of the strong triangle inequality
        assert check_strong_triangle(d.dist)

    def test_chain_values_are_unit_fractions(self):
        rng = random.Random(3)
        for _ in range(100):
            n = rng.randint(2, 6)
            carrier = Carrier(n)
            steps = [Relation.full(carrier)]
            for _ in range(rng.randint(0, 3)):
                steps.append(steps[-1] & random_equivalence(rng, n))
            d = chain_pm(Chain(carrier, steps))
            for row in d.dist:
                for v in row:
                    assert v == 0 or v.numerator == 1

    def test_distance_bound_implies_membership(self):
        rng = random.Random(4)
        for _ in range(100):
            n = rng.randint(2, 6)
            carrier = Carrier(n)
            steps = [Relation.full(carrier)]
            for _ in range(rng.randint(1, 3)):
                steps.append(steps[-1] & random_equivalence(rng, n))
            kappa = Chain(carrier, steps)
            d = chain_pm(kappa)
            for x in range(n):
                for y in range(n):
                    for m in range(1, len(steps)):
                        if d.d(x, y) < Fraction(1, m):
                            assert kappa.steps[m].has(x, y)

    def test_rejects_bad_first_step(self):
        with pytest.raises(ValueError, match="full"):
            Chain(C3, [E01])

    def test_rejects_non_descending(self):
        with pytest.raises(ValueError, match="contained"):
            Chain(C3, [FULL3, ID3, E01])

    def test_rejects_non_equivalence_step(self):
        bad = Relation.from_pairs(C3, [(0, 0), (1, 1), (2, 2), (0, 1)])
        with pytest.raises(ValueError, match="equivalence"):
            Chain(C3, [FULL3, bad])

    def test_json_round_trip(self):
        kappa = Chain(C3, [FULL3, E01])
        assert Chain.from_json(kappa.to_json()) == kappa


class TestSystemFromNaBasis:
    def test_indiscrete_gives_zero_metric(self):
        system = system_from_na_basis(DiagonalBasis(C3, [FULL3]))
        assert system.metrics == (ZERO3,)

    def test_single_equivalence(self):
        system = system_from_na_basis(DiagonalBasis(C3, [E01]))
        expected = pm([[0, 0, 1], [0, 0, 1], [1, 1, 0]])
        assert expected in system.metrics

    def test_round_trip_on_random_equivalence_bases(self):
        rng = random.Random(99)
        c4 = Carrier(4)
        for _ in range(500):
            b = DiagonalBasis(
                c4, [random_equivalence(rng, 4) for _ in range(rng.randint(1, 2))]
            )
            system = system_from_na_basis(b)
            assert uniformity_equal(basis_from_system(system), b)

    def test_rejects_invalid_basis(self):
        bad = Relation.from_pairs(
            C3, [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0), (1, 2), (2, 1)]
        )
        with pytest.raises(ValidationError):
            system_from_na_basis(DiagonalBasis(C3, [bad]))


class TestMetrize:
    def test_single_equivalence(self):
        d = metrize([E01])
        assert d.d(0, 1) == 0
        assert d.d(0, 2) == 1 and d.d(1, 2) == 1

    def test_full_gives_zero(self):
        assert metrize([FULL3]) == ZERO3

    def test_two_relations_hand_recursion(self):
        d = metrize([E01, ID3])
        assert d.d(0, 1) == Fraction(1, 2)
        assert d.d(0, 2) == 1 and d.d(1, 2) == 1
        induced = basis_from_system(PseudometricSystem(C3, [d]))
        assert set(induced.entourages) == {FULL3, E01, ID3}

    def test_rejects_non_equivalence(self):
        with pytest.raises(ValidationError):
            metrize([Relation.from_pairs(C3, [(0, 1)])])

    def test_induces_input_uniformity_on_random_bases(self):
        rng = random.Random(17)
        for _ in range(300):
            n = rng.randint(2, 8)
            carrier = Carrier(n)
            es = [random_equivalence(rng, n) for _ in range(rng.randint(1, 3))]
            d = metrize(es)
            assert is_na(d)
            b = DiagonalBasis(carrier, es + [Relation.full(carrier)])
            assert uniformity_equal(basis_from_system(PseudometricSystem(carrier, [d])), b)

    def test_prepends_full_when_absent(self):
        chain = descending_chain([E01])
        assert chain.steps[0] == FULL3
        assert chain.steps[1] == E01


from hypothesis import given, settings
from hypothesis import strategies as st


@st.composite
def seeded_ultrametrics(draw):
    seed = draw(st.integers(min_value=0, max_value=10**6))
    n = draw(st.integers(min_value=2, max_value=7))
    rng = random.Random(seed)
    return random_ultrametric(rng, n), random_ultrametric(rng, n), random_ultrametric(rng, n)


@given(seeded_ultrametrics())
@settings(max_examples=100, deadline=None)
def test_sup_lattice_laws(triple):
    d1, d2, d3 = triple
    assert sup_pm([d1, d2]) == sup_pm([d2, d1])
    assert sup_pm([sup_pm([d1, d2]), d3]) == sup_pm([d1, sup_pm([d2, d3])])
    assert sup_pm([d1, d1]) == d1


@given(seeded_ultrametrics())
@settings(max_examples=100, deadline=None)
def test_balls_shrink_with_radius(triple):
    d = triple[0]
    radii = thresholds(d)
    for small, large in zip(radii, radii[1:]):
        assert ball_relation(d, small).issubset(ball_relation(d, large))


class TestJson:
    def test_round_trip(self):
        d = pm([[0, "1/2", 1], ["1/2", 0, 1], [1, 1, 0]])
        obj = d.to_json()
        assert obj["dist"][0][1] == "1/2"
        assert Pseudometric.from_json(obj) == d

    def test_system_round_trip(self):
        m = PseudometricSystem(C3, [ZERO3, pm([[0, 1, 1], [1, 0, 1], [1, 1, 0]])])
        assert PseudometricSystem.from_json(m.to_json()) == m

    def test_bad_dist_field(self):
        with pytest.raises(ValueError, match="dist"):
            Pseudometric.from_json({"n": 2, "dist": "nope"})
