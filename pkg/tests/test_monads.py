"""Distributions, expectations, monad maps, measures, and convex operations."""
import random
from fractions import Fraction as F

import pytest

from exmon.effect import FinSet, Predicate, PredicateEM, UnitIntervalEM, check_hom
from exmon.monads import (
    AdditivityCheck,
    Dist,
    Expectation,
    KleisliMap,
    MeasureTable,
    NonAdditiveTableError,
    PrincipalUltrafilter,
    barycenter,
    check_monad_laws,
    dist_bind,
    dist_map,
    dist_mu,
    dist_unit,
    embed_continuation,
    exp2_iso,
    exp2_iso_inverse,
    exp_eval,
    exp_unit,
    is_finitely_additive,
    kleisli_compose,
    kleisli_unit,
    mix_states,
    mutant_compose_transposed,
    mutant_dist_mu_squared,
    mutant_sigma_squared,
    phi,
    phi_inverse,
    random_dist,
    random_expectation,
    random_finset,
    sigma,
    tau,
    tau_inf_formula,
)
from oracles import n_step_probability

AB = FinSet(["a", "b"])
ABC = FinSet(["a", "b", "c"])


class TestDist:
    def test_unit_weight(self):
        d = dist_unit("a", AB)
        assert d.weight("a") == 1 and d.weight("b") == 0

    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            Dist({"a": F(1, 2)}, AB)

    def test_zero_weights_dropped(self):
        d = Dist({"a": F(1), "b": F(0)}, AB)
        assert d.support() == ("a",)

    def test_bind_unit_laws(self):
        rng = random.Random(2)
        for _ in range(30):
            d = random_dist(rng, ABC)
            assert dist_bind(d, lambda x: dist_unit(x, ABC)) == d
            f = {a: random_dist(rng, ABC) for a in ABC}
            assert dist_bind(dist_unit("b", ABC), lambda x: f[x]) == f["b"]

    def test_mu_single(self):
        d = Dist({"a": F(1, 3), "b": F(2, 3)}, AB)
        assert dist_mu(Dist({d: F(1)})) == d

    def test_mu_two_diracs(self):
        psi = Dist.from_pairs(
            [(dist_unit("a", AB), F(1, 2)), (dist_unit("b", AB), F(1, 2))]
        )
        assert dist_mu(psi) == Dist({"a": F(1, 2), "b": F(1, 2)}, AB)

    def test_mu_hand_sum(self):
        inner = Dist({"a": F(1, 2), "b": F(1, 2)}, AB)
        psi = Dist.from_pairs([(inner, F(1, 2)), (dist_unit("b", AB), F(1, 2))])
        assert dist_mu(psi) == Dist({"a": F(1, 4), "b": F(3, 4)}, AB)


class TestExpectation:
    def test_sigma_preserves_weights(self):
        d = Dist({"b": F(1, 2), "c": F(1, 2)}, ABC)
        h = sigma(d)
        assert h.weight("b") == F(1, 2) and h.weight("a") == 0

    def test_sigma_unit(self):
        assert sigma(dist_unit("a", ABC)) == exp_unit("a", ABC)

    def test_paper_transition_functionals(self):
        # the printed chain: a evaluates q as q(b)/2 + q(c)/2, b as q(b)/3 + 2q(c)/3
        h_a = sigma(Dist({"b": F(1, 2), "c": F(1, 2)}, ABC))
        h_b = sigma(Dist({"b": F(1, 3), "c": F(2, 3)}, ABC))
        chi_c = Predicate.characteristic(ABC, ["c"])
        chi_b = Predicate.characteristic(ABC, ["b"])
        assert exp_eval(h_a, chi_c) == F(1, 2)
        assert exp_eval(h_b, chi_b) == F(1, 3)

    def test_eval_dirac_and_uniform(self):
        p = Predicate(AB, {"a": F(1), "b": F(0)})
        assert exp_eval(exp_unit("b", AB), p) == 0
        uniform = Expectation(AB, {"a": F(1, 2), "b": F(1, 2)})
        assert exp_eval(uniform, p) == F(1, 2)

    def test_eval_hand_sum(self):
        h = Expectation(AB, {"a": F(1, 4), "b": F(3, 4)})
        p = Predicate(AB, {"a": F(1, 3), "b": F(1, 2)})
        assert exp_eval(h, p) == F(11, 24)  # 1/12 + 3/8

    def test_eval_is_effect_module_hom(self):
        rng = random.Random(3)
        em, ui = PredicateEM(ABC), UnitIntervalEM()
        for _ in range(10):
            h = random_expectation(rng, ABC)
            report = check_hom(
                lambda p: exp_eval(h, p), em, ui, seed=17, cases=60, name="exp_eval"
            )
            assert report.passed, report.failing_axioms()

    def test_sigma_injective_exhaustive_small(self):
        rng = random.Random(4)
        seen = {}
        for _ in range(200):
            d = random_dist(rng, ABC)
            h = sigma(d)
            if h in seen:
                assert seen[h] == d
            seen[h] = d

    def test_embed_continuation_agrees(self):
        rng = random.Random(5)
        h = random_expectation(rng, ABC)
        raw = embed_continuation(h)
        em = PredicateEM(ABC)
        for _ in range(3):
            p = em.sample(rng)
            assert raw(p) == exp_eval(h, p)

    def test_raw_functionals_feed_the_hom_checker(self):
        from exmon.monads import RawFunctional

        em, ui = PredicateEM(ABC), UnitIntervalEM()
        rng = random.Random(14)
        honest = embed_continuation(random_expectation(rng, ABC))
        assert check_hom(honest, em, ui, seed=15, cases=80, name="raw").passed
        adversarial = RawFunctional(lambda p: p["a"] * p["a"])
        report = check_hom(adversarial, em, ui, seed=15, cases=80, name="raw^2")
        assert not report.passed

    def test_sigma_onto_at_finite_scale(self):
        # every expectation is the image of its own weight distribution
        rng = random.Random(16)
        for _ in range(50):
            h = random_expectation(rng, ABC)
            d = Dist({a: w for a, w in h.items() if w > 0}, ABC)
            assert sigma(d) == h


class TestKleisli:
    def chain_rows(self):
        return {
            "a": {"b": F(1, 2), "c": F(1, 2)},
            "b": {"b": F(1, 3), "c": F(2, 3)},
            "c": {"c": F(1)},
        }

    def chain_map(self):
        rows = {
            a: Expectation(ABC, weights) for a, weights in self.chain_rows().items()
        }
        return KleisliMap(ABC, ABC, rows)

    def test_unit_neutral(self):
        step = self.chain_map()
        assert kleisli_compose(step, kleisli_unit(ABC)) == step
        assert kleisli_compose(kleisli_unit(ABC), step) == step

    def test_two_step_chain_value(self):
        step = self.chain_map()
        two = kleisli_compose(step, step)
        chi_c = Predicate.characteristic(ABC, ["c"])
        assert exp_eval(two.row("a"), chi_c) == F(5, 6)

    def test_against_path_enumeration_oracle(self):
        step = self.chain_map()
        rows = self.chain_rows()
        current = step
        for steps in (1, 2, 3, 4):
            for start in ABC:
                for end in ABC:
                    assert current.row(start).weight(end) == n_step_probability(
                        rows, start, end, steps
                    )
            current = kleisli_compose(current, step)

    def test_associativity_random(self):
        rng = random.Random(6)
        for _ in range(30):
            f = KleisliMap(ABC, ABC, {a: random_expectation(rng, ABC) for a in ABC})
            g = KleisliMap(ABC, ABC, {a: random_expectation(rng, ABC) for a in ABC})
            k = KleisliMap(ABC, ABC, {a: random_expectation(rng, ABC) for a in ABC})
            assert kleisli_compose(kleisli_compose(f, g), k) == kleisli_compose(
                f, kleisli_compose(g, k)
            )


class TestMeasures:
    def test_phi_endpoints(self):
        h = Expectation(AB, {"a": F(1, 4), "b": F(3, 4)})
        m = phi(h)
        assert m[0b00] == 0 and m[0b11] == 1 and m[0b01] == F(1, 4)

    def test_phi_inverse_point_mass(self):
        h = exp_unit("a", AB)
        assert phi_inverse(phi(h)) == h

    def test_phi_inverse_weights(self):
        h = Expectation(ABC, {"a": F(1, 2), "b": F(1, 3), "c": F(1, 6)})
        assert phi_inverse(phi(h)) == h

    def test_round_trip_random(self):
        rng = random.Random(7)
        for _ in range(100):
            domain = random_finset(rng, 5)
            h = random_expectation(rng, domain)
            m = phi(h)
            assert is_finitely_additive(m).ok
            assert phi_inverse(m) == h
            assert phi(phi_inverse(m)) == m

    def test_non_additive_rejected_with_pair_witness(self):
        h = Expectation(AB, {"a": F(1, 4), "b": F(3, 4)})
        table = dict(phi(h).table)
        table[0b01] = F(1, 2)  # breaks {a},{b} against {a,b}
        m = MeasureTable(AB, table)
        check = is_finitely_additive(m)
        assert not check.ok and check.kind == "disjoint-pair"
        u, v = check.pair
        assert u & v == 0
        assert m[u | v] != m[u] + m[v]
        with pytest.raises(NonAdditiveTableError):
            phi_inverse(m)

    def test_total_mass_failure(self):
        table = {0b00: F(0), 0b01: F(1, 4), 0b10: F(1, 4), 0b11: F(1, 2)}
        check = is_finitely_additive(MeasureTable(AB, table))
        assert not check.ok and check.kind == "total-mass"

    def test_table_must_be_total(self):
        with pytest.raises(ValueError):
            MeasureTable(AB, {0b00: F(0), 0b11: F(1)})

    def test_json_round_trip(self):
        h = Expectation(AB, {"a": F(1, 4), "b": F(3, 4)})
        m = phi(h)
        assert MeasureTable.from_json(AB, m.to_json()) == m


class TestUltrafilters:
    def test_tau_is_dirac(self):
        uf = PrincipalUltrafilter(ABC, "b")
        assert tau(uf) == exp_unit("b", ABC)

    def test_inf_formula_equals_point_evaluation(self):
        rng = random.Random(8)
        em = PredicateEM(ABC)
        uf = PrincipalUltrafilter(ABC, "b")
        for _ in range(100):
            p = em.sample(rng)
            assert tau_inf_formula(uf, p) == p["b"]
            assert tau_inf_formula(uf, p) == exp_eval(tau(uf), p)

    def test_tau_factors_through_sigma(self):
        uf = PrincipalUltrafilter(ABC, "c")
        assert tau(uf) == sigma(dist_unit("c", ABC))

    def test_tau_injective(self):
        images = {tau(PrincipalUltrafilter(ABC, x)) for x in ABC}
        assert len(images) == len(ABC)

    def test_point_must_be_in_domain(self):
        with pytest.raises(ValueError):
            PrincipalUltrafilter(ABC, "z")


class TestConvexOps:
    def test_barycenter_point_mass(self):
        assert barycenter(Dist({F(2, 5): F(1)})) == F(2, 5)

    def test_barycenter_coin(self):
        assert barycenter(Dist({F(0): F(1, 2), F(1): F(1, 2)})) == F(1, 2)

    def test_barycenter_hand_value_and_affine_exchange(self):
        d = Dist({F(1, 3): F(1, 4), F(2, 3): F(3, 4)})
        b = barycenter(d)
        assert b == F(7, 12)
        # q(t) = t/2 + 1/4 commutes with averaging
        q = lambda t: t / 2 + F(1, 4)
        assert q(b) == sum(w * q(v) for v, w in d.items())

    def test_barycenter_random_affine(self):
        # q(t) = a*t + b stays within [0,1] whenever b and a+b do
        rng = random.Random(9)
        for _ in range(100):
            vals = [F(rng.randint(0, 6), 6) for _ in range(3)]
            d = Dist.from_pairs([(v, F(1, 3)) for v in vals])
            b = barycenter(d)
            intercept = F(rng.randint(0, 8), 8)
            endpoint = F(rng.randint(0, 8), 8)  # value of q at t=1
            slope = endpoint - intercept
            q = lambda t: slope * t + intercept
            assert q(b) == sum(w * q(v) for v, w in d.items())

    def test_mix_single_state(self):
        rng = random.Random(10)
        h = random_expectation(rng, ABC)
        assert mix_states(Dist({h: F(1)})) == h

    def test_mix_diracs_uniform(self):
        mixed = mix_states(
            Dist.from_pairs(
                [(exp_unit("a", AB), F(1, 2)), (exp_unit("b", AB), F(1, 2))]
            )
        )
        assert mixed == Expectation(AB, {"a": F(1, 2), "b": F(1, 2)})

    def test_mix_evaluation_identity(self):
        rng = random.Random(11)
        em = PredicateEM(ABC)
        for _ in range(100):
            hs = [random_expectation(rng, ABC) for _ in range(3)]
            mixture = Dist.from_pairs([(h, F(1, 3)) for h in hs])
            mixed = mix_states(mixture)
            p = em.sample(rng)
            assert exp_eval(mixed, p) == sum(
                w * exp_eval(h, p) for h, w in mixture.items()
            )


class TestExp2Iso:
    def test_dirac_first(self):
        assert exp2_iso(exp_unit("a", AB)) == 1

    def test_uniform(self):
        assert exp2_iso(Expectation(AB, {"a": F(1, 2), "b": F(1, 2)})) == F(1, 2)

    def test_round_trips(self):
        rng = random.Random(12)
        for _ in range(100):
            r = F(rng.randint(0, 24), 24)
            assert exp2_iso(exp2_iso_inverse(r, AB)) == r
        for _ in range(50):
            h = random_expectation(rng, AB)
            assert exp2_iso_inverse(exp2_iso(h), AB) == h

    def test_arity_checked(self):
        with pytest.raises(ValueError):
            exp2_iso(exp_unit("a", ABC))

    def test_singleton_space_has_unique_expectation(self):
        single = FinSet(["only"])
        h = Expectation(single, {"only": F(1)})
        with pytest.raises(ValueError):
            Expectation(single, {"only": F(1, 2)})
        assert exp_unit("only", single) == h


class TestLawSuite:
    def test_laws_hold(self):
        report = check_monad_laws(seed=21, cases=150)
        assert report.passed, report.failing_axioms()

    def test_mutated_sigma_caught_in_mu_square(self):
        report = check_monad_laws(seed=21, cases=150, sigma_fn=mutant_sigma_squared)
        assert "sigma-mu-square" in report.failing_axioms()
        bad = next(c for c in report.checks if c.axiom == "sigma-mu-square")
        assert bad.failures[0].inputs

    def test_mutated_compose_breaks_associativity(self):
        report = check_monad_laws(
            seed=21, cases=150, compose_fn=mutant_compose_transposed
        )
        assert "kleisli-associativity" in report.failing_axioms()

    def test_mutated_flattening_breaks_dist_laws(self):
        report = check_monad_laws(seed=21, cases=150, dist_mu_fn=mutant_dist_mu_squared)
        failing = set(report.failing_axioms())
        assert {"dist-left-unit", "dist-right-unit", "dist-associativity"} & failing

    def test_additivity_check_dataclass(self):
        ok = AdditivityCheck(True)
        assert ok.describe(AB) == "finitely additive"
