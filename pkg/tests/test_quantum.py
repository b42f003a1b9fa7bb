"""Operator invariants, spectral decomposition, states, and tomography.

numpy's eigh serves as the independent oracle for the hand-rolled Jacobi
solver; nothing in the package itself calls it.
"""
import numpy as np
import pytest

from exmon.quantum import (
    Density,
    DimensionMismatchError,
    Effect,
    FormalTensor,
    InvalidOperatorError,
    Projection,
    check_layer_cake_roundtrip,
    check_projection_state_additivity,
    check_tomography_roundtrip,
    check_trace_state_hom,
    coordinate_projection,
    density_from_state,
    effect_osum,
    gleason_suite,
    hermitize,
    ic_effects,
    ic_keys,
    identity_effect,
    jacobi_eigh,
    layer_cake,
    max_abs,
    random_density_matrix,
    random_effect_matrix,
    random_hermitian,
    random_unitary,
    state_of_density,
    tabulate_state,
    tensor_eval,
    zero_effect,
    zero_projection,
)

DIMS = (2, 3, 4)


class TestJacobiAgainstNumpyOracle:
    @pytest.mark.parametrize("dim", DIMS)
    def test_eigenvalues_match(self, dim):
        rng = np.random.default_rng(100 + dim)
        for _ in range(50):
            h = random_hermitian(rng, dim)
            w, v = jacobi_eigh(h)
            oracle = np.sort(np.linalg.eigvalsh(h))[::-1]
            assert np.allclose(w, oracle, atol=1e-10)
            assert max_abs(v @ np.diag(w) @ v.conj().T - h) < 1e-10
            assert max_abs(v.conj().T @ v - np.eye(dim)) < 1e-12

    def test_already_diagonal(self):
        w, v = jacobi_eigh(np.diag([0.25, 0.75]).astype(complex))
        assert np.allclose(w, [0.75, 0.25])
        assert np.allclose(np.abs(v), [[0, 1], [1, 0]])

    def test_degenerate_spectrum(self):
        rng = np.random.default_rng(5)
        u = random_unitary(rng, 3)
        h = u @ np.diag([0.5, 0.5, 0.1]) @ u.conj().T
        w, v = jacobi_eigh(h)
        assert np.allclose(w, [0.5, 0.5, 0.1], atol=1e-12)
        assert max_abs(v @ np.diag(w) @ v.conj().T - h) < 1e-11


class TestOperatorClasses:
    def test_density_validation(self):
        Density(np.eye(2) / 2)
        with pytest.raises(InvalidOperatorError, match="trace"):
            Density(np.eye(2))
        with pytest.raises(InvalidOperatorError, match="Hermitian"):
            Density(np.array([[0.5, 0.4], [0.0, 0.5]]))
        with pytest.raises(InvalidOperatorError, match="eigenvalue"):
            Density(np.diag([1.5, -0.5]))

    def test_dimension_bounds(self):
        with pytest.raises(InvalidOperatorError, match="dimension"):
            Effect(np.eye(5))
        with pytest.raises(InvalidOperatorError, match="dimension"):
            Effect(np.eye(1))

    def test_non_finite_rejected(self):
        m = np.eye(2, dtype=complex)
        m[0, 0] = np.nan
        with pytest.raises(InvalidOperatorError, match="finite"):
            Effect(m)

    def test_effect_spectrum_bounds(self):
        Effect(np.diag([0.0, 1.0]))
        with pytest.raises(InvalidOperatorError, match="spectrum"):
            Effect(np.diag([0.5, 1.2]))

    def test_projection_idempotence(self):
        Projection(np.diag([1.0, 0.0]))
        zero_projection(3)
        with pytest.raises(InvalidOperatorError, match="idempotent"):
            Projection(np.diag([0.5, 0.0]))

    def test_hermitian_clamping(self):
        tiny = 1e-12
        e = Effect(np.array([[0.5, 0.1 + tiny * 1j], [0.1 - tiny * 1j + tiny, 0.5]]))
        assert max_abs(e.matrix - e.matrix.conj().T) == 0.0


class TestEffectSum:
    def test_complement_reaches_identity(self):
        rng = np.random.default_rng(11)
        for dim in DIMS:
            a = Effect(random_effect_matrix(rng, dim))
            comp = Effect(np.eye(dim) - a.matrix)
            total = effect_osum(a, comp)
            assert total is not None
            assert max_abs(total.matrix - np.eye(dim)) < 1e-12

    def test_overflow_undefined(self):
        a = Effect(np.diag([0.6, 0.1]))
        b = Effect(np.diag([0.5, 0.2]))
        assert effect_osum(a, b) is None

    def test_zero_neutral(self):
        a = Effect(np.diag([0.3, 0.7]))
        total = effect_osum(a, zero_effect(2))
        assert max_abs(total.matrix - a.matrix) == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            effect_osum(identity_effect(2), identity_effect(3))


class TestLayerCake:
    def test_two_level_example(self):
        # 0.5 * diag(1,0) + 0.4 * I + 0.1 * 0 == diag(0.9, 0.4) by arithmetic
        cake = layer_cake(Effect(np.diag([0.9, 0.4])))
        coeffs = [round(c, 12) for c, _ in cake.terms]
        assert coeffs == [0.5, 0.4, 0.1]
        assert np.allclose(cake.terms[0][1].matrix, np.diag([1.0, 0.0]))
        assert np.allclose(cake.terms[1][1].matrix, np.eye(2))
        assert max_abs(cake.terms[2][1].matrix) == 0.0

    def test_projection_input(self):
        p = coordinate_projection(3, [0, 2])
        cake = layer_cake(p.as_effect())
        assert len(cake.terms) == 1
        c, q = cake.terms[0]
        assert c == pytest.approx(1.0)
        assert max_abs(q.matrix - p.matrix) < 1e-12

    def test_half_identity(self):
        cake = layer_cake(Effect(np.eye(2) / 2))
        assert [round(c, 12) for c, _ in cake.terms] == [0.5, 0.5]
        assert max_abs(cake.terms[1][1].matrix) == 0.0

    def test_zero_effect(self):
        cake = layer_cake(zero_effect(2))
        assert len(cake.terms) == 1
        assert cake.terms[0][0] == pytest.approx(1.0)
        assert max_abs(cake.terms[0][1].matrix) == 0.0

    @pytest.mark.parametrize("dim", DIMS)
    def test_roundtrip_random(self, dim):
        report = check_layer_cake_roundtrip(dim, trials=100, seed=31 + dim)
        assert report.passed, report.failing_axioms()

    def test_single_term_eval(self):
        p = coordinate_projection(2, [0])
        t = FormalTensor([(1.0, p)])
        assert max_abs(tensor_eval(t).matrix - p.matrix) == 0.0

    def test_degenerate_tensor_rejected(self):
        with pytest.raises(ValueError, match="sum"):
            FormalTensor([(0.0, zero_projection(2)), (0.0, coordinate_projection(2, [0]))])
        with pytest.raises(DimensionMismatchError):
            FormalTensor([(0.5, zero_projection(2)), (0.5, zero_projection(3))])


class TestTraceStates:
    def test_maximally_mixed_qubit(self):
        s = state_of_density(Density(np.eye(2) / 2))
        assert s(coordinate_projection(2, [0]).as_effect()) == pytest.approx(0.5)
        assert s(identity_effect(2)) == pytest.approx(1.0)
        assert s(zero_effect(2)) == pytest.approx(0.0)

    def test_coordinate_projections_at_mixed_qutrit(self):
        s = state_of_density(Density(np.eye(3) / 3))
        p = coordinate_projection(3, [0])
        q = coordinate_projection(3, [1])
        assert s(p.as_effect()) == pytest.approx(1 / 3)
        both = Effect(p.matrix + q.matrix)
        assert s(both) == pytest.approx(s(p.as_effect()) + s(q.as_effect()))

    @pytest.mark.parametrize("dim", DIMS)
    def test_hom_checks_pass(self, dim):
        rng = np.random.default_rng(41 + dim)
        m = Density(random_density_matrix(rng, dim))
        assert check_trace_state_hom(m, trials=100, seed=7).passed
        assert check_projection_state_additivity(m, trials=100, seed=7).passed

    def test_broken_functional_caught(self):
        rng = np.random.default_rng(43)
        m = Density(random_density_matrix(rng, 3))

        def squared(a):
            mat = a.matrix if hasattr(a, "matrix") else a
            return float(np.trace(m.matrix @ mat).real) ** 2

        report = check_projection_state_additivity(m, trials=100, seed=7, functional=squared)
        assert "additive-on-orthogonal-projections" in report.failing_axioms()


class TestTomography:
    def test_family_size_and_projectivity(self):
        for dim in DIMS:
            family = ic_effects(dim)
            assert len(family) == dim * dim
            for eff in family.values():
                assert max_abs(eff.matrix @ eff.matrix - eff.matrix) < 1e-12

    def test_identity_over_d(self):
        for dim in DIMS:
            m = Density(np.eye(dim) / dim)
            rec = density_from_state(tabulate_state(state_of_density(m), dim), dim)
            assert max_abs(rec.matrix - m.matrix) < 1e-12

    @pytest.mark.parametrize("dim", DIMS)
    def test_roundtrip_random(self, dim):
        report = check_tomography_roundtrip(dim, trials=50, seed=53 + dim)
        assert report.passed, report.failing_axioms()

    def test_perturbed_table_rejected(self):
        rng = np.random.default_rng(59)
        m = Density(random_density_matrix(rng, 3))
        table = tabulate_state(state_of_density(m), 3)
        table[("diag", 0)] += 0.2
        with pytest.raises((InvalidOperatorError, ValueError)):
            density_from_state(table, 3)

    def test_incomplete_table_rejected(self):
        rng = np.random.default_rng(61)
        m = Density(random_density_matrix(rng, 2))
        table = tabulate_state(state_of_density(m), 2)
        del table[("im", 0, 1)]
        with pytest.raises(ValueError, match="incomplete"):
            density_from_state(table, 2)

    def test_keys_cover_entries(self):
        assert ("diag", 0) in ic_keys(2)
        assert ("re", 0, 1) in ic_keys(2) and ("im", 0, 1) in ic_keys(2)


def test_full_suite_all_dims():
    for dim in DIMS:
        reports = gleason_suite(dim, trials=40, seed=71)
        assert all(r.passed for r in reports), [
            (r.subject, r.failing_axioms()) for r in reports if not r.passed
        ]


def test_hermitize_is_projection_onto_hermitians():
    rng = np.random.default_rng(73)
    g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    h = hermitize(g)
    assert max_abs(h - h.conj().T) == 0.0
    assert max_abs(hermitize(h) - h) == 0.0
