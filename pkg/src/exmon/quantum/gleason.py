"""Finite-dimensional operator effects, trace states, and tomography.

Works at dimensions 2 to 4 with double precision.  Densities induce state
functionals A -> Re tr(M A); those are additive over defined effect sums
and homogeneous under scalars, which the seeded checkers verify within
tolerance.  Every effect decomposes as a convex combination of its
cumulative spectral projections (plus a zero-projection remainder), and
evaluating such a formal combination lands back on the effect; that round
trip is the finite-dimensional surjectivity witness this module tests.

Tomography uses a fixed informationally complete family of rank-one
projections (d^2 of them):

    diag(k)   = |k><k|
    re(k, l)  = |u><u|,  u = (|k> + |l>)/sqrt(2)      for k < l
    im(k, l)  = |u><u|,  u = (|k> + i|l>)/sqrt(2)     for k < l

whose trace values determine the matrix entries:

    M[k,k]    = s(diag(k))
    Re M[k,l] = s(re(k,l)) - (M[k,k] + M[l,l]) / 2
    Im M[k,l] = (M[k,k] + M[l,l]) / 2 - s(im(k,l))
"""
from __future__ import annotations

from typing import Callable, Mapping

import numpy as np

from ..report import LawReport
from .linalg import (
    hermitize,
    jacobi_eigh,
    max_abs,
    random_density_matrix,
    random_effect_matrix,
    random_unitary,
)

DEFAULT_TOL = 1e-9
MIN_DIM = 2
MAX_DIM = 4


class InvalidOperatorError(ValueError):
    """A matrix violated the invariants of its operator class."""


class DimensionMismatchError(ValueError):
    pass


def _check_matrix(matrix, tol: float) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidOperatorError(f"expected a square matrix, got shape {m.shape}")
    d = m.shape[0]
    if not MIN_DIM <= d <= MAX_DIM:
        raise InvalidOperatorError(f"dimension {d} outside supported range {MIN_DIM}..{MAX_DIM}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidOperatorError("matrix has non-finite entries")
    if max_abs(m - m.conj().T) > tol:
        raise InvalidOperatorError("matrix is not Hermitian within tolerance")
    return hermitize(m)  # clamp to exact Hermitian form for the eigensolver


class Density:
    """Positive semidefinite, trace-one operator."""

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        m = _check_matrix(matrix, tol)
        w, _ = jacobi_eigh(m)
        if w[-1] < -tol:
            raise InvalidOperatorError(f"negative eigenvalue {w[-1]:.3e}")
        if abs(np.trace(m).real - 1.0) > tol:
            raise InvalidOperatorError(f"trace {np.trace(m).real} is not 1")
        self.matrix = m
        self.tol = tol

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class Effect:
    """Positive operator below the identity."""

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        m = _check_matrix(matrix, tol)
        w, _ = jacobi_eigh(m)
        if w[-1] < -tol or w[0] > 1 + tol:
            raise InvalidOperatorError(
                f"spectrum [{w[-1]:.3e}, {w[0]:.3e}] outside [0, 1] within tolerance"
            )
        self.matrix = m
        self.tol = tol

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


class Projection:
    """Hermitian idempotent (the zero matrix included)."""

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        m = _check_matrix(matrix, tol)
        if max_abs(m @ m - m) > tol:
            raise InvalidOperatorError("matrix is not idempotent within tolerance")
        self.matrix = m
        self.tol = tol

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def as_effect(self) -> Effect:
        return Effect(self.matrix, self.tol)


def identity_effect(dim: int) -> Effect:
    return Effect(np.eye(dim, dtype=complex))

def zero_effect(dim: int) -> Effect:
    return Effect(np.zeros((dim, dim), dtype=complex))

def zero_projection(dim: int) -> Projection:
    return Projection(np.zeros((dim, dim), dtype=complex))

def coordinate_projection(dim: int, indices) -> Projection:
    m = np.zeros((dim, dim), dtype=complex)
    for k in indices:
        m[k, k] = 1.0
    return Projection(m)


def effect_osum(a: Effect, b: Effect) -> Effect | None:
    """Partial sum of effects: a + b when its top eigenvalue stays below 1."""
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")
    total = a.matrix + b.matrix
    w, _ = jacobi_eigh(total)
    tol = max(a.tol, b.tol)
    if w[0] > 1 + tol:
        return None
    return Effect(total, tol)


class StateFunctional:
    """Effect -> value map, backed by a density or by a sampled table."""

    def __init__(
        self,
        density: Density | None = None,
        table: Mapping[tuple, float] | None = None,
        dim: int | None = None,
    ):
        if (density is None) == (table is None):
            raise ValueError("provide exactly one of density or table")
        self.density = density
        self.table = dict(table) if table is not None else None
        self._dim = density.dim if density is not None else dim
        if self._dim is None:
            raise ValueError("a table-backed functional needs an explicit dim")

    @property
    def dim(self) -> int:
        return self._dim

    def __call__(self, effect) -> float:
        if self.density is None:
            raise ValueError("table-backed functional cannot evaluate raw effects")
        m = effect.matrix if hasattr(effect, "matrix") else np.asarray(effect, dtype=complex)
        return float(np.trace(self.density.matrix @ m).real)

    def value(self, key: tuple) -> float:
        if self.table is None:
            return self(ic_effects(self.dim)[key])
        return self.table[key]


def state_of_density(m: Density) -> StateFunctional:
    """The trace state A -> Re tr(M A) of a density matrix."""
    return StateFunctional(density=m)


# --- layer cake and formal convex combinations of projections ---


class FormalTensor:
    """Convex combination of projections, kept unevaluated.

    The zero projection is a legal term; coefficients must be convex
    (within tolerance), so an all-zero-coefficient list is rejected.
    """

    def __init__(self, terms, tol: float = DEFAULT_TOL):
        terms = [(float(c), p) for c, p in terms]
        if not terms:
            raise ValueError("a formal combination needs at least one term")
        dims = {p.dim for _, p in terms}
        if len(dims) != 1:
            raise DimensionMismatchError(f"mixed dimensions {sorted(dims)}")
        for c, _ in terms:
            if c < -tol or c > 1 + tol:
                raise ValueError(f"coefficient {c} outside [0, 1]")
        total = sum(c for c, _ in terms)
        if abs(total - 1.0) > 10 * tol:
            raise ValueError(f"coefficients sum to {total}, expected 1")
        self.terms = terms
        self.tol = tol

    @property
    def dim(self) -> int:
        return self.terms[0][1].dim


def layer_cake(a: Effect) -> FormalTensor:
    """Decompose an effect over its cumulative spectral projections.

    With merged eigenvalues l_1 > ... > l_k (clamped into [0,1]) and
    cumulative projections Q_i onto the top-i eigenspaces, the terms are
    (l_i - l_{i+1}) Q_i, then l_k Q_k, then (1 - l_1) on the zero
    projection; zero coefficients are omitted.
    """
    tol = a.tol
    w, v = jacobi_eigh(a.matrix)
    d = a.dim
    # merge near-equal eigenvalues into one spectral block
    groups: list[tuple[float, list[int]]] = []
    for i, lam in enumerate(w):
        if groups and groups[-1][0] - lam <= tol:
            groups[-1][1].append(i)
        else:
            groups.append((float(lam), [i]))
    levels = [(min(1.0, max(0.0, lam)), idxs) for lam, idxs in groups]

    terms: list[tuple[float, Projection]] = []
    cumulative = np.zeros((d, d), dtype=complex)
    for i, (lam, idxs) in enumerate(levels):
        for j in idxs:
            col = v[:, j : j + 1]
            cumulative = cumulative + col @ col.conj().T
        nxt = levels[i + 1][0] if i + 1 < len(levels) else 0.0
        coeff = lam - nxt
        if coeff > 0:
            terms.append((coeff, Projection(hermitize(cumulative), tol)))
    top = levels[0][0]
    if 1.0 - top > 0:
        terms.append((1.0 - top, zero_projection(d)))
    if not terms:  # the zero effect: all coefficients vanished
        terms.append((1.0, zero_projection(d)))
    return FormalTensor(terms, tol)


def tensor_eval(t: FormalTensor) -> Effect:
    """Evaluate the combination: sum of coeff * projection, as an Effect."""
    total = np.zeros((t.dim, t.dim), dtype=complex)
    for c, p in t.terms:
        total = total + c * p.matrix
    return Effect(total, t.tol)


# --- tomography over the fixed informationally complete family ---


def ic_keys(dim: int):
    keys = [("diag", k) for k in range(dim)]
    for k in range(dim):
        for l in range(k + 1, dim):
            keys.append(("re", k, l))
            keys.append(("im", k, l))
    return keys


def ic_effects(dim: int) -> dict[tuple, Effect]:
    """The informationally complete projection family described above."""
    out: dict[tuple, Effect] = {}
    for key in ic_keys(dim):
        vec = np.zeros(dim, dtype=complex)
        if key[0] == "diag":
            vec[key[1]] = 1.0
        elif key[0] == "re":
            vec[key[1]] = 1 / np.sqrt(2)
            vec[key[2]] = 1 / np.sqrt(2)
        else:
            vec[key[1]] = 1 / np.sqrt(2)
            vec[key[2]] = 1j / np.sqrt(2)
        out[key] = Effect(np.outer(vec, vec.conj()))
    return out


def tabulate_state(s: StateFunctional, dim: int | None = None) -> dict[tuple, float]:
    """Sample the functional on the tomography family."""
    dim = dim or s.dim
    if s.table is not None:
        return {key: s.table[key] for key in ic_keys(dim)}
    family = ic_effects(dim)
    return {key: s(family[key]) for key in ic_keys(dim)}


def density_from_state(
    s: StateFunctional | Mapping[tuple, float],
    dim: int | None = None,
    tol: float = 1e-6,
) -> Density:
    """Reconstruct the density matrix behind a sampled state table.

    tol is the recovery error budget: the invariants of the assembled
    matrix are enforced within it.  Raises on a table missing family
    entries, and whenever the assembled matrix breaks the Density
    invariants beyond tol (as happens when a table value is perturbed).
    """
    if isinstance(s, StateFunctional):
        dim = dim or s.dim
        table = s.table if s.table is not None else tabulate_state(s, dim)
    else:
        table = dict(s)
        if dim is None:
            raise ValueError("dim is required with a bare table")
    missing = [key for key in ic_keys(dim) if key not in table]
    if missing:
        raise ValueError(f"tomography table incomplete: missing {missing[:3]}")
    for key, value in table.items():
        if value < -tol or value > 1 + tol:
            raise ValueError(f"table value {value} at {key} outside [0, 1]")

    m = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        m[k, k] = table[("diag", k)]
    for k in range(dim):
        for l in range(k + 1, dim):
            half = (table[("diag", k)] + table[("diag", l)]) / 2
            re = table[("re", k, l)] - half
            im = half - table[("im", k, l)]
            m[k, l] = re + 1j * im
            m[l, k] = re - 1j * im
    return Density(m, tol=tol)


# --- randomized law checks ---


def check_trace_state_hom(
    m: Density,
    trials: int = 100,
    seed: int = 0,
    functional: Callable | None = None,
) -> LawReport:
    """Additivity on defined effect sums, homogeneity, unit and zero mass."""
    rng = np.random.default_rng(seed)
    s = functional if functional is not None else state_of_density(m)
    tol = 10 * m.tol
    d = m.dim
    report = LawReport(f"trace state (dim {d})")
    unit_mass = report.new_check("unit-mass")
    zero_mass = report.new_check("zero-mass")
    additive = report.new_check("additive-on-effect-sums")
    homogeneous = report.new_check("homogeneous")

    unit_mass.cases += 1
    got = s(identity_effect(d))
    if abs(got - 1.0) > tol:
        unit_mass.record(("I",), "1", f"{got!r}")
    zero_mass.cases += 1
    got = s(zero_effect(d))
    if abs(got) > tol:
        zero_mass.record(("0",), "0", f"{got!r}")

    for _ in range(trials):
        a = Effect(random_effect_matrix(rng, d))
        # b below the orthosupplement of a, so the sum is always defined
        b = Effect((np.eye(d) - a.matrix) * rng.uniform(0.0, 1.0))
        total = effect_osum(a, b)
        if total is not None:
            additive.cases += 1
            gap = abs(s(total) - s(a) - s(b))
            if gap > tol:
                additive.record(("A", "B"), f"gap <= {tol}", f"gap {gap:.3e}")
        homogeneous.cases += 1
        scale = rng.uniform(0.0, 1.0)
        scaled = Effect(a.matrix * scale)
        gap = abs(s(scaled) - scale * s(a))
        if gap > tol:
            homogeneous.record((f"r={scale:.4f}", "A"), f"gap <= {tol}", f"gap {gap:.3e}")

    return report


def check_projection_state_additivity(
    m: Density,
    trials: int = 100,
    seed: int = 0,
    functional: Callable | None = None,
) -> LawReport:
    """Additivity on random orthogonal projection pairs, plus endpoint masses.

    At dimension 2 this only exercises the homomorphism property of trace
    states on projections; it is not a converse-direction statement.
    """
    rng = np.random.default_rng(seed)
    s = functional if functional is not None else state_of_density(m)
    tol = 10 * m.tol
    d = m.dim
    report = LawReport(f"projection additivity (dim {d})")
    endpoints = report.new_check("endpoint-masses")
    additive = report.new_check("additive-on-orthogonal-projections")

    endpoints.cases += 1
    if abs(s(identity_effect(d)) - 1.0) > tol or abs(s(zero_effect(d))) > tol:
        endpoints.record(
            ("I", "0"), "1 and 0", f"{s(identity_effect(d))!r}, {s(zero_effect(d))!r}"
        )

    for _ in range(trials):
        u = random_unitary(rng, d)
        perm = [int(k) for k in rng.permutation(d)]
        i = int(rng.integers(1, d))          # |first| in 1..d-1
        j = int(rng.integers(1, d - i + 1))  # |second| in 1..d-i
        p = Projection(u @ coordinate_projection(d, perm[:i]).matrix @ u.conj().T)
        q = Projection(u @ coordinate_projection(d, perm[i : i + j]).matrix @ u.conj().T)
        additive.cases += 1
        gap = abs(s(Effect(p.matrix + q.matrix)) - s(p.as_effect()) - s(q.as_effect()))
        if gap > tol:
            additive.record(("P", "Q"), f"gap <= {tol}", f"gap {gap:.3e}")

    return report


def check_layer_cake_roundtrip(dim: int, trials: int = 100, seed: int = 0) -> LawReport:
    """layer_cake then tensor_eval reproduces random effects within 10*tol."""
    rng = np.random.default_rng(seed)
    report = LawReport(f"layer cake (dim {dim})")
    convex = report.new_check("coefficients-convex")
    rebuild = report.new_check("reconstruction")
    for _ in range(trials):
        a = Effect(random_effect_matrix(rng, dim))
        cake = layer_cake(a)
        convex.cases += 1
        total = sum(c for c, _ in cake.terms)
        if abs(total - 1.0) > 10 * a.tol:
            convex.record(("A",), "1", f"{total!r}")
        rebuild.cases += 1
        err = max_abs(tensor_eval(cake).matrix - a.matrix)
        if err > 10 * a.tol:
            rebuild.record(("A",), f"error <= {10 * a.tol}", f"error {err:.3e}")
    return report


def check_tomography_roundtrip(
    dim: int, trials: int = 50, seed: int = 0, max_error: float = 1e-6
) -> LawReport:
    """Reconstructing from exact trace tables stays within max_error."""
    rng = np.random.default_rng(seed)
    report = LawReport(f"tomography (dim {dim})")
    roundtrip = report.new_check("roundtrip")
    for _ in range(trials):
        m = Density(random_density_matrix(rng, dim))
        table = tabulate_state(state_of_density(m), dim)
        rebuilt = density_from_state(table, dim)
        roundtrip.cases += 1
        err = max_abs(rebuilt.matrix - m.matrix)
        if err > max_error:
            roundtrip.record(("M",), f"error <= {max_error}", f"error {err:.3e}")
    return report


def gleason_suite(dim: int, trials: int = 100, seed: int = 0) -> list[LawReport]:
    """The full randomized check suite at one dimension."""
    rng = np.random.default_rng(seed)
    reports = []
    m = Density(random_density_matrix(rng, dim))
    reports.append(check_trace_state_hom(m, trials, seed + 1))
    reports.append(check_projection_state_additivity(m, trials, seed + 2))
    reports.append(check_layer_cake_roundtrip(dim, trials, seed + 3))
    reports.append(check_tomography_roundtrip(dim, max(1, trials // 2), seed + 4))
    return reports
