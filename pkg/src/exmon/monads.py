"""Finite distributions, expectations, and the maps connecting them.

Over a finite atom set the functional view (effect-module maps from
predicates to the unit interval) collapses onto a plain weight table, so an
expectation here is stored canonically as exact atom weights summing to 1.
The module provides:

  * the distribution monad (unit, bind, flattening),
  * expectations with predicate evaluation and Kleisli composition,
  * the distribution->expectation conversion and its principal-ultrafilter
    counterpart, with seeded law checking for the monad and monad-map laws,
  * the bijection between expectations and finitely additive set functions
    on the powerset (subset tables keyed by bitmask),
  * convex operations: state mixing and barycenters.

A second, opaque face (RawFunctional) exists so law checks can consume
adversarial functionals that are not backed by a weight table.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .effect.predicates import DomainMismatchError, FinSet, Predicate
from .rational import as_unit, format_rational, parse_rational
from .report import LawReport

MAX_MEASURE_ATOMS = 12  # 4096 subsets; keeps exhaustive additivity checks fast


class Dist:
    """Finite-support formal convex combination with exact weights.

    Support values may be atoms of a declared finite domain, or arbitrary
    hashable values (other distributions, expectations, scalars) for the
    higher-order operations.  Zero weights are dropped; weights must sum to
    exactly 1.
    """

    __slots__ = ("domain", "_weights")

    def __init__(self, weights: Mapping, domain: FinSet | None = None):
        cleaned = {}
        total = Fraction(0)
        for value, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} at {value!r}")
            if w == 0:
                continue
            cleaned[value] = cleaned.get(value, Fraction(0)) + w
            total += w
        if total != 1:
            raise ValueError(f"weights sum to {total}, expected exactly 1")
        if domain is not None:
            for value in cleaned:
                if value not in domain:
                    raise ValueError(f"support value {value!r} not in domain")
        self.domain = domain
        self._weights = cleaned

    @classmethod
    def from_pairs(cls, pairs, domain: FinSet | None = None) -> "Dist":
        """Build from (value, weight) pairs, summing duplicate values."""
        acc: dict = {}
        for value, w in pairs:
            acc[value] = acc.get(value, Fraction(0)) + Fraction(w)
        return cls(acc, domain)

    def weight(self, value) -> Fraction:
        return self._weights.get(value, Fraction(0))

    def support(self) -> tuple:
        return tuple(self._weights.keys())

    def items(self):
        return self._weights.items()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Dist)
            and self.domain == other.domain
            and self._weights == other._weights
        )

    def __hash__(self) -> int:
        return hash((self.domain, frozenset(self._weights.items())))

    def __repr__(self) -> str:
        body = " + ".join(f"{w}*{v!r}" for v, w in self._weights.items())
        return f"Dist({body})"

    def to_json(self) -> dict:
        return {str(v): format_rational(w) for v, w in self._weights.items()}


def dist_unit(x, domain: FinSet) -> Dist:
    """Dirac distribution at x."""
    if x not in domain:
        raise ValueError(f"atom {x!r} not in domain")
    return Dist({x: Fraction(1)}, domain)


def dist_map(f: Callable, d: Dist, domain: FinSet | None = None) -> Dist:
    """Pushforward along f, merging collisions."""
    out: dict = {}
    for v, w in d.items():
        fv = f(v)
        out[fv] = out.get(fv, Fraction(0)) + w
    return Dist(out, domain)


def dist_mu(psi: Dist) -> Dist:
    """Flatten a distribution over distributions: weight y by sum of products."""
    inner_domain = None
    first = True
    out: dict = {}
    for phi, w in psi.items():
        if not isinstance(phi, Dist):
            raise TypeError("dist_mu expects a distribution over distributions")
        if first:
            inner_domain = phi.domain
            first = False
        elif phi.domain != inner_domain:
            raise DomainMismatchError("inner distributions do not share a domain")
        for y, v in phi.items():
            out[y] = out.get(y, Fraction(0)) + w * v
    return Dist(out, inner_domain)


def dist_bind(d: Dist, f: Callable[[object], Dist]) -> Dist:
    """Kleisli extension for the distribution monad."""
    return dist_mu(dist_map(f, d))


class Expectation:
    """An expectation over a finite domain: total exact weights summing to 1.

    Evaluating against a predicate is the weighted sum of predicate values;
    that evaluation is an effect-module homomorphism from predicates to the
    unit interval, which is exactly what the functional view demands.
    """

    __slots__ = ("domain", "_weights")

    def __init__(self, domain: FinSet, weights: Mapping[str, object]):
        table = [Fraction(0)] * len(domain)
        for atom, w in weights.items():
            w = Fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} at {atom!r}")
            table[domain.index(atom)] = w
        if sum(table) != 1:
            raise ValueError(f"weights sum to {sum(table)}, expected exactly 1")
        self.domain = domain
        self._weights = tuple(table)

    @classmethod
    def from_weights(cls, domain: FinSet, weights: Iterable) -> "Expectation":
        return cls(domain, dict(zip(domain.atoms, weights)))

    def weight(self, atom: str) -> Fraction:
        return self._weights[self.domain.index(atom)]

    def weights(self) -> tuple[Fraction, ...]:
        return self._weights

    def items(self):
        return zip(self.domain.atoms, self._weights)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Expectation)
            and self.domain == other.domain
            and self._weights == other._weights
        )

    def __hash__(self) -> int:
        return hash((self.domain, self._weights))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}: {w}" for a, w in self.items())
        return f"Expectation({{{body}}})"

    def to_json(self) -> dict:
        return {a: format_rational(w) for a, w in self.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> "Expectation":
        domain = FinSet(obj.keys())
        return cls(domain, {a: parse_rational(s) for a, s in obj.items()})


def exp_unit(x: str, domain: FinSet) -> Expectation:
    """The Dirac expectation: evaluates any predicate at x."""
    if x not in domain:
        raise ValueError(f"atom {x!r} not in domain")
    return Expectation(domain, {x: Fraction(1)})


def exp_eval(h: Expectation, p: Predicate) -> Fraction:
    """Integrate the predicate against the expectation: sum of w(x) * p(x)."""
    if h.domain != p.domain:
        raise DomainMismatchError("expectation and predicate domains differ")
    return sum(
        (w * v for w, v in zip(h.weights(), p.values())), start=Fraction(0)
    )


def sigma(phi: Dist) -> Expectation:
    """Reread a distribution as an expectation (same weight table)."""
    if phi.domain is None:
        raise ValueError("sigma needs a distribution with a declared finite domain")
    return Expectation(phi.domain, dict(phi.items()))


def mix_states(mixture: Dist) -> Expectation:
    """Convex combination of expectations, pointwise on weight tables."""
    domain = None
    acc: list[Fraction] | None = None
    for h, w in mixture.items():
        if not isinstance(h, Expectation):
            raise TypeError("mix_states expects a distribution over expectations")
        if domain is None:
            domain = h.domain
            acc = [Fraction(0)] * len(domain)
        elif h.domain != domain:
            raise DomainMismatchError("expectations do not share a domain")
        for i, v in enumerate(h.weights()):
            acc[i] += w * v
    if domain is None:
        raise ValueError("empty mixture")
    return Expectation.from_weights(domain, acc)


def barycenter(phi: Dist) -> Fraction:
    """Weighted average of unit-interval support values.

    For every affine q mapping [0,1] into itself, q of the barycenter equals
    the phi-weighted average of q over the support.
    """
    total = Fraction(0)
    for v, w in phi.items():
        total += w * as_unit(v)
    return total


class RawFunctional:
    """Opaque predicate -> scalar functional (the continuation-monad face)."""

    __slots__ = ("_fn",)

    def __init__(self, fn: Callable[[Predicate], Fraction]):
        self._fn = fn

    def __call__(self, p: Predicate) -> Fraction:
        return self._fn(p)


def embed_continuation(h: Expectation) -> RawFunctional:
    """Forget the weight table; keep only the evaluation behaviour."""
    return RawFunctional(lambda p: exp_eval(h, p))


def exp2_iso(h: Expectation) -> Fraction:
    """The two-atom expectation space is the unit interval: first-atom weight."""
    if len(h.domain) != 2:
        raise ValueError(f"exp2_iso needs a 2-atom domain, got {len(h.domain)}")
    return h.weights()[0]


def exp2_iso_inverse(value, domain: FinSet) -> Expectation:
    if len(domain) != 2:
        raise ValueError(f"exp2_iso_inverse needs a 2-atom domain, got {len(domain)}")
    r = as_unit(value)
    return Expectation.from_weights(domain, (r, 1 - r))


# --- Kleisli maps: programs as atom -> expectation tables ---


class KleisliMap:
    """A map from atoms of one finite set to expectations over another."""

    __slots__ = ("domain", "codomain", "_rows")

    def __init__(self, domain: FinSet, codomain: FinSet, rows: Mapping[str, Expectation]):
        if set(rows.keys()) != set(domain.atoms):
            raise ValueError("rows must cover the domain exactly")
        for atom, h in rows.items():
            if h.domain != codomain:
                raise DomainMismatchError(
                    f"row at {atom!r} targets {h.domain.atoms}, expected {codomain.atoms}"
                )
        self.domain = domain
        self.codomain = codomain
        self._rows = {a: rows[a] for a in domain.atoms}

    def row(self, atom: str) -> Expectation:
        return self._rows[atom]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, KleisliMap)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and self._rows == other._rows
        )

    def __repr__(self) -> str:
        return f"KleisliMap({self.domain.atoms} -> {self.codomain.atoms})"


def kleisli_unit(domain: FinSet) -> KleisliMap:
    return KleisliMap(domain, domain, {a: exp_unit(a, domain) for a in domain})


def kleisli_compose(f: KleisliMap, g: KleisliMap) -> KleisliMap:
    """Sequential composition (f then g): exact weight-matrix product."""
    if f.codomain != g.domain:
        raise DomainMismatchError("middle domains of Kleisli maps differ")
    rows = {}
    for x in f.domain:
        acc = [Fraction(0)] * len(g.codomain)
        for y, wy in f.row(x).items():
            if wy == 0:
                continue
            for i, wz in enumerate(g.row(y).weights()):
                acc[i] += wy * wz
        rows[x] = Expectation.from_weights(g.codomain, acc)
    return KleisliMap(f.domain, g.codomain, rows)


# --- finitely additive set functions on the powerset ---


class MeasureTable:
    """A total [0,1]-valued table over subsets of a small finite set.

    Subsets are bitmasks (bit i = atom i); the table covers every subset.
    Finite additivity is a checked property, not a construction invariant.
    """

    __slots__ = ("domain", "table")

    def __init__(self, domain: FinSet, table: Mapping[int, object]):
        n = len(domain)
        if n > MAX_MEASURE_ATOMS:
            raise ValueError(f"domain too large for subset tables (|X| <= {MAX_MEASURE_ATOMS})")
        full = {}
        for mask in range(1 << n):
            if mask not in table:
                raise ValueError(f"missing table entry for mask {mask:#x}")
            full[mask] = as_unit(table[mask])
        if len(table) != 1 << n:
            raise ValueError("table has entries outside the subset range")
        self.domain = domain
        self.table = full

    def __getitem__(self, mask: int) -> Fraction:
        return self.table[mask]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MeasureTable)
            and self.domain == other.domain
            and self.table == other.table
        )

    def __repr__(self) -> str:
        return f"MeasureTable(|X|={len(self.domain)})"

    def to_json(self) -> dict:
        return {f"{mask:#x}": format_rational(v) for mask, v in self.table.items()}

    @classmethod
    def from_json(cls, domain: FinSet, obj: Mapping[str, str]) -> "MeasureTable":
        return cls(domain, {int(k, 16): parse_rational(v) for k, v in obj.items()})


@dataclass(frozen=True)
class AdditivityCheck:
    """Outcome of an additivity check, with a witness when it fails."""

    ok: bool
    kind: str | None = None  # "total-mass" | "disjoint-pair"
    pair: tuple[int, int] | None = None

    def describe(self, domain: FinSet) -> str:
        if self.ok:
            return "finitely additive"
        if self.kind == "total-mass":
            return "m(X) != 1"
        u, v = self.pair
        return (
            f"m(U u V) != m(U) + m(V) for disjoint U={set(domain.subset_atoms(u))} "
            f"V={set(domain.subset_atoms(v))}"
        )


def is_finitely_additive(m: MeasureTable) -> AdditivityCheck:
    """Exhaustive check over all disjoint subset pairs (incl. the empty set).

    m(empty) = 0 is the pair (empty, empty); m(X) = 1 is checked separately.
    """
    n = len(m.domain)
    full = (1 << n) - 1
    if m[full] != 1:
        return AdditivityCheck(False, "total-mass", None)
    # every disjoint pair (U, V): V ranges over subsets of the complement of U
    for u in range(1 << n):
        comp = full & ~u
        v = comp
        while True:
            if m[u | v] != m[u] + m[v]:
                return AdditivityCheck(False, "disjoint-pair", (u, v))
            if v == 0:
                break
            v = (v - 1) & comp
    return AdditivityCheck(True)


class NonAdditiveTableError(ValueError):
    def __init__(self, check: AdditivityCheck, domain: FinSet):
        self.check = check
        super().__init__(f"table rejected: {check.describe(domain)}")


def phi(h: Expectation) -> MeasureTable:
    """Expectation -> subset table: mass of U is the sum of its atom weights."""
    n = len(h.domain)
    if n > MAX_MEASURE_ATOMS:
        raise ValueError(f"domain too large for subset tables (|X| <= {MAX_MEASURE_ATOMS})")
    weights = h.weights()
    table = {}
    for mask in range(1 << n):
        table[mask] = sum(
            (weights[i] for i in range(n) if mask >> i & 1), start=Fraction(0)
        )
    return MeasureTable(h.domain, table)


def phi_inverse(m: MeasureTable) -> Expectation:
    """Subset table -> expectation, rejecting non-additive tables with a witness."""
    check = is_finitely_additive(m)
    if not check.ok:
        raise NonAdditiveTableError(check, m.domain)
    weights = {a: m[1 << i] for i, a in enumerate(m.domain.atoms)}
    return Expectation(m.domain, weights)


# --- principal ultrafilters ---


class PrincipalUltrafilter:
    """The ultrafilter of a point: all subsets containing it.

    Finite sets admit only these, so the type has no non-principal form.
    """

    __slots__ = ("domain", "point")

    def __init__(self, domain: FinSet, point: str):
        if point not in domain:
            raise ValueError(f"point {point!r} not in domain")
        self.domain = domain
        self.point = point

    def contains(self, atoms: Iterable[str]) -> bool:
        return self.point in set(atoms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PrincipalUltrafilter)
            and self.domain == other.domain
            and self.point == other.point
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.point))

    def __repr__(self) -> str:
        return f"PrincipalUltrafilter({self.point!r})"


def tau(f: PrincipalUltrafilter) -> Expectation:
    """Ultrafilter -> expectation: the Dirac state at the principal point."""
    return exp_unit(f.point, f.domain)


def tau_inf_formula(f: PrincipalUltrafilter, p: Predicate) -> Fraction:
    """Literal evaluation of the defining infimum.

    The value is inf{s : {x : p(x) <= s} belongs to the filter}; the sublevel
    set only changes at values of p, so the infimum is the least value s in
    the range of p whose sublevel set contains the principal point.
    """
    if f.domain != p.domain:
        raise DomainMismatchError("ultrafilter and predicate domains differ")
    for s in sorted(set(p.values())):
        sublevel = [x for x, v in p.items() if v <= s]
        if f.contains(sublevel):
            return s
    raise AssertionError("sublevel sets must exhaust the domain")  # p(point) <= max


# --- monad-law suite ---


def mutant_sigma_squared(phi: Dist) -> Expectation:
    """Adversarial conversion: weights squared and renormalized."""
    squares = {x: w * w for x, w in phi.items()}
    total = sum(squares.values(), start=Fraction(0))
    return Expectation(phi.domain, {x: w / total for x, w in squares.items()})


def mutant_compose_transposed(f: KleisliMap, g: KleisliMap) -> KleisliMap:
    """Adversarial composition: multiplies the transposed weight matrix of g.

    Rows are renormalized so the result still type-checks as a Kleisli map;
    the law suite must catch the broken associativity with a witness.
    """
    if g.domain != g.codomain or f.codomain != g.domain:
        raise DomainMismatchError("transposed product needs matching square factors")
    cod = g.codomain
    rows = {}
    for x in f.domain:
        acc = []
        for z in cod:
            acc.append(
                sum(
                    (f.row(x).weight(y) * g.row(z).weight(y) for y in g.domain),
                    start=Fraction(0),
                )
            )
        mass = sum(acc, start=Fraction(0))
        if mass == 0:
            raise ValueError("transposed product produced a zero row")
        rows[x] = Expectation.from_weights(cod, [a / mass for a in acc])
    return KleisliMap(f.domain, cod, rows)


def mutant_dist_mu_squared(psi: Dist) -> Dist:
    """Adversarial flattening: squares the flattened weights, renormalized."""
    flat = dist_mu(psi)
    squares = {x: w * w for x, w in flat.items()}
    total = sum(squares.values(), start=Fraction(0))
    return Dist({x: w / total for x, w in squares.items()}, flat.domain)


def random_finset(rng: random.Random, max_size: int = 6) -> FinSet:
    size = rng.randint(1, max_size)
    return FinSet([f"x{i}" for i in range(size)])


def random_dist(rng: random.Random, domain: FinSet) -> Dist:
    """Exact random distribution: integer weights normalized by their sum."""
    atoms = list(domain.atoms)
    support = rng.sample(atoms, rng.randint(1, len(atoms)))
    raw = {a: rng.randint(1, 9) for a in support}
    total = sum(raw.values())
    return Dist({a: Fraction(w, total) for a, w in raw.items()}, domain)


def random_expectation(rng: random.Random, domain: FinSet) -> Expectation:
    return sigma(random_dist(rng, domain))


def random_predicate(rng: random.Random, domain: FinSet) -> Predicate:
    from .effect.instances import random_unit_fraction

    return Predicate.from_values(
        domain, [random_unit_fraction(rng) for _ in domain.atoms]
    )


def random_kleisli(rng: random.Random, domain: FinSet, codomain: FinSet) -> KleisliMap:
    return KleisliMap(
        domain, codomain, {a: random_expectation(rng, codomain) for a in domain}
    )


def _compare(check, inputs: tuple[str, ...], lhs_fn, rhs_fn) -> None:
    """Evaluate both sides; record inequality or an exception as a failure."""
    check.cases += 1
    try:
        lhs = lhs_fn()
        rhs = rhs_fn()
    except Exception as exc:  # a raising law is a failing law, with the error as witness
        check.record(inputs, "both sides defined", f"{type(exc).__name__}: {exc}")
        return
    if lhs != rhs:
        check.record(inputs, repr(lhs), repr(rhs))


def check_monad_laws(
    seed: int = 0,
    cases: int = 200,
    max_atoms: int = 6,
    dist_mu_fn: Callable[[Dist], Dist] | None = None,
    sigma_fn: Callable[[Dist], Expectation] | None = None,
    compose_fn: Callable[[KleisliMap, KleisliMap], KleisliMap] | None = None,
) -> LawReport:
    """Exact monad and monad-map laws on seeded random finite instances.

    The three *_fn hooks default to the real operations; passing a mutated
    implementation must surface a counterexample witness in the report.
    The flattening square for the distribution->expectation map is phrased
    in Kleisli form (mixing a finite distribution of expectations), since
    second-order expectations have no finite canonical carrier of their own.
    """
    mu = dist_mu_fn or dist_mu
    sg = sigma_fn or sigma
    comp = compose_fn or kleisli_compose
    rng = random.Random(seed)
    report = LawReport("monad laws")
    d_left = report.new_check("dist-left-unit")
    d_right = report.new_check("dist-right-unit")
    d_assoc = report.new_check("dist-associativity")
    k_left = report.new_check("kleisli-left-unit")
    k_right = report.new_check("kleisli-right-unit")
    k_assoc = report.new_check("kleisli-associativity")
    s_unit = report.new_check("sigma-unit-square")
    s_mu = report.new_check("sigma-mu-square")
    t_unit = report.new_check("tau-unit-square")
    t_mu = report.new_check("tau-mu-square")
    t_inf = report.new_check("tau-inf-formula")

    for _ in range(cases):
        domain = random_finset(rng, max_atoms)
        phi_d = random_dist(rng, domain)

        # distribution monad laws
        _compare(
            d_left, (repr(phi_d),),
            lambda: mu(Dist({phi_d: Fraction(1)})),
            lambda: phi_d,
        )
        _compare(
            d_right, (repr(phi_d),),
            lambda: mu(dist_map(lambda x: dist_unit(x, domain), phi_d)),
            lambda: phi_d,
        )
        theta = Dist.from_pairs(
            [
                (
                    Dist.from_pairs(
                        [(random_dist(rng, domain), Fraction(1, 2)),
                         (random_dist(rng, domain), Fraction(1, 2))]
                    ),
                    Fraction(1, 2),
                ),
                (Dist({random_dist(rng, domain): Fraction(1)}), Fraction(1, 2)),
            ]
        )
        _compare(
            d_assoc, (repr(theta),),
            lambda: mu(mu(theta)),
            lambda: mu(dist_map(mu, theta)),
        )

        # Kleisli laws for expectations
        cod = random_finset(rng, max_atoms)
        f = random_kleisli(rng, domain, cod)
        _compare(k_left, (repr(f),), lambda: comp(kleisli_unit(domain), f), lambda: f)
        _compare(k_right, (repr(f),), lambda: comp(f, kleisli_unit(cod)), lambda: f)

        e1 = random_kleisli(rng, domain, domain)
        e2 = random_kleisli(rng, domain, domain)
        e3 = random_kleisli(rng, domain, domain)
        _compare(
            k_assoc, (repr(e1), repr(e2), repr(e3)),
            lambda: comp(comp(e1, e2), e3),
            lambda: comp(e1, comp(e2, e3)),
        )

        # distribution -> expectation monad map
        x = rng.choice(domain.atoms)
        _compare(
            s_unit, (x,),
            lambda: sg(dist_unit(x, domain)),
            lambda: exp_unit(x, domain),
        )
        psi = Dist.from_pairs(
            [
                (random_dist(rng, domain), Fraction(1, 3)),
                (random_dist(rng, domain), Fraction(2, 3)),
            ]
        )
        _compare(
            s_mu, (repr(psi),),
            lambda: sg(dist_mu(psi)),
            lambda: mix_states(dist_map(sg, psi)),
        )

        # principal ultrafilter -> expectation monad map
        uf = PrincipalUltrafilter(domain, x)
        _compare(t_unit, (x,), lambda: tau(uf), lambda: exp_unit(x, domain))
        # flattening a principal-of-principal ultrafilter lands on uf itself
        _compare(
            t_mu, (x,),
            lambda: tau(uf),
            lambda: mix_states(Dist({tau(uf): Fraction(1)})),
        )
        p = random_predicate(rng, domain)
        _compare(t_inf, (x, repr(p)), lambda: tau_inf_formula(uf, p), lambda: p[x])

    return report
