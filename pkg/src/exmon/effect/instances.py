"""Catalog of effect algebra and effect module instances.

Each instance packages a carrier representation together with zero, one,
partial sum, orthosupplement, and (for modules) the [0,1]-scalar action.
Small carriers expose full enumeration; the rest provide a seeded sampler
so that law checks are reproducible.

The two deliberately broken instances at the bottom exist to exercise the
law checkers: they must fail with a concrete counterexample witness.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product as iter_product

from ..rational import as_unit
from .predicates import FinSet, Predicate, osum as pred_osum, ortho as pred_ortho, smul as pred_smul

MAX_ENUMERABLE = 4096  # carriers up to this size are exhaustively checkable


def random_unit_fraction(rng: random.Random, max_den: int = 12) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(0, den), den)


class EffectAlgebra:
    """Base interface: a partial commutative monoid with orthosupplement."""

    name: str = "effect-algebra"
    is_module = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def osum(self, x, y):
        """Partial sum: the element x (+) y, or None when undefined."""
        raise NotImplementedError

    def ortho(self, x):
        raise NotImplementedError

    def elements(self):
        """Full carrier as a list, or None when not enumerable."""
        return None

    def sample(self, rng: random.Random):
        elems = self.elements()
        if elems is None:
            raise NotImplementedError(f"{self.name} has no sampler")
        return rng.choice(elems)

    def describe(self, x) -> str:
        return repr(x)

    def __repr__(self) -> str:
        return f"<{self.name}>"


class EffectModule(EffectAlgebra):
    """Effect algebra with a compatible [0,1]-scalar action."""

    is_module = True

    def smul(self, r: Fraction, x):
        raise NotImplementedError


class ChainEA(EffectAlgebra):
    """The chain {0, 1, ..., n} with x (+) y defined iff x + y <= n."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("chain size must be >= 1")
        self.n = n
        self.name = f"Chain({n})"

    def zero(self):
        return 0

    def one(self):
        return self.n

    def osum(self, x, y):
        s = x + y
        return s if s <= self.n else None

    def ortho(self, x):
        return self.n - x

    def elements(self):
        return list(range(self.n + 1))

    def describe(self, x) -> str:
        return str(x)


def two_element() -> ChainEA:
    """The Boolean truth values {0, 1}."""
    inst = ChainEA(1)
    inst.name = "TwoElement"
    return inst


class UnitIntervalEM(EffectModule):
    """Rational unit interval [0,1] with truncated-at-1 partial sum."""

    name = "UnitInterval"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def osum(self, x, y):
        s = x + y
        return s if s <= 1 else None

    def ortho(self, x):
        return 1 - x

    def sample(self, rng: random.Random):
        return random_unit_fraction(rng)

    def smul(self, r, x):
        return as_unit(r) * x

    def describe(self, x) -> str:
        return str(x)


class PowersetEA(EffectAlgebra):
    """Subsets of a finite set; sum = disjoint union, ortho = complement."""

    def __init__(self, domain: FinSet):
        self.domain = domain
        self.name = f"PowersetEA(|X|={len(domain)})"

    def zero(self):
        return frozenset()

    def one(self):
        return frozenset(self.domain.atoms)

    def osum(self, x, y):
        return x | y if not (x & y) else None

    def ortho(self, x):
        return frozenset(self.domain.atoms) - x

    def elements(self):
        atoms = self.domain.atoms
        return [
            frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)
            for mask in range(1 << len(atoms))
        ]

    def describe(self, x) -> str:
        return "{" + ",".join(sorted(x)) + "}"


class PredicateEM(EffectModule):
    """Fuzzy predicates [0,1]^X with pointwise structure."""

    def __init__(self, domain: FinSet):
        self.domain = domain
        self.name = f"PredicateEM(|X|={len(domain)})"

    def zero(self):
        return Predicate.constant(self.domain, 0)

    def one(self):
        return Predicate.constant(self.domain, 1)

    def osum(self, x, y):
        return pred_osum(x, y)

    def ortho(self, x):
        return pred_ortho(x)

    def smul(self, r, x):
        return pred_smul(r, x)

    def sample(self, rng: random.Random):
        return Predicate.from_values(
            self.domain, [random_unit_fraction(rng) for _ in self.domain.atoms]
        )

    def describe(self, x) -> str:
        return "(" + ", ".join(f"{a}={v}" for a, v in x.items()) + ")"


class ProductEA(EffectAlgebra):
    """Componentwise product of effect algebras; elements are tuples."""

    def __init__(self, factors: list[EffectAlgebra]):
        if not factors:
            raise ValueError("product needs at least one factor")
        self.factors = list(factors)
        self.name = "Product(" + ", ".join(f.name for f in factors) + ")"

    def zero(self):
        return tuple(f.zero() for f in self.factors)

    def one(self):
        return tuple(f.one() for f in self.factors)

    def osum(self, x, y):
        out = []
        for f, a, b in zip(self.factors, x, y):
            s = f.osum(a, b)
            if s is None:
                return None
            out.append(s)
        return tuple(out)

    def ortho(self, x):
        return tuple(f.ortho(a) for f, a in zip(self.factors, x))

    def elements(self):
        per_factor = [f.elements() for f in self.factors]
        if any(e is None for e in per_factor):
            return None
        size = 1
        for e in per_factor:
            size *= len(e)
        if size > MAX_ENUMERABLE:
            return None
        return [tuple(combo) for combo in iter_product(*per_factor)]

    def sample(self, rng: random.Random):
        return tuple(f.sample(rng) for f in self.factors)

    def describe(self, x) -> str:
        return "(" + ", ".join(f.describe(a) for f, a in zip(self.factors, x)) + ")"


def catalog(pred_atoms: int = 3, powerset_atoms: int = 3) -> list[EffectAlgebra]:
    """The standard instance family used by the check suite."""
    fs_pred = FinSet([f"x{i}" for i in range(pred_atoms)])
    fs_pow = FinSet([f"x{i}" for i in range(powerset_atoms)])
    return [
        two_element(),
        ChainEA(3),
        UnitIntervalEM(),
        PowersetEA(fs_pow),
        PredicateEM(fs_pred),
        ProductEA([two_element(), ChainEA(2)]),
    ]


class BrokenMinEA(EffectAlgebra):
    """Adversarial instance: sum redefined as total min on {0..n}.

    Commutative and associative, but the orthosupplement law collapses:
    min(x, n-x) is almost never n.
    """

    def __init__(self, n: int = 3):
        self.n = n
        self.name = f"BrokenMin({n})"

    def zero(self):
        return 0

    def one(self):
        return self.n

    def osum(self, x, y):
        return min(x, y)

    def ortho(self, x):
        return self.n - x

    def elements(self):
        return list(range(self.n + 1))

    def describe(self, x) -> str:
        return str(x)


class BrokenSquareActionEM(UnitIntervalEM):
    """Adversarial module: scalar action r.x := r^2 * x on [0,1]."""

    name = "BrokenSquareAction"

    def smul(self, r, x):
        return as_unit(r) ** 2 * x
