"""Fuzzy predicates on finite atom sets, with exact rational values.

A predicate assigns a probability in [0,1] to every atom of a finite set.
Pointwise partial sum, orthosupplement, and scalar multiple make the set of
predicates the workhorse effect module of the package; the sup metric and
the simple-function normal form live here as well.  No floating point
anywhere: all values are Fractions and equality is structural.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from ..rational import as_unit, format_rational, parse_rational


class DomainMismatchError(ValueError):
    """Two predicates (or similar) were combined across different domains."""


class FinSet:
    """An ordered finite set of distinct string labels.

    The construction order is the canonical iteration order; it also fixes
    bitmask semantics for subsets (bit i = atom i).
    """

    __slots__ = ("atoms", "_index")

    def __init__(self, atoms: Iterable[str]):
        atoms = tuple(atoms)
        index = {}
        for i, a in enumerate(atoms):
            if not isinstance(a, str) or not a:
                raise ValueError(f"atom labels must be nonempty strings, got {a!r}")
            if a in index:
                raise ValueError(f"duplicate atom label {a!r}")
            index[a] = i
        self.atoms = atoms
        self._index = index

    def index(self, atom: str) -> int:
        try:
            return self._index[atom]
        except KeyError:
            raise KeyError(f"atom {atom!r} not in domain {self.atoms}") from None

    def __contains__(self, atom) -> bool:
        return atom in self._index

    def __iter__(self) -> Iterator[str]:
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __eq__(self, other) -> bool:
        return isinstance(other, FinSet) and self.atoms == other.atoms

    def __hash__(self) -> int:
        return hash(self.atoms)

    def __repr__(self) -> str:
        return f"FinSet({list(self.atoms)!r})"

    def subset_atoms(self, mask: int) -> tuple[str, ...]:
        """Atoms selected by a bitmask (bit i = atom i)."""
        return tuple(a for i, a in enumerate(self.atoms) if mask >> i & 1)

    def mask_of(self, atoms: Iterable[str]) -> int:
        mask = 0
        for a in atoms:
            mask |= 1 << self.index(a)
        return mask


def _require_same_domain(p: "Predicate", q: "Predicate") -> None:
    if p.domain != q.domain:
        raise DomainMismatchError(
            f"predicate domains differ: {p.domain.atoms} vs {q.domain.atoms}"
        )


class Predicate:
    """A total map domain -> [0,1] with exact rational values."""

    __slots__ = ("domain", "_values")

    def __init__(self, domain: FinSet, values: Mapping[str, object]):
        if set(values.keys()) != set(domain.atoms):
            missing = set(domain.atoms) - set(values.keys())
            extra = set(values.keys()) - set(domain.atoms)
            raise ValueError(
                f"predicate values must cover the domain exactly "
                f"(missing={sorted(missing)}, extra={sorted(extra)})"
            )
        self.domain = domain
        self._values = tuple(as_unit(values[a]) for a in domain.atoms)

    @classmethod
    def from_values(cls, domain: FinSet, values: Iterable[object]) -> "Predicate":
        vals = tuple(values)
        if len(vals) != len(domain):
            raise ValueError("value sequence length does not match domain size")
        return cls(domain, dict(zip(domain.atoms, vals)))

    @classmethod
    def constant(cls, domain: FinSet, value) -> "Predicate":
        r = as_unit(value)
        return cls.from_values(domain, [r] * len(domain))

    @classmethod
    def characteristic(cls, domain: FinSet, atoms: Iterable[str]) -> "Predicate":
        chosen = set(atoms)
        for a in chosen:
            domain.index(a)
        return cls.from_values(
            domain, [Fraction(1) if a in chosen else Fraction(0) for a in domain.atoms]
        )

    def __getitem__(self, atom: str) -> Fraction:
        return self._values[self.domain.index(atom)]

    def items(self) -> Iterator[tuple[str, Fraction]]:
        return iter(zip(self.domain.atoms, self._values))

    def values(self) -> tuple[Fraction, ...]:
        return self._values

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Predicate)
            and self.domain == other.domain
            and self._values == other._values
        )

    def __hash__(self) -> int:
        return hash((self.domain, self._values))

    def __repr__(self) -> str:
        body = ", ".join(f"{a}: {v}" for a, v in self.items())
        return f"Predicate({{{body}}})"

    def to_json(self) -> dict:
        return {a: format_rational(v) for a, v in self.items()}

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> "Predicate":
        domain = FinSet(obj.keys())
        return cls(domain, {a: parse_rational(s) for a, s in obj.items()})


def osum(p: Predicate, q: Predicate) -> Predicate | None:
    """Partial pointwise sum: defined iff p(x)+q(x) <= 1 for all atoms.

    An undefined sum is a normal None, distinct from the DomainMismatchError
    raised when the two predicates do not share a domain.
    """
    _require_same_domain(p, q)
    sums = [a + b for a, b in zip(p.values(), q.values())]
    if any(s > 1 for s in sums):
        return None
    return Predicate.from_values(p.domain, sums)


def ortho(p: Predicate) -> Predicate:
    """Orthosupplement: x -> 1 - p(x)."""
    return Predicate.from_values(p.domain, [1 - v for v in p.values()])


def smul(r, p: Predicate) -> Predicate:
    """Scalar multiple: x -> r * p(x), with r in [0,1]."""
    r = as_unit(r)
    return Predicate.from_values(p.domain, [r * v for v in p.values()])


def sup_metric(p: Predicate, q: Predicate) -> Fraction:
    """Exact sup distance max_x |p(x) - q(x)|."""
    _require_same_domain(p, q)
    return max(abs(a - b) for a, b in zip(p.values(), q.values()))


@dataclass(frozen=True)
class SimpleNormalForm:
    """A predicate as a disjoint sum of scaled characteristic functions.

    Blocks partition the domain; coefficients are pairwise distinct and
    listed in first-occurrence order of the domain.
    """

    domain: FinSet
    blocks: tuple[tuple[Fraction, frozenset[str]], ...]

    def to_predicate(self) -> Predicate:
        """Reassemble via smul/osum of characteristic predicates."""
        acc = Predicate.constant(self.domain, 0)
        for coeff, atoms in self.blocks:
            term = smul(coeff, Predicate.characteristic(self.domain, atoms))
            nxt = osum(acc, term)
            assert nxt is not None  # blocks are disjoint, so sums stay <= 1
            acc = nxt
        return acc


def normal_form(p: Predicate) -> SimpleNormalForm:
    """Group atoms by value: p = osum_i smul(r_i, characteristic(X_i))."""
    groups: dict[Fraction, list[str]] = {}
    order: list[Fraction] = []
    for a, v in p.items():
        if v not in groups:
            groups[v] = []
            order.append(v)
        groups[v].append(a)
    blocks = tuple((v, frozenset(groups[v])) for v in order)
    return SimpleNormalForm(p.domain, blocks)


def decimal_truncate(p: Predicate, n: int) -> Predicate:
    """Truncate every value to its first n decimals (toward zero).

    The result is pointwise <= p and within 10^-n of it in the sup metric.
    """
    if n < 1:
        raise ValueError("decimal_truncate requires n >= 1")
    scale = 10**n
    truncated = [
        Fraction((v.numerator * scale) // v.denominator, scale) for v in p.values()
    ]
    return Predicate.from_values(p.domain, truncated)
