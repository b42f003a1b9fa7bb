"""Seeded law checking for effect algebras, effect modules, and their maps.

Checks are exact: every comparison is structural equality of canonical
rationals (or whatever the instance's carrier uses).  Small enumerable
carriers are checked exhaustively; everything else draws reproducible
samples from a seeded stream.  Axiom failures are reported with a witness,
never raised.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import product as iter_product
from typing import Callable

from ..report import AxiomCheck, LawReport
from .instances import EffectAlgebra, EffectModule, random_unit_fraction

EXHAUSTIVE_LIMIT = 16  # carriers up to this size get exhaustive triples


def _triples(inst: EffectAlgebra, rng: random.Random, cases: int):
    elems = inst.elements()
    if elems is not None and len(elems) <= EXHAUSTIVE_LIMIT:
        yield from iter_product(elems, elems, elems)
        return
    specials = [inst.zero(), inst.one()]
    for _ in range(cases):
        def draw():
            if rng.random() < 0.1:
                return rng.choice(specials)
            return inst.sample(rng)

        yield draw(), draw(), draw()


def _eq(a, b) -> bool:
    return a == b


def check_effect_algebra(
    inst: EffectAlgebra, seed: int = 0, cases: int = 500
) -> LawReport:
    """Check the partial-commutative-monoid and orthosupplement axioms."""
    rng = random.Random(seed)
    report = LawReport(inst.name)
    zero_neutral = report.new_check("zero-neutral")
    commutativity = report.new_check("commutativity")
    associativity = report.new_check("associativity")
    ortho_complement = report.new_check("orthosupplement-complement")
    ortho_unique = report.new_check("orthosupplement-unique")
    zero_one = report.new_check("zero-one-law")
    one = inst.one()
    zero = inst.zero()

    for x, y, z in _triples(inst, rng, cases):
        dx, dy, dz = inst.describe(x), inst.describe(y), inst.describe(z)

        zero_neutral.cases += 1
        s = inst.osum(x, zero)
        if s is None or not _eq(s, x):
            zero_neutral.record((dx,), dx, "undefined" if s is None else inst.describe(s))

        commutativity.cases += 1
        xy, yx = inst.osum(x, y), inst.osum(y, x)
        if (xy is None) != (yx is None) or (xy is not None and not _eq(xy, yx)):
            commutativity.record(
                (dx, dy),
                "undefined" if xy is None else inst.describe(xy),
                "undefined" if yx is None else inst.describe(yx),
            )

        associativity.cases += 1
        left = inst.osum(x, y)
        left = inst.osum(left, z) if left is not None else None
        right = inst.osum(y, z)
        right = inst.osum(x, right) if right is not None else None
        if (left is None) != (right is None) or (
            left is not None and not _eq(left, right)
        ):
            associativity.record(
                (dx, dy, dz),
                "undefined" if left is None else inst.describe(left),
                "undefined" if right is None else inst.describe(right),
            )

        ortho_complement.cases += 1
        s = inst.osum(x, inst.ortho(x))
        if s is None or not _eq(s, one):
            ortho_complement.record(
                (dx,), inst.describe(one), "undefined" if s is None else inst.describe(s)
            )

        ortho_unique.cases += 1
        s = inst.osum(x, y)
        if s is not None and _eq(s, one) and not _eq(y, inst.ortho(x)):
            ortho_unique.record((dx, dy), inst.describe(inst.ortho(x)), dy)

        zero_one.cases += 1
        s = inst.osum(x, one)
        if s is not None and not _eq(x, zero):
            zero_one.record((dx,), inst.describe(zero), dx)

    return report


def _scalar_stream(rng: random.Random, cases: int):
    specials = [Fraction(0), Fraction(1), Fraction(1, 2)]
    for _ in range(cases):
        if rng.random() < 0.15:
            yield rng.choice(specials), random_unit_fraction(rng)
        else:
            yield random_unit_fraction(rng), random_unit_fraction(rng)


def check_effect_module(
    inst: EffectModule, seed: int = 0, cases: int = 500
) -> LawReport:
    """Algebra axioms plus the four scalar-action axioms."""
    report = check_effect_algebra(inst, seed=seed, cases=cases)
    rng = random.Random(seed + 1)
    unit_action = report.new_check("one-action")
    scalar_assoc = report.new_check("scalar-associativity")
    scalar_plus = report.new_check("scalar-sum-distributes")
    action_osum = report.new_check("action-distributes-over-osum")

    scalars = _scalar_stream(rng, cases)
    for x, y, _ in _triples(inst, random.Random(seed + 2), cases):
        try:
            r, s = next(scalars)
        except StopIteration:
            break
        dx, dy = inst.describe(x), inst.describe(y)

        unit_action.cases += 1
        got = inst.smul(Fraction(1), x)
        if not _eq(got, x):
            unit_action.record((dx,), dx, inst.describe(got))

        scalar_assoc.cases += 1
        lhs = inst.smul(r * s, x)
        rhs = inst.smul(r, inst.smul(s, x))
        if not _eq(lhs, rhs):
            scalar_assoc.record(
                (str(r), str(s), dx), inst.describe(lhs), inst.describe(rhs)
            )

        if r + s <= 1:
            scalar_plus.cases += 1
            lhs = inst.smul(r + s, x)
            rhs = inst.osum(inst.smul(r, x), inst.smul(s, x))
            if rhs is None or not _eq(lhs, rhs):
                scalar_plus.record(
                    (str(r), str(s), dx),
                    inst.describe(lhs),
                    "undefined" if rhs is None else inst.describe(rhs),
                )

        xy = inst.osum(x, y)
        if xy is not None:
            action_osum.cases += 1
            lhs = inst.smul(r, xy)
            rhs = inst.osum(inst.smul(r, x), inst.smul(r, y))
            if rhs is None or not _eq(lhs, rhs):
                action_osum.record(
                    (str(r), dx, dy),
                    inst.describe(lhs),
                    "undefined" if rhs is None else inst.describe(rhs),
                )

    return report


def check_hom(
    f: Callable,
    src: EffectAlgebra,
    dst: EffectAlgebra,
    seed: int = 0,
    cases: int = 500,
    name: str = "hom",
) -> LawReport:
    """Check that f preserves 1, defined sums, and (for modules) scalars."""
    rng = random.Random(seed)
    report = LawReport(f"{name}: {src.name} -> {dst.name}")
    preserves_one = report.new_check("preserves-one")
    preserves_osum = report.new_check("preserves-osum")
    check_scalars = src.is_module and dst.is_module
    preserves_scalar = report.new_check("preserves-scalar") if check_scalars else None

    preserves_one.cases += 1
    got = f(src.one())
    if not _eq(got, dst.one()):
        preserves_one.record(
            (src.describe(src.one()),), dst.describe(dst.one()), dst.describe(got)
        )

    scalars = _scalar_stream(random.Random(seed + 1), cases)
    for x, y, _ in _triples(src, rng, cases):
        dx, dy = src.describe(x), src.describe(y)
        s = src.osum(x, y)
        if s is not None:
            preserves_osum.cases += 1
            lhs = f(s)
            rhs = dst.osum(f(x), f(y))
            if rhs is None or not _eq(lhs, rhs):
                preserves_osum.record(
                    (dx, dy),
                    dst.describe(lhs),
                    "undefined" if rhs is None else dst.describe(rhs),
                )
        if preserves_scalar is not None:
            try:
                r, _unused = next(scalars)
            except StopIteration:
                break
            preserves_scalar.cases += 1
            lhs = f(src.smul(r, x))
            rhs = dst.smul(r, f(x))
            if not _eq(lhs, rhs):
                preserves_scalar.record(
                    (str(r), dx), dst.describe(rhs), dst.describe(lhs)
                )

    return report
