"""Acceptance suite: one test per criterion, printing a pass/fail line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.  Every
tolerance is pinned here; exact means exact rational equality.
"""
import json
import os
import random
import time
from collections import defaultdict
from fractions import Fraction as F

import numpy as np
import pytest

from exmon.cli import main as cli_main
from exmon.effect import (
    BrokenMinEA,
    BrokenSquareActionEM,
    ChainEA,
    FinSet,
    PowersetEA,
    catalog,
    check_effect_algebra,
    check_effect_module,
    two_element,
)
from exmon.monads import (
    Dist,
    Expectation,
    MeasureTable,
    barycenter,
    check_monad_laws,
    exp2_iso,
    exp2_iso_inverse,
    exp_unit,
    is_finitely_additive,
    mutant_compose_transposed,
    mutant_dist_mu_squared,
    mutant_sigma_squared,
    phi,
    phi_inverse,
    random_expectation,
    random_finset,
)
from exmon.quantum import (
    Density,
    Effect,
    effect_osum,
    density_from_state,
    identity_effect,
    layer_cake,
    max_abs,
    random_density_matrix,
    random_effect_matrix,
    state_of_density,
    tabulate_state,
    tensor_eval,
    zero_effect,
)
from exmon.semantics import StateSpace, denote, parse, parse_query, wp
from oracles import chain_congruence_classes, chain_formal_value, n_step_probability


def report(number: int, label: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] criterion {number}: {label}{suffix}")
    assert ok, f"criterion {number} failed: {label} {suffix}"


CHAIN_STEP = """
var s : 0..2;
if s = 0 then { s := {1: 1/2, 2: 1/2} }
else {
  if s = 1 then { s := {1: 1/3, 2: 2/3} }
  else { skip }
}
"""


def test_criterion_1_worked_example():
    t0 = time.perf_counter()
    parsed = parse(CHAIN_STEP)
    q = parse_query("s = 2", parsed.decls)
    one_a = wp(parsed, q, {"s": 0})
    one_b = wp(parsed, q, {"s": 1})
    two = parse(CHAIN_STEP + ";" + CHAIN_STEP.split(";", 1)[1])
    two_a = wp(two, q, {"s": 0})
    rows = {
        0: {1: F(1, 2), 2: F(1, 2)},
        1: {1: F(1, 3), 2: F(2, 3)},
        2: {2: F(1)},
    }
    oracle_two = n_step_probability(rows, 0, 2, 2)
    elapsed = time.perf_counter() - t0
    ok = (
        (one_a.lo, one_a.hi) == (F(1, 2), F(1, 2))
        and (one_b.lo, one_b.hi) == (F(2, 3), F(2, 3))
        and (two_a.lo, two_a.hi) == (F(5, 6), F(5, 6))
        and oracle_two == F(5, 6)
        and elapsed < 1.0
    )
    report(1, "transition example: 1/2, 2/3, two-step 5/6 vs path oracle", ok,
           f"{elapsed:.3f}s")


def test_criterion_2_monad_law_suite():
    t0 = time.perf_counter()
    clean = check_monad_laws(seed=2024, cases=1000, max_atoms=6)
    mutants_caught = []
    for name, kwargs in (
        ("sigma", {"sigma_fn": mutant_sigma_squared}),
        ("compose", {"compose_fn": mutant_compose_transposed}),
        ("flatten", {"dist_mu_fn": mutant_dist_mu_squared}),
    ):
        rep = check_monad_laws(seed=2024, cases=120, **kwargs)
        witnessed = any(c.failures and c.failures[0].inputs for c in rep.checks)
        mutants_caught.append((name, not rep.passed and witnessed))
    elapsed = time.perf_counter() - t0
    ok = clean.passed and all(c for _, c in mutants_caught) and elapsed < 30.0
    report(2, "monad/monad-map laws on 1000 instances; 3 mutants caught", ok,
           f"{elapsed:.1f}s, mutants={[n for n, c in mutants_caught if c]}")


def test_criterion_3_measure_bijection():
    rng = random.Random(99)
    round_trips = 0
    for _ in range(500):
        domain = random_finset(rng, 8)
        h = random_expectation(rng, domain)
        m = phi(h)
        if phi_inverse(m) == h and phi(phi_inverse(m)) == m:
            round_trips += 1
    rejected = 0
    for _ in range(100):
        size = rng.randint(2, 6)
        domain = FinSet([f"x{i}" for i in range(size)])
        h = random_expectation(rng, domain)
        table = dict(phi(h).table)
        # perturb one non-trivial subset so additivity must break
        mask = rng.randrange(1, (1 << size) - 1)
        delta = F(1, rng.randint(2, 9))
        table[mask] = table[mask] + delta if table[mask] + delta <= 1 else table[mask] - delta
        check = is_finitely_additive(MeasureTable(domain, table))
        if not check.ok and check.kind == "disjoint-pair":
            u, v = check.pair
            if u & v == 0:
                rejected += 1
    ok = round_trips == 500 and rejected == 100
    report(3, "weights<->subset-table bijection: 500 exact round trips, "
              "100 planted non-additive tables rejected with disjoint pair", ok,
           f"{round_trips}/500, {rejected}/100")


def test_criterion_4_two_point_iso_and_affineness():
    rng = random.Random(7)
    ab = FinSet(["a", "b"])
    iso_ok = 0
    for _ in range(100):
        r = F(rng.randint(0, 60), 60)
        h = exp2_iso_inverse(r, ab)
        if exp2_iso(h) == r and exp2_iso_inverse(exp2_iso(h), ab) == h:
            iso_ok += 1
    single = FinSet(["only"])
    unique = exp_unit("only", single) == Expectation(single, {"only": F(1)})
    try:
        Expectation(single, {"only": F(2, 3)})
        unique = False  # mass constraint must forbid anything but weight 1
    except ValueError:
        pass
    ok = iso_ok == 100 and unique
    report(4, "two-atom expectations are the unit interval; singleton space "
              "has a unique expectation", ok, f"{iso_ok}/100 round trips")


def test_criterion_5_barycenter_property():
    rng = random.Random(13)
    checked = 0
    for _ in range(200):
        support = [F(rng.randint(0, 12), 12) for _ in range(rng.randint(1, 4))]
        weights = [rng.randint(1, 9) for _ in support]
        total = sum(weights)
        d = Dist.from_pairs([(v, F(w, total)) for v, w in zip(support, weights)])
        intercept = F(rng.randint(0, 10), 10)   # q(0)
        endpoint = F(rng.randint(0, 10), 10)    # q(1)
        slope = endpoint - intercept
        q = lambda t: slope * t + intercept
        if q(barycenter(d)) == sum(w * q(v) for v, w in d.items()):
            checked += 1
    ok = checked == 200
    report(5, "barycenter commutes with affine maps, exact", ok, f"{checked}/200")


def test_criterion_6_totalization_roundtrip():
    from exmon.totalize import roundtrip_check

    instances = [two_element()] + [ChainEA(n) for n in range(2, 6)] + [
        PowersetEA(FinSet(list("ab"))),
        PowersetEA(FinSet(list("abc"))),
    ]
    all_pass = all(roundtrip_check(inst, seed=3, samples=200).passed for inst in instances)

    oracle_ok = True
    for n in range(1, 5):
        classes = chain_congruence_classes(n, max_summands=6)
        by_rep = defaultdict(set)
        for counts, rep_ in classes.items():
            by_rep[rep_].add(chain_formal_value(counts))
        if not all(len(vs) == 1 for vs in by_rep.values()):
            oracle_ok = False  # a congruence class mixes total counts
        by_value = defaultdict(set)
        for counts, rep_ in classes.items():
            if chain_formal_value(counts) <= 6:
                by_value[chain_formal_value(counts)].add(rep_)
        if not all(len(reps) == 1 for reps in by_value.values()):
            oracle_ok = False  # equal counts failed to merge within the bound
    ok = all_pass and oracle_ok
    report(6, "Pa(To(E)) isomorphism exhaustive on catalog; congruence oracle "
              "matches the natural-number normal form for chains", ok)


def test_criterion_7_geometric_loop(capsys):
    parsed = parse("var c : 0..1;\nwhile c = 1 do { c := {0: 1/2, 1: 1/2} }")
    space = StateSpace(parsed.decls)
    start = space.index((1,))
    exact = all(
        denote(parsed.program, space, max_iter=n).rows[start].residual == F(1, 2**n)
        for n in range(1, 21)
    )
    geom = os.path.join(os.path.dirname(__file__), "..", "programs", "geom.el")
    code = cli_main(
        ["run", geom, "--query", "1", "--init", "c=1", "--max-iter", "20", "--json"]
    )
    out = capsys.readouterr().out
    data = json.loads(out)
    byte_exact = (
        code == 0
        and data["lo"] == "1048575/1048576"
        and '"lo": "1048575/1048576"' in out
    )
    ok = exact and byte_exact
    with capsys.disabled():
        report(7, "geometric loop: residual 2^-n exactly for n<=20; JSON lower "
                  "bound byte-exact", ok)


def test_criterion_8_operator_checks():
    t0 = time.perf_counter()
    tol = 1e-8
    failures = []
    for dim in (2, 3, 4):
        rng = np.random.default_rng(500 + dim)
        for i in range(100):
            m = Density(random_density_matrix(rng, dim))
            s = state_of_density(m)
            if abs(s(identity_effect(dim)) - 1) > tol or abs(s(zero_effect(dim))) > tol:
                failures.append((dim, i, "mass"))
            a = Effect(random_effect_matrix(rng, dim))
            b = Effect((np.eye(dim) - a.matrix) * rng.uniform(0.0, 1.0))
            total = effect_osum(a, b)
            if total is None or abs(s(total) - s(a) - s(b)) > tol:
                failures.append((dim, i, "additivity"))
            r = rng.uniform(0.0, 1.0)
            if abs(s(Effect(a.matrix * r)) - r * s(a)) > tol:
                failures.append((dim, i, "homogeneity"))
        for i in range(100):
            a = Effect(random_effect_matrix(rng, dim))
            if max_abs(tensor_eval(layer_cake(a)).matrix - a.matrix) > tol:
                failures.append((dim, i, "layer-cake"))
        for i in range(50):
            m = Density(random_density_matrix(rng, dim))
            rebuilt = density_from_state(tabulate_state(state_of_density(m), dim), dim)
            if max_abs(rebuilt.matrix - m.matrix) > 1e-6:
                failures.append((dim, i, "tomography"))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60.0
    report(8, "dims 2-4: state additivity/homogeneity <= 1e-8, layer-cake "
              "rebuild <= 1e-8, tomography <= 1e-6", ok,
           f"{elapsed:.1f}s, failures={failures[:3]}")


def test_criterion_9_effect_algebra_suite():
    suite_ok = True
    for inst in catalog():
        if inst.is_module:
            rep = check_effect_module(inst, seed=77, cases=400)
        else:
            rep = check_effect_algebra(inst, seed=77, cases=400)
        if not rep.passed:
            suite_ok = False
    broken_min = check_effect_algebra(BrokenMinEA(3), seed=77, cases=200)
    broken_action = check_effect_module(BrokenSquareActionEM(), seed=77, cases=400)
    caught = (
        not broken_min.passed
        and any(c.failures and c.failures[0].inputs for c in broken_min.checks)
        and "scalar-sum-distributes" in broken_action.failing_axioms()
        and any(c.failures and c.failures[0].inputs for c in broken_action.checks)
    )
    ok = suite_ok and caught
    report(9, "catalog instances pass the law suite; both planted broken "
              "instances fail with witnesses", ok)
