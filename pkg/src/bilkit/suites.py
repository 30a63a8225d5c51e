"""Seeded verification suites behind ``verify`` and the acceptance tests.

Each suite returns a list of (case_id, ok, detail) triples.  Cases are
generated from the given seed only, so a run is reproducible from its
command line.
"""

from __future__ import annotations

import random

from .biasim import _fixpoint, canonical_relation, greatest_biasim, separating_formula
from .formula import EnumerationBudgetError, random_formula
from .kripke import KripkeModel, PointedModel, random_model, validate
from .semantics import (
    realize,
    satisfies,
    theory_included,
    type_by_formula,
    type_by_subsets,
    type_by_witness,
    TypeQuery,
)
from .fol import eval_fo, translate
from .unravel import b_theory_check, bracket, unravel, verify_schema, zigzag_factor, zigzag_paths


def _random_pair(rng, max_worlds):
    n1, n2 = rng.randint(1, max_worlds), rng.randint(1, max_worlds)
    letters = ["p", "q"][: rng.randint(1, 2)]
    m1 = random_model(n1, letters, rng.random(), seed=rng.randrange(1 << 30))
    m2 = random_model(n2, letters, rng.random(), seed=rng.randrange(1 << 30))
    a = PointedModel(m1, rng.choice(m1.worlds))
    b = PointedModel(m2, rng.choice(m2.worlds))
    return a, b


def _relabel(m, prefix):
    ren = {w: prefix + w for w in m.worlds}
    return (
        KripkeModel(
            [ren[w] for w in m.worlds],
            {(ren[u], ren[v]) for u, v in m.order},
            {p: {ren[w] for w in m.valuation[p]} for p in m.signature},
            m.signature,
        ),
        ren,
    )


def _related_pair(rng, max_worlds):
    """A pair guaranteed to admit a bi-asimulation."""
    n = rng.randint(1, max_worlds)
    letters = ["p", "q"][: rng.randint(1, 2)]
    m = random_model(n, letters, rng.random(), seed=rng.randrange(1 << 30))
    w = rng.choice(m.worlds)
    kind = rng.choice(["identity", "monotone", "isomorph"])
    if kind == "identity":
        return PointedModel(m, w), PointedModel(m, w)
    if kind == "monotone":
        v = rng.choice(sorted(m.up_set(w)))
        return PointedModel(m, w), PointedModel(m, v)
    m2, ren = _relabel(m, "z")
    return PointedModel(m, w), PointedModel(m2, ren[w])


def hennessy_milner_suite(seed=0, pairs=200, canon_pairs=100):
    """Greatest bi-asimulation versus bounded theory inclusion, separator
    soundness on distinguishable pairs, and the canonical relation against
    the fixpoint survivors at saturating rank."""
    rng = random.Random(seed)
    cases = []
    for i in range(pairs):
        a, b = _random_pair(rng, 5)
        r = min(6, 2 * len(a.model.worlds) * len(b.model.worlds))
        gb = greatest_biasim(a, b)
        included, _ = theory_included(a, b, max_rank=r)
        ok = (gb is not None) == included
        detail = "present=%s included=%s rank=%d" % (gb is not None, included, r)
        if ok and gb is None:
            f = separating_formula(a, b)
            ok = (
                f is not None
                and satisfies(a.model, a.point, f)
                and not satisfies(b.model, b.point, f)
            )
            detail += " separator=%s" % f
        cases.append(("hm-pair-%03d" % i, ok, detail))
    rng2 = random.Random(seed + 1)
    for i in range(canon_pairs):
        a, b = _random_pair(rng2, 4)
        alive, _, _ = _fixpoint(a, b)
        r = 2 * len(a.model.worlds) * len(b.model.worlds)
        crel = canonical_relation(a.model, b.model, a.model.signature, r)
        ok = crel.pairs == frozenset(alive)
        cases.append(
            (
                "hm-canon-%03d" % i,
                ok,
                "rank=%d fixpoint=%d canonical=%d" % (r, len(alive), len(crel.pairs)),
            )
        )
    return cases


def preservation_suite(seed=0, pairs=50, formulas=500):
    """No random formula is true at the source and false at the target of a
    pair related by a bi-asimulation."""
    rng = random.Random(seed)
    cases = []
    for i in range(pairs):
        a, b = _related_pair(rng, 5)
        gb = greatest_biasim(a, b)
        if gb is None:
            cases.append(("pres-%03d" % i, False, "expected a bi-asimulation"))
            continue
        broken = None
        for _ in range(formulas):
            f = random_formula(a.model.signature, 4, rng)
            if satisfies(a.model, a.point, f) and not satisfies(b.model, b.point, f):
                broken = f
                break
        cases.append(
            ("pres-%03d" % i, broken is None, "violated by %s" % broken if broken else "ok")
        )
    return cases


def monotonicity_suite(seed=0, triples=1000):
    rng = random.Random(seed)
    cases = []
    for i in range(triples):
        n = rng.randint(2, 5)
        letters = ["p", "q"][: rng.randint(1, 2)]
        m = random_model(n, letters, rng.random(), seed=rng.randrange(1 << 30))
        w = rng.choice(m.worlds)
        v = rng.choice(sorted(m.up_set(w)))
        f = random_formula(m.signature, 4, rng)
        ok = (not satisfies(m, w, f)) or satisfies(m, v, f)
        cases.append(("mono-%04d" % i, ok, "%s below %s : %s" % (w, v, f)))
    return cases


def unravel_structure_suite(seed=0, models=50, maxlen=4, budget=6000):
    """Partial-order validation, zigzag factorization round trips, and the
    guarded node-versus-base truth comparison.

    The truth comparison runs at the largest rank (at most maxlen - 1)
    whose enumeration fits the class budget, dropping the rank on budget
    errors as the enumerator prescribes.
    """
    rng = random.Random(seed)
    cases = []
    for i in range(models):
        n = rng.randint(1, 4)
        letters = ["p", "q"][: rng.randint(1, 2)]
        m = random_model(n, letters, rng.random(), seed=rng.randrange(1 << 30))
        w = m.worlds[0]
        un = unravel(m, w, maxlen)
        rep = validate(un.model)
        cases.append(
            ("unravel-%03d-order" % i, rep.ok, "%d nodes" % len(un.nodes) if rep.ok else str(rep))
        )
        broken = None
        related = 0
        for alpha in un.nodes:
            for beta in un.nodes:
                if un.model.leq(un.id_of(alpha), un.id_of(beta)):
                    related += 1
                    gamma, down, up = zigzag_factor(un, alpha, beta)
                    if gamma + down != alpha or gamma + up != beta:
                        broken = (alpha, beta)
        cases.append(
            (
                "unravel-%03d-factor" % i,
                broken is None,
                "%d related pairs" % related if broken is None else "broken at %r" % (broken,),
            )
        )
        rank = maxlen - 1
        report = None
        while rank >= 0:
            try:
                report = b_theory_check(m, w, maxlen, rank, budget=budget)
                break
            except EnumerationBudgetError:
                rank -= 1
        ok = report is not None and report.ok
        detail = "rank=%d guarded=%d" % (rank, len(report.checked_nodes))
        if not ok:
            detail += " mismatches=%d end_mismatches=%d (guard is not truncation-proof)" % (
                len(report.mismatches),
                len(report.end_mismatches),
            )
        cases.append(("unravel-%03d-btheory" % i, ok, detail))
    return cases


def schemas_suite(seed=0, models=30, path_len=4, formula_pairs=20):
    rng = random.Random(seed)
    cases = []
    for i in range(models):
        n = rng.randint(1, 4)
        letters = ["p", "q"][: rng.randint(1, 2)]
        m = random_model(n, letters, rng.random(), seed=rng.randrange(1 << 30))
        bm = bracket(m)
        pairs = [
            (random_formula(m.signature, 2, rng), random_formula(m.signature, 2, rng))
            for _ in range(formula_pairs)
        ]
        bad = None
        cells = 0
        for path in zigzag_paths(m, path_len):
            for k in range(1, len(path) + 1):
                for alpha, beta in pairs:
                    cells += 1
                    if not verify_schema(bm, path, k, alpha, beta):
                        bad = (path, k, alpha, beta)
        cases.append(
            (
                "schema-%03d" % i,
                bad is None,
                "%d cells" % cells if bad is None else "failed at %r" % (bad,),
            )
        )
    return cases


def types_suite(seed=0, per_direction=200):
    rng = random.Random(seed)
    cases = []
    for i in range(2 * per_direction):
        direction = "successor" if i % 2 == 0 else "predecessor"
        n = rng.randint(1, 4)
        letters = ["p", "q"][: rng.randint(1, 2)]
        m = random_model(n, letters, rng.random(), seed=rng.randrange(1 << 30))
        w = rng.choice(m.worlds)
        gamma = [random_formula(m.signature, 2, rng) for _ in range(rng.randint(0, 3))]
        delta = [random_formula(m.signature, 2, rng) for _ in range(rng.randint(0, 3))]
        q = TypeQuery(gamma, delta, direction)
        pm = PointedModel(m, w)
        a = type_by_subsets(pm, q)
        b = type_by_witness(pm, q)
        c = type_by_formula(pm, q)
        ok = a == b == c
        if ok and a:
            ok = realize(m, w, q) is not None
        cases.append(
            ("type-%04d" % i, ok, "%s subsets=%s witness=%s formula=%s" % (direction, a, b, c))
        )
    return cases


def fol_equiv_suite(seed=0, samples=300):
    rng = random.Random(seed)
    cases = []
    for i in range(samples):
        n = rng.randint(1, 5)
        letters = ["p", "q"][: rng.randint(1, 2)]
        m = random_model(n, letters, rng.random(), seed=rng.randrange(1 << 30))
        f = random_formula(m.signature, 4, rng)
        g = translate(f, "X")
        bad = None
        for w in m.worlds:
            if eval_fo(m, g, {"X": w}) != satisfies(m, w, f):
                bad = w
                break
        cases.append(
            ("fol-%03d" % i, bad is None,
             "checked %d worlds" % n if bad is None else "world %s" % bad)
        )
    return cases


SUITES = {
    "preservation": preservation_suite,
    "monotonicity": monotonicity_suite,
    "hennessy-milner": hennessy_milner_suite,
    "unravel-structure": unravel_structure_suite,
    "schemas": schemas_suite,
    "types": types_suite,
    "fol-equiv": fol_equiv_suite,
}


def run_suite(name, seed=0):
    """Cases for one suite, or for all of them, sorted by case id."""
    if name == "all":
        cases = []
        for key in sorted(SUITES):
            cases.extend(run_suite(key, seed))
        return cases
    try:
        fn = SUITES[name]
    except KeyError:
        raise ValueError(
            "unknown suite %r (choose from %s, all)" % (name, ", ".join(sorted(SUITES)))
        )
    return sorted(fn(seed=seed), key=lambda c: c[0])
