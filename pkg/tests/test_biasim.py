import random

import pytest

from bilkit.biasim import (
    Asim,
    _fixpoint,
    canonical_relation,
    check_biasim,
    fixpoint_rounds,
    greatest_biasim,
    separating_formula,
)
from bilkit.formula import parse, rank, random_formula
from bilkit.kripke import KripkeModel, PointedModel, isomorphism, make_model, random_model
from bilkit.semantics import satisfies, theory_included
from bilkit.unravel import node_id, unravel


def test_check_identity_relation(point_p):
    pm = PointedModel(point_p, "u")
    a = Asim(point_p, point_p, {("1to2", "u", "u"), ("2to1", "u", "u")})
    assert check_biasim(a, pm, pm).ok


def test_check_unravelling_b_relation(chain2):
    un = unravel(chain2, "a", 3)
    pairs = set()
    for chain in un.nodes:
        pairs.add(("1to2", node_id(chain), chain[-1]))
        pairs.add(("2to1", chain[-1], node_id(chain)))
    b = Asim(un.model, chain2, pairs)
    report = check_biasim(b, PointedModel(un.model, "a"), PointedModel(chain2, "a"))
    assert report.ok


def test_check_reports_missing_witness(chain2):
    un = unravel(chain2, "a", 3)
    pairs = set()
    for chain in un.nodes:
        pairs.add(("1to2", node_id(chain), chain[-1]))
        pairs.add(("2to1", chain[-1], node_id(chain)))
    pairs.discard(("2to1", "b", "a/b"))
    b = Asim(un.model, chain2, pairs)
    report = check_biasim(b, PointedModel(un.model, "a"), PointedModel(chain2, "a"))
    assert not report.ok
    assert "s-back" in report.kinds()


def test_check_elem_condition(chain2):
    a = Asim(chain2, chain2, {("1to2", "b", "b"), ("2to1", "b", "b")})
    report = check_biasim(a, PointedModel(chain2, "a"), PointedModel(chain2, "a"))
    assert "elem" in report.kinds()


def test_greatest_identity_contains_both_orientations(chain2):
    pm = PointedModel(chain2, "a")
    g = greatest_biasim(pm, pm)
    assert g is not None
    for w in chain2.worlds:
        assert ("1to2", w, w) in g
        assert ("2to1", w, w) in g
    assert check_biasim(g, pm, pm).ok


def test_greatest_isomorphic_models(chain2):
    other = make_model(["x", "y"], [("x", "y")], {"p": ["y"]})
    g = greatest_biasim(PointedModel(chain2, "a"), PointedModel(other, "x"))
    assert g is not None
    iso = isomorphism(chain2, other)
    for w, x in iso.items():
        assert ("1to2", w, x) in g
        assert ("2to1", x, w) in g


def test_greatest_absent_between_chain_and_point(chain2, point_p):
    assert greatest_biasim(PointedModel(chain2, "b"), PointedModel(point_p, "u")) is None
    assert greatest_biasim(PointedModel(point_p, "u"), PointedModel(chain2, "b")) is None


def test_greatest_requires_shared_signature(chain2):
    other = make_model(["u"], [], {"q": ["u"]})
    with pytest.raises(ValueError):
        greatest_biasim(PointedModel(chain2, "a"), PointedModel(other, "u"))


def test_separating_formula_spec_examples(chain2, point_p):
    frm, to = PointedModel(chain2, "b"), PointedModel(point_p, "u")
    assert separating_formula(frm, to) == parse("(false -> false) -< p")
    assert separating_formula(to, frm) == parse("((false -> false) -< p) -> false")
    assert separating_formula(frm, frm) is None


def test_separating_formula_verifies_on_random_pairs():
    rng = random.Random(21)
    absent = 0
    for i in range(120):
        m1 = random_model(rng.randint(1, 4), ["p", "q"], rng.random(), seed=600 + i)
        m2 = random_model(rng.randint(1, 4), ["p", "q"], rng.random(), seed=700 + i)
        frm = PointedModel(m1, rng.choice(m1.worlds))
        to = PointedModel(m2, rng.choice(m2.worlds))
        f = separating_formula(frm, to)
        if f is None:
            assert greatest_biasim(frm, to) is not None
            continue
        absent += 1
        assert satisfies(m1, frm.point, f)
        assert not satisfies(m2, to.point, f)
        assert rank(f) <= fixpoint_rounds(frm, to)
    assert absent >= 30


def test_separating_formula_minimize_still_separates(chain2, point_p):
    frm, to = PointedModel(point_p, "u"), PointedModel(chain2, "b")
    f = separating_formula(frm, to, minimize=True)
    assert satisfies(point_p, "u", f) and not satisfies(chain2, "b", f)


def test_preservation_soundness_sample():
    rng = random.Random(22)
    for i in range(30):
        m = random_model(rng.randint(1, 5), ["p", "q"], rng.random(), seed=800 + i)
        w = rng.choice(m.worlds)
        v = rng.choice(sorted(m.up_set(w)))
        frm, to = PointedModel(m, w), PointedModel(m, v)
        assert greatest_biasim(frm, to) is not None
        for _ in range(100):
            f = random_formula(m.signature, 4, rng)
            if satisfies(m, w, f):
                assert satisfies(m, v, f)


def test_completeness_at_saturating_rank():
    rng = random.Random(23)
    for i in range(60):
        m1 = random_model(rng.randint(1, 3), ["p"], rng.random(), seed=900 + i)
        m2 = random_model(rng.randint(1, 3), ["p"], rng.random(), seed=950 + i)
        frm = PointedModel(m1, rng.choice(m1.worlds))
        to = PointedModel(m2, rng.choice(m2.worlds))
        r = 2 * len(m1.worlds) * len(m2.worlds)
        present = greatest_biasim(frm, to) is not None
        included, _ = theory_included(frm, to, max_rank=r)
        assert present == included


def test_union_of_biasims_is_biasim(chain2):
    frm = to = PointedModel(chain2, "a")
    ident = {("1to2", w, w) for w in chain2.worlds} | {("2to1", w, w) for w in chain2.worlds}
    g = greatest_biasim(frm, to)
    union = Asim(chain2, chain2, g.pairs | ident)
    assert check_biasim(union, frm, to).ok


def test_fixpoint_scan_order_independence():
    # chaotic immediate-deletion refinement in shuffled order reaches the
    # same survivors as the round-based scan
    def chaotic(frm, to, rng):
        m1, m2 = frm.model, to.model
        letters = sorted(m1.signature)
        alive = set()
        for side in ("1to2", "2to1"):
            mi, mj = (m1, m2) if side == "1to2" else (m2, m1)
            for v in mi.worlds:
                for s in mj.worlds:
                    if all(v not in mi.valuation[p] or s in mj.valuation[p] for p in letters):
                        alive.add((side, v, s))
        changed = True
        while changed:
            changed = False
            order = sorted(alive)
            rng.shuffle(order)
            for pair in order:
                if pair not in alive:
                    continue
                side, v, s = pair
                mi, mj = (m1, m2) if side == "1to2" else (m2, m1)
                rev = "2to1" if side == "1to2" else "1to2"
                bad = False
                for t in mj.successors(s):
                    if not any(
                        (rev, t, u) in alive and (side, u, t) in alive
                        for u in mi.successors(v)
                    ):
                        bad = True
                        break
                if not bad:
                    for u in mi.predecessors(v):
                        if not any(
                            (rev, t, u) in alive and (side, u, t) in alive
                            for t in mj.predecessors(s)
                        ):
                            bad = True
                            break
                if bad:
                    alive.discard(pair)
                    changed = True
        return alive

    rng = random.Random(24)
    for i in range(40):
        m1 = random_model(rng.randint(1, 4), ["p", "q"], rng.random(), seed=1000 + i)
        m2 = random_model(rng.randint(1, 4), ["p", "q"], rng.random(), seed=1100 + i)
        frm = PointedModel(m1, m1.worlds[0])
        to = PointedModel(m2, m2.worlds[0])
        reference, _, _ = _fixpoint(frm, to)
        assert chaotic(frm, to, rng) == reference


def test_canonical_relation_examples(chain2, point_p):
    both = canonical_relation(chain2, chain2, ["p"], 3)
    for w in chain2.worlds:
        assert ("1to2", w, w) in both
        assert ("2to1", w, w) in both
    alive, _, _ = _fixpoint(PointedModel(chain2, "a"), PointedModel(point_p, "u"))
    over = canonical_relation(chain2, point_p, ["p"], 0)
    assert frozenset(alive) <= over.pairs
    exact = canonical_relation(chain2, point_p, ["p"], 4)
    assert exact.pairs == frozenset(alive)


def test_canonical_equals_fixpoint_on_random_pairs():
    rng = random.Random(25)
    for i in range(40):
        m1 = random_model(rng.randint(1, 4), ["p", "q"][: rng.randint(1, 2)],
                          rng.random(), seed=1200 + i)
        m2 = random_model(rng.randint(1, 4), list(m1.signature), rng.random(), seed=1300 + i)
        alive, _, _ = _fixpoint(PointedModel(m1, m1.worlds[0]), PointedModel(m2, m2.worlds[0]))
        crel = canonical_relation(m1, m2, m1.signature, 2 * len(m1.worlds) * len(m2.worlds))
        assert crel.pairs == frozenset(alive)


def test_asim_json_round_trip(chain2):
    pm = PointedModel(chain2, "a")
    g = greatest_biasim(pm, pm)
    text = g.to_json()
    back = Asim.from_json(text, chain2, chain2)
    assert back.pairs == g.pairs


def test_asim_rejects_ill_typed_pairs(chain2, point_p):
    with pytest.raises(ValueError):
        Asim(chain2, point_p, {("1to2", "zz", "u")})
    with pytest.raises(ValueError):
        Asim(chain2, point_p, {("sideways", "a", "u")})
