import random

import pytest

from bilkit.formula import enumerate_formulas, rank
from bilkit.kripke import (
    KripkeModel,
    ModelFormatError,
    PointedModel,
    ValidationReport,
    chain_union,
    isomorphism,
    load_model,
    make_model,
    model_to_dict,
    model_to_json,
    normalize,
    random_model,
    reduct,
    submodel,
    validate,
)
from bilkit.semantics import satisfies


def test_normalize_closure():
    m = normalize({"worlds": ["a", "b"], "order": [["a", "b"]],
                    "valuation": {"p": ["b"]}, "signature": ["p"]})
    assert isinstance(m, KripkeModel)
    assert m.order == frozenset({("a", "a"), ("a", "b"), ("b", "b")})


def test_normalize_antisymmetry_fatal():
    rep = normalize({"worlds": ["a", "b"], "order": [["a", "b"], ["b", "a"]],
                     "valuation": {}, "signature": []})
    assert isinstance(rep, ValidationReport)
    assert rep.kinds() == {"antisymmetry"}
    assert any({"a", "b"} <= set(v.data) for v in rep)


def test_normalize_monotonicity_modes():
    raw = {"worlds": ["a", "b"], "order": [["a", "b"]],
           "valuation": {"p": ["a"]}, "signature": ["p"]}
    rep = normalize(raw, mode="strict")
    assert isinstance(rep, ValidationReport)
    assert rep.kinds() == {"monotonicity"}
    assert ("a", "b", "p") in {v.data for v in rep}
    closed = normalize(raw, mode="close")
    assert isinstance(closed, KripkeModel)
    assert closed.valuation["p"] == frozenset({"a", "b"})


def test_normalize_idempotent(chain2):
    again = normalize(chain2)
    assert again == chain2
    assert normalize(normalize(chain2)) == chain2


def test_normalize_rejects_unknown_keys():
    with pytest.raises(ModelFormatError):
        normalize({"worlds": ["a"], "frobnicate": 1})
    with pytest.raises(ModelFormatError):
        normalize({"worlds": []})
    with pytest.raises(ModelFormatError):
        normalize([1, 2])


def test_normalize_dangling_references():
    rep = normalize({"worlds": ["a"], "order": [["a", "zz"]],
                     "valuation": {"p": ["nope"]}, "signature": ["p"]})
    assert isinstance(rep, ValidationReport)
    assert rep.kinds() == {"dangling-reference"}


def test_reduct(chain2):
    assert reduct(chain2, chain2.signature) == chain2
    empty = reduct(chain2, [])
    assert list(empty.signature) == []
    assert empty.worlds == chain2.worlds
    with pytest.raises(ValueError):
        reduct(chain2, ["missing"])


def test_reduct_preserves_sub_signature_theory():
    m = make_model(["a", "b", "c"], [("a", "b"), ("b", "c")],
                   {"p": ["b", "c"], "q": ["c"]})
    r = reduct(m, ["p"])
    context = [PointedModel(m, w) for w in m.worlds]
    reps = enumerate_formulas(["p"], 3, context)
    for f in reps:
        for w in m.worlds:
            assert satisfies(m, w, f) == satisfies(r, w, f)


def test_submodel(chain2):
    single = submodel(chain2, {"b"})
    assert single.worlds == ("b",)
    assert single.order == frozenset({("b", "b")})
    assert single.valuation["p"] == frozenset({"b"})
    assert submodel(chain2, chain2.worlds) == chain2
    with pytest.raises(ValueError):
        submodel(chain2, set())
    with pytest.raises(ValueError):
        submodel(chain2, {"zz"})


def test_submodel_random_restrictions_are_posets():
    rng = random.Random(11)
    for i in range(100):
        m = random_model(rng.randint(2, 6), ["p", "q"], rng.random(), seed=i)
        ws = [w for w in m.worlds if rng.random() < 0.6] or [m.worlds[0]]
        sub = submodel(m, ws)
        assert validate(sub).ok


def test_submodel_upward_closed_keeps_rank0_truth():
    rng = random.Random(12)
    from bilkit.formula import random_formula

    for i in range(50):
        m = random_model(rng.randint(2, 5), ["p", "q"], rng.random(), seed=100 + i)
        w = rng.choice(m.worlds)
        up = set(m.up_set(w))
        sub = submodel(m, up)
        for _ in range(20):
            f = random_formula(m.signature, 0, rng)
            assert rank(f) == 0
            for v in up:
                assert satisfies(m, v, f) == satisfies(sub, v, f)


def test_chain_union(chain2):
    assert chain_union([chain2, chain2]) == chain2
    point = submodel(chain2, {"a"})
    assert chain_union([point, chain2]) == chain2
    with pytest.raises(ValueError):
        chain_union([chain2, point])  # not increasing
    with pytest.raises(ValueError):
        chain_union([])


def test_chain_union_random_nested_chains():
    rng = random.Random(13)
    for i in range(50):
        m = random_model(rng.randint(3, 6), ["p"], rng.random(), seed=200 + i)
        worlds = list(m.worlds)
        rng.shuffle(worlds)
        chain = []
        # grow by downward-closed world sets so restriction stays faithful
        for size in range(1, len(worlds) + 1):
            ws = set()
            for w in worlds[:size]:
                ws |= m.down_set(w)
            chain.append(submodel(m, ws))
        u = chain_union(chain)
        assert validate(u).ok
        assert u == chain[-1]


def test_isomorphism_identity_is_least(chain2):
    assert isomorphism(chain2, chain2) == {"a": "a", "b": "b"}


def test_isomorphism_relabelled_chain(chain2):
    other = make_model(["x", "y"], [("x", "y")], {"p": ["y"]})
    assert isomorphism(chain2, other) == {"a": "x", "b": "y"}


def test_isomorphism_absent(chain2, fork):
    assert isomorphism(chain2, fork) is None
    other = make_model(["x", "y"], [("x", "y")], {"p": ["x", "y"]})
    assert isomorphism(chain2, other) is None


def test_isomorphism_preserves_bounded_theories():
    rng = random.Random(14)
    for i in range(10):
        m = random_model(rng.randint(2, 4), ["p", "q"], rng.random(), seed=300 + i)
        ren = {w: "r" + w for w in m.worlds}
        n = KripkeModel(
            [ren[w] for w in m.worlds],
            {(ren[u], ren[v]) for u, v in m.order},
            {p: {ren[w] for w in m.valuation[p]} for p in m.signature},
            m.signature,
        )
        g = isomorphism(m, n)
        assert g is not None
        context = [PointedModel(m, w) for w in m.worlds]
        context += [PointedModel(n, w) for w in n.worlds]
        for f in enumerate_formulas(m.signature, 4, context, budget=20000):
            for w in m.worlds:
                assert satisfies(m, w, f) == satisfies(n, g[w], f)


def test_random_model_contract():
    a = random_model(5, ["p", "q"], 0.4, seed=9)
    b = random_model(5, ["p", "q"], 0.4, seed=9)
    assert a == b
    single = random_model(1, ["p"], 0.9, seed=1)
    assert single.worlds == ("w0",)
    assert single.order == frozenset({("w0", "w0")})
    with pytest.raises(ValueError):
        random_model(0, ["p"], 0.5, seed=0)


def test_random_models_always_validate():
    rng = random.Random(15)
    for i in range(1000):
        m = random_model(rng.randint(1, 6), ["p", "q"], rng.random(), seed=i)
        assert validate(m).ok


def test_model_json_round_trip(chain2):
    text = model_to_json(chain2, point="a")
    m, point = load_model(text)
    assert m == chain2
    assert point == "a"
    d = model_to_dict(chain2)
    assert normalize(d) == chain2


def test_load_model_errors():
    with pytest.raises(ModelFormatError):
        load_model("{not json")
    with pytest.raises(ModelFormatError):
        load_model('{"worlds": ["a"], "point": "zz"}')
