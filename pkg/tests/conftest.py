import pytest

from bilkit.kripke import make_model


@pytest.fixture
def chain2():
    return make_model(["a", "b"], [("a", "b")], {"p": ["b"]})


@pytest.fixture
def point_p():
    return make_model(["u"], [], {"p": ["u"]})


@pytest.fixture
def fork():
    return make_model(["r", "s", "t"], [("r", "s"), ("r", "t")], {"p": ["s"], "q": ["t"]})


@pytest.fixture
def all_small_models():
    """Every model on at most two fixed worlds over {p}, all monotone valuations."""
    models = []
    for desc in [
        (["a"], [], [[]]),
        (["a"], [], [["a"]]),
        (["a", "b"], [], None),
        (["a", "b"], [("a", "b")], None),
        (["a", "b"], [("b", "a")], None),
    ]:
        worlds, order, vals = desc
        if vals is None:
            vals = []
            for cell in ([], ["a"], ["b"], ["a", "b"]):
                vals.append(list(cell))
        for cell in vals:
            try:
                models.append(make_model(worlds, order, {"p": cell}))
            except Exception:
                pass  # non-monotone combinations are skipped
    return models
