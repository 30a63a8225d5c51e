"""Satisfaction, rank-bounded theories, and the type machinery.

Implication quantifies over all order-successors of the evaluation world
(itself included), co-implication asserts an order-predecessor satisfying
the left argument and refuting the right one.
"""

from __future__ import annotations

from itertools import combinations

from .formula import (
    Atom,
    Bottom,
    Coimpl,
    Impl,
    as_signature,
    big_and,
    big_or,
    enumerate_formulas,
)
from .kripke import PointedModel


class UnknownLetterError(ValueError):
    pass


class CharacterizationMismatch(RuntimeError):
    """The equivalent type characterizations disagreed; an internal bug."""


def sat_worlds(m, f):
    """Set of worlds of m satisfying f, cached per model and formula."""
    cache = m._sat_cache
    hit = cache.get(f)
    if hit is not None:
        return hit
    kind = f.kind
    if kind == "bottom":
        result = frozenset()
    elif kind == "atom":
        try:
            result = m.valuation[f.name]
        except KeyError:
            raise UnknownLetterError("letter %r not in model signature" % f.name)
    elif kind == "and":
        result = sat_worlds(m, f.left) & sat_worlds(m, f.right)
    elif kind == "or":
        result = sat_worlds(m, f.left) | sat_worlds(m, f.right)
    elif kind == "impl":
        bad = sat_worlds(m, f.left) - sat_worlds(m, f.right)
        result = frozenset(w for w in m.worlds if not (m.up_set(w) & bad))
    else:
        good = sat_worlds(m, f.left) - sat_worlds(m, f.right)
        result = frozenset(w for w in m.worlds if m.down_set(w) & good)
    cache[f] = result
    return result


def satisfies(m, w, f):
    if w not in m._up:
        raise ValueError("unknown world: %r" % (w,))
    return w in sat_worlds(m, f)


class Theory:
    """Rank-bounded theory: representatives split by truth at the point."""

    __slots__ = ("positive", "negative", "rank_bound", "signature")

    def __init__(self, positive, negative, rank_bound, signature):
        self.positive = tuple(positive)
        self.negative = tuple(negative)
        self.rank_bound = rank_bound
        self.signature = signature

    def __repr__(self):
        return "Theory(+%d/-%d formulas, rank<=%d)" % (
            len(self.positive),
            len(self.negative),
            self.rank_bound,
        )


def theory(pm, sig, max_rank, context=(), budget=4096):
    sig = as_signature(sig)
    if not sig <= pm.model.signature:
        raise ValueError("signature is not interpreted by the model")
    reps = enumerate_formulas(sig, max_rank, list(context) + [pm], budget=budget)
    positive = []
    negative = []
    for f in reps:
        if satisfies(pm.model, pm.point, f):
            positive.append(f)
        else:
            negative.append(f)
    return Theory(positive, negative, max_rank, sig)


def _all_points(*models):
    seen = []
    points = []
    for m in models:
        if any(m is s for s in seen):
            continue
        seen.append(m)
        for w in m.worlds:
            points.append(PointedModel(m, w))
    return points


def theory_included(a, b, sig=None, max_rank=4, budget=4096):
    """Positive-theory inclusion at bounded rank.

    Returns (True, None) or (False, witness) with the witness true at a
    and false at b.  The enumeration context is every world of both models,
    so the check is exact for the bounded language.
    """
    if sig is None:
        if a.model.signature != b.model.signature:
            raise ValueError("models disagree on the signature; pass sig explicitly")
        sig = a.model.signature
    sig = as_signature(sig)
    context = _all_points(a.model, b.model)
    reps = enumerate_formulas(sig, max_rank, context, budget=budget)
    for f in reps:
        if satisfies(a.model, a.point, f) and not satisfies(b.model, b.point, f):
            return False, f
    return True, None


class TypeQuery:
    """Finite candidate type (gamma true, delta false) with a direction."""

    __slots__ = ("gamma", "delta", "direction")

    def __init__(self, gamma, delta, direction):
        if direction not in ("successor", "predecessor"):
            raise ValueError("direction must be 'successor' or 'predecessor'")
        self.gamma = tuple(gamma)
        self.delta = tuple(delta)
        self.direction = direction

    def __repr__(self):
        return "TypeQuery(|gamma|=%d, |delta|=%d, %s)" % (
            len(self.gamma),
            len(self.delta),
            self.direction,
        )


def _cone(m, w, direction):
    return m.successors(w) if direction == "successor" else m.predecessors(w)


def _witnesses(m, cone, gamma, delta):
    out = []
    for v in cone:
        if all(satisfies(m, v, g) for g in gamma) and not any(
            satisfies(m, v, d) for d in delta
        ):
            out.append(v)
    return out


def type_by_subsets(pm, q):
    """Every finite part of (gamma, delta) is witnessed in the cone."""
    m = pm.model
    cone = _cone(m, pm.point, q.direction)
    for gk in range(len(q.gamma) + 1):
        for dk in range(len(q.delta) + 1):
            for gsub in combinations(q.gamma, gk):
                for dsub in combinations(q.delta, dk):
                    if not _witnesses(m, cone, gsub, dsub):
                        return False
    return True


def type_by_witness(pm, q):
    """A single cone world satisfies all of gamma and refutes all of delta."""
    m = pm.model
    return bool(_witnesses(m, _cone(m, pm.point, q.direction), q.gamma, q.delta))


def type_by_formula(pm, q):
    """The conjunction/disjunction test for the candidate type."""
    probe_impl = Impl(big_and(q.gamma), big_or(q.delta))
    if q.direction == "successor":
        return not satisfies(pm.model, pm.point, probe_impl)
    return satisfies(pm.model, pm.point, Coimpl(big_and(q.gamma), big_or(q.delta)))


def is_type(pm, q):
    """True iff (gamma, delta) is a type of pm in the requested direction.

    Evaluates the three equivalent finite characterizations and demands
    they agree; disagreement raises CharacterizationMismatch.
    """
    a = type_by_subsets(pm, q)
    b = type_by_witness(pm, q)
    c = type_by_formula(pm, q)
    if a != b or b != c:
        raise CharacterizationMismatch(
            "type characterizations disagree (subsets=%r witness=%r formula=%r) "
            "for %r at %r" % (a, b, c, q, pm.point)
        )
    return a


def realize(m, w, q):
    """Least cone world witnessing the finite type, or None."""
    hits = _witnesses(m, _cone(m, w, q.direction), q.gamma, q.delta)
    return hits[0] if hits else None
