"""Finite Kripke models over partial orders with monotone valuations.

Input descriptions list generating order pairs; normalization always takes
the reflexive-transitive closure.  Antisymmetry failures are fatal.  World
ids are strings and every deterministic choice is lexicographic in them.
"""

from __future__ import annotations

import json
import random

from .formula import Signature, as_signature

MODEL_KEYS = {"signature", "worlds", "order", "valuation", "point"}


class Violation:
    __slots__ = ("kind", "message", "data")

    def __init__(self, kind, message, data=()):
        self.kind = kind
        self.message = message
        self.data = tuple(data)

    def __repr__(self):
        return "Violation(%r, %r)" % (self.kind, self.message)


class ValidationReport:
    """Collected violations; empty means the model is valid."""

    def __init__(self, violations=()):
        self.violations = list(violations)

    @property
    def ok(self):
        return not self.violations

    def add(self, kind, message, data=()):
        self.violations.append(Violation(kind, message, data))

    def kinds(self):
        return {v.kind for v in self.violations}

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)

    def __repr__(self):
        if self.ok:
            return "ValidationReport(ok)"
        return "ValidationReport(%s)" % "; ".join(v.message for v in self.violations)


class ModelFormatError(ValueError):
    """Malformed model description or failed validation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class KripkeModel:
    """Immutable model: sorted world tuple, closed order, monotone valuation."""

    __slots__ = ("worlds", "order", "valuation", "signature", "_up", "_down", "_sat_cache")

    def __init__(self, worlds, order, valuation, signature):
        self.worlds = tuple(sorted(worlds))
        self.order = frozenset(order)
        self.signature = as_signature(signature)
        self.valuation = {p: frozenset(valuation.get(p, ())) for p in self.signature}
        up = {w: set() for w in self.worlds}
        down = {w: set() for w in self.worlds}
        for u, v in self.order:
            up[u].add(v)
            down[v].add(u)
        self._up = {w: frozenset(s) for w, s in up.items()}
        self._down = {w: frozenset(s) for w, s in down.items()}
        self._sat_cache = {}

    def successors(self, w):
        return tuple(sorted(self._up[w]))

    def predecessors(self, w):
        return tuple(sorted(self._down[w]))

    def up_set(self, w):
        return self._up[w]

    def down_set(self, w):
        return self._down[w]

    def leq(self, u, v):
        return (u, v) in self.order

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (
            self.worlds == other.worlds
            and self.order == other.order
            and self.signature == other.signature
            and self.valuation == other.valuation
        )

    def __hash__(self):
        return hash(
            (self.worlds, self.order, self.signature,
             tuple(sorted((p, v) for p, v in self.valuation.items())))
        )

    def __repr__(self):
        return "KripkeModel(worlds=%r, letters=%r)" % (
            list(self.worlds),
            list(self.signature),
        )


class PointedModel:
    __slots__ = ("model", "point")

    def __init__(self, model, point):
        if point not in model._up:
            raise ValueError("unknown world: %r" % (point,))
        self.model = model
        self.point = point

    def __eq__(self, other):
        if not isinstance(other, PointedModel):
            return NotImplemented
        return self.model == other.model and self.point == other.point

    def __repr__(self):
        return "PointedModel(%r, point=%r)" % (self.model, self.point)


def _closure(worlds, pairs):
    up = {w: {w} for w in worlds}
    for u, v in pairs:
        up[u].add(v)
    changed = True
    while changed:
        changed = False
        for w in worlds:
            extra = set()
            for v in up[w]:
                extra |= up[v]
            if not extra <= up[w]:
                up[w] |= extra
                changed = True
    return {(u, v) for u in worlds for v in up[u]}


def normalize(raw, mode="strict"):
    """Build a model from a raw description.

    Returns a KripkeModel, or a ValidationReport when the closure breaks
    antisymmetry, references dangle, or (in strict mode) the valuation is
    not monotone.  In close mode valuations are closed upward instead.
    """
    if mode not in ("strict", "close"):
        raise ValueError("mode must be 'strict' or 'close'")
    if isinstance(raw, KripkeModel):
        raw = model_to_dict(raw)
    if not isinstance(raw, dict):
        raise ModelFormatError("model description must be a mapping")
    unknown = set(raw) - MODEL_KEYS
    if unknown:
        raise ModelFormatError("unknown keys in model description: %s" % sorted(unknown))
    for key in ("worlds",):
        if key not in raw:
            raise ModelFormatError("missing key: %r" % key)

    worlds = raw["worlds"]
    if not isinstance(worlds, (list, tuple)) or not worlds:
        raise ModelFormatError("worlds must be a non-empty list")
    if any(not isinstance(w, str) for w in worlds):
        raise ModelFormatError("world ids must be strings")
    if len(set(worlds)) != len(worlds):
        raise ModelFormatError("duplicate world ids")
    worlds = tuple(sorted(worlds))

    try:
        signature = as_signature(raw.get("signature", ()))
    except ValueError as exc:
        raise ModelFormatError(str(exc))

    report = ValidationReport()
    pairs = []
    for pair in raw.get("order", ()):
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise ModelFormatError("order entries must be [from, to] pairs")
        u, v = pair
        if u not in worlds or v not in worlds:
            report.add("dangling-reference", "order pair %r uses unknown world" % (pair,), (u, v))
            continue
        pairs.append((u, v))

    valuation = {}
    raw_val = raw.get("valuation", {})
    if not isinstance(raw_val, dict):
        raise ModelFormatError("valuation must be a mapping")
    for p in raw_val:
        if p not in signature:
            report.add("dangling-reference", "valuation letter %r not in signature" % (p,), (p,))
    for p in signature:
        cell = set()
        for w in raw_val.get(p, ()):
            if w not in worlds:
                report.add(
                    "dangling-reference", "valuation of %r uses unknown world %r" % (p, w), (p, w)
                )
            else:
                cell.add(w)
        valuation[p] = cell

    if not report.ok:
        return report

    order = _closure(worlds, pairs)
    for u in worlds:
        for v in worlds:
            if u != v and (u, v) in order and (v, u) in order:
                report.add("antisymmetry", "cycle through %r and %r" % (u, v), (u, v))
    if not report.ok:
        return report

    for p in signature:
        cell = valuation[p]
        if mode == "close":
            closed = set(cell)
            for u, v in order:
                if u in cell:
                    closed.add(v)
            valuation[p] = closed
        else:
            for u, v in order:
                if u in cell and v not in cell:
                    report.add(
                        "monotonicity",
                        "letter %r holds at %r but not above it at %r" % (p, u, v),
                        (u, v, p),
                    )
    if not report.ok:
        return report

    return KripkeModel(worlds, order, valuation, signature)


def validate(m):
    """Check an already-built model against every structural invariant."""
    report = ValidationReport()
    worlds = set(m.worlds)
    for u, v in m.order:
        if u not in worlds or v not in worlds:
            report.add("dangling-reference", "order pair (%r, %r) dangles" % (u, v), (u, v))
    for w in m.worlds:
        if (w, w) not in m.order:
            report.add("reflexivity", "missing (%r, %r)" % (w, w), (w,))
    for u, v in m.order:
        for x, y in m.order:
            if v == x and (u, y) not in m.order:
                report.add("transitivity", "missing (%r, %r)" % (u, y), (u, v, y))
    for u, v in m.order:
        if u != v and (v, u) in m.order:
            report.add("antisymmetry", "cycle through %r and %r" % (u, v), (u, v))
    for p in m.signature:
        cell = m.valuation[p]
        for w in cell:
            if w not in worlds:
                report.add("dangling-reference", "valuation of %r dangles at %r" % (p, w), (p, w))
        for u, v in m.order:
            if u in cell and v not in cell:
                report.add(
                    "monotonicity",
                    "letter %r holds at %r but not above it at %r" % (p, u, v),
                    (u, v, p),
                )
    return report


def make_model(worlds, order=(), valuation=None, signature=None, mode="strict"):
    """Convenience constructor; raises ModelFormatError on any violation."""
    if signature is None:
        signature = sorted(valuation) if valuation else []
    raw = {
        "worlds": list(worlds),
        "order": [list(p) for p in order],
        "valuation": {p: sorted(ws) for p, ws in (valuation or {}).items()},
        "signature": list(as_signature(signature)),
    }
    result = normalize(raw, mode=mode)
    if isinstance(result, ValidationReport):
        raise ModelFormatError("invalid model: %s" % result, result)
    return result


def _reduction(m):
    strict = [(u, v) for (u, v) in m.order if u != v]
    out = []
    for u, v in strict:
        if any(u != w != v and m.leq(u, w) and m.leq(w, v) for w in m.worlds):
            continue
        out.append((u, v))
    return sorted(out)


def model_to_dict(m, point=None):
    d = {
        "signature": list(m.signature),
        "worlds": list(m.worlds),
        "order": [list(p) for p in _reduction(m)],
        "valuation": {p: sorted(m.valuation[p]) for p in m.signature},
    }
    if point is not None:
        d["point"] = point
    return d


def model_to_json(m, point=None):
    return json.dumps(model_to_dict(m, point), indent=2, sort_keys=True) + "\n"


def load_model(raw, mode="strict"):
    """Raw dict or JSON text to (KripkeModel, optional point)."""
    if isinstance(raw, str):
        try:
            raw = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ModelFormatError("invalid JSON: %s" % exc)
    point = raw.get("point") if isinstance(raw, dict) else None
    result = normalize(raw, mode=mode)
    if isinstance(result, ValidationReport):
        raise ModelFormatError("invalid model: %s" % result, result)
    if point is not None and point not in result._up:
        raise ModelFormatError("point %r is not a world" % (point,))
    return result, point


# ---------------------------------------------------------------------------
# Operations


def reduct(m, sigma):
    sigma = as_signature(sigma)
    if not sigma <= m.signature:
        raise ValueError("reduct signature is not a subset")
    # keep m's letter order for the retained letters
    kept = [p for p in m.signature if p in sigma]
    return KripkeModel(m.worlds, m.order, {p: m.valuation[p] for p in kept}, Signature(kept))


def submodel(m, ws):
    ws = set(ws)
    if not ws:
        raise ValueError("submodel needs a non-empty world set")
    missing = ws - set(m.worlds)
    if missing:
        raise ValueError("unknown worlds: %s" % sorted(missing))
    order = {(u, v) for (u, v) in m.order if u in ws and v in ws}
    valuation = {p: m.valuation[p] & ws for p in m.signature}
    return KripkeModel(sorted(ws), order, valuation, m.signature)


def is_submodel(m, n):
    if m.signature != n.signature:
        return False
    ws = set(m.worlds)
    if not ws <= set(n.worlds):
        return False
    if m.order != {(u, v) for (u, v) in n.order if u in ws and v in ws}:
        return False
    return all(m.valuation[p] == n.valuation[p] & ws for p in m.signature)


def chain_union(ms):
    ms = list(ms)
    if not ms:
        raise ValueError("empty chain")
    for a, b in zip(ms, ms[1:]):
        if not is_submodel(a, b):
            raise ValueError("chain condition fails: %r is not a submodel of %r" % (a, b))
    worlds = set()
    order = set()
    valuation = {p: set() for p in ms[0].signature}
    for m in ms:
        worlds |= set(m.worlds)
        order |= m.order
        for p in m.signature:
            valuation[p] |= m.valuation[p]
    return KripkeModel(worlds, order, valuation, ms[0].signature)


def isomorphism(m, n):
    """Lexicographically least isomorphism as a world map, or None."""
    if m.signature != n.signature:
        return None
    if len(m.worlds) != len(n.worlds):
        return None

    def profile(model, w):
        return (
            len(model.up_set(w)),
            len(model.down_set(w)),
            tuple(w in model.valuation[p] for p in sorted(model.signature)),
        )

    sources = m.worlds
    prof_n = {w: profile(n, w) for w in n.worlds}
    assignment = {}
    used = set()

    def consistent(w, x):
        for w2, x2 in assignment.items():
            if m.leq(w, w2) != n.leq(x, x2):
                return False
            if m.leq(w2, w) != n.leq(x2, x):
                return False
        return True

    def extend(i):
        if i == len(sources):
            return True
        w = sources[i]
        pw = profile(m, w)
        for x in n.worlds:
            if x in used or prof_n[x] != pw:
                continue
            if not consistent(w, x):
                continue
            assignment[w] = x
            used.add(x)
            if extend(i + 1):
                return True
            del assignment[w]
            used.remove(x)
        return False

    if extend(0):
        return dict(assignment)
    return None


def random_model(n_worlds, sig, density, seed):
    """Seeded random model; identical arguments give equal models.

    Edges run only from lower to higher index, so antisymmetry holds by
    construction; valuations are sampled and then closed upward.
    """
    if n_worlds < 1:
        raise ValueError("need at least one world")
    sig = as_signature(sig)
    rng = random.Random(seed)
    width = len(str(n_worlds - 1))
    names = ["w%s" % str(i).zfill(width) for i in range(n_worlds)]
    pairs = []
    for i in range(n_worlds):
        for j in range(i + 1, n_worlds):
            if rng.random() < density:
                pairs.append((names[i], names[j]))
    valuation = {}
    for p in sig:
        valuation[p] = {w for w in names if rng.random() < 0.45}
    order = _closure(names, pairs)
    closed = {}
    for p in sig:
        cell = set(valuation[p])
        for u, v in order:
            if u in cell:
                cell.add(v)
        closed[p] = cell
    return KripkeModel(names, order, closed, sig)
