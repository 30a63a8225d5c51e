"""Bi-asimulations: condition checking, greatest-fixpoint computation,
the canonical theory-inclusion relation, and separating-formula synthesis.

Relations are sets of directed pairs tagged "1to2" or "2to1".  The
refinement deletes pairs round by round against the previous round's
relation, so every deletion record references strictly earlier rounds and
doubles as a synthesis certificate.
"""

from __future__ import annotations

import json

from .formula import Atom, Coimpl, Impl, big_and, big_or, enumerate_formulas
from .kripke import PointedModel, ValidationReport
from .semantics import sat_worlds, satisfies

SIDES = ("1to2", "2to1")


class Asim:
    """Directed cross-pairs between two models."""

    __slots__ = ("left_model", "right_model", "pairs")

    def __init__(self, left_model, right_model, pairs):
        self.left_model = left_model
        self.right_model = right_model
        self.pairs = frozenset(pairs)
        for side, v, s in self.pairs:
            src, tgt = (left_model, right_model) if side == "1to2" else (right_model, left_model)
            if side not in SIDES or v not in src._up or s not in tgt._up:
                raise ValueError("ill-typed pair: %r" % ((side, v, s),))

    def __contains__(self, pair):
        return pair in self.pairs

    def __len__(self):
        return len(self.pairs)

    def to_json(self):
        rows = [
            {"side": side, "from": v, "to": s}
            for side, v, s in sorted(self.pairs)
        ]
        return json.dumps(rows, indent=2) + "\n"

    @staticmethod
    def from_json(text, left_model, right_model):
        rows = json.loads(text)
        pairs = {(r["side"], r["from"], r["to"]) for r in rows}
        return Asim(left_model, right_model, pairs)


def _side_models(side, m1, m2):
    return (m1, m2) if side == "1to2" else (m2, m1)


def _flip(side):
    return "2to1" if side == "1to2" else "1to2"


def check_biasim(a, frm, to):
    """Check every defining condition of a bi-asimulation from frm to to."""
    if a.left_model is not frm.model and a.left_model != frm.model:
        raise ValueError("relation was built over a different left model")
    if a.right_model is not to.model and a.right_model != to.model:
        raise ValueError("relation was built over a different right model")
    m1, m2 = frm.model, to.model
    report = ValidationReport()
    if ("1to2", frm.point, to.point) not in a.pairs:
        report.add("elem", "point pair (%r, %r) missing" % (frm.point, to.point))
    shared = [p for p in m1.signature if p in m2.signature]
    for side, v, s in sorted(a.pairs):
        mi, mj = _side_models(side, m1, m2)
        for p in shared:
            if v in mi.valuation[p] and s not in mj.valuation[p]:
                report.add(
                    "s-atom",
                    "pair %r: %r holds at %r but not at %r" % ((side, v, s), p, v, s),
                    (side, v, s, p),
                )
        for t in mj.successors(s):
            if not any(
                (_flip(side), t, u) in a.pairs and (side, u, t) in a.pairs
                for u in mi.successors(v)
            ):
                report.add(
                    "s-back",
                    "pair %r: successor %r of %r has no matched successor of %r"
                    % ((side, v, s), t, s, v),
                    (side, v, s, t),
                )
        for u in mi.predecessors(v):
            if not any(
                (_flip(side), t, u) in a.pairs and (side, u, t) in a.pairs
                for t in mj.predecessors(s)
            ):
                report.add(
                    "s-forth",
                    "pair %r: predecessor %r of %r has no matched predecessor of %r"
                    % ((side, v, s), u, v, s),
                    (side, v, s, u),
                )
    return report


class _Deletion:
    """Why a pair died: condition, witness, and the per-world sub-references.

    refs is a list of ("alpha"|"beta", world, pair): alpha entries cite the
    cross pair (witness, world), beta entries the pair (world, witness).
    """

    __slots__ = ("condition", "witness", "refs", "round", "letter")

    def __init__(self, condition, witness=None, refs=(), round=0, letter=None):
        self.condition = condition
        self.witness = witness
        self.refs = list(refs)
        self.round = round
        self.letter = letter


def _fixpoint(frm, to):
    """Delete condition-violating pairs until stable.

    Returns (alive, dead, rounds) where dead maps each deleted pair to its
    deletion record and rounds counts scans including the final stable one.
    """
    m1, m2 = frm.model, to.model
    if m1.signature != m2.signature:
        raise ValueError("models must share a signature")
    letters = sorted(m1.signature)

    alive = set()
    dead = {}
    for side in SIDES:
        mi, mj = _side_models(side, m1, m2)
        for v in mi.worlds:
            for s in mj.worlds:
                bad = next(
                    (p for p in letters if v in mi.valuation[p] and s not in mj.valuation[p]),
                    None,
                )
                if bad is None:
                    alive.add((side, v, s))
                else:
                    dead[(side, v, s)] = _Deletion("s-atom", letter=bad, round=0)

    rounds = 0
    while True:
        rounds += 1
        snapshot = frozenset(alive)
        removals = []
        for pair in sorted(snapshot):
            side, v, s = pair
            mi, mj = _side_models(side, m1, m2)
            rev = _flip(side)
            record = None
            for t in mj.successors(s):
                if any(
                    (rev, t, u) in snapshot and (side, u, t) in snapshot
                    for u in mi.successors(v)
                ):
                    continue
                refs = []
                for u in mi.successors(v):
                    if (rev, t, u) not in snapshot:
                        refs.append(("alpha", u, (rev, t, u)))
                    else:
                        refs.append(("beta", u, (side, u, t)))
                record = _Deletion("s-back", witness=t, refs=refs, round=rounds)
                break
            if record is None:
                for u in mi.predecessors(v):
                    if any(
                        (rev, t, u) in snapshot and (side, u, t) in snapshot
                        for t in mj.predecessors(s)
                    ):
                        continue
                    refs = []
                    for t in mj.predecessors(s):
                        if (rev, t, u) not in snapshot:
                            refs.append(("alpha", t, (rev, t, u)))
                        else:
                            refs.append(("beta", t, (side, u, t)))
                    record = _Deletion("s-forth", witness=u, refs=refs, round=rounds)
                    break
            if record is not None:
                removals.append((pair, record))
        if not removals:
            return alive, dead, rounds
        for pair, record in removals:
            alive.discard(pair)
            dead[pair] = record


def greatest_biasim(frm, to):
    """Greatest bi-asimulation from frm to to, or None.

    The fixpoint of the deletion refinement is order independent; the
    relation is returned when the point pair survives it.
    """
    alive, _, _ = _fixpoint(frm, to)
    if ("1to2", frm.point, to.point) not in alive:
        return None
    return Asim(frm.model, to.model, alive)


def _build_separator(pair, dead, memo):
    hit = memo.get(pair)
    if hit is not None:
        return hit
    record = dead[pair]
    if record.condition == "s-atom":
        out = Atom(record.letter)
    else:
        alphas = []
        betas = []
        for polarity, _, ref in record.refs:
            sub = _build_separator(ref, dead, memo)
            if polarity == "alpha":
                alphas.append(sub)
            else:
                betas.append(sub)
        if record.condition == "s-back":
            out = Impl(big_and(alphas), big_or(betas))
        else:
            out = Coimpl(big_and(betas), big_or(alphas))
    memo[pair] = out
    return out


def _pair_models(pair, m1, m2):
    side, v, s = pair
    mi, mj = _side_models(side, m1, m2)
    return mi, v, mj, s


def _minimize(f, mi, v, mj, s):
    """Greedily drop conjuncts/disjuncts while the separation still checks."""
    from .formula import And, Or

    def parts(node, ctor):
        if isinstance(node, ctor):
            return parts(node.left, ctor) + parts(node.right, ctor)
        return [node]

    def separates(g):
        return satisfies(mi, v, g) and not satisfies(mj, s, g)

    if isinstance(f, (Impl, Coimpl)):
        left = parts(f.left, And if isinstance(f, Impl) else And)
        right = parts(f.right, Or)
        ctor = type(f)
        changed = True
        best = f
        while changed:
            changed = False
            for i in range(len(left)):
                if len(left) <= 1:
                    break
                trial = ctor(big_and(left[:i] + left[i + 1:]), big_or(right))
                if separates(trial):
                    left.pop(i)
                    best = trial
                    changed = True
                    break
            for i in range(len(right)):
                if len(right) <= 1:
                    break
                trial = ctor(big_and(left), big_or(right[:i] + right[i + 1:]))
                if separates(trial):
                    right.pop(i)
                    best = trial
                    changed = True
                    break
        return best
    return f


def separating_formula(frm, to, minimize=False):
    """Formula true at frm and false at to, or None when bi-asimilar.

    Built from the deletion trace: an atom for an atomic mismatch, a
    conjunction-to-disjunction implication for a successor failure, and the
    dual co-implication for a predecessor failure.  The result is verified
    against the model checker before being returned.
    """
    alive, dead, _ = _fixpoint(frm, to)
    root = ("1to2", frm.point, to.point)
    if root in alive:
        return None
    f = _build_separator(root, dead, {})
    if minimize:
        mi, v, mj, s = _pair_models(root, frm.model, to.model)
        f = _minimize(f, mi, v, mj, s)
    if not satisfies(frm.model, frm.point, f) or satisfies(to.model, to.point, f):
        raise RuntimeError("synthesized separator failed verification: %r" % f)
    return f


def fixpoint_rounds(frm, to):
    """Number of refinement scans, the final stable one included."""
    _, _, rounds = _fixpoint(frm, to)
    return rounds


def canonical_relation(m1, m2, sig, max_rank, budget=4096):
    """Directed pairs with rank-bounded positive-theory inclusion.

    The enumeration runs once over every world of both models, so each
    directed pair is decided against the same exact class list.
    """
    context = [PointedModel(m1, w) for w in m1.worlds]
    if m2 is not m1:
        context += [PointedModel(m2, w) for w in m2.worlds]
    reps = enumerate_formulas(sig, max_rank, context, budget=budget)
    sat1 = {f: sat_worlds(m1, f) for f in reps}
    sat2 = {f: sat_worlds(m2, f) for f in reps}
    pairs = set()
    for side in SIDES:
        mi, mj = _side_models(side, m1, m2)
        sati, satj = (sat1, sat2) if side == "1to2" else (sat2, sat1)
        for v in mi.worlds:
            for s in mj.worlds:
                if all(s in satj[f] for f in reps if v in sati[f]):
                    pairs.add((side, v, s))
    return Asim(m1, m2, pairs)
