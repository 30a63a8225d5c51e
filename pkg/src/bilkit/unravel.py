"""Bounded bi-unravelling, bracket models, zigzag paths, and path schemas.

Unravelling nodes are chains of base worlds whose adjacent elements are
distinct and comparable.  An edge either extends a chain upward or hangs a
strictly smaller element below it; the node order is the reflexive and
transitive closure of those edges.  Any model with two distinct comparable
worlds unravels infinitely, so a length bound is mandatory and every claim
checked here carries the truncation guard in its report.
"""

from __future__ import annotations

from .formula import Atom, Coimpl, Impl, big_and, big_or, enumerate_formulas, rank as formula_rank
from .kripke import KripkeModel, PointedModel
from .semantics import is_type, realize, satisfies

NODE_SEP = "/"


class UnravelBudgetError(RuntimeError):
    pass


def node_id(chain):
    return NODE_SEP.join(chain)


class UnravelModel:
    """Bounded unravelling: chains, raw edges, and the derived Kripke model."""

    __slots__ = ("base", "root", "maxlen", "nodes", "rho", "model", "_ids")

    def __init__(self, base, root, maxlen, nodes, rho, model):
        self.base = base
        self.root = root
        self.maxlen = maxlen
        self.nodes = tuple(nodes)
        self.rho = frozenset(rho)
        self.model = model
        self._ids = {chain: node_id(chain) for chain in self.nodes}

    def id_of(self, chain):
        return self._ids[tuple(chain)]

    def end(self, chain):
        return chain[-1]

    def root_node(self):
        return (self.root,)

    def __repr__(self):
        return "UnravelModel(root=%r, maxlen=%d, %d nodes)" % (
            self.root,
            self.maxlen,
            len(self.nodes),
        )


def unravel(m, w, maxlen, node_cap=4000):
    """Unravelling of (m, w) restricted to chains of length <= maxlen."""
    if maxlen < 1:
        raise ValueError("maxlen must be at least 1")
    if w not in m._up:
        raise ValueError("unknown world: %r" % (w,))
    if any(NODE_SEP in world for world in m.worlds):
        raise ValueError("world ids may not contain %r" % NODE_SEP)

    nodes = [(w,)]
    frontier = [(w,)]
    while frontier:
        fresh = []
        for chain in frontier:
            if len(chain) == maxlen:
                continue
            end = chain[-1]
            for v in m.worlds:
                if v != end and (m.leq(end, v) or m.leq(v, end)):
                    ext = chain + (v,)
                    fresh.append(ext)
        nodes.extend(fresh)
        if len(nodes) > node_cap:
            raise UnravelBudgetError(
                "more than %d nodes at maxlen=%d; zigzag growth is exponential"
                % (node_cap, maxlen)
            )
        frontier = fresh
    nodes.sort(key=lambda c: (len(c), c))

    rho = set()
    for chain in nodes:
        if len(chain) < 2:
            continue
        prefix = chain[:-1]
        if m.leq(prefix[-1], chain[-1]):
            rho.add((prefix, chain))  # extend up
        else:
            rho.add((chain, prefix))  # retract down

    succ = {chain: set() for chain in nodes}
    for s, t in rho:
        succ[s].add(t)
    order = set()
    for start in nodes:
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for nxt in succ[cur]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        order.update((node_id(start), node_id(t)) for t in seen)

    ids = [node_id(chain) for chain in nodes]
    valuation = {
        p: {node_id(chain) for chain in nodes if chain[-1] in m.valuation[p]}
        for p in m.signature
    }
    model = KripkeModel(ids, order, valuation, m.signature)
    return UnravelModel(m, w, maxlen, nodes, rho, model)


def zigzag_factor(u, alpha, beta):
    """Factor a related node pair through its longest common prefix.

    Returns (gamma, down, up) with alpha = gamma + down descending strictly
    below end(gamma) and beta = gamma + up ascending strictly above it.
    """
    alpha = tuple(alpha)
    beta = tuple(beta)
    if alpha not in u._ids or beta not in u._ids:
        raise ValueError("not nodes of this unravelling")
    if not u.model.leq(u.id_of(alpha), u.id_of(beta)):
        raise ValueError("nodes are not order related")
    k = 0
    while k < len(alpha) and k < len(beta) and alpha[k] == beta[k]:
        k += 1
    gamma = alpha[:k]
    down = alpha[k:]
    up = beta[k:]
    base = u.base
    prev = gamma[-1]
    for v in down:
        if not (base.leq(v, prev) and v != prev):
            raise RuntimeError("factorization lost the descending chain shape")
        prev = v
    prev = gamma[-1]
    for v in up:
        if not (base.leq(prev, v) and v != prev):
            raise RuntimeError("factorization lost the ascending chain shape")
        prev = v
    return gamma, down, up


class BTheoryReport:
    """Guarded truth comparison between unravelling nodes and base worlds."""

    __slots__ = ("maxlen", "rank", "checked_nodes", "mismatches", "end_mismatches")

    def __init__(self, maxlen, rank, checked_nodes, mismatches, end_mismatches):
        self.maxlen = maxlen
        self.rank = rank
        self.checked_nodes = tuple(checked_nodes)
        self.mismatches = tuple(mismatches)
        self.end_mismatches = tuple(end_mismatches)

    @property
    def ok(self):
        return not self.mismatches and not self.end_mismatches

    def __repr__(self):
        return "BTheoryReport(rank=%d, %d nodes, %d mismatches, %d end mismatches)" % (
            self.rank,
            len(self.checked_nodes),
            len(self.mismatches),
            len(self.end_mismatches),
        )


def b_theory_check(m, w, maxlen, rank, node_cap=4000, budget=8192):
    """Compare node truth against base truth inside the truncation guard.

    Nodes of length l with l + rank <= maxlen are checked against the base
    model at their end for every enumerated formula of rank <= rank, and
    guarded nodes with equal ends are compared with each other.  Mismatches
    are reported, not repaired.
    """
    if rank > maxlen - 1:
        raise ValueError("rank must be at most maxlen - 1")
    un = unravel(m, w, maxlen, node_cap=node_cap)
    guarded = [chain for chain in un.nodes if len(chain) + rank <= un.maxlen]
    context = [PointedModel(un.model, node_id(c)) for c in un.nodes]
    context += [PointedModel(m, world) for world in m.worlds]
    reps = enumerate_formulas(m.signature, rank, context, budget=budget)

    mismatches = []
    for chain in guarded:
        nid = un.id_of(chain)
        end = chain[-1]
        for f in reps:
            un_val = satisfies(un.model, nid, f)
            base_val = satisfies(m, end, f)
            if un_val != base_val:
                mismatches.append((chain, f, un_val, base_val))

    end_mismatches = []
    by_end = {}
    for chain in guarded:
        by_end.setdefault(chain[-1], []).append(chain)
    for end, group in sorted(by_end.items()):
        anchor = group[0]
        for other in group[1:]:
            for f in reps:
                a = satisfies(un.model, un.id_of(anchor), f)
                b = satisfies(un.model, un.id_of(other), f)
                if a != b:
                    end_mismatches.append((anchor, other, f, a, b))
    return BTheoryReport(maxlen, rank, guarded, mismatches, end_mismatches)


# ---------------------------------------------------------------------------
# Bracket models


def bracket_letters(w):
    return "q+%s" % w, "q-%s" % w


def bracket(m):
    """Expand m with letters pinning each world's upward and downward cones.

    q+w holds exactly above w; q-w fails exactly below w.  Both families
    are upward closed, so the result is again a valid model.
    """
    fresh = []
    for w in m.worlds:
        plus, minus = bracket_letters(w)
        if plus in m.signature or minus in m.signature:
            raise ValueError("bracket letter %r or %r collides with the signature" % (plus, minus))
        fresh.append((w, plus, minus))
    signature = m.signature.union([name for _, p, q in fresh for name in (p, q)])
    valuation = dict(m.valuation)
    all_worlds = set(m.worlds)
    for w, plus, minus in fresh:
        valuation[plus] = frozenset(m.up_set(w))
        valuation[minus] = frozenset(all_worlds - m.down_set(w))
    return KripkeModel(m.worlds, m.order, valuation, signature)


# ---------------------------------------------------------------------------
# Path schemas


def is_zigzag_path(m, path):
    path = tuple(path)
    if not path or any(w not in m._up for w in path):
        return False
    for a, b in zip(path, path[1:]):
        if a == b or not (m.leq(a, b) or m.leq(b, a)):
            return False
    return True


def zigzag_paths(m, max_len):
    """All zigzag paths of length <= max_len, deterministic order."""
    out = [(w,) for w in m.worlds]
    frontier = list(out)
    while frontier:
        fresh = []
        for path in frontier:
            if len(path) == max_len:
                continue
            end = path[-1]
            for v in m.worlds:
                if v != end and (m.leq(end, v) or m.leq(v, end)):
                    fresh.append(path + (v,))
        out.extend(fresh)
        frontier = fresh
    out.sort(key=lambda p: (len(p), p))
    return out


class SchemaSet:
    """The four two-hole schemas at position k of a zigzag path, with signs."""

    KINDS = ("phi", "psi", "theta", "tau")

    __slots__ = ("path", "k", "_builders", "_signs")

    def __init__(self, path, k, builders, signs):
        self.path = tuple(path)
        self.k = k
        self._builders = builders
        self._signs = signs

    def instantiate(self, kind, alpha, beta):
        return self._builders[kind](alpha, beta)

    def sign(self, kind):
        return self._signs[kind]


def schemas(m, path, k):
    """Schema family for position k (1-based) of a zigzag path in m.

    The basis at k = n is implication for phi and theta and co-implication
    for psi and tau with signs (-, +, +, -).  Walking one step toward the
    path start wraps the schema with the bracket letter of the next path
    world: upward steps guard with q+ -> _ or _ -> q- and make every sign
    positive, downward steps use q+ -< _ or _ -< q- and make them negative.
    """
    path = tuple(path)
    n = len(path)
    if not is_zigzag_path(m, path):
        raise ValueError("not a zigzag path of the model")
    if not 1 <= k <= n:
        raise ValueError("index out of range")

    builders = {
        "phi": lambda a, b: Impl(a, b),
        "psi": lambda a, b: Coimpl(a, b),
        "theta": lambda a, b: Impl(a, b),
        "tau": lambda a, b: Coimpl(a, b),
    }
    signs = {"phi": "-", "psi": "+", "theta": "+", "tau": "-"}

    for level in range(n - 1, k - 1, -1):
        here, there = path[level - 1], path[level]
        ascending = m.leq(here, there)
        plus, minus = bracket_letters(there)
        qp, qm = Atom(plus), Atom(minus)
        new_builders = {}
        for kind in SchemaSet.KINDS:
            inner = builders[kind]
            if ascending:
                if signs[kind] == "+":
                    wrap = lambda a, b, inner=inner, qp=qp: Impl(qp, inner(a, b))
                else:
                    wrap = lambda a, b, inner=inner, qm=qm: Impl(inner(a, b), qm)
            else:
                if signs[kind] == "+":
                    wrap = lambda a, b, inner=inner, qp=qp: Coimpl(qp, inner(a, b))
                else:
                    wrap = lambda a, b, inner=inner, qm=qm: Coimpl(inner(a, b), qm)
            new_builders[kind] = wrap
        builders = new_builders
        signs = {kind: ("+" if ascending else "-") for kind in SchemaSet.KINDS}

    return SchemaSet(path, k, builders, signs)


_TARGETS = {
    "phi": ("impl", False),
    "psi": ("coimpl", True),
    "theta": ("impl", True),
    "tau": ("coimpl", False),
}


def verify_schema(bm, path, k, alpha, beta):
    """Check the four schema biconditionals on a bracket model.

    For each kind the signed truth of the instantiated schema at path[k]
    must match the target connective's truth at the path end.
    """
    path = tuple(path)
    family = schemas(bm, path, k)
    end = path[-1]
    here = path[k - 1]
    for kind in SchemaSet.KINDS:
        inst = family.instantiate(kind, alpha, beta)
        observed = satisfies(bm, here, inst)
        if family.sign(kind) == "-":
            observed = not observed
        target_kind, polarity = _TARGETS[kind]
        target_formula = Impl(alpha, beta) if target_kind == "impl" else Coimpl(alpha, beta)
        target = satisfies(bm, end, target_formula)
        if not polarity:
            target = not target
        if observed != target:
            return False
    return True


def schema_rank(path_len, k, alpha, beta):
    """Rank of any instantiated schema: one per wrap plus the basis step."""
    return max(formula_rank(alpha), formula_rank(beta)) + (path_len - k) + 1


# ---------------------------------------------------------------------------
# Finite type realization via expansions


def realize_finite_type_expansion(m, v, q, fresh):
    """Expand the bracket model so a fresh letter pair pins a type witness.

    The witness for the finite type is found in m, the bracket model is
    expanded by interpreting the fresh pair exactly as the witness's
    bracket letters, and the basis schema instances for the type are
    verified at v.  Returns the expanded pointed model, or None when no
    witness exists.
    """
    plus_name, minus_name = fresh
    if not is_type(PointedModel(m, v), q):
        raise ValueError("(gamma, delta) is not a %s type of the point" % q.direction)
    bm = bracket(m)
    for name in (plus_name, minus_name):
        if name in bm.signature:
            raise ValueError("fresh letter %r collides" % name)
    witness = realize(m, v, q)
    if witness is None:
        return None

    wplus, wminus = bracket_letters(witness)
    valuation = dict(bm.valuation)
    valuation[plus_name] = bm.valuation[wplus]
    valuation[minus_name] = bm.valuation[wminus]
    expanded = KripkeModel(
        bm.worlds, bm.order, valuation, bm.signature.union([plus_name, minus_name])
    )

    rp, rm = Atom(plus_name), Atom(minus_name)
    if q.direction == "successor":
        # phi1(r+, r-) must fail, theta1 instances must hold
        checks = [(Impl(rp, rm), False)]
        checks += [(Impl(rp, g), True) for g in q.gamma]
        checks += [(Impl(d, rm), True) for d in q.delta]
    else:
        # psi1(s+, s-) must hold, tau1 instances must fail
        checks = [(Coimpl(rp, rm), True)]
        checks += [(Coimpl(rp, g), False) for g in q.gamma]
        checks += [(Coimpl(d, rm), False) for d in q.delta]
    for formula, expected in checks:
        if satisfies(expanded, v, formula) != expected:
            raise RuntimeError(
                "type expansion fragment failed at %r for %r" % (v, formula)
            )
    return PointedModel(expanded, v)
