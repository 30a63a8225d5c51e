"""Standard translation into classical first-order logic over posets,
a finite Tarskian evaluator used as the correctness oracle, and TPTP /
SMT-LIB2 emitters.

Naming scheme: unary predicates ``p_<letter>``, the order ``leq``, sort
``W``, and grounding constants ``w_<id>``.  Characters outside [A-Za-z0-9]
are escaped deterministically and injectively: ``_`` doubles, ``+`` maps
to ``_p_``, ``-`` to ``_m_``, ``/`` to ``_s_``, anything else to
``_x<hex>_``.
"""

from __future__ import annotations


# ---------------------------------------------------------------------------
# First-order AST (terms are variables or world constants)


class Term:
    __slots__ = ()


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return "Var(%r)" % self.name

    def __eq__(self, other):
        return type(other) is Var and other.name == self.name

    def __hash__(self):
        return hash(("var", self.name))


class Const(Term):
    __slots__ = ("world",)

    def __init__(self, world):
        self.world = world

    def __repr__(self):
        return "Const(%r)" % self.world

    def __eq__(self, other):
        return type(other) is Const and other.world == self.world

    def __hash__(self):
        return hash(("const", self.world))


class FOFormula:
    __slots__ = ()


class Falsum(FOFormula):
    __slots__ = ()


class Pred(FOFormula):
    __slots__ = ("name", "term")

    def __init__(self, name, term):
        self.name = name
        self.term = term


class Leq(FOFormula):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


class Eq(FOFormula):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


class Not(FOFormula):
    __slots__ = ("body",)

    def __init__(self, body):
        self.body = body


class _BinaryFO(FOFormula):
    __slots__ = ("left", "right")

    def __init__(self, left, right):
        self.left = left
        self.right = right


class FOAnd(_BinaryFO):
    __slots__ = ()


class FOOr(_BinaryFO):
    __slots__ = ()


class FOImplies(_BinaryFO):
    __slots__ = ()


class Forall(FOFormula):
    __slots__ = ("var", "body")

    def __init__(self, var, body):
        self.var = var
        self.body = body


class Exists(FOFormula):
    __slots__ = ("var", "body")

    def __init__(self, var, body):
        self.var = var
        self.body = body


def free_vars(g):
    out = set()

    def go(node, bound):
        if isinstance(node, Pred):
            if isinstance(node.term, Var) and node.term.name not in bound:
                out.add(node.term.name)
        elif isinstance(node, (Leq, Eq)):
            for t in (node.left, node.right):
                if isinstance(t, Var) and t.name not in bound:
                    out.add(t.name)
        elif isinstance(node, Not):
            go(node.body, bound)
        elif isinstance(node, _BinaryFO):
            go(node.left, bound)
            go(node.right, bound)
        elif isinstance(node, (Forall, Exists)):
            go(node.body, bound | {node.var})
        return out

    go(g, frozenset())
    return out


# ---------------------------------------------------------------------------
# Translation


def translate(f, var="X"):
    """Standard translation with the given free variable for the root world.

    Atoms become unary predicates, implication a universally quantified
    conditional over order-successors, co-implication an existentially
    quantified conjunction over order-predecessors.  Every quantifier binds
    a fresh variable.
    """
    counter = [0]

    def fresh():
        name = "Y%d" % counter[0]
        counter[0] += 1
        return name

    def go(node, x):
        kind = node.kind
        if kind == "bottom":
            return Falsum()
        if kind == "atom":
            return Pred(pred_name(node.name), Var(x))
        if kind == "and":
            return FOAnd(go(node.left, x), go(node.right, x))
        if kind == "or":
            return FOOr(go(node.left, x), go(node.right, x))
        if kind == "impl":
            y = fresh()
            return Forall(
                y,
                FOImplies(
                    Leq(Var(x), Var(y)),
                    FOImplies(go(node.left, y), go(node.right, y)),
                ),
            )
        y = fresh()
        return Exists(
            y,
            FOAnd(
                Leq(Var(y), Var(x)),
                FOAnd(go(node.left, y), Not(go(node.right, y))),
            ),
        )

    return go(f, var)


# ---------------------------------------------------------------------------
# Evaluation (classical semantics over the finite frame)


def eval_fo(m, g, env=None):
    """Evaluate a first-order formula on a model; env binds free variables."""
    env = dict(env or {})

    def term(t, env):
        if isinstance(t, Var):
            try:
                w = env[t.name]
            except KeyError:
                raise ValueError("unbound variable: %r" % t.name)
        else:
            w = t.world
        if w not in m._up:
            raise ValueError("unknown world: %r" % (w,))
        return w

    def go(node, env):
        if isinstance(node, Falsum):
            return False
        if isinstance(node, Pred):
            letter = letter_of_pred(node.name)
            if letter not in m.signature:
                raise ValueError("unknown predicate: %r" % node.name)
            return term(node.term, env) in m.valuation[letter]
        if isinstance(node, Leq):
            return m.leq(term(node.left, env), term(node.right, env))
        if isinstance(node, Eq):
            return term(node.left, env) == term(node.right, env)
        if isinstance(node, Not):
            return not go(node.body, env)
        if isinstance(node, FOAnd):
            return go(node.left, env) and go(node.right, env)
        if isinstance(node, FOOr):
            return go(node.left, env) or go(node.right, env)
        if isinstance(node, FOImplies):
            return (not go(node.left, env)) or go(node.right, env)
        if isinstance(node, Forall):
            return all(go(node.body, {**env, node.var: w}) for w in m.worlds)
        if isinstance(node, Exists):
            return any(go(node.body, {**env, node.var: w}) for w in m.worlds)
        raise TypeError("not a first-order formula: %r" % (node,))

    return go(g, env)


# ---------------------------------------------------------------------------
# Names


def _escape(text):
    out = []
    for ch in text:
        if ch.isalnum() and ord(ch) < 128:
            out.append(ch)
        elif ch == "_":
            out.append("__")
        elif ch == "+":
            out.append("_p_")
        elif ch == "-":
            out.append("_m_")
        elif ch == "/":
            out.append("_s_")
        else:
            out.append("_x%x_" % ord(ch))
    return "".join(out)


def pred_name(letter):
    return "p_%s" % _escape(letter)


def letter_of_pred(name):
    if not name.startswith("p_"):
        raise ValueError("not a letter predicate: %r" % name)
    body = name[2:]
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch != "_":
            out.append(ch)
            i += 1
            continue
        if body.startswith("__", i):
            out.append("_")
            i += 2
        elif body.startswith("_p_", i):
            out.append("+")
            i += 3
        elif body.startswith("_m_", i):
            out.append("-")
            i += 3
        elif body.startswith("_s_", i):
            out.append("/")
            i += 3
        elif body.startswith("_x", i):
            j = body.index("_", i + 2)
            out.append(chr(int(body[i + 2:j], 16)))
            i = j + 1
        else:
            raise ValueError("bad escape in %r" % name)
    return "".join(out)


def const_name(world):
    return "w_%s" % _escape(world)


# ---------------------------------------------------------------------------
# Problems


class FOProblem:
    """Named axioms plus one goal; ready for emission."""

    __slots__ = ("axioms", "goal", "goal_name")

    def __init__(self, axioms, goal, goal_name="goal"):
        self.axioms = tuple(axioms)
        self.goal = goal
        self.goal_name = goal_name

    def letters(self):
        found = []

        def go(node):
            if isinstance(node, Pred):
                letter = letter_of_pred(node.name)
                if letter not in found:
                    found.append(letter)
            elif isinstance(node, Not):
                go(node.body)
            elif isinstance(node, _BinaryFO):
                go(node.left)
                go(node.right)
            elif isinstance(node, (Forall, Exists)):
                go(node.body)

        for _, ax in self.axioms:
            go(ax)
        go(self.goal)
        return found

    def constants(self):
        found = []

        def walk_term(t):
            if isinstance(t, Const) and t.world not in found:
                found.append(t.world)

        def go(node):
            if isinstance(node, Pred):
                walk_term(node.term)
            elif isinstance(node, (Leq, Eq)):
                walk_term(node.left)
                walk_term(node.right)
            elif isinstance(node, Not):
                go(node.body)
            elif isinstance(node, _BinaryFO):
                go(node.left)
                go(node.right)
            elif isinstance(node, (Forall, Exists)):
                go(node.body)

        for _, ax in self.axioms:
            go(ax)
        go(self.goal)
        return found


def frame_axioms(sig):
    """Reflexivity, transitivity, antisymmetry, and per-letter monotonicity."""
    x, y, z = Var("X0"), Var("X1"), Var("X2")
    axioms = [
        ("reflexivity", Forall("X0", Leq(x, x))),
        (
            "transitivity",
            Forall(
                "X0",
                Forall(
                    "X1",
                    Forall(
                        "X2",
                        FOImplies(FOAnd(Leq(x, y), Leq(y, z)), Leq(x, z)),
                    ),
                ),
            ),
        ),
        (
            "antisymmetry",
            Forall(
                "X0",
                Forall("X1", FOImplies(FOAnd(Leq(x, y), Leq(y, x)), Eq(x, y))),
            ),
        ),
    ]
    for letter in sig:
        axioms.append(
            (
                "monotone_%s" % _escape(letter),
                Forall(
                    "X0",
                    Forall(
                        "X1",
                        FOImplies(
                            FOAnd(Leq(x, y), Pred(pred_name(letter), x)),
                            Pred(pred_name(letter), y),
                        ),
                    ),
                ),
            )
        )
    return axioms


def problem(goal, sig):
    return FOProblem(frame_axioms(sig), goal)


def ground_facts(m):
    """Complete finite diagram of a model: domain closure, distinctness,
    the full order table, and the full valuation table."""
    consts = {w: Const(w) for w in m.worlds}
    facts = []
    x = Var("X0")
    domain = None
    for w in m.worlds:
        eq = Eq(x, consts[w])
        domain = eq if domain is None else FOOr(domain, eq)
    facts.append(("domain_closure", Forall("X0", domain)))
    for i, u in enumerate(m.worlds):
        for v in m.worlds[i + 1:]:
            facts.append(("distinct_%s_%s" % (_escape(u), _escape(v)),
                          Not(Eq(consts[u], consts[v]))))
    for u in m.worlds:
        for v in m.worlds:
            atom = Leq(consts[u], consts[v])
            name = "order_%s_%s" % (_escape(u), _escape(v))
            facts.append((name, atom if m.leq(u, v) else Not(atom)))
    for p in m.signature:
        for w in m.worlds:
            atom = Pred(pred_name(p), consts[w])
            name = "val_%s_%s" % (_escape(p), _escape(w))
            facts.append((name, atom if w in m.valuation[p] else Not(atom)))
    return facts


def grounded_problem(m, goal):
    """Frame axioms plus the model's diagram, with the goal asserted."""
    return FOProblem(tuple(frame_axioms(m.signature)) + tuple(ground_facts(m)), goal)


# ---------------------------------------------------------------------------
# Emission


def _tptp(node):
    if isinstance(node, Falsum):
        return "$false"
    if isinstance(node, Pred):
        return "%s(%s)" % (node.name, _tptp_term(node.term))
    if isinstance(node, Leq):
        return "leq(%s,%s)" % (_tptp_term(node.left), _tptp_term(node.right))
    if isinstance(node, Eq):
        return "(%s = %s)" % (_tptp_term(node.left), _tptp_term(node.right))
    if isinstance(node, Not):
        return "~(%s)" % _tptp(node.body)
    if isinstance(node, FOAnd):
        return "(%s & %s)" % (_tptp(node.left), _tptp(node.right))
    if isinstance(node, FOOr):
        return "(%s | %s)" % (_tptp(node.left), _tptp(node.right))
    if isinstance(node, FOImplies):
        return "(%s => %s)" % (_tptp(node.left), _tptp(node.right))
    if isinstance(node, Forall):
        return "(![%s]: %s)" % (node.var, _tptp(node.body))
    if isinstance(node, Exists):
        return "(?[%s]: %s)" % (node.var, _tptp(node.body))
    raise TypeError("not a first-order formula: %r" % (node,))


def _tptp_term(t):
    return t.name if isinstance(t, Var) else const_name(t.world)


def _smt(node):
    if isinstance(node, Falsum):
        return "false"
    if isinstance(node, Pred):
        return "(%s %s)" % (node.name, _smt_term(node.term))
    if isinstance(node, Leq):
        return "(leq %s %s)" % (_smt_term(node.left), _smt_term(node.right))
    if isinstance(node, Eq):
        return "(= %s %s)" % (_smt_term(node.left), _smt_term(node.right))
    if isinstance(node, Not):
        return "(not %s)" % _smt(node.body)
    if isinstance(node, FOAnd):
        return "(and %s %s)" % (_smt(node.left), _smt(node.right))
    if isinstance(node, FOOr):
        return "(or %s %s)" % (_smt(node.left), _smt(node.right))
    if isinstance(node, FOImplies):
        return "(=> %s %s)" % (_smt(node.left), _smt(node.right))
    if isinstance(node, Forall):
        return "(forall ((%s W)) %s)" % (node.var, _smt(node.body))
    if isinstance(node, Exists):
        return "(exists ((%s W)) %s)" % (node.var, _smt(node.body))
    raise TypeError("not a first-order formula: %r" % (node,))


def _smt_term(t):
    return t.name if isinstance(t, Var) else const_name(t.world)


def emit(p, format):
    """Byte-stable text for a problem in TPTP FOF or SMT-LIB2 syntax.

    TPTP closes the goal universally and states it as a conjecture.  The
    SMT-LIB2 script asserts the axioms and the goal and ends with
    (check-sat): satisfiable means the goal is jointly consistent with the
    axioms.
    """
    if format == "tptp":
        lines = []
        for name, ax in p.axioms:
            lines.append("fof(%s, axiom, %s)." % (name, _tptp(ax)))
        goal = p.goal
        for name in sorted(free_vars(goal)):
            goal = Forall(name, goal)
        lines.append("fof(%s, conjecture, %s)." % (p.goal_name, _tptp(goal)))
        return "\n".join(lines) + "\n"
    if format == "smtlib2":
        lines = ["(set-logic UF)", "(declare-sort W 0)", "(declare-fun leq (W W) Bool)"]
        for letter in p.letters():
            lines.append("(declare-fun %s (W) Bool)" % pred_name(letter))
        for world in p.constants():
            lines.append("(declare-const %s W)" % const_name(world))
        for name, ax in p.axioms:
            lines.append("(assert (! %s :named %s))" % (_smt(ax), name))
        goal = p.goal
        for name in sorted(free_vars(goal)):
            goal = Exists(name, goal)
        lines.append("(assert (! %s :named %s))" % (_smt(goal), p.goal_name))
        lines.append("(check-sat)")
        return "\n".join(lines) + "\n"
    raise ValueError("format must be 'tptp' or 'smtlib2'")
