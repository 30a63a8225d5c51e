"""Syntax layer: AST, parser, printer, measures, and the semantic enumerator.

The language has falsum, conjunction, disjunction, implication and
co-implication.  Surface syntax (tightest first): ``~``, ``&``, ``|``,
``-<``, ``->``; ``->`` associates right, ``-<`` left.  ``~x`` is sugar for
``x -> false`` and ``true`` for ``false -> false``.
"""

from __future__ import annotations

import random
import re

LETTER_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_+\-]*\Z")


class EnumerationBudgetError(RuntimeError):
    """Raised when the formula enumerator exceeds its class budget."""


def check_letter(name):
    if not isinstance(name, str) or not LETTER_RE.match(name):
        raise ValueError("invalid letter name: %r" % (name,))
    return name


class Signature:
    """Finite, duplicate-free, insertion-ordered set of letters."""

    __slots__ = ("letters", "_set")

    def __init__(self, letters=()):
        seen = []
        for name in letters:
            check_letter(name)
            if name in seen:
                raise ValueError("duplicate letter: %r" % (name,))
            seen.append(name)
        self.letters = tuple(seen)
        self._set = frozenset(seen)

    def __contains__(self, name):
        return name in self._set

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        return self._set == other._set

    def __hash__(self):
        return hash(self._set)

    def __le__(self, other):
        return self._set <= other._set

    def __repr__(self):
        return "Signature(%r)" % (list(self.letters),)

    def union(self, other):
        extra = [name for name in other if name not in self._set]
        return Signature(self.letters + tuple(extra))


def as_signature(letters):
    return letters if isinstance(letters, Signature) else Signature(letters)


# ---------------------------------------------------------------------------
# AST


class Formula:
    __slots__ = ("_hash",)
    kind = "?"

    def __hash__(self):
        return self._hash

    def __str__(self):
        return render(self)

    def __repr__(self):
        return "<%s>" % render(self)


class Bottom(Formula):
    __slots__ = ()
    kind = "bottom"
    __hash__ = Formula.__hash__

    def __init__(self):
        self._hash = hash(("bottom",))

    def __eq__(self, other):
        return type(other) is Bottom


class Atom(Formula):
    __slots__ = ("name",)
    kind = "atom"
    __hash__ = Formula.__hash__

    def __init__(self, name):
        self.name = check_letter(name)
        self._hash = hash(("atom", name))

    def __eq__(self, other):
        return type(other) is Atom and other.name == self.name


class _Binary(Formula):
    __slots__ = ("left", "right")
    __hash__ = Formula.__hash__

    def __init__(self, left, right):
        if not isinstance(left, Formula) or not isinstance(right, Formula):
            raise TypeError("formula operands expected")
        self.left = left
        self.right = right
        self._hash = hash((self.kind, left._hash, right._hash))

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and other._hash == self._hash
            and other.left == self.left
            and other.right == self.right
        )


class And(_Binary):
    __slots__ = ()
    kind = "and"


class Or(_Binary):
    __slots__ = ()
    kind = "or"


class Impl(_Binary):
    __slots__ = ()
    kind = "impl"


class Coimpl(_Binary):
    __slots__ = ()
    kind = "coimpl"


def top():
    return Impl(Bottom(), Bottom())


def neg(f):
    return Impl(f, Bottom())


def big_and(formulas):
    """Left fold; the empty conjunction is true (= false -> false)."""
    formulas = list(formulas)
    if not formulas:
        return top()
    acc = formulas[0]
    for f in formulas[1:]:
        acc = And(acc, f)
    return acc


def big_or(formulas):
    """Left fold; the empty disjunction is false."""
    formulas = list(formulas)
    if not formulas:
        return Bottom()
    acc = formulas[0]
    for f in formulas[1:]:
        acc = Or(acc, f)
    return acc


def letters(f):
    """Signature of exactly the letters occurring in f (discovery order)."""
    seen = []
    seen_set = set()
    visited = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if id(node) in visited:
            continue
        visited.add(id(node))
        if node.kind == "atom":
            if node.name not in seen_set:
                seen.append(node.name)
                seen_set.add(node.name)
        elif node.kind != "bottom":
            stack.append(node.right)
            stack.append(node.left)
    return Signature(seen)


def rank(f):
    """Nesting depth of -> and -<; & and | do not add to the rank."""
    memo = {}

    def go(node):
        r = memo.get(id(node))
        if r is not None:
            return r
        if node.kind in ("bottom", "atom"):
            r = 0
        elif node.kind in ("and", "or"):
            r = max(go(node.left), go(node.right))
        else:
            r = 1 + max(go(node.left), go(node.right))
        memo[id(node)] = r
        return r

    return go(f)


def subformulas(f):
    """All distinct subformulas, bottom-up order."""
    out = []
    seen = set()

    def go(node):
        if node in seen:
            return
        seen.add(node)
        if isinstance(node, _Binary):
            go(node.left)
            go(node.right)
        out.append(node)

    go(f)
    return out


# ---------------------------------------------------------------------------
# Parsing


class ParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__("%s at line %d, column %d" % (message, line, col))
        self.line = line
        self.col = col


_TOKEN_RE = re.compile(
    r"""(?P<ws>[ \t\r\n]+)
      | (?P<comment>\#[^\n]*)
      | (?P<arrow>->)
      | (?P<coimpl>-<)
      | (?P<and>&)
      | (?P<or>\|)
      | (?P<not>~)
      | (?P<lparen>\()
      | (?P<rparen>\))
      | (?P<ident>[a-zA-Z][a-zA-Z0-9_+\-]*)
    """,
    re.VERBOSE,
)

_KEYWORDS = ("false", "true")


def _tokenize(text):
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                "unexpected character %r" % text[pos], line, pos - line_start + 1
            )
        kind = m.lastgroup
        value = m.group()
        if kind == "ident":
            # Letters may contain '-', which collides with '->' and '-<'.
            # Give the operator priority when a trailing dash precedes < or >.
            end = m.end()
            while value.endswith("-") and end < n and text[end] in "<>":
                value = value[:-1]
                end -= 1
            if not value:
                raise ParseError(
                    "unexpected character %r" % text[pos], line, pos - line_start + 1
                )
            tokens.append((kind, value, line, pos - line_start + 1))
            pos = end
            continue
        if kind == "ws":
            for i, ch in enumerate(value):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        elif kind != "comment":
            tokens.append((kind, value, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(("eof", "", line, n - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], tok[3])

    def expect(self, kind, what):
        tok = self.next()
        if tok[0] != kind:
            self.error("expected %s" % what, tok)
        return tok

    def formula(self):
        left = self.coimpl()
        if self.peek()[0] == "arrow":
            self.next()
            return Impl(left, self.formula())
        return left

    def coimpl(self):
        acc = self.disj()
        while self.peek()[0] == "coimpl":
            self.next()
            acc = Coimpl(acc, self.disj())
        return acc

    def disj(self):
        acc = self.conj()
        while self.peek()[0] == "or":
            self.next()
            acc = Or(acc, self.conj())
        return acc

    def conj(self):
        acc = self.unary()
        while self.peek()[0] == "and":
            self.next()
            acc = And(acc, self.unary())
        return acc

    def unary(self):
        tok = self.peek()
        if tok[0] == "not":
            self.next()
            return Impl(self.unary(), Bottom())
        if tok[0] == "lparen":
            self.next()
            inner = self.formula()
            closing = self.next()
            if closing[0] != "rparen":
                self.error("unbalanced parenthesis", closing)
            return inner
        if tok[0] == "ident":
            self.next()
            if tok[1] == "false":
                return Bottom()
            if tok[1] == "true":
                return top()
            return Atom(tok[1])
        if tok[0] == "eof":
            self.error("dangling operator or empty formula", tok)
        self.error("unexpected token %r" % tok[1], tok)


def parse(text):
    """Parse surface syntax into a Formula; raises ParseError with position."""
    parser = _Parser(_tokenize(text))
    f = parser.formula()
    tok = parser.peek()
    if tok[0] != "eof":
        parser.error("trailing input %r" % tok[1], tok)
    return f


# ---------------------------------------------------------------------------
# Printing

_PREC = {"impl": 1, "coimpl": 2, "or": 3, "and": 4}
_RIGHT_ASSOC = {"impl"}
_SYMBOL = {"impl": "->", "coimpl": "-<", "or": "|", "and": "&"}


def render(f):
    """Minimal-parenthesis text; parse(render(f)) is structurally f."""
    if f.kind == "bottom":
        return "false"
    if f.kind == "atom":
        return f.name
    prec = _PREC[f.kind]
    right_assoc = f.kind in _RIGHT_ASSOC

    def side(child, is_right):
        text = render(child)
        if child.kind in ("bottom", "atom"):
            return text
        cprec = _PREC[child.kind]
        if cprec > prec:
            return text
        if cprec < prec:
            return "(%s)" % text
        # equal precedence: parenthesize against the associativity
        if right_assoc and not is_right:
            return "(%s)" % text
        if not right_assoc and is_right:
            return "(%s)" % text
        return text

    return "%s %s %s" % (side(f.left, False), _SYMBOL[f.kind], side(f.right, True))


# ---------------------------------------------------------------------------
# Random formulas (seeded test fodder, not part of the enumeration oracle)


def random_formula(sig, max_rank, rng, max_size=12):
    """Seeded random formula over sig with rank <= max_rank."""
    sig = as_signature(sig)
    atoms = list(sig.letters)

    def go(budget, size):
        if size <= 1 or (budget <= 0 and rng.random() < 0.4):
            if atoms and rng.random() < 0.8:
                return Atom(rng.choice(atoms))
            return Bottom()
        choices = ["and", "or"]
        if budget > 0:
            choices += ["impl", "impl", "coimpl", "coimpl"]
        kind = rng.choice(choices)
        half = size // 2
        if kind == "and":
            return And(go(budget, half), go(budget, half))
        if kind == "or":
            return Or(go(budget, half), go(budget, half))
        if kind == "impl":
            return Impl(go(budget - 1, half), go(budget - 1, half))
        return Coimpl(go(budget - 1, half), go(budget - 1, half))

    return go(max_rank, max(2, rng.randint(2, max_size)))


# ---------------------------------------------------------------------------
# Semantic enumeration
#
# Classes are explored by full truth vectors over every world of every
# context model (one bit per world), so implication and co-implication can
# be computed on vectors directly.  The returned list is deduplicated by
# truth at the context points only.


def _model_tables(context):
    models = []
    for pm in context:
        if not any(pm.model is m for m in models):
            models.append(pm.model)
    index = {}
    bit = 0
    for m in models:
        for w in m.worlds:
            index[(id(m), w)] = bit
            bit += 1
    cones = []  # (world bit mask, up mask, down mask), flattened over models
    for m in models:
        for w in m.worlds:
            up = 0
            for v in m.up_set(w):
                up |= 1 << index[(id(m), v)]
            down = 0
            for v in m.down_set(w):
                down |= 1 << index[(id(m), v)]
            cones.append((1 << index[(id(m), w)], up, down))
    return models, index, cones


def enumerate_formulas(sig, max_rank, context, budget=4096):
    """One representative per truth-vector class of rank <= max_rank formulas.

    The list covers every formula of the bounded language: each one agrees
    with some listed representative at every pointed model in context.
    Exploration tracks full truth vectors (one bit per world of every
    context model) so the connectives compose on vectors; the output is
    deduplicated by truth at the context points.  Deterministic for fixed
    inputs; raises EnumerationBudgetError when more than ``budget``
    exploration classes appear.
    """
    sig = as_signature(sig)
    context = list(context)
    if not context:
        raise ValueError("context must be non-empty")
    models, index, cones = _model_tables(context)
    for m in models:
        if not sig <= m.signature:
            raise ValueError("context model does not interpret the signature")

    # recipes[i] reconstructs the representative of class i
    recipes = []
    vecs = []
    seen = {}

    def add(recipe, vec):
        if len(recipes) >= budget:
            raise EnumerationBudgetError(
                "more than %d semantic classes; reduce the rank" % budget
            )
        seen[vec] = len(recipes)
        recipes.append(recipe)
        vecs.append(vec)

    add(("bot",), 0)
    for name in sig:
        v = 0
        for m in models:
            for w in m.valuation[name]:
                v |= 1 << index[(id(m), w)]
        if v not in seen:
            add(("atom", name), v)

    def lattice_close():
        # worklist closure under & and |
        queue = list(range(len(recipes)))
        while queue:
            i = queue.pop()
            a = vecs[i]
            for j in range(len(recipes)):
                b = vecs[j]
                x = a & b
                if x not in seen:
                    add(("and", i, j), x)
                    queue.append(len(recipes) - 1)
                x = a | b
                if x not in seen:
                    add(("or", i, j), x)
                    queue.append(len(recipes) - 1)

    lattice_close()
    for _ in range(max_rank):
        before = len(recipes)
        snapshot = before
        for i in range(snapshot):
            a = vecs[i]
            for j in range(snapshot):
                b = vecs[j]
                bad = a & ~b
                v = 0
                for wbit, up, down in cones:
                    if not (up & bad):
                        v |= wbit
                if v not in seen:
                    add(("impl", i, j), v)
                v = 0
                for wbit, up, down in cones:
                    if down & bad:
                        v |= wbit
                if v not in seen:
                    add(("coimpl", i, j), v)
        lattice_close()
        if len(recipes) == before:
            break  # closed under every connective, higher ranks add nothing

    point_bits = [1 << index[(id(pm.model), pm.point)] for pm in context]

    built = {}
    ctors = {"and": And, "or": Or, "impl": Impl, "coimpl": Coimpl}

    def build(i):
        stack = [i]
        while stack:
            k = stack[-1]
            if k in built:
                stack.pop()
                continue
            recipe = recipes[k]
            kind = recipe[0]
            if kind == "bot":
                built[k] = Bottom()
                stack.pop()
            elif kind == "atom":
                built[k] = Atom(recipe[1])
                stack.pop()
            else:
                pending = [p for p in recipe[1:] if p not in built]
                if pending:
                    stack.extend(pending)
                else:
                    built[k] = ctors[kind](built[recipe[1]], built[recipe[2]])
                    stack.pop()
        return built[i]

    out = []
    seen_points = set()
    for i, v in enumerate(vecs):
        key = tuple(bool(v & bit) for bit in point_bits)
        if key not in seen_points:
            seen_points.add(key)
            out.append(build(i))
    return out
