"""Concrete syntax of causal logic programs.

Programs are ground. A rule is ``[label:] head [:- body].`` or a constraint
``[label:] :- body.``; bodies are nested formulas built from ``,`` (and),
``;`` (or), ``not``, causal literals ``nec({l1,...}, atom)``, ``cont(...)``,
``suff(...)``, plain atoms and causal terms.

A ``.`` written directly in front of a label (no whitespace) is the
application operator of a term; anywhere else it ends the rule. ``·`` is
accepted as application too. A bare identifier in a body is always an atom.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterator

from . import algebra
from .algebra import Apply, Label, Product, Sum, eval_term
from .queries import BUILTINS, Nec, One, Reduced, bind_facts, is_monotonic

AUX_PREFIX = "__aux_"


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"{line}:{col}: {msg}" if line else msg)
        self.line = line
        self.col = col


# --- AST -----------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    """Causal literal ``<query> atom``; ``One`` queries are plain atoms."""

    query: object
    atom: str


@dataclass(frozen=True)
class TermF:
    term: object


@dataclass(frozen=True)
class Conj:
    items: tuple = ()


@dataclass(frozen=True)
class Disj:
    items: tuple = ()


@dataclass(frozen=True)
class Neg:
    item: object


TOP = Conj(())
BOTTOM = Disj(())


@dataclass(frozen=True)
class Rule:
    label: str
    head: str | None
    body: object = TOP

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    @property
    def is_fact(self) -> bool:
        return self.body == TOP


@dataclass(frozen=True)
class Program:
    rules: tuple = ()
    declared_fact_labels: frozenset = field(default_factory=frozenset)

    def __iter__(self) -> Iterator[Rule]:
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def atoms(self) -> set[str]:
        out = set()
        for r in self.rules:
            if r.head is not None:
                out.add(r.head)
            out.update(formula_atoms(r.body))
        return out

    def heads(self) -> set[str]:
        return {r.head for r in self.rules if r.head is not None}


def make_program(rules, facts=None) -> Program:
    """Build a program, deriving fact labels and binding ``suff`` queries."""
    rules = tuple(rules)
    if facts is None:
        facts = frozenset(r.label for r in rules if r.is_fact and r.head is not None and r.label != "1")
    facts = frozenset(facts)
    rules = tuple(replace(r, body=map_literals(r.body, lambda l: Lit(bind_facts(l.query, facts), l.atom)))
                  for r in rules)
    return Program(rules, facts)


def map_literals(f, fn):
    if isinstance(f, Lit):
        return fn(f)
    if isinstance(f, TermF):
        return f
    if isinstance(f, Neg):
        return Neg(map_literals(f.item, fn))
    if isinstance(f, Conj):
        return Conj(tuple(map_literals(x, fn) for x in f.items))
    if isinstance(f, Disj):
        return Disj(tuple(map_literals(x, fn) for x in f.items))
    raise TypeError(f"not a formula: {f!r}")


def iter_literals(f, depth: int = 0):
    """Yield ``(negation_depth, literal)`` pairs."""
    if isinstance(f, Lit):
        yield depth, f
    elif isinstance(f, Neg):
        yield from iter_literals(f.item, depth + 1)
    elif isinstance(f, (Conj, Disj)):
        for x in f.items:
            yield from iter_literals(x, depth)


def formula_atoms(f) -> set[str]:
    return {lit.atom for _, lit in iter_literals(f)}


# --- lexer ---------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+|%[^\n]*)
  | (?P<nl>\n)
  | (?P<if>:-)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<num>[0-9]+)
  | (?P<appdot>\.(?=[A-Za-z0-9_(])|·)
  | (?P<dot>\.)
  | (?P<punct>[:,;(){}*+])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    out = []
    line, line_start, pos = 1, 0, 0
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if not m:
            raise ParseError(f"unexpected character {src[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            text = m.group()
            out.append(Token(text if kind == "punct" else kind, text, line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - line_start + 1))
    return out


# --- parser --------------------------------------------------------------------

_TERM_OPS = ("appdot", "*", "+")


def _term_formula(t) -> TermF:
    # ``1.x`` is how a lone label is written in a body; keep it as the label
    if isinstance(t, Apply) and t.left == algebra.ONE_TERM and isinstance(t.right, Label):
        t = t.right
    return TermF(t)


class _Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.peek()
        raise ParseError(msg, tok.line, tok.col)

    def expect(self, kind: str) -> Token:
        if self.peek().kind != kind:
            self.error(f"expected {kind!r}, found {self.peek().text or 'end of input'!r}")
        return self.next()

    # atoms and labels

    def atom(self) -> str:
        tok = self.expect("ident")
        if tok.text == "not":
            self.error("'not' is a keyword", tok)
        name = tok.text
        if self.peek().kind == "(":
            self.next()
            args = [self._arg()]
            while self.peek().kind == ",":
                self.next()
                args.append(self._arg())
            self.expect(")")
            name = f"{name}({','.join(args)})"
        return name

    def _arg(self) -> str:
        tok = self.next()
        if tok.kind not in ("ident", "num"):
            self.error("expected an argument", tok)
        return tok.text

    def _try_label(self) -> str | None:
        start = self.i
        tok = self.peek()
        if tok.kind == "num" and tok.text == "1" and self.peek(1).kind == ":":
            self.i += 2
            return "1"
        if tok.kind == "ident" and tok.text != "not":
            name = self.atom()
            if self.peek().kind == ":":
                self.next()
                try:
                    return algebra.check_label(name)
                except algebra.AlgebraError as e:
                    self.error(str(e), tok)
        self.i = start
        return None

    # rules

    def program(self) -> list[tuple[str | None, str | None, object]]:
        rules = []
        while self.peek().kind != "eof":
            rules.append(self.rule())
        return rules

    def rule(self):
        label = self._try_label()
        head = None
        body = TOP
        if self.peek().kind == "if":
            self.next()
            body = self.formula()
            self.expect("dot")
            return label, None, body
        tok = self.peek()
        head = self.atom()
        if head.startswith(AUX_PREFIX):
            self.error(f"atoms starting with {AUX_PREFIX!r} are reserved", tok)
        if self.peek().kind == "if":
            self.next()
            body = self.formula()
            self.expect("dot")
        elif self.peek().kind in ("dot", "appdot"):
            self.next()
        else:
            self.error("expected ':-' or '.'")
        return label, head, body

    # formulas

    def formula(self):
        items = [self.conj()]
        while self.peek().kind == ";":
            self.next()
            items.append(self.conj())
        return items[0] if len(items) == 1 else Disj(tuple(items))

    def conj(self):
        items = [self.lit()]
        while self.peek().kind == ",":
            self.next()
            items.append(self.lit())
        return items[0] if len(items) == 1 else Conj(tuple(items))

    def lit(self):
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "not":
            self.next()
            return Neg(self.lit())
        if tok.kind == "(":
            self.next()
            inner = self.formula()
            self.expect(")")
            if self.peek().kind in _TERM_OPS:
                return _term_formula(self.sum(self._as_term(inner, tok)))
            return inner
        if tok.kind == "num":
            return _term_formula(self.sum())
        if tok.kind == "ident" and tok.text in BUILTINS and self.peek(1).kind == "(" and self.peek(2).kind == "{":
            return self.causal_lit()
        if tok.kind == "ident":
            atom = self.atom()
            if self.peek().kind in _TERM_OPS:
                return _term_formula(self.sum(self._label(atom, tok)))
            return Lit(One(), atom)
        self.error(f"unexpected {tok.text or 'end of input'!r}")

    def causal_lit(self):
        kind = self.next().text
        self.expect("(")
        self.expect("{")
        labels = []
        if self.peek().kind != "}":
            labels.append(self._label_name())
            while self.peek().kind == ",":
                self.next()
                labels.append(self._label_name())
        self.expect("}")
        self.expect(",")
        atom = self.atom()
        self.expect(")")
        return Lit(BUILTINS[kind](frozenset(labels)), atom)

    def _label_name(self) -> str:
        tok = self.peek()
        if tok.kind == "num" and tok.text == "1":
            self.next()
            return "1"
        name = self.atom()
        try:
            return algebra.check_label(name)
        except algebra.AlgebraError as e:
            self.error(str(e), tok)

    def _label(self, name: str, tok: Token):
        try:
            return Label(algebra.check_label(name))
        except algebra.AlgebraError as e:
            self.error(str(e), tok)

    def _as_term(self, f, tok):
        if isinstance(f, TermF):
            return f.term
        if isinstance(f, Lit) and isinstance(f.query, One):
            return self._label(f.atom, tok)
        self.error("a causal term was expected", tok)

    # terms: '.' binds tighter than '*', which binds tighter than '+'

    def sum(self, first=None):
        items = [self.prod(first)]
        while self.peek().kind == "+":
            self.next()
            items.append(self.prod())
        return items[0] if len(items) == 1 else Sum(tuple(items))

    def prod(self, first=None):
        items = [self.app(first)]
        while self.peek().kind == "*":
            self.next()
            items.append(self.app())
        return items[0] if len(items) == 1 else Product(tuple(items))

    def app(self, first=None):
        left = first if first is not None else self.primary()
        while self.peek().kind == "appdot":
            self.next()
            left = Apply(left, self.primary())
        return left

    def primary(self):
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            if tok.text == "1":
                return algebra.ONE_TERM
            if tok.text == "0":
                return algebra.ZERO_TERM
            self.error(f"invalid term constant {tok.text!r}", tok)
        if tok.kind == "(":
            self.next()
            t = self.sum()
            self.expect(")")
            return t
        if tok.kind == "ident":
            return self._label(self.atom(), tok)
        self.error(f"expected a term, found {tok.text or 'end of input'!r}")


def parse_program(src: str, default_label: str = "head") -> Program:
    """Parse program text.

    Unlabelled rules get their head as label (``default_label="head"``) or the
    identity label ``1`` (``default_label="one"``); unlabelled constraints get
    ``1``.
    """
    if default_label not in ("head", "one"):
        raise ValueError(f"unknown default label mode {default_label!r}")
    rules = []
    for label, head, body in _Parser(src).program():
        if label is None:
            if head is None or default_label == "one":
                label = "1"
            else:
                try:
                    label = algebra.check_label(head)
                except algebra.AlgebraError as e:
                    raise ParseError(str(e)) from None
        rules.append(Rule(label, head, body))
    return make_program(rules)


def parse_formula(src: str):
    p = _Parser(src)
    f = p.formula()
    if p.peek().kind == "dot":
        p.next()
    p.expect("eof")
    return f


def parse_term(src: str):
    p = _Parser(src)
    t = p.sum()
    p.expect("eof")
    return t


# --- printer -------------------------------------------------------------------


def format_query_literal(lit: Lit) -> str:
    q = lit.query
    if isinstance(q, One):
        return lit.atom
    if isinstance(q, Reduced):
        inner = format_query_literal(Lit(q.base, lit.atom))
        return f"[{inner} @ {algebra.render_value(q.source)}]"
    labels = ",".join(sorted(q.labels))
    return f"{q.name}({{{labels}}}, {lit.atom})"


def format_formula(f, prec: int = 0) -> str:
    if isinstance(f, Lit):
        return format_query_literal(f)
    if isinstance(f, TermF):
        term = algebra.value_to_term(f.term) if isinstance(f.term, algebra.Value) else f.term
        if isinstance(term, Label):
            # a bare identifier would read back as an atom
            return f"1.{term.name}"
        return algebra.render_term(term, 1)
    if isinstance(f, Neg):
        return "not " + format_formula(f.item, 3)
    if isinstance(f, Conj):
        if not f.items:
            return "1"
        s = ", ".join(format_formula(x, 2) for x in f.items)
        return f"({s})" if prec > 2 or (prec == 2 and len(f.items) > 1) else s
    if isinstance(f, Disj):
        if not f.items:
            return "0"
        s = "; ".join(format_formula(x, 1) for x in f.items)
        return f"({s})" if prec >= 1 and len(f.items) > 1 else s
    raise TypeError(f"not a formula: {f!r}")


def format_rule(r: Rule, default_label: str = "head") -> str:
    implicit = "1" if (r.head is None or default_label == "one") else r.head
    prefix = "" if r.label == implicit else f"{r.label}: "
    head = r.head if r.head is not None else ""
    if r.body == TOP and r.head is not None:
        return f"{prefix}{head}."
    sep = " :- " if head else ":- "
    return f"{prefix}{head}{sep}{format_formula(r.body)}."


def print_program(p: Program, default_label: str = "head") -> str:
    return "".join(format_rule(r, default_label) + "\n" for r in p.rules)


# --- normal form ---------------------------------------------------------------


def _const(truth: bool) -> TermF:
    return TermF(algebra.ONE_TERM if truth else algebra.ZERO_TERM)


def _nnf(f, neg: int = 0):
    """Push negation down to literals; ``neg`` is 0, 1 (not) or 2 (not not)."""
    if isinstance(f, Lit):
        return f if neg == 0 else Neg(f) if neg == 1 else Neg(Neg(f))
    if isinstance(f, TermF):
        if neg == 0:
            return f
        nonzero = not eval_term(f.term).is_zero()
        return _const(nonzero if neg == 2 else not nonzero)
    if isinstance(f, Neg):
        return _nnf(f.item, 1 if neg == 2 else neg + 1)
    if isinstance(f, (Conj, Disj)):
        kind = type(f)
        if neg == 1:
            kind = Disj if kind is Conj else Conj
        return kind(tuple(_nnf(x, neg) for x in f.items))
    raise TypeError(f"not a formula: {f!r}")


def _dnf(f) -> list[list]:
    if isinstance(f, Conj):
        out = [[]]
        for x in f.items:
            out = [a + b for a in out for b in _dnf(x)]
        return out
    if isinstance(f, Disj):
        return [c for x in f.items for c in _dnf(x)]
    return [[f]]


def _simplify(items: list):
    out = []
    for x in items:
        if isinstance(x, TermF):
            v = eval_term(x.term)
            if v.is_zero():
                return None
            if v == algebra.ONE:
                continue
        out.append(x)
    return out


def is_flat(r: Rule) -> bool:
    items = r.body.items if isinstance(r.body, Conj) else (r.body,)
    for x in items:
        if isinstance(x, Neg) and isinstance(x.item, Neg):
            x = x.item
        if isinstance(x, Neg):
            x = x.item
        if not isinstance(x, (Lit, TermF)):
            return False
    return r.head is not None


def normalize(p: Program) -> Program:
    """Rewrite into flat rules: conjunctions of (doubly) negated literals and terms.

    Disjunctive bodies are split into rules sharing the label; a constraint
    ``r: :- B`` becomes ``r: __aux_k :- B, not __aux_k``.
    """
    out = []
    aux = 0
    for r in p.rules:
        head = r.head
        extra = []
        if head is None:
            head = f"{AUX_PREFIX}{aux}"
            aux += 1
            extra = [Neg(Lit(One(), head))]
        for conj in _dnf(_nnf(r.body)):
            items = _simplify(conj)
            if items is None:
                continue
            items = items + extra
            body = items[0] if len(items) == 1 else Conj(tuple(items))
            out.append(Rule(r.label, head, body))
    return make_program(out, p.declared_fact_labels)


def body_items(r: Rule) -> tuple:
    return r.body.items if isinstance(r.body, Conj) else (r.body,)


# --- classification ------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    positive: bool
    regular: bool
    monotonic: bool
    normal: bool
    standard: bool
    nec_fragment: bool


def classify(p: Program) -> Classification:
    positive = regular = monotonic = normal = nec_fragment = True
    for r in p.rules:
        if r.head is None:
            positive = False
        for depth, lit in iter_literals(_nnf(r.body)):
            q = lit.query
            if depth:
                positive = False
            if depth >= 2:
                normal = False
            if not isinstance(q, One):
                regular = False
            if not is_monotonic(q):
                monotonic = False
                if depth:
                    normal = False
                if not isinstance(q, Nec):
                    nec_fragment = False
    standard = regular and all(r.label == "1" for r in p.rules)
    return Classification(positive, regular, monotonic, normal, standard, nec_fragment)
