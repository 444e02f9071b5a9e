"""Hypothesis strategies and a reference evaluator for causal terms."""
from __future__ import annotations

import itertools
import random

import networkx as nx
from hypothesis import strategies as st

from causal_lp.algebra import Apply, Cause, Label, Product, Sum, Value
from causal_lp.lang import Conj, Disj, Lit, Neg, Rule, TermF, make_program
from causal_lp.queries import Cont, Nec, One
from causal_lp.semantics import Interpretation

LABELS = ("a", "b", "c", "d", "e")

labels = st.sampled_from(LABELS)


def sum_free_terms(max_leaves: int = 6):
    return st.recursive(
        st.builds(Label, labels) | st.just(Product(())),
        lambda sub: st.builds(lambda xs: Product(tuple(xs)), st.lists(sub, min_size=2, max_size=3))
        | st.builds(Apply, sub, sub),
        max_leaves=max_leaves,
    )


def terms(max_leaves: int = 8):
    return st.recursive(
        st.builds(Label, labels) | st.sampled_from([Product(()), Sum(())]),
        lambda sub: st.builds(lambda xs: Product(tuple(xs)), st.lists(sub, min_size=2, max_size=3))
        | st.builds(lambda xs: Sum(tuple(xs)), st.lists(sub, min_size=2, max_size=3))
        | st.builds(Apply, sub, sub),
        max_leaves=max_leaves,
    )


@st.composite
def causes(draw, max_vertices: int = 5, acyclic: bool = False):
    verts = draw(st.lists(labels, min_size=0, max_size=max_vertices, unique=True))
    pairs = [(x, y) for x in verts for y in verts if x != y and (not acyclic or x < y)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=6, unique=True)) if pairs else []
    g = nx.DiGraph()
    g.add_nodes_from(verts)
    g.add_edges_from(chosen)
    closed = nx.transitive_closure(g, reflexive=True)
    return Cause(closed.edges(), closed=True)


def values(max_causes: int = 4):
    return st.lists(causes(), max_size=max_causes).map(Value)


# --- reference evaluation ------------------------------------------------------
# Terms evaluate to sets of networkx graphs; maximality is computed at the end
# only, so intermediate non-antichains are allowed.


def _closed(g: nx.DiGraph) -> frozenset:
    return frozenset(nx.transitive_closure(g, reflexive=True).edges())


def _graph(edges) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_edges_from(edges)
    return g


def ref_eval(t) -> set[frozenset]:
    if isinstance(t, Label):
        return {frozenset({(t.name, t.name)})}
    if isinstance(t, Sum):
        out = set()
        for x in t.items:
            out |= ref_eval(x)
        return out
    if isinstance(t, Product):
        acc = {frozenset()}
        for x in t.items:
            acc = {_closed(_graph(a | b)) for a in acc for b in ref_eval(x)}
        return acc
    if isinstance(t, Apply):
        out = set()
        for a in ref_eval(t.left):
            for b in ref_eval(t.right):
                va = {x for x, _ in a}
                vb = {x for x, _ in b}
                out.add(_closed(_graph(a | b | set(itertools.product(va, vb)))))
        return out
    raise TypeError(t)


def ref_maximal(graphs: set[frozenset]) -> set[frozenset]:
    return {g for g in graphs if not any(h < g for h in graphs)}


def ref_value(t) -> Value:
    return Value((Cause(g, closed=True) for g in ref_maximal(ref_eval(t))), antichain=True)


# --- random programs -----------------------------------------------------------

ATOMS = ("p", "q", "r", "s")


@st.composite
def formulas(draw, depth: int = 2, queries=("one",)):
    atom = draw(st.sampled_from(ATOMS))
    kind = draw(st.sampled_from(queries))
    lab = frozenset(draw(st.lists(st.sampled_from(("r1", "r2", "r3")), min_size=1, max_size=2)))
    lit = Lit(One() if kind == "one" else Nec(lab) if kind == "nec" else Cont(lab), atom)
    if depth == 0:
        return lit
    op = draw(st.sampled_from(("lit", "lit", "neg", "and", "or", "term")))
    if op == "lit":
        return lit
    if op == "neg":
        return Neg(draw(formulas(depth - 1, queries)))
    if op == "term":
        return TermF(draw(terms(3)))
    items = tuple(draw(st.lists(formulas(depth - 1, queries), min_size=2, max_size=3)))
    return Conj(items) if op == "and" else Disj(items)


@st.composite
def interpretations(draw):
    return Interpretation({a: draw(values(3)) for a in ATOMS})


def random_nested_program(rng: random.Random, n_rules: int = 5, queries=("one",)):
    """Small nested program over ATOMS with labels r1..r3."""
    def lit():
        atom = rng.choice(ATOMS)
        kind = rng.choice(queries)
        lab = frozenset(rng.sample(("r1", "r2", "r3"), rng.randint(1, 2)))
        return Lit(One() if kind == "one" else Nec(lab) if kind == "nec" else Cont(lab), atom)

    def formula(depth):
        if depth == 0 or rng.random() < 0.4:
            return lit()
        op = rng.choice(("neg", "and", "or"))
        if op == "neg":
            return Neg(formula(depth - 1))
        items = tuple(formula(depth - 1) for _ in range(rng.randint(2, 3)))
        return Conj(items) if op == "and" else Disj(items)

    rules = []
    for i in range(n_rules):
        label = rng.choice(("r1", "r2", "r3", "1"))
        if rng.random() < 0.3:
            rules.append(Rule(label, rng.choice(ATOMS)))
        elif rng.random() < 0.1:
            rules.append(Rule("1", None, formula(2)))
        else:
            rules.append(Rule(label, rng.choice(ATOMS), formula(2)))
    return make_program(rules)
