"""Causal values as antichains of causal graphs.

A *cause* is a reflexively and transitively closed set of edges between rule
labels; the empty graph is the top element ``1``. A *value* is a finite
antichain of causes (minimal disjunctive normal form); the empty antichain is
the bottom element ``0``.

Order on causes: ``G <= H`` iff ``edges(G) >= edges(H)`` (more edges means a
more specific, hence smaller, justification).
"""
from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Iterable

RESERVED = frozenset({"0", "1"})
_LABEL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*(\([A-Za-z0-9_]+(,[A-Za-z0-9_]+)*\))?$")


class AlgebraError(ValueError):
    pass


def check_label(name: str) -> str:
    if name in RESERVED:
        raise AlgebraError(f"label {name!r} is reserved")
    if not isinstance(name, str) or not _LABEL_RE.match(name):
        raise AlgebraError(f"invalid label {name!r}")
    return name


def _closure(edges: Iterable[tuple[str, str]], vertices: Iterable[str]) -> frozenset:
    succ: dict[str, set[str]] = {v: set() for v in vertices}
    for a, b in edges:
        succ[a].add(b)
    out = []
    for v in succ:
        seen = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        out.extend((v, y) for y in seen)
    return frozenset(out)


class Cause:
    """A closed causal graph. Immutable and hashable."""

    __slots__ = ("edges", "_vertices", "_hash", "_key")

    def __init__(self, edges: Iterable[tuple[str, str]] = (), *, closed: bool = False):
        edges = frozenset((a, b) for a, b in edges)
        if not closed:
            verts = {a for a, _ in edges} | {b for _, b in edges}
            edges = _closure(edges, verts)
        self.edges = edges
        self._vertices = None
        self._hash = hash(edges)
        self._key = None

    @property
    def vertices(self) -> frozenset:
        if self._vertices is None:
            self._vertices = frozenset(a for a, b in self.edges if a == b)
        return self._vertices

    def sort_key(self):
        if self._key is None:
            self._key = (len(self.edges), tuple(sorted(self.edges)))
        return self._key

    def is_closed(self) -> bool:
        return self.edges == _closure(self.edges, {a for a, _ in self.edges} | {b for _, b in self.edges})

    def __eq__(self, other):
        return isinstance(other, Cause) and self.edges == other.edges

    def __hash__(self):
        return self._hash

    def __le__(self, other: "Cause") -> bool:
        return cause_leq(self, other)

    def __lt__(self, other: "Cause") -> bool:
        return self.edges > other.edges

    def __repr__(self):
        return f"Cause({render_cause(self)})"


EMPTY_CAUSE = Cause((), closed=True)


def label_cause(label: str) -> Cause:
    check_label(label)
    return Cause({(label, label)}, closed=True)


def product_cause(g: Cause, h: Cause) -> Cause:
    if g.edges <= h.edges:
        return h
    if h.edges <= g.edges:
        return g
    edges = g.edges | h.edges
    if g.vertices.isdisjoint(h.vertices):
        return Cause(edges, closed=True)
    return Cause(edges)


def apply_cause(g: Cause, h: Cause) -> Cause:
    """Application ``g . h``: every vertex of ``g`` reaches every vertex of ``h``."""
    if not g.edges:
        return h
    if not h.edges:
        return g
    edges = g.edges | h.edges | {(x, y) for x in g.vertices for y in h.vertices}
    if g.vertices.isdisjoint(h.vertices):
        return Cause(edges, closed=True)
    return Cause(edges)


def cause_leq(g: Cause, h: Cause) -> bool:
    return h.edges <= g.edges


def _maximal(causes: Iterable[Cause]) -> frozenset:
    kept: list[Cause] = []
    for c in sorted(set(causes), key=lambda c: len(c.edges)):
        if not any(k.edges <= c.edges for k in kept):
            kept.append(c)
    return frozenset(kept)


class Value:
    """A causal value: an antichain of causes."""

    __slots__ = ("causes", "_hash")

    def __init__(self, causes: Iterable[Cause] = (), *, antichain: bool = False):
        self.causes = frozenset(causes) if antichain else _maximal(causes)
        self._hash = hash(self.causes)

    @classmethod
    def of(cls, *causes: Cause) -> "Value":
        return cls(causes)

    def is_zero(self) -> bool:
        return not self.causes

    def is_one(self) -> bool:
        return EMPTY_CAUSE in self.causes

    def is_antichain(self) -> bool:
        cs = list(self.causes)
        return not any(a is not b and b.edges <= a.edges for a in cs for b in cs)

    def sorted_causes(self) -> list[Cause]:
        return sorted(self.causes, key=Cause.sort_key)

    def __bool__(self):
        return bool(self.causes)

    def __len__(self):
        return len(self.causes)

    def __iter__(self):
        return iter(self.sorted_causes())

    def __eq__(self, other):
        return isinstance(other, Value) and self.causes == other.causes

    def __hash__(self):
        return self._hash

    def __le__(self, other: "Value") -> bool:
        return value_leq(self, other)

    def __add__(self, other: "Value") -> "Value":
        return sum_value(self, other)

    def __mul__(self, other: "Value") -> "Value":
        return product_value(self, other)

    def __repr__(self):
        return f"Value({render_value(self)})"

    def __str__(self):
        return render_value(self)


ZERO = Value((), antichain=True)
ONE = Value((EMPTY_CAUSE,), antichain=True)


def label_value(label: str) -> Value:
    if label == "1":
        return ONE
    return Value((label_cause(label),), antichain=True)


def sum_value(t: Value, u: Value) -> Value:
    if not t.causes:
        return u
    if not u.causes:
        return t
    return Value(t.causes | u.causes)


def product_value(t: Value, u: Value) -> Value:
    if not t.causes or not u.causes:
        return ZERO
    if t is ONE or t == ONE:
        return u
    if u is ONE or u == ONE:
        return t
    return Value(product_cause(g, h) for g in t.causes for h in u.causes)


def apply_value(t: Value, u: Value) -> Value:
    if not t.causes or not u.causes:
        return ZERO
    if t == ONE:
        return u
    if u == ONE:
        return t
    return Value(apply_cause(g, h) for g in t.causes for h in u.causes)


def sum_all(values: Iterable[Value]) -> Value:
    causes = set()
    for v in values:
        causes.update(v.causes)
    return Value(causes)


def product_all(values: Iterable[Value]) -> Value:
    out = ONE
    for v in values:
        out = product_value(out, v)
        if not out.causes:
            break
    return out


def value_leq(t: Value, u: Value) -> bool:
    return all(any(h.edges <= g.edges for h in u.causes) for g in t.causes)


def value_leq_labelsum(t: Value, labels: Iterable[str]) -> bool:
    """``t <= sum(labels)``: every cause of ``t`` mentions one of the labels."""
    refl = {(l, l) for l in labels}
    return all(not refl.isdisjoint(g.edges) for g in t.causes)


# --- terms -----------------------------------------------------------------


@dataclass(frozen=True)
class Label:
    name: str


@dataclass(frozen=True)
class Product:
    items: tuple = ()


@dataclass(frozen=True)
class Sum:
    items: tuple = ()


@dataclass(frozen=True)
class Apply:
    left: object
    right: object


# 1 and 0 are the empty product and the empty sum
ONE_TERM = Product(())
ZERO_TERM = Sum(())


@functools.lru_cache(maxsize=65536)
def eval_term(t) -> Value:
    if isinstance(t, Value):
        return t
    if isinstance(t, Label):
        return label_value(t.name)
    if isinstance(t, Product):
        return product_all(eval_term(x) for x in t.items)
    if isinstance(t, Sum):
        return sum_all(eval_term(x) for x in t.items)
    if isinstance(t, Apply):
        return apply_value(eval_term(t.left), eval_term(t.right))
    raise TypeError(f"not a term: {t!r}")


def term_labels(t) -> set[str]:
    if isinstance(t, Value):
        return set().union(*(g.vertices for g in t.causes)) if t.causes else set()
    if isinstance(t, Label):
        return {t.name}
    if isinstance(t, (Product, Sum)):
        return set().union(*(term_labels(x) for x in t.items)) if t.items else set()
    if isinstance(t, Apply):
        return term_labels(t.left) | term_labels(t.right)
    raise TypeError(f"not a term: {t!r}")


# --- rendering ---------------------------------------------------------------

APPLY_SYMBOL = "·"


def _sccs(vertices, edges):
    """Group vertices into strongly connected components of a closed graph."""
    comps = {}
    for v in sorted(vertices):
        if v in comps:
            continue
        comp = frozenset(w for w in vertices if (v, w) in edges and (w, v) in edges)
        for w in comp:
            comps[w] = comp
    return comps


def hasse_edges(g: Cause) -> list[tuple[str, str]]:
    """A minimal edge list whose closure is ``g``.

    On acyclic graphs this is the transitive reduction. Each strongly connected
    component is replaced by a cycle through its members in sorted order.
    """
    verts = g.vertices
    edges = g.edges
    comps = _sccs(verts, edges)
    reps = {v: min(c) for v, c in comps.items()}
    out = set()
    for comp in set(comps.values()):
        members = sorted(comp)
        if len(members) > 1:
            for a, b in zip(members, members[1:] + members[:1]):
                out.add((a, b))
    reach = {(reps[a], reps[b]) for a, b in edges if reps[a] != reps[b]}
    rep_set = set(reps.values())
    for a, b in reach:
        if not any((a, z) in reach and (z, b) in reach for z in rep_set if z not in (a, b)):
            out.add((a, b))
    return sorted(out)


def _chains(g: Cause) -> list[list[str]]:
    hasse = hasse_edges(g)
    verts = sorted(g.vertices)
    succ = {v: [] for v in verts}
    pred = {v: [] for v in verts}
    for a, b in hasse:
        succ[a].append(b)
        pred[b].append(a)
    acyclic = all((b, a) not in g.edges for a, b in hasse)
    if not acyclic:
        chains = [[a, b] for a, b in hasse]
        covered = {x for e in hasse for x in e}
        chains.extend([v] for v in verts if v not in covered)
        return sorted(chains)
    chains = []

    def walk(path):
        nxt = succ[path[-1]]
        if not nxt:
            chains.append(list(path))
            return
        for n in sorted(nxt):
            walk(path + [n])

    for v in verts:
        if not pred[v]:
            walk([v])
    return sorted(chains)


def _is_acyclic(g: Cause) -> bool:
    return all(a == b or (b, a) not in g.edges for a, b in g.edges)


def _down_term(g: Cause, sink: str):
    """Term for the subgraph of ``g`` below and including ``sink``."""
    below = sorted(a for a, b in g.edges if b == sink and a != sink)
    if not below:
        return Label(sink)
    keep = set(below)
    sub = Cause(((a, b) for a, b in g.edges if a in keep and b in keep), closed=True)
    return Apply(_acyclic_term(sub), Label(sink))


def _acyclic_term(g: Cause):
    sinks = sorted(v for v in g.vertices if not any(a == v and b != v for a, b in g.edges))
    parts = [_down_term(g, s) for s in sinks]
    return parts[0] if len(parts) == 1 else Product(tuple(parts))


def cause_to_term(g: Cause):
    """A term denoting exactly ``g``.

    Acyclic causes are written sink first, so shared suffixes are factored:
    ``(a.b * c).d``. Cyclic ones fall back to a product of chains.
    """
    if not g.edges:
        return ONE_TERM
    if _is_acyclic(g):
        return _acyclic_term(g)
    parts = []
    for chain in _chains(g):
        term = Label(chain[0])
        for name in chain[1:]:
            term = Apply(term, Label(name))
        parts.append(term)
    return parts[0] if len(parts) == 1 else Product(tuple(parts))


def render_cause(g: Cause) -> str:
    return render_term(cause_to_term(g), apply_symbol=APPLY_SYMBOL)


def render_value(t: Value) -> str:
    if not t.causes:
        return "0"
    return " + ".join(render_cause(g) for g in t.sorted_causes())


def value_to_term(t: Value):
    """A term whose evaluation is exactly ``t``."""
    if not t.causes:
        return ZERO_TERM
    parts = tuple(cause_to_term(g) for g in t.sorted_causes())
    return parts[0] if len(parts) == 1 else Sum(parts)


def render_term(t, _prec: int = 0, apply_symbol: str = ".") -> str:
    """Print a term with precedence ``.`` > ``*`` > ``+`` (ASCII ``.`` for application)."""
    if isinstance(t, Value):
        t = value_to_term(t)
    if isinstance(t, Label):
        return t.name
    if isinstance(t, Product):
        if not t.items:
            return "1"
        if len(t.items) == 1:
            return render_term(t.items[0], _prec, apply_symbol)
        s = " * ".join(render_term(x, 2, apply_symbol) for x in t.items)
        return f"({s})" if _prec > 2 else s
    if isinstance(t, Sum):
        if not t.items:
            return "0"
        if len(t.items) == 1:
            return render_term(t.items[0], _prec, apply_symbol)
        s = " + ".join(render_term(x, 1, apply_symbol) for x in t.items)
        return f"({s})" if _prec > 1 else s
    if isinstance(t, Apply):
        s = f"{render_term(t.left, 3, apply_symbol)}{apply_symbol}{render_term(t.right, 4, apply_symbol)}"
        return f"({s})" if _prec > 3 else s
    raise TypeError(f"not a term: {t!r}")


# --- serialisation -------------------------------------------------------------


def cause_to_json(g: Cause) -> list:
    return [list(e) for e in sorted(g.edges)]


def cause_from_json(data) -> Cause:
    g = Cause((tuple(e) for e in data), closed=True)
    if not g.is_closed():
        raise AlgebraError(f"cause is not closed: {data!r}")
    return g


def value_to_json(t: Value) -> list:
    return [cause_to_json(g) for g in t.sorted_causes()]


def value_from_json(data) -> Value:
    return Value(cause_from_json(c) for c in data)
