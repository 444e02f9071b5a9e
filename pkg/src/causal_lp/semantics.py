"""Interpretations, valuation, direct consequences, reducts and model checks."""
from __future__ import annotations

from collections.abc import Mapping
from typing import Iterable

from .algebra import (
    ONE,
    ZERO,
    Value,
    apply_value,
    eval_term,
    label_value,
    product_value,
    sum_value,
    value_leq,
    value_to_term,
)
from .lang import TOP, Conj, Disj, Lit, Neg, Program, Rule, TermF, iter_literals, make_program
from .queries import eval_query, is_monotonic, reduce_query


class Interpretation(Mapping):
    """Immutable atom -> Value map; atoms not listed read as 0."""

    __slots__ = ("_map", "_hash")

    def __init__(self, values: Mapping | Iterable = ()):
        items = values.items() if isinstance(values, Mapping) else values
        self._map = {a: v for a, v in items if v.causes}
        self._hash = None

    def __getitem__(self, atom: str) -> Value:
        return self._map.get(atom, ZERO)

    def __iter__(self):
        return iter(sorted(self._map))

    def __len__(self):
        return len(self._map)

    def __contains__(self, atom):
        return atom in self._map

    def __eq__(self, other):
        if isinstance(other, Interpretation):
            return self._map == other._map
        if isinstance(other, Mapping):
            return self == Interpretation(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __le__(self, other: "Interpretation") -> bool:
        return all(value_leq(v, other[a]) for a, v in self._map.items())

    def merge(self, other: Mapping) -> "Interpretation":
        out = dict(self._map)
        for a, v in other.items():
            out[a] = sum_value(out.get(a, ZERO), v)
        return Interpretation(out)

    def restrict(self, atoms) -> "Interpretation":
        return Interpretation({a: v for a, v in self._map.items() if a in atoms})

    def __repr__(self):
        inner = ", ".join(f"{a}: {v}" for a, v in sorted(self._map.items()))
        return f"Interpretation({{{inner}}})"


BOTTOM_I = Interpretation()


def eval_literal(interp: Mapping, lit: Lit) -> Value:
    t = interp.get(lit.atom, ZERO) if not isinstance(interp, Interpretation) else interp[lit.atom]
    if not t.causes:
        return ZERO
    q = lit.query
    if q.name == "one":
        return t
    passing = [g for g in t.causes if eval_query(q, g, t)]
    if len(passing) == len(t.causes):
        return t
    return Value(passing, antichain=True)


def eval_formula(interp: Mapping, f) -> Value:
    if isinstance(f, Lit):
        return eval_literal(interp, f)
    if isinstance(f, TermF):
        return eval_term(f.term)
    if isinstance(f, Conj):
        out = ONE
        for x in f.items:
            out = product_value(out, eval_formula(interp, x))
            if not out.causes:
                return ZERO
        return out
    if isinstance(f, Disj):
        out = ZERO
        for x in f.items:
            out = sum_value(out, eval_formula(interp, x))
        return out
    if isinstance(f, Neg):
        return ONE if eval_formula(interp, f.item).is_zero() else ZERO
    raise TypeError(f"not a formula: {f!r}")


def rule_value(interp: Mapping, r: Rule) -> Value:
    """``I(body) . label``: the contribution of ``r`` to its head."""
    return apply_value(eval_formula(interp, r.body), label_value(r.label))


def satisfies_rule(interp: Mapping, r: Rule) -> bool:
    v = rule_value(interp, r)
    if r.head is None:
        return v.is_zero()
    return value_leq(v, _get(interp, r.head))


def is_model(interp: Mapping, p: Program | Iterable[Rule]) -> bool:
    return all(satisfies_rule(interp, r) for r in _rules(p))


def _get(interp: Mapping, atom: str) -> Value:
    return interp[atom] if isinstance(interp, Interpretation) else interp.get(atom, ZERO)


def _rules(p) -> tuple:
    return p.rules if isinstance(p, Program) else tuple(p)


# --- direct consequences -------------------------------------------------------


class NotPositiveMonotonic(ValueError):
    pass


def check_positive_monotonic(rules) -> None:
    for r in rules:
        if r.head is None:
            raise NotPositiveMonotonic(f"constraint in a positive program: {r!r}")
        for depth, lit in iter_literals(r.body):
            if depth:
                raise NotPositiveMonotonic(f"negation in rule {r.label}: {r!r}")
            if not is_monotonic(lit.query):
                raise NotPositiveMonotonic(f"non-monotonic literal {lit.query.name} on {lit.atom}")


def tp_step(p, interp: Mapping) -> Interpretation:
    out: dict[str, Value] = {}
    for r in _rules(p):
        v = rule_value(interp, r)
        if v.causes:
            out[r.head] = sum_value(out.get(r.head, ZERO), v)
    return Interpretation(out)


def tp_trace(p) -> list[Interpretation]:
    """``[T^0, T^1, ..., T^k]`` with ``T^k`` the least fixpoint."""
    rules = _rules(p)
    check_positive_monotonic(rules)
    trace = [BOTTOM_I]
    cap = len(rules) + 1
    while True:
        nxt = tp_step(rules, trace[-1])
        if nxt == trace[-1]:
            return trace
        trace.append(nxt)
        if len(trace) > cap + 1:
            raise AssertionError(f"no fixpoint after {cap} iterations of T_P")


def least_model(p, stats: dict | None = None) -> Interpretation:
    rules = _rules(p)
    check_positive_monotonic(rules)
    cur = BOTTOM_I
    cap = len(rules) + 1
    for step in range(cap + 1):
        nxt = tp_step(rules, cur)
        if stats is not None:
            stats["tp_iterations"] = stats.get("tp_iterations", 0) + 1
        if nxt == cur:
            return cur
        cur = nxt
    raise AssertionError(f"no fixpoint after {cap} iterations of T_P")


# --- reducts -------------------------------------------------------------------

_TRUE = TermF(value_to_term(ONE))
_FALSE = TermF(value_to_term(ZERO))


def reduct_formula(f, interp: Mapping, mode: str = "uniform"):
    """Reduct of a nested formula; negations become the constants 1 or 0."""
    if isinstance(f, Lit):
        q = reduce_query(f.query, _get(interp, f.atom), mode)
        return f if q is f.query else Lit(q, f.atom)
    if isinstance(f, TermF):
        return f
    if isinstance(f, Conj):
        return Conj(tuple(reduct_formula(x, interp, mode) for x in f.items))
    if isinstance(f, Disj):
        return Disj(tuple(reduct_formula(x, interp, mode) for x in f.items))
    if isinstance(f, Neg):
        inner = reduct_formula(f.item, interp, mode)
        return _FALSE if eval_formula(interp, inner).causes else _TRUE
    raise TypeError(f"not a formula: {f!r}")


def _simplify(f):
    """Drop constant 1 conjuncts; return None for a body equal to 0."""
    if isinstance(f, TermF) and f == _FALSE:
        return None
    if isinstance(f, Conj):
        items = []
        for x in f.items:
            x = _simplify(x)
            if x is None:
                return None
            if x != _TRUE and x != TOP:
                items.append(x)
        if len(items) == 1:
            return items[0]
        return Conj(tuple(items))
    if isinstance(f, Disj):
        items = [y for y in (_simplify(x) for x in f.items) if y is not None]
        if not items:
            return None
        return items[0] if len(items) == 1 else Disj(tuple(items))
    if f == _TRUE:
        return TOP
    return f


def reduct(p: Program, interp: Mapping, mode: str = "uniform") -> Program:
    """Positive monotonic program ``P^I``.

    Rules with an unsatisfied negative or consistent literal are removed, the
    remaining negations are dropped and every causal literal is frozen at
    ``I(atom)`` (only the non-monotonic ones in ``selective`` mode).
    Constraints are kept out: they are checked directly by the callers.
    """
    out = []
    for r in p.rules:
        if r.head is None:
            continue
        body = _simplify(reduct_formula(r.body, interp, mode))
        if body is None:
            continue
        out.append(Rule(r.label, r.head, body))
    return Program(tuple(out), p.declared_fact_labels)


def is_stable_model(p: Program, interp: Mapping, mode: str = "uniform") -> bool:
    interp = interp if isinstance(interp, Interpretation) else Interpretation(interp)
    for r in p.rules:
        if r.head is None and not satisfies_rule(interp, r):
            return False
    return least_model(reduct(p, interp, mode)) == interp


def is_supported(p: Program, interp: Mapping) -> bool:
    """Model in which every cause of every atom is backed by some rule."""
    interp = interp if isinstance(interp, Interpretation) else Interpretation(interp)
    if not is_model(interp, p):
        return False
    contributions: dict[str, list[Value]] = {}
    for r in p.rules:
        if r.head is not None:
            contributions.setdefault(r.head, []).append(rule_value(interp, r))
    for atom, value in interp.items():
        for g in value.causes:
            if not any(any(h.edges <= g.edges for h in v.causes) for v in contributions.get(atom, ())):
                return False
    return True


def two_valued(interp: Mapping, atoms: Iterable[str] = ()) -> dict[str, int]:
    keys = set(atoms) | set(interp)
    return {a: int(bool(_get(interp, a).causes)) for a in sorted(keys)}


def valued_facts(interp: Mapping) -> list[Rule]:
    """Rules ``1: atom :- <value>`` that reproduce ``interp`` verbatim."""
    return [Rule("1", a, TermF(value_to_term(v))) for a, v in sorted(interp.items()) if v.causes]


def as_program(rules, like: Program | None = None) -> Program:
    facts = like.declared_fact_labels if like is not None else None
    return make_program(rules, facts)
