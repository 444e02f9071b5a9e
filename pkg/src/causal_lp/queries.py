"""Causal queries: functions of a candidate cause and the atom's full value."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .algebra import ONE, Cause, Value, value_leq_labelsum


@dataclass(frozen=True)
class One:
    """The trivial query; ``one`` literals are plain atoms."""

    name = "one"


@dataclass(frozen=True)
class Nec:
    """Every cause of the atom involves one of ``labels``."""

    labels: frozenset
    name = "nec"


@dataclass(frozen=True)
class Cont:
    """The particular cause involves one of ``labels``."""

    labels: frozenset
    name = "cont"


@dataclass(frozen=True)
class Suff:
    """Every fact label occurring in the cause belongs to ``labels``.

    ``facts`` is the set of fact labels declared by the enclosing program; it is
    bound when the program is parsed or normalized.
    """

    labels: frozenset
    facts: frozenset | None = None
    name = "suff"


@dataclass(frozen=True)
class Reduced:
    """``base`` frozen at ``source``: accepts weakenings of the passing causes."""

    base: object
    passing: frozenset
    source: Value
    name = "reduced"


@dataclass(frozen=True)
class FromMQuery:
    """Query wrapper around a monotonic cause predicate; ignores the value."""

    fn: Callable[[Cause], bool] = field(compare=False)
    name = "mquery"


BUILTINS = {"nec": Nec, "cont": Cont, "suff": Suff}


class QueryError(ValueError):
    pass


def eval_query(q, g: Cause, t: Value) -> bool:
    if isinstance(q, One):
        return True
    if isinstance(q, Nec):
        return value_leq_labelsum(t, q.labels)
    if isinstance(q, Cont):
        return not q.labels.isdisjoint(g.vertices)
    if isinstance(q, Suff):
        if q.facts is None:
            raise QueryError("suff query evaluated before fact labels were bound")
        return (g.vertices & q.facts) <= q.labels
    if isinstance(q, Reduced):
        return any(p.edges >= g.edges for p in q.passing)
    if isinstance(q, FromMQuery):
        return bool(q.fn(g))
    raise TypeError(f"unknown query {q!r}")


def is_monotonic(q) -> bool:
    if isinstance(q, (One, Suff, Reduced, FromMQuery)):
        return True
    if isinstance(q, (Nec, Cont)):
        return False
    raise TypeError(f"unknown query {q!r}")


def reduce_query(q, t: Value, mode: str = "uniform"):
    """Freeze ``q`` at value ``t``.

    In ``selective`` mode monotonic queries are returned unchanged.
    """
    if mode == "selective" and is_monotonic(q):
        return q
    if mode not in ("uniform", "selective"):
        raise ValueError(f"unknown reduct mode {mode!r}")
    passing = frozenset(g for g in t.causes if eval_query(q, g, t))
    return Reduced(q, passing, t)


def bind_facts(q, facts: frozenset):
    if isinstance(q, Suff) and q.facts is None:
        return Suff(q.labels, frozenset(facts))
    return q


def to_mquery(q) -> Callable[[Cause], bool]:
    if not is_monotonic(q):
        raise QueryError(f"{q.name} is not monotonic")
    return lambda g: eval_query(q, g, ONE)


def from_mquery(phi: Callable[[Cause], bool]) -> FromMQuery:
    return FromMQuery(phi)
