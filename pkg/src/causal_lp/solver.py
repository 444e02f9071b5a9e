"""Stable-model enumeration.

Programs are solved component by component: the strongly connected
components of the atom dependency graph form a splitting sequence, so each
component is solved with the values of lower components fixed. Within a
component, literals on lower atoms are constants.

* ``solve_stratified``: every component is positive and monotonic once lower
  atoms are fixed, so each has exactly one least model.
* ``solve_guess_check``: components whose only non-monotonic literals are
  ``nec`` literals and negations are solved by guessing the truth of each
  negation and each ``nec`` literal, computing the least model of the resulting
  regular program and checking the guesses against it.
* ``solve_gamma``: a sound but incomplete fallback iterating the reduct.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

import networkx as nx

from .algebra import ONE, Value, product_value, value_leq_labelsum
from .lang import (
    Conj,
    Disj,
    Lit,
    Neg,
    Program,
    Rule,
    TermF,
    body_items,
    is_flat,
    iter_literals,
    normalize,
)
from .queries import Nec, One, is_monotonic
from .semantics import (
    BOTTOM_I,
    Interpretation,
    eval_formula,
    is_stable_model,
    least_model,
    satisfies_rule,
    reduct,
    valued_facts,
)


class SolverError(ValueError):
    pass


@dataclass
class SolveReport:
    models: list
    method: str
    complete: bool
    stats: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.models)


# --- dependencies --------------------------------------------------------------


@dataclass
class DependencyInfo:
    graph: nx.DiGraph
    components: list  # frozensets of atoms, bottom-up
    component_of: dict
    rank: dict | None
    witness: list | None

    @property
    def stratified(self) -> bool:
        return self.rank is not None

    def strata(self) -> list[list[str]]:
        if self.rank is None:
            return []
        out: dict[int, list[str]] = {}
        for a, r in self.rank.items():
            out.setdefault(r, []).append(a)
        return [sorted(out[k]) for k in sorted(out)]


def _is_strict(depth: int, lit: Lit) -> bool:
    return depth > 0 or not is_monotonic(lit.query)


def dependency_graph(p: Program) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(sorted(p.atoms()))
    for r in p.rules:
        if r.head is None:
            continue
        for depth, lit in iter_literals(r.body):
            strict = _is_strict(depth, lit)
            if g.has_edge(lit.atom, r.head):
                g[lit.atom][r.head]["strict"] |= strict
            else:
                g.add_edge(lit.atom, r.head, strict=strict)
    return g


def stratify(p: Program) -> DependencyInfo:
    g = dependency_graph(p)
    cond = nx.condensation(g)
    members = {n: frozenset(cond.nodes[n]["members"]) for n in cond.nodes}
    order = list(nx.lexicographical_topological_sort(cond, key=lambda n: min(members[n])))
    components = [members[n] for n in order]
    component_of = {a: i for i, comp in enumerate(components) for a in comp}

    witness = None
    for b, h, data in sorted(g.edges(data=True)):
        if data["strict"] and component_of[b] == component_of[h]:
            sub = g.subgraph(components[component_of[h]])
            witness = [b] + nx.shortest_path(sub, h, b) if b != h else [b, b]
            break
    rank = None
    if witness is None:
        comp_rank: list[int] = []
        for i, comp in enumerate(components):
            r = 0
            for a in comp:
                for b in g.predecessors(a):
                    j = component_of[b]
                    if j != i:
                        r = max(r, comp_rank[j] + (1 if g[b][a]["strict"] else 0))
            comp_rank.append(r)
        rank = {a: comp_rank[component_of[a]] for a in g.nodes}
    return DependencyInfo(g, components, component_of, rank, witness)


# --- component machinery -------------------------------------------------------


def _flat(p: Program) -> Program:
    if all(is_flat(r) for r in p.rules):
        return p
    return normalize(p)


def _prepare(p: Program) -> tuple[Program, tuple[Rule, ...]]:
    """Flat rules plus the constraints, which are checked on candidate models."""
    constraints = tuple(r for r in p.rules if r.head is None)
    rules = Program(tuple(r for r in p.rules if r.head is not None), p.declared_fact_labels)
    return _flat(rules), constraints


def _admissible(models, constraints) -> list[Interpretation]:
    return [m for m in models if all(satisfies_rule(m, c) for c in constraints)]


def _localize(rules: Iterable[Rule], comp: frozenset, lower: Interpretation) -> list[Rule]:
    """Replace every body item not mentioning ``comp`` by its value under ``lower``."""
    out = []
    for r in rules:
        const = ONE
        kept = []
        for item in body_items(r):
            atoms = {lit.atom for _, lit in iter_literals(item)}
            if atoms & comp:
                kept.append(item)
                continue
            const = product_value(const, eval_formula(lower, item))
            if not const.causes:
                break
        if not const.causes:
            continue
        if const != ONE:
            kept.append(TermF(const))
        body = kept[0] if len(kept) == 1 else Conj(tuple(kept))
        out.append(Rule(r.label, r.head, body))
    return out


def _item_kind(item) -> tuple[int, Lit | None]:
    depth = 0
    while isinstance(item, Neg):
        depth += 1
        item = item.item
    return depth, item if isinstance(item, Lit) else None


def _local_positive(rules: list[Rule]) -> bool:
    for r in rules:
        for item in body_items(r):
            depth, lit = _item_kind(item)
            if lit is not None and _is_strict(depth, lit):
                return False
    return True


def _local_guessable(rules: list[Rule]) -> bool:
    for r in rules:
        for item in body_items(r):
            depth, lit = _item_kind(item)
            if lit is not None and not depth and not is_monotonic(lit.query) \
                    and not isinstance(lit.query, Nec):
                return False
    return True


def _solve_least(rules: list[Rule], stats: dict) -> list[Interpretation]:
    return [least_model(rules, stats)]


def _solve_guess(rules: list[Rule], stats: dict) -> list[Interpretation]:
    """Guess negations and ``nec`` literals, then check the guess (NP procedure)."""
    slots = []  # (rule index, item index, kind)
    for i, r in enumerate(rules):
        for j, item in enumerate(body_items(r)):
            depth, lit = _item_kind(item)
            if lit is None:
                continue
            if depth:
                slots.append((i, j, "neg"))
            elif isinstance(lit.query, Nec):
                slots.append((i, j, "nec"))
    found: list[Interpretation] = []
    seen = set()
    for guess in itertools.product((True, False), repeat=len(slots)):
        stats["guesses_tried"] = stats.get("guesses_tried", 0) + 1
        chosen = dict(zip(((i, j) for i, j, _ in slots), guess))
        positive = []
        for i, r in enumerate(rules):
            items = []
            alive = True
            for j, item in enumerate(body_items(r)):
                if (i, j) not in chosen:
                    items.append(item)
                    continue
                if not chosen[(i, j)]:
                    alive = False
                    break
                depth, lit = _item_kind(item)
                if not depth:
                    items.append(Lit(One(), lit.atom))
            if alive:
                body = items[0] if len(items) == 1 else Conj(tuple(items))
                positive.append(Rule(r.label, r.head, body))
        model = least_model(positive, stats)
        ok = True
        for (i, j, kind), g in zip(slots, guess):
            item = body_items(rules[i])[j]
            if kind == "neg":
                holds = bool(eval_formula(model, item).causes)
            else:
                lit = _item_kind(item)[1]
                holds = value_leq_labelsum(model[lit.atom], lit.query.labels)
            if holds != g:
                ok = False
                break
        if ok and model not in seen:
            seen.add(model)
            found.append(model)
    return found


def _solve_component(args) -> list[Interpretation]:
    allow_guess, rules, comp, lower, stats = args
    lrules = _localize(rules, comp, lower)
    local = _choose_local(lrules, allow_guess)
    return [lower.merge(m) for m in local(lrules, stats)]


def _by_component(p: Program, info: DependencyInfo) -> dict[int, list[Rule]]:
    groups: dict[int, list[Rule]] = {}
    for r in p.rules:
        groups.setdefault(info.component_of[r.head], []).append(r)
    return groups


def _choose_local(rules: list[Rule], allow_guess: bool) -> Callable:
    if _local_positive(rules):
        return _solve_least
    if allow_guess and _local_guessable(rules):
        return _solve_guess
    raise SolverError("component needs a non-monotonic literal other than nec")


def _solve_components(p: Program, info: DependencyInfo, allow_guess: bool, stats: dict,
                      jobs: int = 1) -> list[Interpretation]:
    groups = _by_component(p, info)
    partials = [BOTTOM_I]
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        for idx, comp in enumerate(info.components):
            rules = groups.get(idx)
            if not rules:
                continue
            tasks = [(allow_guess, rules, comp, lower, {}) for lower in partials]
            if pool is not None and len(tasks) > 1:
                results = list(pool.map(_solve_component, tasks))
                # worker stats are lost with the process; count tasks instead
                stats["components_solved"] = stats.get("components_solved", 0) + len(tasks)
            else:
                results = []
                for t in tasks:
                    results.append(_solve_component(t))
                    for k, v in t[4].items():
                        stats[k] = stats.get(k, 0) + v
            nxt, seen = [], set()
            for models in results:
                for m in models:
                    if m not in seen:
                        seen.add(m)
                        nxt.append(m)
            partials = nxt
            if not partials:
                break
    finally:
        if pool is not None:
            pool.shutdown()
    return partials


def _finish(models, method, complete, stats, start, max_models=None) -> SolveReport:
    stats["wall_time"] = time.perf_counter() - start
    stats.setdefault("tp_iterations", 0)
    stats.setdefault("guesses_tried", 0)
    if max_models is not None:
        models = models[:max_models]
    return SolveReport(list(models), method, complete, stats)


# --- public solvers ------------------------------------------------------------


def solve_stratified(p: Program, mode: str = "uniform", verify: bool = True,
                     max_models: int | None = None, jobs: int = 1) -> SolveReport:
    start = time.perf_counter()
    p, constraints = _prepare(p)
    info = stratify(p)
    if not info.stratified:
        raise SolverError("program is not stratified: " + " -> ".join(info.witness))
    stats: dict = {}
    models = _solve_components(p, info, False, stats, jobs)
    if len(models) != 1:
        raise AssertionError(f"stratified program produced {len(models)} models")
    if verify and not is_stable_model(p, models[0], mode):
        raise AssertionError("stratified evaluation produced a non-stable interpretation")
    models = _admissible(models, constraints)
    return _finish(models, "stratified", True, stats, start, max_models)


def guess_check_applicable(p: Program) -> bool:
    p, _ = _prepare(p)
    info = stratify(p)
    for idx, rules in _by_component(p, info).items():
        comp = info.components[idx]
        for r in rules:
            for depth, lit in iter_literals(r.body):
                if lit.atom in comp and not depth and not is_monotonic(lit.query) \
                        and not isinstance(lit.query, Nec):
                    return False
    return True


def solve_guess_check(p: Program, split: bool = True, mode: str = "uniform", verify: bool = False,
                      max_models: int | None = None, jobs: int = 1) -> SolveReport:
    """Enumerate all stable models of a program whose non-monotonic literals are ``nec``.

    With ``split=False`` the whole program is one guess space (exponential in
    the number of negations and ``nec`` literals); the default guesses per
    dependency component.
    """
    start = time.perf_counter()
    original = p
    p, constraints = _prepare(p)
    stats: dict = {}
    if split:
        info = stratify(p)
        if not guess_check_applicable(p):
            raise SolverError("guess-and-check needs nec as the only non-monotonic query in cycles")
        models = _solve_components(p, info, True, stats, jobs)
    else:
        rules = list(p.rules)
        if not _local_guessable(rules):
            raise SolverError("guess-and-check needs nec as the only non-monotonic query")
        models = _solve_guess(rules, stats)
    models = _admissible(models, constraints)
    if verify:
        bad = [m for m in models if not is_stable_model(original, m, mode)]
        if bad:
            raise AssertionError(f"guess-and-check produced a non-stable interpretation: {bad[0]!r}")
    models.sort(key=_model_key)
    return _finish(models, "guess_check", True, stats, start, max_models)


def _model_key(m: Interpretation):
    return tuple((a, tuple(g.sort_key() for g in m[a].sorted_causes())) for a in m)


def _optimistic(rules: list[Rule]) -> list[Rule]:
    out = []
    for r in rules:
        items = []
        for item in body_items(r):
            depth, lit = _item_kind(item)
            if lit is not None and not depth and not is_monotonic(lit.query):
                item = Lit(One(), lit.atom)
            items.append(item)
        body = items[0] if len(items) == 1 else Conj(tuple(items))
        out.append(Rule(r.label, r.head, body))
    return out


def solve_gamma(p: Program, max_iters: int = 64, mode: str = "uniform",
                max_models: int | None = None) -> SolveReport:
    """Iterate ``I -> least_model(P^I)`` per guess over negations; sound, not complete."""
    if max_iters < 1:
        raise ValueError("max_iters must be positive")
    start = time.perf_counter()
    original = p
    p, constraints = _prepare(p)
    stats: dict = {"gamma_iterations": 0}
    slots = [(i, j) for i, r in enumerate(p.rules) for j, item in enumerate(body_items(r))
             if _item_kind(item)[0]]
    found, seen = [], set()
    for guess in itertools.product((True, False), repeat=len(slots)):
        stats["guesses_tried"] = stats.get("guesses_tried", 0) + 1
        chosen = dict(zip(slots, guess))
        resolved = []
        for i, r in enumerate(p.rules):
            items = []
            alive = True
            for j, item in enumerate(body_items(r)):
                if (i, j) in chosen:
                    if not chosen[(i, j)]:
                        alive = False
                        break
                    continue
                items.append(item)
            if alive:
                body = items[0] if len(items) == 1 else Conj(tuple(items))
                resolved.append(Rule(r.label, r.head, body))
        q = Program(tuple(resolved), p.declared_fact_labels)
        cur = least_model(_optimistic(resolved), stats)
        visited = set()
        for _ in range(max_iters):
            stats["gamma_iterations"] += 1
            nxt = least_model(reduct(q, cur, mode), stats)
            if nxt == cur:
                if cur not in seen and is_stable_model(original, cur, mode):
                    seen.add(cur)
                    found.append(cur)
                break
            if nxt in visited:
                break
            visited.add(cur)
            cur = nxt
    found.sort(key=_model_key)
    return _finish(found, "gamma", False, stats, start, max_models)


def solve_auto(p: Program, mode: str = "uniform", max_models: int | None = None,
               jobs: int = 1, max_iters: int = 64) -> SolveReport:
    if stratify(_prepare(p)[0]).stratified:
        return solve_stratified(p, mode, max_models=max_models, jobs=jobs)
    if guess_check_applicable(p):
        return solve_guess_check(p, mode=mode, max_models=max_models, jobs=jobs)
    return solve_gamma(p, max_iters, mode, max_models=max_models)


def solve(p: Program, method: str = "auto", **kw) -> SolveReport:
    if method == "auto":
        return solve_auto(p, **kw)
    if method == "stratified":
        return solve_stratified(p, **kw)
    if method in ("guess", "guess_check"):
        return solve_guess_check(p, **kw)
    if method == "gamma":
        kw.pop("jobs", None)
        return solve_gamma(p, **kw)
    raise ValueError(f"unknown method {method!r}")


# --- splitting -----------------------------------------------------------------


def split(p: Program, bottom_heads: Iterable[str]) -> tuple[Program, Program]:
    """Partition ``p`` by head; no head of the top part may occur in the bottom part."""
    bottom_heads = set(bottom_heads)
    bottom = [r for r in p.rules if r.head in bottom_heads]
    top = [r for r in p.rules if r.head not in bottom_heads]
    top_heads = {r.head for r in top}
    pb = Program(tuple(bottom), p.declared_fact_labels)
    bad = top_heads & pb.atoms()
    if bad:
        raise SolverError(f"invalid splitting: {sorted(bad)} head top rules and occur in the bottom part")
    return pb, Program(tuple(top), p.declared_fact_labels)


def solve_split(p: Program, bottom_heads: Iterable[str],
                solver: Callable[[Program], SolveReport] = solve_auto) -> list[Interpretation]:
    """Stable models of ``p`` as ``{stable models of J + P_top : J stable model of P_bottom}``."""
    pb, pt = split(p, bottom_heads)
    out, seen = [], set()
    for j in solver(pb).models:
        joined = Program(tuple(valued_facts(j)) + pt.rules, p.declared_fact_labels)
        for m in solver(joined).models:
            if m not in seen:
                seen.add(m)
                out.append(m)
    out.sort(key=_model_key)
    return out


# --- standard answer sets ------------------------------------------------------


def _term_true(t) -> bool:
    if isinstance(t, Value):
        return bool(t.causes)
    name = type(t).__name__
    if name == "Label":
        return True
    if name == "Product":
        return all(_term_true(x) for x in t.items)
    if name == "Sum":
        return any(_term_true(x) for x in t.items)
    if name == "Apply":
        return _term_true(t.left) and _term_true(t.right)
    raise TypeError(f"not a term: {t!r}")


def _holds(f, pos: frozenset | set, guess: frozenset) -> bool:
    if isinstance(f, Lit):
        return f.atom in pos
    if isinstance(f, TermF):
        return _term_true(f.term)
    if isinstance(f, Conj):
        return all(_holds(x, pos, guess) for x in f.items)
    if isinstance(f, Disj):
        return any(_holds(x, pos, guess) for x in f.items)
    if isinstance(f, Neg):
        return not _holds(f.item, guess, guess)
    raise TypeError(f"not a formula: {f!r}")


def oracle_standard(p: Program, cap: int = 20) -> list[frozenset]:
    """Classical stable models of the unlabelled regular program, by exhaustion."""
    for r in p.rules:
        for _, lit in iter_literals(r.body):
            if not isinstance(lit.query, One):
                raise SolverError("the standard oracle needs a regular program")
    atoms = sorted(p.atoms())
    if len(atoms) > cap:
        raise SolverError(f"{len(atoms)} atoms exceed the oracle cap of {cap}")
    rules = [r for r in p.rules if r.head is not None]
    constraints = [r for r in p.rules if r.head is None]
    out = []
    for bits in itertools.product((False, True), repeat=len(atoms)):
        guess = frozenset(a for a, b in zip(atoms, bits) if b)
        if any(_holds(c.body, guess, guess) for c in constraints):
            continue
        pos: set = set()
        changed = True
        while changed:
            changed = False
            for r in rules:
                if r.head not in pos and _holds(r.body, pos, guess):
                    pos.add(r.head)
                    changed = True
        if pos == guess:
            out.append(guess)
    return out


def random_partition(p: Program, rng) -> set[str]:
    """A random valid set of bottom heads: a down-closed union of components."""
    p = _prepare(p)[0]
    info = stratify(p)
    heads = p.heads()
    chosen = {i for i in range(len(info.components)) if rng.random() < 0.5}
    closed = set()
    for i in sorted(chosen, reverse=True):
        stack = [i]
        while stack:
            j = stack.pop()
            if j in closed:
                continue
            closed.add(j)
            for a in info.components[j]:
                for b in info.graph.predecessors(a):
                    stack.append(info.component_of[b])
    bottom = set()
    for j in closed:
        bottom |= info.components[j]
    return bottom & heads
