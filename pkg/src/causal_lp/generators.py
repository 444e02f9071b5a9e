"""Program generators: the doubling family, SAT encodings and random programs."""
from __future__ import annotations

import itertools
import random as _random
from typing import Sequence

from .lang import Conj, Lit, Neg, Program, Rule, make_program
from .queries import Nec, One


def _lit(atom: str) -> Lit:
    return Lit(One(), atom)


def _body(items):
    items = tuple(items)
    return items[0] if len(items) == 1 else Conj(items)


def gen_exp_program(n: int) -> Program:
    """``p_n`` of this family has ``2 ** 2 ** (n - 1)`` causes."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("n must be a positive integer")
    rules = [
        Rule("a", "p1"), Rule("b", "p1"),
        Rule("c", "q1"), Rule("d", "q1"),
    ]
    for i in range(2, n + 1):
        body = _body([_lit(f"p{i - 1}"), _lit(f"q{i - 1}")])
        rules.append(Rule(f"m{i}", f"p{i}", body))
        rules.append(Rule(f"n{i}", f"q{i}", body))
    return make_program(rules)


def check_cnf(cnf) -> list[tuple[int, ...]]:
    """Validate a DIMACS-style clause list; returns it as tuples."""
    out = []
    for clause in cnf:
        clause = tuple(clause)
        if not clause:
            raise ValueError("empty clause")
        for x in clause:
            if not isinstance(x, int) or isinstance(x, bool) or x == 0:
                raise ValueError(f"bad literal {x!r}")
        if any(-x in clause for x in clause):
            raise ValueError(f"clause {clause} contains complementary literals")
        out.append(clause)
    return out


def gen_sat_program(cnf: Sequence[Sequence[int]], gadget: str = "choice",
                    constraint: str = "odd_loop") -> Program:
    """Program with a stable model iff ``cnf`` is satisfiable.

    ``gadget="choice"`` gives each variable the two-model cycle
    ``x :- nec({f_x}, nx)`` / ``nx :- nec({t_x}, x)`` over facts ``t_x: x``
    and ``f_x: nx``; ``x`` is true when ``nec({t_x}, x)`` holds.
    ``gadget="per_variable"`` emits the single-atom construction. There
    ``x = x`` passes both ``nec`` tests, so every clause holds and the program
    has one model whatever the formula; it is kept for comparison only.
    """
    cnf = check_cnf(cnf)
    if gadget not in ("choice", "per_variable"):
        raise ValueError(f"unknown gadget {gadget!r}")
    if constraint not in ("odd_loop", "nec_constraint"):
        raise ValueError(f"unknown constraint {constraint!r}")
    nvars = max((abs(x) for c in cnf for x in c), default=0)
    rules: list[Rule] = []
    for k in range(1, nvars + 1):
        x, nx, t, f = f"x{k}", f"nx{k}", f"t_x{k}", f"f_x{k}"
        if gadget == "choice":
            rules += [
                Rule(t, x),
                Rule(f, nx),
                Rule(x, x, Lit(Nec(frozenset({f})), nx)),
                Rule(nx, nx, Lit(Nec(frozenset({t})), x)),
            ]
        else:
            rules += [
                Rule(x, x),
                Rule(t, x, Lit(Nec(frozenset({t, x})), x)),
                Rule(f, x, Lit(Nec(frozenset({f, x})), x)),
            ]
    for j, clause in enumerate(cnf, 1):
        for x in clause:
            k = abs(x)
            if gadget == "choice":
                lit = Lit(Nec(frozenset({f"t_x{k}"})), f"x{k}") if x > 0 \
                    else Lit(Nec(frozenset({f"f_x{k}"})), f"nx{k}")
            else:
                lit = Lit(Nec(frozenset({f"t_x{k}" if x > 0 else f"f_x{k}", f"x{k}"})), f"x{k}")
            rules.append(Rule("1", f"c{j}", lit))
    if cnf:
        rules.append(Rule("1", "p", _body([_lit(f"c{j}") for j in range(1, len(cnf) + 1)])))
    else:
        rules.append(Rule("1", "p"))
    if constraint == "odd_loop":
        rules.append(Rule("1", "p", Neg(_lit("p"))))
    else:
        rules += [
            Rule("q", "q"),
            Rule("1", "q", _lit("p")),
            Rule("1", None, Lit(Nec(frozenset({"q"})), "q")),
        ]
    return make_program(rules)


def truth_table_sat(cnf) -> bool:
    cnf = check_cnf(cnf)
    nvars = max((abs(x) for c in cnf for x in c), default=0)
    for bits in itertools.product((False, True), repeat=nvars):
        if all(any(bits[abs(x) - 1] == (x > 0) for x in c) for c in cnf):
            return True
    return False


def random_cnf(rng: _random.Random, nvars: int, nclauses: int, width: int = 3) -> list[tuple[int, ...]]:
    width = min(width, nvars)
    out = []
    for _ in range(nclauses):
        vs = rng.sample(range(1, nvars + 1), width)
        out.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return out


def random_program(rng: _random.Random, n_atoms: int = 4, n_rules: int = 6, *,
                   max_body: int = 3, p_neg: float = 0.3, p_nec: float = 0.0,
                   p_fact: float = 0.3, labelled: bool = True, n_labels: int = 4,
                   nec_positive_only: bool = False) -> Program:
    """A random flat program over atoms ``a0..``.

    With ``p_nec > 0`` some literals become ``nec`` literals over random label
    sets; with ``nec_positive_only`` they never occur under negation, so the
    result stays inside the fragment decided by guess-and-check.
    """
    atoms = [f"a{i}" for i in range(n_atoms)]
    labels = [f"r{i}" for i in range(n_labels)]
    rules = []
    for i in range(n_rules):
        head = rng.choice(atoms)
        label = (rng.choice(labels) if rng.random() < 0.5 else f"l{i}") if labelled else "1"
        if rng.random() < p_fact:
            rules.append(Rule(label, head))
            continue
        items = []
        for _ in range(rng.randint(1, max_body)):
            atom = rng.choice(atoms)
            neg = rng.random() < p_neg
            if rng.random() < p_nec and not (neg and nec_positive_only):
                pool = labels + [f"l{j}" for j in range(n_rules)] if labelled else labels
                lit = Lit(Nec(frozenset(rng.sample(pool, rng.randint(1, 2)))), atom)
            else:
                lit = _lit(atom)
            items.append(Neg(lit) if neg else lit)
        rules.append(Rule(label, head, _body(items)))
    return make_program(rules)
