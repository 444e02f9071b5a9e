"""Causal logic programs: stable models with algebraic causal justifications."""
from importlib import resources

from .algebra import (
    ONE,
    ZERO,
    Cause,
    Value,
    apply_value,
    eval_term,
    label_value,
    product_value,
    render_cause,
    render_value,
    sum_value,
    value_leq,
)
from .lang import Program, Rule, classify, normalize, parse_formula, parse_program, parse_term, print_program
from .queries import Cont, Nec, One, Suff, eval_query, is_monotonic, reduce_query
from .semantics import Interpretation, eval_formula, is_model, is_stable_model, least_model, reduct, two_valued
from .solver import (
    SolveReport,
    SolverError,
    oracle_standard,
    solve,
    solve_auto,
    solve_gamma,
    solve_guess_check,
    solve_split,
    solve_stratified,
    split,
    stratify,
)

__version__ = "0.1.0"

__all__ = [
    "ONE",
    "ZERO",
    "Cause",
    "Value",
    "apply_value",
    "eval_term",
    "label_value",
    "product_value",
    "render_cause",
    "render_value",
    "sum_value",
    "value_leq",
    "Program",
    "Rule",
    "classify",
    "normalize",
    "parse_formula",
    "parse_program",
    "parse_term",
    "print_program",
    "Cont",
    "Nec",
    "One",
    "Suff",
    "eval_query",
    "is_monotonic",
    "reduce_query",
    "Interpretation",
    "eval_formula",
    "is_model",
    "is_stable_model",
    "least_model",
    "reduct",
    "two_valued",
    "SolveReport",
    "SolverError",
    "oracle_standard",
    "solve",
    "solve_auto",
    "solve_gamma",
    "solve_guess_check",
    "solve_split",
    "solve_stratified",
    "split",
    "stratify",
    "corpus_names",
    "corpus_text",
    "load_corpus",
]


def corpus_names() -> list[str]:
    root = resources.files(__name__) / "corpus"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".clp"))


def corpus_text(name: str) -> str:
    return (resources.files(__name__) / "corpus" / f"{name}.clp").read_text(encoding="utf-8")


def load_corpus(name: str, **kw) -> Program:
    return parse_program(corpus_text(name), **kw)
