import pytest
from hypothesis import given

from causal_lp import load_corpus
from causal_lp.algebra import ONE, ZERO, eval_term
from causal_lp.lang import TOP, Lit, Program, Rule, classify, map_literals, parse_formula, parse_program
from causal_lp.queries import Nec, One, Reduced
from causal_lp.semantics import (
    BOTTOM_I,
    Interpretation,
    NotPositiveMonotonic,
    eval_formula,
    eval_literal,
    is_model,
    is_stable_model,
    is_supported,
    least_model,
    reduct,
    reduct_formula,
    satisfies_rule,
    tp_step,
    tp_trace,
    two_valued,
    valued_facts,
)
from causal_lp.solver import oracle_standard, solve_auto

from strategies import formulas, interpretations


def V(src):
    from causal_lp.lang import parse_term
    return eval_term(parse_term(src))


def I(**kw):
    return Interpretation({k: V(v) for k, v in kw.items()})


NEC_SUZY = Lit(Nec(frozenset({"suzy"})), "accident")


class TestValuation:
    def test_nec_literal(self):
        assert eval_literal(I(accident="suzy.r2.r1"), NEC_SUZY) == V("suzy.r2.r1")
        assert eval_literal(I(accident="suzy.r2.r1 + oil.r1"), NEC_SUZY) == ZERO

    def test_one_literal(self):
        i = I(p="a + b.c")
        assert eval_literal(i, Lit(One(), "p")) == i["p"]

    def test_missing_atom_is_zero(self):
        assert eval_literal(BOTTOM_I, Lit(One(), "p")) == ZERO

    def test_formulas(self):
        assert eval_formula(BOTTOM_I, TOP) == ONE
        assert eval_formula(BOTTOM_I, parse_formula("not p")) == ONE
        assert eval_formula(I(p="a"), parse_formula("not p")) == ZERO
        assert eval_formula(I(p="a"), parse_formula("not not p")) == ONE
        assert eval_formula(I(p="a", q="b"), parse_formula("p; q")) == V("a + b")
        assert eval_formula(I(p="a"), parse_formula("p, x.y")) == V("a * x.y")

    def test_firing_squad_body(self):
        m = solve_auto(load_corpus("firing_squad")).models[0]
        body = parse_formula("shoot(suzy), loaded")
        assert eval_formula(m, body) == V("load(john).r3 * shoot(suzy)")


class TestModels:
    def test_program_5(self):
        p = load_corpus("accident")
        m = least_model(p)
        assert m["accident"] == V("suzy.r2.r1")
        assert is_model(m, p)

    def test_unsatisfied(self):
        r = Rule("r1", "accident", Lit(One(), "oil"))
        assert not satisfies_rule(I(oil="oil"), r)

    def test_empty_program(self):
        assert is_model(I(p="a"), Program())

    def test_constraint(self):
        r = Rule("1", None, Lit(One(), "p"))
        assert satisfies_rule(BOTTOM_I, r)
        assert not satisfies_rule(I(p="a"), r)


class TestDirectConsequences:
    def test_program_6_trace(self):
        trace = tp_trace(load_corpus("accident_billy"))
        assert trace[0] == BOTTOM_I
        assert trace[1] == I(suzy="suzy", billy="billy", oil="oil")
        assert trace[2]["oil"] == V("(suzy * billy).r2 + oil")
        assert trace[3]["accident"] == V("(suzy * billy).r2.r1 + oil.r1")
        assert trace[-1] == trace[3] and len(trace) == 4

    def test_empty(self):
        assert tp_step(Program(), BOTTOM_I) == BOTTOM_I
        assert least_model(Program()) == BOTTOM_I

    def test_rejects_nonmonotonic(self):
        with pytest.raises(NotPositiveMonotonic):
            least_model(load_corpus("necc"))
        with pytest.raises(NotPositiveMonotonic):
            least_model(parse_program("a :- not b."))

    @pytest.mark.parametrize("name", ["accident", "accident_billy", "suff", "exp3", "terms"])
    def test_chain_increasing_and_bounded(self, name):
        p = load_corpus(name)
        trace = tp_trace(p)
        assert len(trace) - 1 <= len(p.rules) + 1
        for a, b in zip(trace, trace[1:]):
            assert a <= b


class TestReduct:
    def test_program_4(self):
        p = load_corpus("two_minimal_models")
        q = reduct(p, I(p="r1", q="r1.r2"))
        lit = q.rules[1].body
        assert isinstance(lit.query, Reduced) and lit.query.passing == {next(iter(V("r1").causes))}

    def test_default_rule_kept(self):
        q = reduct(parse_program("1: un_broken :- not broken."), BOTTOM_I)
        assert q.rules == (Rule("1", "un_broken", TOP),)

    def test_negation_removes(self):
        assert reduct(parse_program("a :- not p."), I(p="x")).rules == ()

    @pytest.mark.parametrize("name", ["necc", "two_cmodels", "non_minimal", "firing_squad_cont", "constraints"])
    def test_reduct_positive_monotonic(self, name):
        p = load_corpus(name)
        for m in solve_auto(p).models + [BOTTOM_I]:
            for mode in ("uniform", "selective"):
                c = classify(reduct(p, m, mode))
                assert c.positive and c.monotonic


class TestStable:
    def test_program_4(self):
        p = load_corpus("two_minimal_models")
        assert is_stable_model(p, I(p="r1", q="r1.r2"))
        other = I(p="r1 + r2")
        assert is_model(other, p) and not is_stable_model(p, other)

    def test_fact_bottom(self):
        assert not is_stable_model(parse_program("a."), BOTTOM_I)

    def test_supported(self):
        p = parse_program("r1: p.")
        assert is_supported(p, I(p="r1"))
        assert not is_supported(p, I(p="r1 + r2"))
        assert is_supported(Program(), BOTTOM_I)


class TestTwoValued:
    def test_program_5(self):
        m = least_model(load_corpus("accident"))
        assert two_valued(m) == {"accident": 1, "oil": 1, "suzy": 1}

    def test_bottom(self):
        assert two_valued(BOTTOM_I, ["a", "b"]) == {"a": 0, "b": 0}

    def test_firing_squad_cont(self):
        # cross-checked against the classical oracle on the regular projection
        p = load_corpus("firing_squad_cont")
        (m,) = solve_auto(p).models
        tv = two_valued(m, p.atoms())
        assert tv["dead"] == 1
        assert all(tv[f"short_prison({a})"] == 1 for a in ("suzy", "billy", "john"))
        regular = Program(tuple(
            Rule(r.label, r.head, map_literals(r.body, lambda l: Lit(One(), l.atom))) for r in p.rules
        ))
        (classic,) = oracle_standard(regular)
        assert {a for a, v in tv.items() if v} == classic

    def test_valued_facts(self):
        m = I(p="a.b + c", q="1")
        assert least_model(valued_facts(m)) == m


@given(interpretations(), formulas(queries=("one", "nec", "cont")))
def test_valuation_stable_under_reduct(i, f):
    for mode in ("uniform", "selective"):
        assert eval_formula(i, reduct_formula(f, i, mode)) == eval_formula(i, f)
