import random
from pathlib import Path

import pytest

from causal_lp import corpus_names, load_corpus
from causal_lp.algebra import Label
from causal_lp.lang import (
    AUX_PREFIX,
    TOP,
    Conj,
    Disj,
    Lit,
    Neg,
    ParseError,
    Rule,
    TermF,
    body_items,
    classify,
    is_flat,
    normalize,
    parse_formula,
    parse_program,
    print_program,
)
from causal_lp.queries import Cont, Nec, One, Suff
from causal_lp.solver import solve_gamma, solve_guess_check

from strategies import random_nested_program

GOLDEN = Path(__file__).parent / "golden"


class TestParse:
    def test_accident(self):
        p = parse_program("r1: accident :- oil.\nr2: oil :- suzy.\nsuzy.")
        assert len(p.rules) == 3
        assert p.rules[2] == Rule("suzy", "suzy", TOP)
        assert p.rules[0] == Rule("r1", "accident", Lit(One(), "oil"))
        assert p.declared_fact_labels == {"suzy"}

    def test_unlabelled_rule_gets_head_label(self):
        p = parse_program("fine(suzy) :- nec({suzy}, accident).")
        assert p.rules[0].label == "fine(suzy)"
        assert p.rules[0].body == Lit(Nec(frozenset({"suzy"})), "accident")

    def test_identity_label(self):
        p = parse_program("1: un_broken :- not broken.")
        assert p.rules[0] == Rule("1", "un_broken", Neg(Lit(One(), "broken")))

    def test_default_label_one(self):
        p = parse_program("p :- q. r: s.", default_label="one")
        assert [r.label for r in p.rules] == ["1", "r"]

    def test_constraint_label(self):
        assert parse_program(":- p.").rules[0] == Rule("1", None, Lit(One(), "p"))

    def test_terms_in_bodies(self):
        r = parse_program("r1: p :- (a * b).c.").rules[0]
        assert isinstance(r.body, TermF)
        r = parse_program("p :- q.r.").rules[0]
        assert isinstance(r.body, TermF)
        r = parse_program("p :- 1.x.").rules[0]
        assert r.body == TermF(Label("x"))

    def test_nested(self):
        f = parse_formula("not (a, not not b); cont({x,y}, c)")
        assert isinstance(f, Disj)
        assert f.items[1] == Lit(Cont(frozenset({"x", "y"})), "c")
        assert isinstance(f.items[0], Neg) and isinstance(f.items[0].item, Conj)

    def test_suff_binds_facts(self):
        p = load_corpus("suff")
        lit = p.rules[-1].body
        assert lit.query == Suff(frozenset({"suzy"}), frozenset({"suzy"}))

    def test_comments_and_whitespace(self):
        p = parse_program("% header\n  a.  % trailing\n\nb :- a.\n")
        assert len(p.rules) == 2

    def test_repeated_labels_allowed(self):
        p = parse_program("r: p. r: q.")
        assert [r.label for r in p.rules] == ["r", "r"]

    @pytest.mark.parametrize("src", [
        "p :- .", "p :- q", "0: p.", "p :- nec({a}, ).", "p :- q ,, r.",
        "p(:- q.", "p :- q $ r.", "__aux_1 :- q.",
    ])
    def test_errors(self, src):
        with pytest.raises(ParseError):
            parse_program(src)

    def test_error_position(self):
        with pytest.raises(ParseError) as e:
            parse_program("a.\nb :- $.")
        assert e.value.line == 2

    def test_empty(self):
        assert parse_program("").rules == ()
        assert print_program(parse_program("")) == ""


class TestNormalize:
    def test_disjunction_splits(self):
        p = normalize(parse_program("h :- a ; b."))
        assert [r.body for r in p.rules] == [Lit(One(), "a"), Lit(One(), "b")]
        assert {r.label for r in p.rules} == {"h"}

    def test_de_morgan(self):
        p = normalize(parse_program("h :- not (a, b)."))
        assert [r.body for r in p.rules] == [Neg(Lit(One(), "a")), Neg(Lit(One(), "b"))]

    def test_constraint(self):
        p = normalize(parse_program(":- p."))
        aux = f"{AUX_PREFIX}0"
        assert p.rules == (Rule("1", aux, Conj((Lit(One(), "p"), Neg(Lit(One(), aux))))),)

    def test_triple_negation(self):
        p = normalize(parse_program("h :- not not not a."))
        assert p.rules[0].body == Neg(Lit(One(), "a"))

    def test_negated_terms_become_constants(self):
        assert normalize(parse_program("h :- not 0, a.")).rules[0].body == Lit(One(), "a")
        assert normalize(parse_program("h :- not a.b, a.")).rules == ()

    def test_golden_firing_squad(self):
        text = print_program(normalize(load_corpus("firing_squad")))
        assert text == (GOLDEN / "firing_squad.normalized.clp").read_text()

    @pytest.mark.parametrize("name", corpus_names())
    def test_corpus_flat(self, name):
        p = normalize(load_corpus(name))
        assert all(is_flat(r) for r in p.rules)
        assert all(r.head is not None for r in p.rules)

    def test_random_flat(self):
        rng = random.Random(3)
        for _ in range(100):
            p = normalize(random_nested_program(rng, queries=("one", "nec")))
            for r in p.rules:
                assert is_flat(r)
                for item in body_items(r):
                    while isinstance(item, Neg):
                        item = item.item
                    assert isinstance(item, (Lit, TermF))

    def test_preserves_stable_models(self):
        rng = random.Random(11)
        for _ in range(60):
            p = random_nested_program(rng, n_rules=4, queries=("one", "nec"))
            nested = solve_gamma(p).models
            flat = solve_gamma(normalize(p)).models
            assert set(nested) == set(flat)
            assert set(solve_guess_check(p).models) == set(flat)


class TestPrint:
    @pytest.mark.parametrize("name", corpus_names())
    def test_corpus_round_trip(self, name):
        p = load_corpus(name)
        assert parse_program(print_program(p)) == p

    def test_random_round_trip(self):
        rng = random.Random(5)
        for _ in range(50):
            p = random_nested_program(rng, queries=("one", "nec", "cont"))
            assert parse_program(print_program(p)) == p
            assert parse_program(print_program(p, "one"), default_label="one") == p


class TestClassify:
    def test_program_2(self):
        c = classify(load_corpus("necc"))
        assert c.positive and not c.regular and not c.monotonic and c.normal and c.nec_fragment

    def test_negated_nec_not_normal(self):
        assert not classify(load_corpus("non_minimal")).normal

    def test_standard(self):
        c = classify(parse_program("1: a :- not b. 1: b :- not a. 1: c :- a."))
        assert c.standard and c.regular and not c.positive and c.normal

    def test_head_labels_not_standard(self):
        assert not classify(parse_program("a :- b.")).standard

    def test_cont_outside_nec_fragment(self):
        c = classify(load_corpus("firing_squad_cont"))
        assert not c.nec_fragment and not c.monotonic

    def test_suff_is_monotonic(self):
        assert classify(load_corpus("suff")).monotonic

    def test_consistent_literal_not_normal(self):
        assert not classify(parse_program("a :- not not b.")).normal
