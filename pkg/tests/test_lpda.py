import random
from decimal import Decimal

import pytest

from cnlkit.lpda import (
    Engine,
    UnsafeRuleError,
    ground,
    parse_goal,
    parse_program,
    reduce_defeasible,
)
from cnlkit.lpda.syntax import LpdaParseError
from cnlkit.terms import Const

DISCOUNT_LPDA = """
member(John).
sbuemployee(John).
buy(John, coke).
buy(John, lobster).
member(Mary).
sbuemployee(Mary).
buy(Mary, salmon).
blacklist(Mary).
beverage(coke).
seafood(lobster).
seafood(salmon).
@{r1} discount(?Customer, ?Product, ?Amount) :-
    buy(?Customer, ?Product), beverage(?Product), ?Amount is 1.50.
@{r2} discount(?Customer, ?Product, ?Amount) :-
    buy(?Customer, ?Product), beverage(?Product), member(?Customer), ?Amount is 2.50.
@{r3} discount(?Customer, ?Product, ?Amount) :-
    buy(?Customer, ?Product), seafood(?Product), member(?Customer), ?Amount is 7.50.
@{r4} discount(?Customer, ?Product, ?Amount) :-
    buy(?Customer, ?Product), seafood(?Product), sbuemployee(?Customer), ?Amount is 5.00.
cancel(handle(r2, discount(?C, ?P, ?A))) :- member(?C), blacklist(?C).
cancel(handle(r3, discount(?C, ?P, ?A))) :- member(?C), blacklist(?C).
opposes(discount(?C, ?P, ?A1), discount(?C, ?P, ?A2)) :- buy(?C, ?P), ?A1 != ?A2.
overrides(r2, r1).
"""


# --- parsing and printing -------------------------------------------------------


def test_roundtrip_print_parse():
    prog = parse_program(DISCOUNT_LPDA)
    again = parse_program(str(prog))
    assert str(again) == str(prog)


def test_double_negation_normalised():
    ba = parse_goal("not not p(a)")[0]
    assert not ba.naf and not ba.lit.neg
    ba2 = parse_goal("neg neg p(a)")[0]
    assert not ba2.lit.neg
    ba3 = parse_goal("not neg p(a)")[0]
    assert ba3.naf and ba3.lit.neg


def test_parse_error_on_naf_head():
    with pytest.raises(LpdaParseError):
        parse_program("not p :- q.")


# --- grounding ---------------------------------------------------------------------


def test_grounding_discount_rule_single_instance():
    prog = parse_program(
        "buy(John, coke). beverage(coke).\n"
        "@{r1} discount(?C, ?P, ?A) :- buy(?C, ?P), beverage(?P), ?A is 1.50.\n"
    )
    gp = ground(prog)
    instances = [g for g in gp.rules if g.defeasible]
    assert len(instances) == 1
    head = instances[0].head
    assert str(head) == "discount(John, coke, 1.50)"
    assert head.atom.args[2] == Const(Decimal("1.50"))


def test_facts_ground_to_themselves():
    gp = ground(parse_program("p(a)."))
    assert len(gp.rules) == 1
    assert str(gp.rules[0]) == "p(a)."


def test_unsafe_rule_names_rule_and_variable():
    with pytest.raises(UnsafeRuleError) as exc:
        ground(parse_program("p(?X) :- not q(?X)."))
    assert "?X" in str(exc.value)


def test_handles_unique_per_label_and_head():
    prog = parse_program("b(t). b(u).\n@{r1} f(?X) :- b(?X).\n")
    gp = ground(prog)
    assert len(gp.handles) == 2
    labels = {str(h) for h in gp.handles.values()}
    assert labels == {"handle(r1, f(t))", "handle(r1, f(u))"}


# --- defeasible reduction -------------------------------------------------------------


def test_reduce_defeasible_guards_and_candidate():
    gp = ground(parse_program("b(t).\n@{r1} f(t) :- b(t).\n"))
    reduced = reduce_defeasible(gp)
    texts = sorted(str(r) for r in reduced)
    assert texts == [
        "$candidate(handle(r1, f(t))) :- b(t).",
        "b(t).",
        "f(t) :- b(t), not $defeated(handle(r1, f(t))).",
    ]


def test_definite_rules_pass_through():
    gp = ground(parse_program("q(a).\np(?X) :- q(?X).\n"))
    reduced = reduce_defeasible(gp)
    assert sorted(str(r) for r in reduced) == ["p(a) :- q(a).", "q(a)."]


# --- argumentation theory ----------------------------------------------------------------


def engine(text: str) -> Engine:
    return Engine(parse_program(text))


def test_unopposed_defeasible_fact_holds():
    e = engine("@{r1} nice(world).\n")
    assert e.query(parse_goal("nice(world)")).status == "yes"


def test_refutation_beats_lower_priority():
    e = engine(DISCOUNT_LPDA)
    assert e.interpretation.value(parse_goal("discount(John, coke, 2.50)")[0].lit) == "true"
    assert e.interpretation.value(parse_goal("discount(John, coke, 1.50)")[0].lit) == "false"


def test_mutual_rebuttal_leaves_undefined():
    e = engine(DISCOUNT_LPDA)
    assert e.interpretation.value(parse_goal("discount(John, lobster, 7.50)")[0].lit) == "undefined"
    assert e.interpretation.value(parse_goal("discount(John, lobster, 5.00)")[0].lit) == "undefined"


def test_cancelled_rule_cannot_rebut():
    e = engine(DISCOUNT_LPDA)
    assert e.interpretation.value(parse_goal("discount(Mary, salmon, 5.00)")[0].lit) == "true"
    assert e.interpretation.value(parse_goal("discount(Mary, salmon, 7.50)")[0].lit) == "false"


def test_defeated_exception_cannot_refute():
    e = engine(
        """
        @{r1} join(John, boa) :- offer(John, boa).
        @{r2} join(John, amazon) :- offer(John, amazon).
        offer(John, boa).
        offer(John, amazon).
        bankrupt(amazon).
        cancel(r2) :- bankrupt(amazon).
        opposes(join(?X, boa), join(?X, amazon)) :- offer(?X, boa), offer(?X, amazon).
        overrides(r2, r1).
        """
    )
    assert e.query(parse_goal("join(John, boa)")).status == "yes"
    assert e.query(parse_goal("join(John, amazon)")).status == "no"


def test_strict_conclusion_defeats_defeasible_opposer():
    e = engine("@{r1} neg stupendous(Mary).\nstupendous(Mary).\n")
    assert e.interpretation.value(parse_goal("neg stupendous(Mary)")[0].lit) == "false"
    assert e.interpretation.value(parse_goal("stupendous(Mary)")[0].lit) == "true"
    assert not e.interpretation.inconsistent


# --- well-founded model ------------------------------------------------------------------


def test_self_blocking_rule_is_undefined():
    e = engine("p :- not p.\n")
    assert e.interpretation.value(parse_goal("p")[0].lit) == "undefined"


def test_single_negation_stabilises():
    e = engine("q :- not p.\n")
    assert e.interpretation.value(parse_goal("q")[0].lit) == "true"
    assert e.interpretation.value(parse_goal("p")[0].lit) == "false"


def test_alternating_fixpoint_is_monotone():
    e = engine(DISCOUNT_LPDA)
    trace = e.interpretation.trace
    for (t1, p1), (t2, p2) in zip(trace, trace[1:]):
        assert t1 <= t2
        assert p1 >= p2


def test_partition_is_exhaustive_and_disjoint():
    e = engine(DISCOUNT_LPDA)
    interp = e.interpretation
    assert not (interp.true & interp.false)
    assert not (interp.true & interp.undefined)
    assert not (interp.false & interp.undefined)
    universe = set()
    for gr in e.normal_rules:
        universe.add(gr.head)
        universe.update(l for l, _ in gr.body)
    assert interp.true | interp.false | interp.undefined == universe


def test_positive_program_equals_least_model():
    e = engine("p(a).\nq(?X) :- p(?X).\nr(?X) :- q(?X), p(?X).\n")
    assert e.interpretation.undefined == frozenset()
    assert {str(l) for l in e.interpretation.true} == {"p(a)", "q(a)", "r(a)"}


def test_unopposed_defeasible_equals_definite_randomized():
    rng = random.Random(3)
    atoms = ["a%d" % i for i in range(6)]
    for _ in range(25):
        rules = []
        for _ in range(rng.randint(1, 8)):
            head = rng.choice(atoms)
            body = rng.sample(atoms, rng.randint(0, 2))
            rules.append((head, body))
        facts = rng.sample(atoms, rng.randint(1, 3))
        defeasible = "\n".join("@{r%d} %s :- %s." % (i, h, ", ".join(b)) if b else "@{r%d} %s." % (i, h)
                               for i, (h, b) in enumerate(rules))
        definite = "\n".join("%s :- %s." % (h, ", ".join(b)) if b else "%s." % h for h, b in rules)
        fact_text = "\n".join("%s." % f for f in facts)
        e1 = engine(defeasible + "\n" + fact_text)
        e2 = engine(definite + "\n" + fact_text)
        t1 = {str(l) for l in e1.interpretation.true if not l.atom.pred.startswith("$") and l.atom.pred != "opposes"}
        t2 = {str(l) for l in e2.interpretation.true if l.atom.pred != "opposes"}
        assert t1 == t2
        assert e1.interpretation.undefined == frozenset()


# --- queries ---------------------------------------------------------------------------------


def test_query_bindings():
    e = engine(DISCOUNT_LPDA)
    res = e.query(parse_goal("discount(John, coke, ?A)"))
    assert res.status == "yes"
    assert res.binding_strings() == [{"A": "2.50"}]


def test_query_unknown_vs_no():
    e = engine(DISCOUNT_LPDA)
    res = e.query(parse_goal("discount(John, lobster, ?A)"))
    assert res.status == "unknown"
    assert res.bindings == []
    assert res.has_undefined
    res2 = e.query(parse_goal("discount(John, tofu, ?A)"))
    assert res2.status == "no"
    assert not res2.has_undefined


def test_query_conjunction_and_negation():
    e = engine("p(a). q(a). p(b).\n")
    res = e.query(parse_goal("p(?X), q(?X)"))
    assert res.binding_strings() == [{"X": "a"}]
    res2 = e.query(parse_goal("p(?X), not q(?X)"))
    assert res2.binding_strings() == [{"X": "b"}]


def test_inconsistency_flag_on_answers():
    e = engine("p(a). neg p(a).\n")
    assert e.interpretation.inconsistent
    assert e.query(parse_goal("p(a)")).inconsistent


def test_model_dump_sections():
    e = engine("q :- not p.\n")
    dump = e.model_dump()
    assert dump.splitlines()[0] == "T:"
    assert "  q" in dump.splitlines()
    assert "F:" in dump and "U:" in dump


def test_supporting_labels_for_provenance():
    e = engine(DISCOUNT_LPDA)
    lit = parse_goal("discount(John, coke, 2.50)")[0].lit
    assert [str(l) for l in e.supporting_labels(lit)] == ["r2"]
