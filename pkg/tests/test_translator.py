import pytest

from cnlkit.builder import DocumentBuilder
from cnlkit.lpda import Engine, parse_goal, parse_program
from cnlkit.lpda.syntax import Atom, Lit, Program, Rule
from cnlkit.terms import Const
from cnlkit.translator import (
    OverridesCycleError,
    ScaleTable,
    SkolemGen,
    TranslationError,
    Translator,
    encode_disjunction,
    load_scales,
    overrides_closure,
)


def translate(grammar, lexicon, scales, doc):
    b = DocumentBuilder(grammar, lexicon)
    records = b.load_document(doc)
    tr = Translator(scales, lexicon.role_symbols())
    return tr.translate(records, b.root)


def rule_strings(result):
    return [str(r) for r in result.program.rules]


# --- the discount worked example ---------------------------------------------------


def body_set(rule):
    return {str(e) for e in rule.body}


def test_discount_program_structure(grammar, lexicon, scales, discount_doc):
    result = translate(grammar, lexicon, scales, discount_doc)
    text = result.text
    for fact in [
        "member(John).", "sbuemployee(John).", "buy(John, coke).", "buy(John, lobster).",
        "member(Mary).", "sbuemployee(Mary).", "buy(Mary, salmon).", "blacklist(Mary).",
        "beverage(coke).", "seafood(lobster).", "seafood(salmon).",
    ]:
        assert fact in text
    assert "overrides(r2, r1)." in text

    rules = {str(r.label): r for r in result.program.rules if r.defeasible}
    assert set(rules) == {"r1", "r2", "r3", "r4"}
    r1 = rules["r1"]
    assert str(r1.head).startswith("discount(")
    assert {"beverage(?Beverage)", "buy(?Customer, ?Beverage)", "?Amount is 1.50"} == body_set(r1)
    assert "member(?Customer)" in body_set(rules["r2"])
    assert "?Amount is 2.50" in body_set(rules["r2"])
    assert "seafood(?Seafood)" in body_set(rules["r3"])
    assert "sbuemployee(?Customer)" in body_set(rules["r4"])

    cancels = [r for r in result.program.rules if r.head.atom.pred == "cancel"]
    assert len(cancels) == 2
    assert {str(r.head.atom.args[0].args[0]) for r in cancels} == {"r2", "r3"}
    for r in cancels:
        assert {"member(?Member)", "blacklist(?Member)"} == body_set(r)

    opposes = [r for r in result.program.rules if r.head.atom.pred == "opposes"]
    conflict = [r for r in opposes if any("!=" in str(e) for e in r.body)]
    assert len(conflict) == 1
    assert "buy(?V1, ?V2)" in body_set(conflict[0])
    assert "?Amount1 != ?Amount2" in body_set(conflict[0])


def test_discount_outcomes(grammar, lexicon, scales, discount_doc):
    result = translate(grammar, lexicon, scales, discount_doc)
    e = Engine(parse_program(result.text))
    assert e.query(parse_goal("discount(John, coke, ?A)")).binding_strings() == [{"A": "2.50"}]
    assert e.query(parse_goal("discount(John, lobster, ?A)")).status == "unknown"
    assert e.query(parse_goal("discount(Mary, salmon, ?A)")).binding_strings() == [{"A": "5.00"}]


def test_strict_sentence_is_definite_fact(grammar, lexicon, scales):
    result = translate(grammar, lexicon, scales, "(strict) Tweety is a bird.")
    assert rule_strings(result) == ["bird(tweety)."]


def test_unannotated_fact_is_plain(grammar, lexicon, scales):
    result = translate(grammar, lexicon, scales, "Tweety is a bird.")
    assert rule_strings(result) == ["bird(tweety)."]


def test_defeasible_fact_without_opposer_holds(grammar, lexicon, scales):
    e = Engine(parse_program("@{r9} bird(tweety).\n"))
    assert e.query(parse_goal("bird(tweety)")).status == "yes"


def test_zero_annotations_means_zero_defeat_machinery(grammar, lexicon, scales):
    doc = "Tom walks. A bird eats a little worm. Every penguin is a bird."
    result = translate(grammar, lexicon, scales, doc)
    for r in result.program.rules:
        assert r.head.atom.pred not in ("overrides", "cancel", "opposes")


def test_label_bijection(grammar, lexicon, scales, discount_doc):
    result = translate(grammar, lexicon, scales, discount_doc)
    labels = [str(r.label) for r in result.program.rules if r.defeasible]
    assert sorted(labels) == sorted(result.label_map)
    assert result.label_map["r1"] == ("sentence", "9.l")
    assert result.label_map["r2"] == ("sentence", "9.m")


# --- overrides closure --------------------------------------------------------------


def mk_overrides(*pairs):
    prog = Program()
    for a, b in pairs:
        prog.rules.append(Rule(Lit(Atom("overrides", (Const(a), Const(b)))), []))
    return prog


def test_overrides_transitive_closure():
    prog = mk_overrides(("a", "b"), ("b", "c"))
    overrides_closure(prog)
    texts = {str(r) for r in prog.rules}
    assert "overrides(a, c)." in texts


def test_overrides_empty_is_noop():
    prog = Program()
    overrides_closure(prog)
    assert prog.rules == []


def test_overrides_cycle_rejected():
    prog = mk_overrides(("a", "b"), ("b", "a"))
    with pytest.raises(OverridesCycleError) as exc:
        overrides_closure(prog)
    assert "a" in str(exc.value) and "b" in str(exc.value)


# --- scalar implicatures ---------------------------------------------------------------


def test_some_students_expand(grammar, lexicon, scales):
    result = translate(grammar, lexicon, scales, "Some students pass exam1.")
    assert rule_strings(result) == [
        "student(#1).",
        "pass(#1, e1).",
        "student(#2).",
        "@{imp1} neg pass(#2, e1).",
    ]
    assert result.label_map["imp1"] == ("implicature", "p1.s1")


def test_all_students_plain_rule(grammar, lexicon, scales):
    result = translate(grammar, lexicon, scales, "(strict) All students pass exam1.")
    assert rule_strings(result) == ["pass(?Student, e1) :- student(?Student)."]


def test_scalar_lifecycle(grammar, lexicon, scales):
    r1 = translate(grammar, lexicon, scales, "Some students pass exam1.")
    e1 = Engine(parse_program(r1.text))
    assert e1.interpretation.value(parse_goal("neg pass(#2, e1)")[0].lit) == "true"

    r2 = translate(grammar, lexicon, scales,
                   "Some students pass exam1. (strict) All students pass exam1.")
    e2 = Engine(parse_program(r2.text))
    assert e2.interpretation.value(parse_goal("neg pass(#2, e1)")[0].lit) == "false"
    assert e2.interpretation.value(parse_goal("pass(#2, e1)")[0].lit) == "true"
    assert not e2.interpretation.inconsistent


def test_predicate_scale_expansion(grammar, lexicon, scales):
    result = translate(grammar, lexicon, scales, "Mary is beautiful.")
    assert rule_strings(result) == [
        "cute(?X) :- beautiful(?X).",
        "beautiful(?X) :- stupendous(?X).",
        "beautiful(Mary).",
        "@{imp1} neg stupendous(Mary).",
    ]
    e = Engine(parse_program(result.text))
    assert e.query(parse_goal("cute(Mary)")).status == "yes"
    assert e.query(parse_goal("neg stupendous(Mary)")).status == "yes"


def test_predicate_scale_maximum_no_implicature(grammar, lexicon, scales):
    result = translate(grammar, lexicon, scales, "Mary is stupendous.")
    assert "@{imp1}" not in result.text
    assert any("scale maximum" in n for n in result.notices)
    assert "stupendous(Mary)." in result.text


def test_skolems_never_reused(grammar, lexicon, scales):
    doc = "Some students pass exam1. Some birds fly."
    result = translate(grammar, lexicon, scales, doc)
    skolems = [t for t in result.text.split() if t.startswith("#")]
    text = result.text
    assert "#1" in text and "#2" in text and "#3" in text and "#4" in text


def test_skolem_generator_is_monotonic():
    gen = SkolemGen()
    seen = {str(gen.fresh()) for _ in range(10)}
    assert len(seen) == 10


# --- disjunction ----------------------------------------------------------------------------


def test_inclusive_or_encoding(grammar, lexicon, scales):
    result = translate(grammar, lexicon, scales, "John votes for Obama or Romney.")
    assert rule_strings(result) == [
        "vote(John, Romney) :- neg vote(John, Obama).",
        "vote(John, Obama) :- neg vote(John, Romney).",
    ]


def test_exclusive_or_encoding(grammar, lexicon, scales):
    result = translate(grammar, lexicon, scales, "John votes either for Obama or for Romney.")
    assert rule_strings(result) == [
        "neg vote(John, Romney) :- vote(John, Obama).",
        "neg vote(John, Obama) :- vote(John, Romney).",
    ]


def test_exclusive_plus_both_facts_is_inconsistent():
    rules = encode_disjunction("exclusive", "John", "vote", ["Obama", "Romney"])
    prog = Program(rules + [Rule(Lit(Atom("vote", (Const("John"), Const("Obama")))), []),
                            Rule(Lit(Atom("vote", (Const("John"), Const("Romney")))), [])])
    e = Engine(prog)
    assert e.interpretation.inconsistent


def test_inclusive_plus_both_facts_stays_consistent():
    rules = encode_disjunction("inclusive", "John", "vote", ["Obama", "Romney"])
    prog = Program(rules + [Rule(Lit(Atom("vote", (Const("John"), Const("Obama")))), []),
                            Rule(Lit(Atom("vote", (Const("John"), Const("Romney")))), [])])
    e = Engine(prog)
    assert not e.interpretation.inconsistent


def test_disjunction_over_three_alternatives_rejected():
    with pytest.raises(TranslationError, match="2"):
        encode_disjunction("inclusive", "John", "vote", ["a", "b", "c"])


# --- opposition emitted for exceptions ------------------------------------------------------


def test_except_emits_overrides_and_opposes(grammar, lexicon, scales):
    doc = (
        "[8.a] If John has a coke then John buys the coke.\n"
        "[8.b] (except) If John has a salmon then John buys the salmon.\n"
    )
    result = translate(grammar, lexicon, scales, doc)
    texts = rule_strings(result)
    assert "overrides(r2, r1)." in texts
    opp = [r for r in result.program.rules if r.head.atom.pred == "opposes"]
    assert len(opp) == 1


def test_engine_closes_opposes_symmetrically(grammar, lexicon, scales, discount_doc):
    result = translate(grammar, lexicon, scales, discount_doc)
    e = Engine(parse_program(result.text))
    derived = {l for l in e.interpretation.true if l.atom.pred == "opposes"}
    pairs = {(str(l.atom.args[0]), str(l.atom.args[1])) for l in derived}
    for a, b in pairs:
        assert (b, a) in pairs


# --- scale table ----------------------------------------------------------------------------


def test_scale_table_validation():
    with pytest.raises(TranslationError):
        ScaleTable([["only"]])
    with pytest.raises(TranslationError):
        ScaleTable([["a", "b"], ["b", "c"]])


def test_load_scales():
    table = load_scales("scale(some, all).\nscale(cute, beautiful, stupendous).\n")
    assert table.find("beautiful") == (["cute", "beautiful", "stupendous"], 1)
    assert table.find("nope") is None
