import pytest

from cnlkit.builder import (
    AnnotationError,
    DocumentBuilder,
    SentenceError,
    UnresolvedReferenceError,
    peel_annotation,
    tokenize,
)
from cnlkit.drs import DRS, Complex, DrsError, Referent, ScopeError, Simple


def build(grammar, lexicon, text):
    b = DocumentBuilder(grammar, lexicon)
    b.load_document(text)
    return b


def conditions_of(b):
    return [c for c in b.root.conditions if isinstance(c, Simple)]


# --- Figure-1 style construction ---------------------------------------------


def test_bird_eats_little_worm(grammar, lexicon):
    b = build(grammar, lexicon, "A bird eats a little worm.")
    got = [str(c) for c in conditions_of(b)]
    assert got == [
        "object(A, bird, countable, na, eq, 1) 1/2",
        "object(B, worm, countable, na, eq, 1) 1/6",
        "property(B, little, pos) 1/5",
        "predicate(C, eat, A, B) 1/3",
    ]


def test_two_sentences_one_root(grammar, lexicon):
    b = build(grammar, lexicon, "A bird eats a little worm. An eagle kills a large snake.")
    assert [r.label for r in b.root.universe] == ["A", "B", "C", "D", "E", "F"]
    per_sentence = [len(r.conditions) for r in b.records]
    assert sum(per_sentence) == len(b.root.conditions)
    assert "predicate(F, kill, D, E) 2/3" in [str(c) for c in conditions_of(b)]


def test_proper_noun_fact(grammar, lexicon):
    b = build(grammar, lexicon, "Tom walks.")
    assert [r.label for r in b.root.universe] == ["A", "B"]
    got = [str(c) for c in conditions_of(b)]
    assert got == [
        "object(A, tom, named, na, eq, 1) 1/1",
        "predicate(B, walk, A) 1/2",
    ]


def test_default_sentence_shape(grammar, lexicon):
    b = build(grammar, lexicon, "Generally, birds fly.")
    assert len(b.root.conditions) == 1
    cond = b.root.conditions[0]
    assert isinstance(cond, Complex) and cond.op == "default"
    ant, cons = cond.subs
    assert [c.pred for c in ant.conditions] == ["object"]
    assert ant.conditions[0].args[1] == "bird"
    assert [c.pred for c in cons.conditions] == ["predicate"]
    assert "~~>" in b.root.pretty()


def test_pp_attaches_to_verb_not_noun(grammar, lexicon):
    b = build(grammar, lexicon, "A customer enters a card with a code.")
    conds = conditions_of(b)
    pps = [c for c in conds if c.pred == "modifier_pp"]
    preds = [c for c in conds if c.pred == "predicate"]
    assert len(pps) == 1 and len(preds) == 1
    event = preds[0].args[0]
    assert pps[0].args[0] is event


def test_relative_clause_attaches_to_preceding_noun(grammar, lexicon):
    b = build(grammar, lexicon, "A customer enters a card that has a code.")
    conds = conditions_of(b)
    have = [c for c in conds if c.pred == "predicate" and c.args[1] == "have"]
    assert len(have) == 1
    card_ref = next(c.args[0] for c in conds if c.pred == "object" and c.args[1] == "card")
    assert have[0].args[2] is card_ref


# --- reference resolution ------------------------------------------------------


def test_pronoun_resolves_to_agreeing_antecedent(grammar, lexicon):
    b = build(grammar, lexicon, "Brad was born in Seattle. It is a beautiful place.")
    kind, word, ref = b.resolutions[-1]
    assert kind == "pronoun"
    assert ref.constant == "seattle"


def test_ordinal_counts_from_paragraph_start(grammar, lexicon):
    b = build(grammar, lexicon, "Tom has a dog. Mary has a dog. The first dog is cute.")
    kind, word, ref = b.resolutions[-1]
    assert kind == "ordinal"
    assert ref.sid == 1  # the dog from sentence 1
    b2 = build(grammar, lexicon, "Tom has a dog. Mary has a dog. The second dog is smart.")
    assert b2.resolutions[-1][2].sid == 2


def test_ordinal_counting_restarts_per_paragraph(grammar, lexicon):
    doc = "Tom has a dog.\n\nMary has a dog. The first dog is cute."
    b = build(grammar, lexicon, doc)
    assert b.resolutions[-1][2].sid == 2  # Mary's dog opens the second paragraph


def test_definite_resolves_via_synonym_class(grammar, lexicon):
    b = build(grammar, lexicon, "A fog hangs over Dreadsbury-Mansion. The mist is creepy.")
    kind, word, ref = b.resolutions[-1]
    assert kind == "definite"
    assert ref.noun == "fog"


def test_unresolved_definite_is_an_error(grammar, lexicon):
    with pytest.raises(UnresolvedReferenceError, match="the dog"):
        build(grammar, lexicon, "The dog is cute.")


def test_pronoun_agreement_never_violated(grammar, lexicon):
    corpus = [
        ("Brad was born in Seattle. It is a beautiful place.", "n"),
        ("Mary has a dog. She is smart.", "f"),
        ("Tom has a dog. It is cute.", "n"),
        ("Tom has a dog. He is smart.", "m"),
    ]
    for doc, gender in corpus:
        b = build(grammar, lexicon, doc)
        kind, word, ref = b.resolutions[-1]
        assert kind == "pronoun"
        assert ref.gender == gender


def test_repeated_proper_noun_reuses_referent(grammar, lexicon):
    b = build(grammar, lexicon, "John buys a coke. John buys a lobster.")
    johns = [r for r in b.root.universe if r.constant == "John"]
    assert len(johns) == 1


# --- scope and structural invariants ---------------------------------------------


def test_scope_checker_rejects_escaped_referent():
    root = DRS()
    stray = Referent("X", 1, 1, "object", "common", noun="bird")
    sub = root.subordinate()
    sub.declare(stray)
    root.add(Complex("neg", (sub,)))
    root.add(Simple("predicate", (Referent("E", 1, 2, "event", "event"), "fly", stray), (1, 2)))
    with pytest.raises(ScopeError):
        root.check_scope()


def test_only_eight_predicates_allowed():
    with pytest.raises(DrsError):
        Simple("owns", ("A", "B"), (1, 1))


def test_default_operator_needs_two_boxes():
    with pytest.raises(DrsError):
        Complex("default", (DRS(),))


def test_attachment_determinism(grammar, lexicon, discount_doc):
    b1 = build(grammar, lexicon, discount_doc)
    b2 = build(grammar, lexicon, discount_doc)
    assert b1.root.pretty() == b2.root.pretty()


def test_condition_count_sums_over_sentences(grammar, lexicon, discount_doc):
    b = build(grammar, lexicon, discount_doc)
    assert sum(len(r.conditions) for r in b.records) == len(b.root.conditions)


# --- annotations --------------------------------------------------------------------


def test_peel_annotation_forms():
    label, ann, rest = peel_annotation(tokenize("[9.m] (except) If a customer buys a coke."))
    assert label == "9.m"
    assert ann == ["except"]
    assert rest[0] == "If"
    _, ann2, _ = peel_annotation(tokenize("(strict) Obama won the presidential election."))
    assert ann2 == ["strict"]
    _, ann3, _ = peel_annotation(tokenize("(conflict constraint) A customer gets at most one discount for any product."))
    assert ann3 == ["conflict", "constraint"]


def test_strict_mode_recorded(grammar, lexicon):
    b = build(grammar, lexicon, "(strict) Every penguin is a bird.")
    assert b.records[0].mode == "strict"


def test_default_mode_is_defeasible(grammar, lexicon):
    b = build(grammar, lexicon, "Every penguin is a bird.")
    assert b.records[0].mode == "defeasible"


def test_except_binds_to_previous_sentence(grammar, lexicon):
    b = build(grammar, lexicon,
              "If a customer buys a beverage then the customer gets a discount of 1.50 dollars for the beverage. "
              "(except) If a customer is a store-member and buys a beverage then the customer gets a discount of 2.50 dollars for the beverage.")
    rec = b.records[1]
    assert rec.exception == ("except_prev", ("p1.s1",))


def test_except_on_first_sentence_rejected(grammar, lexicon):
    with pytest.raises(AnnotationError):
        build(grammar, lexicon, "(except) Tom walks.")


def test_exception_to_dangling_target_rejected(grammar, lexicon):
    with pytest.raises(AnnotationError):
        build(grammar, lexicon, "(exception to 9.z) Tom walks.")


def test_cancel_conditional_extracts_targets(grammar, lexicon):
    doc = (
        "[8.b] If a customer buys a beverage then the customer gets a discount of 1.50 dollars for the beverage.\n"
        "If Amazon is blacklisted, then cancel 8.b.\n"
    )
    b = build(grammar, lexicon, doc)
    assert b.records[1].cancel_targets == ("8.b",)


def test_cancel_dangling_target_rejected(grammar, lexicon):
    with pytest.raises(AnnotationError):
        build(grammar, lexicon, "If Amazon is blacklisted, then cancel 8.z.")


def test_positional_ids(grammar, lexicon):
    b = build(grammar, lexicon, "Tom walks. Mary has a dog.\n\nTom has a dog.")
    assert [r.id for r in b.records] == ["p1.s1", "p1.s2", "p2.s1"]


def test_parse_failure_reports_position_and_suggestions(grammar, lexicon):
    b = DocumentBuilder(grammar, lexicon)
    with pytest.raises(SentenceError) as exc:
        b.add_sentence("Tom walks walks.")
    assert "breaks after token" in str(exc.value)
    assert exc.value.suggestions


def test_rejected_sentence_leaves_no_trace(grammar, lexicon):
    b = DocumentBuilder(grammar, lexicon)
    b.add_sentence("Mary has a dog.")
    with pytest.raises(UnresolvedReferenceError):
        b.add_sentence("A bird eats the worm.")  # fails mid-build
    # the phantom bird must not be resolvable
    with pytest.raises(UnresolvedReferenceError):
        b.add_sentence("The bird flies.")
    rec = b.add_sentence("Tom has a dog.")
    assert rec.id == "p1.s2"
    assert [r.label for r in b.root.universe] == ["A", "B", "C", "D", "E", "F"]
    b.root.check_scope()


def test_unknown_word_aborts_sentence(grammar, lexicon):
    b = DocumentBuilder(grammar, lexicon)
    with pytest.raises(Exception, match="zzzz"):
        b.add_sentence("Tom zzzz.")


def test_illegal_word_rejected(grammar, lexicon):
    b = DocumentBuilder(grammar, lexicon)
    with pytest.raises(Exception, match="could"):
        b.add_sentence("Tom could walk.")
