import pytest

from cnlkit.minmodel import (
    TheoryError,
    all_models,
    circ_entails,
    minimal_models,
    parse_formula,
    parse_theory,
)

EAGLE = """
bird(eagle).
-bird(eagle) | ab(eagle) | fly(eagle).
#minimize ab.
#vary fly.
"""


def test_eagle_unique_minimal_model():
    th = parse_theory(EAGLE)
    models = minimal_models(th)
    assert [sorted(m) for m in models] == [["bird(eagle)", "fly(eagle)"]]


def test_eagle_entailments():
    th = parse_theory(EAGLE)
    assert circ_entails(th, "fly(eagle)")
    assert not circ_entails(th, "ab(eagle)")


def test_empty_theory_minimizes_to_nothing():
    th = parse_theory("#minimize p.\n#atom p.\n")
    assert minimal_models(th) == [frozenset()]


def test_disjunction_minimal_models_exclude_both():
    th = parse_theory("p | q.\n#minimize p, q.\n")
    models = {frozenset(m) for m in minimal_models(th)}
    assert models == {frozenset({"p"}), frozenset({"q"})}


def test_wainer_extended_meaning():
    base = """
    many_passed.
    abn(c1) | not_all_passed.
    #minimize abn.
    #vary not_all_passed.
    """
    th = parse_theory(base)
    assert circ_entails(th, "not_all_passed")
    th2 = parse_theory(base + "abn(c1).\n")
    assert not circ_entails(th2, "not_all_passed")


def test_no_minimized_predicates_degenerates_to_classical():
    th = parse_theory("p | q.\n")
    assert {frozenset(m) for m in minimal_models(th)} == {frozenset(m) for m in all_models(th)}


def test_every_minimal_model_satisfies_all_clauses():
    th = parse_theory("p | q.\n-p | r.\n#minimize p.\n")
    for m in minimal_models(th):
        for clause in th.clauses:
            assert any((s.atom in m) == s.positive for s in clause)


def test_p_minimality_pairwise():
    th = parse_theory("p | q.\n#minimize p, q.\n")
    models = minimal_models(th)
    minimized = th.minimized

    def pext(m):
        return frozenset(a for a in m if a.split("(")[0] in minimized)

    for m1 in models:
        for m2 in models:
            if m1 is not m2:
                assert not (pext(m1) < pext(m2) and _fixed(th, m1) == _fixed(th, m2))


def _fixed(th, m):
    return frozenset(
        a for a in m
        if a.split("(")[0] not in th.minimized and a.split("(")[0] not in th.varied
    )


def test_entailment_monotone_in_conjunction():
    th = parse_theory(EAGLE)
    assert circ_entails(th, "fly(eagle) & bird(eagle)")
    assert circ_entails(th, "fly(eagle)")
    assert circ_entails(th, "bird(eagle)")
    # conj entailment implies conjunct entailment
    if circ_entails(th, "fly(eagle) & bird(eagle)"):
        assert circ_entails(th, "fly(eagle)")


def test_universe_size_guard():
    clauses = "\n".join("p%d." % i for i in range(25))
    with pytest.raises(TheoryError, match="too large"):
        parse_theory(clauses + "\n#minimize p0.\n")


def test_minimize_vary_overlap_rejected():
    with pytest.raises(TheoryError):
        parse_theory("p.\n#minimize p.\n#vary p.\n")


def test_formula_parser():
    f = parse_formula("-(p & q) | r")
    assert f[0] == "or"
    with pytest.raises(TheoryError):
        parse_formula("p & ")


def test_negated_entailment():
    th = parse_theory(EAGLE)
    assert circ_entails(th, "-ab(eagle)")
