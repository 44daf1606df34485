"""Scalar implicatures and the two disjunction encodings.

"Some students pass exam1" asserts witnesses and, defeasibly, that not
all of them pass; a later strict all-rule refutes the implicature.  The
predicate scale <cute, beautiful, stupendous> entails downward and
implicates the negation of the next-stronger step.  Plain "or" is
inclusive, "either ... or" exclusive; only the exclusive reading turns
two positive vote facts into an inconsistency.
"""

from cnlkit.lpda import Engine, parse_goal, parse_program
from cnlkit.session import Session


def program_of(doc):
    s = Session()
    s.load_document(doc)
    return s.program_text()


some = program_of("Some students pass exam1.")
print(some)
e = Engine(parse_program(some))
print("neg pass(#2, e1):", e.interpretation.value(parse_goal("neg pass(#2, e1)")[0].lit))

stronger = program_of("Some students pass exam1. (strict) All students pass exam1.")
e2 = Engine(parse_program(stronger))
print("...after the all-rule:", e2.interpretation.value(parse_goal("neg pass(#2, e1)")[0].lit))
print()

beautiful = program_of("Mary is beautiful.")
print(beautiful)
e3 = Engine(parse_program(beautiful))
print("cute(Mary):", e3.query(parse_goal("cute(Mary)")).status)
print("stupendous(Mary):", e3.query(parse_goal("stupendous(Mary)")).status)
print()

for doc in ("John votes for Obama or Romney.",
            "John votes either for Obama or for Romney."):
    text = program_of(doc)
    print(doc)
    print(text)
    with_facts = text + "vote(John, Obama).\nvote(John, Romney).\n"
    engine = Engine(parse_program(with_facts))
    print("with both vote facts, inconsistent:", engine.interpretation.inconsistent)
    print()
