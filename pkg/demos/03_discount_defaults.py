"""The store-discount document end to end.

Seventeen sentences with a refutation (the member discount overrides the
base one), a mutual rebuttal (two seafood discounts with no priority),
and a cancellation (blacklisted members lose their member discounts).
The three queries land exactly where the worked example says: $2.50,
no answer, $5.00.
"""

import importlib.resources

from cnlkit.session import Session

doc = (importlib.resources.files("cnlkit") / "data" / "fixtures" / "discount.cnl").read_text()
print(doc)

session = Session()
session.load_document(doc)

print("translated program:")
print(session.program_text())

for goal in (
    "How much discount does John get for buying a coke?",
    "discount(John, lobster, ?A)",
    "discount(Mary, salmon, ?A)",
):
    answer = session.ask(goal)
    print("%-55s -> %s" % (goal, answer.rendered))
    for p in answer.provenance:
        print("     via rule %s (sentence %s)" % (p["rule"], p.get("sentence", "?")))
