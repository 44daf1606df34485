"""The answer-set solver on the bundled puzzles, and ground circumscription.

The marathon and jobs puzzles each have exactly one answer set; the
caring-parents program shows strong vs weak exceptions; the eagle theory
shows abnormality minimization.
"""

import importlib.resources

from cnlkit.asp import asp_query, format_answer_set, parse_asp, parse_asp_goal, stable_models
from cnlkit.minmodel import circ_entails, minimal_models, parse_theory


def fixture(name):
    return (importlib.resources.files("cnlkit") / "data" / "fixtures" / name).read_text()


for name in ("marathon.asp", "jobs.asp"):
    prog = parse_asp(fixture(name))
    models = stable_models(prog)
    print("%s: %d answer set(s)" % (name, len(models)))
    print("  " + format_answer_set(models[0], prog.show or [("hold", 2)]))

care = parse_asp(fixture("care.asp"))
print("\ncaring parents:")
print("  answer set:", format_answer_set(stable_models(care)[0]))
for goal in ("-care(john,sam)", "care(alice,sam)", "child(sam)"):
    print("  %-18s -> %s" % (goal, asp_query(care, parse_asp_goal(goal))))

print("\neagle circumscription:")
theory = parse_theory(fixture("eagle.circ"))
print("  minimal models:", [sorted(m) for m in minimal_models(theory)])
print("  fly(eagle) entailed:", circ_entails(theory, "fly(eagle)"))
print("  ab(eagle) entailed:", circ_entails(theory, "ab(eagle)"))
