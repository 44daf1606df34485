"""Chart parsing, predictive lookahead, and incremental edits.

The toy grammar below is the classic three-word example: two sentence
productions sharing a prefix, so the chart gets to reuse work, and an
agenda that behaves like a stack.
"""

from cnlkit.chart import EditOp, apply_edit, extract_trees, lookahead, parse
from cnlkit.grammar import compile_grammar
from cnlkit.lexicon import load_lexicon

grammar = compile_grammar(
    """
    S -> N Vb
    S -> N Vb Adv
    N -> tom
    Vb -> walks
    Adv -> slowly
    """
)
lexicon = load_lexicon("")

chart = parse(grammar, lexicon, "Tom walks slowly".split())
print("chart for 'Tom walks slowly':")
print(chart.dump())
print("trees:", [str(t) for t in extract_trees(chart)])

# what could follow a prefix?
prefix = parse(grammar, lexicon, "Tom walks".split())
la = lookahead(prefix)
print("\nafter 'Tom walks' the parser expects:", la.categories)
print("prefix is already a complete sentence:", la.sentence_complete)

# deleting the adverb only removes the edges that depended on it
before = {e.id for e in chart.edges.values()}
edited = apply_edit(chart, EditOp("delete", 2), grammar, lexicon)
print("\ndeleting 'slowly' removed edge ids:", sorted(before - set(edited.edges)))
print("equal to a fresh parse of 'Tom walks':",
      edited.edge_signatures() == prefix.edge_signatures())

# the shipped CNL grammar drives the same machinery
from cnlkit.session import default_grammar, default_lexicon

cnl_g, cnl_lex = default_grammar(), default_lexicon()
la2 = lookahead(parse(cnl_g, cnl_lex, ["every", "penguin"]))
print("\nafter 'every penguin' (CNL grammar):")
for cat, words in la2.categories:
    print("  %-6s %s" % (cat, " ".join(words)))
