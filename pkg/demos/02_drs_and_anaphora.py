"""Discourse representation structures and reference resolution.

A document grows one root DRS; every condition carries the
sentence/token index of the word that introduced it.  Pronouns pick the
nearest antecedent agreeing in gender and number, definites match noun
or synonym class, and ordinals count occurrences from the paragraph
start.
"""

from cnlkit.builder import DocumentBuilder
from cnlkit.session import default_grammar, default_lexicon

grammar, lexicon = default_grammar(), default_lexicon()


def show(doc):
    builder = DocumentBuilder(grammar, lexicon)
    builder.load_document(doc)
    print("---", doc.replace("\n", " / "))
    print(builder.root.pretty())
    for kind, surface, ref in builder.resolutions:
        print("  %s %r -> %s (introduced in sentence %d)" % (kind, surface, ref.label, ref.sid))
    print()


show("A bird eats a little worm. An eagle kills a large snake.")
show("Generally, birds fly.")
show("Brad was born in Seattle. It is a beautiful place.")
show("Tom has a dog. Mary has a dog. The first dog is cute. The second dog is smart.")
show("A fog hangs over Dreadsbury-Mansion. The mist is creepy.")
show("A customer enters a card that has a code.")
