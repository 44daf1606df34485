"""Controlled-natural-language authoring and defeasible-reasoning toolkit.

The package bundles a desk-scale CNL pipeline (lexicon, chart parser,
discourse representation structures, translation to logic programs with
defaults) together with three small reasoning engines: a well-founded
model engine for defeasible programs, an answer-set solver, and a ground
circumscription checker.
"""

__version__ = "0.1.0"
