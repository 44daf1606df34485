"""Command-line front end.

Subcommands: lex check, parse, translate, ask, asp solve, circ, repl,
serve.  The repl shows lookahead suggestions after every token, which is
the terminal version of the predictive editor.
"""

from __future__ import annotations

import argparse
import json
import sys

from .asp import AspParseError, format_answer_set, parse_asp, parse_asp_goal, asp_query, stable_models
from .builder import SentenceError, tokenize, split_sentences
from .chart import extract_trees, lookahead
from .grammar import load_grammar_file
from .lexicon import LexiconError, load_lexicon_file
from .minmodel import TheoryError, circ_entails, minimal_models, parse_theory
from .session import Session, default_grammar, default_lexicon, default_scales
from .translator import TranslationError, load_scales


def _session(args) -> Session:
    lexicon = load_lexicon_file(args.lexicon) if args.lexicon else default_lexicon()
    grammar = load_grammar_file(args.grammar) if args.grammar else default_grammar()
    if args.scales:
        with open(args.scales, encoding="utf-8") as fh:
            scales = load_scales(fh.read())
    else:
        scales = default_scales()
    return Session(lexicon, grammar, scales)


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lexicon", help="lexicon file (default: shipped core lexicon)")
    p.add_argument("--grammar", help="grammar file (default: shipped core grammar)")
    p.add_argument("--scales", help="scale table file (default: shipped scales)")
    p.add_argument("--format", choices=("text", "json"), default="text")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cnlkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_lex = sub.add_parser("lex", help="lexicon utilities")
    lex_sub = p_lex.add_subparsers(dest="lex_command", required=True)
    p_lex_check = lex_sub.add_parser("check", help="validate a lexicon file")
    p_lex_check.add_argument("file")

    p_parse = sub.add_parser("parse", help="parse a sentence, print chart and trees")
    _add_pipeline_flags(p_parse)
    p_parse.add_argument("text")

    p_tr = sub.add_parser("translate", help="translate a CNL document to a program")
    _add_pipeline_flags(p_tr)
    p_tr.add_argument("document")
    p_tr.add_argument("--drs", action="store_true", help="also print the DRS")

    p_ask = sub.add_parser("ask", help="answer a query against a document")
    _add_pipeline_flags(p_ask)
    p_ask.add_argument("document")
    p_ask.add_argument("query")

    p_asp = sub.add_parser("asp", help="answer-set utilities")
    asp_sub = p_asp.add_subparsers(dest="asp_command", required=True)
    p_solve = asp_sub.add_parser("solve", help="enumerate stable models of a program file")
    p_solve.add_argument("file")
    p_solve.add_argument("--limit", type=int, default=None)
    p_solve.add_argument("--query", help="ground conjunction to classify yes/no/unknown")
    p_solve.add_argument("--format", choices=("text", "json"), default="text")

    p_circ = sub.add_parser("circ", help="ground circumscription over a theory file")
    p_circ.add_argument("file")
    p_circ.add_argument("--query", help="formula to test for circumscriptive entailment")
    p_circ.add_argument("--format", choices=("text", "json"), default="text")

    p_repl = sub.add_parser("repl", help="token-by-token editor with lookahead")
    _add_pipeline_flags(p_repl)

    p_serve = sub.add_parser("serve", help="run the HTTP/JSON service")
    _add_pipeline_flags(p_serve)
    p_serve.add_argument("--port", type=int, default=8777)
    p_serve.add_argument("--host", default="127.0.0.1")

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (LexiconError, SentenceError, TranslationError, AspParseError, TheoryError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "lex":
        return cmd_lex_check(args)
    if args.command == "parse":
        return cmd_parse(args)
    if args.command == "translate":
        return cmd_translate(args)
    if args.command == "ask":
        return cmd_ask(args)
    if args.command == "asp":
        return cmd_asp_solve(args)
    if args.command == "circ":
        return cmd_circ(args)
    if args.command == "repl":
        return cmd_repl(args)
    if args.command == "serve":
        return cmd_serve(args)
    raise ValueError("unknown command")


def cmd_lex_check(args) -> int:
    lex = load_lexicon_file(args.file)
    print("%d entries, %d synonym pairs, %d illegal words" % (len(lex.entries), len(lex.syn_pairs), len(lex.illegal)))
    for w in lex.warnings:
        print("warning: %s" % w)
    return 0


def cmd_parse(args) -> int:
    session = _session(args)
    tokens = [t for s in split_sentences(tokenize(args.text)) for t in s]
    chart = session.parse_tokens(tokens)
    trees = extract_trees(chart)
    la = lookahead(chart)
    if args.format == "json":
        print(json.dumps({
            "edges": chart.dump().splitlines(),
            "trees": [str(t) for t in trees],
            "lookahead": {"categories": la.category_names(), "words": la.words()},
            "complete": la.sentence_complete,
        }, indent=2))
    else:
        print(chart.dump(), end="")
        for t in trees:
            print("tree: %s" % t)
        if not trees:
            print("no complete parse; next: %s" % ", ".join(la.category_names()))
    return 0


def cmd_translate(args) -> int:
    session = _session(args)
    with open(args.document, encoding="utf-8") as fh:
        try:
            session.load_document(fh.read())
        except SentenceError as exc:
            print("error: %s" % exc, file=sys.stderr)
            return 2
    text = session.program_text()
    if args.format == "json":
        print(json.dumps({"program": text, "drs": session.drs_text()}, indent=2))
    else:
        print(text, end="")
        if args.drs:
            print("%% DRS")
            print(session.drs_text())
    return 0


def cmd_ask(args) -> int:
    session = _session(args)
    with open(args.document, encoding="utf-8") as fh:
        session.load_document(fh.read())
    answer = session.ask(args.query)
    if args.format == "json":
        print(json.dumps({
            "status": answer.status,
            "answers": answer.bindings,
            "provenance": answer.provenance,
            "inconsistent": answer.inconsistent,
            "rendered": answer.rendered,
        }, indent=2))
    else:
        print(answer.rendered)
        for p in answer.provenance:
            src = p.get("sentence", "?")
            print("  via rule %s (sentence %s)" % (p["rule"], src))
        if answer.inconsistent:
            print("warning: knowledge base is inconsistent", file=sys.stderr)
    return 0


def cmd_asp_solve(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        prog = parse_asp(fh.read())
    if args.query:
        verdict = asp_query(prog, parse_asp_goal(args.query))
        print(verdict)
        return 0 if verdict != "no-models" else 1
    models = stable_models(prog, limit=args.limit)
    if args.format == "json":
        print(json.dumps({"models": [sorted(str(a) for a in m.project(prog.show, prog.hide_all)) for m in models]}))
    else:
        for i, m in enumerate(models, start=1):
            print("answer %d: %s" % (i, format_answer_set(m, prog.show, prog.hide_all)))
        print("%d model(s)" % len(models))
    return 0 if models else 1


def cmd_circ(args) -> int:
    with open(args.file, encoding="utf-8") as fh:
        theory = parse_theory(fh.read())
    if args.query:
        verdict = circ_entails(theory, args.query)
        print("entailed" if verdict else "not entailed")
        return 0
    models = minimal_models(theory)
    if args.format == "json":
        print(json.dumps({"minimal_models": [sorted(m) for m in models]}))
    else:
        for m in models:
            print("{%s}" % ", ".join(sorted(m)))
        print("%d minimal model(s)" % len(models))
    return 0


def cmd_repl(args) -> int:
    session = _session(args)
    print("cnlkit repl; finish a sentence with '.', 'quit' to leave")
    tokens: list[str] = []
    while True:
        la = session.lookahead_for(tokens)
        hints = ", ".join("%s (%s)" % (c, " ".join(ws)) for c, ws in la.categories)
        if la.sentence_complete:
            hints = (hints + "; " if hints else "") + "'.' ends the sentence"
        print("  next: %s" % (hints or "nothing can follow"))
        try:
            line = input("> ").strip()
        except EOFError:
            return 0
        if line in ("quit", "exit"):
            return 0
        if not line:
            continue
        for tok in line.split():
            if tok == ".":
                try:
                    rec = session.add_sentence(" ".join(tokens) + " .")
                    print("committed %s (%s)" % (rec.id, rec.mode))
                except SentenceError as exc:
                    print("rejected: %s" % exc)
                tokens = []
            elif tok.endswith(".") and len(tok) > 1:
                tokens.append(tok[:-1])
                try:
                    rec = session.add_sentence(" ".join(tokens) + " .")
                    print("committed %s (%s)" % (rec.id, rec.mode))
                except SentenceError as exc:
                    print("rejected: %s" % exc)
                tokens = []
            elif tok == "?":
                print(session.ask(" ".join(tokens) + "?").rendered)
                tokens = []
            else:
                tokens.append(tok)


def cmd_serve(args) -> int:
    from .service import run_server

    session = _session(args)
    print("serving on http://%s:%d" % (args.host, args.port))
    run_server(args.host, args.port, session_factory=lambda: Session(session.lexicon, session.grammar, session.scales))
    return 0


if __name__ == "__main__":
    sys.exit(main())
