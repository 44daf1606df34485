from .syntax import (
    Atom,
    BodyAtom,
    Builtin,
    Lit,
    LpdaParseError,
    Program,
    Rule,
    parse_program,
    parse_literal,
    parse_goal,
)
from .engine import (
    Engine,
    GroundProgram,
    Interpretation,
    QueryResult,
    UnsafeRuleError,
    default_argumentation_theory,
    ground,
    reduce_defeasible,
    wfm,
)

__all__ = [
    "Atom",
    "BodyAtom",
    "Builtin",
    "Engine",
    "GroundProgram",
    "Interpretation",
    "Lit",
    "LpdaParseError",
    "Program",
    "QueryResult",
    "Rule",
    "UnsafeRuleError",
    "default_argumentation_theory",
    "ground",
    "parse_goal",
    "parse_literal",
    "parse_program",
    "reduce_defeasible",
    "wfm",
]
