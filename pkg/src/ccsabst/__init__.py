"""ccsabst: a CCS / modal mu-calculus verification workbench.

Parse CCS process definitions, build finite labelled transition
systems, model-check mu-calculus formulas, decide the weak-simulation
preorder, and shrink state spaces with property-preserving abstraction
rules before checking.
"""

from .core import (
    Action,
    ActionSet,
    Const,
    DEFAULT_MAX_STATES,
    EPS,
    Expr,
    Family,
    Hide,
    Lts,
    NIL,
    Nil,
    Par,
    Prefix,
    Relabel,
    Relabelling,
    Restrict,
    Sum,
    TAU,
    build_lts,
    complement,
    coname,
    mk_sum,
    name,
    relabel_action,
    sort,
    successors,
)
from .errors import (
    CcsError,
    FormulaError,
    ParseError,
    PathError,
    RuleError,
    TruncatedLtsError,
    UndefinedConstantError,
)
from .logic import (
    And,
    Box,
    Diamond,
    Formula,
    LabelSet,
    Mu,
    Nu,
    Or,
    Var,
    WeakBox,
    WeakDiamond,
    check,
    check_table,
    classify,
    evaluate,
    expand_macro_cycle,
    ff,
    tt,
)
from .parsing import (
    Path,
    RuleStep,
    Script,
    SourceFile,
    parse_ccs,
    parse_mu,
    parse_script,
    print_expr,
    print_family,
    replace_at_path,
    resolve_path,
)
from .simulation import (
    SimWitness,
    WeakClosure,
    verify_step,
    weak_successors,
    weakly_simulated_by,
    witness_is_valid,
)
from .abstraction import (
    ApplicableRule,
    RULES,
    StepRecord,
    apply_rule,
    list_applicable,
    run_script,
)

__version__ = "0.1.0"
