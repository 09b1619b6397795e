"""Concrete syntax: parsers and printers for process files (.ccs),
formula files (.mu) and abstraction scripts (.abst), plus subterm paths.

Grammar summary (CCS), tightest binding first:

    postfix   E\\{a,b}  E\\SetName   restriction
              E\\\\{a,b}             hiding
              E[new/old, ...]      relabelling (maps old to new)
    prefix    a.E  'a.E  tau.E
    parallel  E | F                (left associative)
    choice    E + F                (n-ary, flattened)

Declarations: ``agent Name = expr;`` and ``set Name = {a, b};``.
Comments run from ``#`` to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import logic
from .core import (
    Action,
    ActionSet,
    Const,
    Expr,
    Family,
    Hide,
    NIL,
    Nil,
    Par,
    Prefix,
    Relabel,
    Relabelling,
    Restrict,
    Sum,
    TAU,
    children_of,
    coname,
    mk_sum,
    name,
    with_children,
)
from .errors import ParseError, PathError
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
    alpha_rename,
    ff,
    expand_macro_cycle,
    tt,
)

# ---------------------------------------------------------------------------
# Lexer

_SYMBOLS = [
    "[[", "]]", "<<", ">>", "\\\\", "(", ")", "{", "}", "[", "]",
    "+", "|", ".", ",", ";", "=", "/", ":", "-", "\\", "'", "<", ">", "&",
]

_KEYWORDS = {
    "agent", "set", "prop", "tau", "eps", "tt", "ff", "max", "min",
    "cycle", "step",
}


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", a keyword, or a symbol
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = word if word in _KEYWORDS else "ident"
            toks.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if c.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token(sym, sym, line, col))
                i += len(sym)
                col += len(sym)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def accept(self, kind: str) -> Optional[Token]:
        if self.at(kind):
            return self.next()
        return None

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            self.fail(f"expected {kind!r}, found {t.text!r}")
        return self.next()

    def fail(self, message: str) -> None:
        t = self.peek()
        raise ParseError(message, t.line, t.column)


# ---------------------------------------------------------------------------
# Subterm paths


@dataclass(frozen=True)
class Path:
    """Address of a subterm: a constant plus child indices from its body.
    Child numbering: Prefix body 0; Sum children in written order;
    Par left 0 right 1; postfix operators body 0."""

    constant: str
    steps: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.steps:
            return self.constant
        return self.constant + ":" + ".".join(str(s) for s in self.steps)

    @staticmethod
    def parse(text: str) -> "Path":
        if ":" not in text:
            return Path(text)
        head, _, tail = text.partition(":")
        try:
            steps = tuple(int(s) for s in tail.split("."))
        except ValueError:
            raise PathError(f"malformed path: {text}") from None
        return Path(head, steps)


def resolve_path(family: Family, path: Path) -> Expr:
    table = family.table
    if path.constant not in table:
        raise PathError(f"path names unknown constant {path.constant}")
    term = table[path.constant]
    for depth, i in enumerate(path.steps):
        kids = children_of(term)
        if i < 0 or i >= len(kids):
            raise PathError(
                f"path {path} invalid at step {depth}: "
                f"node has {len(kids)} children"
            )
        term = kids[i]
    return term


def replace_at_path(family: Family, path: Path, new: Expr) -> Family:
    def rebuild(term: Expr, steps: tuple[int, ...]) -> Expr:
        if not steps:
            return new
        kids = list(children_of(term))
        i = steps[0]
        if i < 0 or i >= len(kids):
            raise PathError(f"path {path} does not resolve")
        kids[i] = rebuild(kids[i], steps[1:])
        return with_children(term, tuple(kids))

    resolve_path(family, path)  # validate early, uniform errors
    defs = []
    for n, body in family.defs:
        if n == path.constant:
            body = rebuild(body, path.steps)
        defs.append((n, body))
    return Family(tuple(defs), family.root)


# ---------------------------------------------------------------------------
# CCS parser


@dataclass(frozen=True)
class SourceFile:
    family: Family
    sets: dict[str, ActionSet] = field(hash=False, default_factory=dict)


class _CcsParser:
    def __init__(self, ts: TokenStream):
        self.ts = ts
        self.sets: dict[str, ActionSet] = {}
        self.defs: list[tuple[str, Expr]] = []

    def parse(self) -> SourceFile:
        while not self.ts.at("eof"):
            if self.ts.accept("set"):
                self.set_def()
            elif self.ts.accept("agent"):
                self.agent_def()
            else:
                self.ts.fail("expected 'agent' or 'set' declaration")
        if not self.defs:
            self.ts.fail("no agent definitions")
        root = self.defs[-1][0]
        return SourceFile(Family(tuple(self.defs), root), self.sets)

    def set_def(self) -> None:
        nm = self.ts.expect("ident").text
        if nm in self.sets:
            self.ts.fail(f"duplicate set {nm}")
        self.ts.expect("=")
        aset = self.action_set()
        self.ts.expect(";")
        self.sets[nm] = aset

    def agent_def(self) -> None:
        nm = self.ts.expect("ident").text
        if any(n == nm for n, _ in self.defs):
            self.ts.fail(f"duplicate agent {nm}")
        self.ts.expect("=")
        body = self.expr()
        self.ts.expect(";")
        self.defs.append((nm, body))

    def action_set(self) -> ActionSet:
        if self.ts.at("ident"):
            nm = self.ts.next().text
            if nm not in self.sets:
                self.ts.fail(f"unknown set name {nm}")
            return self.sets[nm]
        self.ts.expect("{")
        members: set[Action] = set()
        if not self.ts.at("}"):
            while True:
                tok = self.ts.peek()
                if tok.kind == "tau":
                    self.ts.fail("tau cannot occur in a restriction or hiding set")
                members.add(self.action())
                if not self.ts.accept(","):
                    break
        self.ts.expect("}")
        return ActionSet(frozenset(members))

    def action(self) -> Action:
        if self.ts.accept("'"):
            return coname(self.ts.expect("ident").text)
        if self.ts.accept("tau"):
            return TAU
        return name(self.ts.expect("ident").text)

    # precedence: sum < par < prefix < postfix
    def expr(self) -> Expr:
        terms = [self.par_expr()]
        while self.ts.accept("+"):
            terms.append(self.par_expr())
        return mk_sum(terms) if len(terms) > 1 else terms[0]

    def par_expr(self) -> Expr:
        e = self.prefix_expr()
        while self.ts.accept("|"):
            e = Par(e, self.prefix_expr())
        return e

    def prefix_expr(self) -> Expr:
        start = self.ts.pos
        if self.ts.at("'") or self.ts.at("tau") or self.ts.at("ident"):
            a = self.action_or_none()
            if a is not None and self.ts.accept("."):
                return Prefix(a, self.prefix_expr())
            self.ts.pos = start
        return self.postfix_expr()

    def action_or_none(self) -> Optional[Action]:
        if self.ts.accept("'"):
            tok = self.ts.accept("ident")
            return coname(tok.text) if tok else None
        if self.ts.accept("tau"):
            return TAU
        tok = self.ts.accept("ident")
        return name(tok.text) if tok else None

    def postfix_expr(self) -> Expr:
        e = self.atom()
        while True:
            if self.ts.accept("\\\\"):
                e = Hide(e, self.action_set())
            elif self.ts.accept("\\"):
                e = Restrict(e, self.action_set())
            elif self.ts.at("["):
                e = Relabel(e, self.relabelling())
            else:
                return e

    def relabelling(self) -> Relabelling:
        self.ts.expect("[")
        mapping: dict[str, str] = {}
        while True:
            new = self.ts.expect("ident").text
            self.ts.expect("/")
            old = self.ts.expect("ident").text
            if old in mapping:
                self.ts.fail(f"label {old} relabelled twice")
            mapping[old] = new
            if not self.ts.accept(","):
                break
        self.ts.expect("]")
        return Relabelling.of(mapping)

    def atom(self) -> Expr:
        if self.ts.accept("("):
            e = self.expr()
            self.ts.expect(")")
            return e
        if self.ts.at("int"):
            tok = self.ts.next()
            if tok.text != "0":
                self.ts.fail("the only numeric process is 0")
            return NIL
        if self.ts.at("ident"):
            return Const(self.ts.next().text)
        self.ts.fail("expected a process expression")


def parse_ccs(text: str) -> SourceFile:
    """Parse a .ccs source into a Family (root = last agent) plus its
    named action sets."""
    return _CcsParser(TokenStream(tokenize(text))).parse()


# ---------------------------------------------------------------------------
# Printer


def print_action(a: Action) -> str:
    return str(a)


def _print_set(s: ActionSet) -> str:
    return "{" + ", ".join(str(a) for a in sorted(s.members)) + "}"


def print_expr(e: Expr) -> str:
    # parenthesization is the inverse of the precedence table above;
    # right-nested Par is parenthesized so tree shape round-trips
    def p(e: Expr, level: int) -> str:
        # level: 0 sum context, 1 par, 2 prefix body, 3 postfix operand
        if isinstance(e, Nil):
            return "0"
        if isinstance(e, Const):
            return e.name
        if isinstance(e, Sum):
            s = " + ".join(p(c, 1) for c in e.children)
            return f"({s})" if level >= 1 else s
        if isinstance(e, Par):
            s = f"{p(e.left, 1)} | {p(e.right, 2)}"
            return f"({s})" if level >= 2 else s
        if isinstance(e, Prefix):
            s = f"{e.action}.{p(e.body, 2)}"
            return f"({s})" if level >= 3 else s
        if isinstance(e, Restrict):
            return f"{p(e.body, 3)}\\{_print_set(e.aset)}"
        if isinstance(e, Hide):
            return f"{p(e.body, 3)}\\\\{_print_set(e.aset)}"
        if isinstance(e, Relabel):
            return f"{p(e.body, 3)}{e.f}"
        raise TypeError(f"not a process expression: {e!r}")

    return p(e, 0)


def print_family(family: Family) -> str:
    """Canonical textual form; parse_ccs(print_family(F)).family == F
    provided the family root is the last definition."""
    lines = [f"agent {n} = {print_expr(body)};" for n, body in family.defs]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Mu-calculus parser


class _MuParser:
    """Parses .mu files.  A parameterised prop body is kept as a token
    slice and re-parsed at each invocation with the formal set names
    bound to the argument sets."""

    def __init__(self, ts: TokenStream, sets: dict[str, ActionSet]):
        self.ts = ts
        self.sets = dict(sets)
        # name -> (formals, body token slice incl. trailing ';')
        self.props: dict[str, tuple[list[str], list[Token]]] = {}

    def parse(self) -> dict[str, Formula]:
        out: dict[str, Formula] = {}
        while not self.ts.at("eof"):
            if self.ts.accept("set"):
                self.set_def()
                continue
            self.ts.expect("prop")
            nm = self.ts.expect("ident").text
            if nm in self.props:
                self.ts.fail(f"duplicate prop {nm}")
            formals: list[str] = []
            if self.ts.accept("("):
                while not self.ts.at(")"):
                    formals.append(self.ts.expect("ident").text)
                    if not self.ts.accept(","):
                        break
                self.ts.expect(")")
            self.ts.expect("=")
            start = self.ts.pos
            depth = 0
            while depth > 0 or not self.ts.at(";"):
                if self.ts.at("eof"):
                    self.ts.fail("unterminated prop body (missing ';')")
                tok = self.ts.next()
                if tok.kind == "(":
                    depth += 1
                elif tok.kind == ")":
                    depth -= 1
            body_toks = self.ts.tokens[start : self.ts.pos]
            self.ts.expect(";")
            self.props[nm] = (formals, body_toks)
            if not formals:
                out[nm] = alpha_rename(self.parse_body(body_toks, {}))
        return out

    def parse_body(self, toks: list[Token], extra_sets: dict[str, ActionSet]) -> Formula:
        eof = toks[-1] if toks else self.ts.tokens[-1]
        sub = TokenStream(toks + [Token("eof", "", eof.line, eof.column)])
        saved, self.ts = self.ts, sub
        saved_sets = self.sets
        self.sets = {**self.sets, **extra_sets}
        try:
            f = self.formula(bound=set())
            if not self.ts.at("eof"):
                self.ts.fail("trailing tokens after formula")
            return f
        finally:
            self.ts = saved
            self.sets = saved_sets

    def set_def(self) -> None:
        nm = self.ts.expect("ident").text
        self.ts.expect("=")
        if self.ts.at("ident"):
            ref = self.ts.next().text
            if ref not in self.sets:
                self.ts.fail(f"unknown set name {ref}")
            self.sets[nm] = self.sets[ref]
        else:
            self.ts.expect("{")
            members: set[Action] = set()
            if not self.ts.at("}"):
                while True:
                    members.add(self.action())
                    if not self.ts.accept(","):
                        break
            self.ts.expect("}")
            self.sets[nm] = ActionSet(frozenset(members))
        self.ts.expect(";")

    def action(self) -> Action:
        if self.ts.accept("'"):
            return coname(self.ts.expect("ident").text)
        if self.ts.accept("tau"):
            return TAU
        if self.ts.accept("eps"):
            return logic.EPS
        return name(self.ts.expect("ident").text)

    def label_set(self, close: str, weak: bool) -> LabelSet:
        comp = bool(self.ts.accept("-"))
        members: set[Action] = set()
        while True:
            tok = self.ts.peek()
            if tok.kind == "ident" and tok.text in self.sets:
                self.ts.next()
                members.update(self.sets[tok.text].members)
            else:
                a = self.action()
                if weak and a.is_tau:
                    self.ts.fail("tau is not a weak modality label")
                if not weak and a.is_eps:
                    self.ts.fail("eps is only valid inside weak modalities")
                members.add(a)
            if not self.ts.accept(","):
                break
        self.ts.expect(close)
        return LabelSet(frozenset(members), complement=comp)

    def member_set(self) -> ActionSet:
        """A plain positive set, used for prop/cycle arguments."""
        tok = self.ts.peek()
        if tok.kind == "ident" and tok.text in self.sets:
            self.ts.next()
            return self.sets[tok.text]
        self.ts.expect("{")
        members: set[Action] = set()
        if not self.ts.at("}"):
            while True:
                members.add(self.action())
                if not self.ts.accept(","):
                    break
        self.ts.expect("}")
        return ActionSet(frozenset(members))

    def formula(self, bound: set[str]) -> Formula:
        left = self.and_term(bound)
        while self.ts.accept("|"):
            left = Or(left, self.and_term(bound))
        return left

    def and_term(self, bound: set[str]) -> Formula:
        left = self.unary(bound)
        while self.ts.accept("&"):
            left = And(left, self.unary(bound))
        return left

    def unary(self, bound: set[str]) -> Formula:
        ts = self.ts
        if ts.accept("tt"):
            return tt()
        if ts.accept("ff"):
            return ff()
        if ts.accept("("):
            f = self.formula(bound)
            ts.expect(")")
            return f
        if ts.at("-"):
            ts.fail("negation is not available: formulas are in positive normal form")
        if ts.accept("[["):
            ls = self.label_set("]]", weak=True)
            return WeakBox(ls, self.unary(bound))
        if ts.accept("<<"):
            ls = self.label_set(">>", weak=True)
            return WeakDiamond(ls, self.unary(bound))
        if ts.accept("["):
            ls = self.label_set("]", weak=False)
            return Box(ls, self.unary(bound))
        if ts.accept("<"):
            ls = self.label_set(">", weak=False)
            return Diamond(ls, self.unary(bound))
        if ts.accept("max"):
            z = ts.expect("ident").text
            ts.expect(".")
            return Nu(z, self.formula(bound | {z}))
        if ts.accept("min"):
            z = ts.expect("ident").text
            ts.expect(".")
            return Mu(z, self.formula(bound | {z}))
        if ts.accept("cycle"):
            ts.expect("(")
            l1 = self.member_set()
            ts.expect(";")
            l2 = self.member_set()
            ts.expect(")")
            return expand_macro_cycle(
                LabelSet(frozenset(l1.members)), LabelSet(frozenset(l2.members))
            )
        if ts.at("ident"):
            nm = ts.next().text
            if ts.at("("):
                return self.invocation(nm)
            if nm in bound:
                return Var(nm)
            ts.fail(f"unbound variable {nm}")
        ts.fail("expected a formula")

    def invocation(self, nm: str) -> Formula:
        if nm not in self.props:
            self.ts.fail(f"unknown prop {nm}")
        formals, body_toks = self.props[nm]
        self.ts.expect("(")
        args: list[ActionSet] = []
        if not self.ts.at(")"):
            while True:
                args.append(self.member_set())
                if not self.ts.accept(";"):
                    break
        self.ts.expect(")")
        if len(args) != len(formals):
            self.ts.fail(f"prop {nm} takes {len(formals)} set arguments")
        return self.parse_body(body_toks, dict(zip(formals, args)))


def parse_mu(text: str, sets: Optional[dict[str, ActionSet]] = None) -> dict[str, Formula]:
    """Parse a .mu file into named closed formulas.  Parameterised props
    are accepted as definitions but only zero-parameter props are
    returned."""
    return _MuParser(TokenStream(tokenize(text)), sets or {}).parse()


# ---------------------------------------------------------------------------
# Abstraction scripts


@dataclass(frozen=True)
class RuleStep:
    rule: str
    target: Optional[Path] = None
    params: tuple[tuple[str, object], ...] = ()

    @property
    def param_map(self) -> dict[str, object]:
        return dict(self.params)

    def __str__(self) -> str:
        parts = [f"step {self.rule}"]
        if self.target is not None:
            parts.append(f"target={self.target}")
        for k, v in self.params:
            if isinstance(v, ActionSet):
                parts.append(f"{k}={{{','.join(str(a) for a in sorted(v.members))}}}")
            elif isinstance(v, Relabelling):
                parts.append(f"{k}=[{','.join(f'{new}/{old}' for old, new in v.pairs)}]")
            else:
                parts.append(f"{k}={v}")
        return " ".join(parts)


@dataclass(frozen=True)
class Script:
    steps: tuple[RuleStep, ...]

    def __str__(self) -> str:
        return "".join(f"{s}\n" for s in self.steps)


def _parse_step_value(key: str, ts: TokenStream) -> object:
    if ts.accept("{"):
        members: set[Action] = set()
        if not ts.at("}"):
            while True:
                if ts.accept("'"):
                    members.add(coname(ts.expect("ident").text))
                else:
                    members.add(name(ts.expect("ident").text))
                if not ts.accept(","):
                    break
        ts.expect("}")
        return ActionSet(frozenset(members))
    if ts.accept("["):
        mapping: dict[str, str] = {}
        while True:
            new = ts.expect("ident").text
            ts.expect("/")
            old = ts.expect("ident").text
            mapping[old] = new
            if not ts.accept(","):
                break
        ts.expect("]")
        return Relabelling.of(mapping)
    ident = ts.expect("ident").text
    if key == "target" or ts.at(":"):
        steps: list[int] = []
        if ts.accept(":"):
            while True:
                steps.append(int(ts.expect("int").text))
                if not ts.accept("."):
                    break
        return Path(ident, tuple(steps))
    return ident


def parse_script(text: str) -> Script:
    """Parse an .abst script: one ``step <rule-id> [key=value ...]``
    per line, '#' comments."""
    from .abstraction import RULES  # late import, avoids a cycle

    steps: list[RuleStep] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            toks = tokenize(line)
        except ParseError as exc:
            raise ParseError(exc.message, lineno, exc.column) from None
        ts = TokenStream(toks)
        if not ts.accept("step"):
            raise ParseError("script lines start with 'step'", lineno, 1)
        rule_tok = ts.peek()
        if rule_tok.kind not in ("ident",) and rule_tok.kind not in _KEYWORDS:
            raise ParseError("expected rule id", lineno, rule_tok.column)
        rule = ts.next().text
        while ts.accept("-"):
            part = ts.peek()
            if part.kind != "ident" and part.kind not in _KEYWORDS:
                raise ParseError("expected rule id", lineno, part.column)
            rule += "-" + ts.next().text
        if rule not in RULES:
            raise ParseError(f"unknown rule id {rule}", lineno, rule_tok.column)
        target: Optional[Path] = None
        params: list[tuple[str, object]] = []
        while not ts.at("eof"):
            key = ts.expect("ident").text
            ts.expect("=")
            value = _parse_step_value(key, ts)
            if key == "target":
                target = value  # type: ignore[assignment]
            else:
                params.append((key, value))
        steps.append(RuleStep(rule, target, tuple(params)))
    return Script(tuple(steps))
