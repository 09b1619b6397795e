"""The abstraction-rule catalog as a position-addressed rewrite engine.

Every rule rewrites a family into one that weakly simulates the
original at the root, so properties of the weak-box fragment proved on
the result transfer back.  Rules are addressed by id; term rules apply
at a subterm path, family rules act on whole definitions.  Macros
(push-hide, push-relabel, remove-tau-all) bundle chains of primitive
steps and can emit those chains for audit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

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
    build_lts,
    children_of,
    mk_sum,
    rename_constant,
    sum_children,
    with_children,
)
from .errors import RuleError
from .parsing import Path, RuleStep, Script, replace_at_path, resolve_path


# ---------------------------------------------------------------------------
# Rule registry

TERM_RULES = {
    "rest-hide": ("K",),
    "rest-relabel": ("f",),
    "hide-prefix": (),
    "hide-sum": (),
    "hide-par": (),
    "relabel-prefix": (),
    "relabel-sum": (),
    "relabel-par": (),
    "drop-nil-par": (),
    "drop-tau": (),
    "unfold": (),
    "fold": ("name",),
    "par-hide": ("K",),
    "par-relabel": ("f",),
}

FAMILY_RULES = {
    "merge": ("a", "b"),
    "drop-unguarded": ("a",),
    "push-hide": ("K",),
    "push-relabel": ("f",),
    "remove-tau-all": (),
}

RULES = {**TERM_RULES, **FAMILY_RULES}


def _want(params: dict, key: str, kind: type, rule: str):
    value = params.get(key)
    if value is None:
        raise RuleError(f"{rule}: missing parameter {key}")
    if not isinstance(value, kind):
        raise RuleError(f"{rule}: parameter {key} has the wrong type")
    return value


def _identity_outside(f: Relabelling, scope: frozenset[Action]) -> bool:
    from .core import name as _name

    return all(old == new or _name(old) in scope for old, new in f.pairs)


# ---------------------------------------------------------------------------
# Term rules


def _apply_term_rule(family: Family, rule: str, term: Expr, params: dict) -> Expr:
    if rule == "rest-hide":
        k = _want(params, "K", ActionSet, rule)
        if not isinstance(term, Restrict):
            raise RuleError("rest-hide applies to a restriction E\\L")
        if not k.closure() <= term.aset.closure():
            raise RuleError("rest-hide: K must be contained in L and its complements")
        return Restrict(Hide(term.body, k), term.aset)

    if rule == "rest-relabel":
        f = _want(params, "f", Relabelling, rule)
        if not isinstance(term, Restrict):
            raise RuleError("rest-relabel applies to a restriction E\\L")
        if not _identity_outside(f, term.aset.closure()):
            raise RuleError(
                "rest-relabel: f must be the identity outside L and its complements"
            )
        return Restrict(Relabel(term.body, f), term.aset)

    if rule == "hide-prefix":
        if not (isinstance(term, Hide) and isinstance(term.body, Prefix)):
            raise RuleError("hide-prefix applies to (a.E)\\\\L")
        pre = term.body
        if pre.action.is_tau or pre.action not in term.aset.closure():
            raise RuleError(
                "hide-prefix: prefix action must belong to L or its complements"
            )
        return Prefix(TAU, Hide(pre.body, term.aset))

    if rule == "hide-sum":
        if not (isinstance(term, Hide) and isinstance(term.body, Sum)):
            raise RuleError("hide-sum applies to (E + F)\\\\L")
        return mk_sum(Hide(c, term.aset) for c in term.body.children)

    if rule == "hide-par":
        if not (isinstance(term, Hide) and isinstance(term.body, Par)):
            raise RuleError("hide-par applies to (E | F)\\\\L")
        # L = complement(L) holds by the closure interpretation of sets
        inner = term.body
        return Par(Hide(inner.left, term.aset), Hide(inner.right, term.aset))

    if rule == "relabel-prefix":
        if not (isinstance(term, Relabel) and isinstance(term.body, Prefix)):
            raise RuleError("relabel-prefix applies to (a.E)[f]")
        pre = term.body
        return Prefix(term.f(pre.action), Relabel(pre.body, term.f))

    if rule == "relabel-sum":
        if not (isinstance(term, Relabel) and isinstance(term.body, Sum)):
            raise RuleError("relabel-sum applies to (E + F)[f]")
        return mk_sum(Relabel(c, term.f) for c in term.body.children)

    if rule == "relabel-par":
        if not (isinstance(term, Relabel) and isinstance(term.body, Par)):
            raise RuleError("relabel-par applies to (E | F)[f]")
        inner = term.body
        return Par(Relabel(inner.left, term.f), Relabel(inner.right, term.f))

    if rule == "drop-nil-par":
        if not isinstance(term, Par):
            raise RuleError("drop-nil-par applies to a parallel composition")
        if isinstance(term.right, Nil):
            return term.left
        if isinstance(term.left, Nil):  # symmetric reading, see module docs
            return term.right
        raise RuleError("drop-nil-par: neither component is 0")

    if rule == "drop-tau":
        if not (isinstance(term, Prefix) and term.action.is_tau):
            raise RuleError("drop-tau applies to tau.E")
        return term.body

    if rule == "unfold":
        if not isinstance(term, Const):
            raise RuleError("unfold applies to a process constant")
        return family.body(term.name)

    if rule == "par-hide":
        k = _want(params, "K", ActionSet, rule)
        return _par_distribute(term, lambda e: Hide(e, k), k.closure(), "par-hide")

    if rule == "par-relabel":
        f = _want(params, "f", Relabelling, rule)
        if not isinstance(term, Restrict):
            raise RuleError("par-relabel applies to a restricted parallel composition")
        if not _identity_outside(f, term.aset.closure()):
            raise RuleError(
                "par-relabel: f must be the identity outside L and its complements"
            )
        return _par_distribute(term, lambda e: Relabel(e, f), None, "par-relabel")

    raise RuleError(f"unknown term rule {rule}")


def _par_distribute(
    term: Expr,
    wrap: Callable[[Expr], Expr],
    k_closure: Optional[frozenset[Action]],
    rule: str,
) -> Expr:
    if not isinstance(term, Restrict):
        raise RuleError(f"{rule} applies to a restricted parallel composition")
    if k_closure is not None and not k_closure <= term.aset.closure():
        raise RuleError(f"{rule}: K must be contained in L and its complements")
    if not isinstance(term.body, Par):
        raise RuleError(f"{rule}: restricted body is not a parallel composition")

    def rebuild(e: Expr) -> Expr:
        if isinstance(e, Par):
            return Par(rebuild(e.left), rebuild(e.right))
        return wrap(e)

    return Restrict(rebuild(term.body), term.aset)


# ---------------------------------------------------------------------------
# Family rules


def _apply_merge(family: Family, params: dict) -> Family:
    a = _want(params, "a", str, "merge")
    b = _want(params, "b", str, "merge")
    if a == b:
        raise RuleError("merge: the two constants must differ")
    table = family.table
    if a not in table or b not in table:
        raise RuleError("merge: both constants must be defined")
    merged = mk_sum(sum_children(table[a]) + sum_children(table[b]))
    defs = []
    for n, body in family.defs:
        if n == b:
            continue
        if n == a:
            body = merged
        defs.append((n, rename_constant(body, b, a)))
    root = a if family.root == b else family.root
    return Family(tuple(defs), root)


def _apply_drop_unguarded(family: Family, params: dict) -> Family:
    a = _want(params, "a", str, "drop-unguarded")
    body = family.body(a)
    kids = sum_children(body)
    kept = tuple(c for c in kids if c != Const(a))
    if len(kept) == len(kids):
        raise RuleError(
            f"drop-unguarded: {a} has no unguarded occurrence of itself"
        )
    # all-children-removed degenerates to 0: A = A is deadlocked either way
    new_body = mk_sum(kept) if kept else NIL
    defs = tuple((n, new_body if n == a else b) for n, b in family.defs)
    return Family(defs, family.root)


def _apply_fold(family: Family, step: RuleStep) -> tuple[Family, tuple[str, ...]]:
    if step.target is None:
        raise RuleError("fold: missing target path")
    params = step.param_map
    term = resolve_path(family, step.target)
    requested = params.get("name")
    if requested is not None and not isinstance(requested, str):
        raise RuleError("fold: parameter name must be a constant name")
    table = family.table
    chosen = requested or "A"
    while chosen in table and table[chosen] != term:
        chosen = chosen + "_1"  # auto-suffix on collision, recorded in the log
    new_defs = family.defs
    created: tuple[str, ...] = ()
    if chosen not in table:
        new_defs = new_defs + ((chosen, term),)
        created = (chosen,)
    fam = Family(new_defs, family.root)
    return replace_at_path(fam, step.target, Const(chosen)), created


# ---------------------------------------------------------------------------
# Macros

_AUDIT_RULES = (
    "hide-prefix", "hide-pass-prefix", "hide-sum", "hide-par",
    "hide-nil", "hide-collapse", "fold-hidden-const",
    "relabel-prefix", "relabel-pass", "relabel-sum", "relabel-par",
    "relabel-nil", "relabel-collapse", "fold-relabelled-const",
)


@dataclass(frozen=True)
class AuditStep:
    """One primitive rewrite inside a macro expansion, relative to the
    wrapped term it started from."""

    rule: str
    path: tuple[int, ...]


def distribute_hide(expr: Expr, k: ActionSet) -> tuple[Expr, list[AuditStep]]:
    """Push a hiding operator wrapped around ``expr`` down to the
    leaves, returning the result plus the primitive-step chain that
    produces it.  Constants are left folded (the enclosing macro
    redefines them)."""
    hidden = k.closure()
    steps: list[AuditStep] = []

    def go(e: Expr, path: tuple[int, ...]) -> Expr:
        # invariant: the term at `path` is e under a \\K wrapper
        if isinstance(e, Prefix):
            inside = not e.action.is_tau and e.action in hidden
            steps.append(AuditStep("hide-prefix" if inside else "hide-pass-prefix", path))
            act = TAU if inside else e.action
            return Prefix(act, go(e.body, path + (0,)))
        if isinstance(e, Sum):
            steps.append(AuditStep("hide-sum", path))
            return mk_sum(go(c, path + (i,)) for i, c in enumerate(e.children))
        if isinstance(e, Par):
            steps.append(AuditStep("hide-par", path))
            return Par(go(e.left, path + (0,)), go(e.right, path + (1,)))
        if isinstance(e, Nil):
            steps.append(AuditStep("hide-nil", path))
            return NIL
        if isinstance(e, Const):
            steps.append(AuditStep("fold-hidden-const", path))
            return e
        if isinstance(e, Hide) and e.aset.closure() == hidden:
            steps.append(AuditStep("hide-collapse", path))
            return go(e.body, path)
        raise RuleError(
            f"push-hide cannot distribute through {type(e).__name__}"
        )

    return go(expr, ()), steps


def distribute_relabel(expr: Expr, f: Relabelling) -> tuple[Expr, list[AuditStep]]:
    """Relabelling analogue of distribute_hide."""
    steps: list[AuditStep] = []

    def go(e: Expr, path: tuple[int, ...]) -> Expr:
        if isinstance(e, Prefix):
            new_act = f(e.action)
            steps.append(
                AuditStep("relabel-prefix" if new_act != e.action else "relabel-pass", path)
            )
            return Prefix(new_act, go(e.body, path + (0,)))
        if isinstance(e, Sum):
            steps.append(AuditStep("relabel-sum", path))
            return mk_sum(go(c, path + (i,)) for i, c in enumerate(e.children))
        if isinstance(e, Par):
            steps.append(AuditStep("relabel-par", path))
            return Par(go(e.left, path + (0,)), go(e.right, path + (1,)))
        if isinstance(e, Nil):
            steps.append(AuditStep("relabel-nil", path))
            return NIL
        if isinstance(e, Const):
            steps.append(AuditStep("fold-relabelled-const", path))
            return e
        if isinstance(e, Relabel) and e.f == f:
            steps.append(AuditStep("relabel-collapse", path))
            return go(e.body, path)
        raise RuleError(
            f"push-relabel cannot distribute through {type(e).__name__}"
        )

    return go(expr, ()), steps


def _wrapped_constants(family: Family, match: Callable[[Expr], Optional[str]]) -> set[str]:
    """Constants reachable from wrapper-enclosed occurrences."""
    seeds: set[str] = set()
    for _, body in family.defs:
        stack = [body]
        while stack:
            t = stack.pop()
            hit = match(t)
            if hit is not None:
                seeds.add(hit)
            stack.extend(children_of(t))
    reach = set(seeds)
    frontier = list(seeds)
    table = family.table
    while frontier:
        c = frontier.pop()
        from .core import constants_in

        for ref in constants_in(table[c]):
            if ref not in reach:
                reach.add(ref)
                frontier.append(ref)
    return reach


def _check_scope(family: Family, scope: set[str], is_wrapper: Callable[[Expr], bool]) -> None:
    """Rewriting definitions in place is only sound when every use of a
    rewritten constant sits under the wrapper being pushed."""

    def walk(e: Expr, under: bool, owner: str) -> None:
        if isinstance(e, Const):
            if e.name in scope and not under and owner not in scope:
                raise RuleError(
                    f"push macro: constant {e.name} is also used outside the "
                    "hidden/relabelled scope"
                )
            return
        under_here = under or is_wrapper(e)
        for k in children_of(e):
            walk(k, under_here, owner)

    for n, body in family.defs:
        walk(body, False, n)


def _apply_push(family: Family, step: RuleStep) -> Family:
    params = step.param_map
    if step.rule == "push-hide":
        k = _want(params, "K", ActionSet, "push-hide")
        hidden = k.closure()

        def match(e: Expr) -> Optional[str]:
            if isinstance(e, Hide) and isinstance(e.body, Const) and e.aset.closure() == hidden:
                return e.body.name
            return None

        def is_wrapper(e: Expr) -> bool:
            return isinstance(e, Hide) and e.aset.closure() == hidden

        def rewrite_body(e: Expr) -> Expr:
            return distribute_hide(e, k)[0]

        def strip(e: Expr) -> Expr:
            if is_wrapper(e) and isinstance(e.body, Const):
                return e.body
            kids = children_of(e)
            if not kids:
                return e
            return with_children(e, tuple(strip(c) for c in kids))

    else:
        f = _want(params, "f", Relabelling, "push-relabel")

        def match(e: Expr) -> Optional[str]:
            if isinstance(e, Relabel) and isinstance(e.body, Const) and e.f == f:
                return e.body.name
            return None

        def is_wrapper(e: Expr) -> bool:
            return isinstance(e, Relabel) and e.f == f

        def rewrite_body(e: Expr) -> Expr:
            return distribute_relabel(e, f)[0]

        def strip(e: Expr) -> Expr:
            if is_wrapper(e) and isinstance(e.body, Const):
                return e.body
            kids = children_of(e)
            if not kids:
                return e
            return with_children(e, tuple(strip(c) for c in kids))

    scope = _wrapped_constants(family, match)
    if not scope:
        raise RuleError(f"{step.rule}: no wrapped constant occurrences found")
    _check_scope(family, scope, is_wrapper)
    defs = []
    for n, body in family.defs:
        if n in scope:
            defs.append((n, rewrite_body(body)))
        else:
            defs.append((n, strip(body)))
    return Family(tuple(defs), family.root)


def _remove_tau(e: Expr) -> Expr:
    kids = children_of(e)
    if kids:
        e = with_children(e, tuple(_remove_tau(k) for k in kids))
    if isinstance(e, Prefix) and e.action.is_tau:
        return e.body
    return e


def _apply_remove_tau_all(family: Family) -> Family:
    defs = tuple((n, _remove_tau(b)) for n, b in family.defs)
    if defs == family.defs:
        raise RuleError("remove-tau-all: no tau prefix anywhere")
    return Family(defs, family.root)


def macro_chain(family: Family, step: RuleStep) -> dict[str, list[AuditStep]]:
    """Primitive-step audit chain of a push macro, per rewritten
    definition (keyed by constant name)."""
    params = step.param_map
    out: dict[str, list[AuditStep]] = {}
    if step.rule == "push-hide":
        k = _want(params, "K", ActionSet, "push-hide")
        hidden = k.closure()

        def match(e: Expr) -> Optional[str]:
            if isinstance(e, Hide) and isinstance(e.body, Const) and e.aset.closure() == hidden:
                return e.body.name
            return None

        for c in sorted(_wrapped_constants(family, match)):
            out[c] = distribute_hide(family.body(c), k)[1]
        return out
    if step.rule == "push-relabel":
        f = _want(params, "f", Relabelling, "push-relabel")

        def match(e: Expr) -> Optional[str]:
            if isinstance(e, Relabel) and isinstance(e.body, Const) and e.f == f:
                return e.body.name
            return None

        for c in sorted(_wrapped_constants(family, match)):
            out[c] = distribute_relabel(family.body(c), f)[1]
        return out
    raise RuleError(f"{step.rule} is not a push macro")


# ---------------------------------------------------------------------------
# Entry points


def apply_rule(family: Family, step: RuleStep) -> Family:
    """Apply one catalog rule or macro; raises RuleError when the rule
    does not match or its side condition fails."""
    fam, _ = apply_rule_logged(family, step)
    return fam


def apply_rule_logged(family: Family, step: RuleStep) -> tuple[Family, tuple[str, ...]]:
    """apply_rule plus the names of constants the step introduced."""
    if step.rule not in RULES:
        raise RuleError(f"unknown rule id {step.rule}")
    params = step.param_map
    if step.rule == "fold":
        return _apply_fold(family, step)
    if step.rule == "merge":
        return _apply_merge(family, params), ()
    if step.rule == "drop-unguarded":
        return _apply_drop_unguarded(family, params), ()
    if step.rule in ("push-hide", "push-relabel"):
        return _apply_push(family, step), ()
    if step.rule == "remove-tau-all":
        return _apply_remove_tau_all(family), ()
    if step.target is None:
        raise RuleError(f"{step.rule}: missing target path")
    term = resolve_path(family, step.target)
    new_term = _apply_term_rule(family, step.rule, term, params)
    return replace_at_path(family, step.target, new_term), ()


@dataclass(frozen=True)
class ApplicableRule:
    """A rule that matches at a position; params lists what the caller
    still has to supply."""

    rule: str
    target: Optional[Path]
    required_params: tuple[str, ...] = ()
    note: str = ""

    def to_step(self, **params) -> RuleStep:
        return RuleStep(self.rule, self.target, tuple(params.items()))


def list_applicable(family: Family, path: Path) -> list[ApplicableRule]:
    """Catalog rules whose left-hand shape matches the subterm at path.
    Choice matching is modulo child permutation."""
    term = resolve_path(family, path)
    found: list[ApplicableRule] = []

    def add(rule: str, required: tuple[str, ...] = (), note: str = ""):
        found.append(ApplicableRule(rule, path, required, note))

    if isinstance(term, Prefix) and term.action.is_tau:
        add("drop-tau")
    if isinstance(term, Par) and (isinstance(term.left, Nil) or isinstance(term.right, Nil)):
        add("drop-nil-par")
    if isinstance(term, Const):
        add("unfold")
    add("fold", ("name",), "introduces a constant defined as this subterm")
    if isinstance(term, Hide):
        inner = term.body
        if isinstance(inner, Prefix) and not inner.action.is_tau and inner.action in term.aset.closure():
            add("hide-prefix")
        if isinstance(inner, Sum):
            add("hide-sum")
        if isinstance(inner, Par):
            add("hide-par")
    if isinstance(term, Relabel):
        inner = term.body
        if isinstance(inner, Prefix):
            add("relabel-prefix")
        if isinstance(inner, Sum):
            add("relabel-sum")
        if isinstance(inner, Par):
            add("relabel-par")
    if isinstance(term, Restrict):
        add("rest-hide", ("K",), "K must lie within the restricted actions")
        add("rest-relabel", ("f",), "f must be the identity outside the restricted actions")
        if isinstance(term.body, Par):
            add("par-hide", ("K",), "K must lie within the restricted actions")
            add("par-relabel", ("f",), "f must be the identity outside the restricted actions")
    if not path.steps:
        name = path.constant
        if Const(name) in sum_children(family.body(name)):
            found.append(
                ApplicableRule("drop-unguarded", None, (), f"a={name}")
            )
        found.append(
            ApplicableRule("merge", None, ("a", "b"), "combine two constants")
        )
    return found


# ---------------------------------------------------------------------------
# Script execution


@dataclass(frozen=True)
class StepRecord:
    index: int
    step: RuleStep
    family: Family
    state_count: int
    certified: str  # "certified" | "skipped"
    new_constants: tuple[str, ...] = ()


def run_script(
    family: Family,
    script: Script,
    certify: bool = False,
    max_states: int = 1_000_000,
) -> tuple[Family, list[StepRecord]]:
    """Fold apply_rule over the script; the log records the family
    snapshot and state count after every step, plus a soundness
    certificate when requested.  The first failing step aborts."""
    from .simulation import verify_step

    log: list[StepRecord] = []
    current = family
    for i, step in enumerate(script.steps):
        try:
            nxt, created = apply_rule_logged(current, step)
            status = "skipped"
            if certify:
                if not verify_step(current, nxt, max_states):
                    raise RuleError("certification failed: before is not weakly "
                                    "simulated by after")
                status = "certified"
        except RuleError as exc:
            raise RuleError(f"step {i} ({step.rule}): {exc}") from exc
        count = build_lts(nxt, max_states).num_states
        log.append(StepRecord(i, step, nxt, count, status, created))
        current = nxt
    return current, log
