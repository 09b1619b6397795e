"""CCS terms and their operational semantics.

Actions, process expressions, definition families, the single-step
transition relation (including the hiding operator) and explicit
breadth-first construction of the reachable transition system.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

from .errors import CcsError, UndefinedConstantError

DEFAULT_MAX_STATES = int(os.environ.get("CCSABST_MAX_STATES", "1000000"))


# ---------------------------------------------------------------------------
# Actions


@dataclass(frozen=True, order=True)
class Action:
    """tau, a name, or a co-name.  kind 'eps' is reserved for modal labels
    of the logic module and never labels a transition."""

    kind: str  # "tau" | "name" | "coname" | "eps"
    label: Optional[str] = None

    def __post_init__(self):
        if self.kind in ("tau", "eps"):
            if self.label is not None:
                raise CcsError(f"{self.kind} carries no label")
        elif self.kind in ("name", "coname"):
            if not self.label:
                raise CcsError("named action requires a label")
        else:
            raise CcsError(f"bad action kind: {self.kind}")

    @property
    def is_tau(self) -> bool:
        return self.kind == "tau"

    @property
    def is_eps(self) -> bool:
        return self.kind == "eps"

    @property
    def is_observable(self) -> bool:
        return self.kind in ("name", "coname")

    def __str__(self) -> str:
        if self.kind == "tau":
            return "tau"
        if self.kind == "eps":
            return "eps"
        return self.label if self.kind == "name" else "'" + self.label


TAU = Action("tau")
EPS = Action("eps")


def name(label: str) -> Action:
    return Action("name", label)


def coname(label: str) -> Action:
    return Action("coname", label)


def complement(a: Action) -> Action:
    """name <-> coname with the same label; tau has no complement."""
    if a.kind == "name":
        return Action("coname", a.label)
    if a.kind == "coname":
        return Action("name", a.label)
    raise CcsError("tau has no complement")


@dataclass(frozen=True)
class ActionSet:
    """A finite set of non-tau actions, as written in a restriction or
    hiding operator.  Semantically the set always stands for L plus its
    complements; ``closure()`` gives that interpretation."""

    members: frozenset[Action]

    def __post_init__(self):
        for a in self.members:
            if not a.is_observable:
                raise CcsError("restriction/hiding sets contain non-tau actions only")

    @staticmethod
    def of(*items: Action | str) -> "ActionSet":
        acts = [name(x) if isinstance(x, str) else x for x in items]
        return ActionSet(frozenset(acts))

    def closure(self) -> frozenset[Action]:
        return self.members | {complement(a) for a in self.members}

    def __contains__(self, a: Action) -> bool:
        return a in self.closure()

    def __str__(self) -> str:
        return "{" + ", ".join(str(a) for a in sorted(self.members)) + "}"


@dataclass(frozen=True)
class Relabelling:
    """Finite partial map on name-labels, identity outside its domain.
    Extension to actions fixes tau and commutes with complement."""

    pairs: tuple[tuple[str, str], ...]  # (old, new), sorted by old

    @staticmethod
    def of(mapping: Mapping[str, str]) -> "Relabelling":
        return Relabelling(tuple(sorted(mapping.items())))

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    def apply_label(self, label: str) -> str:
        return self.mapping.get(label, label)

    def __call__(self, a: Action) -> Action:
        if not a.is_observable:
            return a
        return Action(a.kind, self.apply_label(a.label))

    def __str__(self) -> str:
        return "[" + ", ".join(f"{new}/{old}" for old, new in self.pairs) + "]"


def relabel_action(f: Relabelling, a: Action) -> Action:
    """f extended to actions: tau -> tau, co-names through the name map."""
    return f(a)


# ---------------------------------------------------------------------------
# Process expressions

Expr = "Expr"


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Nil:
    pass


@dataclass(frozen=True)
class Prefix:
    action: Action
    body: "Expr"


@dataclass(frozen=True)
class Sum:
    children: tuple["Expr", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise CcsError("Sum needs at least two children")
        if any(isinstance(c, Sum) for c in self.children):
            raise CcsError("Sum children must be flattened")


@dataclass(frozen=True)
class Par:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Restrict:
    body: "Expr"
    aset: ActionSet


@dataclass(frozen=True)
class Relabel:
    body: "Expr"
    f: Relabelling


@dataclass(frozen=True)
class Hide:
    body: "Expr"
    aset: ActionSet


Expr = Const | Nil | Prefix | Sum | Par | Restrict | Relabel | Hide

NIL = Nil()


def mk_sum(children: Iterable[Expr]) -> Expr:
    """Canonical n-ary choice: flattens nested sums, preserves order,
    collapses the empty and singleton cases."""
    flat: list[Expr] = []
    for c in children:
        if isinstance(c, Sum):
            flat.extend(c.children)
        else:
            flat.append(c)
    if not flat:
        return NIL
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def sum_children(e: Expr) -> tuple[Expr, ...]:
    return e.children if isinstance(e, Sum) else (e,)


def children_of(e: Expr) -> tuple[Expr, ...]:
    """Child subterms in path-index order."""
    if isinstance(e, Prefix):
        return (e.body,)
    if isinstance(e, Sum):
        return e.children
    if isinstance(e, Par):
        return (e.left, e.right)
    if isinstance(e, (Restrict, Relabel, Hide)):
        return (e.body,)
    return ()


def with_children(e: Expr, kids: tuple[Expr, ...]) -> Expr:
    if isinstance(e, Prefix):
        return Prefix(e.action, kids[0])
    if isinstance(e, Sum):
        return mk_sum(kids)
    if isinstance(e, Par):
        return Par(kids[0], kids[1])
    if isinstance(e, Restrict):
        return Restrict(kids[0], e.aset)
    if isinstance(e, Relabel):
        return Relabel(kids[0], e.f)
    if isinstance(e, Hide):
        return Hide(kids[0], e.aset)
    return e


def constants_in(e: Expr) -> set[str]:
    out: set[str] = set()
    stack = [e]
    while stack:
        t = stack.pop()
        if isinstance(t, Const):
            out.add(t.name)
        else:
            stack.extend(children_of(t))
    return out


def rename_constant(e: Expr, old: str, new: str) -> Expr:
    if isinstance(e, Const):
        return Const(new) if e.name == old else e
    kids = children_of(e)
    if not kids:
        return e
    return with_children(e, tuple(rename_constant(k, old, new) for k in kids))


# ---------------------------------------------------------------------------
# Families


@dataclass(frozen=True)
class Family:
    """Named recursive process definitions with a distinguished root.
    Definition order is preserved (it is the printing order)."""

    defs: tuple[tuple[str, Expr], ...]
    root: str

    def __post_init__(self):
        names = [n for n, _ in self.defs]
        if len(set(names)) != len(names):
            raise CcsError("duplicate constant definition")
        table = dict(self.defs)
        if self.root not in table:
            raise CcsError(f"root {self.root} is not defined")
        for n, body in self.defs:
            for ref in constants_in(body):
                if ref not in table:
                    raise UndefinedConstantError(ref)

    @staticmethod
    def of(defs: Mapping[str, Expr], root: str) -> "Family":
        return Family(tuple(defs.items()), root)

    @property
    def table(self) -> dict[str, Expr]:
        return dict(self.defs)

    def body(self, constant: str) -> Expr:
        try:
            return self.table[constant]
        except KeyError:
            raise UndefinedConstantError(constant) from None

    def with_root(self, root: str) -> "Family":
        return Family(self.defs, root)

    def names(self) -> list[str]:
        return [n for n, _ in self.defs]


def sort(family: Family) -> frozenset[Action]:
    """All non-tau actions occurring syntactically in the family, closed
    under complement: prefixes, restriction/hiding sets, relabelling
    domains and ranges."""
    acts: set[Action] = set()

    def walk(e: Expr) -> None:
        if isinstance(e, Prefix):
            if e.action.is_observable:
                acts.add(e.action)
            walk(e.body)
        elif isinstance(e, (Restrict, Hide)):
            acts.update(e.aset.members)
            walk(e.body)
        elif isinstance(e, Relabel):
            for old, new in e.f.pairs:
                acts.add(name(old))
                acts.add(name(new))
            walk(e.body)
        else:
            for k in children_of(e):
                walk(k)

    for _, body in family.defs:
        walk(body)
    return frozenset(acts | {complement(a) for a in acts})


# ---------------------------------------------------------------------------
# Transition relation

_expr_sort_key_cache: dict = {}


def _expr_key(e: Expr) -> str:
    k = _expr_sort_key_cache.get(e)
    if k is None:
        k = repr(e)
        _expr_sort_key_cache[e] = k
    return k


class SuccEngine:
    """Single-step successor computation for one family, with caching.

    An unguarded constant occurrence contributes no derivation of its
    own (the transition relation is the least one closed under the SOS
    rules), so unfolding cycles are cut off; results that were computed
    under such a cutoff are not cached.
    """

    def __init__(self, family: Family):
        self.family = family
        self.table = family.table
        self._cache: dict[Expr, frozenset[tuple[Action, Expr]]] = {}

    def successors(self, e: Expr) -> frozenset[tuple[Action, Expr]]:
        result, _ = self._succ(e, frozenset())
        return result

    def _succ(self, e: Expr, unfolding: frozenset[str]):
        cached = self._cache.get(e)
        if cached is not None:
            return cached, True
        complete = True
        out: set[tuple[Action, Expr]] = set()
        if isinstance(e, Nil):
            pass
        elif isinstance(e, Prefix):
            out.add((e.action, e.body))
        elif isinstance(e, Sum):
            for c in e.children:
                moves, ok = self._succ(c, unfolding)
                complete = complete and ok
                out.update(moves)
        elif isinstance(e, Par):
            lm, lok = self._succ(e.left, unfolding)
            rm, rok = self._succ(e.right, unfolding)
            complete = lok and rok
            for a, t in lm:
                out.add((a, Par(t, e.right)))
            for a, t in rm:
                out.add((a, Par(e.left, t)))
            by_label: dict[Action, list[Expr]] = {}
            for a, t in rm:
                if a.is_observable:
                    by_label.setdefault(a, []).append(t)
            for a, t in lm:
                if a.is_observable:
                    for t2 in by_label.get(complement(a), ()):
                        out.add((TAU, Par(t, t2)))
        elif isinstance(e, Restrict):
            forbidden = e.aset.closure()
            moves, complete = self._succ(e.body, unfolding)
            for a, t in moves:
                if a.is_tau or a not in forbidden:
                    out.add((a, Restrict(t, e.aset)))
        elif isinstance(e, Hide):
            hidden = e.aset.closure()
            moves, complete = self._succ(e.body, unfolding)
            for a, t in moves:
                label = TAU if (not a.is_tau and a in hidden) else a
                out.add((label, Hide(t, e.aset)))
        elif isinstance(e, Relabel):
            moves, complete = self._succ(e.body, unfolding)
            for a, t in moves:
                out.add((e.f(a), Relabel(t, e.f)))
        elif isinstance(e, Const):
            if e.name in unfolding:
                return frozenset(), False
            body = self.table.get(e.name)
            if body is None:
                raise UndefinedConstantError(e.name)
            moves, complete = self._succ(body, unfolding | {e.name})
            out.update(moves)
        else:  # pragma: no cover
            raise CcsError(f"unknown expression node: {e!r}")
        result = frozenset(out)
        if complete:
            self._cache[e] = result
        return result, complete


def successors(family: Family, e: Expr) -> frozenset[tuple[Action, Expr]]:
    """The derivable single-step transitions of e within the family."""
    return SuccEngine(family).successors(e)


# ---------------------------------------------------------------------------
# Explicit transition systems


@dataclass(frozen=True)
class Lts:
    """Explicit finite labelled transition system.  States are canonical
    process terms numbered in breadth-first discovery order."""

    states: tuple[Expr, ...]
    transitions: tuple[tuple[int, Action, int], ...]
    initial: int
    truncated: bool
    alphabet: frozenset[Action] = field(default_factory=frozenset)

    @property
    def num_states(self) -> int:
        return len(self.states)

    def labels(self) -> frozenset[Action]:
        return frozenset(a for _, a, _ in self.transitions)

    def successors_by_label(self) -> dict[Action, dict[int, set[int]]]:
        out: dict[Action, dict[int, set[int]]] = {}
        for s, a, t in self.transitions:
            out.setdefault(a, {}).setdefault(s, set()).add(t)
        return out

    def __iter__(self) -> Iterator[tuple[int, Action, int]]:
        return iter(self.transitions)


def build_lts(family: Family, max_states: int = DEFAULT_MAX_STATES) -> Lts:
    """Breadth-first reachable LTS from the family root.

    State numbering is discovery order and is deterministic: the
    successor set of each state is expanded in a fixed sort order.
    When max_states is exceeded the partial system is returned with
    truncated=True; downstream checkers refuse such systems.
    """
    if max_states < 1:
        raise CcsError("max_states must be at least 1")
    engine = SuccEngine(family)
    # states stay maximally folded: a target term that is syntactically
    # the body of a defined constant collapses to that constant (first
    # definition wins when bodies coincide)
    fold_map: dict[Expr, Expr] = {}
    for n, body in reversed(family.defs):
        if not isinstance(body, Const):
            fold_map[body] = Const(n)
    init = Const(family.root)
    index: dict[Expr, int] = {init: 0}
    order: list[Expr] = [init]
    transitions: list[tuple[int, Action, int]] = []
    truncated = False
    frontier = 0
    while frontier < len(order):
        src = order[frontier]
        src_i = index[src]
        frontier += 1
        moves = sorted(
            {(a, fold_map.get(t, t)) for a, t in engine.successors(src)},
            key=lambda m: (m[0], _expr_key(m[1])),
        )
        for a, tgt in moves:
            j = index.get(tgt)
            if j is None:
                if len(order) >= max_states:
                    truncated = True
                    continue
                j = len(order)
                index[tgt] = j
                order.append(tgt)
            transitions.append((src_i, a, j))
        if truncated:
            break
    return Lts(
        states=tuple(order),
        transitions=tuple(transitions),
        initial=0,
        truncated=truncated,
        alphabet=sort(family),
    )
