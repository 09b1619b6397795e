"""Modal mu-calculus: positive-normal-form formulas, fragment
classification and fixpoint model checking over finite LTSs.

State sets are integer bitmasks.  Weak modalities are interpreted over
the weak transition relation (tau-absorbing); complement label sets are
resolved against a closed-world universe derived from the system's
action sort.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .core import Action, EPS, Lts, TAU
from .errors import FormulaError, TruncatedLtsError

# ---------------------------------------------------------------------------
# Formulas


@dataclass(frozen=True)
class LabelSet:
    """Modality label literal: a finite set of labels, or the complement
    of one (resolved against the action universe at evaluation time)."""

    members: frozenset[Action]
    complement: bool = False

    def __str__(self) -> str:
        body = ", ".join(str(a) for a in sorted(self.members))
        return ("-" if self.complement else "") + body


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    labels: LabelSet
    body: "Formula"


@dataclass(frozen=True)
class Diamond:
    labels: LabelSet
    body: "Formula"


@dataclass(frozen=True)
class WeakBox:
    labels: LabelSet
    body: "Formula"


@dataclass(frozen=True)
class WeakDiamond:
    labels: LabelSet
    body: "Formula"


@dataclass(frozen=True)
class Nu:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Mu:
    var: str
    body: "Formula"


Formula = Var | And | Or | Box | Diamond | WeakBox | WeakDiamond | Nu | Mu

_MODAL = (Box, Diamond, WeakBox, WeakDiamond)
_BINARY = (And, Or)
_FIX = (Nu, Mu)


def tt() -> Formula:
    """The true formula, max Z. Z."""
    return Nu("_tt", Var("_tt"))


def ff() -> Formula:
    """The false formula, the least solution of Z = Z."""
    return Mu("_ff", Var("_ff"))


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, Var):
        return frozenset({phi.name})
    if isinstance(phi, _BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, _MODAL):
        return free_vars(phi.body)
    if isinstance(phi, _FIX):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def alpha_rename(phi: Formula) -> Formula:
    """Rename bound variables so every binder introduces a unique name."""
    used: set[str] = set(free_vars(phi))

    def fresh(base: str) -> str:
        if base not in used:
            used.add(base)
            return base
        for i in itertools.count(1):
            cand = f"{base}_{i}"
            if cand not in used:
                used.add(cand)
                return cand

    def walk(f: Formula, env: dict[str, str]) -> Formula:
        if isinstance(f, Var):
            return Var(env.get(f.name, f.name))
        if isinstance(f, _BINARY):
            return type(f)(walk(f.left, env), walk(f.right, env))
        if isinstance(f, _MODAL):
            return type(f)(f.labels, walk(f.body, env))
        if isinstance(f, _FIX):
            nv = fresh(f.var)
            return type(f)(nv, walk(f.body, {**env, f.var: nv}))
        raise TypeError(f"not a formula: {f!r}")

    return walk(phi, {})


def substitute(phi: Formula, var: str, repl: Formula) -> Formula:
    """Capture-naive substitution; callers guarantee unique binders."""
    if isinstance(phi, Var):
        return repl if phi.name == var else phi
    if isinstance(phi, _BINARY):
        return type(phi)(substitute(phi.left, var, repl), substitute(phi.right, var, repl))
    if isinstance(phi, _MODAL):
        return type(phi)(phi.labels, substitute(phi.body, var, repl))
    if isinstance(phi, _FIX):
        if phi.var == var:
            return phi
        return type(phi)(phi.var, substitute(phi.body, var, repl))
    raise TypeError(f"not a formula: {phi!r}")


def classify(phi: Formula) -> str:
    """'muILBox' when every modality is a weak box, else 'general'."""
    fv = free_vars(phi)
    if fv:
        raise FormulaError(
            "cannot classify open formula; free variables: " + ", ".join(sorted(fv))
        )

    def only_weak_boxes(f: Formula) -> bool:
        if isinstance(f, Var):
            return True
        if isinstance(f, _BINARY):
            return only_weak_boxes(f.left) and only_weak_boxes(f.right)
        if isinstance(f, WeakBox):
            return only_weak_boxes(f.body)
        if isinstance(f, (Box, Diamond, WeakDiamond)):
            return False
        if isinstance(f, _FIX):
            return only_weak_boxes(f.body)
        raise TypeError(f"not a formula: {f!r}")

    return "muILBox" if only_weak_boxes(phi) else "general"


def expand_macro_cycle(l1: LabelSet, l2: LabelSet) -> Formula:
    """The alternation safety pattern over two action sets: actions of
    the first and second set strictly alternate, starting with the
    first, along every weak path."""
    if l1.complement or l2.complement:
        raise FormulaError("cycle takes positive label sets")
    if l1.members & l2.members:
        raise FormulaError("cycle label sets must be disjoint")
    both = LabelSet(l1.members | l2.members, complement=True)
    inner = Nu(
        "X2",
        And(
            And(WeakBox(l1, ff()), WeakBox(both, Var("X2"))),
            WeakBox(l2, Var("X1")),
        ),
    )
    outer = Nu(
        "X1",
        And(
            And(WeakBox(l2, ff()), WeakBox(both, Var("X1"))),
            WeakBox(l1, inner),
        ),
    )
    return alpha_rename(outer)


# ---------------------------------------------------------------------------
# Evaluation


class Evaluator:
    """Fixpoint evaluator over one LTS.  Reusable across formulas; weak
    closures are computed once on demand."""

    def __init__(self, lts: Lts):
        if lts.truncated:
            raise TruncatedLtsError("refusing to evaluate over a truncated LTS")
        self.lts = lts
        self.n = lts.num_states
        self.full = (1 << self.n) - 1
        trans_labels = lts.labels()
        self.universe_obs = frozenset(
            a for a in (lts.alphabet | trans_labels) if a.is_observable
        )
        # strong successor masks per label
        self._strong: dict[Action, list[int]] = {}
        for s, a, t in lts.transitions:
            row = self._strong.setdefault(a, [0] * self.n)
            row[s] |= 1 << t
        self._weak: Optional[dict[Action, list[int]]] = None

    def _weak_masks(self) -> dict[Action, list[int]]:
        if self._weak is None:
            from .simulation import weak_successors

            wc = weak_successors(self.lts)
            masks: dict[Action, list[int]] = {}
            masks[EPS] = [_set_to_mask(wc.eps[i]) for i in range(self.n)]
            for a, rows in wc.weak.items():
                masks[a] = [_set_to_mask(rows[i]) for i in range(self.n)]
            self._weak = masks
        return self._weak

    def resolve(self, ls: LabelSet, weak: bool) -> frozenset[Action]:
        if weak:
            bad = [a for a in ls.members if a.is_tau]
            if bad:
                raise FormulaError("tau is not a weak modality label")
            universe = self.universe_obs | {EPS}
        else:
            bad = [a for a in ls.members if a.is_eps]
            if bad:
                raise FormulaError("eps is only valid inside weak modalities")
            universe = self.universe_obs | {TAU}
        if ls.complement:
            return frozenset(universe - ls.members)
        return ls.members

    def _succ_masks(self, label: Action, weak: bool) -> list[int]:
        if weak:
            return self._weak_masks().get(label, [0] * self.n)
        return self._strong.get(label, [0] * self.n)

    def _box(self, labels: frozenset[Action], body: int, weak: bool) -> int:
        out = self.full
        for a in labels:
            rows = self._succ_masks(a, weak)
            mask = 0
            for i in range(self.n):
                if rows[i] & ~body == 0:
                    mask |= 1 << i
            out &= mask
        return out

    def _diamond(self, labels: frozenset[Action], body: int, weak: bool) -> int:
        out = 0
        for a in labels:
            rows = self._succ_masks(a, weak)
            for i in range(self.n):
                if rows[i] & body:
                    out |= 1 << i
        return out

    def eval(self, phi: Formula, env: dict[str, int]) -> int:
        if isinstance(phi, Var):
            try:
                return env[phi.name]
            except KeyError:
                raise FormulaError(f"free variable {phi.name} not in environment")
        if isinstance(phi, And):
            return self.eval(phi.left, env) & self.eval(phi.right, env)
        if isinstance(phi, Or):
            return self.eval(phi.left, env) | self.eval(phi.right, env)
        if isinstance(phi, Box):
            return self._box(self.resolve(phi.labels, False), self.eval(phi.body, env), False)
        if isinstance(phi, Diamond):
            return self._diamond(self.resolve(phi.labels, False), self.eval(phi.body, env), False)
        if isinstance(phi, WeakBox):
            return self._box(self.resolve(phi.labels, True), self.eval(phi.body, env), True)
        if isinstance(phi, WeakDiamond):
            return self._diamond(self.resolve(phi.labels, True), self.eval(phi.body, env), True)
        if isinstance(phi, (Nu, Mu)):
            current = self.full if isinstance(phi, Nu) else 0
            for _ in range(self.n + 1):
                nxt = self.eval(phi.body, {**env, phi.var: current})
                if nxt == current:
                    break
                current = nxt
            return current
        raise TypeError(f"not a formula: {phi!r}")


def _set_to_mask(states) -> int:
    mask = 0
    for i in states:
        mask |= 1 << i
    return mask


def mask_to_states(mask: int, n: int) -> frozenset[int]:
    return frozenset(i for i in range(n) if mask >> i & 1)


def evaluate(
    lts: Lts, phi: Formula, env: Optional[dict[str, frozenset[int]]] = None
) -> frozenset[int]:
    """Denotation of phi over the LTS as a set of state indices."""
    ev = Evaluator(lts)
    int_env = {k: _set_to_mask(v) for k, v in (env or {}).items()}
    missing = free_vars(phi) - set(int_env)
    if missing:
        raise FormulaError("free variables not in environment: " + ", ".join(sorted(missing)))
    return mask_to_states(ev.eval(phi, int_env), lts.num_states)


def check(lts: Lts, phi: Formula) -> bool:
    """True iff the initial state satisfies the closed formula."""
    fv = free_vars(phi)
    if fv:
        raise FormulaError("check requires a closed formula; free: " + ", ".join(sorted(fv)))
    return lts.initial in evaluate(lts, phi)


def check_table(lts: Lts, phi: Formula) -> tuple[bool, tuple[bool, ...]]:
    """check() plus the full per-state truth table."""
    fv = free_vars(phi)
    if fv:
        raise FormulaError("check requires a closed formula; free: " + ", ".join(sorted(fv)))
    sat = evaluate(lts, phi)
    table = tuple(i in sat for i in range(lts.num_states))
    return lts.initial in sat, table
