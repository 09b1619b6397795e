"""Weak transition closure and the weak-simulation preorder.

The closure absorbs tau steps: eps-successors are the reflexive
transitive closure of tau transitions, and weak a-successors compose
eps . a . eps.  The preorder is decided by greatest-fixpoint refinement
of the full product relation, vectorised with boolean matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Action, EPS, Family, Lts, build_lts
from .errors import TruncatedLtsError


@dataclass(frozen=True)
class WeakClosure:
    """Per-state weak successor sets of one LTS."""

    eps: tuple[frozenset[int], ...]
    weak: dict[Action, tuple[frozenset[int], ...]]

    def eps_successors(self, state: int) -> frozenset[int]:
        return self.eps[state]

    def weak_successors_of(self, state: int, a: Action) -> frozenset[int]:
        if a.is_eps:
            return self.eps[state]
        rows = self.weak.get(a)
        return rows[state] if rows is not None else frozenset()


def _strong_matrices(lts: Lts) -> dict[Action, np.ndarray]:
    n = lts.num_states
    out: dict[Action, np.ndarray] = {}
    for s, a, t in lts.transitions:
        m = out.get(a)
        if m is None:
            m = out[a] = np.zeros((n, n), dtype=bool)
        m[s, t] = True
    return out


def _bool_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.int32) @ b.astype(np.int32)) > 0


def _reflexive_transitive(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    closure = m | np.eye(n, dtype=bool)
    while True:
        nxt = _bool_mul(closure, closure) | closure
        if (nxt == closure).all():
            return closure
        closure = nxt


def weak_matrices(lts: Lts) -> tuple[np.ndarray, dict[Action, np.ndarray]]:
    """(eps closure, weak successor matrix per observable label)."""
    if lts.truncated:
        raise TruncatedLtsError("refusing weak closure of a truncated LTS")
    n = lts.num_states
    strong = _strong_matrices(lts)
    tau_m = strong.get(
        next((a for a in strong if a.is_tau), None), np.zeros((n, n), dtype=bool)
    )
    eps = _reflexive_transitive(tau_m)
    weak: dict[Action, np.ndarray] = {}
    for a, m in strong.items():
        if a.is_tau:
            continue
        weak[a] = _bool_mul(_bool_mul(eps, m), eps)
    return eps, weak


def weak_successors(lts: Lts) -> WeakClosure:
    """Exact weak closure with per-state successor sets."""
    eps, weak = weak_matrices(lts)
    n = lts.num_states

    def rows(m: np.ndarray) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(np.flatnonzero(m[i]).tolist()) for i in range(n))

    return WeakClosure(eps=rows(eps), weak={a: rows(m) for a, m in weak.items()})


@dataclass(frozen=True)
class SimWitness:
    """A weak simulation relating left-LTS states to right-LTS states."""

    relation: frozenset[tuple[int, int]]

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in self.relation


def weakly_simulated_by(
    left: Lts, right: Lts
) -> tuple[bool, Optional[SimWitness]]:
    """Decide whether the left initial state is weakly simulated by the
    right one.  On success the greatest weak simulation over the product
    is returned as a witness.

    Refinement deletes pairs violating the transfer condition for some
    observable label (eps included) until stable; the result is the
    greatest fixpoint and therefore order independent.
    """
    if left.truncated or right.truncated:
        raise TruncatedLtsError("refusing simulation check on a truncated LTS")
    eps_l, weak_l = weak_matrices(left)
    eps_r, weak_r = weak_matrices(right)
    nl, nr = left.num_states, right.num_states
    labels = sorted(set(weak_l) | set(weak_r))
    zero_l = np.zeros((nl, nl), dtype=bool)
    zero_r = np.zeros((nr, nr), dtype=bool)
    moves = [(eps_l, eps_r)]
    for a in labels:
        moves.append((weak_l.get(a, zero_l), weak_r.get(a, zero_r)))

    rel = np.ones((nl, nr), dtype=bool)
    while True:
        nxt = rel
        for wl, wr in moves:
            # matched[i', j] : some weak successor j' of j has (i', j') in rel
            matched = _bool_mul(nxt, wr.T)
            # bad[i, j] : some weak successor i' of i is unmatched at j
            bad = _bool_mul(wl, ~matched)
            nxt = nxt & ~bad
        if (nxt == rel).all():
            break
        rel = nxt

    holds = bool(rel[left.initial, right.initial])
    if not holds:
        return False, None
    pairs = frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(rel)))
    return True, SimWitness(pairs)


def witness_is_valid(left: Lts, right: Lts, witness: SimWitness) -> bool:
    """Independent single-pass transfer-condition audit of a witness.

    Deliberately avoids the matrix machinery: per-pair set checks over
    the weak closures.
    """
    wl = weak_successors(left)
    wr = weak_successors(right)
    labels = set(wl.weak) | set(wr.weak) | {EPS}
    for (i, j) in witness.relation:
        for a in labels:
            for i2 in wl.weak_successors_of(i, a):
                if not any(
                    (i2, j2) in witness.relation
                    for j2 in wr.weak_successors_of(j, a)
                ):
                    return False
    return True


def strong_quotient_size(lts: Lts) -> int:
    """Number of strong-bisimulation equivalence classes (naive
    partition refinement).  Diagnostic only; state identity elsewhere is
    syntactic."""
    if lts.truncated:
        raise TruncatedLtsError("refusing quotient of a truncated LTS")
    n = lts.num_states
    succ: dict[int, set[tuple[Action, int]]] = {i: set() for i in range(n)}
    for s, a, t in lts.transitions:
        succ[s].add((a, t))
    block = [0] * n
    while True:
        sigs: dict = {}
        nxt = [
            sigs.setdefault(
                (block[i], frozenset((a, block[t]) for a, t in succ[i])),
                len(sigs),
            )
            for i in range(n)
        ]
        if nxt == block:
            return len(set(block))
        block = nxt


def verify_step(
    before: Family, after: Family, max_states: int = 1_000_000
) -> bool:
    """Certify one abstraction step: the root of the earlier family is
    weakly simulated by the root of the later one."""
    lts_before = build_lts(before, max_states)
    lts_after = build_lts(after, max_states)
    if lts_before.truncated or lts_after.truncated:
        raise TruncatedLtsError(
            "state limit exceeded; soundness of the step cannot be certified"
        )
    holds, _ = weakly_simulated_by(lts_before, lts_after)
    return holds
