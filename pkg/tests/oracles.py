"""Independent brute-force oracles the production algorithms are
compared against.

These deliberately avoid the library's own machinery: set-based weak
closures via breadth-first search, fixpoints via Knaster-Tarski subset
enumeration, and simulation via exhaustive enumeration of all candidate
relations.
"""

from __future__ import annotations

import numpy as np

from ccsabst import Action, Lts, TAU
from ccsabst.logic import (
    And,
    Box,
    Diamond,
    EPS,
    Formula,
    Mu,
    Nu,
    Or,
    Var,
    WeakBox,
    WeakDiamond,
)


# ---------------------------------------------------------------------------
# Weak closure, the slow way


def naive_eps(lts: Lts) -> list[set[int]]:
    """Reflexive-transitive tau closure per state, by plain BFS."""
    tau_succ: dict[int, list[int]] = {}
    for s, a, t in lts.transitions:
        if a.is_tau:
            tau_succ.setdefault(s, []).append(t)
    out = []
    for start in range(lts.num_states):
        seen = {start}
        queue = [start]
        while queue:
            cur = queue.pop()
            for nxt in tau_succ.get(cur, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        out.append(seen)
    return out


def naive_weak(lts: Lts) -> dict[Action, list[set[int]]]:
    """Weak successors eps.a.eps per observable label, by set algebra."""
    eps = naive_eps(lts)
    strong: dict[Action, dict[int, set[int]]] = {}
    for s, a, t in lts.transitions:
        if not a.is_tau:
            strong.setdefault(a, {}).setdefault(s, set()).add(t)
    out: dict[Action, list[set[int]]] = {}
    for a, rows in strong.items():
        per_state = []
        for i in range(lts.num_states):
            acc: set[int] = set()
            for mid in eps[i]:
                for hit in rows.get(mid, ()):
                    acc |= eps[hit]
            per_state.append(acc)
        out[a] = per_state
    return out


# ---------------------------------------------------------------------------
# Model checking by lattice enumeration


def _universe(lts: Lts) -> frozenset[Action]:
    obs = {a for a in lts.alphabet if a.is_observable}
    obs |= {a for _, a, _ in lts.transitions if a.is_observable}
    return frozenset(obs)


def lattice_eval(lts: Lts, phi: Formula, env=None) -> frozenset[int]:
    """Denotation of phi by structural recursion with fixpoints computed
    from the Knaster-Tarski characterisation: a greatest fixpoint is the
    union of all post-fixpoints, a least fixpoint the intersection of
    all pre-fixpoints, enumerated over the whole powerset."""
    n = lts.num_states
    env = dict(env or {})
    all_states = frozenset(range(n))
    subsets = [
        frozenset(i for i in range(n) if mask >> i & 1) for mask in range(1 << n)
    ]
    eps = [frozenset(s) for s in naive_eps(lts)]
    weak = {a: [frozenset(s) for s in rows] for a, rows in naive_weak(lts).items()}
    strong: dict[Action, list[frozenset[int]]] = {}
    for s, a, t in lts.transitions:
        rows = strong.setdefault(a, [set() for _ in range(n)])
        rows[s].add(t)
    strong = {a: [frozenset(r) for r in rows] for a, rows in strong.items()}
    obs = _universe(lts)

    def resolve(ls, weak_mod: bool) -> frozenset[Action]:
        universe = obs | ({EPS} if weak_mod else {TAU})
        return frozenset(universe - ls.members) if ls.complement else ls.members

    def succ(a: Action, i: int, weak_mod: bool) -> frozenset[int]:
        if weak_mod:
            if a.is_eps:
                return eps[i]
            rows = weak.get(a)
        else:
            rows = strong.get(a)
        return rows[i] if rows is not None else frozenset()

    def go(f: Formula, env: dict) -> frozenset[int]:
        if isinstance(f, Var):
            return env[f.name]
        if isinstance(f, And):
            return go(f.left, env) & go(f.right, env)
        if isinstance(f, Or):
            return go(f.left, env) | go(f.right, env)
        if isinstance(f, (Box, WeakBox)):
            weak_mod = isinstance(f, WeakBox)
            body = go(f.body, env)
            labels = resolve(f.labels, weak_mod)
            return frozenset(
                i
                for i in range(n)
                if all(succ(a, i, weak_mod) <= body for a in labels)
            )
        if isinstance(f, (Diamond, WeakDiamond)):
            weak_mod = isinstance(f, WeakDiamond)
            body = go(f.body, env)
            labels = resolve(f.labels, weak_mod)
            return frozenset(
                i
                for i in range(n)
                if any(succ(a, i, weak_mod) & body for a in labels)
            )
        if isinstance(f, Nu):
            acc: frozenset[int] = frozenset()
            for s in subsets:
                if s <= go(f.body, {**env, f.var: s}):
                    acc |= s
            return acc
        if isinstance(f, Mu):
            acc = all_states
            for s in subsets:
                if go(f.body, {**env, f.var: s}) <= s:
                    acc &= s
            return acc
        raise TypeError(f"not a formula: {f!r}")

    return go(phi, env)


# ---------------------------------------------------------------------------
# Simulation by exhaustive relation enumeration


def exhaustive_weakly_simulated(left: Lts, right: Lts) -> bool:
    """There exists a weak simulation containing the initial pair,
    decided by testing the transfer condition on every one of the
    2^(|left| * |right|) candidate relations (vectorised over the whole
    enumeration)."""
    nl, nr = left.num_states, right.num_states
    bits = nl * nr
    if bits > 20:
        raise ValueError("exhaustive oracle is for tiny systems only")
    wl = naive_weak(left)
    wr = naive_weak(right)
    el = naive_eps(left)
    er = naive_eps(right)
    labels = sorted(set(wl) | set(wr)) + [EPS]

    def l_succ(a, i):
        return el[i] if a.is_eps else (wl[a][i] if a in wl else set())

    def r_succ(a, j):
        return er[j] if a.is_eps else (wr[a][j] if a in wr else set())

    rels = np.arange(1 << bits, dtype=np.uint32)
    ok = np.ones(rels.shape, dtype=bool)
    for i in range(nl):
        for j in range(nr):
            in_rel = (rels >> np.uint32(i * nr + j)) & 1 == 1
            for a in labels:
                for i2 in l_succ(a, i):
                    mask = np.uint32(
                        sum(1 << (i2 * nr + j2) for j2 in r_succ(a, j))
                    )
                    ok &= ~(in_rel & ((rels & mask) == 0))
    init_bit = (rels >> np.uint32(left.initial * nr + right.initial)) & 1 == 1
    return bool((ok & init_bit).any())


# ---------------------------------------------------------------------------
# Reachability by naive closure


def naive_reachable(family, fold_map=None):
    """Reachable term set from the family root via the public
    single-step successor function, as an unordered worklist closure."""
    from ccsabst import Const, successors

    if fold_map is None:
        fold_map = {}
        for n, body in reversed(family.defs):
            if not isinstance(body, Const):
                fold_map[body] = Const(n)
    init = Const(family.root)
    seen = {init}
    work = [init]
    edges = set()
    while work:
        cur = work.pop()
        for a, t in successors(family, cur):
            t = fold_map.get(t, t)
            edges.add((cur, a, t))
            if t not in seen:
                seen.add(t)
                work.append(t)
    return seen, edges
