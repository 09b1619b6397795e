"""Property-test suites over the simulation preorder, shared between
the module tests and the acceptance gate.

Pairs E <= E' are sampled by applying random catalog-rule instances
(each rule rewrites into a weakly simulating family; that soundness is
itself tested per rule in test_abstraction).
"""

from __future__ import annotations

import random

from ccsabst import (
    Const,
    Family,
    Hide,
    Par,
    Prefix,
    Relabel,
    Restrict,
    apply_rule,
    build_lts,
    check,
    mk_sum,
    weakly_simulated_by,
)
from ccsabst.logic import Box, Diamond, Formula, LabelSet, Mu, Nu, Or, And, Var, WeakBox, WeakDiamond

from generators import (
    INSTANCE_GENERATORS,
    rand_action,
    rand_aset,
    rand_formula,
    rand_instance,
    rand_proc,
    rand_relabelling,
)

_RULES = sorted(INSTANCE_GENERATORS)
_CTX_KINDS = ("prefix", "sum", "par", "restrict", "relabel", "hide")


def _sample_pair(rng: random.Random):
    """(before family, after family) with before <= after by rule
    application."""
    rule = rng.choice(_RULES)
    fam, step, before, after = rand_instance(rng, rule, max_states=120)
    return fam, apply_rule(fam, step), before, after


def _in_context(fam: Family, kind: str, payload) -> Family:
    hole = Const(fam.root)
    if kind == "prefix":
        body = Prefix(payload, hole)
    elif kind == "sum":
        body = mk_sum([hole, payload])
    elif kind == "par":
        body = Par(hole, payload)
    elif kind == "restrict":
        body = Restrict(hole, payload)
    elif kind == "relabel":
        body = Relabel(hole, payload)
    else:
        body = Hide(hole, payload)
    return Family(fam.defs + (("_Ctx", body),), "_Ctx")


def _rand_payload(rng: random.Random, kind: str):
    if kind == "prefix":
        return rand_action(rng)
    if kind in ("sum", "par"):
        return rand_proc(rng, 2)
    if kind in ("restrict", "hide"):
        return rand_aset(rng)
    return rand_relabelling(rng)


def congruence_suite(rng: random.Random, samples: int) -> int:
    """Theorem-1 style: a simulation pair stays a simulation pair under
    every single-operator context.  Returns the number of samples
    checked; raises AssertionError on a violation."""
    done = 0
    while done < samples:
        fam_before, fam_after, _, _ = _sample_pair(rng)
        kind = rng.choice(_CTX_KINDS)
        payload = _rand_payload(rng, kind)
        left = build_lts(_in_context(fam_before, kind, payload), 4000)
        right = build_lts(_in_context(fam_after, kind, payload), 4000)
        if left.truncated or right.truncated:
            continue
        holds, _ = weakly_simulated_by(left, right)
        assert holds, (
            f"congruence violation under {kind} context:\n"
            f"{fam_before}\nvs\n{fam_after}\npayload={payload}"
        )
        done += 1
    return done


def _expand_complements(phi: Formula, universe: frozenset) -> Formula:
    """Resolve complement label sets against a fixed universe so the
    formula means the same thing over both systems."""
    def fix(ls: LabelSet, weak: bool) -> LabelSet:
        if not ls.complement:
            return ls
        keep = {a for a in universe if a.is_observable}
        from ccsabst import TAU
        from ccsabst.logic import EPS

        keep.add(EPS if weak else TAU)
        return LabelSet(frozenset(keep - ls.members))

    if isinstance(phi, (And, Or)):
        return type(phi)(
            _expand_complements(phi.left, universe),
            _expand_complements(phi.right, universe),
        )
    if isinstance(phi, (Box, Diamond)):
        return type(phi)(fix(phi.labels, False), _expand_complements(phi.body, universe))
    if isinstance(phi, (WeakBox, WeakDiamond)):
        return type(phi)(fix(phi.labels, True), _expand_complements(phi.body, universe))
    if isinstance(phi, (Nu, Mu)):
        return type(phi)(phi.var, _expand_complements(phi.body, universe))
    return phi


def preservation_suite(rng: random.Random, samples: int) -> int:
    """Theorem-2 style: for E <= E' (by a chain of 1-2 rule steps) and
    random closed weak-box-fragment formulas, satisfaction transfers
    from the abstraction back to the original.  Returns the number of
    samples checked."""
    done = 0
    while done < samples:
        fam_before, fam_after, before, after = _sample_pair(rng)
        # occasionally extend the chain by a second step
        if rng.random() < 0.3:
            try:
                fam2, _, _, after2 = _sample_chain_step(rng, fam_after)
                fam_after, after = fam2, after2
            except _NoStep:
                pass
        universe = frozenset(
            a for a in (set(before.labels()) | set(after.labels())
                        | set(before.alphabet) | set(after.alphabet))
            if a.is_observable
        )
        labels = sorted(universe) or [rand_action(rng)]
        phi = rand_formula(rng, rng.randint(1, 4), list(labels), weak_only=True)
        phi = _expand_complements(phi, universe)
        if check(after, phi):
            assert check(before, phi), (
                f"preservation violation:\n{fam_before}\nvs\n{fam_after}\n{phi}"
            )
        done += 1
    return done


class _NoStep(Exception):
    pass


def _sample_chain_step(rng: random.Random, fam: Family):
    """Apply one more parameterless rule somewhere in fam, if any
    position admits one."""
    from ccsabst import Path, list_applicable
    from ccsabst.core import children_of

    positions = []
    for n, body in fam.defs:
        stack = [((), body)]
        while stack:
            steps, term = stack.pop()
            positions.append(Path(n, steps))
            for i, k in enumerate(children_of(term)):
                stack.append((steps + (i,), k))
    rng.shuffle(positions)
    for path in positions:
        for cand in list_applicable(fam, path):
            if cand.required_params or cand.target is None:
                continue
            if cand.rule == "fold":
                continue
            try:
                after_fam = apply_rule(fam, cand.to_step())
            except Exception:
                continue
            lts = build_lts(after_fam, 4000)
            if lts.truncated:
                continue
            return after_fam, cand, None, lts
    raise _NoStep
