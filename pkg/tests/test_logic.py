"""Mu-calculus evaluation: lattice laws, the brute-force oracle, and
fragment classification."""

import pytest

from ccsabst import (
    FormulaError,
    Lts,
    TAU,
    TruncatedLtsError,
    build_lts,
    check,
    check_table,
    classify,
    evaluate,
    expand_macro_cycle,
    name,
    parse_ccs,
    parse_mu,
)
from ccsabst.logic import (
    And,
    Box,
    Diamond,
    EPS,
    LabelSet,
    Mu,
    Nu,
    Or,
    Var,
    WeakBox,
    WeakDiamond,
    alpha_rename,
    ff,
    free_vars,
    substitute,
    tt,
)
from generators import rand_formula, rand_lts
from oracles import lattice_eval

AB = [name("a"), name("b"), TAU]


def _states(lts):
    return frozenset(range(lts.num_states))


# ---------------------------------------------------------------------------
# Base cases


def test_tt_and_ff_denotations(rng):
    lts = rand_lts(rng, 4)
    assert evaluate(lts, tt()) == _states(lts)
    assert evaluate(lts, ff()) == frozenset()


def test_modalities_on_a_line():
    lts = build_lts(parse_ccs("agent A = a.b.0;").family)
    # state 0 --a--> 1 --b--> 2
    assert evaluate(lts, Diamond(LabelSet(frozenset({name("a")})), tt())) == {0}
    assert evaluate(lts, Box(LabelSet(frozenset({name("a")})), ff())) == {1, 2}
    assert evaluate(
        lts, Diamond(LabelSet(frozenset({name("b")}), complement=True), tt())
    ) == {0}


def test_weak_modalities_absorb_tau():
    lts = build_lts(parse_ccs("agent A = tau.tau.a.0;").family)
    dia = WeakDiamond(LabelSet(frozenset({name("a")})), tt())
    assert lts.initial in evaluate(lts, dia)
    # strong diamond does not see through the taus
    strong = Diamond(LabelSet(frozenset({name("a")})), tt())
    assert lts.initial not in evaluate(lts, strong)


def test_eps_is_the_weak_self_loop():
    lts = build_lts(parse_ccs("agent A = a.0;").family)
    # every state reaches itself by eps, so [[eps]]ff never holds
    assert evaluate(lts, WeakBox(LabelSet(frozenset({EPS})), ff())) == frozenset()


def test_fixpoints_reach_everything():
    lts = build_lts(parse_ccs("agent A = a.A + b.0;").family)
    # "some finite path reaches a deadlock" - a least fixpoint
    anything = LabelSet(frozenset(), complement=True)
    ever_stuck = Mu(
        "Z", Or(Box(anything, ff()), Diamond(anything, Var("Z")))
    )
    assert evaluate(lts, ever_stuck) == _states(lts)


# ---------------------------------------------------------------------------
# Lattice laws on random inputs


def test_monotonicity_in_the_environment(rng):
    for _ in range(100):
        lts = rand_lts(rng, rng.randint(1, 5))
        phi = rand_formula(rng, rng.randint(1, 3), AB, bound=("Z",))
        states = sorted(_states(lts))
        small = frozenset(s for s in states if rng.random() < 0.4)
        big = small | frozenset(s for s in states if rng.random() < 0.4)
        lo = evaluate(lts, phi, {"Z": small})
        hi = evaluate(lts, phi, {"Z": big})
        assert lo <= hi, (phi, small, big)


def test_mu_is_below_nu(rng):
    for _ in range(100):
        lts = rand_lts(rng, rng.randint(1, 5))
        body = rand_formula(rng, rng.randint(1, 3), AB, bound=("Z",))
        assert evaluate(lts, Mu("Z", body)) <= evaluate(lts, Nu("Z", body))


def test_fixpoint_unfolding(rng):
    for _ in range(100):
        lts = rand_lts(rng, rng.randint(1, 5))
        body = rand_formula(rng, rng.randint(1, 3), AB, bound=("Z",))
        for fix in (Nu, Mu):
            phi = alpha_rename(fix("Z", body))
            unfolded = substitute(phi.body, phi.var, phi)
            assert evaluate(lts, phi) == evaluate(lts, unfolded)


def test_weak_equals_strong_without_tau(rng):
    labels = [name("a"), name("b")]
    for _ in range(60):
        lts = rand_lts(rng, rng.randint(1, 5), labels)
        members = LabelSet(frozenset({rng.choice(labels)}))
        body = rand_formula(rng, 1, labels)
        assert evaluate(lts, WeakBox(members, body)) == evaluate(
            lts, Box(members, body)
        )
        assert evaluate(lts, WeakDiamond(members, body)) == evaluate(
            lts, Diamond(members, body)
        )


def test_against_the_lattice_oracle(rng):
    for _ in range(300):
        lts = rand_lts(rng, rng.randint(1, 5))
        phi = rand_formula(rng, rng.randint(1, 4), AB)
        assert evaluate(lts, phi) == lattice_eval(lts, phi), phi


# ---------------------------------------------------------------------------
# Classification and macros


def test_classify():
    assert classify(parse_mu("prop P = max X. [[a]]X & [[b]]ff;")["P"]) == "muILBox"
    assert classify(parse_mu("prop P = [a]ff;")["P"]) == "general"
    assert classify(parse_mu("prop P = <<a>>tt;")["P"]) == "general"
    assert classify(parse_mu("prop C = cycle({a}; {b});")["C"]) == "muILBox"
    with pytest.raises(FormulaError):
        classify(Var("X"))


def test_cycle_macro_semantics():
    cyc = parse_mu("prop C = cycle({enter}; {exit});")["C"]
    good = build_lts(parse_ccs("agent A = enter.exit.A;").family)
    assert check(good, cyc)
    double_enter = build_lts(parse_ccs("agent A = enter.enter.exit.A;").family)
    assert not check(double_enter, cyc)
    starts_wrong = build_lts(parse_ccs("agent A = exit.enter.A;").family)
    assert not check(starts_wrong, cyc)
    # taus in between are ignored
    lazy = build_lts(parse_ccs("agent A = tau.enter.tau.exit.A;").family)
    assert check(lazy, cyc)
    # other actions in between are fine too
    busy = build_lts(parse_ccs("agent A = enter.work.exit.A;").family)
    assert check(busy, cyc)


def test_cycle_macro_validation():
    with pytest.raises(FormulaError):
        expand_macro_cycle(
            LabelSet(frozenset({name("a")})), LabelSet(frozenset({name("a")}))
        )
    with pytest.raises(FormulaError):
        expand_macro_cycle(
            LabelSet(frozenset({name("a")}), complement=True),
            LabelSet(frozenset({name("b")})),
        )


# ---------------------------------------------------------------------------
# Errors and edges


def test_free_variable_handling():
    lts = build_lts(parse_ccs("agent A = a.0;").family)
    with pytest.raises(FormulaError):
        check(lts, Var("X"))
    with pytest.raises(FormulaError):
        evaluate(lts, Var("X"))
    assert free_vars(Nu("X", And(Var("X"), Var("Y")))) == {"Y"}


def test_truncated_lts_is_refused():
    lts = build_lts(parse_ccs("agent A = a.(A | A);").family, max_states=10)
    with pytest.raises(TruncatedLtsError):
        check(lts, tt())


def test_tau_rejected_in_weak_labels():
    lts = build_lts(parse_ccs("agent A = a.0;").family)
    with pytest.raises(FormulaError):
        evaluate(lts, WeakBox(LabelSet(frozenset({TAU})), ff()))


def test_check_table_shape():
    lts = build_lts(parse_ccs("agent A = a.0;").family)
    holds, table = check_table(lts, Diamond(LabelSet(frozenset({name("a")})), tt()))
    assert holds and table == (True, False)
