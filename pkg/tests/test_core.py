"""Terms, the transition relation and LTS construction."""

import pytest
from hypothesis import given, strategies as st

from ccsabst import (
    Action,
    ActionSet,
    CcsError,
    Const,
    Family,
    Hide,
    NIL,
    Par,
    Prefix,
    Relabel,
    Relabelling,
    Restrict,
    Sum,
    TAU,
    UndefinedConstantError,
    build_lts,
    complement,
    coname,
    mk_sum,
    name,
    parse_ccs,
    sort,
    successors,
)
from generators import rand_finite_family
from oracles import naive_reachable

labels = st.text(alphabet="abc", min_size=1, max_size=3)
observables = st.builds(
    lambda l, co: coname(l) if co else name(l), labels, st.booleans()
)


# ---------------------------------------------------------------------------
# Actions and operator data


@given(observables)
def test_complement_is_an_involution(a):
    assert complement(complement(a)) == a
    assert complement(a) != a
    assert complement(a).label == a.label


def test_tau_has_no_complement():
    with pytest.raises(CcsError):
        complement(TAU)


def test_action_validation():
    with pytest.raises(CcsError):
        Action("tau", "x")
    with pytest.raises(CcsError):
        Action("name", None)
    with pytest.raises(CcsError):
        Action("weird")


@given(st.frozensets(observables, max_size=4))
def test_action_set_closure_is_complement_closed(members):
    aset = ActionSet(members)
    closure = aset.closure()
    assert {complement(a) for a in closure} == closure
    assert members <= closure
    for a in closure:
        assert a in aset  # membership tests the closure


def test_action_set_rejects_tau():
    with pytest.raises(CcsError):
        ActionSet(frozenset({TAU}))


@given(observables, st.dictionaries(labels, labels, max_size=3))
def test_relabelling_commutes_with_complement(a, mapping):
    f = Relabelling.of(mapping)
    assert f(complement(a)) == complement(f(a))
    assert f(TAU) == TAU


# ---------------------------------------------------------------------------
# Sum canonicalisation


def test_mk_sum_flattens_and_collapses():
    a, b, c = (Prefix(name(l), NIL) for l in "abc")
    assert mk_sum([]) == NIL
    assert mk_sum([a]) == a
    assert mk_sum([a, mk_sum([b, c])]) == Sum((a, b, c))
    # order preserved, duplicates kept
    assert mk_sum([a, a]) == Sum((a, a))


def test_sum_invariants():
    a = Prefix(name("a"), NIL)
    with pytest.raises(CcsError):
        Sum((a,))
    with pytest.raises(CcsError):
        Sum((a, Sum((a, a))))


# ---------------------------------------------------------------------------
# Family validation


def test_family_rejects_duplicates_and_dangling_refs():
    a = Prefix(name("a"), NIL)
    with pytest.raises(CcsError):
        Family((("A", a), ("A", a)), "A")
    with pytest.raises(CcsError):
        Family((("A", a),), "B")
    with pytest.raises(UndefinedConstantError):
        Family((("A", Prefix(name("a"), Const("Ghost"))),), "A")


# ---------------------------------------------------------------------------
# The transition relation, rule by rule


def _fam(text: str) -> Family:
    return parse_ccs(text).family


def moves(text: str, of: str | None = None):
    fam = _fam(text)
    return successors(fam, Const(of or fam.root))


def test_prefix_rule():
    assert moves("agent A = a.0;") == {(name("a"), NIL)}
    assert moves("agent A = 'a.0;") == {(coname("a"), NIL)}
    assert moves("agent A = tau.0;") == {(TAU, NIL)}


def test_sum_rule_collects_branches():
    assert moves("agent A = a.0 + b.0;") == {(name("a"), NIL), (name("b"), NIL)}


def test_par_interleaves_and_synchronises():
    got = moves("agent A = a.0 | 'a.0;")
    assert (name("a"), Par(NIL, Prefix(coname("a"), NIL))) in got
    assert (coname("a"), Par(Prefix(name("a"), NIL), NIL)) in got
    assert (TAU, Par(NIL, NIL)) in got
    assert len(got) == 3


def test_no_sync_without_complement():
    got = moves("agent A = a.0 | a.0;")
    assert all(not a.is_tau for a, _ in got)


def test_restriction_filters_the_closure():
    assert moves("agent A = (a.0 + 'a.0 + b.0)\\{a};") == {
        (name("b"), Restrict(NIL, ActionSet.of("a")))
    }
    # tau always passes
    assert len(moves("agent A = (tau.0)\\{a};")) == 1


def test_hiding_renames_the_closure_to_tau():
    got = moves("agent A = (a.0 + 'a.0 + b.0)\\\\{a};")
    k = ActionSet.of("a")
    assert got == {(TAU, Hide(NIL, k)), (name("b"), Hide(NIL, k))}


def test_relabelling_applies_to_actions():
    got = moves("agent A = (a.0 + 'a.0 + tau.0)[b/a];")
    f = Relabelling.of({"a": "b"})
    assert got == {
        (name("b"), Relabel(NIL, f)),
        (coname("b"), Relabel(NIL, f)),
        (TAU, Relabel(NIL, f)),
    }


def test_constant_unfolds_to_its_body():
    assert moves("agent B = b.0; agent A = B;") == {(name("b"), NIL)}


def test_unguarded_self_reference_contributes_nothing():
    assert moves("agent A = A;") == frozenset()
    assert moves("agent A = A + a.0;") == {(name("a"), NIL)}
    # mutually unguarded cycle
    assert moves("agent A = B; agent B = A;", of="A") == frozenset()


# ---------------------------------------------------------------------------
# LTS construction


def test_build_lts_is_deterministic():
    fam = _fam("agent A = a.(b.0 | c.0) + tau.A;")
    one, two = build_lts(fam), build_lts(fam)
    assert one.states == two.states
    assert one.transitions == two.transitions


def test_states_fold_back_to_defined_constants():
    fam = _fam("agent B = a.0; agent A = b.a.0;")
    lts = build_lts(fam)
    assert Const("B") in lts.states
    # first definition wins for identical bodies
    fam = _fam("agent X = a.0; agent Y = a.0; agent A = b.a.0;")
    lts = build_lts(fam)
    assert Const("X") in lts.states and Const("Y") not in lts.states


def test_single_state_loop():
    assert build_lts(_fam("agent A = a.A;")).num_states == 1


def test_truncation_flag():
    fam = _fam("agent A = a.(A | A);")
    lts = build_lts(fam, max_states=20)
    assert lts.truncated
    assert lts.num_states <= 20
    with pytest.raises(CcsError):
        build_lts(fam, max_states=0)


def test_sort_collects_all_syntactic_actions():
    fam = _fam("agent A = (a.0)\\{b}[d/c];")
    s = sort(fam)
    for label in "abcd":
        assert name(label) in s and coname(label) in s


def test_reachability_matches_naive_closure(rng):
    for _ in range(60):
        fam, lts = rand_finite_family(rng)
        seen, edges = naive_reachable(fam)
        assert seen == set(lts.states)
        got = {(lts.states[s], a, lts.states[t]) for s, a, t in lts.transitions}
        assert got == edges
