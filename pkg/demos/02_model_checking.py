"""
Model checking modal mu-calculus properties
===========================================

Check safety properties of Dekker's mutual-exclusion algorithm, both
hand-written formulas and the ``cycle`` macro, and classify formulas
into the fragment preserved by abstraction.
"""

from ccsabst import build_lts, check, check_table, classify, corpus, parse_mu

# %%
# The bundled corpus ships the two-process Dekker model together with
# its mutual-exclusion property.  ``ME`` says: along every observable
# run, entering and exiting the critical sections strictly alternate.

entry = corpus.load("dekker")
lts = build_lts(entry.family().family)
print(f"Dekker: {lts.num_states} states")

me = entry.formulas()["ME"]
print("ME holds:", check(lts, me))

# %%
# Formulas live in positive normal form with strong ``[a]``/``<a>`` and
# weak ``[[a]]``/``<<a>>`` modalities, with ``&`` and ``|`` as the
# connectives.  ``-`` inside a modality complements the label set, so
# ``[-halt]`` ranges over every action except ``halt``.  A greatest
# fixpoint expresses an invariant; here: every reachable state has at
# least one outgoing transition.

nodead = parse_mu(
    "prop NoDeadlock = max Z. <-halt>tt & [-halt]Z;"
)["NoDeadlock"]
print("NoDeadlock holds:", check(lts, nodead))

# %%
# ``check_table`` evaluates a formula at every state, useful for
# seeing where a property holds and where it breaks.

can_enter = parse_mu("prop CanEnter = <<enter1>>tt;")["CanEnter"]
_, table = check_table(lts, can_enter)
print(f"CanEnter holds in {sum(table)} of {len(table)} states")

# %%
# Only the fragment with weak box modalities and greatest fixpoints is
# preserved downwards by the abstraction rules.  ``classify`` tells you
# whether a check on the abstract system transfers to the concrete one.

for label, formula in [("ME", me), ("NoDeadlock", nodead), ("CanEnter", can_enter)]:
    print(f"{label}: {classify(formula)}")

# %%
# The ``cycle`` macro packages the common "these event groups repeat in
# this order, forever" pattern as two nested greatest fixpoints.  The
# two-state alternator is the smallest model of it.

alt = corpus.load("alternator")
alt_lts = build_lts(alt.family().family)
cyc = alt.formulas()["Cycle"]
print("alternator states:", alt_lts.num_states)
print("Cycle holds:", check(alt_lts, cyc), "| fragment:", classify(cyc))
