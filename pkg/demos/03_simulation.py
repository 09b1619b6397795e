"""
Weak simulation between transition systems
==========================================

Decide whether one system's behaviour is covered by another's up to
internal moves, inspect the witness relation, and revisit the classic
example showing why the preorder is not symmetric.
"""

from ccsabst import (
    build_lts,
    parse_ccs,
    print_expr,
    weakly_simulated_by,
    witness_is_valid,
)

# %%
# Weak simulation lets the richer side answer a visible step with any
# number of internal ``tau`` moves around it.  A process is always
# simulated by a version of itself with extra internal chatter.

quiet = build_lts(parse_ccs("agent A = a.b.A;").family)
noisy = build_lts(parse_ccs("agent A = tau.a.tau.tau.b.A;").family)

holds, witness = weakly_simulated_by(quiet, noisy)
print("quiet <= noisy:", holds)

# %%
# The witness is a concrete relation between the two state sets.  It
# can be audited independently of the algorithm that found it: every
# related pair must satisfy the transfer condition.

for i, j in sorted(witness.relation):
    print(f"  {print_expr(quiet.states[i])}  ~  {print_expr(noisy.states[j])}")
print("witness valid:", witness_is_valid(quiet, noisy, witness))

# %%
# The textbook counterexample: ``a.(b.0 + c.0)`` keeps the choice
# between b and c open after doing a, while ``a.b.0 + a.c.0`` commits
# at the moment a happens.  The committed system cannot simulate the
# deferred one, but the reverse direction holds.

deferred = build_lts(parse_ccs("agent A = a.(b.0 + c.0);").family)
committed = build_lts(parse_ccs("agent B = a.b.0 + a.c.0;").family)

fwd, _ = weakly_simulated_by(deferred, committed)
bwd, _ = weakly_simulated_by(committed, deferred)
print("deferred <= committed:", fwd)
print("committed <= deferred:", bwd)

# %%
# Simulation is the contract behind abstraction: every rewrite rule in
# the catalogue produces a family that weakly simulates the original,
# so box-fragment properties proved on the result carry back.

bigger = build_lts(parse_ccs("agent A = a.b.A + a.c.0;").family)
extra, _ = weakly_simulated_by(quiet, bigger)
print("adding behaviour preserves simulation:", extra)
