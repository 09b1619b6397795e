"""
Building and exploring labelled transition systems
==================================================

Parse a small process description, build its state space, and poke
around in the resulting transition system.
"""

from ccsabst import build_lts, parse_ccs, print_expr, print_family

# %%
# Two vending machines.  ``VM`` takes a coin and then dispenses either
# tea or coffee; ``Chooser`` commits to the drink at the moment the
# coin goes in.  The last agent defined is the root of the family.

source = """
agent VM = coin.(tea.VM + coffee.VM);
agent Chooser = coin.tea.Chooser + coin.coffee.Chooser;
agent System = (VM | 'coin.'tea.0) \\ {coin, tea};
"""

family = parse_ccs(source).family
print(print_family(family))

# %%
# ``build_lts`` explores the state space breadth-first from the root.
# States are process expressions, folded back to constant names where
# they match a definition, so the output stays readable.

lts = build_lts(family)
print(f"{lts.num_states} states, {len(lts.transitions)} transitions")
print("alphabet:", ", ".join(str(a) for a in sorted(lts.alphabet)))

# %%
# Transitions are triples (source index, action, target index).  The
# two ``coin``/``'coin`` halves synchronise into a single tau move
# because the restriction ``\ {coin, tea}`` forbids them individually.

for src, act, dst in lts.transitions:
    print(f"  {src} --{act}--> {dst}   from {print_expr(lts.states[src])}")

# %%
# Exploration is bounded: a process with unbounded parallel growth is
# reported as truncated rather than looping forever.

runaway = parse_ccs("agent A = a.(A | A);").family
bounded = build_lts(runaway, max_states=100)
print("truncated:", bounded.truncated, "after", bounded.num_states, "states")
