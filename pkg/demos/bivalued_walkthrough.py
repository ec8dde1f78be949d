"""Personalized bivalued valuations: one matching, fair and efficient.

Each agent rates every good either "high" (a_i) or "low" (b_i).  Expanding
each agent into k slots and perturbing high-good weights by slot index
makes a single maximum-weight perfect matching both EF1 and fPO.
"""


from fairbalance import check_bivalued_fpo, check_fpo, is_ef1, make_instance, solve_bivalued
from fairbalance.bivalued import bivalued_pairs, slot_epsilon, slot_weight

inst = make_instance(
    3,
    6,
    [
        [7, 2, 7, 2, 2, 7],   # agent 1: high 7, low 2
        [9, 9, 0, 0, 9, 0],   # agent 2: high 9, low 0
        [5, 4, 4, 5, 5, 4],   # agent 3: high 5, low 4
    ],
)

pairs = bivalued_pairs(inst)
eps = slot_epsilon(inst.n, inst.k).epsilon
print(f"n={inst.n} agents, m={inst.m} goods, k={inst.k} each; perturbation eps = {eps}")
print("per-agent (high, low) pairs:", [(int(a), int(b)) for a, b in pairs])

print("\nslot weights for agent 1 (slots are rows, goods are columns):")
for s in range(1, inst.k + 1):
    row = [slot_weight(pairs[0], s, inst.value(1, j), eps) for j in inst.goods()]
    print(f"  slot {s}: {[str(w) for w in row]}")

allocation, alpha = solve_bivalued(inst)
print("\nallocation:", [sorted(b) for b in allocation.bundles])
print("certificate weights 1/(a_i - b_i):", [str(a) for a in alpha])
print("EF1:", is_ef1(inst, allocation).holds)
print("fPO via the weighted-matching test:", check_bivalued_fpo(inst, allocation))
print("fPO via the exact LP test:        ", check_fpo(inst, allocation).is_fpo)

high_per_agent = [
    sum(1 for j in allocation.bundle(i) if inst.value(i, j) == pairs[i - 1][0])
    for i in inst.agents()
]
print("high goods received per agent:", high_per_agent, "(spread within one unit)")
