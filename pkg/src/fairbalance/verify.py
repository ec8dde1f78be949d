"""Independent fairness and efficiency checkers with explicit witnesses.

Each check returns a :class:`Verdict`; when a check fails the witness
carries the exact rational quantities that break the definition, so a
failure is self-explanatory in reports and CLI output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import graph as graph_mod
from .core import (
    Allocation,
    Instance,
    TooLargeError,
    balanced_allocation_count,
    bundle_value,
    check_allocation,
)


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Optional[dict] = None

    def __bool__(self) -> bool:
        return self.holds


def is_ef1(inst: Instance, alloc: Allocation) -> Verdict:
    """Envy-freeness up to one good.

    Agent i may envy agent i' only up to the single best good (for i) in
    i's view of the other bundle: v_i(A_i) >= v_i(A_i') - max_j v_ij.
    """
    check_allocation(inst, alloc)
    for i in inst.agents():
        own = bundle_value(inst, i, alloc.bundle(i))
        for other in inst.agents():
            if other == i:
                continue
            their = alloc.bundle(other)
            if not their:
                continue
            best = max(inst.value(i, j) for j in their)
            if own < bundle_value(inst, i, their) - best:
                return Verdict(
                    holds=False,
                    witness={
                        "envier": i,
                        "envied": other,
                        "own_value": own,
                        "their_value_minus_best": bundle_value(inst, i, their) - best,
                    },
                )
    return Verdict(holds=True)


def _price_sum(prices: Sequence[Fraction], bundle) -> Fraction:
    return sum((prices[j - 1] for j in bundle), Fraction(0))


def price_drop_top(prices: Sequence[Fraction], bundle) -> Fraction:
    """p-hat: bundle price with its single highest-priced good removed."""
    if not bundle:
        raise ValueError("bundle must be non-empty")
    return _price_sum(prices, bundle) - max(prices[j - 1] for j in bundle)


def is_p_ef1(prices: Sequence[Fraction], alloc: Allocation) -> Verdict:
    """EF1 stated on prices: p(A_i) >= p-hat(A_i') for every agent pair."""
    if any(not b for b in alloc.bundles):
        raise ValueError("price EF1 needs non-empty bundles")
    sums = [_price_sum(prices, b) for b in alloc.bundles]
    hats = [price_drop_top(prices, b) for b in alloc.bundles]
    for i in range(alloc.n):
        for other in range(alloc.n):
            if i == other:
                continue
            if sums[i] < hats[other]:
                return Verdict(
                    holds=False,
                    witness={
                        "envier": i + 1,
                        "envied": other + 1,
                        "own_price": sums[i],
                        "their_price_drop_top": hats[other],
                    },
                )
    return Verdict(holds=True)


def is_po_bruteforce(inst: Instance, alloc: Allocation, max_states: int = 10 ** 6) -> Verdict:
    """Pareto optimality by enumerating all balanced allocations.

    Deciding PO is intractable in general, so this is guarded: instances
    with more than ``max_states`` balanced allocations are rejected.
    """
    from .oracle import enumerate_balanced  # local import to avoid a cycle

    check_allocation(inst, alloc, balanced=True)
    if balanced_allocation_count(inst) > max_states:
        raise TooLargeError(
            f"{balanced_allocation_count(inst)} balanced allocations exceed the "
            f"guard of {max_states}"
        )
    mine = [bundle_value(inst, i, alloc.bundle(i)) for i in inst.agents()]
    for cand in enumerate_balanced(inst, max_states=max_states):
        theirs = [bundle_value(inst, i, cand.bundle(i)) for i in inst.agents()]
        if all(t >= m for t, m in zip(theirs, mine)) and any(
            t > m for t, m in zip(theirs, mine)
        ):
            return Verdict(
                holds=False,
                witness={
                    "dominated_by": tuple(sorted(sorted(b) for b in cand.bundles)),
                    "values": tuple(mine),
                    "dominating_values": tuple(theirs),
                },
            )
    return Verdict(holds=True)


def certify_fpo(inst: Instance, alloc: Allocation, alpha: Sequence[Fraction]) -> Verdict:
    """Positive fPO certificate: the allocation maximizes the alpha-weighted
    welfare exactly when its exchange graph has no negative cycle."""
    g = graph_mod.build_exchange_graph(inst, alloc, alpha)
    cycle = graph_mod.detect_negative_cycle(g)
    if cycle is None:
        return Verdict(holds=True)
    return Verdict(
        holds=False,
        witness={
            "negative_cycle": cycle,
            "cycle_weight": graph_mod.cycle_weight(g, cycle),
        },
    )
