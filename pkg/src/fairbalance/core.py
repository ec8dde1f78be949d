"""Problem instances, allocations and basic welfare functionals.

All numeric quantities are exact rationals (``fractions.Fraction``); no
floating point is used anywhere in solver paths.  Agents and goods are
1-based in every public interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction]


class FairDivisionError(Exception):
    """Base class for errors raised by this package."""


class NotBivalued(FairDivisionError):
    """Instance is not personalized bivalued."""


class MoreThanTwoTypes(FairDivisionError):
    """Instance has three or more distinct valuation rows."""


class NegativeCycleError(FairDivisionError):
    """The exchange graph has a negative cycle (allocation not optimal)."""

    def __init__(self, cycle):
        super().__init__(f"allocation is not weighted-welfare optimal: {cycle}")
        self.cycle = cycle


class TooLargeError(FairDivisionError):
    """Enumeration would exceed the state-count guard."""


class InternalInvariantError(FairDivisionError):
    """A property the algorithms guarantee failed to hold."""


def as_rational(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class Instance:
    """An allocation problem: ``n`` agents, ``m`` goods, additive values.

    ``values[i-1][j-1]`` is agent ``i``'s value for good ``j``.  Balanced
    allocations give every agent exactly ``k = m/n`` goods; ``m`` may be a
    non-multiple of ``n`` only for inputs to the unconstrained-to-balanced
    reduction, and accessing ``k`` then raises.
    """

    n: int
    m: int
    values: tuple

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError("need at least one agent and one good")
        if len(self.values) != self.n or any(len(r) != self.m for r in self.values):
            raise ValueError("value matrix shape does not match (n, m)")
        for row in self.values:
            for v in row:
                if not isinstance(v, Fraction):
                    raise TypeError("values must be Fractions; use make_instance")
                if v < 0:
                    raise ValueError("values must be nonnegative")

    @property
    def k(self) -> int:
        if self.m % self.n != 0:
            raise ValueError(f"m={self.m} is not a multiple of n={self.n}")
        return self.m // self.n

    def value(self, agent: int, good: int) -> Fraction:
        """Value of ``good`` for ``agent`` (both 1-based)."""
        if not 1 <= agent <= self.n:
            raise IndexError(f"agent {agent} out of range 1..{self.n}")
        if not 1 <= good <= self.m:
            raise IndexError(f"good {good} out of range 1..{self.m}")
        return self.values[agent - 1][good - 1]

    def agents(self) -> range:
        return range(1, self.n + 1)

    def goods(self) -> range:
        return range(1, self.m + 1)


def make_instance(n: int, m: int, values: Sequence[Sequence[RationalLike]]) -> Instance:
    """Build an :class:`Instance` from any int/Fraction matrix."""
    rows = tuple(tuple(as_rational(v) for v in row) for row in values)
    return Instance(n=n, m=m, values=rows)


@dataclass(frozen=True)
class Allocation:
    """An ordered partition of the goods into one bundle per agent."""

    bundles: tuple

    def __post_init__(self):
        for b in self.bundles:
            if not isinstance(b, frozenset):
                raise TypeError("bundles must be frozensets; use make_allocation")

    @property
    def n(self) -> int:
        return len(self.bundles)

    def bundle(self, agent: int) -> frozenset:
        return self.bundles[agent - 1]

    def owner_map(self) -> dict:
        return {j: i for i, b in enumerate(self.bundles, start=1) for j in b}

    def is_partition_of(self, m: int) -> bool:
        seen = set()
        for b in self.bundles:
            if b & seen:
                return False
            seen |= b
        return seen == set(range(1, m + 1))

    def is_balanced(self, inst: Instance) -> bool:
        k = inst.k
        return (
            len(self.bundles) == inst.n
            and self.is_partition_of(inst.m)
            and all(len(b) == k for b in self.bundles)
        )

    def assignment_string(self) -> tuple:
        """Good -> agent tuple, the enumeration order key."""
        owner = self.owner_map()
        return tuple(owner[j] for j in sorted(owner))


def make_allocation(bundles: Iterable[Iterable[int]]) -> Allocation:
    return Allocation(tuple(frozenset(b) for b in bundles))


def check_allocation(inst: Instance, alloc: Allocation, balanced: bool = False) -> None:
    if alloc.n != inst.n:
        raise ValueError(f"allocation has {alloc.n} bundles, instance has {inst.n} agents")
    if not alloc.is_partition_of(inst.m):
        raise ValueError("bundles do not partition the goods")
    if balanced and not alloc.is_balanced(inst):
        raise ValueError("allocation is not balanced")


@dataclass(frozen=True)
class FractionalAllocation:
    """An n x m matrix of Fractions in [0, 1]; column sums are 1.

    Balanced variants additionally have every row summing to ``k``;
    ``check_fpo`` in unconstrained mode produces unbalanced ones, so row
    sums are validated only on request.
    """

    x: tuple

    def entry(self, agent: int, good: int) -> Fraction:
        return self.x[agent - 1][good - 1]

    def column_sums_ok(self) -> bool:
        n = len(self.x)
        m = len(self.x[0])
        return all(sum(self.x[i][j] for i in range(n)) == 1 for j in range(m))

    def row_sums_ok(self, k: int) -> bool:
        return all(sum(row) == k for row in self.x)

    def is_feasible(self, inst: Instance, balanced: bool = True) -> bool:
        if len(self.x) != inst.n or any(len(r) != inst.m for r in self.x):
            return False
        if any(v < 0 or v > 1 for row in self.x for v in row):
            return False
        if not self.column_sums_ok():
            return False
        if balanced and not self.row_sums_ok(inst.k):
            return False
        return True


def allocation_matrix(inst: Instance, alloc: Allocation) -> FractionalAllocation:
    """0/1 matrix form of an integral allocation."""
    rows = []
    for i in inst.agents():
        b = alloc.bundle(i)
        rows.append(tuple(Fraction(1) if j in b else Fraction(0) for j in inst.goods()))
    return FractionalAllocation(tuple(rows))


# --- instance classification -------------------------------------------------

@dataclass(frozen=True)
class SingleType:
    row: tuple


@dataclass(frozen=True)
class Bivalued:
    """Per-agent (high, low) value pairs with high > low >= 0."""

    pairs: tuple


@dataclass(frozen=True)
class TwoType:
    """Two distinct valuation rows; type 1 is the type of agent 1."""

    u1: tuple
    u2: tuple
    members1: tuple
    members2: tuple


@dataclass(frozen=True)
class General:
    pass


InstanceClass = Union[SingleType, Bivalued, TwoType, General]


def classify(inst: Instance) -> InstanceClass:
    """Most specific class, preferring SingleType > Bivalued > TwoType."""
    rows = inst.values
    distinct_rows = []
    for r in rows:
        if r not in distinct_rows:
            distinct_rows.append(r)
    if len(distinct_rows) == 1:
        return SingleType(row=distinct_rows[0])

    pairs = []
    bivalued = True
    for r in rows:
        vals = sorted(set(r))
        if len(vals) == 1:
            # constant row: treat every good as the low value
            pairs.append((vals[0] + 1, vals[0]))
        elif len(vals) == 2:
            pairs.append((vals[1], vals[0]))
        else:
            bivalued = False
            break
    if bivalued:
        return Bivalued(pairs=tuple(pairs))

    if len(distinct_rows) == 2:
        u1 = rows[0]
        u2 = distinct_rows[1] if distinct_rows[0] == u1 else distinct_rows[0]
        if u2 == u1:
            u2 = next(r for r in distinct_rows if r != u1)
        members1 = tuple(i for i in inst.agents() if rows[i - 1] == u1)
        members2 = tuple(i for i in inst.agents() if rows[i - 1] != u1)
        return TwoType(u1=u1, u2=u2, members1=members1, members2=members2)

    return General()


# --- welfare functionals -----------------------------------------------------

def bundle_value(inst: Instance, agent: int, bundle: Iterable[int]) -> Fraction:
    """Additive value of a set of goods for one agent; empty set is 0."""
    total = Fraction(0)
    for j in bundle:
        total += inst.value(agent, j)
    return total


def nash_product(inst: Instance, alloc: Allocation) -> Fraction:
    """Product of the agents' bundle values (orders like the geometric mean)."""
    check_allocation(inst, alloc)
    prod = Fraction(1)
    for i in inst.agents():
        prod *= bundle_value(inst, i, alloc.bundle(i))
    return prod


def utilitarian_value(inst: Instance, alloc: Allocation, alpha: Sequence[Fraction] | None = None) -> Fraction:
    """Sum of (optionally weighted) bundle values."""
    total = Fraction(0)
    for i in inst.agents():
        w = alpha[i - 1] if alpha is not None else Fraction(1)
        total += w * bundle_value(inst, i, alloc.bundle(i))
    return total


def round_robin_by_preference(inst: Instance) -> Allocation:
    """Classic round robin: agents 1..n repeatedly pick their favorite
    remaining good (ties to the lowest good index).  Always EF1."""
    remaining = set(inst.goods())
    bundles = [set() for _ in range(inst.n)]
    for _ in range(inst.k):
        for i in inst.agents():
            best = max(remaining, key=lambda j: (inst.value(i, j), -j))
            bundles[i - 1].add(best)
            remaining.remove(best)
    return make_allocation(bundles)


# --- unconstrained -> balanced reduction -------------------------------------

def reduce_unconstrained(inst: Instance) -> tuple:
    """Append m*(n-1) zero-valued dummy goods so the total is n*m and
    k = m; any balanced allocation of the result induces an allocation of
    the original goods by stripping the dummies.

    Returns ``(reduced instance, dummy good index set)``.
    """
    dummies = inst.m * (inst.n - 1)
    if dummies == 0:
        return inst, frozenset()
    new_m = inst.m + dummies
    rows = tuple(row + (Fraction(0),) * dummies for row in inst.values)
    reduced = Instance(n=inst.n, m=new_m, values=rows)
    return reduced, frozenset(range(inst.m + 1, new_m + 1))


def strip_dummies(alloc: Allocation, dummies: frozenset) -> Allocation:
    """Inverse of :func:`reduce_unconstrained` on allocations."""
    return Allocation(tuple(b - dummies for b in alloc.bundles))


def balanced_allocation_count(inst: Instance) -> int:
    """m! / (k!)^n, the number of balanced allocations."""
    count = math.factorial(inst.m)
    kf = math.factorial(inst.k)
    for _ in range(inst.n):
        count //= kf
    return count
