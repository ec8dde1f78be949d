"""Exact simplex over rationals and the allocation LPs built on it.

Everything is solved in standard equality form (max c.x, Ax = b, x >= 0)
with a two-phase tableau method.  Pivoting starts with the largest-
coefficient rule and switches to Bland's rule after a degenerate stall,
so termination is guaranteed while typical solves stay fast.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    Allocation,
    FractionalAllocation,
    Instance,
    bundle_value,
    check_allocation,
    make_allocation,
)
from .graph import Potentials, _check_alpha


class LPError(Exception):
    pass


@dataclass(frozen=True)
class LinearProgram:
    """max c.x subject to A x = b, x >= 0, all entries Rational."""

    c: tuple
    a: tuple
    b: tuple

    def __post_init__(self):
        if any(len(row) != len(self.c) for row in self.a):
            raise ValueError("constraint width does not match objective length")
        if len(self.a) != len(self.b):
            raise ValueError("constraint count does not match rhs length")


@dataclass(frozen=True)
class SimplexResult:
    x: tuple
    objective: Fraction
    duals: tuple  # one multiplier per constraint row


_ZERO = Fraction(0)


def solve_lp(lp: LinearProgram) -> SimplexResult:
    """Two-phase simplex; returns an optimal vertex and row duals.

    Raises LPError on infeasibility or unboundedness (the LPs in this
    package are feasible and bounded by construction, so either signals a
    caller bug).
    """
    nstruct = len(lp.c)
    nrows = len(lp.a)

    # normalize rhs >= 0, remembering flipped rows for the dual signs
    rows = []
    rhs = []
    flipped = []
    for i in range(nrows):
        if lp.b[i] < 0:
            rows.append([-x for x in lp.a[i]])
            rhs.append(-lp.b[i])
            flipped.append(True)
        else:
            rows.append(list(lp.a[i]))
            rhs.append(lp.b[i])
            flipped.append(False)

    ncols = nstruct + nrows  # artificial column per row
    tableau = []
    for i in range(nrows):
        row = rows[i] + [_ZERO] * nrows + [rhs[i]]
        row[nstruct + i] = Fraction(1)
        tableau.append(row)
    basis = [nstruct + i for i in range(nrows)]
    art_start = nstruct

    def run_phase(costs, allow_artificial_entering, expel_artificials):
        # reduced-cost row for the given costs under the current basis
        z = [costs[j] for j in range(ncols)]
        zval = _ZERO
        for r in range(nrows):
            cb = costs[basis[r]]
            if cb != 0:
                trow = tableau[r]
                for j in range(ncols):
                    if trow[j] != 0:
                        z[j] -= cb * trow[j]
                zval += cb * trow[ncols]

        bland = False
        stall = 0
        stall_limit = 4 * (nrows + ncols) + 32
        while True:
            enter = None
            if bland:
                for j in range(ncols):
                    if z[j] > 0 and (allow_artificial_entering or j < art_start):
                        enter = j
                        break
            else:
                best = _ZERO
                for j in range(ncols):
                    if z[j] > best and (allow_artificial_entering or j < art_start):
                        best = z[j]
                        enter = j
            if enter is None:
                return z, zval

            # leaving row: minimum ratio; in phase II a zero-level basic
            # artificial with a negative entering coefficient would drift
            # positive, so expel it first (degenerate, feasible pivot)
            leave = None
            best_ratio = None
            for r in range(nrows):
                coef = tableau[r][enter]
                if (
                    expel_artificials
                    and basis[r] >= art_start
                    and tableau[r][ncols] == 0
                    and coef != 0
                ):
                    leave = r
                    best_ratio = _ZERO
                    break
                if coef > 0:
                    ratio = tableau[r][ncols] / coef
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[r] < basis[leave])
                    ):
                        best_ratio = ratio
                        leave = r
            if leave is None:
                raise LPError("objective unbounded")

            # pivot
            prow = tableau[leave]
            piv = prow[enter]
            if piv != 1:
                inv = 1 / piv
                tableau[leave] = prow = [x * inv for x in prow]
            for r in range(nrows):
                if r == leave:
                    continue
                coef = tableau[r][enter]
                if coef != 0:
                    trow = tableau[r]
                    tableau[r] = [a - coef * b for a, b in zip(trow, prow)]
            coef = z[enter]
            old_zval = zval
            if coef != 0:
                for j in range(ncols):
                    if prow[j] != 0:
                        z[j] -= coef * prow[j]
                zval += coef * prow[ncols]
            basis[leave] = enter

            if not bland:
                if zval > old_zval:
                    stall = 0
                else:
                    stall += 1
                    if stall > stall_limit:
                        bland = True

    # Phase I: drive artificials to zero
    phase1_costs = [_ZERO] * nstruct + [Fraction(-1)] * nrows
    _, zval1 = run_phase(phase1_costs, allow_artificial_entering=True, expel_artificials=False)
    if zval1 != 0:
        raise LPError("infeasible constraint system")

    # Phase II: optimize the real objective; artificials stay barred
    phase2_costs = list(lp.c) + [_ZERO] * nrows
    z, zval = run_phase(phase2_costs, allow_artificial_entering=False, expel_artificials=True)

    x = [_ZERO] * nstruct
    for r in range(nrows):
        if basis[r] < nstruct:
            x[basis[r]] = tableau[r][ncols]
    duals = []
    for i in range(nrows):
        y = -z[art_start + i]
        duals.append(-y if flipped[i] else y)
    return SimplexResult(x=tuple(x), objective=zval, duals=tuple(duals))


# --- allocation LPs ----------------------------------------------------------

def _xvar(inst: Instance, i: int, j: int) -> int:
    return (i - 1) * inst.m + (j - 1)


def _primal_program(inst: Instance, alpha: Sequence[Fraction]) -> LinearProgram:
    n, m, k = inst.n, inst.m, inst.k
    nv = n * m
    c = [_ZERO] * nv
    for i in inst.agents():
        for j in inst.goods():
            c[_xvar(inst, i, j)] = alpha[i - 1] * inst.value(i, j)
    rows = []
    b = []
    for j in inst.goods():  # each good fully assigned
        row = [_ZERO] * nv
        for i in inst.agents():
            row[_xvar(inst, i, j)] = Fraction(1)
        rows.append(tuple(row))
        b.append(Fraction(1))
    for i in inst.agents():  # each agent gets k goods
        row = [_ZERO] * nv
        for j in inst.goods():
            row[_xvar(inst, i, j)] = Fraction(1)
        rows.append(tuple(row))
        b.append(Fraction(k))
    return LinearProgram(c=tuple(c), a=tuple(rows), b=tuple(b))


def solve_primal(inst: Instance, alpha: Sequence[Fraction]) -> tuple:
    """Maximize the alpha-weighted welfare over balanced fractional
    allocations.  The returned vertex is always integral (the constraint
    matrix is totally unimodular), so it doubles as a balanced allocation.

    Returns ``(FractionalAllocation, value)``.
    """
    _check_alpha(inst, alpha)
    res = solve_lp(_primal_program(inst, alpha))
    rows = []
    for i in inst.agents():
        rows.append(tuple(res.x[_xvar(inst, i, j)] for j in inst.goods()))
    x = FractionalAllocation(tuple(rows))
    assert all(v == 0 or v == 1 for row in x.x for v in row), (
        "transportation vertex must be integral"
    )
    assert x.is_feasible(inst, balanced=True)
    return x, res.objective


def vertex_allocation(x: FractionalAllocation) -> Allocation:
    """Integral matrix -> Allocation (raises if any entry is fractional)."""
    bundles = []
    for row in x.x:
        bundle = set()
        for j, v in enumerate(row, start=1):
            if v == 1:
                bundle.add(j)
            elif v != 0:
                raise ValueError("matrix is fractional")
        bundles.append(bundle)
    return make_allocation(bundles)


def solve_dual(inst: Instance, alpha: Sequence[Fraction]) -> Potentials:
    """Minimize k*sum(q) + sum(p) subject to q_i + p_j >= alpha_i v_ij.

    Solved directly as an LP with q, p >= 0 (a nonnegative optimum always
    exists), independently of the shortest-path construction in
    :mod:`fairbalance.graph`.
    """
    _check_alpha(inst, alpha)
    n, m, k = inst.n, inst.m, inst.k
    # variables: q (n), p (m), surplus s_ij (n*m)
    nv = n + m + n * m
    c = [_ZERO] * nv
    for i in range(n):
        c[i] = Fraction(-k)
    for j in range(m):
        c[n + j] = Fraction(-1)
    rows = []
    b = []
    for i in inst.agents():
        for j in inst.goods():
            row = [_ZERO] * nv
            row[i - 1] = Fraction(1)
            row[n + j - 1] = Fraction(1)
            row[n + m + _xvar(inst, i, j)] = Fraction(-1)
            rows.append(tuple(row))
            b.append(alpha[i - 1] * inst.value(i, j))
    res = solve_lp(LinearProgram(c=tuple(c), a=tuple(rows), b=tuple(b)))
    pot = Potentials(q=tuple(res.x[:n]), p=tuple(res.x[n:n + m]))
    assert pot.is_nonnegative() and pot.is_feasible(inst, alpha)
    return pot


@dataclass(frozen=True)
class FpoResult:
    """Outcome of the fPO check: either optimal, or a dominating matrix."""

    is_fpo: bool
    dominating: Optional[FractionalAllocation]
    improvement: Fraction


def check_fpo(inst: Instance, alloc: Allocation, mode: str = "balanced") -> FpoResult:
    """Is the allocation fractionally Pareto optimal?

    Maximizes the total utility surplus over fractional allocations that
    give every agent at least their current utility.  The allocation is
    fPO exactly when the optimum is 0; otherwise the maximizer Pareto-
    dominates it and is returned.  ``mode="unconstrained"`` drops the
    per-agent cardinality constraint (for reduction round trips).
    """
    if mode not in ("balanced", "unconstrained"):
        raise ValueError(f"unknown mode {mode!r}")
    balanced = mode == "balanced"
    check_allocation(inst, alloc, balanced=balanced)
    n, m = inst.n, inst.m
    k = inst.k if balanced else None
    nv = n * m + n  # x variables then z variables
    c = [_ZERO] * nv
    for i in range(n):
        c[n * m + i] = Fraction(1)
    rows = []
    b = []
    for i in inst.agents():  # utility bookkeeping: v_i . x_i - z_i = v_i(A_i)
        row = [_ZERO] * nv
        for j in inst.goods():
            row[_xvar(inst, i, j)] = inst.value(i, j)
        row[n * m + i - 1] = Fraction(-1)
        rows.append(tuple(row))
        b.append(bundle_value(inst, i, alloc.bundle(i)))
    for j in inst.goods():
        row = [_ZERO] * nv
        for i in inst.agents():
            row[_xvar(inst, i, j)] = Fraction(1)
        rows.append(tuple(row))
        b.append(Fraction(1))
    if balanced:
        for i in inst.agents():
            row = [_ZERO] * nv
            for j in inst.goods():
                row[_xvar(inst, i, j)] = Fraction(1)
            rows.append(tuple(row))
            b.append(Fraction(k))
    res = solve_lp(LinearProgram(c=tuple(c), a=tuple(rows), b=tuple(b)))
    assert res.objective >= 0
    if res.objective == 0:
        return FpoResult(is_fpo=True, dominating=None, improvement=_ZERO)
    xrows = []
    for i in inst.agents():
        xrows.append(tuple(res.x[_xvar(inst, i, j)] for j in inst.goods()))
    return FpoResult(
        is_fpo=False,
        dominating=FractionalAllocation(tuple(xrows)),
        improvement=res.objective,
    )


def verify_complementary_slackness(
    inst: Instance,
    x: FractionalAllocation,
    pot: Potentials,
    alpha: Sequence[Fraction],
) -> bool:
    """True iff every pair has x_ij = 0 or q_i + p_j = alpha_i v_ij.

    Feasibility of both arguments is a precondition and violations raise
    (they are a different failure than broken slackness).
    """
    _check_alpha(inst, alpha)
    if not x.is_feasible(inst, balanced=True):
        raise ValueError("x is not a balanced fractional allocation")
    if not pot.is_feasible(inst, alpha):
        raise ValueError("potentials are not dual feasible")
    for i in inst.agents():
        for j in inst.goods():
            if x.entry(i, j) != 0:
                if pot.q[i - 1] + pot.p[j - 1] != alpha[i - 1] * inst.value(i, j):
                    return False
    return True
