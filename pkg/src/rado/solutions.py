"""Solution enumeration over [1, n], hyperedge construction, and the
power-sum reachability oracle.

Enumeration works on canonical representatives: variables of one side
sharing a coefficient (and free/constrained status) are interchangeable,
so values are scanned non-decreasing within each such group.  One side is
materialized into a total -> representatives map and the other side is
streamed against it, which keeps the scan linear in the side product
instead of the full tuple space.  Free variables are solved exactly from
the residual and are not bounded by n.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial, isqrt

from .equations import Equation

OVERFLOW_LIMIT = 2**62
MAX_SOLUTIONS = 1_000_000
MATERIALIZE_CAP = 5_000_000


class OverflowGuardError(ValueError):
    """Bound n would push a side sum past the 64-bit safety limit."""


class SolutionCapError(RuntimeError):
    """Expanding all ordered solutions would exceed the listing cap."""


class EnumerationBudgetExceeded(RuntimeError):
    """Internal: canonical scan aborted after visiting too many nodes."""


def check_overflow(eq: Equation, n: int) -> None:
    if n < 1:
        raise ValueError(f"bound must be >= 1, got {n}")
    if eq.side_max_sum(n) > OVERFLOW_LIMIT:
        raise OverflowGuardError(
            f"bound {n} overflows the 64-bit guard for {eq.render()!r}"
        )


@dataclass
class SolutionTuple:
    """One assignment satisfying the equation exactly.

    values holds the constrained variables (all <= the enumeration bound);
    free_values holds free variables, which may exceed it.
    """

    values: dict[str, int]
    free_values: dict[str, int]

    def constrained(self) -> tuple[int, ...]:
        return tuple(self.values.values())

    def render(self, eq: Equation) -> str:
        """Substitute values into the equation, e.g. '1+1=2' or '3^2+4^2=5^2'."""
        def side(terms):
            parts = []
            for t in terms:
                v = self.values.get(t.variable, self.free_values.get(t.variable))
                s = f"{v}^2" if eq.degree == 2 else str(v)
                if t.coefficient != 1:
                    s = f"{t.coefficient}*{s}"
                parts.append(s)
            return "+".join(parts)

        return f"{side(eq.lhs)}={side(eq.rhs)}"


@dataclass(frozen=True)
class EdgeSet:
    """Hyperedges (distinct constrained values of solutions) within [1, n]."""

    n: int
    edges: tuple[tuple[int, ...], ...]
    minimized: bool = False

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class _Group:
    """Interchangeable slots: one side, equal coefficient, same free status."""

    coefficient: int
    names: tuple[str, ...]
    is_free: bool

    @property
    def size(self) -> int:
        return len(self.names)


@lru_cache(maxsize=256)
def _side_groups(eq: Equation, which: str) -> tuple[_Group, ...]:
    terms = eq.lhs if which == "lhs" else eq.rhs
    buckets: dict[tuple[int, bool], list[str]] = {}
    for t in terms:
        buckets.setdefault((t.coefficient, eq.is_free(t.variable)), []).append(t.variable)
    return tuple(
        _Group(coef, tuple(names), free)
        for (coef, free), names in sorted(buckets.items())
    )


def _est_reps(groups: tuple[_Group, ...], n: int) -> int:
    est = 1
    for g in groups:
        est *= comb(n + g.size - 1, g.size)
    return est


class _Budget:
    __slots__ = ("left",)

    def __init__(self, nodes: int | None):
        self.left = nodes

    def spend(self, amount: int) -> None:
        if self.left is not None:
            self.left -= amount
            if self.left < 0:
                raise EnumerationBudgetExceeded()


def _iter_side_reps(groups, degree, bound, cap, budget):
    """Yield (total, values) for every canonical assignment of one side.

    values is a tuple of per-group non-decreasing value tuples; total is
    the side's weighted power sum, always <= cap.
    """
    mins = [g.coefficient * g.size for g in groups]  # every slot at value 1
    tail_min = [0] * (len(groups) + 1)
    for i in range(len(groups) - 1, -1, -1):
        tail_min[i] = tail_min[i + 1] + mins[i]
    powers = [
        [g.coefficient * v**degree for v in range(bound + 1)] for g in groups
    ]

    def rec(gi, partial, acc):
        if gi == len(groups):
            yield partial, tuple(acc)
            return
        g = groups[gi]
        later = tail_min[gi + 1]
        pw = powers[gi]

        def fill(slot, lo, part, vals):
            budget.spend(1)
            rest = g.size - slot - 1
            if slot == g.size - 1:
                v = lo
                while v <= bound and part + pw[v] + later <= cap:
                    vals.append(v)
                    yield from rec(gi + 1, part + pw[v], acc + [tuple(vals)])
                    vals.pop()
                    v += 1
                return
            v = lo
            while v <= bound and part + pw[v] * (rest + 1) + later <= cap:
                vals.append(v)
                yield from fill(slot + 1, v, part + pw[v], vals)
                vals.pop()
                v += 1

        yield from fill(0, 1, partial, [])

    yield from rec(0, 0, [])


def _iter_matching_reps(groups, degree, bound, cap, probe, budget):
    """Stream one side's canonical assignments, yielding only those whose
    total appears in probe.  The innermost slot runs as a tight loop so the
    scan cost stays close to raw arithmetic."""
    mins = [g.coefficient * g.size for g in groups]
    tail_min = [0] * (len(groups) + 1)
    for i in range(len(groups) - 1, -1, -1):
        tail_min[i] = tail_min[i + 1] + mins[i]
    powers = [
        [g.coefficient * v**degree for v in range(bound + 1)] for g in groups
    ]

    glast = len(groups) - 1

    def rec(gi, partial, acc):
        g = groups[gi]
        later = tail_min[gi + 1]
        pw = powers[gi]

        def fill(slot, lo, part, vals):
            if gi == glast and slot == g.size - 1:
                # innermost slot: probe the other side's totals directly
                v = lo
                limit = cap - later
                count = 0
                while v <= bound:
                    t = part + pw[v]
                    if t > limit:
                        break
                    if t in probe:
                        yield t, acc + (tuple(vals + [v]),)
                    v += 1
                    count += 1
                budget.spend(count + 1)
                return
            budget.spend(1)
            rest = g.size - slot - 1
            if slot == g.size - 1:
                v = lo
                while v <= bound and part + pw[v] + later <= cap:
                    yield from rec(gi + 1, part + pw[v], acc + (tuple(vals + [v]),))
                    v += 1
                return
            v = lo
            while v <= bound and part + pw[v] * (rest + 1) + later <= cap:
                vals.append(v)
                yield from fill(slot + 1, v, part + pw[v], vals)
                vals.pop()
                v += 1

        yield from fill(0, 1, partial, [])

    if groups:
        yield from rec(0, 0, ())


def _iter_free_exact(groups, degree, residual, budget):
    """Yield per-group value tuples of free slots summing exactly to residual.

    Values are unbounded above; the final slot is solved by exact integer
    root extraction instead of scanning.
    """
    mins = [g.coefficient * g.size for g in groups]
    tail_min = [0] * (len(groups) + 1)
    for i in range(len(groups) - 1, -1, -1):
        tail_min[i] = tail_min[i + 1] + mins[i]

    def solve_last(coef, remaining, lo):
        if remaining < coef or remaining % coef:
            return None
        target = remaining // coef
        v = isqrt(target) if degree == 2 else target
        if v < lo or v**degree != target:
            return None
        return v

    def rec(gi, remaining, acc):
        budget.spend(1)
        g = groups[gi]
        last_group = gi == len(groups) - 1

        def fill(slot, lo, rem, vals):
            if last_group and slot == g.size - 1:
                v = solve_last(g.coefficient, rem, lo)
                if v is not None:
                    yield acc + (tuple(vals + [v]),)
                return
            rest = g.size - slot - 1
            v = lo
            while g.coefficient * v**degree * (rest + 1) + tail_min[gi + 1] <= rem:
                vals.append(v)
                if slot == g.size - 1:
                    yield from rec(gi + 1, rem - g.coefficient * v**degree,
                                   acc + (tuple(vals),))
                else:
                    yield from fill(slot + 1, v, rem - g.coefficient * v**degree, vals)
                vals.pop()
                v += 1

        yield from fill(0, 1, remaining, [])

    if groups:
        yield from rec(0, residual, ())
    elif residual == 0:
        yield ()


@dataclass(frozen=True)
class _Rep:
    """One canonical solution: per-group value tuples for each side."""

    lhs: tuple[tuple[int, ...], ...]
    rhs: tuple[tuple[int, ...], ...]


@lru_cache(maxsize=256)
def _plan(eq: Equation):
    """Static enumeration plan: split groups into constrained/free parts."""
    lhs = _side_groups(eq, "lhs")
    rhs = _side_groups(eq, "rhs")
    free_side = None
    if any(g.is_free for g in lhs):
        free_side = "lhs"
    elif any(g.is_free for g in rhs):
        free_side = "rhs"
    return lhs, rhs, free_side


def _iter_reps(eq: Equation, n: int, node_budget: int | None = None):
    """Yield every canonical solution representative within [1, n]."""
    check_overflow(eq, n)
    lhs, rhs, free_side = _plan(eq)
    budget = _Budget(node_budget)
    degree = eq.degree

    if free_side is None:
        # a matching total must be reachable by both sides
        cap = min(
            sum(g.coefficient * g.size for g in side) * n**degree
            for side in (lhs, rhs)
        )
        mat_lhs = _est_reps(lhs, n) <= _est_reps(rhs, n)
        mat_groups, stream_groups = (lhs, rhs) if mat_lhs else (rhs, lhs)
        table: dict[int, list] = {}
        count = 0
        for total, vals in _iter_side_reps(mat_groups, degree, n, cap, budget):
            table.setdefault(total, []).append(vals)
            count += 1
            if count > MATERIALIZE_CAP:
                raise SolutionCapError("equation too dense to enumerate")
        for total, svals in _iter_matching_reps(
            stream_groups, degree, n, cap, table, budget
        ):
            for mvals in table[total]:
                if mat_lhs:
                    yield _Rep(mvals, svals)
                else:
                    yield _Rep(svals, mvals)
        return

    # one side carries free variables: materialize the fully constrained side
    f_groups = lhs if free_side == "lhs" else rhs
    c_groups = rhs if free_side == "lhs" else lhs
    f_constrained = tuple(g for g in f_groups if not g.is_free)
    f_free = tuple(g for g in f_groups if g.is_free)
    free_min = sum(g.coefficient * g.size for g in f_free)
    c_cap = sum(g.coefficient * n**degree * g.size for g in c_groups)

    table = {}
    count = 0
    for total, vals in _iter_side_reps(c_groups, degree, n, c_cap, budget):
        table.setdefault(total, []).append(vals)
        count += 1
        if count > MATERIALIZE_CAP:
            raise SolutionCapError("equation too dense to enumerate")
    totals = sorted(table)

    def assemble(cvals, fvals_constrained, fvals_free):
        # reassemble the free side's group tuple in _side_groups order
        out = []
        ci = fi = 0
        for g in f_groups:
            if g.is_free:
                out.append(fvals_free[fi])
                fi += 1
            else:
                out.append(fvals_constrained[ci])
                ci += 1
        fv = tuple(out)
        return _Rep(fv, cvals) if free_side == "lhs" else _Rep(cvals, fv)

    fc_cap = (totals[-1] - free_min) if totals else -1
    for partial, fvals in _iter_side_reps(f_constrained, degree, n, fc_cap, budget):
        lo = bisect_left(totals, partial + free_min)
        for total in totals[lo:]:
            for free_vals in _iter_free_exact(f_free, degree, total - partial, budget):
                for cvals in table[total]:
                    yield assemble(cvals, fvals, free_vals)


def _rep_constrained(eq: Equation, rep: _Rep) -> tuple[int, ...]:
    lhs, rhs, _ = _plan(eq)
    vals = []
    for groups, side_vals in ((lhs, rep.lhs), (rhs, rep.rhs)):
        for g, gv in zip(groups, side_vals):
            if not g.is_free:
                vals.extend(gv)
    return tuple(vals)


def _rep_to_solution(eq: Equation, rep: _Rep) -> SolutionTuple:
    lhs, rhs, _ = _plan(eq)
    values: dict[str, int] = {}
    free_values: dict[str, int] = {}
    for groups, side_vals in ((lhs, rep.lhs), (rhs, rep.rhs)):
        for g, gv in zip(groups, side_vals):
            target = free_values if g.is_free else values
            for name, v in zip(g.names, gv):
                target[name] = v
    return SolutionTuple(values, free_values)


def _distinct_ok(eq: Equation, rep: _Rep) -> bool:
    if not eq.distinct_required:
        return True
    vals = _rep_constrained(eq, rep)
    return len(set(vals)) == len(vals)


def iter_canonical_solutions(eq: Equation, n: int, node_budget: int | None = None):
    """One SolutionTuple per canonical representative (group-sorted values).

    Permutations of values across interchangeable variables are collapsed;
    use enumerate_solutions for the full ordered listing.
    """
    for rep in _iter_reps(eq, n, node_budget):
        if _distinct_ok(eq, rep):
            yield _rep_to_solution(eq, rep)


def enumerate_solutions(eq: Equation, n: int, limit: int = MAX_SOLUTIONS) -> list[SolutionTuple]:
    """Every solution with constrained values in [1, n], each assignment
    emitted once, sorted lexicographically by canonical variable order.

    Free variables are solved exactly and may exceed n.  Raises
    SolutionCapError when the ordered listing would exceed limit entries.
    """
    lhs, rhs, _ = _plan(eq)
    order = eq.variables
    out = []
    total = 0
    for rep in _iter_reps(eq, n):
        if not _distinct_ok(eq, rep):
            continue
        expansions = 1
        for groups, side_vals in ((lhs, rep.lhs), (rhs, rep.rhs)):
            for g, gv in zip(groups, side_vals):
                expansions *= _n_perms(gv)
        total += expansions
        if total > limit:
            raise SolutionCapError(
                f"listing exceeds {limit} solutions; raise limit or lower n"
            )
        out.extend(_expand(eq, lhs, rhs, rep))
    out.sort(key=lambda s: tuple(
        s.values.get(v, s.free_values.get(v)) for v in order
    ))
    return out


def _n_perms(vals: tuple[int, ...]) -> int:
    count = factorial(len(vals))
    for v in set(vals):
        count //= factorial(vals.count(v))
    return count


def _distinct_perms(vals: tuple[int, ...]):
    """Distinct orderings of a multiset, lexicographically."""
    counts = {v: vals.count(v) for v in sorted(set(vals))}
    out: list[int] = []

    def rec(remaining):
        if remaining == 0:
            yield tuple(out)
            return
        for x in counts:
            if counts[x]:
                counts[x] -= 1
                out.append(x)
                yield from rec(remaining - 1)
                out.pop()
                counts[x] += 1

    yield from rec(len(vals))


def _expand(eq, lhs, rhs, rep):
    per_group = []
    names = []
    for groups, side_vals in ((lhs, rep.lhs), (rhs, rep.rhs)):
        for g, gv in zip(groups, side_vals):
            per_group.append(list(_distinct_perms(gv)))
            names.append(g.names)
    for combo in itertools.product(*per_group):
        values: dict[str, int] = {}
        free_values: dict[str, int] = {}
        for g_names, g_vals in zip(names, combo):
            for name, v in zip(g_names, g_vals):
                if eq.is_free(name):
                    free_values[name] = v
                else:
                    values[name] = v
        yield SolutionTuple(values, free_values)


def build_hyperedges(
    eq: Equation,
    n: int,
    minimize: bool = False,
    node_budget: int | None = None,
    edge_cap: int | None = None,
) -> EdgeSet:
    """Deduplicated hyperedges (distinct constrained value sets) in [1, n].

    With minimize=True edges that are supersets of other edges are removed;
    a coloring violates the minimized set iff it violates the full one.
    """
    seen = set()
    for rep in _iter_reps(eq, n, node_budget):
        if not _distinct_ok(eq, rep):
            continue
        edge = tuple(sorted(set(_rep_constrained(eq, rep))))
        if edge not in seen:
            seen.add(edge)
            if edge_cap is not None and len(seen) > edge_cap:
                raise EnumerationBudgetExceeded()
    edges = sorted(seen, key=lambda e: (e[-1], e))
    if minimize:
        edges = _minimize(edges)
    return EdgeSet(n=n, edges=tuple(edges), minimized=minimize)


def _minimize(edges):
    """Drop edges that are supersets of other edges (subset subsumption)."""
    kept_masks: list[int] = []
    kept = []
    for e in sorted(edges, key=lambda e: (len(e), e)):
        m = 0
        for v in e:
            m |= 1 << v
        if any((km & m) == km for km in kept_masks):
            continue
        kept_masks.append(m)
        kept.append(e)
    return sorted(kept, key=lambda e: (e[-1], e))


def edges_to_json(eq: Equation, edge_set: EdgeSet) -> dict:
    """JSON-ready export: equation string, bound, and ascending edge lists."""
    return {
        "equation": eq.render(),
        "n": edge_set.n,
        "edges": [list(e) for e in edge_set.edges],
    }


class PowerSumTable:
    """Reachability of weighted power sums: table[t] has bit s set iff some
    t values from the pool (repetition allowed) produce weighted sum s using
    the first t slot coefficients."""

    def __init__(self, masks: list[int], max_sum: int):
        self.masks = masks
        self.max_sum = max_sum

    @classmethod
    def build(cls, coefficients, degree, values, max_sum) -> "PowerSumTable":
        capmask = (1 << (max_sum + 1)) - 1
        masks = [1]
        for coef in coefficients:
            prev = masks[-1]
            acc = 0
            for v in values:
                w = coef * v**degree
                if w <= max_sum:
                    acc |= prev << w
            masks.append(acc & capmask)
        return cls(masks, max_sum)

    def reachable(self, t: int, s: int) -> bool:
        if not (0 <= t < len(self.masks)) or s < 0 or s > self.max_sum:
            return False
        return bool(self.masks[t] >> s & 1)


def dp_feasible(eq: Equation, class_values, pivot: int) -> bool:
    """True iff some solution uses only class_values for its constrained
    variables with maximum value exactly pivot (repetition allowed unless
    the equation requires distinct values).

    Free variables may take any positive integer.  Computed by reachability
    over weighted power sums with pivot forced into at least one slot.
    """
    values = sorted(set(class_values))
    if not values or values[0] < 1:
        raise ValueError("class_values must be positive integers")
    if pivot not in set(values):
        raise ValueError("pivot must belong to class_values")
    if values[-1] > pivot:
        raise ValueError("class_values must not exceed pivot")
    check_overflow(eq, pivot)

    if eq.distinct_required:
        return _distinct_feasible(eq, values, pivot)

    lhs, rhs, _ = _plan(eq)
    degree = eq.degree
    cap = min(
        sum(g.coefficient * g.size for g in side) * pivot**degree
        for side in (lhs, rhs)
        if not any(g.is_free for g in side)
    )
    capmask = (1 << (cap + 1)) - 1

    def side_masks(groups):
        a, b = 1, 0
        for g in groups:
            for _ in range(g.size):
                if g.is_free:
                    weights = []
                    v = 1
                    while g.coefficient * v**degree <= cap:
                        weights.append(g.coefficient * v**degree)
                        v += 1
                else:
                    weights = [g.coefficient * v**degree for v in values]
                na = nb = 0
                for w in weights:
                    na |= a << w
                    nb |= b << w
                if not g.is_free:
                    nb |= a << (g.coefficient * pivot**degree)
                a, b = na & capmask, nb & capmask
        return a, b

    a_l, b_l = side_masks(lhs)
    a_r, b_r = side_masks(rhs)
    return bool((b_l & a_r) | (a_l & b_r))


def _distinct_feasible(eq: Equation, values, pivot: int) -> bool:
    """Exhaustive feasibility for distinct-valued solutions (small inputs)."""
    lhs, rhs, _ = _plan(eq)
    slots = []
    for sign, groups in ((1, lhs), (-1, rhs)):
        for g in groups:
            slots.extend((sign, g.coefficient, g.is_free) for _ in range(g.size))
    degree = eq.degree
    cap = min(
        sum(g.coefficient * g.size for g in side) * pivot**degree
        for side in (lhs, rhs)
        if not any(g.is_free for g in side)
    )

    def rec(i, diff, used, pivot_used):
        if i == len(slots):
            return diff == 0 and pivot_used
        sign, coef, is_free = slots[i]
        if is_free:
            v = 1
            while coef * v**degree <= cap:
                if rec(i + 1, diff + sign * coef * v**degree, used, pivot_used):
                    return True
                v += 1
            return False
        for v in values:
            if v in used:
                continue
            if rec(i + 1, diff + sign * coef * v**degree, used | {v},
                   pivot_used or v == pivot):
                return True
        return False

    return rec(0, 0, frozenset(), False)
