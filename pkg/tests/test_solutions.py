import itertools
import random
from math import isqrt

import pytest

from rado.equations import parse_equation, family_equation
from rado.solutions import (
    OverflowGuardError,
    PowerSumTable,
    SolutionCapError,
    build_hyperedges,
    check_overflow,
    dp_feasible,
    edges_to_json,
    enumerate_solutions,
    iter_canonical_solutions,
)


def naive_solutions(eq, n):
    """Independent oracle: plain nested scan over all value tuples.

    Free variables are scanned up to the other side's maximum total, which
    bounds any solvable contribution.
    """
    cvars = list(eq.constrained_variables)
    fvars = [v for v in eq.variables if eq.is_free(v)]
    top = eq.side_max_sum(n)
    fbound = isqrt(top) + 1 if eq.degree == 2 else top
    out = []
    for combo in itertools.product(range(1, n + 1), repeat=len(cvars)):
        if eq.distinct_required and len(set(combo)) != len(combo):
            continue
        asg = dict(zip(cvars, combo))
        if not fvars:
            if eq.holds(asg):
                out.append(asg)
            continue
        for fcombo in itertools.product(range(1, fbound + 1), repeat=len(fvars)):
            full = asg | dict(zip(fvars, fcombo))
            if eq.holds(full):
                out.append(full)
    return out


def as_pairs(solutions):
    return sorted(
        tuple(sorted({**s.values, **s.free_values}.items())) for s in solutions
    )


def naive_as_pairs(assignments):
    return sorted(tuple(sorted(a.items())) for a in assignments)


def test_pythagorean_at_5():
    eq = parse_equation("x^2+y^2=z^2")
    sols = enumerate_solutions(eq, 5)
    assert as_pairs(sols) == [
        (("x", 3), ("y", 4), ("z", 5)),
        (("x", 4), ("y", 3), ("z", 5)),
    ]
    assert enumerate_solutions(eq, 4) == []


def test_three_squares_at_3():
    eq = parse_equation("x^2+y^2+z^2=w^2")
    sols = enumerate_solutions(eq, 3)
    assert len(sols) == 3
    for s in sols:
        assert sorted((s.values["x"], s.values["y"], s.values["z"])) == [1, 2, 2]
        assert s.values["w"] == 3


def test_lexicographic_order():
    eq = parse_equation("x+y=z")
    sols = enumerate_solutions(eq, 4)
    keys = [(s.values["x"], s.values["y"], s.values["z"]) for s in sols]
    assert keys == sorted(keys)
    assert keys[0] == (1, 1, 2)


def test_free_variable_unbounded():
    eq = parse_equation("x+y=~z")
    sols = enumerate_solutions(eq, 3)
    # every (x, y) pair works, z = x + y may exceed n
    assert len(sols) == 9
    assert all(s.free_values["z"] == s.values["x"] + s.values["y"] for s in sols)


def test_fh13_pairs_against_brute_force():
    # oracle first: direct scan of all (x, y) testing 9x^2+16y^2 for squareness
    expected = set()
    for x in range(1, 21):
        for y in range(1, 21):
            if x == y:
                continue
            s = 9 * x * x + 16 * y * y
            root = isqrt(s)
            if root * root == s:
                expected.add((x, y, root))
    assert (4, 3, None) not in {(x, y, None) for (x, y, _) in expected}

    eq = parse_equation("9x^2+16y^2=~n^2", distinct=True)
    got = {
        (s.values["x"], s.values["y"], s.free_values["n"])
        for s in enumerate_solutions(eq, 20)
    }
    assert got == expected


def test_solutions_satisfy_equation_exactly():
    rng = random.Random(7)
    for text in ("x+y=z", "x^2+y^2=z^2", "2a+3b=c", "x1^2+x2^2+x3^2=z^2"):
        eq = parse_equation(text)
        n = rng.randint(5, 25)
        for s in enumerate_solutions(eq, n):
            assert eq.holds({**s.values, **s.free_values})
            assert all(1 <= v <= n for v in s.values.values())


@pytest.mark.parametrize(
    "text",
    [
        "x+y=z",
        "x^2+y^2=z^2",
        "2x+y=3z",
        "x^2+y^2+z^2=w^2",
        "a+b+c=d",
        "9x^2+16y^2=~n^2",
        "x+y=~z",
    ],
)
def test_completeness_vs_naive_scan(text):
    eq = parse_equation(text)
    for n in (1, 4, 9, 14):
        assert as_pairs(enumerate_solutions(eq, n)) == naive_as_pairs(
            naive_solutions(eq, n)
        )


def test_completeness_random_equations():
    rng = random.Random(2025)
    for _ in range(40):
        nvars = rng.randint(2, 4)
        degree = rng.choice((1, 2))
        names = [f"v{i}" for i in range(nvars)]
        cut = rng.randint(1, nvars - 1)
        coefs = [rng.randint(1, 4) for _ in names]
        text = "+".join(
            f"{c if c > 1 else ''}{nm}{'^2' if degree == 2 else ''}"
            for c, nm in zip(coefs[:cut], names[:cut])
        ) + "=" + "+".join(
            f"{c if c > 1 else ''}{nm}{'^2' if degree == 2 else ''}"
            for c, nm in zip(coefs[cut:], names[cut:])
        )
        eq = parse_equation(text)
        n = rng.randint(2, 12)
        assert as_pairs(enumerate_solutions(eq, n)) == naive_as_pairs(
            naive_solutions(eq, n)
        ), text


def test_edges_pythagorean_13():
    eq = parse_equation("x^2+y^2=z^2")
    es = build_hyperedges(eq, 13)
    assert es.edges == ((3, 4, 5), (6, 8, 10), (5, 12, 13))
    assert es.n == 13 and not es.minimized


def test_edges_three_squares_3():
    eq = parse_equation("x^2+y^2+z^2=w^2")
    es = build_hyperedges(eq, 3)
    assert es.edges == ((1, 2, 3),)


def test_edges_schur_minimized():
    eq = parse_equation("x+y=z")
    es = build_hyperedges(eq, 3, minimize=True)
    assert es.edges == ((1, 2),)
    full = build_hyperedges(eq, 3)
    assert full.edges == ((1, 2), (1, 2, 3))


def test_edge_monotonicity():
    rng = random.Random(11)
    for text in ("x+y=z", "x^2+y^2=z^2", "x1^2+x2^2+x3^2=z^2"):
        eq = parse_equation(text)
        n = rng.randint(3, 20)
        smaller = set(build_hyperedges(eq, n).edges)
        larger = set(build_hyperedges(eq, n + 1).edges)
        assert smaller <= larger


def test_subsumption_preserves_violations():
    rng = random.Random(13)
    eq = parse_equation("x+y=z")
    n = 9
    full = build_hyperedges(eq, n)
    mini = build_hyperedges(eq, n, minimize=True)
    assert set(mini.edges) < set(full.edges)
    for _ in range(200):
        coloring = [rng.randint(1, 2) for _ in range(n)]

        def violated(es):
            return any(
                len({coloring[v - 1] for v in e}) == 1 for e in es.edges
            )

        assert violated(full) == violated(mini)


def test_no_duplicate_edges_and_sorted():
    eq = parse_equation("x^2+y^2=z^2")
    es = build_hyperedges(eq, 30)
    assert len(set(es.edges)) == len(es.edges)
    assert list(es.edges) == sorted(es.edges, key=lambda e: (e[-1], e))
    for e in es.edges:
        assert list(e) == sorted(set(e))
        assert e[0] >= 1 and e[-1] <= 30


def test_dp_feasible_examples():
    fam3 = family_equation(3)
    assert dp_feasible(fam3, {1, 2, 3}, 3)          # 1+4+4=9
    assert not dp_feasible(fam3, {1, 3}, 3)         # exhaustive check says no
    schur = parse_equation("x+y=z")
    assert dp_feasible(schur, {1, 2}, 2)            # 1+1=2
    assert not dp_feasible(schur, {2}, 2)
    assert dp_feasible(schur, {2, 4}, 4)            # 2+2=4


def test_dp_feasible_validation():
    schur = parse_equation("x+y=z")
    with pytest.raises(ValueError):
        dp_feasible(schur, set(), 3)
    with pytest.raises(ValueError):
        dp_feasible(schur, {1, 2}, 3)
    with pytest.raises(ValueError):
        dp_feasible(schur, {1, 5}, 4)


def test_dp_feasible_matches_edges():
    # dp_feasible(class, pivot) iff some edge has max == pivot within class
    rng = random.Random(17)
    for text in ("x+y=z", "x^2+y^2=z^2", "x1^2+x2^2+x3^2=z^2", "2x+y=3z"):
        eq = parse_equation(text)
        n = 18
        edges = build_hyperedges(eq, n).edges
        for _ in range(80):
            pivot = rng.randint(1, n)
            cls = {pivot} | {
                v for v in range(1, pivot) if rng.random() < 0.5
            }
            expected = any(
                e[-1] == pivot and set(e) <= cls for e in edges
            )
            assert dp_feasible(eq, cls, pivot) == expected, (text, sorted(cls), pivot)


def test_dp_feasible_free_variable():
    eq = parse_equation("9x^2+16y^2=~n^2")
    # x=3, y=3: 81+144=225=15^2, so {3} with pivot 3 closes a solution
    assert dp_feasible(eq, {3}, 3)
    # distinct variant forbids x == y
    eqd = parse_equation("9x^2+16y^2=~n^2", distinct=True)
    assert not dp_feasible(eqd, {3}, 3)
    # derived by scan: smallest distinct pair is checked in the FH13 test
    expected_any = {
        (x, y)
        for x in range(1, 21)
        for y in range(1, 21)
        if x != y and isqrt(9 * x * x + 16 * y * y) ** 2 == 9 * x * x + 16 * y * y
    }
    if expected_any:
        x, y = min(expected_any, key=max)
        piv = max(x, y)
        assert dp_feasible(eqd, {x, y}, piv)


def test_power_sum_table_invariants():
    table = PowerSumTable.build([1, 1, 1], 2, [1, 2, 3], 30)
    assert table.reachable(0, 0)
    assert not table.reachable(0, 5)
    assert table.reachable(1, 4)
    assert table.reachable(3, 9)       # 1+4+4
    assert not table.reachable(3, 2)
    # monotone under adding values to the pool
    bigger = PowerSumTable.build([1, 1, 1], 2, [1, 2, 3, 4], 30)
    for t in range(4):
        for s in range(31):
            if table.reachable(t, s):
                assert bigger.reachable(t, s)


def test_canonical_iteration_collapses_permutations():
    eq = parse_equation("x^2+y^2=z^2")
    reps = list(iter_canonical_solutions(eq, 5))
    assert len(reps) == 1
    assert reps[0].values == {"x": 3, "y": 4, "z": 5}


def test_solution_cap():
    with pytest.raises(SolutionCapError):
        enumerate_solutions(family_equation(17), 23, limit=1000)


def test_overflow_guard():
    eq = parse_equation("1000000x^2+y^2=z^2")
    with pytest.raises(OverflowGuardError):
        check_overflow(eq, 3_000_000)
    with pytest.raises(OverflowGuardError):
        build_hyperedges(eq, 3_000_000)


def test_json_export():
    eq = parse_equation("x^2+y^2=z^2")
    es = build_hyperedges(eq, 13)
    doc = edges_to_json(eq, es)
    assert doc == {
        "equation": "x^2+y^2=z^2",
        "n": 13,
        "edges": [[3, 4, 5], [6, 8, 10], [5, 12, 13]],
    }


def test_render_solution():
    eq = parse_equation("x+y=z")
    s = enumerate_solutions(eq, 2)[0]
    assert s.render(eq) == "1+1=2"
    eq2 = parse_equation("x^2+y^2=z^2")
    s2 = enumerate_solutions(eq2, 5)[0]
    assert s2.render(eq2) == "3^2+4^2=5^2"
