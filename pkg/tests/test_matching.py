import itertools
import random
from fractions import Fraction

import pytest

from fairbalance.matching import BipartiteWeights, make_weights, max_weight_perfect_matching


def brute_force_value(w: BipartiteWeights) -> Fraction:
    n = w.size
    return max(
        sum((w.w(l + 1, perm[l] + 1) for l in range(n)), Fraction(0))
        for perm in itertools.permutations(range(n))
    )


def test_singleton():
    res = max_weight_perfect_matching(make_weights([[5]]))
    assert res.assignment == (1,) and res.value == 5


def test_all_equal_weights_returns_identity():
    res = max_weight_perfect_matching(make_weights([[0, 0], [0, 0]]))
    assert res.assignment == (1, 2)
    assert res.value == 0


def test_rejects_non_square():
    with pytest.raises(ValueError):
        make_weights([[1, 2, 3], [4, 5, 6]])


def test_matches_brute_force_small():
    rng = random.Random(7)
    for _ in range(120):
        n = rng.randint(2, 6)
        matrix = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        w = make_weights(matrix)
        res = max_weight_perfect_matching(w)
        assert res.value == brute_force_value(w)
        assert sorted(res.assignment) == list(range(1, n + 1))


def test_duals_certify_optimality():
    rng = random.Random(13)
    for _ in range(40):
        n = rng.randint(1, 6)
        w = make_weights([[rng.randint(0, 20) for _ in range(n)] for _ in range(n)])
        res = max_weight_perfect_matching(w)
        assert sum(res.u) + sum(res.v) == res.value
        for l in range(1, n + 1):
            for r in range(1, n + 1):
                assert res.u[l - 1] + res.v[r - 1] >= w.w(l, r)
            r = res.assignment[l - 1]
            assert res.u[l - 1] + res.v[r - 1] == w.w(l, r)


def test_permutation_equivariance():
    rng = random.Random(19)
    done = 0
    while done < 25:
        n = rng.randint(2, 5)
        matrix = [[Fraction(rng.randint(0, 60)) for _ in range(n)] for _ in range(n)]
        w = make_weights(matrix)
        values = sorted(
            sum(matrix[l][perm[l]] for l in range(n))
            for perm in itertools.permutations(range(n))
        )
        unique_optimum = len(values) == 1 or values[-1] > values[-2]
        base = max_weight_perfect_matching(w)

        rows = list(range(n))
        cols = list(range(n))
        rng.shuffle(rows)
        rng.shuffle(cols)
        permuted = make_weights([[matrix[rows[i]][cols[j]] for j in range(n)] for i in range(n)])
        res = max_weight_perfect_matching(permuted)
        assert res.value == base.value
        if unique_optimum:
            for i in range(n):
                # row i of the permuted problem is original row rows[i]
                assert cols[res.assignment[i] - 1] + 1 == base.assignment[rows[i]]
        done += 1
