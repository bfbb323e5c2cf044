import itertools
import math
import random

import pytest

TREFOIL_PD = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)"
FIGURE_EIGHT_PD = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"


def cofactor_det(A):
    """Laplace expansion along the first row; the independent determinant oracle."""
    n = len(A)
    if n == 0:
        return 1
    if n == 1:
        return A[0][0]
    return sum((-1) ** j * A[0][j] * cofactor_det([row[:j] + row[j + 1:] for row in A[1:]])
               for j in range(n))


def determinantal_divisors(A):
    """d_i = gcd of all i x i minors; invariant factors are d_i / d_{i-1}."""
    n = len(A)
    out = []
    for size in range(1, n + 1):
        g = 0
        for rows in itertools.combinations(range(n), size):
            for cols in itertools.combinations(range(n), size):
                g = math.gcd(g, cofactor_det([[A[r][c] for c in cols] for r in rows]))
        out.append(g)
    return out


def random_pd_matrix(rng, k, max_entry=12, max_det=200):
    """Random positive-definite symmetric matrix with odd determinant <= max_det."""
    while True:
        A = [[0] * k for _ in range(k)]
        for i in range(k):
            A[i][i] = rng.randint(1, max_entry)
            for j in range(i + 1, k):
                A[i][j] = A[j][i] = rng.randint(-max_entry, max_entry)
        minors = [cofactor_det([row[:m] for row in A[:m]]) for m in range(1, k + 1)]
        if all(m > 0 for m in minors) and minors[-1] % 2 == 1 and minors[-1] <= max_det:
            return A


def random_unimodular(rng, k, steps=3):
    W = [[int(i == j) for j in range(k)] for i in range(k)]
    for _ in range(steps):
        if k < 2:
            break
        i, j = rng.sample(range(k), 2)
        c = rng.choice((-1, 1))
        for row in W:
            row[j] += c * row[i]
    perm = list(range(k))
    rng.shuffle(perm)
    signs = [rng.choice((-1, 1)) for _ in range(k)]
    return [[W[r][perm[c]] * signs[c] for c in range(k)] for r in range(k)]


@pytest.fixture
def rng():
    return random.Random(20240601)
