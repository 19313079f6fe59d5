"""Independent brute-force references used by the tests.  Nothing here
imports the code under test beyond plain data types."""

import itertools
from fractions import Fraction
from math import comb


def fubini(n):
    # a(n) = sum_k C(n,k) a(n-k), a(0) = 1
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(comb(m, k) * a[m - k] for k in range(1, m + 1)))
    return a[n]


def ordered_partitions(n):
    """Every surjection [n] -> [k] read as an ordered set partition."""
    out = set()
    for k in range(1, n + 1):
        for f in itertools.product(range(k), repeat=n):
            if len(set(f)) == k:
                out.add(tuple(tuple(i + 1 for i in range(n) if f[i] == j) for j in range(k)))
    return out


def raw_e_T(blocks, n):
    v = [0] * n
    for i, blk in enumerate(blocks, start=1):
        for x in blk:
            v[x - 1] = i
    return tuple(v)


def brute_max(normal, points):
    return max(sum(Fraction(a) * b for a, b in zip(normal, p)) for p in points)


def nested_points(alpha, beta, M, N):
    """Vertices straight from M sum alpha_i e_{pi^-1(i)} + N sum beta_i f_{tau^-1(i)}."""
    n = len(alpha)
    d = n - 1
    pts = {}
    for pi in itertools.permutations(range(1, n + 1)):
        inv = [0] * n
        for i, p in enumerate(pi, start=1):
            inv[p - 1] = i
        for tau in itertools.permutations(range(1, d + 1)):
            tinv = [0] * d
            for i, t in enumerate(tau, start=1):
                tinv[t - 1] = i
            x = [Fraction(0)] * n
            for i in range(1, n + 1):
                x[inv[i - 1] - 1] += M * Fraction(alpha[i - 1])
            for i in range(1, d + 1):
                j = tinv[i - 1]  # f_j = e_{pi^-1(j+1)} - e_{pi^-1(j)}
                x[inv[j] - 1] += N * Fraction(beta[i - 1])
                x[inv[j - 1] - 1] -= N * Fraction(beta[i - 1])
            pts[(pi, tau)] = tuple(x)
    return pts


def is_submodular(f, n):
    subsets = [frozenset(S) for k in range(n + 1) for S in itertools.combinations(range(1, n + 1), k)]
    return all(f(S | T) + f(S & T) <= f(S) + f(T) for S in subsets for T in subsets)
