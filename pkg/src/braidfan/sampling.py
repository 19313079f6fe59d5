"""Seeded random b-vectors for property tests and the equivalence command.

Members are built from constructions that are known to land in the cone;
non-members come from perturbing one entry of a member (they may still be
members, which is fine for agreement tests)."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .defcone import BVector, centralize_b
from .permutohedra import AlphaBeta, is_appropriate, nested_facet_b
from .posets import all_partitions, all_subsets, subset_str

DEFAULT_SEED = 0


def rng_for(seed: Optional[int]) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)


def random_rational(rng: random.Random, lo: int = 0, hi: int = 10, max_den: int = 4) -> Fraction:
    den = rng.randint(1, max_den)
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_submodular(d: int, rng: random.Random, terms: int = 3,
                      centralized: bool = False) -> BVector:
    """b_S = sum_k min(w_k(S), c_k) + m(S): truncations of nonnegative
    modular functions are submodular, and adding any modular m keeps it so.
    b_∅ = 0."""
    n = d + 1
    parts = []
    for _ in range(terms):
        w = [random_rational(rng, 0, 5) for _ in range(n)]
        cap = random_rational(rng, 0, 5 * n // 2 + 1)
        parts.append((w, cap))
    m = [random_rational(rng, -3, 3) for _ in range(n)]
    vals = {}
    for S in all_subsets(d):
        total = sum((min(sum((w[i - 1] for i in S), Fraction(0)), cap) for w, cap in parts),
                    Fraction(0))
        total += sum((m[i - 1] for i in S), Fraction(0))
        vals[subset_str(S, n)] = total
    b = BVector("subsets", d, vals)
    return centralize_b(b) if centralized else b


def perturb(b: BVector, rng: random.Random, magnitude: int = 6) -> BVector:
    """Change a single entry other than ∅ and the top by a nonzero amount."""
    labels = sorted(l for l in b.values if l not in (b.top_label, b.bottom_label))
    label = rng.choice(labels)
    delta = random_rational(rng, 1, magnitude)
    if rng.random() < 0.5:
        delta = -delta
    return b.with_values({label: b.values[label] + delta})


def random_appropriate(d: int, rng: random.Random) -> AlphaBeta:
    """Random strictly increasing alpha, beta and a positive (M, N); N is
    halved until the choice is appropriate."""
    n = d + 1
    alpha = sorted(rng.sample(range(-10, 20), n))
    beta = sorted(rng.sample(range(-10, 20), d))
    M = Fraction(rng.randint(1, 4))
    N = Fraction(rng.randint(1, 4), rng.randint(1, 3))
    while True:
        ab = AlphaBeta(tuple(alpha), tuple(beta), M, N)
        if is_appropriate(ab).ok:
            return ab
        N /= 2


def gp_tight_b(f: BVector) -> BVector:
    """Tight b over ordered set partitions of the base polytope of a
    submodular f: b_T = sum_j f(S_j ∪ ... ∪ S_k), by the greedy algorithm."""
    n = f.n
    vals = {}
    for T in all_partitions(f.d):
        total = Fraction(0)
        for j in range(len(T.blocks)):
            U = [x for blk in T.blocks[j:] for x in blk]
            total += f.value(frozenset(U))
        vals[str(T)] = total
    return BVector("partitions", f.d, vals)


def random_nested_member(d: int, rng: random.Random, centralized: bool = True) -> BVector:
    """Nonnegative combination of a nested permutohedron's facet b and the
    tight b of a generalized permutohedron."""
    kind = rng.randrange(3)
    parts = []
    if kind in (0, 2):
        parts.append((random_rational(rng, 1, 3), nested_facet_b(random_appropriate(d, rng))))
    if kind in (1, 2):
        parts.append((random_rational(rng, 1, 3), gp_tight_b(random_submodular(d, rng))))
    vals = {}
    for T in all_partitions(d):
        key = str(T)
        vals[key] = sum((c * b.values[key] for c, b in parts), Fraction(0))
    b = BVector("partitions", d, vals)
    return centralize_b(b) if centralized else b


def equivalence_samples(kind: str, d: int, count: int, seed: Optional[int] = None) -> list:
    """``count`` b-vectors, alternating member / perturbed member, with the
    top value 0."""
    rng = rng_for(seed)
    out = []
    for i in range(count):
        if kind == "braid":
            b = random_submodular(d, rng, centralized=True)
        elif kind == "nested":
            b = random_nested_member(d, rng, centralized=True)
        else:
            raise ValueError("kind is braid or nested")
        if i % 2 == 1:
            b = perturb(b, rng)
        out.append(b)
    return out
