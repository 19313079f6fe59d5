"""Usual permutohedra Perm(alpha) and nested permutohedra
Perm(alpha, beta; M, N): vertices, facet right-hand sides, centralization."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .defcone import BVector, centralize_b  # noqa: F401  (re-exported)
from .errors import NotAppropriate, NotConstantSum, NotIncreasing
from .exactgeom import VPolytope, rat, ratvec, simplicial_cone_membership
from .posets import (
    PermPair,
    all_partitions,
    all_perm_pairs,
    all_subsets,
    chain_of,
    e_partition_raw,
    inverse_perm,
    structure_type,
    subset_str,
)


def _increasing(seq, name):
    for a, b in zip(seq, seq[1:]):
        if not a < b:
            raise NotIncreasing(f"{name} must be strictly increasing: {[str(x) for x in seq]}")


@dataclass(frozen=True)
class AlphaBeta:
    alpha: tuple
    beta: Optional[tuple] = None
    M: Optional[Fraction] = None
    N: Optional[Fraction] = None

    def __post_init__(self):
        alpha = ratvec(self.alpha)
        _increasing(alpha, "alpha")
        object.__setattr__(self, "alpha", alpha)
        if self.beta is not None:
            beta = ratvec(self.beta)
            if len(beta) != len(alpha) - 1:
                raise ValueError(f"beta needs {len(alpha) - 1} entries, got {len(beta)}")
            _increasing(beta, "beta")
            object.__setattr__(self, "beta", beta)
        for name in ("M", "N"):
            val = getattr(self, name)
            if val is not None:
                val = rat(val)
                if val <= 0:
                    raise ValueError(f"{name} must be positive")
                object.__setattr__(self, name, val)

    @property
    def d(self) -> int:
        return len(self.alpha) - 1

    @property
    def nested(self) -> bool:
        return self.beta is not None and self.M is not None and self.N is not None

    def require_nested(self):
        if not self.nested:
            raise ValueError("beta, M and N are required")


def perm_vertices(alpha: Sequence) -> VPolytope:
    """Points (alpha_{pi(1)}, ..., alpha_{pi(d+1)}), labeled by pi."""
    alpha = ratvec(alpha)
    _increasing(alpha, "alpha")
    n = len(alpha)
    perms = list(itertools.permutations(range(1, n + 1)))
    pts = [tuple(alpha[p - 1] for p in pi) for pi in perms]
    return VPolytope(n, tuple(pts), labels=tuple(perms))


def _coefficients(ab: AlphaBeta, tau: Sequence[int]) -> list:
    d = ab.d
    beta = (Fraction(0),) + ab.beta  # beta[tau(0)] = beta[tau(d+1)] = 0 via index 0
    padded = (0,) + tuple(tau) + (0,)
    return [ab.M * ab.alpha[i - 1] + ab.N * (beta[padded[i - 1]] - beta[padded[i]])
            for i in range(1, d + 2)]


class Appropriateness(NamedTuple):
    ok: bool
    tau: Optional[tuple] = None
    position: Optional[int] = None
    coefficients: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def is_appropriate(ab: AlphaBeta) -> Appropriateness:
    """Every tau must give strictly increasing coefficients
    M alpha_i + N (beta_{tau(i-1)} - beta_{tau(i)}).  The witness is the
    lexicographically first failing tau and the first i with c_i >= c_{i+1}."""
    ab.require_nested()
    for tau in itertools.permutations(range(1, ab.d + 1)):
        c = _coefficients(ab, tau)
        for i in range(len(c) - 1):
            if not c[i] < c[i + 1]:
                return Appropriateness(False, tau, i + 1, tuple(c))
    return Appropriateness(True)


def tau_fails(ab: AlphaBeta, tau: Sequence[int]) -> bool:
    c = _coefficients(ab, tuple(tau))
    return any(not a < b for a, b in zip(c, c[1:]))


def _require_appropriate(ab: AlphaBeta):
    res = is_appropriate(ab)
    if not res.ok:
        raise NotAppropriate(f"(M, N) is not appropriate: tau={list(res.tau)} fails at i={res.position}")


def nested_vertex(ab: AlphaBeta, p: PermPair) -> tuple:
    """Coordinate pi^{-1}(i) receives M alpha_i + N(beta_{tau(i-1)} - beta_{tau(i)})."""
    c = _coefficients(ab, p.tau)
    order = inverse_perm(p.pi)
    x = [Fraction(0)] * len(order)
    for i, idx in enumerate(order):
        x[idx - 1] = c[i]
    return tuple(x)


def nested_vertices(ab: AlphaBeta) -> VPolytope:
    """All (d+1)! d! vertices, labeled by their PermPair."""
    ab.require_nested()
    _require_appropriate(ab)
    pairs = all_perm_pairs(ab.d)
    pts = [nested_vertex(ab, p) for p in pairs]
    return VPolytope(ab.d + 1, tuple(pts), labels=tuple(pairs))


def nested_facet_value(ab: AlphaBeta, T) -> Fraction:
    t = structure_type(T)
    k = len(t) - 2
    d = ab.d
    total = Fraction(0)
    for i in range(1, k + 2):
        total += i * sum(ab.alpha[t[i - 1]:t[i]], Fraction(0))
    return ab.M * total + ab.N * sum(ab.beta[d - k:d], Fraction(0))


def nested_facet_b(ab: AlphaBeta) -> BVector:
    """Offsets b_T, depending on T only through its structure type; the top
    partition is included."""
    ab.require_nested()
    _require_appropriate(ab)
    vals = {str(T): nested_facet_value(ab, T) for T in all_partitions(ab.d)}
    return BVector("partitions", ab.d, vals)


def usual_facet_b(alpha: Sequence) -> BVector:
    """b_S = sum of the |S| largest entries of alpha."""
    alpha = ratvec(alpha)
    _increasing(alpha, "alpha")
    n = len(alpha)
    vals = {}
    for S in all_subsets(n - 1):
        if S:
            vals[subset_str(S, n)] = sum(alpha[n - len(S):], Fraction(0))
    return BVector("subsets", n - 1, vals)


def centralize(P: VPolytope) -> VPolytope:
    """Translate so every vertex sums to 0."""
    sums = P.coordinate_sums()
    if len(sums) != 1:
        raise NotConstantSum("vertices have different coordinate sums")
    shift = sums.pop() / P.dim
    pts = tuple(tuple(x - shift for x in v) for v in P.vertices)
    return VPolytope(P.dim, pts, P.labels, P.tight)


def own_cone_report(ab: AlphaBeta) -> dict:
    """Diagnostic: for how many (pi, tau) does the vertex v_{pi,tau}, read
    as a point of R^{d+1}/1, lie in the nested cone of (pi, tau)?"""
    V = nested_vertices(ab)
    inside, outside = [], []
    for p, v in zip(V.labels, V.vertices):
        rays = [e_partition_raw(T) for T in chain_of(p)[:-1]]
        if simplicial_cone_membership(rays, v) is not None:
            inside.append(p)
        else:
            outside.append(p)
    return {"total": len(V.vertices), "inside": len(inside), "outside": len(outside),
            "all_inside": not outside,
            "first_outside": None if not outside else {"pi": list(outside[0].pi),
                                                        "tau": list(outside[0].tau)}}
