"""Braid fans, nested Braid fans, fans read off simple polytopes, adjacency
of maximal cones and the wall relation across a shared wall."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import BudgetExceeded, DegenerateInput, GeometryViolation
from .exactgeom import (
    GeneralFan,
    HPolytope,
    _check_budget,
    canonical_ray,
    nullspace,
    primitive,
    rank,
    ratvec,
    vertex_enumeration,
)
from .posets import (
    all_partitions,
    all_perm_pairs,
    all_subsets,
    chain_of,
    e_partition,
    e_set,
    gamma,
    partition_from_vector,
    subset_str,
    top_partition,
)

NESTED_MAX_D = 4


@dataclass(frozen=True)
class SimplicialFan(GeneralFan):
    """A GeneralFan whose maximal cones have exactly dim-many independent
    rays.  ``raw`` keeps, per ray label, the vector used in wall relations
    (e_S, e_T or a facet normal); ``provenance`` is braid, nested or custom."""

    raw: tuple = ()
    provenance: str = "custom"
    top: Optional[str] = None

    def __post_init__(self):
        super().__post_init__()
        raw = dict(self.raw) if self.raw else {l: rep for l, rep in self.rays}
        raw = {l: ratvec(v) for l, v in raw.items()}
        if set(raw) != {l for l, _ in self.rays}:
            raise ValueError("raw vectors must be given for exactly the fan's rays")
        object.__setattr__(self, "raw", tuple((l, raw[l]) for l, _ in self.rays))
        dim = self.fan_dim
        rm = self.ray_map()
        for cone in self.cones:
            if len(cone) != dim:
                raise GeometryViolation(f"cone {list(cone)} has {len(cone)} rays, expected {dim}")
            mat = [list(map(Fraction, rm[l])) for l in cone]
            if self.quotient:
                mat.append([Fraction(1)] * self.ambient_dim)
            if rank(mat) != len(mat):
                raise GeometryViolation(f"cone {list(cone)} is not full-dimensional")

    def raw_map(self) -> dict:
        return dict(self.raw)

    def as_general(self) -> GeneralFan:
        return GeneralFan(self.rays, self.cones, self.quotient)


def braid_fan(d: int, budget: Optional[int] = None) -> SimplicialFan:
    """Rays e_S for proper nonempty S; one cone per permutation pi, spanned
    by the chain Gamma_d^pi ⊂ ... ⊂ Gamma_1^pi."""
    if d < 1:
        raise ValueError("d must be at least 1")
    n = d + 1
    _check_budget(math.factorial(n), budget, "braid fan")
    rays, raw = [], []
    for S in all_subsets(d, proper=True):
        r = e_set(S, n)
        label = subset_str(S, n)
        rays.append((label, r.rep))
        raw.append((label, r.raw))
    cones = []
    for pi in itertools.permutations(range(1, n + 1)):
        cones.append(tuple(subset_str(gamma(pi, i), n) for i in range(1, n)))
    return SimplicialFan(tuple(rays), tuple(cones), True, tuple(raw), "braid",
                         subset_str(range(1, n + 1), n))


def nested_braid_fan(d: int, budget: Optional[int] = None,
                     max_d: int = NESTED_MAX_D) -> SimplicialFan:
    """Rays e_T for proper ordered set partitions T; one cone per (pi, tau)
    spanned by the non-top elements of its maximal chain."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if d > max_d:
        raise BudgetExceeded(f"nested fan limited to d <= {max_d}")
    n = d + 1
    _check_budget(math.factorial(n) * math.factorial(d), budget, "nested braid fan")
    rays, raw = [], []
    for T in all_partitions(d, proper=True):
        r = e_partition(T)
        rays.append((str(T), r.rep))
        raw.append((str(T), r.raw))
    cones = []
    for p in all_perm_pairs(d):
        cones.append(tuple(str(T) for T in chain_of(p)[:-1]))
    return SimplicialFan(tuple(rays), tuple(cones), True, tuple(raw), "nested",
                         str(top_partition(n)))


def partition_labeler(normal) -> str:
    """Label a quotient normal by the ordered set partition it represents."""
    return str(partition_from_vector(normal))


def fan_from_hpolytope(P0: HPolytope, budget: Optional[int] = None) -> SimplicialFan:
    """Normal fan of a simple polytope given by an H-representation whose
    rows are all facets.  Rays carry the row labels; raw vectors are the row
    normals as given."""
    V = vertex_enumeration(P0, budget)
    d = P0.polytope_dim
    cones = []
    for v, tight in zip(V.vertices, V.tight):
        if len(tight) != d:
            raise DegenerateInput(f"vertex {tuple(map(str, v))} lies on {len(tight)} facets;"
                                  " the normal fan is not simplicial")
        cones.append(tuple(sorted(tight)))
    used = set().union(*map(set, cones))
    rays, raw = [], []
    for r in P0.rows:
        if r.label not in used:
            raise DegenerateInput(f"row {r.label!r} is not a facet")
        rep = canonical_ray(r.normal) if P0.quotient else primitive(r.normal)
        rays.append((r.label, rep))
        raw.append((r.label, r.normal))
    return SimplicialFan(tuple(rays), tuple(cones), P0.quotient, tuple(raw), "custom", None)


class Adjacency(NamedTuple):
    cone: tuple
    other: tuple
    shared: tuple
    differing: tuple  # (label only in cone, label only in other)


def adjacent_pairs(F: SimplicialFan) -> list:
    """Unordered pairs of maximal cones whose label sets differ in exactly
    one label, ordered by the position of the cones in F."""
    walls = {}
    for idx, cone in enumerate(F.cones):
        for l in cone:
            key = tuple(x for x in cone if x != l)
            walls.setdefault(key, []).append((idx, l))
    out = []
    for key, members in walls.items():
        if len(members) > 2:
            raise GeometryViolation(f"wall {list(key)} is shared by {len(members)} cones")
        if len(members) == 2:
            (i, a), (j, b) = sorted(members)
            out.append((i, j, Adjacency(F.cones[i], F.cones[j], key, (a, b))))
    out.sort(key=lambda t: (t[0], t[1]))
    return [t[2] for t in out]


@dataclass(frozen=True)
class WallInequality:
    """sum_j lhs[j] b_j + top * b_top <= c_F b_F + c_F' b_F'.

    The coefficients come from the relation
    sum_j lhs[j] g_j + top * 1 = c_F f + c_F' f' among raw vectors; lhs
    entries with coefficient zero are omitted."""

    lhs: tuple  # ((label, coef), ...)
    rhs: tuple  # ((label_F, c_F), (label_F', c_F'))
    top: Fraction = Fraction(0)
    top_label: Optional[str] = None

    def lhs_map(self) -> dict:
        return dict(self.lhs)

    def labels(self) -> set:
        return {l for l, _ in self.lhs} | {l for l, _ in self.rhs}

    def evaluate(self, values: dict, top_value=None) -> tuple:
        """(lhs, rhs) evaluated at b; ``values`` maps label -> Fraction."""
        left = sum((c * values[l] for l, c in self.lhs), Fraction(0))
        if self.top:
            left += self.top * (Fraction(0) if top_value is None else top_value)
        right = sum((c * values[l] for l, c in self.rhs), Fraction(0))
        return left, right

    def key(self):
        return (tuple(sorted(self.lhs)), tuple(sorted(self.rhs)), self.top)

    def __str__(self):
        def term(c, l):
            return (f"{c}*b[{l}]" if c != 1 else f"b[{l}]")
        left = [term(c, l) for l, c in self.lhs]
        if self.top:
            left.append(term(self.top, self.top_label or "top"))
        right = [term(c, l) for l, c in self.rhs]
        return f"{' + '.join(left) or '0'} <= {' + '.join(right)}"


def wall_relation(F: SimplicialFan, pair: Adjacency) -> WallInequality:
    """Primitive integer relation across the wall between two adjacent
    cones, normalized so that c_F > 0."""
    raw = F.raw_map()
    shared = list(pair.shared)
    f, f2 = pair.differing
    n = F.ambient_dim
    cols = [raw[l] for l in shared] + [raw[f], raw[f2]]
    # unknowns: c_1..c_{d-1}, c_F, c_F', [t]; relation sum c_j g_j - c_F f - c_F' f' + t 1 = 0
    signs = [1] * len(shared) + [-1, -1]
    mat = [[s * col[i] for s, col in zip(signs, cols)] + ([Fraction(1)] if F.quotient else [])
           for i in range(n)]
    nunk = len(cols) + (1 if F.quotient else 0)
    basis = nullspace(mat, nunk)
    if len(basis) != 1:
        raise GeometryViolation(f"wall between {list(pair.cone)} and {list(pair.other)}"
                                f" has a {len(basis)}-dimensional relation space")
    sol = basis[0]
    k = len(shared)
    if sol[k] == 0 or sol[k] * sol[k + 1] <= 0:
        raise GeometryViolation(f"no positive wall relation for {f} / {f2}")
    if sol[k] < 0:
        sol = tuple(-x for x in sol)
    ints = primitive(sol)
    lhs = tuple((l, Fraction(c)) for l, c in zip(shared, ints[:k]) if c != 0)
    rhs = ((f, Fraction(ints[k])), (f2, Fraction(ints[k + 1])))
    top = Fraction(ints[k + 2]) if F.quotient else Fraction(0)
    return WallInequality(lhs, rhs, top, F.top)


def wall_identity_holds(F: SimplicialFan, w: WallInequality) -> bool:
    """Substituting raw vectors for b-symbols gives an exact identity."""
    raw = F.raw_map()
    n = F.ambient_dim
    left = [Fraction(0)] * n
    for l, c in w.lhs:
        left = [a + c * x for a, x in zip(left, raw[l])]
    left = [a + w.top for a in left]
    right = [Fraction(0)] * n
    for l, c in w.rhs:
        right = [a + c * x for a, x in zip(right, raw[l])]
    return left == right


def cone_interior_point(F: GeneralFan, cone) -> tuple:
    rm = F.ray_map()
    return tuple(sum(col) for col in zip(*(rm[l] for l in cone)))


def locate(F: GeneralFan, x) -> list:
    """Indices of the maximal cones containing x."""
    from .exactgeom import _ConeTester
    return [i for i, c in enumerate(F.cones)
            if _ConeTester(F.cone_reps(c), F.quotient).contains(x)]


def classify_nested_pair(pair: Adjacency) -> str:
    """Adjacent maximal chains of ordered set partitions differ in one
    element T_r.  They form a diamond when r >= 1 and a ren shape when the
    differing elements are the minimal ones (r = 0)."""
    from .posets import parse_partition
    T = parse_partition(pair.differing[0])
    return "ren" if T.is_minimal() else "diamond"
