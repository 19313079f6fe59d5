"""Deformation cones: inequality systems from fans, membership checks, the
submodular and nested characterizations, and polymatroid helpers."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import DegenerateP0, EmptyPolytope, EmptyQ, MissingLabel, Unbounded
from .exactgeom import (
    HPolytope,
    Row,
    cone_contains,
    dot,
    rank,
    rat,
    solve_square,
    vertex_enumeration,
)
from .fans import SimplicialFan, WallInequality, adjacent_pairs, wall_relation
from .posets import (
    OrderedSetPartition,
    all_partitions,
    all_subsets,
    card,
    e_partition_raw,
    e_set_raw,
    parse_partition,
    parse_subset,
    singleton_partition,
    subset_str,
    top_partition,
    _from_bars,
)

DOMAINS = ("subsets", "partitions", "custom")


# ---------------------------------------------------------------------------
# b-vectors and verdicts


@dataclass(frozen=True)
class BVector:
    """Values of b indexed by subset strings, partition strings or arbitrary
    row labels (``custom``).  Labels are normalized on construction, so
    "21" and "12" name the same subset."""

    domain: str
    d: int
    values: Mapping

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.domain != "custom" and self.d < 1:
            raise ValueError("d must be at least 1")
        vals = {}
        for label, v in dict(self.values).items():
            key = self.normalize(label)
            if key in vals:
                raise ValueError(f"label {label!r} given twice")
            vals[key] = rat(v)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.d + 1

    def normalize(self, label) -> str:
        if self.domain == "subsets":
            if isinstance(label, (set, frozenset, tuple, list)):
                return subset_str(label, self.n)
            return subset_str(parse_subset(str(label), self.n), self.n)
        if self.domain == "partitions":
            return str(parse_partition(label, self.n))
        return str(label)

    @property
    def top_label(self) -> Optional[str]:
        if self.domain == "subsets":
            return subset_str(range(1, self.n + 1), self.n)
        if self.domain == "partitions":
            return str(top_partition(self.n))
        return None

    @property
    def bottom_label(self) -> Optional[str]:
        return "" if self.domain == "subsets" else None

    def __getitem__(self, label) -> Fraction:
        return self.value(label)

    def value(self, label) -> Fraction:
        """Value at ``label``.  An absent ∅ reads as 0 and an absent top
        reads as 0 (the centralized convention)."""
        key = self.normalize(label)
        if key in self.values:
            return self.values[key]
        if key == self.bottom_label or key == self.top_label:
            return Fraction(0)
        raise MissingLabel(f"b has no value at {key!r}")

    def top_value(self) -> Fraction:
        return self.value(self.top_label) if self.top_label is not None else Fraction(0)

    def with_values(self, updates: Mapping) -> "BVector":
        vals = dict(self.values)
        for k, v in updates.items():
            vals[self.normalize(k)] = rat(v)
        return BVector(self.domain, self.d, vals)

    @classmethod
    def from_sequence(cls, labels: Sequence[str], values: Sequence, d: int = 0) -> "BVector":
        if len(labels) != len(values):
            raise ValueError("label and value counts differ")
        return cls("custom", d, dict(zip(labels, values)))


def as_bvector(b, domain: str = "custom", d: int = 0) -> BVector:
    if isinstance(b, BVector):
        return b
    return BVector(domain, d, dict(b))


@dataclass(frozen=True)
class Verdict:
    member: bool
    certificate: Optional[dict] = None

    def __post_init__(self):
        if self.member != (self.certificate is None):
            raise ValueError("a certificate is present exactly for non-members")

    def __bool__(self):
        return self.member


MEMBER = Verdict(True, None)


# ---------------------------------------------------------------------------
# the generic engine


def defcone_inequalities(F: SimplicialFan) -> list:
    """One wall inequality per pair of adjacent maximal cones."""
    return [wall_relation(F, p) for p in adjacent_pairs(F)]


def _lookup(b: BVector, label: str) -> Fraction:
    return b.value(label)


def evaluate(w: WallInequality, b: BVector) -> tuple:
    values = {l: _lookup(b, l) for l in w.labels()}
    top = b.top_value() if w.top else None
    return w.evaluate(values, top)


def check_membership(ineqs: Sequence[WallInequality], b) -> Verdict:
    """All inequalities hold exactly; otherwise the first failure in list
    order is the certificate."""
    b = as_bvector(b)
    for w in ineqs:
        for l in w.labels():
            _lookup(b, l)
    for i, w in enumerate(ineqs):
        left, right = evaluate(w, b)
        if left > right:
            return Verdict(False, {
                "index": i,
                "inequality": str(w),
                "lhs_terms": {l: str(c) for l, c in w.lhs},
                "top": str(w.top),
                "rhs_terms": {l: str(c) for l, c in w.rhs},
                "lhs": str(left),
                "rhs": str(right),
            })
    return MEMBER


def ineq_vector(w: WallInequality, labels: Sequence[str], top_label: Optional[str] = None):
    """Coefficients of (lhs - rhs) over ``labels`` so that the inequality
    reads vec . b <= 0."""
    idx = {l: i for i, l in enumerate(labels)}
    vec = [Fraction(0)] * len(labels)
    for l, c in w.lhs:
        vec[idx[l]] += c
    for l, c in w.rhs:
        vec[idx[l]] -= c
    if w.top:
        if top_label is None or top_label not in idx:
            raise MissingLabel("the top label is needed for this inequality")
        vec[idx[top_label]] += w.top
    return vec


def _all_labels(ineqs, extra=()):
    labels = set(extra)
    for w in ineqs:
        labels |= w.labels()
        if w.top:
            labels.add(w.top_label or "top")
    return sorted(labels)


def implies(system: Sequence[WallInequality], target: WallInequality) -> bool:
    """Whether the homogeneous system implies ``target`` (Farkas: the target
    row is a nonnegative combination of the system rows)."""
    labels = _all_labels(list(system) + [target])
    tops = {w.top_label for w in list(system) + [target] if w.top}
    top = tops.pop() if tops else None
    gens = [ineq_vector(w, labels, top) for w in system]
    return cone_contains(gens, ineq_vector(target, labels, top), quotient=False)


def equivalent_systems(A: Sequence[WallInequality], B: Sequence[WallInequality]) -> bool:
    return all(implies(A, w) for w in B) and all(implies(B, w) for w in A)


def _scaled_key(w: WallInequality, labels, top):
    vec = ineq_vector(w, labels, top)
    scale = max(abs(x) for x in vec) if any(vec) else Fraction(1)
    return tuple(x / scale for x in vec)


def reduce_system(ineqs: Sequence[WallInequality], farkas: bool = False) -> list:
    """Drop inequalities that are positive multiples of earlier ones and, if
    ``farkas``, also those implied by the others."""
    labels = _all_labels(ineqs)
    tops = {w.top_label for w in ineqs if w.top}
    top = tops.pop() if tops else None
    seen, out = set(), []
    for w in ineqs:
        key = _scaled_key(w, labels, top)
        if key in seen:
            continue
        seen.add(key)
        out.append(w)
    if farkas:
        i = len(out) - 1
        while i >= 0:
            rest = out[:i] + out[i + 1:]
            if rest and implies(rest, out[i]):
                out = rest
            i -= 1
    return out


# ---------------------------------------------------------------------------
# submodularity and the Boolean-lattice diamonds


def _subset_value(b: BVector, S) -> Fraction:
    return b.value(frozenset(S))


def check_submodular(b: BVector, fast: bool = False, all_violations: bool = False):
    """f(S ∪ T) + f(S ∩ T) <= f(S) + f(T).

    The full mode scans incomparable pairs S < T in canonical subset order;
    ``fast`` scans only diamonds (S ∪ {a}, S ∪ {b}).  With
    ``all_violations`` a list of every violating pair is returned instead
    of a verdict."""
    if b.domain != "subsets":
        raise ValueError("check_submodular needs a b-vector over subsets")
    n = b.n
    for S in all_subsets(b.d):
        _subset_value(b, S)
    pairs = _diamond_pairs(n) if fast else _incomparable_pairs(b.d)
    violations = []
    for S, T in pairs:
        left = _subset_value(b, S | T) + _subset_value(b, S & T)
        right = _subset_value(b, S) + _subset_value(b, T)
        if left > right:
            cert = {"S": subset_str(S, n), "T": subset_str(T, n),
                    "lhs": str(left), "rhs": str(right)}
            if not all_violations:
                return Verdict(False, cert)
            violations.append(cert)
    return violations if all_violations else MEMBER


def _incomparable_pairs(d):
    subsets = all_subsets(d)
    for i, S in enumerate(subsets):
        for T in subsets[i + 1:]:
            if not (S <= T or T <= S):
                yield S, T


def _diamond_pairs(n):
    for k in range(n - 1):
        for S in itertools.combinations(range(1, n + 1), k):
            rest = [x for x in range(1, n + 1) if x not in S]
            for a, c in itertools.combinations(rest, 2):
                yield frozenset(S) | {a}, frozenset(S) | {c}


def boolean_diamond_inequalities(d: int) -> list:
    """b_{S+a+c} + b_S <= b_{S+a} + b_{S+c} as wall-inequality records
    (b_∅ = 0 is dropped; the whole set is the top term)."""
    n = d + 1
    top = subset_str(range(1, n + 1), n)
    out = []
    for A, C in _diamond_pairs(n):
        S, U = A & C, A | C
        lhs = []
        if S:
            lhs.append((subset_str(S, n), Fraction(1)))
        topc = Fraction(0)
        if len(U) == n:
            topc = Fraction(1)
        else:
            lhs.append((subset_str(U, n), Fraction(1)))
        rhs = ((subset_str(A, n), Fraction(1)), (subset_str(C, n), Fraction(1)))
        out.append(WallInequality(tuple(lhs), rhs, topc, top))
    return out


# ---------------------------------------------------------------------------
# the nested characterization


def _interval_words(n):
    return itertools.permutations(range(1, n + 1))


def diamond_inequalities(d: int) -> list:
    """Diamonds b_{upper} + b_{lower} <= b_{mid} + b_{mid'} inside every
    Boolean interval above a minimal ordered set partition, deduplicated.
    The top partition enters as the ``top`` term."""
    n = d + 1
    top = str(top_partition(n))
    seen = set()
    out = []
    for w in _interval_words(n):
        positions = range(1, n)
        for size in range(2, n):
            for B in itertools.combinations(positions, size):
                B = frozenset(B)
                for i, j in itertools.combinations(sorted(B), 2):
                    lower = _from_bars(w, B)
                    upper = _from_bars(w, B - {i, j})
                    m1, m2 = sorted((str(_from_bars(w, B - {i})), str(_from_bars(w, B - {j}))))
                    key = (str(lower), str(upper), m1, m2)
                    if key in seen:
                        continue
                    seen.add(key)
                    lhs = [(str(lower), Fraction(1))]
                    topc = Fraction(0)
                    if upper.is_top():
                        topc = Fraction(1)
                    else:
                        lhs.append((str(upper), Fraction(1)))
                    out.append(WallInequality(tuple(lhs), ((m1, Fraction(1)), (m2, Fraction(1))),
                                              topc, top))
    return out


def essential_partner(T: OrderedSetPartition) -> OrderedSetPartition:
    """The largest partition above the rank-1 element T that keeps T's
    two-element block intact: everything before it merged, everything after
    it merged."""
    i = next(k for k, b in enumerate(T.blocks) if len(b) == 2)
    before = [x for b in T.blocks[:i] for x in b]
    after = [x for b in T.blocks[i + 1:] for x in b]
    blocks = [blk for blk in (before, list(T.blocks[i]), after) if blk]
    return OrderedSetPartition(tuple(blocks))


def essential_ren_inequalities(d: int) -> list:
    """One inequality 2 b_T + b_S <= b_{T0} + b_{T0'} (+ b_top) per rank-1
    partition T, kept balanced."""
    n = d + 1
    top = top_partition(n)
    out = []
    for T in all_partitions(d):
        if T.rank != 1:
            continue
        i = next(k for k, b in enumerate(T.blocks) if len(b) == 2)
        s, s2 = T.blocks[i]
        T0 = OrderedSetPartition(T.blocks[:i] + ((s,), (s2,)) + T.blocks[i + 1:])
        T0b = OrderedSetPartition(T.blocks[:i] + ((s2,), (s,)) + T.blocks[i + 1:])
        S = essential_partner(T)
        coeffs = {}
        for U, c in ((T, 2), (S, 1)):
            coeffs[str(U)] = coeffs.get(str(U), Fraction(0)) + c
        # balance: 2 e_T + e_S - e_T0 - e_T0' = t * 1, with e_top = 1
        diff = [2 * a + b - c - e for a, b, c, e in zip(
            e_partition_raw(T), e_partition_raw(S), e_partition_raw(T0), e_partition_raw(T0b))]
        assert len(set(diff)) == 1, "essential inequality is not balanced"
        topc = coeffs.pop(str(top), Fraction(0)) - diff[0]
        lhs = tuple(sorted(coeffs.items()))
        rhs = tuple(sorted(((str(T0), Fraction(1)), (str(T0b), Fraction(1)))))
        out.append(WallInequality(lhs, rhs, topc, str(top)))
    return out


def centralize_b(b: BVector) -> BVector:
    """Subtract k |S| (subsets) or k card(T) (partitions), k = b_top/(d+1),
    so the top value becomes 0."""
    if b.domain == "custom":
        raise ValueError("centralization needs subsets or partitions")
    k = b.top_value() / b.n
    vals = {}
    for label, v in b.values.items():
        if b.domain == "subsets":
            weight = len(parse_subset(label, b.n))
        else:
            weight = card(parse_partition(label, b.n))
        vals[label] = v - k * weight
    vals[b.top_label] = Fraction(0)
    return BVector(b.domain, b.d, vals)


_NESTED_CACHE: dict = {}


def nested_system(d: int) -> list:
    if d not in _NESTED_CACHE:
        _NESTED_CACHE[d] = diamond_inequalities(d) + essential_ren_inequalities(d)
    return _NESTED_CACHE[d]


def check_nested_b(b: BVector) -> Verdict:
    """Centralize, then test every diamond and essential inequality."""
    if b.domain != "partitions":
        raise ValueError("check_nested_b needs a b-vector over partitions")
    for T in all_partitions(b.d, proper=True):
        b.value(T)
    return check_membership(nested_system(b.d), centralize_b(b))


# ---------------------------------------------------------------------------
# general (possibly non-simple) polytopes


def _hrep_values(P0: HPolytope, b) -> dict:
    if isinstance(b, BVector):
        return {r.label: b.value(r.label) for r in P0.rows}
    if isinstance(b, Mapping):
        missing = [r.label for r in P0.rows if r.label not in b]
        if missing:
            raise MissingLabel(f"b has no value at {missing[0]!r}")
        return {r.label: rat(b[r.label]) for r in P0.rows}
    vals = list(b)
    if len(vals) != len(P0.rows):
        raise ValueError(f"b has {len(vals)} entries for {len(P0.rows)} rows")
    return {r.label: rat(v) for r, v in zip(P0.rows, vals)}


def _equality_for(P0: HPolytope, b, equality_rhs):
    if not P0.quotient:
        return None
    if equality_rhs is not None:
        return rat(equality_rhs)
    if isinstance(b, BVector) and b.top_label is not None:
        return b.top_value()
    return P0.equality_rhs


def _edges(V, P0: HPolytope) -> dict:
    """Vertex adjacency: two vertices span an edge when their common tight
    rows (with the equality) have rank n - 1."""
    normals = {r.label: r.normal for r in P0.rows}
    n = P0.dim
    nbrs = {i: set() for i in range(len(V.vertices))}
    for i, j in itertools.combinations(range(len(V.vertices)), 2):
        common = V.tight[i] & V.tight[j]
        mat = [normals[l] for l in sorted(common)]
        if P0.quotient:
            mat = mat + [(Fraction(1),) * n]
        if mat and rank(mat) == n - 1:
            nbrs[i].add(j)
            nbrs[j].add(i)
    return nbrs


def general_defcone_membership(P0: HPolytope, b, mode: str = "full",
                               equality_rhs=None) -> Verdict:
    """Membership test valid for any full-dimensional P0.

    For each vertex v of P0 the point v_b solves the first d supporting
    rows (row order of P0) at b; the remaining supporting rows must hold
    with equality at v_b and the non-supporting ones as inequalities.  In
    ``neighbor`` mode only non-supporting rows that support a neighbor of
    v are tested."""
    if mode not in ("full", "neighbor"):
        raise ValueError("mode is 'full' or 'neighbor'")
    vals = _hrep_values(P0, b)
    eq = _equality_for(P0, b, equality_rhs)
    V = vertex_enumeration(P0)
    order = {r.label: k for k, r in enumerate(P0.rows)}
    d = P0.polytope_dim
    nbrs = _edges(V, P0) if mode == "neighbor" else None
    for vi, (v, tight) in enumerate(zip(V.vertices, V.tight)):
        supp = sorted(tight, key=order.__getitem__)
        first = supp[:d]
        A = [P0.row(l).normal for l in first]
        rhs = [vals[l] for l in first]
        if P0.quotient:
            A.append((Fraction(1),) * P0.dim)
            rhs.append(eq)
        vb = solve_square(A, rhs)
        if vb is None:
            raise DegenerateP0(f"first {d} supporting rows at vertex"
                               f" {tuple(map(str, v))} are dependent")
        if nbrs is None:
            others = [r.label for r in P0.rows if r.label not in tight]
        else:
            near = set().union(*(V.tight[u] for u in nbrs[vi])) if nbrs[vi] else set()
            others = [r.label for r in P0.rows if r.label not in tight and r.label in near]
        for l in supp[d:]:
            val = dot(P0.row(l).normal, vb)
            if val != vals[l]:
                return Verdict(False, {"kind": "equality", "vertex": [str(x) for x in v],
                                       "facet": l, "value": str(val), "b": str(vals[l])})
        for l in others:
            val = dot(P0.row(l).normal, vb)
            if val > vals[l]:
                return Verdict(False, {"kind": "inequality", "vertex": [str(x) for x in v],
                                       "facet": l, "value": str(val), "b": str(vals[l])})
    return MEMBER


def tight_rhs(P0: HPolytope, Q: HPolytope) -> dict:
    """b_i = max over Q of <a_i, x> for each row of P0."""
    try:
        VQ = vertex_enumeration(Q)
    except EmptyPolytope as exc:
        raise EmptyQ("Q is empty") from exc
    return {r.label: max(dot(r.normal, x) for x in VQ.vertices) for r in P0.rows}, VQ


def is_deformation(P0: HPolytope, Q: HPolytope) -> Verdict:
    """Whether Q (same normals as P0, any rhs) is a deformation of P0."""
    mine = {r.label: r.normal for r in P0.rows}
    theirs = {r.label: r.normal for r in Q.rows}
    if mine != theirs or P0.dim != Q.dim or P0.quotient != Q.quotient:
        raise ValueError("Q must use the same labeled normals as P0")
    b, VQ = tight_rhs(P0, Q)
    eq = None
    if Q.quotient:
        eq = sum(VQ.vertices[0])
    verdict = general_defcone_membership(P0, b, equality_rhs=eq)
    if verdict.member:
        return verdict
    cert = dict(verdict.certificate)
    cert["tight_b"] = {l: str(v) for l, v in b.items()}
    return Verdict(False, cert)


# ---------------------------------------------------------------------------
# polytopes from b-vectors


def hrep_from_b(b: BVector, equality_rhs=None) -> HPolytope:
    """{<e_S, x> <= b_S (or <e_T, x> <= b_T), <1, x> = b_top}."""
    n = b.n
    rows = []
    if b.domain == "subsets":
        for S in all_subsets(b.d, proper=True):
            rows.append(Row(subset_str(S, n), e_set_raw(S, n), b.value(S)))
    elif b.domain == "partitions":
        for T in all_partitions(b.d, proper=True):
            rows.append(Row(str(T), e_partition_raw(T), b.value(T)))
    else:
        raise ValueError("hrep_from_b needs subsets or partitions")
    eq = b.top_value() if equality_rhs is None else rat(equality_rhs)
    return HPolytope(n, tuple(rows), eq)


# ---------------------------------------------------------------------------
# polymatroids


def is_rank_function(b: BVector) -> Verdict:
    """Nonnegative, monotone and submodular (with f(∅) = 0 read from b)."""
    if b.domain != "subsets":
        raise ValueError("is_rank_function needs a b-vector over subsets")
    n = b.n
    subsets = all_subsets(b.d)
    for S in subsets:
        v = _subset_value(b, S)
        if v < 0:
            return Verdict(False, {"condition": "nonnegative", "S": subset_str(S, n),
                                   "value": str(v)})
    for S in subsets:
        for x in range(1, n + 1):
            if x in S:
                continue
            lo, hi = _subset_value(b, S), _subset_value(b, S | {x})
            if lo > hi:
                return Verdict(False, {"condition": "monotone", "S": subset_str(S, n),
                                       "T": subset_str(S | {x}, n),
                                       "lhs": str(lo), "rhs": str(hi)})
    sub = check_submodular(b)
    if not sub.member:
        cert = dict(sub.certificate)
        cert["condition"] = "submodular"
        return Verdict(False, cert)
    return MEMBER


def monotone_shift(b: BVector, k) -> BVector:
    """b^(k)_S = b_S + k |S|."""
    if b.domain != "subsets":
        raise ValueError("monotone_shift needs a b-vector over subsets")
    k = rat(k)
    vals = {}
    for S in all_subsets(b.d):
        label = subset_str(S, b.n)
        if label in b.values or len(S) in (0, b.n):
            vals[label] = b.value(label) + k * len(S)
    return BVector("subsets", b.d, vals)


def min_monotone_shift(b: BVector) -> int:
    """Smallest integer k with b_{S+x} + k >= b_S for all S and x ∉ S."""
    worst = None
    n = b.n
    for S in all_subsets(b.d):
        for x in range(1, n + 1):
            if x in S:
                continue
            gap = _subset_value(b, S) - _subset_value(b, S | {x})
            worst = gap if worst is None or gap > worst else worst
    return math.ceil(worst)
