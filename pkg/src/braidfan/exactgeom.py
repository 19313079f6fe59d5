"""Exact rational geometry: canonical rays, small linear solves, brute-force
vertex and facet enumeration, normal fans and fan coarsening.

Everything here works with ``fractions.Fraction``.  The two enumeration
routines batch their determinant work through numpy integer arrays after
clearing denominators; they switch to Python integers (object dtype) when a
magnitude bound says int64 could overflow, so results stay exact.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .errors import (
    AllOnesMultiple,
    BudgetExceeded,
    DegenerateInput,
    DependentRays,
    EmptyPolytope,
    Unbounded,
)

RatVec = tuple  # tuple[Fraction, ...]
IntVec = tuple  # tuple[int, ...]

DEFAULT_BUDGET = 10**7
_CHUNK = 20000
# Fourier-Motzkin is kept for small cone tests; beyond this many free
# multipliers the exact simplex takes over.
FM_MAX_FREE = 6
_DEGENERATE_RUN = 50
_INT64_SAFE = 2**62


def enumeration_budget() -> int:
    """Subset-enumeration budget; ``BRAIDFAN_BUDGET`` overrides the default."""
    raw = os.environ.get("BRAIDFAN_BUDGET")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"BRAIDFAN_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("BRAIDFAN_BUDGET must be positive")
    return value


def _check_budget(count: int, budget: Optional[int], what: str) -> None:
    limit = enumeration_budget() if budget is None else budget
    if count > limit:
        raise BudgetExceeded(f"{what}: {count} subsets exceeds budget {limit}")


# ---------------------------------------------------------------------------
# scalars and vectors


def rat(x) -> Fraction:
    """Coerce to Fraction.  Floats go through their decimal string, so 2.5
    becomes 5/2 and 0.1 becomes 1/10."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def ratvec(xs: Iterable) -> RatVec:
    return tuple(rat(x) for x in xs)


def fmt_rat(x: Fraction) -> str:
    return str(x)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _lcm_of_denominators(xs: Iterable[Fraction]) -> int:
    out = 1
    for x in xs:
        out = math.lcm(out, x.denominator)
    return out


def primitive(v: Sequence) -> IntVec:
    """Primitive integer vector positively proportional to v."""
    vals = ratvec(v)
    if all(x == 0 for x in vals):
        raise ValueError("zero vector has no primitive representative")
    den = _lcm_of_denominators(vals)
    ints = [int(x * den) for x in vals]
    g = math.gcd(*ints)
    return tuple(i // g for i in ints)


def canonical_ray(v: Sequence) -> IntVec:
    """Zero-sum primitive integer representative of v in R^n / 1."""
    vals = ratvec(v)
    mean = sum(vals, Fraction(0)) / len(vals)
    centered = [x - mean for x in vals]
    if all(x == 0 for x in centered):
        raise AllOnesMultiple(f"{list(map(str, vals))} is a multiple of the all-one vector")
    return primitive(centered)


def quotient_primitive(v: Sequence) -> IntVec:
    """Representative of v mod 1 with minimum entry 0 and gcd 1.

    This is the lattice-primitive normal of W = R^n/1, so for instance the
    simplex normal -e_j comes out as the indicator of the complement of j.
    """
    vals = ratvec(v)
    low = min(vals)
    shifted = [x - low for x in vals]
    if all(x == 0 for x in shifted):
        raise AllOnesMultiple(f"{list(map(str, vals))} is a multiple of the all-one vector")
    return primitive(shifted)


def same_mod_ones(u: Sequence, v: Sequence) -> bool:
    diffs = {rat(a) - rat(b) for a, b in zip(u, v)}
    return len(diffs) <= 1


def center(v: Sequence) -> RatVec:
    vals = ratvec(v)
    mean = sum(vals, Fraction(0)) / len(vals)
    return tuple(x - mean for x in vals)


# ---------------------------------------------------------------------------
# small exact linear algebra


def _rref(rows: Sequence[Sequence[Fraction]]):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    mat = [list(map(rat, r)) for r in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(_rref(rows)[1])


def solve_square(A: Sequence[Sequence], b: Sequence) -> Optional[RatVec]:
    """Exact solution of A x = b, or None when A is singular."""
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("solve_square needs a square system")
    aug = [list(map(rat, row)) + [rat(bi)] for row, bi in zip(A, b)]
    mat, pivots = _rref(aug)
    if pivots != list(range(n)):
        return None
    return tuple(mat[i][n] for i in range(n))


def nullspace(rows: Sequence[Sequence], ncols: int) -> list:
    """Basis of {y : rows . y = 0}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    mat, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        y = [Fraction(0)] * ncols
        y[f] = Fraction(1)
        for i, p in enumerate(pivots):
            y[p] = -mat[i][f]
        basis.append(tuple(y))
    return basis


def _project(v, quotient: bool) -> RatVec:
    return center(v) if quotient else ratvec(v)


def simplicial_cone_membership(rays: Sequence[Sequence], x: Sequence,
                               quotient: bool = True) -> Optional[list]:
    """Nonnegative coefficients c with sum c_i ray_i = x (modulo 1 in
    quotient mode), or None if x is outside the cone."""
    if not rays:
        xs = _project(x, quotient)
        return [] if all(v == 0 for v in xs) else None
    proj = [_project(r, quotient) for r in rays]
    if rank(proj) != len(proj):
        raise DependentRays("rays are linearly dependent"
                            + (" modulo the all-one vector" if quotient else ""))
    target = _project(x, quotient)
    n = len(target)
    aug = [[proj[j][i] for j in range(len(proj))] + [target[i]] for i in range(n)]
    mat, pivots = _rref(aug)
    k = len(proj)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for i, p in enumerate(pivots):
        coeffs[p] = mat[i][k]
    if any(c < 0 for c in coeffs):
        return None
    return coeffs


def _normalize_ineq(coeffs, rhs):
    scale = max((abs(c) for c in coeffs), default=Fraction(0))
    if scale == 0:
        return tuple(coeffs), rhs
    return tuple(c / scale for c in coeffs), rhs / scale


def fm_feasible(ineqs: Sequence[tuple]) -> bool:
    """Decide feasibility of {y : a . y <= r for (a, r) in ineqs} by
    Fourier-Motzkin elimination."""
    system = set()
    nvars = None
    for a, r in ineqs:
        a = ratvec(a)
        nvars = len(a) if nvars is None else nvars
        system.add(_normalize_ineq(a, rat(r)))
    if nvars is None:
        return True
    for var in reversed(range(nvars)):
        pos, neg, rest = [], [], set()
        for a, r in system:
            c = a[var]
            if c > 0:
                pos.append((a, r))
            elif c < 0:
                neg.append((a, r))
            else:
                rest.add((a, r))
        for ap, rp in pos:
            for an, rn in neg:
                cp, cn = ap[var], -an[var]
                a = tuple(cn * x + cp * y for x, y in zip(ap, an))
                rest.add(_normalize_ineq(a, cn * rp + cp * rn))
        system = set()
        for a, r in rest:
            if all(c == 0 for c in a):
                if r < 0:
                    return False
            else:
                system.add((a, r))
    return all(r >= 0 for _, r in system)


def simplex_feasible(A: Sequence[Sequence], b: Sequence) -> bool:
    """Whether A lam = b has a solution lam >= 0.

    Exact phase-one simplex.  Artificial columns stay implicit (basis
    indices >= k).  Dantzig's rule is used until a run of degenerate pivots,
    then Bland's rule, which cannot cycle.  Feasibility is declared as soon
    as the artificial sum reaches zero."""
    m = len(A)
    if m == 0:
        return True
    k = len(A[0])
    rows = []
    for i in range(m):
        row = [rat(x) for x in A[i]] + [rat(b[i])]
        rows.append([-x for x in row] if row[-1] < 0 else row)
    basis = [k + i for i in range(m)]
    cost = [Fraction(0)] * (k + 1)
    for row in rows:
        for j, x in enumerate(row):
            if x:
                cost[j] -= x
    stall = 0
    while cost[-1] != 0:
        neg = [j for j in range(k) if cost[j] < 0]
        if not neg:
            return False
        enter = neg[0] if stall >= _DEGENERATE_RUN else min(neg, key=lambda j: (cost[j], j))
        best, leave = None, None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        stall = stall + 1 if best == 0 else 0
        p = rows[leave][enter]
        prow = [x / p for x in rows[leave]]
        nz = [j for j, x in enumerate(prow) if x]
        rows[leave] = prow
        for i, row in enumerate(rows):
            f = row[enter]
            if i != leave and f:
                for j in nz:
                    row[j] -= f * prow[j]
        f = cost[enter]
        for j in nz:
            cost[j] -= f * prow[j]
        basis[leave] = enter
    return True


def cone_contains(generators: Sequence[Sequence], x: Sequence,
                  quotient: bool = True) -> bool:
    """Whether x is a nonnegative combination of the generators."""
    gens = [_project(g, quotient) for g in generators]
    target = _project(x, quotient)
    if not gens:
        return all(v == 0 for v in target)
    k = len(gens)
    if k > len(target) + FM_MAX_FREE:
        # at least k - n free multipliers: skip straight to the simplex
        return simplex_feasible([[g[i] for g in gens] for i in range(len(target))], target)
    aug = [[g[i] for g in gens] + [target[i]] for i in range(len(target))]
    mat, pivots = _rref(aug)
    if k in pivots:
        return False
    free = [c for c in range(k) if c not in pivots]
    if len(free) > FM_MAX_FREE:
        return simplex_feasible([[g[i] for g in gens] for i in range(len(target))], target)
    # pivot variable p = rhs - sum_f mat[f] * lam_f must be >= 0
    ineqs = []
    for i, p in enumerate(pivots):
        ineqs.append(([mat[i][f] for f in free], mat[i][k]))
    for j in range(len(free)):
        ineqs.append(([Fraction(-1) if t == j else Fraction(0) for t in range(len(free))],
                      Fraction(0)))
    if not free:
        return all(r >= 0 for _, r in ineqs)
    return fm_feasible(ineqs)


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Row:
    label: str
    normal: RatVec
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", ratvec(self.normal))
        object.__setattr__(self, "rhs", rat(self.rhs))


@dataclass(frozen=True)
class HPolytope:
    """{x : <normal, x> <= rhs for each row} intersected, when
    ``equality_rhs`` is set, with the hyperplane <1, x> = equality_rhs."""

    dim: int
    rows: tuple
    equality_rhs: Optional[Fraction] = None

    def __post_init__(self):
        rows = tuple(r if isinstance(r, Row) else Row(*r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if self.equality_rhs is not None:
            object.__setattr__(self, "equality_rhs", rat(self.equality_rhs))
        labels = [r.label for r in rows]
        if len(set(labels)) != len(labels):
            dup = next(l for l in labels if labels.count(l) > 1)
            raise ValueError(f"duplicate row label {dup!r}")
        for r in rows:
            if len(r.normal) != self.dim:
                raise ValueError(f"row {r.label!r} has length {len(r.normal)}, expected {self.dim}")

    @property
    def quotient(self) -> bool:
        return self.equality_rhs is not None

    @property
    def polytope_dim(self) -> int:
        return self.dim - 1 if self.quotient else self.dim

    @property
    def labels(self) -> tuple:
        return tuple(r.label for r in self.rows)

    def rhs_map(self) -> dict:
        return {r.label: r.rhs for r in self.rows}

    def row(self, label: str) -> Row:
        for r in self.rows:
            if r.label == label:
                return r
        raise KeyError(label)

    def with_rhs(self, values, equality_rhs=None) -> "HPolytope":
        """Same normals, new right-hand sides (mapping label -> value)."""
        rows = tuple(Row(r.label, r.normal, values[r.label]) for r in self.rows)
        eq = self.equality_rhs if equality_rhs is None else equality_rhs
        return HPolytope(self.dim, rows, eq)

    def contains(self, x: Sequence) -> bool:
        x = ratvec(x)
        if self.quotient and sum(x) != self.equality_rhs:
            return False
        return all(dot(r.normal, x) <= r.rhs for r in self.rows)


@dataclass(frozen=True)
class VPolytope:
    """Finite point set, kept sorted.  ``labels`` and ``tight`` are optional
    parallel tuples (vertex labels, tight-row label sets)."""

    dim: int
    vertices: tuple
    labels: Optional[tuple] = None
    tight: Optional[tuple] = None

    def __post_init__(self):
        verts = [ratvec(v) for v in self.vertices]
        for v in verts:
            if len(v) != self.dim:
                raise ValueError(f"vertex {v} has wrong length, expected {self.dim}")
        if len(set(verts)) != len(verts):
            raise DegenerateInput("repeated vertex")
        extras = [t for t in (self.labels, self.tight) if t is not None]
        for t in extras:
            if len(t) != len(verts):
                raise ValueError("parallel data length mismatch")
        order = sorted(range(len(verts)), key=lambda i: verts[i])
        object.__setattr__(self, "vertices", tuple(verts[i] for i in order))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels[i] for i in order))
        if self.tight is not None:
            object.__setattr__(self, "tight", tuple(frozenset(self.tight[i]) for i in order))

    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def label_map(self) -> dict:
        if self.labels is None:
            raise ValueError("vertices are unlabeled")
        return dict(zip(self.labels, self.vertices))

    def coordinate_sums(self) -> set:
        return {sum(v) for v in self.vertices}


# ---------------------------------------------------------------------------
# batched integer determinants


_LEIBNIZ: dict = {}


def _leibniz(k: int):
    if k not in _LEIBNIZ:
        terms = []
        for p in itertools.permutations(range(k)):
            inv = sum(1 for i in range(k) for j in range(i + 1, k) if p[i] > p[j])
            terms.append((-1 if inv % 2 else 1, p))
        _LEIBNIZ[k] = terms
    return _LEIBNIZ[k]


def _batch_det(M: np.ndarray) -> np.ndarray:
    """Determinants of a stack of k x k integer matrices, shape (B, k, k)."""
    B, k = M.shape[0], M.shape[1]
    if k == 0:
        return np.ones(B, dtype=M.dtype)
    total = np.zeros(B, dtype=M.dtype)
    for sign, p in _leibniz(k):
        term = M[:, 0, p[0]]
        for i in range(1, k):
            term = term * M[:, i, p[i]]
        if sign > 0:
            total = total + term
        else:
            total = total - term
    return total


def _batch_cross(M: np.ndarray) -> np.ndarray:
    """Generalized cross products: for M of shape (B, n-1, n) return y of
    shape (B, n) with M y = 0, via signed maximal minors."""
    B, _, n = M.shape
    out = np.empty((B, n), dtype=M.dtype)
    cols = list(range(n))
    for j in range(n):
        minor = M[:, :, cols[:j] + cols[j + 1:]]
        d = _batch_det(minor)
        out[:, j] = d if j % 2 == 0 else -d
    return out


def _pick_dtype(max_entry: int, n: int):
    bound = 2 * n * math.factorial(n) * max(1, max_entry) ** (n + 1)
    return np.int64 if bound < _INT64_SAFE else object


def _chunks(iterable, size):
    it = iter(iterable)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield block


def _integer_system(P: HPolytope):
    """Rows scaled to integers: (A, b) as Python int lists, equality row
    appended last when present."""
    A, b = [], []
    for r in P.rows:
        den = _lcm_of_denominators(list(r.normal) + [r.rhs])
        A.append([int(x * den) for x in r.normal])
        b.append(int(r.rhs * den))
    eq = None
    if P.quotient:
        c = P.equality_rhs
        eq = ([c.denominator] * P.dim, c.numerator)
    return A, b, eq


def vertex_enumeration(P: HPolytope, budget: Optional[int] = None) -> VPolytope:
    """All vertices of P by intersecting every d-subset of facet hyperplanes
    (plus the equality) and keeping feasible points.

    Raises Unbounded when P is nonempty but not bounded, EmptyPolytope when
    no vertex exists, BudgetExceeded when there are too many subsets.
    """
    n = P.dim
    d = P.polytope_dim
    m = len(P.rows)
    if d < 0 or n < 1:
        raise ValueError("empty ambient space")
    A, b, eq = _integer_system(P)
    full_rows = [list(map(Fraction, a)) for a in A]
    if eq is not None:
        full_rows.append([Fraction(1)] * n)
    if rank(full_rows) < n:
        raise Unbounded("the system has a nonzero lineality space")
    if d == 0:
        # a single point in a one-dimensional ambient space
        x = (P.equality_rhs,)
        if not P.contains(x):
            raise EmptyPolytope("the system has no solution")
        tight = frozenset(r.label for r in P.rows if dot(r.normal, x) == r.rhs)
        return VPolytope(n, (x,), tight=(tight,))
    total = math.comb(m, d)
    _check_budget(total, budget, "vertex enumeration")

    max_entry = max([abs(v) for row in A for v in row] + [abs(v) for v in b] + [1]
                    + ([abs(eq[0][0]), abs(eq[1])] if eq is not None else []))
    dtype = _pick_dtype(max_entry, n)
    A_np = np.array(A, dtype=dtype).reshape(m, n)
    b_np = np.array(b, dtype=dtype)
    if eq is not None:
        eq_row = np.array(eq[0], dtype=dtype)
        eq_rhs = eq[1]

    found = {}
    for block in _chunks(itertools.combinations(range(m), d), _CHUNK):
        idx = np.array(block, dtype=np.int64).reshape(len(block), d)
        M = A_np[idx]
        rhs = b_np[idx]
        if eq is not None:
            M = np.concatenate([M, np.broadcast_to(eq_row, (len(block), 1, n))], axis=1)
            rhs = np.concatenate([rhs, np.full((len(block), 1), eq_rhs, dtype=dtype)], axis=1)
        det = _batch_det(M)
        keep = det != 0
        if not keep.any():
            continue
        M, rhs, det = M[keep], rhs[keep], det[keep]
        nums = np.empty((M.shape[0], n), dtype=dtype)
        for j in range(n):
            Mj = M.copy()
            Mj[:, :, j] = rhs
            nums[:, j] = _batch_det(Mj)
        neg = det < 0
        det = np.where(neg, -det, det)
        nums = np.where(neg[:, None], -nums, nums)
        lhs = nums @ A_np.T  # (B, m)
        ok = (lhs <= b_np[None, :] * det[:, None]).all(axis=1)
        for row_nums, row_det in zip(nums[ok], det[ok]):
            dd = int(row_det)
            pt = tuple(Fraction(int(v), dd) for v in row_nums)
            found[pt] = None
    if not found:
        raise EmptyPolytope("no feasible vertex")
    _check_recession(A_np, eq_row if eq is not None else None, n, d, m, budget)
    verts = list(found)
    tight = [frozenset(r.label for r in P.rows if dot(r.normal, v) == r.rhs) for v in verts]
    return VPolytope(n, tuple(verts), tight=tuple(tight))


def _check_recession(A_np, eq_row, n, d, m, budget):
    """Raise Unbounded if {y : A y <= 0, (1 . y = 0)} contains a nonzero y.

    With no lineality every nonzero recession cone has an extreme ray cut
    out by n-1 independent tight constraints, so testing the cross product
    of every (d-1)-subset of rows (plus the equality) is exhaustive."""
    count = math.comb(m, d - 1)
    _check_budget(count, budget, "recession test")
    dtype = A_np.dtype
    for block in _chunks(itertools.combinations(range(m), d - 1), _CHUNK):
        idx = np.array(block, dtype=np.int64).reshape(len(block), d - 1)
        M = A_np[idx]
        if eq_row is not None:
            M = np.concatenate([M, np.broadcast_to(eq_row, (len(block), 1, n))], axis=1)
        y = _batch_cross(M)
        nz = (y != 0).any(axis=1)
        if not nz.any():
            continue
        y = y[nz]
        s = y @ A_np.T
        if (s <= 0).all(axis=1).any() or (s >= 0).all(axis=1).any():
            raise Unbounded("the polyhedron has a recession direction")


# ---------------------------------------------------------------------------
# facets and normal fans


def default_labeler(normal: IntVec) -> str:
    """0/1 normals print as the subset of their support; others as a tuple."""
    if all(v in (0, 1) for v in normal):
        sep = "," if len(normal) >= 10 else ""
        return sep.join(str(i + 1) for i, v in enumerate(normal) if v == 1)
    return tuple_label(normal)


def tuple_label(normal: IntVec) -> str:
    return "(" + ",".join(str(v) for v in normal) + ")"


def affine_mode(P: VPolytope) -> bool:
    """True for quotient mode (affine hull parallel to the zero-sum space),
    False for full-dimensional; DegenerateInput otherwise."""
    if not P.vertices:
        raise DegenerateInput("no vertices")
    base = P.vertices[0]
    diffs = [tuple(a - b for a, b in zip(v, base)) for v in P.vertices[1:]]
    r = rank(diffs) if diffs else 0
    n = P.dim
    if r == n:
        return False
    if r == n - 1 and len(P.coordinate_sums()) == 1:
        return True
    raise DegenerateInput(f"affine dimension {r} in R^{n}: not full-dimensional"
                          " and not a full-dimensional slice of a constant-sum hyperplane")


def _normalize_int_rows(y: np.ndarray) -> np.ndarray:
    if y.dtype == object:
        out = []
        for row in y:
            g = math.gcd(*[int(v) for v in row])
            out.append([int(v) // g for v in row])
        return np.array(out, dtype=object).reshape(y.shape)
    g = np.gcd.reduce(np.abs(y), axis=1)
    return y // g[:, None]


def facet_hrep(P: VPolytope, labeler: Optional[Callable] = None,
               budget: Optional[int] = None) -> HPolytope:
    """Irredundant H-representation of conv(P).

    Normals are quotient-primitive (minimum entry 0, gcd 1) in quotient
    mode and primitive in full mode; rhs is the maximum over the vertices.
    Rows are sorted by label.  Raises DegenerateInput if a listed point is
    not a vertex.
    """
    quotient = affine_mode(P)
    labeler = labeler or (default_labeler if quotient else tuple_label)
    n = P.dim
    d = n - 1 if quotient else n
    N = len(P.vertices)
    total = math.comb(N, d)
    _check_budget(total, budget, "facet enumeration")
    den = _lcm_of_denominators(x for v in P.vertices for x in v)
    ints = [[int(x * den) for x in v] for v in P.vertices]
    max_entry = max(abs(x) for v in ints for x in v) or 1
    dtype = _pick_dtype(2 * max_entry, n)
    V = np.array(ints, dtype=dtype).reshape(N, n)
    ones = np.ones(n, dtype=dtype)

    normals = set()
    for block in _chunks(itertools.combinations(range(N), d), _CHUNK):
        idx = np.array(block, dtype=np.int64).reshape(len(block), d)
        base = V[idx[:, 0]]
        diffs = V[idx[:, 1:]] - base[:, None, :]
        if quotient:
            M = np.concatenate([diffs, np.broadcast_to(ones, (len(block), 1, n))], axis=1)
        else:
            M = diffs
        y = _batch_cross(M)
        nz = (y != 0).any(axis=1)
        if not nz.any():
            continue
        y, base = y[nz], base[nz]
        s = V @ y.T  # (N, B)
        s0 = (base * y).sum(axis=1)
        upper = (s <= s0[None, :]).all(axis=0)
        lower = (s >= s0[None, :]).all(axis=0)
        y = np.concatenate([y[upper], -y[lower & ~upper]], axis=0)
        if y.shape[0] == 0:
            continue
        y = _normalize_int_rows(y)
        for row in y:
            normals.add(tuple(int(v) for v in row))

    rows = []
    for y in normals:
        normal = quotient_primitive(y) if quotient else primitive(y)
        rhs = max(dot(normal, v) for v in P.vertices)
        rows.append((labeler(normal), normal, rhs))
    rows.sort(key=lambda r: r[0])
    eq = next(iter(P.coordinate_sums())) if quotient else None
    H = HPolytope(n, tuple(Row(*r) for r in rows), eq)
    for v in P.vertices:
        tight = [r.normal for r in H.rows if dot(r.normal, v) == r.rhs]
        span = tight + ([[Fraction(1)] * n] if quotient else [])
        if rank(span) < n:
            raise DegenerateInput(f"point {tuple(map(str, v))} is not a vertex")
    return H


@dataclass(frozen=True)
class GeneralFan:
    """Fan given by labeled ray representatives and maximal cones as sorted
    label tuples.  In quotient mode reps live in R^n/1 (zero-sum canonical)."""

    rays: tuple
    cones: tuple
    quotient: bool = True

    def __post_init__(self):
        rays = tuple((str(l), tuple(int(x) for x in rep)) for l, rep in self.rays)
        object.__setattr__(self, "rays", rays)
        cones = tuple(tuple(sorted(c)) for c in self.cones)
        object.__setattr__(self, "cones", cones)
        labels = [l for l, _ in rays]
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate ray label")
        known = set(labels)
        used = set()
        for c in cones:
            for l in c:
                if l not in known:
                    raise ValueError(f"cone uses unknown ray {l!r}")
            used.update(c)
        if known - used:
            raise ValueError(f"ray {sorted(known - used)[0]!r} lies in no maximal cone")
        if len(set(cones)) != len(cones):
            raise ValueError("maximal cones are not distinct")

    @property
    def ambient_dim(self) -> int:
        return len(self.rays[0][1]) if self.rays else 0

    @property
    def fan_dim(self) -> int:
        return self.ambient_dim - 1 if self.quotient else self.ambient_dim

    def ray_map(self) -> dict:
        return dict(self.rays)

    def cone_reps(self, cone) -> list:
        rm = self.ray_map()
        return [rm[l] for l in cone]

    def rep_signature(self) -> frozenset:
        rm = self.ray_map()
        return frozenset(frozenset(rm[l] for l in c) for c in self.cones)


def same_fan(F: GeneralFan, G: GeneralFan, labeled: bool = False) -> bool:
    """Equality of fans; ``labeled`` additionally requires equal labels."""
    if F.quotient != G.quotient:
        return False
    if labeled:
        return (set(F.rays) == set(G.rays)
                and set(F.cones) == set(G.cones))
    return F.rep_signature() == G.rep_signature()


def normal_fan(P: VPolytope, labeler: Optional[Callable] = None,
               budget: Optional[int] = None) -> GeneralFan:
    """Outer normal fan: one maximal cone per vertex, spanned by the rays of
    its tight facets."""
    H = facet_hrep(P, labeler, budget)
    quotient = H.quotient
    rays = []
    for r in H.rows:
        rep = canonical_ray(r.normal) if quotient else primitive(r.normal)
        rays.append((r.label, rep))
    cones = []
    for v in P.vertices:
        cones.append(tuple(sorted(r.label for r in H.rows if dot(r.normal, v) == r.rhs)))
    return GeneralFan(tuple(rays), tuple(cones), quotient)


# ---------------------------------------------------------------------------
# coarsening


@dataclass(frozen=True)
class CoarseningResult:
    ok: bool
    witness: Optional[dict] = None

    def __bool__(self):
        return self.ok


class _ConeTester:
    def __init__(self, reps, quotient):
        self.reps = reps
        self.quotient = quotient
        self.inverse = None
        n = len(reps[0])
        dim = n - 1 if quotient else n
        if len(reps) == dim:
            mat = [list(map(Fraction, r)) for r in reps]
            if quotient:
                mat.append([Fraction(1)] * n)
            if rank(mat) == n:
                self.inverse = _inverse(mat)
        self.k = len(reps)

    def contains(self, x) -> bool:
        if self.inverse is not None:
            # x^T = c^T R  ->  c^T = x^T R^{-1}
            n = len(x)
            for j in range(self.k):
                cj = sum(Fraction(x[i]) * self.inverse[i][j] for i in range(n))
                if cj < 0:
                    return False
            return True
        return cone_contains(self.reps, x, self.quotient)


def _inverse(mat):
    n = len(mat)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    red, _ = _rref(aug)
    return [row[n:] for row in red]


def coarsens(fine: GeneralFan, coarse: GeneralFan) -> CoarseningResult:
    """True iff every maximal cone of ``fine`` lies in some maximal cone of
    ``coarse``.  On failure the witness names the first fine cone (in stored
    order) and a generator that escapes the candidate coarse cone."""
    if fine.quotient != coarse.quotient:
        raise ValueError("cannot compare a quotient fan with a full-space fan")
    testers = [_ConeTester(coarse.cone_reps(c), coarse.quotient) for c in coarse.cones]
    frm = fine.ray_map()
    for cone in fine.cones:
        gens = [frm[l] for l in cone]
        interior = [sum(col) for col in zip(*gens)]
        candidates = [i for i, t in enumerate(testers) if t.contains(interior)]
        escaped = None
        for i in candidates:
            bad = next((l for l, g in zip(cone, gens) if not testers[i].contains(g)), None)
            if bad is None:
                break
            if escaped is None:
                escaped = (i, bad)
        else:
            wit = {"fine_cone": list(cone)}
            if escaped is None:
                wit["generator"] = None
                wit["reason"] = "no coarse cone contains the interior point"
            else:
                wit["coarse_cone"] = list(coarse.cones[escaped[0]])
                wit["generator"] = escaped[1]
            return CoarseningResult(False, wit)
    return CoarseningResult(True, None)
