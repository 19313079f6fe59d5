"""Chiseling faces off polytopes and barycentric subdivision of normal fans
by repeated chiseling."""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .errors import EpsTooLarge, InvalidSchedule, MalformedChain
from .exactgeom import (
    HPolytope,
    Row,
    VPolytope,
    dot,
    facet_hrep,
    normal_fan,
    primitive,
    quotient_primitive,
    rank,
    rat,
    ratvec,
    same_fan,
    vertex_enumeration,
)
from .fans import braid_fan, nested_braid_fan, partition_labeler
from .permutohedra import AlphaBeta, is_appropriate, nested_vertices, perm_vertices
from .posets import OrderedSetPartition, parse_subset, subset_str, top_partition


@dataclass(frozen=True)
class ChiselSchedule:
    """Distances eps_1 > eps_2 > ... used in successive rounds.

    mode 1 requires eps_1 < 1/2, mode 2 requires eps_1 < 1/4; both require
    eps_i < eps_{i-1}/2."""

    epsilons: tuple
    mode: int = 1

    def __post_init__(self):
        eps = ratvec(self.epsilons)
        object.__setattr__(self, "epsilons", eps)
        if self.mode not in (1, 2):
            raise InvalidSchedule("mode must be 1 or 2")
        if not eps:
            raise InvalidSchedule("empty schedule")
        if any(e <= 0 for e in eps):
            raise InvalidSchedule("distances must be positive")
        bound = Fraction(1, 2) if self.mode == 1 else Fraction(1, 4)
        if not eps[0] < bound:
            raise InvalidSchedule(f"eps_1 = {eps[0]} must be < {bound} in mode {self.mode}")
        for i in range(1, len(eps)):
            if not eps[i] < eps[i - 1] / 2:
                raise InvalidSchedule(f"eps_{i + 1} = {eps[i]} must be < eps_{i} / 2")

    def __len__(self):
        return len(self.epsilons)

    def eps(self, i: int) -> Fraction:
        """eps_i, 1-based."""
        return self.epsilons[i - 1]


def default_schedule(d: int, mode: int = 1) -> ChiselSchedule:
    """eps_i = 5^{-i}."""
    return ChiselSchedule(tuple(Fraction(1, 5 ** i) for i in range(1, d + 1)), mode)


@dataclass(frozen=True)
class FaceRecord:
    label: str
    tight: frozenset
    direction: tuple
    offset: Fraction
    dim: int
    vertices: frozenset


def _as_pair(P: Union[HPolytope, VPolytope]):
    """(H-rep with lattice-primitive normals, vertex polytope with tight sets)."""
    if isinstance(P, VPolytope):
        H = facet_hrep(P)
    else:
        rows = []
        for r in P.rows:
            normal = quotient_primitive(r.normal) if P.quotient else primitive(r.normal)
            scale = _scale(r.normal, normal, P.quotient)
            rows.append(Row(r.label, normal, r.rhs * scale + _shift(r.normal, normal, scale, P)))
        H = HPolytope(P.dim, tuple(rows), P.equality_rhs)
    V = vertex_enumeration(H)
    return H, V


def _scale(old, new, quotient):
    """Positive s with new = s * old (mod 1 in quotient mode)."""
    old = ratvec(old)
    if quotient:
        lo = min(old)
        old = tuple(x - lo for x in old)
    k = next(i for i, x in enumerate(old) if x != 0)
    return Fraction(new[k]) / old[k]


def _shift(old, new, scale, P):
    """Adjust rhs for the multiple of 1 added to the normal (quotient mode)."""
    if not P.quotient:
        return Fraction(0)
    t = Fraction(new[0]) - scale * rat(old[0])
    return t * P.equality_rhs


def _default_face_label(tight) -> str:
    return "&".join(sorted(tight))


def faces_of(P: Union[HPolytope, VPolytope], k: Optional[int] = None,
             face_labeler: Optional[Callable] = None) -> list:
    """Faces of dimension k (all nonempty proper faces when k is None),
    found by closing facet vertex sets under intersection."""
    H, V = _as_pair(P)
    return _faces(H, V, k, face_labeler)


def _faces(H: HPolytope, V: VPolytope, k, face_labeler):
    labeler = face_labeler or _default_face_label
    facet_sets = {}
    for r in H.rows:
        verts = frozenset(v for v, t in zip(V.vertices, V.tight) if r.label in t)
        facet_sets[r.label] = verts
    faces = set(facet_sets.values())
    frontier = set(faces)
    while frontier:
        new = set()
        for A in frontier:
            for B in facet_sets.values():
                C = A & B
                if C and C not in faces:
                    new.add(C)
        faces |= new
        frontier = new
    full_dim = H.polytope_dim
    normals = {r.label: r.normal for r in H.rows}
    out = []
    for verts in faces:
        vl = sorted(verts)
        base = vl[0]
        dim = rank([tuple(a - b for a, b in zip(v, base)) for v in vl[1:]]) if len(vl) > 1 else 0
        if dim >= full_dim or (k is not None and dim != k):
            continue
        tight = frozenset(l for l, s in facet_sets.items() if verts <= s)
        direction = tuple(sum(col) for col in zip(*(normals[l] for l in tight)))
        offset = max(dot(direction, v) for v in V.vertices)
        out.append(FaceRecord(labeler(tight), tight, direction, offset, dim, verts))
    out.sort(key=lambda f: (f.dim, f.label))
    return out


def chisel(P: HPolytope, faces: Sequence[FaceRecord], eps, prefix: str = "chisel:") -> HPolytope:
    """Add <a_G, x> <= b_G - eps for each face G.  The faces must be pairwise
    disjoint; EpsTooLarge is raised when an unchiseled vertex does not stay
    strictly inside a new halfspace or two new facets meet."""
    eps = rat(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    for i, F in enumerate(faces):
        for G in faces[i + 1:]:
            if F.vertices & G.vertices:
                raise ValueError(f"faces {F.label} and {G.label} are not disjoint")
    old = vertex_enumeration(P)
    chiseled = set().union(*(F.vertices for F in faces)) if faces else set()
    new_rows = [Row(prefix + F.label, F.direction, F.offset - eps) for F in faces]
    for v in old.vertices:
        if v in chiseled:
            continue
        for r in new_rows:
            if not dot(r.normal, v) < r.rhs:
                raise EpsTooLarge(f"vertex {tuple(map(str, v))} is cut by {r.label}",
                                  {"vertex": [str(x) for x in v], "row": r.label})
    Q = HPolytope(P.dim, P.rows + tuple(new_rows), P.equality_rhs)
    VQ = vertex_enumeration(Q)
    new_labels = {r.label for r in new_rows}
    for v, t in zip(VQ.vertices, VQ.tight):
        hit = sorted(t & new_labels)
        if len(hit) > 1:
            raise EpsTooLarge(f"new facets {hit[0]} and {hit[1]} meet at {tuple(map(str, v))}",
                              {"vertex": [str(x) for x in v], "rows": hit})
    for r in new_rows:
        if not any(r.label in t for t in VQ.tight):
            raise EpsTooLarge(f"{r.label} does not touch the chiseled polytope",
                              {"row": r.label})
    return Q


def face_partition_label(chain: Sequence, n: int) -> OrderedSetPartition:
    """Chain S_1 ⊂ ... ⊂ S_k of proper nonempty subsets of [n] (the facets
    of the permutohedron containing a face) to the ordered set partition
    ([n] - S_k, S_k - S_{k-1}, ..., S_1).  The empty chain gives the top."""
    sets = [parse_subset(s, n) if isinstance(s, str) else frozenset(s) for s in chain]
    sets.sort(key=len)
    full = frozenset(range(1, n + 1))
    for i, S in enumerate(sets):
        if not S or S == full:
            raise MalformedChain("chain members must be nonempty proper subsets")
        if i and not (sets[i - 1] < S):
            raise MalformedChain("subsets do not form a strict chain")
    if not sets:
        return top_partition(n)
    blocks = [tuple(full - sets[-1])]
    for i in range(len(sets) - 1, 0, -1):
        blocks.append(tuple(sets[i] - sets[i - 1]))
    blocks.append(tuple(sets[0]))
    return OrderedSetPartition(tuple(blocks))


def permutohedron_face_labeler(n: int) -> Callable:
    def label(tight):
        return str(face_partition_label(sorted(tight, key=len), n))
    return label


def barycentric_by_chiseling(P0: VPolytope, sched: ChiselSchedule,
                             face_labeler: Optional[Callable] = None) -> HPolytope:
    """The system <a_G, x> <= b_G - eps_{dim G + 1} over all nonempty proper
    faces G of P0 (this already contains every round of the algorithm)."""
    H, V = _as_pair(P0)
    d = H.polytope_dim
    if len(sched) < d:
        raise InvalidSchedule(f"need {d} distances, got {len(sched)}")
    rows = []
    for F in _faces(H, V, None, face_labeler):
        rows.append(Row(F.label, F.direction, F.offset - sched.eps(F.dim + 1)))
    return HPolytope(H.dim, tuple(rows), H.equality_rhs)


def iterative_chisel(P0: VPolytope, sched: ChiselSchedule,
                     face_labeler: Optional[Callable] = None) -> HPolytope:
    """Round i chisels, at distance eps_i, every (i-1)-face of the current
    polytope whose tight rows all come from P0."""
    H0, _ = _as_pair(P0)
    d = H0.polytope_dim
    original = set(H0.labels)
    P = H0
    for i in range(1, d + 1):
        V = vertex_enumeration(P)
        faces = [F for F in _faces(P, V, i - 1, None) if F.tight <= original]
        if face_labeler is not None:
            faces = [replace(F, label=face_labeler(F.tight)) for F in faces]
        P = chisel(P, faces, sched.eps(i), prefix=f"r{i}:")
    return P


def simplex(d: int) -> VPolytope:
    n = d + 1
    return VPolytope(n, tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))


def level_alpha(sched: ChiselSchedule, d: int) -> tuple:
    """(eps_d, eps_{d-1} - eps_d, ..., eps_1 - eps_2, 1 - eps_1)."""
    e = sched.epsilons
    alpha = [e[d - 1]]
    for j in range(d - 1, 0, -1):
        alpha.append(e[j - 1] - e[j])
    alpha.append(1 - e[0])
    return tuple(alpha)


def level_beta(sched: ChiselSchedule, d: int) -> tuple:
    """(eps_2 - eps_1, ..., eps_d - eps_{d-1}, -eps_d)."""
    e = sched.epsilons
    return tuple(e[j] - e[j - 1] for j in range(1, d)) + (-e[d - 1],)


def verify_bary(level: int, d: int, sched: Optional[ChiselSchedule] = None) -> dict:
    """Chisel the simplex (level 1) or the permutohedron (level 2) and
    compare with the predicted usual/nested permutohedron, vertex set and
    normal fan."""
    if level not in (1, 2):
        raise ValueError("level must be 1 or 2")
    sched = sched or default_schedule(d, level)
    if sched.mode < level:
        sched = ChiselSchedule(sched.epsilons, level)
    n = d + 1
    report = {"level": level, "d": d, "epsilons": [str(e) for e in sched.epsilons[:d]]}
    if level == 1:
        P0 = simplex(d)
        alpha = level_alpha(sched, d)
        report["alpha"] = [str(a) for a in alpha]
        report["alpha_increasing"] = all(a < b for a, b in zip(alpha, alpha[1:]))
        H = barycentric_by_chiseling(P0, sched)
        result = vertex_enumeration(H)
        expected = perm_vertices(alpha)
        fan_ok = same_fan(normal_fan(result), braid_fan(d).as_general())
    else:
        P0 = perm_vertices(tuple(range(1, n + 1)))
        beta = level_beta(sched, d)
        report["beta"] = [str(b) for b in beta]
        report["beta_increasing"] = all(a < b for a, b in zip(beta, beta[1:]))
        report["beta_small"] = all(abs(b) < Fraction(1, 4) for b in beta)
        ab = AlphaBeta(tuple(range(1, n + 1)), beta, 1, 1)
        app = is_appropriate(ab)
        report["appropriate"] = app.ok
        if not app.ok:
            report["pass"] = False
            return report
        H = barycentric_by_chiseling(P0, sched, permutohedron_face_labeler(n))
        result = vertex_enumeration(H)
        expected = nested_vertices(ab)
        fan_ok = same_fan(normal_fan(result, partition_labeler),
                          nested_braid_fan(d).as_general())
    report["rows"] = len(H.rows)
    report["vertices"] = len(result.vertices)
    report["vertex_sets_equal"] = result.vertex_set() == expected.vertex_set()
    report["fan_equal"] = fan_ok
    report["pass"] = bool(report["vertex_sets_equal"] and fan_ok
                          and report.get("alpha_increasing", True)
                          and report.get("beta_increasing", True))
    return report
