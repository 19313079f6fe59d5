"""Acceptance criteria 1-9.  Each criterion prints one PASS/FAIL line (also
collected into the terminal summary).  Run directly with
``python tests/test_acceptance.py`` for the lines alone."""

import itertools
import os
import sys
import time
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from braidfan.chisel import verify_bary  # noqa: E402
from braidfan.defcone import (  # noqa: E402
    BVector, check_membership, check_nested_b, check_submodular, defcone_inequalities,
    equivalent_systems, hrep_from_b, is_deformation, is_rank_function, min_monotone_shift,
    monotone_shift,
)
from braidfan.exactgeom import coarsens, normal_fan, same_fan, vertex_enumeration  # noqa: E402
from braidfan.fans import (  # noqa: E402
    WallInequality, braid_fan, cone_interior_point, fan_from_hpolytope, locate,
    nested_braid_fan, partition_labeler,
)
from braidfan.permutohedra import (  # noqa: E402
    AlphaBeta, nested_facet_b, nested_vertex, nested_vertices, perm_vertices,
)
from braidfan.posets import PermPair, all_partitions, e_partition_raw  # noqa: E402
from braidfan.sampling import equivalence_samples, random_appropriate, random_submodular, rng_for  # noqa: E402

from conftest import cube_b, ex23_p0  # noqa: E402

EX46 = AlphaBeta((1, 2, 3, 4), (1, 2, 3), 4, 1)
LINES = {}


def _line(num, title, ok, seconds, limit, detail=""):
    mark = "✅ PASS" if ok else "❌ FAIL"
    text = f"{mark}  criterion {num}: {title} ({seconds:.2f}s, limit {limit}s)"
    if detail:
        text += f" -- {detail}"
    LINES[num] = text
    print(text)
    return text


def _timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


def _support(normal, pts):
    return max(sum(a * x for a, x in zip(normal, p)) for p in pts)


# ---------------------------------------------------------------------------


def criterion_1():
    labels = ["a1", "a2", "a3", "a4"]
    P0 = ex23_p0()
    ineqs = defcone_inequalities(fan_from_hpolytope(P0))
    target = [WallInequality((), (("a2", F(1)), ("a3", F(1)))),
              WallInequality((("a3", F(1)),), (("a1", F(1)), ("a4", F(1))))]
    b = lambda *v: BVector.from_sequence(labels, v)  # noqa: E731
    checks = {
        "equivalent": equivalent_systems(ineqs, target),
        "b1": check_membership(ineqs, b(3, 2, 0, F(5, 2))).member,
        "b2": check_membership(ineqs, b(1, 2, 1, 0)).member,
    }
    v3 = check_membership(ineqs, b(1, 2, 2, 0))
    checks["b3"] = (not v3.member and v3.certificate["inequality"] == "b[a3] <= b[a1] + b[a4]"
                    and (v3.certificate["lhs"], v3.certificate["rhs"]) == ("2", "1"))
    checks["Q3"] = is_deformation(P0, ex23_p0((1, 2, 2, 0))).member
    bad = [k for k, v in checks.items() if not v]
    return not bad, "" if not bad else f"failed: {bad}"


def _equivalence(kind, count=200):
    details = []
    ok = True
    for d in (2, 3):
        fan = braid_fan(d) if kind == "braid" else nested_braid_fan(d)
        ineqs = defcone_inequalities(fan)
        char = check_submodular if kind == "braid" else check_nested_b
        members = agree = 0
        for b in equivalence_samples(kind, d, count, seed=0):
            g = check_membership(ineqs, b).member
            members += g
            agree += g == char(b).member
        ok &= agree == count and 0 < members < count
        details.append(f"d={d}: {agree}/{count} agree, {members} members")
    return ok, "; ".join(details)


def criterion_2():
    return _equivalence("braid")


def criterion_3():
    return _equivalence("nested")


ORBIT_REPS = [(3, 7, 11, 19), (2, 9, 10, 19), (1, 10, 11, 18), (1, 9, 13, 17),
              (2, 7, 14, 17), (3, 6, 13, 18)]
PRINTED = {"23|4|1": 90, "14|23": 71, "4|123": 81}


def criterion_4_parts():
    v = nested_vertex(EX46, PermPair((3, 2, 4, 1), (2, 3, 1)))
    V = nested_vertices(EX46)
    orbit = {tuple(map(F, p)) for r in ORBIT_REPS for p in itertools.permutations(r)}
    b = nested_facet_b(EX46)
    at_vertex = {lab: sum(a * x for a, x in zip(e_partition_raw(next(
        T for T in all_partitions(3) if str(T) == lab)), v)) for lab in ("24|13", "4|2|13", "4|2|1|3")}
    return {
        "vertex": v == (14, 7, 17, 2),
        "vertex_set": len(V.vertices) == 144 and V.vertex_set() == orbit,
        "facets_at_vertex": [at_vertex[l] for l in ("24|13", "4|2|13", "4|2|1|3")] == [71, 109, 126]
        and all(b.value(l) == at_vertex[l] for l in at_vertex),
        "printed": {l: b.value(l) for l in PRINTED},
    }


def criterion_4():
    parts = criterion_4_parts()
    got = parts.pop("printed")
    mismatch = {l: (int(got[l]), PRINTED[l]) for l in PRINTED if got[l] != PRINTED[l]}
    ok = all(parts.values()) and not mismatch
    detail = ", ".join(f"b_{{{l}}}={g} (printed {p})" for l, (g, p) in mismatch.items())
    if mismatch:
        detail += "; formula and brute-force max agree on the computed values"
    bad = [k for k, v in parts.items() if not v]
    if bad:
        detail = f"failed: {bad}; " + detail
    return ok, detail


def criterion_5():
    cases = [EX46] + [random_appropriate(d, rng_for(100 * d + s)) for d in (1, 2, 3) for s in range(5)]
    for ab in cases:
        V = nested_vertices(ab)
        b = nested_facet_b(ab)
        for T in all_partitions(ab.d, proper=True):
            if b.value(T) != _support(e_partition_raw(T), V.vertices):
                return False, f"facet {T} of {ab}"
        if vertex_enumeration(hrep_from_b(b)).vertex_set() != V.vertex_set():
            return False, f"H-rep round trip for {ab}"
    return True, f"{len(cases)} parameter sets"


def criterion_6():
    B, N = braid_fan(3), nested_braid_fan(3)
    perm_ok = same_fan(normal_fan(perm_vertices((1, 2, 3, 4))), B.as_general(), labeled=True)
    nested_ok = same_fan(normal_fan(nested_vertices(EX46), partition_labeler), N.as_general(),
                         labeled=True)
    coarse_ok = coarsens(N, B).ok
    counts = [0] * len(B.cones)
    for cone in N.cones:
        where = locate(B, cone_interior_point(N, cone))
        if len(where) != 1:
            return False, f"nested cone {cone} not inside exactly one braid cone"
        counts[where[0]] += 1
    six = counts == [6] * 24
    ok = perm_ok and nested_ok and coarse_ok and six
    return ok, "" if ok else f"perm={perm_ok} nested={nested_ok} coarsens={coarse_ok} six={six}"


def criterion_7():
    reports = [verify_bary(level, d) for level in (1, 2) for d in (2, 3)]
    ok = all(r["pass"] for r in reports)
    return ok, ", ".join(f"L{r['level']} d={r['d']}: {r['vertices']} vertices" for r in reports)


def criterion_8():
    cube = cube_b()
    v = check_submodular(cube)
    every = check_submodular(cube, all_violations=True)
    listed = {"S": "12", "T": "23", "lhs": "9", "rhs": "8"} in every
    V = vertex_enumeration(hrep_from_b(cube))
    tight = BVector("partitions", 3, {str(T): _support(e_partition_raw(T), V.vertices)
                                      for T in all_partitions(3)})
    nested = check_nested_b(tight).member
    ok = (not v.member) and listed and nested
    first = v.certificate
    return ok, (f"first violation {first['S']}/{first['T']}: {first['lhs']} > {first['rhs']};"
                f" 12/23 listed={listed}; nested member={nested}")


def criterion_9():
    rng = rng_for(9)
    for i in range(50):
        b = random_submodular(rng.randint(1, 3), rng)
        k = min_monotone_shift(b)
        shifted = monotone_shift(b, k)
        if not is_rank_function(shifted).member:
            return False, f"sample {i}: shift {k} is not a rank function"
        V0 = vertex_enumeration(hrep_from_b(b)).vertex_set()
        V1 = vertex_enumeration(hrep_from_b(shifted)).vertex_set()
        if {tuple(x + k for x in v) for v in V0} != V1:
            return False, f"sample {i}: not a translate by {k}*1"
    return True, "50 samples"


CRITERIA = [
    (1, "worked 2-D example", criterion_1, 1),
    (2, "submodular theorem equivalence", criterion_2, 30),
    (3, "nested characterization equivalence", criterion_3, 300),
    (4, "nested permutohedron example reproduction", criterion_4, 1),
    (5, "facet formula vs brute-force oracle", criterion_5, 120),
    (6, "fan identities", criterion_6, 120),
    (7, "chiseling theorems", criterion_7, 300),
    (8, "cube non-example", criterion_8, 60),
    (9, "polymatroid pipeline", criterion_9, 60),
]


def _run(num):
    _, title, fn, limit = CRITERIA[num - 1]
    ok, detail, secs = _timed(fn)
    _line(num, title, ok and secs < limit, secs, limit, detail)
    return ok, secs, limit, detail


# ---------------------------------------------------------------------------


ACCEPT_KEY = pytest.StashKey[dict]()


@pytest.fixture
def log_line(request):
    return request.config.stash.setdefault(ACCEPT_KEY, {})


@pytest.mark.parametrize("num", [1, 2, 3, 5, 6, 7, 8, 9])
def test_criterion(num, log_line):
    ok, secs, limit, detail = _run(num)
    log_line[num] = LINES[num]
    assert ok, detail
    assert secs < limit


def test_criterion_4(log_line):
    """Everything in criterion 4 that the closed form and the oracle
    confirm: the vertex, the 144-vertex set, the facet values 71/109/126 at
    that vertex and b_{14|23} = 71."""
    _run(4)
    log_line[4] = LINES[4]
    t0 = time.perf_counter()
    parts = criterion_4_parts()
    assert parts["vertex"] and parts["vertex_set"] and parts["facets_at_vertex"]
    assert parts["printed"]["14|23"] == 71
    assert parts["printed"]["23|4|1"] == 89 and parts["printed"]["4|123"] == 79
    assert time.perf_counter() - t0 < 1


@pytest.mark.xfail(strict=True, reason="printed values 90 and 81 disagree with the facet formula "
                   "and with the brute-force maximum (89 and 79)")
def test_criterion_4_printed_values():
    b = nested_facet_b(EX46)
    assert b.value("23|4|1") == 90
    assert b.value("4|123") == 81


if __name__ == "__main__":
    results = [_run(num) for num, *_ in CRITERIA]
    sys.exit(0 if all(ok and secs < limit for ok, secs, limit, _ in results) else 1)
