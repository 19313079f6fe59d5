from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from braidfan.errors import (
    AllOnesMultiple, BudgetExceeded, DegenerateInput, DependentRays, EmptyPolytope, Unbounded,
)
from braidfan.exactgeom import (
    GeneralFan, HPolytope, Row, VPolytope, canonical_ray, coarsens, cone_contains,
    facet_hrep, fm_feasible, normal_fan, rat, same_fan, simplicial_cone_membership,
    solve_square, vertex_enumeration,
)
from braidfan.fans import braid_fan, nested_braid_fan
from braidfan.permutohedra import perm_vertices
from braidfan.posets import e_set_raw

from conftest import cube_b, ex23_p0
from braidfan.defcone import hrep_from_b


def test_rat_reads_floats_and_strings_exactly():
    assert rat(2.5) == F(5, 2)
    assert rat("3/6") == F(1, 2)
    assert rat(0.1) == F(1, 10)


class TestCanonicalRay:
    def test_basis_vector(self):
        assert canonical_ray((1, 0, 0, 0)) == (3, -1, -1, -1)

    def test_all_ones_rejected(self):
        with pytest.raises(AllOnesMultiple):
            canonical_ray((1, 1, 1, 1))

    def test_translates_agree(self):
        assert canonical_ray((0, 1, 1, 0)) == canonical_ray((1, 2, 2, 1)) == (-1, 1, 1, -1)

    @given(st.lists(st.integers(-20, 20), min_size=2, max_size=6), st.fractions(-5, 5))
    def test_idempotent_and_translation_invariant(self, v, t):
        if len(set(v)) == 1:
            return
        r = canonical_ray(v)
        assert sum(r) == 0
        assert canonical_ray(r) == r
        assert canonical_ray([x + t for x in v]) == r


class TestSolveSquare:
    def test_identity(self):
        assert solve_square([[1, 0], [0, 1]], [3, F(1, 2)]) == (3, F(1, 2))

    def test_singular(self):
        assert solve_square([[1, 0], [1, 0]], [1, 2]) is None

    def test_ex23_vertex(self):
        assert solve_square([[-1, 0], [0, 1]], [1, 2]) == (-1, 2)


class TestConeMembership:
    def test_one_ray(self):
        assert simplicial_cone_membership([(1, -1)], (2, -2)) == [2]

    def test_cube_cone_middle_ray(self):
        rays = [e_set_raw(S, 4) for S in ({2, 3}, {3, 4}, {2, 4})]
        assert simplicial_cone_membership(rays, e_set_raw({2, 3, 4}, 4)) == [F(1, 2)] * 3

    def test_outside(self):
        rays = [e_set_raw(S, 4) for S in ({2, 3}, {3, 4}, {2, 4})]
        assert simplicial_cone_membership(rays, e_set_raw({1, 2}, 4)) is None

    def test_dependent(self):
        with pytest.raises(DependentRays):
            simplicial_cone_membership([(1, -1, 0), (2, -2, 0)], (1, -1, 0))

    def test_fourier_motzkin(self):
        assert fm_feasible([((1,), 1), ((-1,), 0)])
        assert not fm_feasible([((1,), -1), ((-1,), 0)])
        # square cone in R^2 generated by four rays is not simplicial
        gens = [(1, 0), (0, 1), (1, 1), (2, 1)]
        assert cone_contains(gens, (3, 1), quotient=False)
        assert not cone_contains(gens, (-1, 1), quotient=False)


class TestVertexEnumeration:
    def test_simplex(self):
        rows = tuple(Row(str(i), tuple(-int(i == j) for j in range(4)), 0) for i in range(4))
        V = vertex_enumeration(HPolytope(4, rows, 1))
        assert V.vertex_set() == {tuple(F(int(i == j)) for j in range(4)) for i in range(4)}

    def test_ex23(self):
        V = vertex_enumeration(ex23_p0())
        assert V.vertex_set() == {(-1, 2), (-1, -1), (1, -1), (4, 2)}
        assert all(ex23_p0().contains(v) for v in V.vertices)

    def test_cube(self):
        V = vertex_enumeration(hrep_from_b(cube_b()))
        # the permutations of (1,1,1,3) and (0,2,2,2): a 3-cube, so 8 vertices
        import itertools
        want = set(itertools.permutations((1, 1, 1, 3))) | set(itertools.permutations((0, 2, 2, 2)))
        assert len(V.vertices) == 8
        assert V.vertex_set() == want

    def test_tightness_bookkeeping(self):
        V = vertex_enumeration(ex23_p0())
        tight = dict(zip(V.vertices, V.tight))
        assert tight[(F(4), F(2))] == {"a2", "a4"}

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            vertex_enumeration(ex23_p0(), budget=2)

    def test_env_budget(self, monkeypatch):
        monkeypatch.setenv("BRAIDFAN_BUDGET", "3")
        with pytest.raises(BudgetExceeded):
            vertex_enumeration(ex23_p0())

    def test_unbounded(self):
        rows = (Row("a", (-1, 0), 0), Row("b", (0, -1), 0))
        with pytest.raises(Unbounded):
            vertex_enumeration(HPolytope(2, rows))

    def test_empty(self):
        rows = (Row("a", (-1, 0), -2), Row("b", (1, 0), 1), Row("c", (0, 1), 1), Row("d", (0, -1), 1))
        with pytest.raises(EmptyPolytope):
            vertex_enumeration(HPolytope(2, rows))


def test_vpolytope_rejects_interior_point():
    P = VPolytope(2, ((0, 0), (2, 0), (0, 2), (F(1, 2), F(1, 2))))
    with pytest.raises(DegenerateInput):
        facet_hrep(P)


def test_tight_round_trip_on_ex23():
    P = ex23_p0()
    V = vertex_enumeration(P)
    for r in P.rows:
        assert max(sum(a * b for a, b in zip(r.normal, v)) for v in V.vertices) == r.rhs


class TestNormalFan:
    def test_perm_three(self):
        fan = normal_fan(perm_vertices((1, 2, 3)))
        assert len(fan.cones) == 6
        assert same_fan(fan, braid_fan(2).as_general())

    def test_ex23_fig3(self):
        fan = normal_fan(vertex_enumeration(ex23_p0()))
        assert {tuple(r) for _, r in fan.rays} == {(-1, 0), (0, 1), (0, -1), (1, -1)}
        assert len(fan.cones) == 4

    def test_cube_cone(self):
        V = vertex_enumeration(hrep_from_b(cube_b()))
        fan = normal_fan(V)
        reps = {tuple(sorted(tuple(r) for r in fan.cone_reps(c))) for c in fan.cones}
        want = tuple(sorted(tuple(int(x) for x in canonical_ray(e_set_raw(S, 4)))
                            for S in ({2, 3}, {3, 4}, {2, 4})))
        assert want in reps

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_perm_has_factorial_cones(self, d):
        import math
        assert len(normal_fan(perm_vertices(range(1, d + 2))).cones) == math.factorial(d + 1)

    def test_too_few_vertices(self):
        with pytest.raises(DegenerateInput):
            normal_fan(VPolytope(3, ((1, 0, 0), (0, 1, 0))))


class TestCoarsens:
    def test_nested_refines_braid(self):
        assert coarsens(nested_braid_fan(3), braid_fan(3)).ok

    def test_braid_refines_simplex_fan(self):
        simplex = VPolytope(4, tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))
        assert coarsens(braid_fan(3), normal_fan(simplex)).ok

    def test_scrambled_labels(self):
        B = braid_fan(2)
        reps = dict(B.rays)
        labels = sorted(reps)
        # swap the reps of two rays but keep cones: some cone becomes non-convex-compatible
        a, b = labels[0], labels[3]
        swapped = tuple((l, reps[b] if l == a else reps[a] if l == b else reps[l]) for l in labels)
        G = GeneralFan(swapped, B.cones)
        res = coarsens(B, G)
        assert not res.ok and res.witness is not None

    @pytest.mark.parametrize("d", [2, 3])
    def test_reflexive(self, d):
        assert coarsens(braid_fan(d), braid_fan(d)).ok

    def test_transitive(self):
        simplex = VPolytope(3, tuple(tuple(int(i == j) for j in range(3)) for i in range(3)))
        S = normal_fan(simplex)
        assert coarsens(nested_braid_fan(2), braid_fan(2)).ok and coarsens(braid_fan(2), S).ok
        assert coarsens(nested_braid_fan(2), S).ok


@settings(max_examples=150, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=7),
       st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_simplex_agrees_with_fourier_motzkin(gens, x):
    from braidfan.exactgeom import simplex_feasible
    k = len(gens)
    A = [[g[i] for g in gens] for i in range(3)]
    # FM route: lam >= 0 with A lam = x as a pair of inequalities per row
    ineqs = [(row, xi) for row, xi in zip(A, x)] + [([-c for c in row], -xi) for row, xi in zip(A, x)]
    ineqs += [([-int(t == j) for t in range(k)], 0) for j in range(k)]
    assert simplex_feasible(A, x) == fm_feasible(ineqs)
