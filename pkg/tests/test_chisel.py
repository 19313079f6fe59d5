from fractions import Fraction as F

import pytest

from braidfan.chisel import (
    ChiselSchedule, barycentric_by_chiseling, chisel, default_schedule, face_partition_label,
    faces_of, iterative_chisel, level_alpha, level_beta, permutohedron_face_labeler, simplex,
    verify_bary,
)
from braidfan.errors import EpsTooLarge, InvalidSchedule, MalformedChain
from braidfan.exactgeom import HPolytope, Row, VPolytope, canonical_ray, facet_hrep, vertex_enumeration
from braidfan.permutohedra import AlphaBeta, nested_vertices, perm_vertices
from braidfan.posets import e_partition_raw, e_set_raw, parse_partition

SQUARE = VPolytope(2, ((0, 0), (1, 0), (0, 1), (1, 1)))


class TestSchedule:
    def test_default(self):
        s = default_schedule(3)
        assert s.epsilons == (F(1, 5), F(1, 25), F(1, 125))
        ChiselSchedule(s.epsilons, 2)

    @pytest.mark.parametrize("eps,mode", [((F(1, 3), F(1, 7), F(1, 17)), 2), ((F(1, 2),), 1),
                                          ((F(1, 5), F(1, 10)), 1), ((), 1), ((F(-1, 5),), 1)])
    def test_rejected(self, eps, mode):
        with pytest.raises(InvalidSchedule):
            ChiselSchedule(eps, mode)

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_derived_sequences(self, d):
        s = default_schedule(d, 2)
        a, b = level_alpha(s, d), level_beta(s, d)
        assert all(x < y for x, y in zip(a, a[1:]))
        assert all(x < y for x, y in zip(b, b[1:]))
        assert all(abs(x) < F(1, 4) for x in b)


class TestFaces:
    def test_square(self):
        verts = faces_of(SQUARE, 0)
        assert len(verts) == 4 and all(len(f.tight) == 2 for f in verts)

    def test_simplex_directions(self):
        P = simplex(3)
        for f in faces_of(P):
            S = {i + 1 for i in range(4) if any(v[i] for v in f.vertices)}
            assert canonical_ray(f.direction) == canonical_ray(e_set_raw(S, 4))

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_permutohedron_directions(self, d):
        n = d + 1
        faces = faces_of(perm_vertices(range(1, n + 1)), face_labeler=permutohedron_face_labeler(n))
        assert faces
        for f in faces:
            T = parse_partition(f.label)
            assert canonical_ray(f.direction) == canonical_ray(e_partition_raw(T))

    def test_offsets(self):
        P = perm_vertices((1, 2, 3))
        for f in faces_of(P):
            assert f.offset == max(sum(a * x for a, x in zip(f.direction, v)) for v in P.vertices)
            assert all(sum(a * x for a, x in zip(f.direction, v)) == f.offset for v in f.vertices)


class TestChisel:
    def test_square_corner(self):
        H = facet_hrep(SQUARE)
        corner = [f for f in faces_of(SQUARE, 0) if (1, 1) in f.vertices]
        Q = chisel(H, corner, F(1, 4))
        assert len(vertex_enumeration(Q).vertices) == 5

    def test_triangle_hexagon(self):
        P = simplex(2)
        Q = chisel(facet_hrep(P), faces_of(P, 0), F(1, 3))
        assert len(vertex_enumeration(Q).vertices) == 6

    @pytest.mark.parametrize("eps", [F(2, 3), F(1, 2)])
    def test_triangle_too_deep(self, eps):
        P = simplex(2)
        with pytest.raises(EpsTooLarge) as info:
            chisel(facet_hrep(P), faces_of(P, 0), eps)
        assert info.value.witness

    def test_overlapping_faces(self):
        P = simplex(2)
        edges = faces_of(P, 1)
        with pytest.raises(ValueError):
            chisel(facet_hrep(P), edges[:2], F(1, 10))


class TestBarycentric:
    def test_segment(self):
        s = ChiselSchedule((F(1, 5),))
        H = barycentric_by_chiseling(simplex(1), s)
        assert vertex_enumeration(H).vertex_set() == perm_vertices((F(1, 5), F(4, 5))).vertex_set()

    def test_simplex_d3(self):
        H = barycentric_by_chiseling(simplex(3), default_schedule(3))
        want = perm_vertices((F(1, 125), F(4, 125), F(4, 25), F(4, 5)))
        assert vertex_enumeration(H).vertex_set() == want.vertex_set()

    def test_permutohedron_d3(self):
        s = default_schedule(3, 2)
        H = barycentric_by_chiseling(perm_vertices((1, 2, 3, 4)), s, permutohedron_face_labeler(4))
        want = nested_vertices(AlphaBeta((1, 2, 3, 4), (F(-4, 25), F(-4, 125), F(-1, 125)), 1, 1))
        assert vertex_enumeration(H).vertex_set() == want.vertex_set()

    @pytest.mark.parametrize("d", [1, 2])
    @pytest.mark.parametrize("level", [1, 2])
    def test_rounds_match_closed_form(self, d, level):
        s = default_schedule(d, level)
        if level == 1:
            P0, lab = simplex(d), None
        else:
            P0, lab = perm_vertices(range(1, d + 2)), permutohedron_face_labeler(d + 1)
        direct = vertex_enumeration(barycentric_by_chiseling(P0, s, lab))
        rounds = vertex_enumeration(iterative_chisel(P0, s, lab))
        assert direct.vertex_set() == rounds.vertex_set()


@pytest.mark.parametrize("level,d", [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3)])
def test_verify_bary(level, d):
    rep = verify_bary(level, d)
    assert rep["pass"] and rep["vertex_sets_equal"] and rep["fan_equal"]


def test_verify_bary_custom_schedule():
    rep = verify_bary(1, 2, ChiselSchedule((F(1, 3), F(1, 7))))
    assert rep["pass"]


class TestFacePartitionLabel:
    def test_example(self):
        T = face_partition_label([{4}, {1, 3, 4}], 4)
        assert str(T) == "2|13|4"
        d = [a + b for a, b in zip(e_set_raw({4}, 4), e_set_raw({1, 3, 4}, 4))]
        assert canonical_ray(d) == canonical_ray(e_partition_raw(T))

    def test_full_chain(self):
        T = face_partition_label([{3}, {3, 1}, {3, 1, 2}], 4)
        assert str(T) == "4|2|1|3"

    def test_empty(self):
        assert face_partition_label([], 4).is_top()

    def test_malformed(self):
        with pytest.raises(MalformedChain):
            face_partition_label([{1, 2}, {3, 4}], 4)
        with pytest.raises(MalformedChain):
            face_partition_label([{1, 2, 3, 4}], 4)
