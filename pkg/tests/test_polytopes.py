import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essmon.polytopes import (HPolyhedron, UnboundedError, bounding_box, compare_sets, convex_hull,
                              dyck_paths_type_a, dyck_paths_type_c, empirical_hull_report, find_permutation,
                              fflv_polytope, gt_cone, gt_word, lattice_points, sp4_polytope, string_weight_truncation)
from essmon.rootsys import build_root_system, weyl_dim

A2 = build_root_system("A2")
A3 = build_root_system("A3")
C2 = build_root_system("C2")


def test_dyck_path_counts():
    assert len(dyck_paths_type_a(2)) == 3
    assert len(dyck_paths_type_a(3)) == 7
    assert len(dyck_paths_type_c(2)) == 4
    assert len(dyck_paths_type_c(3)) == 12
    # paths of length one are exactly the simple roots
    assert sum(1 for d in dyck_paths_type_a(3) if len(d.cells) == 1) == 3


def test_a2_inequalities():
    P = fflv_polytope(A2, (2, 3))  # coordinates: a1+a2, a1, a2
    rows = {lab: (tuple(int(x) for x in a), int(b)) for (a, b), lab in zip(P.rows, P.labels) if lab.startswith("dyck")}
    assert rows == {"dyck:1,1": ((0, 1, 0), 2), "dyck:2,2": ((0, 0, 1), 3),
                    "dyck:1,1->1,2->2,2": ((1, 1, 1), 5)}


@pytest.mark.parametrize("rs,lam,count", [(A2, (1, 0), 3), (A2, (1, 1), 8), (A3, (1, 1, 1), 64),
                                          (C2, (0, 1), 5), (C2, (1, 1), 16), (C2, (2, 0), 10)])
def test_fflv_lattice_points_count_the_module(rs, lam, count):
    pts = lattice_points(fflv_polytope(rs, lam))
    assert len(pts) == count == weyl_dim(rs, lam)


def test_fflv_only_for_a_and_c():
    with pytest.raises(ValueError):
        fflv_polytope(build_root_system("B2"), (1, 1))


def test_gt_cone_membership():
    C = gt_cone(2)  # (p11, p22, p21)
    assert C.contains((0, 1, 0))
    assert not C.contains((0, 0, 1))
    assert C.violated((0, 0, 1)) == ["chain:p22>=p21"]
    assert gt_word(3) == [1, 2, 1, 3, 2, 1]
    with pytest.raises(UnboundedError) as info:
        lattice_points(C)
    assert any(info.value.ray)


def test_string_truncation():
    P = string_weight_truncation(gt_cone(2), A2, gt_word(2), (1, 1))
    weight_rows = [(tuple(int(x) for x in a), int(b)) for (a, b), lab in zip(P.rows, P.labels)
                   if lab.startswith("weight")]
    assert weight_rows == [((1, -1, 2), 1), ((0, 1, -1), 1), ((0, 0, 1), 1)]
    assert len(lattice_points(P)) == 8
    assert len(lattice_points(string_weight_truncation(gt_cone(3), A3, gt_word(3), (1, 0, 1)))) == 15
    with pytest.raises(ValueError):
        string_weight_truncation(gt_cone(2), A2, [1, 2], (1, 1))


def test_sp4_polytope():
    pts = lattice_points(sp4_polytope(1, 0))
    assert set(pts) == {(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)}
    assert len(lattice_points(sp4_polytope(0, 1))) == 5
    assert lattice_points(sp4_polytope(0, 0)) == [(0, 0, 0, 0)]
    assert len(lattice_points(sp4_polytope(1, 1))) == 16
    assert len(lattice_points(sp4_polytope(2, 2))) == 81


def test_small_polyhedra():
    cube = HPolyhedron(3).add_nonnegativity()
    for k in range(3):
        cube.add([int(j == k) for j in range(3)], 1)
    assert len(lattice_points(cube)) == 8
    assert bounding_box(cube) == [(0, 1)] * 3
    empty = HPolyhedron(2).add_nonnegativity().add([1, 1], -1)
    assert lattice_points(empty) == []
    half = HPolyhedron(2).add_nonnegativity().add([1, 0], 3)
    with pytest.raises(UnboundedError) as info:
        lattice_points(half)
    assert info.value.ray == (0, 1)
    with pytest.raises(ValueError):
        HPolyhedron(2).add([1, 2, 3], 0)


def test_permuted_polyhedron():
    P = HPolyhedron(2).add_nonnegativity().add([1, 0], 2).add([0, 1], 1)
    Q = P.permuted([1, 0])
    assert set(lattice_points(Q)) == {(y, x) for x, y in lattice_points(P)}


def test_hull_of_segment_and_square():
    H = convex_hull([(0, 0), (2, 2), (1, 1)])
    assert H.affine_dim == 1 and H.vertices == [(0, 0), (2, 2)]
    assert H.polyhedron.contains((1, 1)) and not H.polyhedron.contains((1, 0))
    H = convex_hull(list(itertools.product(range(3), repeat=2)))
    assert H.affine_dim == 2 and len(H.vertices) == 4
    assert sum(1 for lab in H.polyhedron.labels if lab == "facet") == 4
    assert convex_hull([(3, 4)]).vertices == [(3, 4)]


def test_hull_report_finds_holes():
    rep = empirical_hull_report([(0, 0), (2, 0), (0, 2)])
    assert rep.difference == [(0, 1), (1, 0), (1, 1)] and not rep.saturated
    assert empirical_hull_report(lattice_points(fflv_polytope(A2, (1, 1)))).saturated


point_sets = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=9)


@settings(max_examples=40, deadline=None)
@given(point_sets)
def test_hull_contains_exactly_its_points(pts):
    H = convex_hull(pts)
    assert all(H.polyhedron.contains(p) for p in pts)
    assert set(H.vertices) <= set(pts)
    # every lattice point of the hull is a convex combination: recomputing the hull changes nothing
    inside = lattice_points(H.polyhedron, [(0, 3)] * 3)
    H2 = convex_hull(inside)
    assert H2.vertices == H.vertices


def test_compare_sets():
    c = compare_sets([(0, 1), (1, 0)], [(1, 0), (2, 0)])
    assert not c.equal and c.only_a == [(0, 1)] and c.only_b == [(2, 0)]
    assert compare_sets([(1,)], [(1,)]).equal
    with pytest.raises(ValueError):
        compare_sets([(1,)], [(1, 2)])


def test_find_permutation():
    A = [(1, 0, 0), (0, 2, 0)]
    B = [(0, 1, 0), (0, 0, 2)]
    perm = find_permutation(A, B)
    assert perm == (1, 2, 0)
    assert find_permutation(A, [(1, 1, 0), (0, 0, 0)]) is None


@pytest.mark.parametrize("rs,l,m", [(A2, (1, 0), (0, 1)), (A2, (1, 1), (1, 0)), (C2, (1, 0), (0, 1))])
def test_minkowski_superadditivity(rs, l, m):
    a = lattice_points(fflv_polytope(rs, l))
    b = lattice_points(fflv_polytope(rs, m))
    lm = set(lattice_points(fflv_polytope(rs, tuple(x + y for x, y in zip(l, m)))))
    assert all(tuple(x + y for x, y in zip(p, q)) in lm for p in a for q in b)
