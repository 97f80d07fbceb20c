"""Tests for polytopes, facets and face lattices."""

import unittest
from fractions import Fraction

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
import polytope_corpus
from polytope_lattice import (
    DegenerateInputError, FaceLattice, Polytope, combinatorially_equivalent, face_polytope,
    facets_from_vertices, is_simple, polytope_id, vertices_from_halfspaces,
)


class TestPolytope(unittest.TestCase):

    # ── Test 1: cube facets ──
    def test_cube_facets(self):
        cube = polytope_corpus.cube(3)
        self.assertEqual(len(cube.facets), 6)
        for h, tight in zip(cube.facets, cube.facet_vertex_sets):
            self.assertEqual(len(tight), 4)
            for i, v in enumerate(cube.vertices):
                self.assertTrue(h.contains(v))
                self.assertEqual(h.slack(v) == 0, i in tight)

    # ── Test 2: interior point rejected ──
    def test_non_vertex(self):
        with self.assertRaises(DegenerateInputError):
            Polytope([[0, 0], [2, 0], [0, 2], [2, 2], [1, 1]])

    # ── Test 3: duplicates dropped ──
    def test_duplicates(self):
        p = Polytope([[0], [1], [0]])
        self.assertEqual(len(p.vertices), 2)

    # ── Test 4: a single point spans no hyperplane ──
    def test_point_facets(self):
        with self.assertRaises(DegenerateInputError):
            facets_from_vertices(polytope_corpus.point())

    # ── Test 5: mismatched coordinates ──
    def test_bad_coordinates(self):
        with self.assertRaises(DegenerateInputError):
            Polytope([[0, 0], [1]])

    # ── Test 6: lower-dimensional polytope gets an exact chart ──
    def test_chart(self):
        tri = Polytope([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        self.assertEqual(tri.dim, 2)
        self.assertFalse(tri.is_full_dimensional)
        full = tri.to_full_dimensional()
        self.assertEqual(full.ambient_dim, 2)
        self.assertEqual(full.lattice.f_vector, (3, 3))
        self.assertEqual(len(tri.facets), 3)

    # ── Test 7: JSON round trip and stable id ──
    def test_json(self):
        p = Polytope([["1/2", 0], [1, 0], [0, 1]], name="tri")
        q = Polytope.from_json(p.to_json())
        self.assertEqual(p, q)
        self.assertEqual(polytope_id(p), polytope_id(q))
        self.assertEqual(p.vertices[0][0], Fraction(1, 2))
        with self.assertRaises(ValueError):
            Polytope.from_json({"dim": 2, "vertices": [[0, 0]], "colour": "red"})

    # ── Test 8: face extraction ──
    def test_face_polytope(self):
        cube = polytope_corpus.cube(3)
        facet = cube.facet_vertex_sets[0]
        square = face_polytope(cube, facet)
        self.assertEqual(square.dim, 2)
        with self.assertRaises(ValueError):
            face_polytope(cube, {0, 7})


class TestHalfspaces(unittest.TestCase):

    # ── Test 1: square from four inequalities ──
    def test_square(self):
        verts = vertices_from_halfspaces([[1, 0], [-1, 0], [0, 1], [0, -1]], [1, 0, 1, 0], 2)
        self.assertEqual(sorted(verts), [(0, 0), (0, 1), (1, 0), (1, 1)])

    # ── Test 2: infeasible system ──
    def test_infeasible(self):
        self.assertEqual(vertices_from_halfspaces([[1], [-1]], [0, -1], 1), [])


class TestFaceLattice(unittest.TestCase):

    # ── Test 1: f-vectors of corpus polytopes ──
    def test_f_vectors(self):
        expected = {
            "simplex3": (4, 6, 4),
            "cube3": (8, 12, 6),
            "octahedron": (6, 12, 8),
            "square_pyramid": (5, 8, 5),
            "cube4": (16, 32, 24, 8),
        }
        for name, f in expected.items():
            self.assertEqual(polytope_corpus.get(name).lattice.f_vector, f, name)

    # ── Test 2: Eulerian and Euler characteristic ──
    def test_eulerian(self):
        for name in ("simplex3", "square_pyramid", "octahedron"):
            lattice = polytope_corpus.get(name).lattice
            self.assertTrue(lattice.is_eulerian(), name)
            self.assertEqual(lattice.euler_characteristic(), 1 - (-1) ** lattice.dim)

    # ── Test 3: a non-Eulerian poset is detected ──
    def test_not_eulerian(self):
        dims = {frozenset(): -1, frozenset({0}): 0, frozenset({0, 1}): 1}
        self.assertFalse(FaceLattice(dims).is_eulerian())

    # ── Test 4: simplicity ──
    def test_simple(self):
        self.assertTrue(is_simple(polytope_corpus.cube(3)))
        self.assertTrue(is_simple(polytope_corpus.prism()))
        self.assertFalse(is_simple(polytope_corpus.square_pyramid()))
        self.assertFalse(is_simple(polytope_corpus.cross_polytope(3)))

    # ── Test 5: meet, join and intervals ──
    def test_meet_join(self):
        lattice = polytope_corpus.square_pyramid().lattice
        apex = frozenset({4})
        edge = frozenset({0, 4})
        self.assertIn(edge, lattice.upper_covers(apex))
        self.assertEqual(lattice.meet(edge, frozenset({1, 4})), apex)
        self.assertEqual(lattice.dim_of(lattice.join(frozenset({0}), frozenset({3}))), 2)
        self.assertEqual(len(lattice.interval(apex, lattice.top)), 10)

    # ── Test 6: JSON round trip ──
    def test_json(self):
        lattice = polytope_corpus.cube(3).lattice
        again = FaceLattice.from_json(lattice.to_json())
        self.assertEqual(again.faces, lattice.faces)
        self.assertIn("f-vector", lattice.summary())


class TestEquivalence(unittest.TestCase):

    # ── Test 1: square prism is a combinatorial cube ──
    def test_prism_is_cube(self):
        bijection = combinatorially_equivalent(polytope_corpus.square_prism(),
                                               polytope_corpus.cube(3))
        self.assertIsNotNone(bijection)
        self.assertEqual(len(bijection), len(polytope_corpus.cube(3).lattice))

    # ── Test 2: prism versus square pyramid ──
    def test_different(self):
        a = polytope_corpus.prism()
        b = polytope_corpus.square_pyramid()
        self.assertIsNone(combinatorially_equivalent(a, b))

    # ── Test 3: invariant under affine maps ──
    def test_affine_image(self):
        p = polytope_corpus.square_pyramid()
        q = p.transformed([[2, 1, 0], [0, 1, 0], [0, 0, 3]], shift=[1, 1, 1])
        self.assertIsNotNone(combinatorially_equivalent(p, q))


if __name__ == "__main__":
    unittest.main()
