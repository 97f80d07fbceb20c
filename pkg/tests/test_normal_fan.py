"""Tests for outer normal fans, ψ and simplicial refinements."""

import unittest
from fractions import Fraction

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
import polytope_corpus
from normal_fan import ConewiseLinear, Fan, outer_normal_fan, probe_point, simplicial_refinement


class TestOuterNormalFan(unittest.TestCase):

    # ── Test 1: cube fan is complete, simplicial, ψ strictly convex ──
    def test_cube(self):
        fan, psi = outer_normal_fan(polytope_corpus.cube(3))
        self.assertEqual(len(fan.rays), 6)
        self.assertEqual(len(fan), 26)
        self.assertEqual(len(fan.max_cones), 8)
        self.assertTrue(fan.is_complete())
        self.assertTrue(fan.is_simplicial())
        self.assertTrue(psi.is_strictly_convex())

    # ── Test 2: cone dimension is n - dim of its face ──
    def test_cone_dims(self):
        p = polytope_corpus.square_pyramid()
        fan, _ = outer_normal_fan(p)
        for cone in fan.cones:
            self.assertEqual(cone.dim, 3 - p.lattice.dim_of(cone.face))
        self.assertFalse(fan.is_simplicial())

    # ── Test 3: ψ on a segment ──
    def test_segment_values(self):
        fan, psi = outer_normal_fan(polytope_corpus.segment())
        self.assertEqual(psi.value((2,)), 2)
        self.assertEqual(psi.value((-3,)), 0)
        self.assertEqual(sorted(psi.ray_values), [0, 1])
        self.assertEqual(len(psi.walls()), 1)

    # ── Test 4: square walls ──
    def test_square_walls(self):
        _, psi = outer_normal_fan(polytope_corpus.cube(2))
        self.assertEqual(len(psi.walls()), 4)

    # ── Test 5: translation shifts ψ by a global functional ──
    def test_translation(self):
        p = polytope_corpus.square_pyramid()
        fan, psi = outer_normal_fan(p)
        fan2, psi2 = outer_normal_fan(p.translated([1, "1/2", -2]))
        self.assertEqual(fan, fan2)
        self.assertEqual(psi.differs_by_global(psi2), (1, Fraction(1, 2), -2))

    # ── Test 6: points on a ray lie in several maximal cones ──
    def test_max_cones_containing(self):
        fan, _ = outer_normal_fan(polytope_corpus.cube(3))
        self.assertEqual(len(fan.max_cones_containing((0, 0, 1))), 4)
        self.assertEqual(len(fan.max_cones_containing(probe_point(3, 2))), 1)


class TestFan(unittest.TestCase):

    # ── Test 1: a quadrant is not complete ──
    def test_incomplete(self):
        fan = Fan(2, [(1, 0), (0, 1)], [[], [0], [1], [0, 1]])
        self.assertFalse(fan.is_complete())
        self.assertEqual(len(fan.boundary_subfan(frozenset(range(len(fan))))), 3)

    # ── Test 2: unknown ray and missing zero cone ──
    def test_invalid(self):
        with self.assertRaises(ValueError):
            Fan(1, [(1,)], [[], [3]])
        with self.assertRaises(ValueError):
            Fan(1, [(1,)], [[0]])

    # ── Test 3: missing and disagreeing functionals ──
    def test_conewise_validation(self):
        fan = Fan(1, [(1,), (-1,)], [[], [0], [1]])
        with self.assertRaises(ValueError):
            ConewiseLinear(fan, {fan.index([0]): (1,)})
        plane = Fan(2, [(1, 0), (0, 1), (-1, -1)], [[], [0], [1], [2], [0, 1], [1, 2], [0, 2]])
        with self.assertRaises(ValueError):
            ConewiseLinear(plane, {plane.index([0, 1]): (0, 0), plane.index([1, 2]): (1, 0),
                                   plane.index([0, 2]): (1, 1)})
        psi = ConewiseLinear(fan, {fan.index([0]): (1,), fan.index([1]): (0,)})
        self.assertTrue(psi.is_strictly_convex())

    # ── Test 4: star and subfans ──
    def test_star(self):
        fan, _ = outer_normal_fan(polytope_corpus.cube(2))
        ray_cone = fan.index([0])
        star = fan.star(ray_cone)
        self.assertEqual(sum(1 for i in star if fan.cones[i].dim == 2), 2)
        self.assertIn(fan.zero_cone, star)

    # ── Test 5: star and its complement meet along the star's boundary ──
    def test_complementary(self):
        fan, _ = outer_normal_fan(polytope_corpus.cube(2))
        star = fan.star(fan.index([0]))
        rest = fan.complementary_subfan(star)
        self.assertEqual(sum(1 for i in rest if fan.cones[i].dim == 2), 2)
        self.assertEqual(star & rest, fan.boundary_subfan(star))
        self.assertEqual(len(star | rest), len(fan))
        quadrant = Fan(2, [(1, 0), (0, 1)], [[], [0], [1], [0, 1]])
        with self.assertRaises(ValueError):
            quadrant.complementary_subfan(frozenset())


class TestRefinement(unittest.TestCase):

    # ── Test 1: simplicial fans are their own refinement ──
    def test_identity(self):
        fan, _ = outer_normal_fan(polytope_corpus.cube(3))
        self.assertTrue(simplicial_refinement(fan).is_identity())

    # ── Test 2: square pyramid apex cone splits in two ──
    def test_square_pyramid(self):
        fan, _ = outer_normal_fan(polytope_corpus.square_pyramid())
        ref = simplicial_refinement(fan)
        self.assertEqual(len(ref.max_cones), 6)
        self.assertFalse(ref.is_identity())

    # ── Test 3: octahedron ──
    def test_octahedron(self):
        fan, _ = outer_normal_fan(polytope_corpus.cross_polytope(3))
        ref = simplicial_refinement(fan)
        self.assertEqual(len(ref.max_cones), 12)
        for s in ref.max_cones:
            self.assertEqual(fan.cones[ref.carrier[s]].dim, 3)

    # ── Test 4: a different pulling order gives another triangulation ──
    def test_ray_order(self):
        fan, _ = outer_normal_fan(polytope_corpus.square_pyramid())
        order = [2, 0, 1, 3, 4]
        a = simplicial_refinement(fan)
        b = simplicial_refinement(fan, ray_order=order)
        self.assertEqual(len(a.max_cones), len(b.max_cones))
        self.assertNotEqual(set(a.max_cones), set(b.max_cones))


if __name__ == "__main__":
    unittest.main()
