"""Tests for the toric h-vector oracle."""

import unittest

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
import polytope_corpus
from hvector_oracle import HVec, check_h_properties, toric_h
from polytope_lattice import FaceLattice


class TestToricH(unittest.TestCase):

    # ── Test 1: simplices give all ones ──
    def test_simplices(self):
        for n in range(1, 5):
            self.assertEqual(toric_h(polytope_corpus.simplex(n)).h, (1,) * (n + 1))

    # ── Test 2: known polytopes ──
    def test_known(self):
        expected = {
            "cube3": (1, 3, 3, 1),
            "octahedron": (1, 5, 5, 1),
            "square_pyramid": (1, 2, 2, 1),
            "prism": (1, 2, 2, 1),
            "pyramid_over_cube": (1, 3, 3, 3, 1),
            "cube4": (1, 4, 6, 4, 1),
        }
        for name, h in expected.items():
            self.assertEqual(toric_h(polytope_corpus.get(name)).h, h, name)

    # ── Test 3: g-vector ──
    def test_g(self):
        self.assertEqual(toric_h(polytope_corpus.cube(3)).g, (1, 2))
        self.assertEqual(toric_h(polytope_corpus.cross_polytope(3)).g, (1, 4))

    # ── Test 4: accepts a lattice as well as a polytope ──
    def test_lattice_input(self):
        p = polytope_corpus.square_pyramid()
        self.assertEqual(toric_h(p.lattice), toric_h(p))
        self.assertEqual(toric_h(p).to_json(), {"h": [1, 2, 2, 1], "g": [1, 1]})

    # ── Test 5: non-Eulerian input ──
    def test_not_eulerian(self):
        dims = {frozenset(): -1, frozenset({0}): 0, frozenset({0, 1}): 1}
        with self.assertRaises(ValueError):
            toric_h(FaceLattice(dims))


class TestProperties(unittest.TestCase):

    # ── Test 1: good vector ──
    def test_ok(self):
        result = check_h_properties(HVec((1, 3, 3, 1), (1, 2)))
        self.assertTrue(result["ok"])
        self.assertIn("symmetric=yes", result["summary"])

    # ── Test 2: each property can fail on its own ──
    def test_failures(self):
        self.assertFalse(check_h_properties([1, 3, 1, 1])["symmetric"])
        self.assertFalse(check_h_properties([1, -1, 1])["nonnegative"])
        self.assertFalse(check_h_properties([1, 0, 1])["unimodal"])
        self.assertTrue(check_h_properties([1, 0, 1])["symmetric"])


if __name__ == "__main__":
    unittest.main()
