"""Tests for joins, cuts, germs, links, stoutness and the deformation family."""

import unittest

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
import polytope_corpus
from polytope_lattice import Halfspace, Polytope, combinatorially_equivalent, is_simple
from surgery import (
    NonTransversalCutError, PreconditionError, cutoff_pipeline, deformation_family,
    germ_facets_meeting_face, germ_link_residual, is_join, is_normally_trivial, is_stout,
    join, link_lattice, nearby_cut_hyperplane, normally_stout_report, polytope_section,
    product, pyramid, stout_factorization, transversal_cut,
)

CUBE_EDGE = {0, 4}      # (0,0,0)-(1,0,0) in corpus vertex order
APEX = {4}


def equivalent(a, b):
    return combinatorially_equivalent(a, b) is not None


class TestConstructions(unittest.TestCase):

    # ── Test 1: join of two skew segments is a tetrahedron ──
    def test_join_auto(self):
        seg = polytope_corpus.segment()
        self.assertTrue(equivalent(join(seg, seg, auto_position=True), polytope_corpus.simplex(3)))

    # ── Test 2: collinear segments are not skew ──
    def test_join_not_skew(self):
        a = Polytope([[0, 0], [1, 0]])
        b = Polytope([[2, 0], [3, 0]])
        with self.assertRaises(PreconditionError):
            join(a, b)

    # ── Test 3: pyramid and product ──
    def test_pyramid_product(self):
        self.assertTrue(equivalent(pyramid(polytope_corpus.cube(2)), polytope_corpus.square_pyramid()))
        seg = polytope_corpus.segment()
        self.assertTrue(equivalent(product(seg, seg), polytope_corpus.cube(2)))
        self.assertEqual(product(polytope_corpus.simplex(2), seg).lattice.f_vector, (6, 9, 5))


class TestCuts(unittest.TestCase):

    # ── Test 1: cube cut in half ──
    def test_cube_half(self):
        cut = transversal_cut(polytope_corpus.cube(3), Halfspace((0, 0, 1), "1/2"))
        self.assertTrue(equivalent(cut.piece1, polytope_corpus.cube(3)))
        self.assertTrue(equivalent(cut.piece2, polytope_corpus.cube(3)))
        self.assertEqual(cut.cut_facet.dim, 2)
        self.assertEqual(len(cut.cut_facet.vertices), 4)

    # ── Test 2: hyperplane through vertices ──
    def test_through_vertex(self):
        with self.assertRaises(NonTransversalCutError):
            transversal_cut(polytope_corpus.cube(3), Halfspace((0, 0, 1), 1))

    # ── Test 3: hyperplane missing the interior ──
    def test_missing(self):
        with self.assertRaises(NonTransversalCutError):
            transversal_cut(polytope_corpus.cube(3), Halfspace((0, 0, 1), 2))

    # ── Test 4: nearby hyperplane isolates exactly the face ──
    def test_nearby(self):
        cube = polytope_corpus.cube(3)
        h = nearby_cut_hyperplane(cube, CUBE_EDGE)
        outside = {i for i, v in enumerate(cube.vertices) if h.slack(v) > 0}
        self.assertEqual(outside, CUBE_EDGE)

    # ── Test 5: section of a cube ──
    def test_section(self):
        square = polytope_section(polytope_corpus.cube(3), [[0, 0, 1]], ["1/2"])
        self.assertTrue(equivalent(square, polytope_corpus.cube(2)))
        with self.assertRaises(PreconditionError):
            polytope_section(polytope_corpus.cube(3), [[0, 0, 1]], [5])


class TestGermLink(unittest.TestCase):

    # ── Test 1: apex of the square pyramid ──
    def test_apex(self):
        gl = germ_link_residual(polytope_corpus.square_pyramid(), APEX)
        self.assertTrue(equivalent(gl.link, polytope_corpus.cube(2)))
        self.assertTrue(equivalent(gl.germ, polytope_corpus.square_pyramid()))
        self.assertTrue(equivalent(gl.residual, polytope_corpus.cube(3)))
        self.assertTrue(equivalent(gl.germ, pyramid(gl.link)))

    # ── Test 2: edge of the cube ──
    def test_cube_edge(self):
        gl = germ_link_residual(polytope_corpus.cube(3), CUBE_EDGE)
        self.assertEqual(gl.link.dim, 1)
        self.assertTrue(equivalent(gl.germ, polytope_corpus.prism()))

    # ── Test 3: improper faces rejected ──
    def test_improper(self):
        cube = polytope_corpus.cube(3)
        with self.assertRaises(PreconditionError):
            germ_link_residual(cube, range(8))
        with self.assertRaises(PreconditionError):
            germ_link_residual(cube, {0, 7})

    # ── Test 4: combinatorial link agrees with the geometric one ──
    def test_link_lattice(self):
        p = polytope_corpus.square_pyramid()
        link = link_lattice(p.lattice, APEX)
        self.assertEqual(link.f_vector, (4, 4))
        self.assertTrue(equivalent(link, germ_link_residual(p, APEX).link))


class TestStoutness(unittest.TestCase):

    # ── Test 1: stout and not stout ──
    def test_is_stout(self):
        self.assertTrue(is_stout(polytope_corpus.cube(2)))
        self.assertTrue(is_stout(polytope_corpus.cross_polytope(3)))
        self.assertFalse(is_stout(polytope_corpus.simplex(2)))
        self.assertFalse(is_stout(polytope_corpus.square_pyramid()))

    # ── Test 2: square pyramid = square * point ──
    def test_factorization(self):
        lattice = polytope_corpus.square_pyramid().lattice
        fac = stout_factorization(lattice)
        self.assertEqual(fac.base, frozenset({0, 1, 2, 3}))
        self.assertEqual(fac.codim, 1)
        self.assertTrue(fac.join_verified)
        self.assertTrue(is_join(lattice, fac.base, fac.complement))

    # ── Test 3: simplices use the empty-base convention ──
    def test_simplex_factorization(self):
        fac = stout_factorization(polytope_corpus.simplex(3))
        self.assertTrue(fac.simplex_convention)
        self.assertEqual(fac.codim, 4)

    # ── Test 4: defect ──
    def test_defect(self):
        self.assertEqual(normally_stout_report(polytope_corpus.cube(3)).defect, 0)
        report = normally_stout_report(polytope_corpus.square_pyramid())
        self.assertEqual(report.defect, 1)
        self.assertEqual(report.minimal_ns_face, frozenset(APEX))
        self.assertEqual(normally_stout_report(polytope_corpus.cross_polytope(3)).defect, 6)

    # ── Test 5: normally stout faces have codimension at least 3 ──
    def test_codim(self):
        for name in ("square_pyramid", "octahedron", "pyramid_over_cube"):
            p = polytope_corpus.get(name)
            for f in normally_stout_report(p).normally_stout_faces:
                self.assertGreaterEqual(p.dim - p.lattice.dim_of(f), 3, name)

    # ── Test 6: minimal normally stout face is normally trivial ──
    def test_normally_trivial(self):
        p = polytope_corpus.square_pyramid()
        self.assertTrue(is_normally_trivial(p, APEX))
        self.assertTrue(is_normally_trivial(polytope_corpus.cube(3), CUBE_EDGE))

    # ── Test 7: cutting off the apex ──
    def test_cutoff(self):
        steps = cutoff_pipeline(polytope_corpus.square_pyramid())
        self.assertEqual(len(steps), 1)
        self.assertEqual((steps[0].mu_before, steps[0].mu_after), (1, 0))
        self.assertTrue(is_simple(steps[0].residual))
        self.assertTrue(equivalent(steps[0].residual, polytope_corpus.cube(3)))
        self.assertEqual(cutoff_pipeline(polytope_corpus.cube(3)), [])

    # ── Test 8: every non-simple corpus polytope reaches a simple one in μ cuts ──
    def test_cutoff_traces(self):
        expected = {"square_pyramid": 1, "octahedron": 6, "pyramid_over_cube": 1,
                    "pyramid_over_square_pyramid": 1}
        for name, mu in expected.items():
            p = polytope_corpus.get(name)
            self.assertEqual(normally_stout_report(p).defect, mu, name)
            steps = cutoff_pipeline(p)
            self.assertEqual(len(steps), mu, name)
            self.assertEqual([(s.mu_before, s.mu_after) for s in steps],
                             [(m, m - 1) for m in range(mu, 0, -1)], name)
            self.assertTrue(is_simple(steps[-1].residual), name)
            self.assertFalse(any(is_simple(s.residual) for s in steps[:-1]), name)


class TestDeformation(unittest.TestCase):

    # ── Test 1: cube edge germ keeps its type for every t ──
    def test_cube_edge_family(self):
        cube = polytope_corpus.cube(3)
        for t in ("0", "1/4", "1/2", "1"):
            self.assertTrue(equivalent(deformation_family(cube, CUBE_EDGE, t), polytope_corpus.prism()), t)

    # ── Test 2: t outside [0, 1] ──
    def test_bad_t(self):
        with self.assertRaises(PreconditionError):
            deformation_family(polytope_corpus.cube(3), CUBE_EDGE, 2)

    # ── Test 3: the family at t = 1 is the germ ──
    def test_t_one_is_germ(self):
        p = polytope_corpus.square_pyramid()
        gl = germ_link_residual(p, APEX)
        self.assertTrue(equivalent(deformation_family(p, APEX, 1), gl.germ))

    # ── Test 4: germ facets meeting the face ──
    def test_germ_facets(self):
        cube = polytope_corpus.cube(3)
        gl = germ_link_residual(cube, CUBE_EDGE)
        idx, facets = germ_facets_meeting_face(gl.germ, {cube.vertices[i] for i in CUBE_EDGE})
        self.assertEqual(len(idx), 2)
        self.assertEqual(len(facets), 2)


if __name__ == "__main__":
    unittest.main()
