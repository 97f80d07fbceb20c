"""Tests for exact rational linear algebra."""

import unittest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
from exact_core import (
    CoordinateSolver, Mat, Signature, determinant, hstack, independent_columns, inverse,
    kernel_basis, kron, left_kernel_basis, primitive_integer_vector, rank, rat, rat_to_str,
    rref, signature_of, solve, solve_unique,
)

small = st.integers(min_value=-4, max_value=4)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows).map(lambda r: Mat(r, cols=cols))


class TestScalars(unittest.TestCase):

    # ── Test 1: strings, ints and fractions coerce; floats do not ──
    def test_rat(self):
        self.assertEqual(rat("-2/6"), Fraction(-1, 3))
        self.assertEqual(rat(5), Fraction(5))
        with self.assertRaises(ValueError):
            rat(0.5)
        with self.assertRaises(ValueError):
            rat("one half")
        with self.assertRaises(ValueError):
            rat(True)

    # ── Test 2: serialization ──
    def test_rat_to_str(self):
        self.assertEqual(rat_to_str(Fraction(4, 2)), "2")
        self.assertEqual(rat_to_str(Fraction(-3, 4)), "-3/4")

    # ── Test 3: primitive ray generator ──
    def test_primitive_integer_vector(self):
        self.assertEqual(primitive_integer_vector(["1/2", "-3/4", 0]), (2, -3, 0))
        self.assertEqual(primitive_integer_vector([4, 6]), (2, 3))
        with self.assertRaises(ValueError):
            primitive_integer_vector([0, 0])


class TestMat(unittest.TestCase):

    # ── Test 1: ragged input rejected ──
    def test_ragged(self):
        with self.assertRaises(ValueError):
            Mat([[1, 2], [3]])

    # ── Test 2: empty shapes keep their column count ──
    def test_empty_shapes(self):
        m = Mat([], cols=3)
        self.assertEqual(m.shape, (0, 3))
        self.assertEqual(Mat.from_columns([], 2).shape, (2, 0))
        self.assertEqual((Mat.zeros(2, 0) @ Mat.zeros(0, 3)).shape, (2, 3))

    # ── Test 3: products stay exact ──
    def test_exact_product(self):
        a = Mat([["1/3", 0], [0, "1/2"]])
        b = Mat([[3, 1], [2, 2]])
        self.assertEqual((a @ b).tolist(), [[1, Fraction(1, 3)], [1, 1]])
        self.assertEqual(a @ [3, 2], [1, 1])

    # ── Test 4: shape mismatch ──
    def test_shape_mismatch(self):
        with self.assertRaises(ValueError):
            Mat([[1, 2]]) @ Mat([[1, 2]])

    # ── Test 5: Kronecker block layout ──
    def test_kron(self):
        k = kron(Mat([[1, 2]]), Mat([[0, 1], [1, 0]]))
        self.assertEqual(k.tolist(), [[0, 1, 0, 2], [1, 0, 2, 0]])

    # ── Test 6: hstack of nothing ──
    def test_hstack_empty(self):
        self.assertEqual(hstack([], rows=3).shape, (3, 0))


class TestSolvers(unittest.TestCase):

    # ── Test 1: rank, rref pivots ──
    def test_rank_rref(self):
        m = Mat([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
        self.assertEqual(rank(m), 2)
        _, pivots = rref(m)
        self.assertEqual(pivots, (0, 1))
        self.assertEqual(independent_columns(m), [0, 1])

    # ── Test 2: inconsistent systems give None ──
    def test_solve_inconsistent(self):
        m = Mat([[1, 1], [1, 1]])
        self.assertIsNone(solve(m, [1, 2]))
        self.assertEqual(solve(m, [2, 2]), [2, 0])
        self.assertIsNone(solve_unique(m, [2, 2]))

    # ── Test 3: inverse and determinant ──
    def test_inverse_det(self):
        m = Mat([[2, 1], [1, 1]])
        self.assertEqual(inverse(m) @ m, Mat.identity(2))
        self.assertEqual(determinant(m), 1)
        with self.assertRaises(ValueError):
            inverse(Mat([[1, 2], [2, 4]]))

    # ── Test 4: coordinates in a subspace ──
    def test_coordinate_solver(self):
        basis = Mat.from_columns([[1, 0, 1], [0, 1, 1]], 3)
        solver = CoordinateSolver(basis)
        self.assertEqual(solver.coordinates([2, 3, 5]), [2, 3])
        with self.assertRaises(ValueError):
            solver.coordinates([1, 0, 0])

    # ── Test 5: left kernel ──
    def test_left_kernel(self):
        m = Mat([[1, 2], [2, 4]])
        (y,) = left_kernel_basis(m)
        self.assertTrue(all(v == 0 for v in m.T @ y))

    @settings(max_examples=40, deadline=None)
    @given(matrices(3, 4))
    def test_kernel_annihilated(self, m):
        basis = kernel_basis(m)
        self.assertEqual(len(basis), m.cols - rank(m))
        for v in basis:
            self.assertTrue(all(x == 0 for x in m @ v))

    @settings(max_examples=40, deadline=None)
    @given(matrices(3, 3), st.lists(small, min_size=3, max_size=3))
    def test_solve_round_trip(self, m, x):
        b = m @ x
        sol = solve(m, b)
        self.assertIsNotNone(sol)
        self.assertEqual(m @ sol, b)


class TestSignature(unittest.TestCase):

    # ── Test 1: diagonal forms ──
    def test_diagonal(self):
        sig = signature_of(Mat([[2, 0, 0], [0, -1, 0], [0, 0, 0]]))
        self.assertEqual(sig, Signature(1, 1, 1))
        self.assertEqual(sig.sign, 0)
        self.assertFalse(sig.is_definite(1))

    # ── Test 2: zero diagonal, hyperbolic block ──
    def test_hyperbolic(self):
        self.assertEqual(signature_of(Mat([[0, 1], [1, 0]])).as_list(), [1, 1, 0])

    # ── Test 3: non-symmetric input rejected ──
    def test_not_symmetric(self):
        with self.assertRaises(ValueError):
            signature_of(Mat([[1, 2], [0, 1]]))

    # ── Test 4: negative definite ──
    def test_definite(self):
        sig = signature_of(Mat([[-2, 1], [1, -2]]))
        self.assertTrue(sig.is_definite(-1))
        self.assertEqual(sig.dim, 2)

    @settings(max_examples=40, deadline=None)
    @given(matrices(3, 3), matrices(3, 3))
    def test_sylvester_law(self, a, c):
        sym = a + a.T
        if rank(c) < 3:
            return
        self.assertEqual(signature_of(c.T @ sym @ c), signature_of(sym))

    @settings(max_examples=40, deadline=None)
    @given(matrices(3, 3))
    def test_nullity_is_corank(self, a):
        sym = a + a.T
        self.assertEqual(signature_of(sym).zero, 3 - rank(sym))


if __name__ == "__main__":
    unittest.main()
