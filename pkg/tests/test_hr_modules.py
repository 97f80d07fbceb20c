"""Tests for HR-modules: simples, sums, tensor products and W(P)."""

import unittest

from hypothesis import given, settings, strategies as st

import sys, os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
import polytope_corpus
from cih_engine import IntersectionCohomology
from exact_core import Mat
from hr_modules import (
    HRModule, PreconditionError, SimpleTag, decompose, direct_sum, format_tag, from_engine,
    is_hr_module, numerical_pd, simple_module, tensor,
)


def w_of(name):
    return from_engine(IntersectionCohomology(polytope_corpus.get(name)))


class TestSimpleModules(unittest.TestCase):

    # ── Test 1: A_m is an HR-module with one primitive class ──
    def test_simple(self):
        for m in range(5):
            w = simple_module(m)
            self.assertTrue(is_hr_module(w))
            self.assertEqual(decompose(w), SimpleTag({m: 1}))

    # ── Test 2: negative index ──
    def test_negative(self):
        with self.assertRaises(ValueError):
            simple_module(-1)

    # ── Test 3: wrong pairing sign breaks the HR property ──
    def test_wrong_sign(self):
        w = HRModule({-1: 1, 1: 1}, {1: Mat([[1]])}, {-1: Mat([[1]])})
        self.assertFalse(is_hr_module(w))
        with self.assertRaises(PreconditionError):
            decompose(w)


class TestValidation(unittest.TestCase):

    # ── Test 1: mixed parities ──
    def test_parity(self):
        with self.assertRaises(ValueError):
            HRModule({0: 1, 1: 1}, {0: Mat([[1]])}, {})

    # ── Test 2: degenerate pairing ──
    def test_degenerate(self):
        with self.assertRaises(ValueError):
            HRModule({-1: 1, 1: 1}, {1: Mat([[0]])}, {})

    # ── Test 3: L of the wrong shape ──
    def test_shape(self):
        with self.assertRaises(ValueError):
            HRModule({-1: 1, 1: 1}, {1: Mat([[-1]])}, {-1: Mat([[1, 0]])})

    # ── Test 4: L not self-adjoint ──
    def test_not_self_adjoint(self):
        dims = {-2: 1, 0: 1, 2: 1}
        pairing = {0: Mat([[-1]]), 2: Mat([[1]])}
        with self.assertRaises(ValueError):
            HRModule(dims, pairing, {-2: Mat([[1]]), 0: Mat([[2]])})


class TestAlgebra(unittest.TestCase):

    # ── Test 1: A_n ⊗ A_1 = A_{n+1} ⊕ A_{n-1} ──
    def test_times_a1(self):
        for n in range(1, 5):
            tag = decompose(tensor(simple_module(n), simple_module(1)))
            self.assertEqual(tag, SimpleTag({n + 1: 1, n - 1: 1}), n)

    @settings(max_examples=15, deadline=None)
    @given(st.integers(min_value=0, max_value=3), st.integers(min_value=0, max_value=3))
    def test_clebsch_gordan(self, m, n):
        tag = decompose(tensor(simple_module(m), simple_module(n)))
        expected = {m + n - 2 * j: 1 for j in range(min(m, n) + 1)}
        self.assertEqual(tag, SimpleTag(expected))

    # ── Test 2: direct sums ──
    def test_direct_sum(self):
        w = direct_sum(simple_module(2), simple_module(0))
        self.assertTrue(is_hr_module(w))
        self.assertEqual(decompose(w), SimpleTag({0: 1, 2: 1}))
        self.assertEqual(w.to_json()["dims"], {"-2": 1, "0": 2, "2": 1})
        with self.assertRaises(ValueError):
            direct_sum(simple_module(1), simple_module(0))

    # ── Test 3: numerical Poincaré duality ──
    def test_numerical_pd(self):
        w = simple_module(2)
        self.assertTrue(numerical_pd(w, {-2: [[1]], 0: [[1]], 2: [[1]]}))
        self.assertFalse(numerical_pd(w, {0: [[1]], 2: [[1]]}))
        with self.assertRaises(PreconditionError):
            numerical_pd(w, {-2: [[1]]})

    # ── Test 4: readable tags ──
    def test_format(self):
        self.assertEqual(format_tag(SimpleTag({3: 1, 1: 2})), "A_3 ⊕ 2·A_1")
        self.assertEqual(format_tag(SimpleTag()), "0")


class TestFromEngine(unittest.TestCase):

    # ── Test 1: simplices give simple modules ──
    def test_simplices(self):
        for n in range(1, 4):
            self.assertEqual(decompose(w_of(f"simplex{n}")), SimpleTag({n: 1}))

    # ── Test 2: segment ⊗ square = cube ──
    def test_kunneth_cube(self):
        product = tensor(w_of("segment"), w_of("square"))
        self.assertEqual(decompose(product), decompose(w_of("cube3")))
        self.assertEqual(decompose(w_of("cube3")), SimpleTag({3: 1, 1: 2}))

    # ── Test 3: square pyramid ──
    def test_square_pyramid(self):
        w = w_of("square_pyramid")
        self.assertTrue(is_hr_module(w))
        self.assertEqual(decompose(w), SimpleTag({3: 1, 1: 1}))


if __name__ == "__main__":
    unittest.main()
