"""
Combinatorial intersection cohomology of a polytope's outer normal fan.

Sections of the minimal extension sheaf are realised inside the conewise
polynomial functions on a simplicial refinement Σ that uses the same rays.
On a simplicial complex of cones those functions form the face ring: a
monomial is a sorted tuple of ray indices (repetitions allowed) whose
support is a Σ-cone, and x_i is the conewise linear function that is 1 on
ray i and 0 on every other ray.  Restricting to a subcomplex drops the
monomials supported outside it; extending by zero keeps them.

Degrees in this module are polynomial degrees d; the cohomological degree
is q = 2d.  A polytope of dimension n has IH in q = 0, 2, ..., 2n.
"""

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement

from scipy.spatial import ConvexHull

from exact_core import (
    CoordinateSolver,
    Mat,
    Signature,
    determinant,
    hstack,
    independent_columns,
    kernel_basis,
    left_kernel_basis,
    matrix_power_chain,
    rank,
    rat_to_str,
    signature_of,
)
from normal_fan import outer_normal_fan, probe_point, simplicial_refinement
from polytope_lattice import polytope_id

logger = logging.getLogger(__name__)

MAX_PROBES = 1000


class SheafConstructionError(RuntimeError):
    """A sheaf stalk failed to come out free of the expected rank."""


# ======================================================================
# Face-ring arithmetic
# ======================================================================
class Monomials:
    """Coordinates on the degree-d conewise polynomials over a set of Σ-cones."""

    def __init__(self, cells, degree):
        found = set()
        for s in cells:
            if len(s) > degree:
                continue
            base = tuple(sorted(s))
            for extra in combinations_with_replacement(base, degree - len(s)):
                found.add(tuple(sorted(base + extra)))
        self.degree = degree
        self.basis = sorted(found)
        self.index = {m: i for i, m in enumerate(self.basis)}

    def __len__(self):
        return len(self.basis)

    def vector(self, poly, strict=False):
        """Coefficient vector; monomials outside the space are dropped (restriction)."""
        vec = [Fraction(0)] * len(self.basis)
        for m, c in poly.items():
            i = self.index.get(m)
            if i is None:
                if strict and c:
                    raise SheafConstructionError(f"Monomial {m} lies outside the complex.")
                continue
            vec[i] += c
        return vec

    def poly(self, vec):
        return {m: c for m, c in zip(self.basis, vec) if c}


def multiply(p, q, cells):
    """Product in the face ring of the complex ``cells``."""
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2))
            if frozenset(m) in cells:
                out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def times_linear(p, ray_values, cells):
    """Multiply by the conewise linear function with the given values on the rays."""
    linear = {(i,): Fraction(v) for i, v in enumerate(ray_values) if v}
    return multiply(p, linear, cells)


def _column_basis(vectors, length):
    if not vectors or length == 0:
        return []
    keep = independent_columns(Mat.from_columns(vectors, length))
    return [vectors[j] for j in keep]


def _complement(spanning, vectors, length):
    """First-come members of ``vectors`` completing ``spanning`` to a basis of their sum."""
    if not vectors or length == 0:
        return []
    pivots = independent_columns(Mat.from_columns(list(spanning) + list(vectors), length))
    return [vectors[j - len(spanning)] for j in pivots if j >= len(spanning)]


# ======================================================================
# Sheaf
# ======================================================================
class SheafModel:
    """
    Minimal extension sheaf on a fan Δ, realised over a refinement Σ.

    For a simplicial cone the stalk is the structure sheaf with generator 1.
    For a non-simplicial cone σ, in each degree d: sections over ∂σ are the
    conewise polynomials on Σ|∂σ satisfying the stalk constraints of the
    non-simplicial faces; a basis of sections modulo 𝔪 is lifted and
    extended by zero to Σ|σ.  The stalk E_σ^d is then stored through its
    annihilator in the degree-d conewise polynomials on Σ|σ.

    Args:
        fan: Fan
        refinement: Refinement of the fan
        max_degree: highest polynomial degree to build (default n)
    """

    def __init__(self, fan, refinement, max_degree=None):
        self.fan = fan
        self.refinement = refinement
        self.n = fan.ambient_dim
        self.max_degree = self.n if max_degree is None else min(max_degree, self.n)
        if self.max_degree < 0:
            raise ValueError(f"max_degree must be non-negative, got {max_degree}.")
        self.coordinate_forms = [[r[k] for r in fan.rays] for k in range(self.n)]
        self.cells_of = {ci: refinement.cells_over(fan.faces_of(ci))
                         for ci in range(len(fan.cones))}
        self.generators = {}
        self.constraints = {}
        self.singular_cones = [ci for ci, c in enumerate(fan.cones) if not c.is_simplicial]
        self._build()

    def _sections(self, cells, degree, cones):
        """Basis of degree-d sections over ``cells`` under the stalk constraints of ``cones``."""
        space = Monomials(cells, degree)
        rows = [space.vector(row, strict=True)
                for ci in cones for row in self.constraints[ci].get(degree, [])]
        if rows:
            basis = kernel_basis(Mat(rows, cols=len(space)))
        else:
            basis = Mat.identity(len(space)).columns()
        return space, basis

    def _times_coordinates(self, cells, space, previous):
        """Vectors x_k · f for f in the previous degree's basis."""
        if previous is None:
            return []
        prev_space, prev_basis = previous
        out = []
        for vec in prev_basis:
            f = prev_space.poly(vec)
            for form in self.coordinate_forms:
                out.append(space.vector(times_linear(f, form, cells), strict=True))
        return out

    def _build(self):
        for ci, cone in enumerate(self.fan.cones):
            if cone.is_simplicial:
                self.generators[ci] = [(0, {(): Fraction(1)})]
                self.constraints[ci] = {}
                continue
            self._build_singular(ci)

    def _build_singular(self, ci):
        cone = self.fan.cones[ci]
        boundary = self.fan.boundary(ci)
        boundary_cones = [t for t in self.singular_cones if t in boundary]
        k_bd = self.refinement.cells_over(boundary)
        k_sigma = self.cells_of[ci]
        gens, constraints = [], {}
        prev_bd = prev_sigma = None
        for d in range(self.max_degree + 1):
            space_bd, basis_bd = self._sections(k_bd, d, boundary_cones)
            multiples = _column_basis(self._times_coordinates(k_bd, space_bd, prev_bd), len(space_bd))
            lifts = _complement(multiples, basis_bd, len(space_bd))
            new = [(d, space_bd.poly(v)) for v in lifts]
            gens.extend(new)

            space = Monomials(k_sigma, d)
            vectors = [space.vector(p, strict=True) for _, p in new]
            vectors += self._times_coordinates(k_sigma, space, prev_sigma)
            basis = _column_basis(vectors, len(space))
            expected = sum(math.comb(cone.dim - 1 + d - e, d - e) for e, _ in gens)
            if len(basis) != expected:
                raise SheafConstructionError(
                    f"Stalk at cone {sorted(cone.rays)} has dimension {len(basis)} in "
                    f"degree {2 * d}, expected {expected} for a free module."
                )
            b_mat = Mat.from_columns(basis, len(space)) if basis else Mat.zeros(len(space), 0)
            constraints[d] = [space.poly(y) for y in left_kernel_basis(b_mat)] if len(space) else []
            logger.debug("cone %s degree %d: boundary sections %d, new generators %d, "
                         "stalk %d of %d", sorted(cone.rays), 2 * d, len(basis_bd),
                         len(new), len(basis), len(space))
            prev_bd = (space_bd, basis_bd)
            prev_sigma = (space, basis)
        self.generators[ci] = gens
        self.constraints[ci] = constraints

    def rank(self, ci):
        return len(self.generators[ci])

    def generator_degrees(self, ci):
        """Cohomological degrees of the free generators of E_σ."""
        return [2 * d for d, _ in self.generators[ci]]

    def global_sections(self, degree):
        """(Monomials, basis vectors) of E_Δ in the given polynomial degree."""
        return self._sections(self.refinement.cone_set, degree, self.singular_cones)

    def to_json(self):
        return {
            "max_degree": 2 * self.max_degree,
            "cones": [
                {"rays": sorted(self.fan.cones[ci].rays),
                 "rank": self.rank(ci),
                 "generator_degrees": self.generator_degrees(ci)}
                for ci in range(len(self.fan.cones))
            ],
        }


def build_sheaf(fan, refinement, max_degree=None):
    return SheafModel(fan, refinement, max_degree)


# ======================================================================
# Global sections modulo 𝔪
# ======================================================================
@dataclass
class _Degree:
    space: Monomials
    basis: list
    multiples: list
    lifts: list
    solver: CoordinateSolver = None

    def ih_coordinates(self, vec):
        if not self.lifts:
            return []
        coords = self.solver.coordinates(vec)
        return coords[len(self.multiples):]


class GlobalSections:
    """Per-degree sections E_Δ^d, the subspace 𝔪E_Δ^d and lifts of an IH basis."""

    def __init__(self, sheaf):
        self.sheaf = sheaf
        self.n = sheaf.n
        self._degrees = {}

    def degree(self, d):
        if d < 0 or d > self.sheaf.max_degree:
            return None
        if d not in self._degrees:
            space, basis = self.sheaf.global_sections(d)
            previous = self.degree(d - 1)
            prev = (previous.space, previous.basis) if previous else None
            cells = self.sheaf.refinement.cone_set
            multiples = _column_basis(self.sheaf._times_coordinates(cells, space, prev), len(space))
            lifts = _complement(multiples, basis, len(space))
            solver = None
            if lifts:
                solver = CoordinateSolver(Mat.from_columns(multiples + lifts, len(space)))
            self._degrees[d] = _Degree(space, basis, multiples, lifts, solver)
            logger.debug("degree %d: sections %d, m-multiples %d, IH %d",
                         2 * d, len(basis), len(multiples), len(lifts))
        return self._degrees[d]

    def betti(self):
        """dim IH in polynomial degrees 0..max_degree."""
        return [len(self.degree(d).lifts) for d in range(self.sheaf.max_degree + 1)]


def ih_betti(sheaf):
    """b_0..b_{2n}: IH Betti numbers by cohomological degree (odd ones are 0)."""
    poly = GlobalSections(sheaf).betti()
    out = [0] * (2 * sheaf.n + 1)
    for d, b in enumerate(poly):
        out[2 * d] = b
    return out


# ======================================================================
# Intersection cohomology of a polytope
# ======================================================================
@dataclass
class HRFormData:
    k: int
    gram: Mat
    primitive: list
    signature: Signature
    primitive_signature: Signature


class IntersectionCohomology:
    """
    IH of the outer normal fan of a polytope with its Lefschetz operator
    and intersection pairing.

    Args:
        polytope: Polytope (any ambient space; its affine hull is used)
        ray_order: optional pulling order for the simplicial refinement
        max_degree: optional polynomial-degree truncation (default n)
    """

    def __init__(self, polytope, ray_order=None, max_degree=None):
        self.polytope = polytope
        self.fan, self.psi = outer_normal_fan(polytope)
        self.n = self.fan.ambient_dim
        self.refinement = simplicial_refinement(self.fan, ray_order)
        self.sheaf = build_sheaf(self.fan, self.refinement, max_degree)
        self.sections = GlobalSections(self.sheaf)
        self.cells = self.refinement.cone_set
        self.psi_values = self.psi.ray_values
        self._eval_cache = None
        self._lefschetz_cache = {}
        logger.debug("IH engine for %r: %d singular cones", polytope, len(self.sheaf.singular_cones))

    # ── basics ──
    @cached_property
    def betti_by_degree(self):
        """dim IH^{2d} for d = 0..n (0 beyond a truncation)."""
        poly = self.sections.betti()
        return poly + [0] * (self.n + 1 - len(poly))

    @property
    def betti(self):
        out = [0] * (2 * self.n + 1)
        for d, b in enumerate(self.betti_by_degree):
            out[2 * d] = b
        return out

    def lifts(self, d):
        data = self.sections.degree(d)
        return [data.space.poly(v) for v in data.lifts] if data else []

    def ih_coordinates(self, poly, d):
        data = self.sections.degree(d)
        return data.ih_coordinates(data.space.vector(poly, strict=True))

    def psi_times(self, poly):
        return times_linear(poly, self.psi_values, self.cells)

    def psi_power(self, k):
        out = {(): Fraction(1)}
        for _ in range(k):
            out = self.psi_times(out)
        return out

    # ── evaluation ──
    def _evaluation_data(self):
        """Probe point and per-cone (barycentric coordinates, g_σ(p)) for ε."""
        if self._eval_cache is not None:
            return self._eval_cache
        ref = self.refinement
        for j in range(1, MAX_PROBES + 1):
            p = probe_point(self.n, j)
            data = []
            for s in ref.max_cones:
                t = dict(zip(sorted(s), ref.barycentric(s, p)))
                if any(v == 0 for v in t.values()):
                    break
                g = abs(determinant(ref.ray_matrix(s))) * math.prod(t.values(), start=Fraction(1))
                data.append((s, t, g))
            else:
                logger.debug("evaluation probe point p_%d = %s", j, p)
                self._eval_cache = data
                return data
        raise RuntimeError(f"No generic probe point among the first {MAX_PROBES}.")

    def evaluate(self, poly):
        """
        ε(f) = Σ_σ f_σ / g_σ over the maximal refined cones, for f of degree n.

        Raises:
            ValueError when a monomial has the wrong degree.
        """
        for m in poly:
            if len(m) != self.n:
                raise ValueError(
                    f"Evaluation needs degree {2 * self.n}, got a monomial of degree {2 * len(m)}."
                )
        total = Fraction(0)
        for s, t, g in self._evaluation_data():
            value = Fraction(0)
            for m, c in poly.items():
                if set(m) <= s:
                    value += c * math.prod((t[i] for i in m), start=Fraction(1))
            total += value / g
        return total

    def indicator(self, s):
        """g_σ·1_σ for a maximal refined cone σ, as a face-ring element."""
        s = frozenset(s)
        if s not in self.refinement.max_cones:
            raise ValueError(f"{sorted(s)} is not a maximal refined cone.")
        return {tuple(sorted(s)): abs(determinant(self.refinement.ray_matrix(s)))}

    def pair(self, x, y, k):
        """ε(x · ψ^k · y) for face-ring elements of degrees a, b with a + b + k = n."""
        dx = {len(m) for m in x} or {None}
        dy = {len(m) for m in y} or {None}
        if len(dx) != 1 or len(dy) != 1:
            raise ValueError("pair needs homogeneous sections.")
        a, b = dx.pop(), dy.pop()
        if a is None or b is None:
            return Fraction(0)
        if a + b + k != self.n:
            raise ValueError(
                f"Degrees {2 * a} + {2 * b} + 2·{k} do not add up to {2 * self.n}."
            )
        product = multiply(x, y, self.cells)
        for _ in range(k):
            product = self.psi_times(product)
        return self.evaluate(product)

    def cross_gram(self, a, b):
        """Matrix ε(ℓ_i · ℓ'_j) between the IH lifts in degrees a and b (a + b = n)."""
        left, right = self.lifts(a), self.lifts(b)
        return Mat([[self.pair(x, y, 0) for y in right] for x in left], cols=len(right))

    # ── Lefschetz ──
    def lefschetz_matrix(self, q):
        """Matrix of L: IH^q → IH^{q+2} in the lift bases (q even)."""
        if q % 2 or not 0 <= q <= 2 * self.n - 2:
            raise ValueError(f"Lefschetz source degree must be even in [0, {2 * self.n - 2}], got {q}.")
        return self._lefschetz(q // 2)

    def _lefschetz(self, d):
        if d not in self._lefschetz_cache:
            source = self.lifts(d)
            target = self.sections.degree(d + 1)
            rows = len(target.lifts) if target else 0
            if not rows:
                mat = Mat.zeros(0, len(source))
            elif not source:
                mat = Mat.zeros(rows, 0)
            else:
                cols = [self.ih_coordinates(self.psi_times(f), d + 1) for f in source]
                mat = Mat.from_columns(cols, rows)
            self._lefschetz_cache[d] = mat
        return self._lefschetz_cache[d]

    def lefschetz_power(self, d, k):
        """L^k: IH^{2d} → IH^{2d+2k}."""
        if k == 0:
            return Mat.identity(self.betti_by_degree[d])
        if d + k > self.n:
            return Mat.zeros(0, self.betti_by_degree[d])
        return matrix_power_chain([self._lefschetz(d + i) for i in range(k)])

    def _primitive_basis(self, d, k):
        """Basis of ker L^{k+1} on IH^{2d}."""
        dim = self.betti_by_degree[d]
        chain = self.lefschetz_power(d, k + 1)
        if chain.rows == 0:
            return Mat.identity(dim).columns()
        return kernel_basis(chain)

    def hr_form(self, k):
        """
        Gram matrix of s_k(ξ, η) = ε(ξ ψ^k η) on IH^{n-k} and its primitive part.
        """
        if k < 0 or k > self.n or (self.n - k) % 2:
            raise ValueError(f"k must satisfy 0 <= k <= {self.n} and k ≡ {self.n} mod 2, got {k}.")
        d = (self.n - k) // 2
        lifts = self.lifts(d)
        gram = Mat([[self.pair(a, b, k) for b in lifts] for a in lifts], cols=len(lifts))
        primitive = self._primitive_basis(d, k)
        p_mat = Mat.from_columns(primitive, len(lifts)) if primitive else Mat.zeros(len(lifts), 0)
        restricted = p_mat.T @ gram @ p_mat
        return HRFormData(k, gram, primitive, signature_of(gram), signature_of(restricted))

    def valid_k(self):
        return [k for k in range(self.n % 2, self.n + 1, 2)]

    # ── verifiers ──
    def verify_hlt(self):
        """L^k: IH^{n-k} → IH^{n+k} is an isomorphism for every valid k."""
        entries = {}
        for k in self.valid_k():
            d = (self.n - k) // 2
            mat = self.lefschetz_power(d, k)
            r = rank(mat)
            square = mat.rows == mat.cols
            entries[str(k)] = {
                "k": k,
                "source_degree": self.n - k,
                "shape": [mat.rows, mat.cols],
                "rank": r,
                "ok": square and r == mat.cols,
            }
        report = {
            "polytope_id": polytope_id(self.polytope),
            "n": self.n,
            "betti": self.betti,
            "hlt": entries,
            "ok": all(e["ok"] for e in entries.values()),
        }
        report["summary"] = _format_hlt(report)
        return report

    def verify_hrr(self):
        """
        Hodge-Riemann relations for every valid k.

        Reports definiteness of s_k on primitive classes, the s_k-orthogonal
        decomposition IH^{n-k} = ⊕_j L^j IP^{n-k-2j}, and the HR-equation
        sign(s_k) = sign(s_{k+2}) + (-1)^{(n-k)/2} (b_{n-k} - b_{n-k-2}).
        """
        hlt = self.verify_hlt()
        b = self.betti_by_degree
        forms = {k: self.hr_form(k) for k in self.valid_k()}
        definite, equation, decomposition, signatures = {}, {}, {}, {}
        for k, form in forms.items():
            d = (self.n - k) // 2
            sign = (-1) ** d
            signatures[str(k)] = form.signature.as_list()
            definite[str(k)] = {
                "primitive_dim": len(form.primitive),
                "expected_sign": sign,
                "signature": form.primitive_signature.as_list(),
                "ok": form.primitive_signature.is_definite(sign) or not form.primitive,
            }
            above = forms[k + 2].signature.sign if k + 2 in forms else 0
            lower = b[d - 1] if d >= 1 else 0
            rhs = above + sign * (b[d] - lower)
            equation[str(k)] = {"lhs": form.signature.sign, "rhs": rhs,
                                "ok": form.signature.sign == rhs}
            decomposition[str(k)] = self._check_decomposition(form)
        pd = b == b[::-1]
        report = {
            "polytope_id": polytope_id(self.polytope),
            "n": self.n,
            "betti": self.betti,
            "poincare_duality": pd,
            "hlt_ok": hlt["ok"],
            "hlt": {k: e["ok"] for k, e in hlt["hlt"].items()},
            "signatures": signatures,
            "hrr_definite": definite,
            "hr_equation": equation,
            "decomposition": decomposition,
        }
        report["ok"] = pd and hlt["ok"] and all(
            e["ok"] for part in (definite, equation, decomposition) for e in part.values()
        )
        report["summary"] = _format_hrr(report)
        return report

    def _check_decomposition(self, form):
        k = form.k
        d = (self.n - k) // 2
        dim = self.betti_by_degree[d]
        blocks = []
        for j in range(d + 1):
            prim = self._primitive_basis(d - j, k + 2 * j)
            if not prim:
                continue
            src = Mat.from_columns(prim, self.betti_by_degree[d - j])
            blocks.append(self.lefschetz_power(d - j, j) @ src)
        total = sum(m.cols for m in blocks)
        spans = total == dim and (rank(hstack(blocks, rows=dim)) == dim if blocks else dim == 0)
        orthogonal = all(
            (blocks[i].T @ form.gram @ blocks[j]).is_zero()
            for i in range(len(blocks)) for j in range(len(blocks)) if i != j
        )
        return {"pieces": [m.cols for m in blocks], "spans": spans,
                "orthogonal": orthogonal, "ok": spans and orthogonal}

    def check_self_adjoint(self, samples=3, seed=0):
        """
        Spot-check ⟨Lx, y⟩ = ⟨x, Ly⟩ on random IH classes using the
        coordinate Lefschetz matrices and the evaluation pairing.
        """
        rng = random.Random(seed)
        results = []
        for a in range(self.n):
            b = self.n - 1 - a
            ba, bb = self.betti_by_degree[a], self.betti_by_degree[b]
            if not ba or not bb:
                continue
            left = self._lefschetz(a).T @ self.cross_gram(a + 1, b)
            right = self.cross_gram(a, b + 1) @ self._lefschetz(b)
            for _ in range(samples):
                x = [rng.randint(-3, 3) for _ in range(ba)]
                y = [rng.randint(-3, 3) for _ in range(bb)]
                lhs = sum(xi * v for xi, v in zip(x, left @ y))
                rhs = sum(xi * v for xi, v in zip(x, right @ y))
                results.append(lhs == rhs)
        return all(results)

    def calculate(self):
        """Betti numbers, HLT and HRR as one report dict."""
        hrr = self.verify_hrr()
        result = dict(hrr)
        result["hlt_ranks"] = self.verify_hlt()["hlt"]
        result["self_adjoint"] = self.check_self_adjoint()
        result["ok"] = hrr["ok"] and result["self_adjoint"]
        result["summary"] = _format_hrr(result)
        return result


def volume_observation(ic):
    """
    Log ε(ψ^n) next to n!·vol(P); the ratio is observed, never asserted.

    Returns:
        dict with the exact ε(ψ^n), the floating volume and their ratio.
    """
    n = ic.n
    eps = ic.evaluate(ic.psi_power(n))
    pts = [[float(c) for c in v] for v in ic.polytope.to_full_dimensional().vertices]
    if n == 0:
        volume = 1.0
    elif n == 1:
        volume = max(p[0] for p in pts) - min(p[0] for p in pts)
    else:
        volume = ConvexHull(pts).volume
    scaled = math.factorial(n) * volume
    ratio = float(eps) / scaled if scaled else float("nan")
    logger.info("eps(psi^%d) = %s, %d!*vol = %.6g, ratio %.6g",
                n, rat_to_str(eps), n, scaled, ratio)
    return {"epsilon": rat_to_str(eps), "n_factorial_volume": scaled, "ratio": ratio,
            "sign": 1 if eps > 0 else -1 if eps < 0 else 0}


# ======================================================================
# Text rendering
# ======================================================================
def _format_hlt(report):
    header = f"{'k':<4} | {'IH degree':<10} | {'shape':<8} | {'rank':<5} | status"
    sep = "-" * 50
    rows = []
    for e in report["hlt"].values():
        shape = f"{e['shape'][0]}x{e['shape'][1]}"
        rows.append(f"{e['k']:<4} | {e['source_degree']:<10} | {shape:<8} | "
                    f"{e['rank']:<5} | {'ok' if e['ok'] else 'FAIL'}")
    footer = f"\nBetti numbers: {report['betti']}"
    return f"{header}\n{sep}\n" + "\n".join(rows) + footer


def _format_hrr(report):
    header = (f"{'k':<4} | {'signature s_k':<16} | {'primitive':<16} | "
              f"{'HR-equation':<14} | {'decomp':<7} | status")
    sep = "-" * 80
    rows = []
    for key in report["signatures"]:
        sig = "(" + ",".join(str(x) for x in report["signatures"][key]) + ")"
        prim = report["hrr_definite"][key]
        psig = "(" + ",".join(str(x) for x in prim["signature"]) + ")"
        eq = report["hr_equation"][key]
        dec = report["decomposition"][key]
        ok = prim["ok"] and eq["ok"] and dec["ok"]
        rows.append(f"{key:<4} | {sig:<16} | {psig:<16} | "
                    f"{str(eq['lhs']) + ' = ' + str(eq['rhs']):<14} | "
                    f"{'ok' if dec['ok'] else 'FAIL':<7} | {'ok' if ok else 'FAIL'}")
    footer = (f"\nBetti numbers: {report['betti']}  Poincaré duality: "
              f"{'yes' if report['poincare_duality'] else 'NO'}  HLT: "
              f"{'yes' if report['hlt_ok'] else 'NO'}\n"
              f"Verdict: {'PASS' if report['ok'] else 'FAIL'}")
    return f"{header}\n{sep}\n" + "\n".join(rows) + footer


if __name__ == "__main__":
    import polytope_corpus

    for name in ("cube3", "square_pyramid"):
        ic = IntersectionCohomology(polytope_corpus.get(name))
        print(name)
        print(ic.calculate()["summary"])
        print()
