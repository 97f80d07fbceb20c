"""
Outer normal fans, conewise linear functions and simplicial refinements.

A fan is stored by its primitive integer rays and its cones, each cone a
frozenset of ray indices.  For a fan coming from a polytope every cone is
spanned by its rays and the face relation is inclusion of ray sets.
Subfans are frozensets of cone indices closed under taking faces.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from exact_core import Mat, dot, inverse, rank, rat_to_str, rat_vector
from polytope_lattice import DegenerateInputError

logger = logging.getLogger(__name__)

# Generic probe points for completeness checks: p_j = (1, j, j^2, ...) and -p_j.
PROBE_COUNT = 6


def probe_point(n, j):
    return tuple(Fraction(j) ** i for i in range(n))


@dataclass(frozen=True)
class Cone:
    rays: frozenset
    dim: int
    face: frozenset = None

    @property
    def is_simplicial(self):
        return len(self.rays) == self.dim

    def to_json(self):
        data = {"rays": sorted(self.rays), "dim": self.dim}
        if self.face is not None:
            data["face"] = sorted(self.face)
        return data


class Fan:
    """
    Rational polyhedral fan in Q^n.

    Args:
        ambient_dim: n
        rays: primitive integer ray generators
        cones: iterable of ray-index sets (the zero cone included)
        faces: optional dict ray-index set -> generating face of a polytope
    """

    def __init__(self, ambient_dim, rays, cones, faces=None):
        self.ambient_dim = ambient_dim
        self.rays = [tuple(int(c) for c in r) for r in rays]
        faces = faces or {}
        built = []
        for rs in {frozenset(c) for c in cones}:
            for i in rs:
                if not 0 <= i < len(self.rays):
                    raise ValueError(f"Cone {sorted(rs)} uses unknown ray {i}.")
            d = rank(Mat([self.rays[i] for i in sorted(rs)], cols=ambient_dim)) if rs else 0
            built.append(Cone(rs, d, faces.get(rs)))
        built.sort(key=lambda c: (c.dim, sorted(c.rays)))
        self.cones = built
        self._index = {c.rays: i for i, c in enumerate(built)}
        if frozenset() not in self._index:
            raise ValueError("A fan must contain the zero cone.")

    def __len__(self):
        return len(self.cones)

    def index(self, rays):
        try:
            return self._index[frozenset(rays)]
        except KeyError:
            raise ValueError(f"Cone {sorted(rays)} is not in the fan.") from None

    def _check(self, ci):
        if not 0 <= ci < len(self.cones):
            raise ValueError(f"Cone index {ci} is not in the fan ({len(self.cones)} cones).")

    @property
    def zero_cone(self):
        return self._index[frozenset()]

    @property
    def max_dim(self):
        return max(c.dim for c in self.cones)

    @cached_property
    def max_cones(self):
        """Indices of the n-dimensional cones."""
        return [i for i, c in enumerate(self.cones) if c.dim == self.ambient_dim]

    def faces_of(self, ci):
        """Cone indices of all faces of cone ci (itself included)."""
        self._check(ci)
        rays = self.cones[ci].rays
        return [j for j, c in enumerate(self.cones) if c.rays <= rays]

    def boundary(self, ci):
        """Proper faces of cone ci (the subfan ∂σ)."""
        return frozenset(j for j in self.faces_of(ci) if j != ci)

    def facets_of(self, ci):
        d = self.cones[ci].dim
        return [j for j in self.faces_of(ci) if self.cones[j].dim == d - 1]

    def is_simplicial(self, subfan=None):
        """True iff every cone (of the subfan, if given) has exactly dim rays."""
        idx = range(len(self.cones)) if subfan is None else subfan
        return all(self.cones[i].is_simplicial for i in idx)

    # ── subfans ──
    def subfan(self, cones):
        """Smallest subfan containing the given cones."""
        out = set()
        for ci in cones:
            out.update(self.faces_of(ci))
        return frozenset(out)

    def star(self, ci):
        """All cones containing cone ci, plus their faces."""
        self._check(ci)
        rays = self.cones[ci].rays
        return self.subfan(j for j, c in enumerate(self.cones) if rays <= c.rays)

    def boundary_subfan(self, subfan):
        """Subfan generated by the (n-1)-cones that are a facet of exactly one n-cone of the subfan."""
        n = self.ambient_dim
        tops = [i for i in subfan if self.cones[i].dim == n]
        walls = []
        for i in subfan:
            if self.cones[i].dim != n - 1:
                continue
            owners = sum(1 for t in tops if self.cones[i].rays <= self.cones[t].rays)
            if owners == 1:
                walls.append(i)
        return self.subfan(walls)

    def complementary_subfan(self, subfan):
        """Subfan generated by the n-cones outside a subfan of a complete fan."""
        if not self.is_complete():
            raise ValueError("complementary_subfan needs a complete fan.")
        return self.subfan(i for i in self.max_cones if i not in subfan)

    # ── geometry ──
    @cached_property
    def refinement(self):
        return simplicial_refinement(self)

    def _locate(self, x):
        """(maximal cones containing x, whether x avoids every refined wall)."""
        x = rat_vector(x)
        ref = self.refinement
        hits = set()
        generic = True
        for s in ref.max_cones:
            t = ref.barycentric(s, x)
            if all(c >= 0 for c in t):
                hits.add(ref.carrier[s])
                generic = generic and all(c > 0 for c in t)
        return sorted(hits), generic

    def max_cones_containing(self, x):
        """Indices of the maximal cones containing the point x."""
        return self._locate(x)[0]

    def is_complete(self):
        """
        No free walls, and each of PROBE_COUNT generic probe points
        ±(1, j, j^2, ...) lies in exactly one maximal cone.
        """
        n = self.ambient_dim
        if n == 0:
            return True
        everything = frozenset(range(len(self.cones)))
        if not self.max_cones or self.boundary_subfan(everything):
            return False
        checked = 0
        j = 1
        while checked < PROBE_COUNT and j <= 50 * PROBE_COUNT:
            p = probe_point(n, j)
            for q in (p, tuple(-c for c in p)):
                hits, generic = self._locate(q)
                if not hits:
                    return False
                if generic:
                    if len(hits) != 1:
                        return False
                    checked += 1
            j += 1
        return checked >= PROBE_COUNT

    def to_json(self):
        return {
            "ambient_dim": self.ambient_dim,
            "rays": [list(r) for r in self.rays],
            "cones": [c.to_json() for c in self.cones],
        }

    def __eq__(self, other):
        if not isinstance(other, Fan) or self.ambient_dim != other.ambient_dim:
            return False
        mine = {frozenset(self.rays[i] for i in c.rays) for c in self.cones}
        theirs = {frozenset(other.rays[i] for i in c.rays) for c in other.cones}
        return mine == theirs

    __hash__ = None

    def __repr__(self):
        return (f"Fan(n={self.ambient_dim}, rays={len(self.rays)}, cones={len(self.cones)}, "
                f"simplicial={self.is_simplicial()})")


class ConewiseLinear:
    """
    A linear functional per maximal cone of a fan.

    Args:
        fan: Fan
        values: dict max-cone index -> vector in Q^n
    """

    def __init__(self, fan, values):
        self.fan = fan
        self.values = {ci: tuple(rat_vector(v)) for ci, v in values.items()}
        missing = set(fan.max_cones) - set(self.values)
        if missing:
            raise ValueError(f"No linear functional on maximal cones {sorted(missing)}.")
        self._check_agreement()

    def _check_agreement(self):
        for i in self.fan.max_cones:
            for j in self.fan.max_cones:
                if i < j:
                    for r in self.fan.cones[i].rays & self.fan.cones[j].rays:
                        if dot(self.values[i], self.fan.rays[r]) != dot(self.values[j], self.fan.rays[r]):
                            raise ValueError(
                                f"Functionals on cones {i} and {j} disagree on ray {r}."
                            )

    @cached_property
    def ray_values(self):
        """Value at each ray generator."""
        out = [None] * len(self.fan.rays)
        for ci in self.fan.max_cones:
            for r in self.fan.cones[ci].rays:
                out[r] = dot(self.values[ci], self.fan.rays[r])
        return out

    def value(self, x):
        cones = self.fan.max_cones_containing(x)
        if not cones:
            raise ValueError("Point lies outside the support of the fan.")
        return dot(self.values[cones[0]], rat_vector(x))

    def walls(self):
        """Pairs (i, j) of maximal cones sharing an (n-1)-dimensional face."""
        n = self.fan.ambient_dim
        out = []
        tops = self.fan.max_cones
        for a, i in enumerate(tops):
            for j in tops[a + 1:]:
                common = sorted(self.fan.cones[i].rays & self.fan.cones[j].rays)
                if rank(Mat([self.fan.rays[r] for r in common], cols=n)) == n - 1:
                    out.append((i, j))
        return out

    def is_strictly_convex(self):
        """
        ψ_i - ψ_j vanishes on the common wall and is negative inside σ_j,
        for every pair of adjacent maximal cones, checked at the ray sum.
        """
        for i, j in self.walls():
            for a, b in ((i, j), (j, i)):
                diff = [x - y for x, y in zip(self.values[a], self.values[b])]
                inner = [sum(c) for c in zip(*(self.fan.rays[r] for r in self.fan.cones[b].rays))]
                if dot(diff, inner) >= 0:
                    return False
        return True

    def differs_by_global(self, other):
        """The global functional a with other = self + a on every cone, or None."""
        if set(self.values) != set(other.values):
            return None
        shifts = {tuple(y - x for x, y in zip(self.values[ci], other.values[ci]))
                  for ci in self.values}
        return shifts.pop() if len(shifts) == 1 else None

    def to_json(self):
        return {str(ci): [rat_to_str(c) for c in v] for ci, v in sorted(self.values.items())}


# ======================================================================
# Outer normal fan
# ======================================================================
def outer_normal_fan(p):
    """
    Outer normal fan Δ(P) and its strictly convex ψ.

    P is taken in the chart of its affine hull.  Ray j is the primitive
    outer normal of facet j; the cone of a face G is spanned by the rays of
    the facets containing G, so dim σ(G) = n - dim G.  ψ equals vertex v on
    the maximal cone of v.

    Returns:
        (Fan, ConewiseLinear)
    """
    q = p.to_full_dimensional()
    n = q.dim
    rays = [tuple(int(c) for c in h.normal) for h in q.local_facets]
    facet_sets = q.facet_vertex_sets
    cones, faces = [], {}
    for g in q.lattice.faces:
        if not g:
            continue
        rs = frozenset(j for j, tight in enumerate(facet_sets) if g <= tight)
        cones.append(rs)
        faces[rs] = g
    fan = Fan(n, rays, cones, faces)

    for ci, cone in enumerate(fan.cones):
        expected = n - q.lattice.dim_of(cone.face)
        if cone.dim != expected:
            raise DegenerateInputError(
                f"Cone of face {sorted(cone.face)} has dim {cone.dim}, expected {expected}."
            )
    values = {}
    for ci in fan.max_cones:
        (v,) = fan.cones[ci].face
        values[ci] = q.vertices[v]
    psi = ConewiseLinear(fan, values)
    if not psi.is_strictly_convex():
        raise RuntimeError("Support function of a polytope is not strictly convex.")
    logger.debug("normal fan of %r: %d rays, %d cones, simplicial=%s",
                 p, len(rays), len(fan), fan.is_simplicial())
    return fan, psi


# ======================================================================
# Simplicial refinement
# ======================================================================
class Refinement:
    """
    Simplicial refinement Σ of a fan Δ that uses only Δ's rays.

    Attributes:
        cones: Σ-cones as sorted ray-index frozensets (the zero cone included)
        carrier: dict Σ-cone -> index of the smallest Δ-cone containing it
        max_cones: the n-dimensional Σ-cones
    """

    def __init__(self, fan, simplices):
        self.fan = fan
        cells = set()
        for s in simplices:
            s = tuple(sorted(s))
            for k in range(len(s) + 1):
                for sub in combinations(s, k):
                    cells.add(frozenset(sub))
        self.cones = sorted(cells, key=lambda c: (len(c), sorted(c)))
        self.cone_set = frozenset(self.cones)
        self.carrier = {s: self._carrier(s) for s in self.cones}
        n = fan.ambient_dim
        self.max_cones = [s for s in self.cones if len(s) == n]
        self._inverses = {}

    def _carrier(self, s):
        best = None
        for ci, cone in enumerate(self.fan.cones):
            if s <= cone.rays and (best is None or cone.dim < self.fan.cones[best].dim):
                best = ci
        if best is None:
            raise RuntimeError(f"Refined cone {sorted(s)} has no carrier.")
        return best

    def cells_over(self, subfan):
        """Σ-cones whose carrier lies in the given set of Δ-cones."""
        subfan = set(subfan)
        return frozenset(s for s in self.cones if self.carrier[s] in subfan)

    def ray_matrix(self, s):
        """Columns = rays of the simplicial cone s in sorted order."""
        return Mat.from_columns([self.fan.rays[r] for r in sorted(s)], self.fan.ambient_dim)

    def barycentric(self, s, x):
        """Coordinates t with x = Σ t_i r_i for a maximal Σ-cone s."""
        inv = self._inverses.get(s)
        if inv is None:
            inv = self._inverses[s] = inverse(self.ray_matrix(s))
        return inv @ x

    def is_identity(self):
        return all(len(self.fan.cones[ci].rays) == len(s) and self.fan.cones[ci].rays == s
                   for s, ci in self.carrier.items())

    def to_json(self):
        return {
            "cones": [sorted(s) for s in self.cones],
            "carrier": [self.carrier[s] for s in self.cones],
        }


def simplicial_refinement(fan, ray_order=None):
    """
    Pulling triangulation of every cone at existing rays.

    Each non-simplicial cone is pulled at its first ray in ``ray_order``
    (default: lowest index); the facets not containing that ray are
    triangulated recursively and coned from it.  No rays are added.

    Args:
        fan: Fan
        ray_order: optional sequence of ray indices, highest priority first
    """
    priority = {r: i for i, r in enumerate(ray_order)} if ray_order is not None \
        else {r: r for r in range(len(fan.rays))}
    memo = {}

    def pull(ci):
        if ci in memo:
            return memo[ci]
        cone = fan.cones[ci]
        if cone.is_simplicial:
            out = [cone.rays]
        else:
            apex = min(cone.rays, key=priority.__getitem__)
            out = []
            for fi in fan.facets_of(ci):
                if apex not in fan.cones[fi].rays:
                    out.extend(s | {apex} for s in pull(fi))
        memo[ci] = out
        return out

    simplices = []
    for ci in range(len(fan.cones)):
        simplices.extend(pull(ci))
    ref = Refinement(fan, simplices)
    for s in ref.max_cones:
        if rank(ref.ray_matrix(s)) != fan.ambient_dim:
            raise RuntimeError(f"Refined cone {sorted(s)} is degenerate.")
    logger.debug("refinement: %d -> %d maximal cones", len(fan.max_cones), len(ref.max_cones))
    return ref

