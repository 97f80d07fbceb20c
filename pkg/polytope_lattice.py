"""
Rational polytopes from vertex data.

Facets are found by exhaustive search over hyperplanes spanned by vertex
subsets, the face lattice by closing the facet vertex sets under
intersection.  This is desk-scale on purpose: the search is bounded to
``MAX_VERTICES`` points, which covers every polytope of dimension <= 4 that
the tool is meant for.  Polytopes of lower dimension than their ambient
space are handled in an exact affine chart of their affine hull.
"""

import hashlib
import itertools
import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import networkx as nx
from networkx.algorithms import isomorphism

from exact_core import (
    CoordinateSolver,
    Mat,
    dot,
    independent_columns,
    kernel_basis,
    primitive_integer_vector,
    rank,
    rat,
    rat_to_str,
    rat_vector,
    solve_unique,
)

logger = logging.getLogger(__name__)

MAX_VERTICES = 30


class DegenerateInputError(ValueError):
    """Vertex data that does not describe a polytope the tool can handle."""


# ======================================================================
# Halfspace
# ======================================================================
@dataclass(frozen=True)
class Halfspace:
    """The set {x : <normal, x> <= offset}."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(rat_vector(self.normal)))
        object.__setattr__(self, "offset", rat(self.offset))
        if all(c == 0 for c in self.normal):
            raise ValueError("Halfspace normal must be nonzero.")

    def slack(self, x):
        """<normal, x> - offset (negative strictly inside)."""
        return dot(self.normal, x) - self.offset

    def contains(self, x):
        return self.slack(x) <= 0

    def flipped(self):
        return Halfspace(tuple(-c for c in self.normal), -self.offset)

    def to_json(self):
        return {
            "normal": [rat_to_str(c) for c in self.normal],
            "offset": rat_to_str(self.offset),
        }

    @classmethod
    def from_json(cls, data):
        return cls(tuple(rat(c) for c in data["normal"]), rat(data["offset"]))


# ======================================================================
# Affine chart
# ======================================================================
class AffineChart:
    """
    Exact coordinates on the affine hull of a point set.

    Full-dimensional sets keep the ambient coordinates (origin 0, standard
    basis); otherwise the origin is the first point and the basis is a
    first-come independent subset of the difference vectors.
    """

    def __init__(self, points):
        self.ambient_dim = len(points[0])
        diffs = [[a - b for a, b in zip(p, points[0])] for p in points[1:]]
        if diffs:
            picked = independent_columns(Mat.from_columns(diffs, self.ambient_dim))
        else:
            picked = []
        self.dim = len(picked)
        if self.dim == self.ambient_dim:
            self.origin = tuple([Fraction(0)] * self.ambient_dim)
            self.basis = Mat.identity(self.ambient_dim).columns()
        else:
            self.origin = points[0]
            self.basis = [diffs[j] for j in picked]
        self._solver = CoordinateSolver(Mat.from_columns(self.basis, self.ambient_dim))

    @property
    def is_identity(self):
        return self.dim == self.ambient_dim

    def to_local(self, x):
        if self.is_identity:
            return tuple(rat_vector(x))
        shifted = [a - b for a, b in zip(rat_vector(x), self.origin)]
        return tuple(self._solver.coordinates(shifted))

    def to_ambient(self, y):
        if self.is_identity:
            return tuple(rat_vector(y))
        out = list(self.origin)
        for coeff, vec in zip(y, self.basis):
            out = [o + coeff * v for o, v in zip(out, vec)]
        return tuple(out)

    def functional_to_ambient(self, a):
        """
        Lift a functional on chart coordinates to one on the ambient space.

        The lift N lies in the direction space: N = B (BᵀB)⁻¹ a, so
        <N, B y> = <a, y>.
        """
        if self.is_identity:
            return tuple(rat_vector(a))
        b = Mat.from_columns(self.basis, self.ambient_dim)
        gram = b.T @ b
        coeffs = CoordinateSolver(gram).coordinates(rat_vector(a))
        return tuple(b @ coeffs)


# ======================================================================
# Polytope
# ======================================================================
class Polytope:
    """
    Convex hull of finitely many rational points, given by its vertices.

    Args:
        vertices: iterable of points (scalars accepted by ``rat``).
        ambient_dim: n; inferred from the first point when omitted.
        name: optional label carried into reports.

    Duplicate points are dropped (first occurrence kept); a point that is
    not a vertex of the hull raises ``DegenerateInputError``.
    """

    def __init__(self, vertices, ambient_dim=None, name=None):
        pts = [tuple(rat_vector(v)) for v in vertices]
        if not pts:
            raise DegenerateInputError("A polytope needs at least one vertex.")
        if ambient_dim is None:
            ambient_dim = len(pts[0])
        for i, p in enumerate(pts):
            if len(p) != ambient_dim:
                raise DegenerateInputError(
                    f"Vertex {i} has {len(p)} coordinates, expected {ambient_dim}."
                )
        self.vertices = tuple(dict.fromkeys(pts))
        self.ambient_dim = ambient_dim
        self.name = name
        if len(self.vertices) > MAX_VERTICES:
            raise DegenerateInputError(
                f"{len(self.vertices)} vertices exceed the desk-scale bound of "
                f"{MAX_VERTICES} for exhaustive facet search."
            )
        self.chart = AffineChart(self.vertices)
        self.dim = self.chart.dim
        self.local_vertices = tuple(self.chart.to_local(v) for v in self.vertices)
        self._validate()

    def _validate(self):
        """Every listed point must be a vertex: its tight facet normals span."""
        if self.dim == 0:
            return
        for i, p in enumerate(self.local_vertices):
            normals = [n for n, _, tight in self._local_facets if i in tight]
            if not normals or rank(Mat(normals)) < self.dim:
                raise DegenerateInputError(
                    f"Point {i} {tuple(rat_to_str(c) for c in self.vertices[i])} "
                    "is not a vertex of the convex hull."
                )

    # ── facets ──
    @cached_property
    def _local_facets(self):
        """(primitive normal, offset, tight vertex set) triples in chart coordinates."""
        d = self.dim
        if d == 0:
            return []
        pts = self.local_vertices
        found = {}
        for combo in itertools.combinations(range(len(pts)), d):
            if any(set(combo) <= tight for tight in found):
                continue
            base = pts[combo[0]]
            rows = [[a - b for a, b in zip(pts[i], base)] for i in combo[1:]]
            ker = kernel_basis(Mat(rows, cols=d))
            if len(ker) != 1:
                continue
            normal = primitive_integer_vector(ker[0])
            values = [dot(normal, p) for p in pts]
            top = dot(normal, base)
            if all(v <= top for v in values):
                pass
            elif all(v >= top for v in values):
                normal = tuple(-c for c in normal)
                top = -top
            else:
                continue
            tight = frozenset(i for i, p in enumerate(pts) if dot(normal, p) == top)
            found.setdefault(tight, (normal, Fraction(top)))
        facets = [(n, off, tight) for tight, (n, off) in found.items()]
        facets.sort(key=lambda f: sorted(f[2]))
        logger.debug("found %d facets for %d vertices in dimension %d",
                     len(facets), len(pts), d)
        return facets

    @cached_property
    def facets(self):
        """Facet-defining halfspaces in ambient coordinates, one per facet."""
        out = []
        for normal, _, tight in self._local_facets:
            ambient = self.chart.functional_to_ambient(normal)
            if not self.chart.is_identity:
                ambient = primitive_integer_vector(ambient)
            v = self.vertices[min(tight)]
            out.append(Halfspace(ambient, dot(ambient, v)))
        return out

    @cached_property
    def facet_vertex_sets(self):
        return [tight for _, _, tight in self._local_facets]

    @cached_property
    def local_facets(self):
        """Facet halfspaces in chart coordinates (what the normal fan is built from)."""
        return [Halfspace(n, off) for n, off, _ in self._local_facets]

    def incidence_matrix(self):
        """Rows = facets, columns = vertices, entry 1 when the vertex lies on the facet."""
        return [[1 if v in tight else 0 for v in range(len(self.vertices))]
                for tight in self.facet_vertex_sets]

    # ── lattice ──
    @cached_property
    def lattice(self):
        return face_lattice(self)

    @property
    def is_full_dimensional(self):
        return self.dim == self.ambient_dim

    def to_full_dimensional(self):
        """The same polytope in chart coordinates of its affine hull (vertex order kept)."""
        if self.is_full_dimensional:
            return self
        return Polytope(self.local_vertices, ambient_dim=self.dim, name=self.name)

    def barycenter(self, indices=None):
        idx = range(len(self.vertices)) if indices is None else sorted(indices)
        pts = [self.vertices[i] for i in idx]
        return tuple(sum(c, Fraction(0)) / len(pts) for c in zip(*pts)) \
            if self.ambient_dim else ()

    def translated(self, shift):
        shift = rat_vector(shift)
        return Polytope([[a + b for a, b in zip(v, shift)] for v in self.vertices],
                        ambient_dim=self.ambient_dim, name=self.name)

    def transformed(self, matrix, shift=None):
        """Image under x ↦ matrix·x + shift (matrix must be invertible for lattices to match)."""
        m = matrix if isinstance(matrix, Mat) else Mat(matrix)
        shift = rat_vector(shift) if shift is not None else [Fraction(0)] * m.rows
        return Polytope([[a + b for a, b in zip(m @ list(v), shift)] for v in self.vertices],
                        ambient_dim=m.rows, name=self.name)

    # ── serialization ──
    def to_json(self):
        data = {
            "dim": self.ambient_dim,
            "vertices": [[rat_to_str(c) for c in v] for v in self.vertices],
        }
        if self.name:
            data["name"] = self.name
        return data

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict):
            raise ValueError("Polytope JSON must be an object.")
        unknown = set(data) - {"dim", "vertices", "name"}
        if unknown:
            raise ValueError(f"Unknown polytope fields: {sorted(unknown)}")
        missing = {"dim", "vertices"} - set(data)
        if missing:
            raise ValueError(f"Missing polytope fields: {sorted(missing)}")
        if not isinstance(data["dim"], int) or data["dim"] < 0:
            raise ValueError(f"'dim' must be a non-negative integer, got {data['dim']!r}")
        return cls(data["vertices"], ambient_dim=data["dim"], name=data.get("name"))

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.ambient_dim == other.ambient_dim \
            and self.vertices == other.vertices

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return (f"Polytope({label}dim={self.dim}, ambient={self.ambient_dim}, "
                f"vertices={len(self.vertices)})")


def polytope_id(p):
    """Short stable identifier derived from the canonical vertex JSON."""
    payload = json.dumps({"dim": p.ambient_dim,
                          "vertices": p.to_json()["vertices"]}, sort_keys=True)
    return "P" + hashlib.sha256(payload.encode()).hexdigest()[:12]


def face_polytope(p, face):
    """The face (a set of vertex indices) as a polytope in the ambient space of p."""
    face = frozenset(face)
    if not face:
        raise ValueError("The empty face is not a polytope.")
    if face not in p.lattice:
        raise ValueError(f"{sorted(face)} is not a face of {p!r}.")
    return Polytope([p.vertices[i] for i in sorted(face)], ambient_dim=p.ambient_dim)


def facets_from_vertices(p):
    """
    Facet halfspaces of a polytope.

    Args:
        p: Polytope

    Returns:
        list of Halfspace, one per facet, irredundant.

    Raises:
        DegenerateInputError when p is a single point (fewer than two
        affinely independent vertices, so no hyperplane is spanned).
    """
    if p.dim < 1:
        raise DegenerateInputError(
            "Facets need at least 2 affinely independent vertices; got a single point."
        )
    return list(p.facets)


def vertices_from_halfspaces(normals, offsets, dim):
    """
    Vertices of {x in Q^dim : normals·x <= offsets}, by exhaustive tight subsets.

    Args:
        normals: list of coefficient vectors (length dim each).
        offsets: list of right-hand sides.
        dim: ambient dimension of the H-description.

    Returns:
        list of vertex tuples in first-found order (empty when infeasible or
        when the region has no vertices).
    """
    normals = [rat_vector(n) for n in normals]
    offsets = rat_vector(offsets)
    if dim == 0:
        return [()] if all(b >= 0 for b in offsets) else []
    found = {}
    for combo in itertools.combinations(range(len(normals)), dim):
        x = solve_unique(Mat([normals[i] for i in combo]), [offsets[i] for i in combo])
        if x is None:
            continue
        if all(dot(n, x) <= b for n, b in zip(normals, offsets)):
            found.setdefault(tuple(x), None)
    return list(found)


# ======================================================================
# FaceLattice
# ======================================================================
class FaceLattice:
    """
    Graded lattice of faces, each face a frozenset of vertex labels.

    Args:
        dims: dict face -> dimension.  Must contain the empty face (dim -1)
              and the top face.
    """

    def __init__(self, dims):
        self._dims = dict(dims)
        if frozenset() not in self._dims:
            raise ValueError("Face lattice must contain the empty face.")
        self.dim = max(self._dims.values())
        tops = [f for f, d in self._dims.items() if d == self.dim]
        if len(tops) != 1:
            raise ValueError(f"Face lattice needs a unique top face, got {len(tops)}.")
        self.top = tops[0]
        self.faces = sorted(self._dims, key=lambda f: (self._dims[f], sorted(f)))

    def __contains__(self, face):
        return frozenset(face) in self._dims

    def __len__(self):
        return len(self.faces)

    def dim_of(self, face):
        return self._dims[frozenset(face)]

    def of_dim(self, k):
        return [f for f in self.faces if self._dims[f] == k]

    @property
    def vertex_labels(self):
        return sorted(next(iter(f)) for f in self.of_dim(0))

    @property
    def facets(self):
        return self.of_dim(self.dim - 1)

    @property
    def proper_faces(self):
        return [f for f in self.faces if f != self.top]

    @property
    def f_vector(self):
        return tuple(len(self.of_dim(k)) for k in range(self.dim))

    def covers(self):
        """All pairs (G, F) with G ⊂ F and dim F = dim G + 1."""
        return [(g, f) for f in self.faces for g in self.faces
                if self._dims[g] == self._dims[f] - 1 and g < f]

    def upper_covers(self, face):
        face = frozenset(face)
        d = self._dims[face]
        return [f for f in self.faces if self._dims[f] == d + 1 and face < f]

    def interval(self, lower, upper):
        lower, upper = frozenset(lower), frozenset(upper)
        return [f for f in self.faces if lower <= f <= upper]

    def edges_at(self, v):
        return [e for e in self.of_dim(1) if v in e]

    def euler_characteristic(self):
        """Σ (−1)^dim over proper nonempty faces; equals 1 − (−1)^dim for polytopes."""
        return sum((-1) ** self._dims[f] for f in self.faces if f and f != self.top)

    def is_eulerian(self):
        """Every interval [a, b] with a < b has as many even- as odd-ranked elements."""
        for a in self.faces:
            for b in self.faces:
                if a < b:
                    total = sum((-1) ** self._dims[c] for c in self.faces if a <= c <= b)
                    if total != 0:
                        return False
        return True

    def meet(self, a, b):
        return frozenset(a) & frozenset(b)

    def join(self, a, b):
        """Smallest face containing both (the top face always qualifies)."""
        union = frozenset(a) | frozenset(b)
        return min((f for f in self.faces if union <= f), key=lambda f: self._dims[f])

    def to_json(self):
        return {
            "dim": self.dim,
            "f_vector": list(self.f_vector),
            "faces": {str(k): [sorted(f) for f in self.of_dim(k)]
                      for k in range(-1, self.dim + 1)},
        }

    @classmethod
    def from_json(cls, data):
        return cls({frozenset(f): int(k)
                    for k, faces in data["faces"].items() for f in faces})

    def summary(self):
        """Readable f-vector table."""
        header = f"{'dim':<6} | {'faces':<8} | sample"
        sep = "-" * 60
        rows = []
        for k in range(-1, self.dim + 1):
            faces = self.of_dim(k)
            sample = ", ".join(str(sorted(f)) for f in faces[:3])
            more = " ..." if len(faces) > 3 else ""
            rows.append(f"{k:<6} | {len(faces):<8} | {sample}{more}")
        footer = f"\nf-vector: {self.f_vector}  Euler characteristic: {self.euler_characteristic()}"
        return f"{header}\n{sep}\n" + "\n".join(rows) + footer


def _affine_rank(points):
    if len(points) <= 1:
        return len(points) - 1
    diffs = [[a - b for a, b in zip(p, points[0])] for p in points[1:]]
    return rank(Mat(diffs))


def face_lattice(p):
    """
    Face lattice of a polytope.

    Faces are the intersections of facet vertex sets, plus the polytope
    itself and the empty face.
    """
    n = len(p.vertices)
    top = frozenset(range(n))
    facet_sets = p.facet_vertex_sets
    faces = {top}
    frontier = [top]
    while frontier:
        fresh = []
        for f in frontier:
            for s in facet_sets:
                g = f & s
                if g not in faces:
                    faces.add(g)
                    fresh.append(g)
        frontier = fresh
    faces.add(frozenset())
    dims = {}
    for f in faces:
        dims[f] = _affine_rank([p.local_vertices[i] for i in sorted(f)])
    lattice = FaceLattice(dims)
    logger.debug("face lattice of %r: f-vector %s", p, lattice.f_vector)
    return lattice


# ======================================================================
# Simplicity and equivalence
# ======================================================================
def is_simple(p):
    """True iff every vertex lies on exactly dim(P) edges."""
    lattice = p.lattice if isinstance(p, Polytope) else p
    if lattice.dim <= 0:
        return True
    return all(len(lattice.edges_at(v)) == lattice.dim for v in lattice.vertex_labels)


def _incidence_graph(lattice):
    g = nx.Graph()
    for v in lattice.vertex_labels:
        g.add_node(("v", v), kind="vertex")
    for j, facet in enumerate(lattice.facets):
        g.add_node(("f", j), kind="facet")
        for v in facet:
            g.add_edge(("v", v), ("f", j))
    return g


def combinatorially_equivalent(a, b):
    """
    Face bijection between two lattices, or None.

    Args:
        a, b: FaceLattice or Polytope

    Returns:
        dict face_of_a -> face_of_b (inclusion- and grading-preserving), or None.
    """
    a = a.lattice if isinstance(a, Polytope) else a
    b = b.lattice if isinstance(b, Polytope) else b
    if a.dim != b.dim or a.f_vector != b.f_vector:
        return None
    matcher = isomorphism.GraphMatcher(
        _incidence_graph(a), _incidence_graph(b),
        node_match=lambda x, y: x["kind"] == y["kind"],
    )
    if not matcher.is_isomorphic():
        return None
    vmap = {node[1]: image[1] for node, image in matcher.mapping.items()
            if node[0] == "v"}
    bijection = {f: frozenset(vmap[v] for v in f) for f in a.faces}
    for f, g in bijection.items():
        if g not in b or b.dim_of(g) != a.dim_of(f):
            return None
    return bijection
