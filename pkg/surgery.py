"""
Polytope surgery: joins, pyramids, products, transversal cuts, germs,
links, residuals, stoutness, the defect μ, the cut-off pipeline and the
deformation family Q_t of a germ into F × Π(L).

Every construction is exact.  Faces are frozensets of vertex indices of
the polytope they belong to.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from exact_core import (
    CoordinateSolver,
    Mat,
    dot,
    independent_columns,
    kernel_basis,
    rat,
    rat_to_str,
    solve,
)
from polytope_lattice import (
    AffineChart,
    FaceLattice,
    Halfspace,
    Polytope,
    face_polytope,
    is_simple,
    vertices_from_halfspaces,
)

logger = logging.getLogger(__name__)


class NonTransversalCutError(ValueError):
    """The hyperplane passes through a vertex or misses the interior."""


class PreconditionError(ValueError):
    """An operation was called on inputs outside its stated domain."""


# ======================================================================
# Result types
# ======================================================================
@dataclass(frozen=True)
class CutResult:
    """piece1 = P ∩ {<n,x> <= c}, piece2 = P ∩ {<n,x> >= c}."""

    piece1: Polytope
    piece2: Polytope
    cut_facet: Polytope
    hyperplane: Halfspace


@dataclass(frozen=True)
class GermLink:
    germ: Polytope
    residual: Polytope
    link: Polytope
    face: frozenset
    hyperplane: Halfspace


@dataclass
class StoutReport:
    normally_stout_faces: list
    defect: int
    minimal_ns_face: frozenset = None

    def to_json(self):
        return {
            "normally_stout_faces": [sorted(f) for f in self.normally_stout_faces],
            "defect": self.defect,
            "minimal_ns_face": sorted(self.minimal_ns_face)
            if self.minimal_ns_face is not None else None,
        }


@dataclass
class StoutFactorization:
    """P = B * S with B the maximal stout face and S a (c-1)-simplex."""

    base: frozenset
    codim: int
    complement: frozenset
    simplex_convention: bool = False
    join_verified: bool = True

    def to_json(self):
        return {
            "base": sorted(self.base),
            "codim": self.codim,
            "complement": sorted(self.complement),
            "simplex_convention": self.simplex_convention,
            "join_verified": self.join_verified,
        }


@dataclass
class NormalTriviality:
    trivial: bool
    witnesses: dict = field(default_factory=dict)

    def __bool__(self):
        return self.trivial

    def to_json(self):
        return {
            "trivial": self.trivial,
            "witnesses": {str(a): sorted(g) for a, g in sorted(self.witnesses.items())},
        }


@dataclass
class CutoffStep:
    face: frozenset
    polytope: Polytope
    residual: Polytope
    mu_before: int
    mu_after: int

    def to_json(self):
        return {
            "face": sorted(self.face),
            "mu_before": self.mu_before,
            "mu_after": self.mu_after,
            "residual": self.residual.to_json(),
        }


def _lattice(p):
    return p.lattice if isinstance(p, Polytope) else p


def _proper_face(lattice, f):
    f = frozenset(f)
    if f not in lattice:
        raise PreconditionError(f"{sorted(f)} is not a face.")
    if not f or f == lattice.top:
        raise PreconditionError("Expected a proper nonempty face.")
    return f


# ======================================================================
# Join, pyramid, product
# ======================================================================
def join(q1, q2, auto_position=False):
    """
    Convex hull of two skew polytopes.

    Args:
        q1, q2: Polytope
        auto_position: place q1 at height 0 and q2 at height 1 in fresh
                       coordinates of Q^{d1 + d2 + 1}.
    """
    if auto_position:
        a = q1.to_full_dimensional()
        b = q2.to_full_dimensional()
        d1, d2 = a.ambient_dim, b.ambient_dim
        zero1, zero2 = [0] * d1, [0] * d2
        verts = [list(v) + zero2 + [0] for v in a.vertices]
        verts += [zero1 + list(w) + [1] for w in b.vertices]
        return Polytope(verts, ambient_dim=d1 + d2 + 1)

    if q1.ambient_dim != q2.ambient_dim:
        raise PreconditionError(
            f"Join needs a common ambient space, got {q1.ambient_dim} and "
            f"{q2.ambient_dim}; pass auto_position=True to embed them."
        )
    union = list(q1.vertices) + [w for w in q2.vertices if w not in q1.vertices]
    hull_dim = AffineChart(union).dim
    if hull_dim != q1.dim + q2.dim + 1:
        raise PreconditionError(
            f"Polytopes are not skew: dim aff(Q1 ∪ Q2) = {hull_dim}, "
            f"expected {q1.dim + q2.dim + 1}."
        )
    return Polytope(union, ambient_dim=q1.ambient_dim)


def pyramid(base):
    """Apex one unit along a fresh last coordinate above the vertex barycenter."""
    verts = [list(v) + [0] for v in base.vertices]
    verts.append(list(base.barycenter()) + [1])
    return Polytope(verts, ambient_dim=base.ambient_dim + 1)


def product(p1, p2):
    verts = [list(v) + list(w) for v in p1.vertices for w in p2.vertices]
    return Polytope(verts, ambient_dim=p1.ambient_dim + p2.ambient_dim)


# ======================================================================
# Cuts
# ======================================================================
def supporting_functional(p, f):
    """Sum of the outer facet normals through f; P ∩ {max} = f."""
    normals = [h.normal for h, tight in zip(p.facets, p.facet_vertex_sets) if f <= tight]
    return tuple(sum(c, Fraction(0)) for c in zip(*normals))


def nearby_cut_hyperplane(p, f):
    """
    Hyperplane parallel to a supporting hyperplane of f, cutting f off.

    Returns:
        Halfspace {<a, x> <= c} whose complement side contains exactly the
        vertices of f; c is the midpoint between the support value on f and
        the largest value on the remaining vertices.
    """
    f = _proper_face(p.lattice, f)
    a = supporting_functional(p, f)
    values = [dot(a, v) for v in p.vertices]
    on_face = {values[i] for i in f}
    rest = max(values[i] for i in range(len(values)) if i not in f)
    top = on_face.pop()
    if on_face or rest >= top:
        raise RuntimeError(f"Supporting functional does not isolate face {sorted(f)}.")
    return Halfspace(a, (top + rest) / 2)


def transversal_cut(p, h):
    """
    Cut p by the boundary hyperplane of h.

    Pieces keep the original vertices of their side and gain the points
    where edges cross the hyperplane.
    """
    slack = [h.slack(v) for v in p.vertices]
    on_plane = [i for i, s in enumerate(slack) if s == 0]
    if on_plane:
        raise NonTransversalCutError(f"Vertices {on_plane} lie on the cutting hyperplane.")
    below = [i for i, s in enumerate(slack) if s < 0]
    above = [i for i, s in enumerate(slack) if s > 0]
    if not below or not above:
        raise NonTransversalCutError("The cutting hyperplane does not meet the interior.")

    crossings = []
    for edge in p.lattice.of_dim(1):
        i, j = sorted(edge)
        if (slack[i] < 0) != (slack[j] < 0):
            t = slack[i] / (slack[i] - slack[j])
            vi, vj = p.vertices[i], p.vertices[j]
            crossings.append(tuple(a + t * (b - a) for a, b in zip(vi, vj)))

    n = p.ambient_dim
    piece1 = Polytope([p.vertices[i] for i in below] + crossings, ambient_dim=n)
    piece2 = Polytope([p.vertices[i] for i in above] + crossings, ambient_dim=n)
    cut_facet = Polytope(crossings, ambient_dim=n)
    logger.debug("cut %r into %d + %d vertices, cut facet %d vertices",
                 p, len(piece1.vertices), len(piece2.vertices), len(crossings))
    return CutResult(piece1, piece2, cut_facet, h)


def polytope_section(p, equations, rhs):
    """
    P ∩ {x : equations·x = rhs}, in coordinates of a kernel basis.

    Args:
        p: full-dimensional Polytope
        equations: list of row vectors
        rhs: right-hand sides

    Returns:
        Polytope of dimension (ambient - rank(equations)) in its own chart.
    """
    if not p.is_full_dimensional:
        raise PreconditionError("polytope_section needs a full-dimensional polytope.")
    eq = Mat(equations, cols=p.ambient_dim)
    x0 = solve(eq, rhs)
    if x0 is None:
        raise PreconditionError("Section equations are inconsistent.")
    basis = kernel_basis(eq)
    normals = [[dot(h.normal, w) for w in basis] for h in p.facets]
    offsets = [h.offset - dot(h.normal, x0) for h in p.facets]
    verts = vertices_from_halfspaces(normals, offsets, len(basis))
    if not verts:
        raise PreconditionError("The section is empty.")
    return Polytope(verts, ambient_dim=len(basis))


def germ_link_residual(p, f):
    """
    Germ, residual and link of p along a proper face f.

    The link of a vertex is the cut facet; for dim f > 0 it is taken in the
    affine subspace through the vertex barycenter of f orthogonal to f's
    direction space.  Returned polytopes live in p's chart coordinates
    (ambient coordinates when p is full-dimensional); the link lives in
    its own chart.
    """
    q = p.to_full_dimensional()
    f = _proper_face(q.lattice, f)
    h = nearby_cut_hyperplane(q, f)
    cut = transversal_cut(q, h)
    if len(f) == 1:
        link = cut.cut_facet.to_full_dimensional()
    else:
        directions = _face_directions(q, f)
        center = q.barycenter(f)
        equations = directions + [list(h.normal)]
        rhs = [dot(d, center) for d in directions] + [h.offset]
        link = polytope_section(q, equations, rhs)
    return GermLink(germ=cut.piece2, residual=cut.piece1, link=link, face=f, hyperplane=h)


def _face_directions(p, f):
    """Independent difference vectors spanning the direction space of face f."""
    idx = sorted(f)
    base = p.vertices[idx[0]]
    diffs = [[a - b for a, b in zip(p.vertices[i], base)] for i in idx[1:]]
    if not diffs:
        return []
    keep = independent_columns(Mat.from_columns(diffs, p.ambient_dim))
    return [diffs[j] for j in keep]


# ======================================================================
# Lattice-level links and joins
# ======================================================================
def face_sublattice(lattice, f):
    """Faces of the face f, as a lattice with the same vertex labels."""
    f = frozenset(f)
    return FaceLattice({g: lattice.dim_of(g) for g in lattice.faces if g <= f})


def link_lattice(lattice, f, with_map=False):
    """
    Face lattice of the link of f: the interval [f, P].

    Link vertices are labelled 0, 1, ... in the order of the faces covering f.

    Returns:
        FaceLattice, or (FaceLattice, dict P-face -> link face) with ``with_map``.
    """
    lattice = _lattice(lattice)
    f = frozenset(f)
    d = lattice.dim_of(f)
    atoms = lattice.upper_covers(f)
    mapping = {}
    for g in lattice.faces:
        if f <= g:
            mapping[g] = frozenset(i for i, a in enumerate(atoms) if a <= g)
    link = FaceLattice({mapping[g]: lattice.dim_of(g) - d - 1 for g in mapping})
    return (link, mapping) if with_map else link


def is_join(lattice, x, y):
    """True iff the lattice is the join of its faces x and y (vertex partition, all joins present)."""
    x, y = frozenset(x), frozenset(y)
    if x not in lattice or y not in lattice:
        return False
    if x & y or (x | y) != lattice.top:
        return False
    fx = [g for g in lattice.faces if g <= x]
    fy = [g for g in lattice.faces if g <= y]
    if len(fx) * len(fy) != len(lattice):
        return False
    for gx in fx:
        for gy in fy:
            u = gx | gy
            if u not in lattice or lattice.dim_of(u) != lattice.dim_of(gx) + lattice.dim_of(gy) + 1:
                return False
    return True


# ======================================================================
# Stoutness and the defect
# ======================================================================
def is_stout(p):
    """True iff every facet misses at least two vertices."""
    lattice = _lattice(p)
    verts = set(lattice.vertex_labels)
    return all(len(verts - set(facet)) >= 2 for facet in lattice.facets)


def stout_factorization(p):
    """
    The unique maximal stout face B and c = codim B, with P = B * S_{c-1}.

    Simplices have no stout face; they are reported with B = ∅,
    c = dim + 1 and ``simplex_convention`` set.
    """
    lattice = _lattice(p)
    stout = [f for f in lattice.faces if f and is_stout(face_sublattice(lattice, f))]
    if not stout:
        return StoutFactorization(frozenset(), lattice.dim + 1, lattice.top,
                                  simplex_convention=True)
    maximal = [f for f in stout if not any(f < g for g in stout)]
    if len(maximal) != 1:
        raise RuntimeError(
            f"Expected one maximal stout face, found {[sorted(f) for f in maximal]}."
        )
    base = maximal[0]
    complement = lattice.top - base
    codim = lattice.dim - lattice.dim_of(base)
    if complement:
        verified = complement in lattice and len(complement) == codim \
            and lattice.dim_of(complement) == codim - 1 and is_join(lattice, base, complement)
    else:
        verified = codim == 0
    return StoutFactorization(base, codim, complement, join_verified=verified)


def normally_stout_report(p):
    """Normally stout faces (stout links), the defect μ and the minimal one."""
    lattice = _lattice(p)
    ns = [f for f in lattice.proper_faces if f and is_stout(link_lattice(lattice, f))]
    minimal = ns[0] if ns else None
    logger.debug("defect %d, normally stout faces %s", len(ns), [sorted(f) for f in ns])
    return StoutReport(ns, len(ns), minimal)


def is_normally_trivial(p, f):
    """
    Whether the link at every vertex a of f splits as L_F(a) * S_a.

    Witnesses map each vertex a to the face of P through a whose link
    image is S_a.
    """
    lattice = _lattice(p)
    f = _proper_face(lattice, f)
    witnesses = {}
    for a in sorted(f):
        link, labels = link_lattice(lattice, {a}, with_map=True)
        lf = labels[f]
        complement = link.top - lf
        if complement not in link or not is_join(link, lf, complement):
            return NormalTriviality(False, witnesses)
        witnesses[a] = next(g for g, image in labels.items() if image == complement)
    return NormalTriviality(True, witnesses)


def cutoff_pipeline(p):
    """
    Cut off minimal normally stout faces until the polytope is simple.

    Returns:
        list of CutoffStep; μ drops by exactly one per step.
    """
    current = p.to_full_dimensional()
    report = normally_stout_report(current)
    steps = []
    while report.defect > 0:
        face = report.minimal_ns_face
        h = nearby_cut_hyperplane(current, face)
        residual = transversal_cut(current, h).piece1
        after = normally_stout_report(residual)
        if after.defect != report.defect - 1:
            raise RuntimeError(
                f"Cutting off {sorted(face)} changed the defect from "
                f"{report.defect} to {after.defect}."
            )
        steps.append(CutoffStep(face, current, residual, report.defect, after.defect))
        logger.info("cut off face %s: defect %d -> %d", sorted(face),
                    report.defect, after.defect)
        current, report = residual, after
    return steps


# ======================================================================
# Deformation family
# ======================================================================
class _TransversalFrame:
    """
    Coordinates (u, w, height) around a face f.

    u: coordinates in aff(f) relative to its vertex barycenter b;
    w: coordinates in W = (direction of f)^⊥ ∩ a^⊥;
    height: 0 on f, 1 on the nearby cut hyperplane {<a, x> = c}.
    """

    def __init__(self, p, f, h):
        n = p.ambient_dim
        self.center = p.barycenter(f)
        self.directions = _face_directions(p, f)
        self.a = h.normal
        self.top = dot(self.a, p.vertices[min(f)])
        self.offset = h.offset
        d_mat = Mat.from_columns(self.directions, n)
        self._u = CoordinateSolver(d_mat.T @ d_mat) if self.directions else None
        self.d_mat = d_mat
        self.w_basis = kernel_basis(Mat(self.directions + [list(self.a)], cols=n))
        w_mat = Mat.from_columns(self.w_basis, n)
        self.w_mat = w_mat
        self._w = CoordinateSolver(w_mat.T @ w_mat) if self.w_basis else None

    def coordinates(self, x):
        rel = [a - b for a, b in zip(x, self.center)]
        if self._u is not None:
            u = self._u.coordinates(self.d_mat.T @ rel)
            along = self.d_mat @ u
        else:
            u, along = [], [Fraction(0)] * len(rel)
        normal_part = [r - s for r, s in zip(rel, along)]
        w = self._w.coordinates(self.w_mat.T @ normal_part) if self._w is not None else []
        height = (self.top - dot(self.a, x)) / (self.top - self.offset)
        return list(u), list(w), height


def deformation_family(p, f, t):
    """
    The polytope Q_t deforming the germ along f (t = 1) into F × Π(L) (t = 0).

    Vertices are (u_i, 0, 0) for the vertices of f and
    (u_i + t·u_ij, w_j, 1) for each cut point on an edge leaving f at u_i.

    Raises:
        PreconditionError unless 0 <= t <= 1, f is simple and f is
        normally trivial.
    """
    t = rat(t)
    if not 0 <= t <= 1:
        raise PreconditionError(f"t must lie in [0, 1], got {rat_to_str(t)}.")
    q = p.to_full_dimensional()
    f = _proper_face(q.lattice, f)
    if not is_simple(face_polytope(q, f)):
        raise PreconditionError(f"Face {sorted(f)} is not a simple polytope.")
    if not is_normally_trivial(q, f):
        raise PreconditionError(f"Face {sorted(f)} is not normally trivial.")

    h = nearby_cut_hyperplane(q, f)
    frame = _TransversalFrame(q, f, h)
    zeros_w = [Fraction(0)] * len(frame.w_basis)
    verts = []
    for i in sorted(f):
        u, _, _ = frame.coordinates(q.vertices[i])
        verts.append(u + zeros_w + [Fraction(0)])
    slack = [h.slack(v) for v in q.vertices]
    for edge in q.lattice.of_dim(1):
        inside = [i for i in edge if i in f]
        if len(inside) != 1:
            continue
        i = inside[0]
        j = next(iter(edge - {i}))
        s = slack[i] / (slack[i] - slack[j])
        x = tuple(a + s * (b - a) for a, b in zip(q.vertices[i], q.vertices[j]))
        ui, _, _ = frame.coordinates(q.vertices[i])
        ux, wx, height = frame.coordinates(x)
        if height != 1:
            raise RuntimeError("Cut point is not at height 1 in the transversal frame.")
        verts.append([a + t * (b - a) for a, b in zip(ui, ux)] + wx + [Fraction(1)])
    return Polytope(verts, ambient_dim=q.ambient_dim)


def germ_facets_meeting_face(germ, face_points):
    """Facets of the germ whose intersection with F is a facet of F."""
    idx = frozenset(i for i, v in enumerate(germ.vertices) if v in face_points)
    dim_f = germ.lattice.dim_of(idx) if idx in germ.lattice else None
    out = []
    for facet in germ.lattice.facets:
        meet = facet & idx
        if dim_f is not None and meet in germ.lattice and germ.lattice.dim_of(meet) == dim_f - 1:
            out.append(facet)
    return idx, out
