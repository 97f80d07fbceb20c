"""
HR-modules: graded real vector spaces W = ⊕ W^k with a degree-2 operator L
and a pairing ⟨W^{-k}, W^k⟩ ⊂ i^k R.

Complex scalars never appear.  For k >= 0 the pairing is stored as a real
matrix P_k (rows: basis of W^{-k}, columns: basis of W^k) meaning
⟨x, y⟩ = i^k xᵀ P_k y.  Symmetry of the pairing fixes the opposite block,
R_{-k} = (-1)^k P_kᵀ.  The HR property asks that

    G_k = (-1)^k P_k L^k

is positive definite on the primitive part P(W^{-k}) = ker L^{k+1}.
"""

import logging
from dataclasses import dataclass, field

from exact_core import (
    Mat,
    block_diagonal,
    kernel_basis,
    kron,
    matrix_power_chain,
    rank,
    signature_of,
)

logger = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """An HR-module operation was called on unsuitable input."""


@dataclass
class SimpleTag:
    """Multiplicities m -> mult of the simple modules A_m in a decomposition."""

    multiplicities: dict = field(default_factory=dict)

    def __post_init__(self):
        self.multiplicities = {m: c for m, c in sorted(self.multiplicities.items()) if c}

    def __eq__(self, other):
        return isinstance(other, SimpleTag) and self.multiplicities == other.multiplicities

    def dims(self):
        """Component dimensions dim W^k reconstructed from the multiplicities."""
        out = {}
        for m, c in self.multiplicities.items():
            for k in range(-m, m + 1, 2):
                out[k] = out.get(k, 0) + c
        return out

    def to_json(self):
        return {str(m): c for m, c in self.multiplicities.items()}


class HRModule:
    """
    Args:
        dims: dict weight k -> dimension of W^k
        pairing: dict k >= 0 -> Mat P_k of shape (dim W^{-k}, dim W^k)
        lefschetz: dict k -> Mat L_k of shape (dim W^{k+2}, dim W^k)
        validate: check the structural invariants (parity, shapes,
                  non-degeneracy, symmetry of P_0, self-adjointness of L)
    """

    def __init__(self, dims, pairing, lefschetz, validate=True):
        self.dims = {k: d for k, d in sorted(dims.items()) if d}
        self.pairing = dict(pairing)
        self.lefschetz = dict(lefschetz)
        if validate:
            self._validate()

    @property
    def weights(self):
        return list(self.dims)

    @property
    def top(self):
        return max((abs(k) for k in self.dims), default=0)

    def dim(self, k):
        return self.dims.get(k, 0)

    def L(self, k):
        """L: W^k → W^{k+2} (a zero map where nothing is stored)."""
        if k in self.lefschetz:
            return self.lefschetz[k]
        return Mat.zeros(self.dim(k + 2), self.dim(k))

    def R(self, a):
        """Real part of ⟨W^{-a}, W^a⟩ = i^a R_a, any sign of a."""
        if a >= 0:
            return self.pairing.get(a, Mat.zeros(self.dim(-a), self.dim(a)))
        p = self.pairing.get(-a, Mat.zeros(self.dim(a), self.dim(-a)))
        return p.T if a % 2 == 0 else -p.T

    def L_power(self, k, power):
        """L^power: W^k → W^{k + 2·power}."""
        if power == 0:
            return Mat.identity(self.dim(k))
        return matrix_power_chain([self.L(k + 2 * i) for i in range(power)])

    def _validate(self):
        parities = {k % 2 for k in self.dims}
        if len(parities) > 1:
            raise ValueError(f"Weights {self.weights} mix parities.")
        for k, mat in self.lefschetz.items():
            if mat.shape != (self.dim(k + 2), self.dim(k)):
                raise ValueError(
                    f"L_{k} has shape {mat.shape}, expected {(self.dim(k + 2), self.dim(k))}."
                )
        for k in range(self.top + 1):
            p = self.R(k)
            shape = (self.dim(-k), self.dim(k))
            if p.shape != shape:
                raise ValueError(f"P_{k} has shape {p.shape}, expected {shape}.")
            if shape[0] != shape[1] or rank(p) != shape[0]:
                raise ValueError(f"Pairing between W^{-k} and W^{k} is degenerate.")
        if not self.R(0).is_symmetric():
            raise ValueError("Pairing on W^0 is not symmetric.")
        for k in range(-self.top - 2, self.top + 1):
            lhs = self.L(-k - 2).T @ self.R(k)
            rhs = -(self.R(k + 2) @ self.L(k))
            if lhs.shape == rhs.shape and lhs != rhs:
                raise ValueError(f"L is not self-adjoint between weights {-k - 2} and {k}.")

    # ── HR property ──
    def gram(self, k):
        """G_k = (-1)^k P_k L^k on W^{-k}."""
        g = self.R(k) @ self.L_power(-k, k)
        return g if k % 2 == 0 else -g

    def primitive_basis(self, k):
        """Basis of P(W^{-k}) = ker L^{k+1}."""
        dim = self.dim(-k)
        if not dim:
            return []
        if not self.dim(k + 2):
            return Mat.identity(dim).columns()
        return kernel_basis(self.L_power(-k, k + 1))

    def to_json(self):
        return {
            "dims": {str(k): d for k, d in self.dims.items()},
            "lefschetz_ranks": {str(k): rank(m) for k, m in sorted(self.lefschetz.items())},
            "pairing_signatures": {str(k): signature_of(self.gram(k)).as_list()
                                   for k in range(self.top + 1) if self.dim(-k)},
        }

    def __repr__(self):
        return f"HRModule(dims={self.dims})"


# ======================================================================
# Constructions
# ======================================================================
def simple_module(m):
    """A_m: R in weights -m, -m+2, ..., m, L = 1, ⟨1, 1⟩ = (-i)^m between ±m."""
    if m < 0:
        raise ValueError(f"Simple modules are indexed by m >= 0, got {m}.")
    weights = range(-m, m + 1, 2)
    dims = {k: 1 for k in weights}
    lefschetz = {k: Mat([[1]]) for k in weights if k + 2 <= m}
    pairing = {k: Mat([[(-1) ** m * (-1) ** ((m - k) // 2)]]) for k in weights if k >= 0}
    return HRModule(dims, pairing, lefschetz)


def _blocks(row_dims, col_dims, blocks):
    """Assemble a block matrix from a dict (i, j) -> Mat, zeros elsewhere."""
    rows = []
    for i, r in enumerate(row_dims):
        parts = []
        for j, c in enumerate(col_dims):
            parts.append(blocks.get((i, j), Mat.zeros(r, c)))
        rows.append(parts)
    width = sum(col_dims)
    out = []
    for i, r in enumerate(row_dims):
        for a in range(r):
            out.append([x for part in rows[i] for x in part.row(a)])
    return Mat(out, cols=width)


def direct_sum(w1, w2):
    if w1.dims and w2.dims and {k % 2 for k in w1.dims} != {k % 2 for k in w2.dims}:
        raise ValueError("Direct sum needs modules of the same weight parity.")
    weights = sorted(set(w1.dims) | set(w2.dims))
    dims = {k: w1.dim(k) + w2.dim(k) for k in weights}
    lefschetz = {k: block_diagonal([w1.L(k), w2.L(k)]) for k in weights if k + 2 in dims}
    top = max((abs(k) for k in weights), default=0)
    pairing = {k: block_diagonal([w1.R(k), w2.R(k)]) for k in range(top + 1)
               if dims.get(k) or dims.get(-k)}
    return HRModule(dims, pairing, lefschetz)


def tensor(w1, w2):
    """
    Graded tensor product with L(x⊗y) = Lx⊗y + x⊗Ly and the product pairing.

    W^k has one summand W1^a ⊗ W2^b per pair a + b = k, ordered by a.
    """
    parts = {}
    for a in w1.dims:
        for b in w2.dims:
            parts.setdefault(a + b, []).append((a, b))
    for k in parts:
        parts[k].sort()
    dims = {k: sum(w1.dim(a) * w2.dim(b) for a, b in ps) for k, ps in parts.items()}

    lefschetz = {}
    for k, ps in parts.items():
        if k + 2 not in parts:
            continue
        target = parts[k + 2]
        blocks = {}
        for j, (a, b) in enumerate(ps):
            for i, (a2, b2) in enumerate(target):
                if (a2, b2) == (a + 2, b):
                    blocks[(i, j)] = kron(w1.L(a), Mat.identity(w2.dim(b)))
                elif (a2, b2) == (a, b + 2):
                    blocks[(i, j)] = kron(Mat.identity(w1.dim(a)), w2.L(b))
        lefschetz[k] = _blocks([w1.dim(x) * w2.dim(y) for x, y in target],
                               [w1.dim(x) * w2.dim(y) for x, y in ps], blocks)

    pairing = {}
    for k in sorted({abs(k) for k in parts}):
        rows, cols = parts.get(-k, []), parts.get(k, [])
        blocks = {}
        for i, (a, b) in enumerate(rows):
            for j, (a2, b2) in enumerate(cols):
                if (a2, b2) == (-a, -b):
                    blocks[(i, j)] = kron(w1.R(-a), w2.R(-b))
        pairing[k] = _blocks([w1.dim(x) * w2.dim(y) for x, y in rows],
                             [w1.dim(x) * w2.dim(y) for x, y in cols], blocks)
    return HRModule(dims, pairing, lefschetz)


# ======================================================================
# Properties
# ======================================================================
def is_hr_module(w):
    """i^k s_k is positive definite on P(W^{-k}) for every k >= 0."""
    for k in range(w.top + 1):
        if not w.dim(-k):
            continue
        prim = w.primitive_basis(k)
        if not prim:
            continue
        p = Mat.from_columns(prim, w.dim(-k))
        sig = signature_of(p.T @ w.gram(k) @ p)
        if not sig.is_definite(1):
            logger.debug("HR property fails at k=%d: signature %s", k, sig)
            return False
    return True


def decompose(w):
    """
    Multiplicities of the simple summands A_m, read off as dim P(W^{-m}).

    Raises:
        PreconditionError when w is not an HR-module or the dimensions do
        not reconstruct.
    """
    if not is_hr_module(w):
        raise PreconditionError("decompose needs an HR-module.")
    tag = SimpleTag({m: len(w.primitive_basis(m)) for m in range(w.top + 1) if w.dim(-m)})
    if tag.dims() != w.dims:
        raise PreconditionError(
            f"Primitive dimensions {tag.multiplicities} do not reconstruct {w.dims}."
        )
    return tag


def numerical_pd(w, subspaces):
    """
    dim U^{-k} = dim U^k for an L-closed graded subspace.

    Args:
        w: HRModule
        subspaces: dict k -> list of column vectors spanning U^k ⊂ W^k

    Raises:
        PreconditionError when U is not closed under L.
    """
    dims = {}
    for k, vecs in subspaces.items():
        dims[k] = rank(Mat.from_columns(vecs, w.dim(k))) if vecs else 0
    for k, vecs in subspaces.items():
        if not vecs or not w.dim(k + 2):
            continue
        images = [w.L(k) @ v for v in vecs]
        target = subspaces.get(k + 2, [])
        combined = rank(Mat.from_columns(list(target) + images, w.dim(k + 2)))
        if combined != dims.get(k + 2, 0):
            raise PreconditionError(f"Subspace is not closed under L at weight {k}.")
    return all(dims.get(k, 0) == dims.get(-k, 0) for k in dims)


def from_engine(ic):
    """
    W(P): W^k = IH^{n+k} with the intersection pairing multiplied by (-i)^n.

    Args:
        ic: IntersectionCohomology of a polytope
    """
    n = ic.n
    b = ic.betti_by_degree
    dims = {2 * d - n: b[d] for d in range(n + 1) if b[d]}
    lefschetz = {}
    for d in range(n):
        if b[d] and b[d + 1]:
            lefschetz[2 * d - n] = ic.lefschetz_power(d, 1)
    pairing = {}
    for d in range((n + 1) // 2, n + 1):
        k = 2 * d - n
        if not b[d]:
            continue
        c = ic.cross_gram(n - d, d)
        pairing[k] = c if ((n + k) // 2) % 2 == 0 else -c
    return HRModule(dims, pairing, lefschetz)


def format_tag(tag):
    """Readable decomposition line."""
    if not tag.multiplicities:
        return "0"
    return " ⊕ ".join(f"A_{m}" if c == 1 else f"{c}·A_{m}"
                      for m, c in sorted(tag.multiplicities.items(), reverse=True))


if __name__ == "__main__":
    for n in range(1, 5):
        product_tag = decompose(tensor(simple_module(n), simple_module(1)))
        print(f"A_{n} ⊗ A_1 = {format_tag(product_tag)}")
