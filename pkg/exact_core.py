"""
Exact rational scalars and dense exact linear algebra.

Scalars are ``fractions.Fraction`` (aliased ``Rat``).  ``Mat`` keeps a numpy
object array of Fractions so slicing, stacking and products stay exact;
rank, reduced row echelon form, kernels, inverses and determinants are
delegated to sympy's ``DomainMatrix`` over ``QQ``.  Signatures of symmetric
forms come from congruence diagonalization, never from eigenvalues.
"""

import logging
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

Rat = Fraction


# ======================================================================
# Scalars
# ======================================================================
def rat(value):
    """
    Coerce a scalar to a reduced Fraction.

    Args:
        value: int (numpy integers included), Fraction, or a string such as
               "3", "-2/5".  Floats are rejected.

    Returns:
        Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Booleans are not rational scalars: {value!r}")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Not a rational number: {value!r}") from exc
    if isinstance(value, numbers.Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    raise ValueError(
        f"Unsupported scalar {value!r} ({type(value).__name__}); "
        "use an int, a Fraction or a 'p/q' string."
    )


def rat_to_str(value):
    """Serialize as "p/q" ("p" when the denominator is 1)."""
    return str(rat(value))


def rat_vector(values):
    return [rat(v) for v in values]


def primitive_integer_vector(values):
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    vec = rat_vector(values)
    if all(v == 0 for v in vec):
        raise ValueError("Cannot normalize the zero vector.")
    scale = math.lcm(*(v.denominator for v in vec))
    ints = [int(v * scale) for v in vec]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints)


def dot(u, v):
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


# ======================================================================
# Mat
# ======================================================================
class Mat:
    """
    Dense exact matrix.

    Args:
        data: 2-D list (or numpy array) of scalars accepted by ``rat``.
        cols: column count, only needed when ``data`` has no rows.
    """

    def __init__(self, data, cols=None):
        rows = [list(r) for r in data]
        if rows:
            width = len(rows[0])
            for i, r in enumerate(rows):
                if len(r) != width:
                    raise ValueError(
                        f"Row {i} has {len(r)} entries, expected {width}."
                    )
        else:
            width = 0 if cols is None else cols
        self._a = np.empty((len(rows), width), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                self._a[i, j] = rat(x)

    # ── constructors ──
    @classmethod
    def _wrap(cls, arr):
        m = cls.__new__(cls)
        m._a = np.empty(arr.shape, dtype=object)
        for idx, x in np.ndenumerate(arr):
            m._a[idx] = rat(x)
        return m

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], cols=n)

    @classmethod
    def from_columns(cls, columns, rows):
        """Matrix whose j-th column is ``columns[j]`` (each of length ``rows``)."""
        if not columns:
            return cls.zeros(rows, 0)
        return cls([[columns[j][i] for j in range(len(columns))] for i in range(rows)])

    # ── shape and access ──
    @property
    def rows(self):
        return self._a.shape[0]

    @property
    def cols(self):
        return self._a.shape[1]

    @property
    def shape(self):
        return self._a.shape

    @property
    def array(self):
        """The underlying object array (treat as read-only)."""
        return self._a

    @property
    def entries(self):
        """Row-major entries."""
        return [x for row in self.tolist() for x in row]

    def __getitem__(self, idx):
        return self._a[idx]

    def row(self, i):
        return list(self._a[i, :])

    def col(self, j):
        return list(self._a[:, j])

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def tolist(self):
        return [list(r) for r in self._a]

    def submatrix(self, rows, cols):
        return Mat._wrap(self._a[np.ix_(list(rows), list(cols))]) if rows and cols \
            else Mat.zeros(len(rows), len(cols))

    # ── algebra ──
    @property
    def T(self):
        return Mat._wrap(self._a.T)

    def __matmul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise ValueError(
                    f"Shape mismatch: {self.shape} @ {other.shape}."
                )
            if self.cols == 0:
                return Mat.zeros(self.rows, other.cols)
            return Mat._wrap(self._a.dot(other._a))
        vec = rat_vector(other)
        if len(vec) != self.cols:
            raise ValueError(
                f"Vector of length {len(vec)} cannot multiply a {self.shape} matrix."
            )
        return [dot(self.row(i), vec) for i in range(self.rows)]

    def __add__(self, other):
        return Mat._wrap(self._a + other._a)

    def __sub__(self, other):
        return Mat._wrap(self._a - other._a)

    def __neg__(self):
        return Mat._wrap(-self._a)

    def scale(self, factor):
        factor = rat(factor)
        return Mat._wrap(self._a * factor)

    def __eq__(self, other):
        return isinstance(other, Mat) and self.shape == other.shape \
            and all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.shape, tuple(self.entries)))

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.tolist())
        return f"Mat({self.rows}x{self.cols}: [{body}])"

    def is_symmetric(self):
        return self.rows == self.cols and all(
            self._a[i, j] == self._a[j, i]
            for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def is_zero(self):
        return all(x == 0 for x in self.entries)

    def to_json(self):
        return [[rat_to_str(x) for x in r] for r in self.tolist()]


def hstack(mats, rows=None):
    mats = list(mats)
    if not mats:
        return Mat.zeros(rows or 0, 0)
    height = mats[0].rows
    return Mat([sum((m.row(i) for m in mats), []) for i in range(height)],
               cols=sum(m.cols for m in mats))


def vstack(mats, cols=None):
    mats = list(mats)
    width = mats[0].cols if mats else (cols or 0)
    return Mat([r for m in mats for r in m.tolist()], cols=width)


def block_diagonal(mats):
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return Mat(out, cols=cols)


def kron(a, b):
    """Kronecker product of two exact matrices."""
    if 0 in a.shape or 0 in b.shape:
        return Mat.zeros(a.rows * b.rows, a.cols * b.cols)
    outer = np.multiply.outer(a.array, b.array)          # (r1, c1, r2, c2)
    arr = outer.transpose(0, 2, 1, 3).reshape(a.rows * b.rows, a.cols * b.cols)
    return Mat._wrap(arr)


def matrix_power_chain(mats):
    """Compose ``mats[-1] @ ... @ mats[0]``; an empty chain is not allowed."""
    out = mats[0]
    for m in mats[1:]:
        out = m @ out
    return out


# ======================================================================
# DomainMatrix bridge
# ======================================================================
def _to_domain(m):
    return DomainMatrix.from_list(
        [[(x.numerator, x.denominator) for x in r] for r in m.tolist()], QQ
    )


def _from_domain_rows(rows):
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in r] for r in rows]


def rank(m):
    if m.rows == 0 or m.cols == 0:
        return 0
    return _to_domain(m).rank()


def rref(m):
    """
    Reduced row echelon form.

    Returns:
        (Mat, tuple of pivot column indices)
    """
    if m.rows == 0 or m.cols == 0:
        return Mat.zeros(m.rows, m.cols), ()
    reduced, pivots = _to_domain(m).rref()
    return Mat(_from_domain_rows(reduced.to_list()), cols=m.cols), tuple(pivots)


def independent_columns(m):
    """Indices of a first-come maximal set of linearly independent columns."""
    return list(rref(m)[1])


def kernel_basis(m):
    """
    Basis of {x : m x = 0}.

    Returns:
        list of vectors (lists of Fraction); length is cols - rank(m).
    """
    if m.cols == 0:
        return []
    if m.rows == 0:
        return Mat.identity(m.cols).tolist()
    null = _to_domain(m).nullspace()
    return _from_domain_rows(null.to_list())


def left_kernel_basis(m):
    """Basis of {y : yᵀ m = 0}."""
    return kernel_basis(m.T)


def solve(m, b):
    """
    One solution of m x = b, or None when the system is inconsistent.

    Args:
        m: Mat
        b: vector of length m.rows

    Returns:
        list of Fraction (free variables set to 0) or None
    """
    b = rat_vector(b)
    if len(b) != m.rows:
        raise ValueError(
            f"Right-hand side has length {len(b)}, matrix has {m.rows} rows."
        )
    if m.rows == 0:
        return [Fraction(0)] * m.cols
    augmented = Mat([m.row(i) + [b[i]] for i in range(m.rows)])
    reduced, pivots = rref(augmented)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for r, c in enumerate(pivots):
        x[c] = reduced[r, m.cols]
    return x


def solve_unique(m, b):
    """The unique solution of m x = b, or None if there is none or more than one."""
    b = rat_vector(b)
    if m.rows == 0 or m.cols == 0:
        return [] if m.cols == 0 and all(v == 0 for v in b) else None
    augmented = Mat([m.row(i) + [b[i]] for i in range(m.rows)])
    reduced, pivots = rref(augmented)
    if pivots != tuple(range(m.cols)):
        return None
    return [reduced[r, m.cols] for r in range(m.cols)]


def inverse(m):
    if m.rows != m.cols:
        raise ValueError(f"Only square matrices are invertible, got {m.shape}.")
    if m.rows == 0:
        return Mat.zeros(0, 0)
    if rank(m) < m.rows:
        raise ValueError("Matrix is singular.")
    return Mat(_from_domain_rows(_to_domain(m).inv().to_list()))


def determinant(m):
    if m.rows != m.cols:
        raise ValueError(f"Determinant needs a square matrix, got {m.shape}.")
    if m.rows == 0:
        return Fraction(1)
    d = _to_domain(m).det()
    return Fraction(int(d.numerator), int(d.denominator))


class CoordinateSolver:
    """
    Coordinates with respect to the columns of a full-column-rank matrix.

    The columns span a subspace; ``coordinates(v)`` returns c with
    ``basis @ c == v`` for any v in that span (membership is checked).
    """

    def __init__(self, basis):
        self.basis = basis
        if rank(basis) != basis.cols:
            raise ValueError(
                f"Basis columns are dependent (rank {rank(basis)} < {basis.cols})."
            )
        self._rows = independent_columns(basis.T)
        self._inv = inverse(basis.submatrix(self._rows, range(basis.cols)))

    def coordinates(self, v, check=True):
        v = rat_vector(v)
        c = self._inv @ [v[i] for i in self._rows]
        if check and self.basis @ c != v:
            raise ValueError("Vector does not lie in the span of the basis.")
        return c


# ======================================================================
# Signatures
# ======================================================================
@dataclass(frozen=True)
class Signature:
    pos: int
    neg: int
    zero: int

    @property
    def dim(self):
        return self.pos + self.neg + self.zero

    @property
    def sign(self):
        return self.pos - self.neg

    def is_definite(self, sign):
        """True when the form is nondegenerate with every direction of the given sign."""
        if self.zero:
            return False
        return self.neg == 0 if sign > 0 else self.pos == 0

    def as_list(self):
        return [self.pos, self.neg, self.zero]


def signature_of(sym):
    """
    Signature of a symmetric form by congruence diagonalization.

    Pivot on the diagonal entry of largest absolute value (lowest index on
    ties); when the whole remaining diagonal is zero but the form is not,
    split off a 2x2 hyperbolic block, which contributes (1, 1).
    """
    if not sym.is_symmetric():
        raise ValueError("signature_of needs a symmetric matrix.")
    a = sym.tolist()
    active = list(range(sym.rows))
    pos = neg = 0
    while active:
        p = max(active, key=lambda i: (abs(a[i][i]), -i))
        d = a[p][p]
        if d != 0:
            if d > 0:
                pos += 1
            else:
                neg += 1
            active.remove(p)
            for i in active:
                f = a[i][p] / d
                if f:
                    for j in active:
                        a[i][j] -= f * a[p][j]
            continue

        pair = next(
            ((i, j) for i in active for j in active if i < j and a[i][j] != 0),
            None,
        )
        if pair is None:
            break
        i, j = pair
        b = a[i][j]
        pos += 1
        neg += 1
        active.remove(i)
        active.remove(j)
        # Schur complement against [[0, b], [b, 0]]
        for r in active:
            ri, rj = a[r][i], a[r][j]
            if ri == 0 and rj == 0:
                continue
            for s in active:
                a[r][s] -= (ri * a[j][s] + rj * a[i][s]) / b
    sig = Signature(pos, neg, sym.rows - pos - neg)
    logger.debug("signature of %dx%d form: %s", sym.rows, sym.cols, sig)
    return sig
