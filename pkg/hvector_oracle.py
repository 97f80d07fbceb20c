"""
Toric h-vector of a polytope from its face lattice alone.

The recursion runs over the dual lattice so that h_i equals the even
intersection cohomology Betti number b_{2i} of the outer normal fan: for a
face G let ρ(G) = dim P - dim G; then

    h(G) = Σ_{G ⊊ H ⊆ P} g(H) · (x - 1)^(ρ(G) - ρ(H) - 1),   g(P) = 1,

g(H) is h(H) truncated to its differences up to degree ⌊(ρ(H) - 1)/2⌋,
and the toric h-vector of P is h(∅).
"""

import logging
from dataclasses import dataclass

from sympy import Poly, ZZ, symbols

from polytope_lattice import Polytope

logger = logging.getLogger(__name__)

x = symbols("x")


@dataclass(frozen=True)
class HVec:
    h: tuple
    g: tuple

    def to_json(self):
        return {"h": list(self.h), "g": list(self.g)}


def _coefficients(poly, length):
    """Coefficients h_0..h_{length-1}, low degree first."""
    coeffs = [int(c) for c in reversed(poly.all_coeffs())] if not poly.is_zero else []
    return coeffs + [0] * (length - len(coeffs))


def _truncate(coeffs, rank):
    top = (rank - 1) // 2
    return [coeffs[0]] + [coeffs[i] - coeffs[i - 1] for i in range(1, top + 1)]


def toric_h(lattice):
    """
    Toric h- and g-vector of a polytope.

    Args:
        lattice: FaceLattice or Polytope

    Returns:
        HVec with h_0..h_d and g_0..g_{⌊d/2⌋}

    Raises:
        ValueError when the lattice is not Eulerian.
    """
    lattice = lattice.lattice if isinstance(lattice, Polytope) else lattice
    if not lattice.is_eulerian():
        raise ValueError("Toric h-vector needs an Eulerian face lattice.")
    d = lattice.dim
    rho = {f: d - lattice.dim_of(f) for f in lattice.faces}
    one = Poly(1, x, domain=ZZ)
    shift = Poly(x - 1, x, domain=ZZ)
    g_memo = {lattice.top: one}

    def h_of(face):
        total = Poly(0, x, domain=ZZ)
        for above in lattice.faces:
            if face < above:
                total += g_of(above) * shift ** (rho[face] - rho[above] - 1)
        return total

    def g_of(face):
        if face not in g_memo:
            coeffs = _coefficients(h_of(face), rho[face])
            g = _truncate(coeffs, rho[face])
            g_memo[face] = Poly(list(reversed(g)), x, domain=ZZ)
        return g_memo[face]

    h = _coefficients(h_of(frozenset()), d + 1)
    g = _truncate(h, d + 1)
    logger.debug("toric h %s, g %s over %d faces", h, g, len(lattice))
    return HVec(tuple(h), tuple(g))


def check_h_properties(h):
    """
    Symmetry, non-negativity and unimodality of an h-vector.

    Args:
        h: HVec or a sequence of integers

    Returns:
        dict with one boolean per property, "ok" and a "summary" line.
    """
    values = list(h.h if isinstance(h, HVec) else h)
    half = len(values) // 2
    symmetric = values == values[::-1]
    nonnegative = all(v >= 0 for v in values)
    unimodal = all(values[i] <= values[i + 1] for i in range((len(values) - 1) // 2)) \
        and all(values[i] >= values[i + 1] for i in range(half, len(values) - 1))
    result = {
        "h": values,
        "symmetric": symmetric,
        "nonnegative": nonnegative,
        "unimodal": unimodal,
        "ok": symmetric and nonnegative and unimodal,
    }
    marks = ", ".join(f"{k}={'yes' if result[k] else 'NO'}"
                      for k in ("symmetric", "nonnegative", "unimodal"))
    result["summary"] = f"h = {tuple(values)}: {marks}"
    return result


if __name__ == "__main__":
    import polytope_corpus

    for name in ("simplex3", "cube3", "square_pyramid", "pyramid_over_cube"):
        hv = toric_h(polytope_corpus.get(name))
        print(f"{name:<20} {check_h_properties(hv)['summary']}")
