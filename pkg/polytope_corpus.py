"""Named test polytopes, addressable from the command line as ``corpus:<name>``."""

from itertools import product as cartesian

from polytope_lattice import Polytope


def point():
    return Polytope([()], ambient_dim=0, name="point")


def segment():
    return Polytope([[0], [1]], name="segment")


def simplex(n):
    """conv{0, e_1, ..., e_n}."""
    verts = [[0] * n] + [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    return Polytope(verts, ambient_dim=n, name=f"simplex{n}")


def cube(n):
    return Polytope([list(v) for v in cartesian((0, 1), repeat=n)],
                    ambient_dim=n, name=f"cube{n}")


def cross_polytope(n):
    verts = []
    for j in range(n):
        for s in (1, -1):
            verts.append([s if i == j else 0 for i in range(n)])
    return Polytope(verts, ambient_dim=n, name=f"cross{n}")


def square_pyramid():
    return Polytope([[1, 1, 0], [1, -1, 0], [-1, 1, 0], [-1, -1, 0], [0, 0, 1]],
                    name="square_pyramid")


def _surgery():
    import surgery
    return surgery


def prism():
    """triangle × segment."""
    p = _surgery().product(simplex(2), segment())
    p.name = "prism"
    return p


def square_prism():
    """square × segment (a combinatorial 3-cube)."""
    p = _surgery().product(cube(2), segment())
    p.name = "square_prism"
    return p


def pyramid_over_cube():
    p = _surgery().pyramid(cube(3))
    p.name = "pyramid_over_cube"
    return p


def pyramid_over_square_pyramid():
    p = _surgery().pyramid(square_pyramid())
    p.name = "pyramid_over_square_pyramid"
    return p


CORPUS = {
    "point": point,
    "segment": segment,
    "triangle": lambda: simplex(2),
    "square": lambda: cube(2),
    "simplex1": lambda: simplex(1),
    "simplex2": lambda: simplex(2),
    "simplex3": lambda: simplex(3),
    "simplex4": lambda: simplex(4),
    "cube3": lambda: cube(3),
    "cube4": lambda: cube(4),
    "octahedron": lambda: cross_polytope(3),
    "square_pyramid": square_pyramid,
    "prism": prism,
    "square_prism": square_prism,
    "pyramid_over_cube": pyramid_over_cube,
    "pyramid_over_square_pyramid": pyramid_over_square_pyramid,
}


def get(name):
    try:
        builder = CORPUS[name]
    except KeyError:
        raise ValueError(
            f"Unknown corpus polytope {name!r}. Available: {', '.join(sorted(CORPUS))}"
        ) from None
    return builder()
