"""
Checks that tie IH of one polytope to IH of simpler ones: pyramids,
products with a simple polytope, gluing of two pieces along a cut facet,
and the deformation of a germ into F × Π(L).

Every verifier returns a report dict with an "ok" flag and a "summary"
text; failed checks are report entries, not exceptions.
"""

import logging

from cih_engine import IntersectionCohomology
from exact_core import rat, rat_to_str
from hr_modules import decompose, from_engine, tensor
from polytope_lattice import combinatorially_equivalent, face_polytope, is_simple, polytope_id
from surgery import (
    PreconditionError,
    deformation_family,
    germ_facets_meeting_face,
    germ_link_residual,
    is_normally_trivial,
    product,
    pyramid,
    transversal_cut,
)

logger = logging.getLogger(__name__)


class EngineCache:
    """One IntersectionCohomology per polytope (by vertex data) within a run."""

    def __init__(self, ray_order=None, max_degree=None):
        self.ray_order = ray_order
        self.max_degree = max_degree
        self._store = {}

    def __call__(self, polytope):
        q = polytope.to_full_dimensional()
        key = (q.ambient_dim, q.vertices)
        if key not in self._store:
            self._store[key] = IntersectionCohomology(q, self.ray_order, self.max_degree)
        return self._store[key]

    def __len__(self):
        return len(self._store)


def _engine(cache):
    return cache if cache is not None else EngineCache()


def _pad(values, length):
    return list(values) + [0] * (length - len(values))


def _at(values, q):
    return values[q] if 0 <= q < len(values) else 0


def _verdict(ok):
    return "PASS" if ok else "FAIL"


# ======================================================================
# Pyramids
# ======================================================================
def pyramid_base(p):
    """A facet with exactly one vertex off it, or None."""
    q = p.to_full_dimensional()
    n_vertices = len(q.vertices)
    for facet in q.lattice.facets:
        if n_vertices - len(facet) == 1:
            return facet
    return None


def verify_pyramid_relations(p, base=None, cache=None):
    """
    Degree shift of IH for a pyramid P = Π(Q).

    b_q(P) = b_q(Q) for q <= n and b_q(P) = b_{q-2}(Q) for q >= n, IP^n(P) = 0
    when n is even, and HRR for Q carries over to P.

    Args:
        p: Polytope
        base: the base facet as a set of vertex indices of p (found when omitted)
    """
    engine = _engine(cache)
    q = p.to_full_dimensional()
    facet = frozenset(base) if base is not None else pyramid_base(q)
    if facet is None or facet not in q.lattice.facets or len(q.vertices) - len(facet) != 1:
        raise PreconditionError(f"{p!r} is not a pyramid over the given base.")
    n = q.dim
    ic_p = engine(q)
    ic_q = engine(face_polytope(q, facet))
    b_p, b_q = ic_p.betti, ic_q.betti

    low = all(_at(b_p, k) == _at(b_q, k) for k in range(0, n + 1))
    high = all(_at(b_p, k) == _at(b_q, k - 2) for k in range(n, 2 * n + 1))
    if n % 2 == 0:
        middle_primitive = len(ic_p.hr_form(0).primitive)
    else:
        middle_primitive = 0
    hrr_p = ic_p.verify_hrr()["ok"]
    hrr_q = ic_q.verify_hrr()["ok"]
    report = {
        "check": "pyramid",
        "polytope_id": polytope_id(q),
        "base": sorted(facet),
        "betti": b_p,
        "base_betti": b_q,
        "low_degrees_match": low,
        "high_degrees_shift": high,
        "middle_primitive_dim": middle_primitive,
        "hrr_base": hrr_q,
        "hrr_pyramid": hrr_p,
    }
    report["ok"] = low and high and middle_primitive == 0 and (hrr_p or not hrr_q)
    report["summary"] = (
        f"Pyramid over facet {sorted(facet)}\n"
        f"  b(P) = {b_p}\n  b(Q) = {b_q}\n"
        f"  q <= n: {'ok' if low else 'FAIL'}   q >= n: {'ok' if high else 'FAIL'}   "
        f"dim IP^n = {middle_primitive}\n"
        f"  HRR base: {_verdict(hrr_q)}   HRR pyramid: {_verdict(hrr_p)}\n"
        f"Verdict: {_verdict(report['ok'])}"
    )
    return report


# ======================================================================
# Products
# ======================================================================
def convolve(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def verify_kunneth(s, p0, cache=None):
    """
    IH of S × P0 for a simple polytope S: Betti convolution, HR-equation on
    the product and decompose(W(S) ⊗ W(P0)) = decompose(W(S × P0)).
    """
    if not is_simple(s):
        raise PreconditionError(f"{s!r} is not simple.")
    engine = _engine(cache)
    prod = product(s, p0)
    ic_s, ic_0, ic_prod = engine(s), engine(p0), engine(prod)
    expected = convolve(ic_s.betti_by_degree, ic_0.betti_by_degree)
    actual = ic_prod.betti_by_degree
    betti_ok = _pad(expected, len(actual)) == actual
    hrr = ic_prod.verify_hrr()
    equation_ok = all(e["ok"] for e in hrr["hr_equation"].values())
    tag_tensor = decompose(tensor(from_engine(ic_s), from_engine(ic_0)))
    tag_product = decompose(from_engine(ic_prod))
    report = {
        "check": "kunneth",
        "polytope_id": polytope_id(prod),
        "betti_simple": ic_s.betti,
        "betti_factor": ic_0.betti,
        "betti_product": ic_prod.betti,
        "betti_convolution": betti_ok,
        "hr_equation": equation_ok,
        "decomposition_tensor": tag_tensor.to_json(),
        "decomposition_product": tag_product.to_json(),
        "decomposition_match": tag_tensor == tag_product,
    }
    report["ok"] = betti_ok and equation_ok and report["decomposition_match"]
    report["summary"] = (
        f"Künneth for S × P0\n"
        f"  b(S) = {ic_s.betti}   b(P0) = {ic_0.betti}\n"
        f"  b(S × P0) = {ic_prod.betti}   convolution: {'ok' if betti_ok else 'FAIL'}\n"
        f"  HR-equation: {'ok' if equation_ok else 'FAIL'}   "
        f"simples: {report['decomposition_product']} vs {report['decomposition_tensor']}\n"
        f"Verdict: {_verdict(report['ok'])}"
    )
    return report


# ======================================================================
# Gluing
# ======================================================================
def verify_gluing_betti(p, h, cache=None):
    """
    b_q(P1) + b_q(P2) = b_q(P) + b_q(F) + b_{q-2}(F) for the two pieces of a
    transversal cut with cut facet F, plus HRR on all four polytopes.
    """
    engine = _engine(cache)
    cut = transversal_cut(p, h)
    ics = {
        "P": engine(p),
        "P1": engine(cut.piece1),
        "P2": engine(cut.piece2),
        "F": engine(cut.cut_facet),
    }
    b = {name: ic.betti for name, ic in ics.items()}
    n = ics["P"].n
    rows = []
    for q in range(2 * n + 1):
        lhs = _at(b["P1"], q) + _at(b["P2"], q)
        rhs = _at(b["P"], q) + _at(b["F"], q) + _at(b["F"], q - 2)
        rows.append({"q": q, "lhs": lhs, "rhs": rhs, "ok": lhs == rhs})
    hrr = {name: ic.verify_hrr()["ok"] for name, ic in ics.items()}
    report = {
        "check": "gluing",
        "polytope_id": polytope_id(p),
        "hyperplane": h.to_json(),
        "betti": b,
        "identity": rows,
        "hrr": hrr,
    }
    report["ok"] = all(r["ok"] for r in rows) and all(hrr.values())
    lines = [f"{'q':<4} | {'P1 + P2':<8} | {'P + F + F[-2]':<14} | status", "-" * 42]
    for r in rows:
        lines.append(f"{r['q']:<4} | {r['lhs']:<8} | {r['rhs']:<14} | {'ok' if r['ok'] else 'FAIL'}")
    lines.append("HRR: " + "  ".join(f"{k}={_verdict(v)}" for k, v in hrr.items()))
    lines.append(f"Verdict: {_verdict(report['ok'])}")
    report["summary"] = "\n".join(lines)
    return report


# ======================================================================
# Deformation
# ======================================================================
def product_model(p, f, gl=None):
    """F × Π(L) for a face f of p, with L the link of f."""
    q = p.to_full_dimensional()
    if gl is None:
        gl = germ_link_residual(q, f)
    link = gl.link
    return product(face_polytope(q, f), pyramid(link))


def germ_facets_normally_trivial(p, f, gl=None):
    """Normal triviality of the germ facets meeting F in a facet of F."""
    q = p.to_full_dimensional()
    if gl is None:
        gl = germ_link_residual(q, f)
    germ = gl.germ
    face_points = {q.vertices[i] for i in f}
    _, facets = germ_facets_meeting_face(germ, face_points)
    return {tuple(sorted(facet)): bool(is_normally_trivial(germ, facet)) for facet in facets}


def verify_deformation(p, f, samples, cache=None, gl=None):
    """
    Sample the family Q_t and check what the deformation argument uses.

    Q_t has one combinatorial type for t in (0, 1], Q_1 is the germ, Q_0 is
    F × Π(L); Betti numbers and s_k signatures are the same for every
    sample and HLT holds for every t > 0.  gl is the GermLink of f when the
    caller already has it.
    """
    engine = _engine(cache)
    q = p.to_full_dimensional()
    f = frozenset(f)
    ts = sorted({rat(t) for t in samples})
    if not ts:
        raise PreconditionError("verify_deformation needs at least one sample.")
    family = {t: deformation_family(q, f, t) for t in ts}
    q0 = family.get(0) if 0 in family else deformation_family(q, f, 0)
    q1 = family.get(1) if 1 in family else deformation_family(q, f, 1)

    if gl is None:
        gl = germ_link_residual(q, f)
    q1_is_germ = combinatorially_equivalent(q1, gl.germ) is not None
    q0_is_product = combinatorially_equivalent(q0, product_model(q, f, gl)) is not None
    positive = [t for t in ts if t > 0]
    reference = family[positive[0]] if positive else q1
    entries = []
    for t in ts:
        ic = engine(family[t])
        hrr = ic.verify_hrr()
        entries.append({
            "t": rat_to_str(t),
            "betti": ic.betti,
            "signatures": hrr["signatures"],
            "hlt_ok": hrr["hlt_ok"],
            "same_type": t == 0 or combinatorially_equivalent(family[t], reference) is not None,
        })
    betti_constant = len({tuple(e["betti"]) for e in entries}) == 1
    signatures_constant = len({tuple(sorted((k, tuple(v)) for k, v in e["signatures"].items()))
                               for e in entries}) == 1
    hlt_positive = all(e["hlt_ok"] for e, t in zip(entries, ts) if t > 0)
    type_constant = all(e["same_type"] for e in entries)
    facets_trivial = germ_facets_normally_trivial(q, f, gl)

    report = {
        "check": "deformation",
        "polytope_id": polytope_id(q),
        "face": sorted(f),
        "samples": entries,
        "q1_is_germ": q1_is_germ,
        "q0_is_product": q0_is_product,
        "type_constant": type_constant,
        "betti_constant": betti_constant,
        "signatures_constant": signatures_constant,
        "hlt_positive": hlt_positive,
        "germ_facets_normally_trivial": {str(list(k)): v for k, v in facets_trivial.items()},
    }
    report["ok"] = all([q1_is_germ, q0_is_product, type_constant, betti_constant,
                        signatures_constant, hlt_positive, all(facets_trivial.values())])
    header = f"{'t':<8} | {'betti':<28} | {'HLT':<5} | type"
    lines = [f"Deformation of the germ along face {sorted(f)}", header, "-" * 56]
    for e in entries:
        lines.append(f"{e['t']:<8} | {str(e['betti']):<28} | "
                     f"{'ok' if e['hlt_ok'] else 'FAIL':<5} | {'same' if e['same_type'] else 'DIFF'}")
    lines.append(f"Q_1 ≅ germ: {'yes' if q1_is_germ else 'NO'}   "
                 f"Q_0 ≅ F × Π(L): {'yes' if q0_is_product else 'NO'}   "
                 f"signatures constant: {'yes' if signatures_constant else 'NO'}")
    lines.append(f"Verdict: {_verdict(report['ok'])}")
    report["summary"] = "\n".join(lines)
    logger.info("deformation along %s: %s", sorted(f), _verdict(report["ok"]))
    return report
