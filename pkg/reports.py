"""
Report builders for every lw command, the induction pipeline, and the
report writers (stages.jsonl, summary.json, summary.txt).

Each builder returns a plain JSON-able dict with "ok" and a "summary"
text rendered from that same dict.
"""

import json
import logging
import os

from cih_engine import volume_observation
from cih_relations import (
    EngineCache,
    verify_deformation,
    verify_gluing_betti,
    verify_kunneth,
    verify_pyramid_relations,
)
from hvector_oracle import check_h_properties, toric_h
from normal_fan import outer_normal_fan, simplicial_refinement
from polytope_lattice import combinatorially_equivalent, face_polytope, is_simple, polytope_id
from surgery import (
    PreconditionError,
    cutoff_pipeline,
    germ_link_residual,
    is_normally_trivial,
    normally_stout_report,
    pyramid,
)

logger = logging.getLogger(__name__)

DEFAULT_T_SAMPLES = ("0", "1/4", "1/2", "1")


def dumps(report):
    """Canonical JSON text; identical reports give identical bytes."""
    return json.dumps(report, sort_keys=True, ensure_ascii=False)


def _verdict(ok):
    return "PASS" if ok else "FAIL"


# ======================================================================
# Single-command reports
# ======================================================================
def faces_report(p):
    lattice = p.lattice
    report = {
        "command": "faces",
        "polytope_id": polytope_id(p),
        "polytope": p.to_json(),
        "lattice": lattice.to_json(),
        "eulerian": lattice.is_eulerian(),
        "simple": is_simple(p),
    }
    report["ok"] = report["eulerian"]
    report["summary"] = (
        f"{lattice.summary()}\n"
        f"Eulerian: {'yes' if report['eulerian'] else 'NO'}   "
        f"simple: {'yes' if report['simple'] else 'no'}"
    )
    return report


def fan_report(p):
    fan, psi = outer_normal_fan(p)
    refinement = simplicial_refinement(fan)
    report = {
        "command": "fan",
        "polytope_id": polytope_id(p),
        "fan": fan.to_json(),
        "psi": psi.to_json(),
        "complete": fan.is_complete(),
        "simplicial": fan.is_simplicial(),
        "strictly_convex": psi.is_strictly_convex(),
        "refinement": refinement.to_json(),
    }
    report["ok"] = report["complete"] and report["strictly_convex"]
    lines = [f"{'dim':<4} | {'cones':<6}", "-" * 14]
    for d in range(fan.ambient_dim + 1):
        lines.append(f"{d:<4} | {sum(1 for c in fan.cones if c.dim == d):<6}")
    lines.append(f"rays: {len(fan.rays)}   refinement cones: {len(refinement.cones)}")
    lines.append(f"complete: {'yes' if report['complete'] else 'NO'}   "
                 f"simplicial: {'yes' if report['simplicial'] else 'no'}   "
                 f"psi strictly convex: {'yes' if report['strictly_convex'] else 'NO'}")
    report["summary"] = "\n".join(lines)
    return report


def ih_report(p, cache):
    ic = cache(p)
    h = toric_h(p).h
    even = [ic.betti[2 * i] for i in range(len(h))]
    report = {
        "command": "ih",
        "polytope_id": polytope_id(p),
        "n": ic.n,
        "betti": ic.betti,
        "poincare_duality": ic.betti == ic.betti[::-1],
        "toric_h": list(h),
        "agrees_with_h": even == list(h),
        "sheaf": ic.sheaf.to_json(),
    }
    report["ok"] = report["poincare_duality"] and report["agrees_with_h"]
    report["summary"] = (
        f"IH Betti numbers (degrees 0..{2 * ic.n}): {ic.betti}\n"
        f"toric h: {list(h)}   agreement: {'yes' if report['agrees_with_h'] else 'NO'}   "
        f"Poincaré duality: {'yes' if report['poincare_duality'] else 'NO'}"
    )
    return report


def hvector_report(p):
    hv = toric_h(p)
    props = check_h_properties(hv)
    report = {
        "command": "hvector",
        "polytope_id": polytope_id(p),
        **hv.to_json(),
        "properties": {k: props[k] for k in ("symmetric", "nonnegative", "unimodal")},
        "ok": props["ok"],
    }
    report["summary"] = f"{props['summary']}\ng = {tuple(hv.g)}"
    return report


def defect_report(p):
    q = p.to_full_dimensional()
    stout = normally_stout_report(q)
    codims = {str(sorted(f)): q.dim - q.lattice.dim_of(f) for f in stout.normally_stout_faces}
    report = {
        "command": "defect",
        "polytope_id": polytope_id(q),
        **stout.to_json(),
        "codims": codims,
        "codim_ok": all(c >= 3 for c in codims.values()),
    }
    ok = report["codim_ok"]
    if stout.minimal_ns_face is not None:
        face = stout.minimal_ns_face
        trivial = is_normally_trivial(q, face)
        report["minimal_normally_trivial"] = trivial.to_json()
        report["minimal_simple"] = is_simple(face_polytope(q, face))
        ok = ok and bool(trivial) and report["minimal_simple"]
    report["ok"] = ok
    lines = [f"defect μ = {stout.defect}"]
    for face, codim in codims.items():
        lines.append(f"  normally stout face {face}  codim {codim}")
    if stout.minimal_ns_face is not None:
        lines.append(f"minimal: {sorted(stout.minimal_ns_face)}   normally trivial: "
                     f"{'yes' if report['minimal_normally_trivial']['trivial'] else 'NO'}   "
                     f"simple: {'yes' if report['minimal_simple'] else 'NO'}")
    lines.append(f"Verdict: {_verdict(ok)}")
    report["summary"] = "\n".join(lines)
    return report


def cutoff_report(p):
    q = p.to_full_dimensional()
    mu = normally_stout_report(q).defect
    steps = cutoff_pipeline(q)
    final = steps[-1].residual if steps else q
    report = {
        "command": "cutoff",
        "polytope_id": polytope_id(q),
        "defect": mu,
        "steps": [s.to_json() for s in steps],
        "terminates_in_defect_steps": len(steps) == mu,
        "final_simple": is_simple(final),
    }
    report["ok"] = report["terminates_in_defect_steps"] and report["final_simple"]
    lines = [f"{'step':<5} | {'face':<16} | μ before -> after", "-" * 44]
    for i, s in enumerate(steps, 1):
        lines.append(f"{i:<5} | {str(sorted(s.face)):<16} | {s.mu_before} -> {s.mu_after}")
    lines.append(f"final residual simple: {'yes' if report['final_simple'] else 'NO'}")
    lines.append(f"Verdict: {_verdict(report['ok'])}")
    report["summary"] = "\n".join(lines)
    return report


def _vertex_germ_check(gl, model=None):
    model = pyramid(gl.link) if model is None else model
    check = {"germ_is_pyramid_over_link": combinatorially_equivalent(gl.germ, model) is not None}
    check["ok"] = check["germ_is_pyramid_over_link"]
    return check


def deform_report(p, face, samples, cache):
    """
    Deformation family along face; a vertex germ is already a pyramid over
    its link, so it gets the pyramid relations instead of a deformation.
    """
    q = p.to_full_dimensional()
    if face is None:
        face = normally_stout_report(q).minimal_ns_face
        if face is None:
            raise PreconditionError(f"{p!r} is simple; pass --face to choose a face.")
    face = frozenset(face)
    if face not in q.lattice:
        raise PreconditionError(f"{sorted(face)} is not a face of {p!r}.")
    gl = germ_link_residual(q, face)
    if q.lattice.dim_of(face) > 0:
        report = verify_deformation(q, face, samples, cache=cache, gl=gl)
        report["command"] = "deform"
        return report

    germ_check = _vertex_germ_check(gl)
    report = verify_pyramid_relations(gl.germ, cache=cache)
    report.update(germ_check)
    report.update({
        "command": "deform",
        "check": "vertex-germ",
        "face": sorted(face),
        "ok": report["ok"] and germ_check["ok"],
    })
    relations = report["summary"].rsplit("\nVerdict:", 1)[0]
    report["summary"] = (
        f"Vertex germ at {sorted(face)}: pyramid over its link: "
        f"{'yes' if germ_check['ok'] else 'NO'}\n{relations}\n"
        f"Verdict: {_verdict(report['ok'])}"
    )
    return report


def hlt_report(p, cache):
    report = cache(p).verify_hlt()
    report["command"] = "verify-hlt"
    return report


def hrr_report(p, cache, seed=0):
    ic = cache(p)
    report = ic.verify_hrr()
    report["self_adjoint"] = ic.check_self_adjoint(seed=seed)
    report["volume_observation"] = volume_observation(ic)
    report["ok"] = report["ok"] and report["self_adjoint"]
    report["command"] = "verify-hrr"
    report["summary"] += f"\nL self-adjoint (spot check): {'yes' if report['self_adjoint'] else 'NO'}"
    return report


# ======================================================================
# Induction pipeline
# ======================================================================
class StageLog:
    """Stage records in run order, mirrored to stages.jsonl when out_dir is set."""

    def __init__(self, out_dir=None, fresh=True):
        self.records = []
        self.path = None
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
            self.path = os.path.join(out_dir, "stages.jsonl")
            if fresh:
                open(self.path, "w", encoding="utf-8").close()

    def add(self, stage, path, report):
        record = {"stage": stage, "path": path, "ok": bool(report["ok"]), "report": report}
        self.records.append(record)
        if self.path:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(dumps(record) + "\n")
        level = logging.INFO if record["ok"] else logging.WARNING
        logger.log(level, "stage %s at %s: %s", stage, path, _verdict(record["ok"]))
        return record["ok"]


def _stage_simple(q, path, cache, log):
    report = cache(q).verify_hrr()
    return log.add("hrr-simple", path, report)


def _run(q, path, samples, cache, log):
    q = q.to_full_dimensional()
    stout = normally_stout_report(q)
    log.add("defect", path, {"polytope_id": polytope_id(q), **stout.to_json(), "ok": True})
    if stout.defect == 0:
        return _stage_simple(q, path, cache, log)

    face = stout.minimal_ns_face
    gl = germ_link_residual(q, face)
    residual_mu = normally_stout_report(gl.residual).defect
    trivial = is_normally_trivial(q, face)
    codim = q.dim - q.lattice.dim_of(face)
    cut = {
        "polytope_id": polytope_id(q),
        "face": sorted(face),
        "codim": codim,
        "mu_before": stout.defect,
        "mu_after": residual_mu,
        "normally_trivial": bool(trivial),
        "face_simple": is_simple(face_polytope(q, face)),
        "residual": gl.residual.to_json(),
    }
    cut["ok"] = (residual_mu == stout.defect - 1 and codim >= 3
                 and cut["normally_trivial"] and cut["face_simple"])
    oks = [log.add("cut", path, cut)]
    oks.append(_run(gl.residual, path + "/residual", samples, cache, log))

    model = pyramid(gl.link)
    if len(face) == 1:
        oks.append(log.add("germ", path, _vertex_germ_check(gl, model)))
        oks.append(log.add("pyramid", path + "/germ", verify_pyramid_relations(gl.germ, cache=cache)))
    else:
        oks.append(log.add("deformation", path + "/germ",
                           verify_deformation(q, face, samples, cache=cache, gl=gl)))
        oks.append(log.add("kunneth", path + "/germ",
                           verify_kunneth(face_polytope(q, face), model, cache=cache)))
        oks.append(log.add("pyramid", path + "/germ/link-pyramid",
                           verify_pyramid_relations(model, cache=cache)))
    oks.append(_run(gl.link, path + "/link", samples, cache, log))
    oks.append(log.add("gluing", path, verify_gluing_betti(q, gl.hyperplane, cache=cache)))
    return all(oks)


def verify_pipeline(p, samples=DEFAULT_T_SAMPLES, cache=None, out_dir=None, fresh=True):
    """
    Run the induction on p: cut off the minimal normally stout face,
    verify residual, germ and link recursively, reassemble by gluing.

    Returns:
        dict with the stage records, the direct HRR verdict on p and the
        overall verdict (PASS requires every stage and the direct check).
    """
    cache = cache if cache is not None else EngineCache()
    log = StageLog(out_dir, fresh)
    q = p.to_full_dimensional()
    stages_ok = _run(q, "P", samples, cache, log)
    direct = cache(q).verify_hrr()
    report = {
        "command": "verify-pipeline",
        "polytope_id": polytope_id(q),
        "betti": direct["betti"],
        "stages": log.records,
        "stages_ok": stages_ok,
        "direct_hrr": direct["ok"],
        "ok": stages_ok and direct["ok"],
    }
    report["summary"] = render_pipeline(report)
    return report


def render_pipeline(report):
    header = f"{'stage':<12} | {'path':<28} | status"
    lines = [header, "-" * 52]
    for r in report["stages"]:
        lines.append(f"{r['stage']:<12} | {r['path']:<28} | {_verdict(r['ok'])}")
    lines.append(f"\nDirect HRR on P: {_verdict(report['direct_hrr'])}")
    lines.append(f"Betti numbers: {report['betti']}")
    lines.append(f"Verdict: {_verdict(report['ok'])}")
    return "\n".join(lines)


# ======================================================================
# Writers
# ======================================================================
def write_outputs(out_dir, reports):
    """summary.json (list of reports) and summary.txt (their summaries)."""
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(reports) + "\n")
    with open(os.path.join(out_dir, "summary.txt"), "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(f"== {r.get('command', '')} {r.get('polytope_id', '')} ==\n")
            fh.write(r["summary"] + "\n\n")
