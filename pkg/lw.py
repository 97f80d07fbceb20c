"""
lw: batch front door for the IH workbench.

    lw <command> --in FILE [--in FILE ...] [--out DIR] [--t-samples "0,1/4,1/2,1"]

Inputs are Polytope JSON files (one object or a list of objects) or
corpus references such as ``corpus:cube3``.  Exit status: 0 when every
check passes, 1 when a verification failed, 2 on input or usage errors,
3 when an internal invariant broke (a bug, not bad input).  Errors print a
JSON object {"error", "message"} on stdout.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field, fields

import polytope_corpus
import reports
from cih_relations import EngineCache
from polytope_lattice import DegenerateInputError, MAX_VERTICES, Polytope

logger = logging.getLogger("lw")

COMMANDS = ("faces", "fan", "ih", "hvector", "defect", "cutoff", "deform",
            "verify-hlt", "verify-hrr", "verify-pipeline")
MAX_DIM = 4
EXIT_INPUT = 2
EXIT_INTERNAL = 3
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


# ======================================================================
# Configuration
# ======================================================================
@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    out_dir: str = None
    verbosity: int = 0
    max_degree: int = None
    t_samples: list = field(default_factory=lambda: list(reports.DEFAULT_T_SAMPLES))
    face: list = None
    seed: int = 0
    max_dim: int = MAX_DIM
    max_vertices: int = MAX_VERTICES

    def __post_init__(self):
        self._validate()

    def _validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command {self.command!r}. Available: {', '.join(COMMANDS)}")
        if not self.inputs:
            raise ValueError("At least one --in input is required.")
        if self.max_degree is not None and (not isinstance(self.max_degree, int) or self.max_degree < 0):
            raise ValueError(f"max_degree must be a non-negative integer, got {self.max_degree!r}")
        if not self.t_samples:
            raise ValueError("t_samples must not be empty.")
        if not isinstance(self.seed, int):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")

    @classmethod
    def overlay(cls, base, path):
        """Fields from a JSON config file on top of base; unknown keys are rejected."""
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"Config {path!r} must hold a JSON object.")
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"Unknown config fields in {path!r}: {sorted(unknown)}")
        merged = {f.name: getattr(base, f.name) for f in fields(cls)}
        merged.update(data)
        return cls(**merged)

    @property
    def engine_degree(self):
        """Polynomial-degree truncation for the sheaf (IH degree 2d is polynomial degree d)."""
        return None if self.max_degree is None else self.max_degree // 2


# ======================================================================
# Input
# ======================================================================
def load_polytopes(ref):
    if ref.startswith("corpus:"):
        return [polytope_corpus.get(ref.split(":", 1)[1])]
    with open(ref, encoding="utf-8") as fh:
        data = json.load(fh)
    items = data if isinstance(data, list) else [data]
    return [Polytope.from_json(item) for item in items]


def guard(p, config):
    if p.dim > config.max_dim or len(p.vertices) > config.max_vertices:
        logger.warning("refusing %r: limits are dim <= %d and <= %d vertices",
                       p, config.max_dim, config.max_vertices)
        raise DegenerateInputError(
            f"{p!r} exceeds the desk-scale limits "
            f"(dim <= {config.max_dim}, vertices <= {config.max_vertices})."
        )


def parse_face(text):
    if text is None:
        return None
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise ValueError(f"--face must be comma-separated vertex indices, got {text!r}") from None


# ======================================================================
# Dispatch
# ======================================================================
def run_command(config, p, cache, first=True):
    cmd = config.command
    if cmd == "faces":
        return reports.faces_report(p)
    if cmd == "fan":
        return reports.fan_report(p)
    if cmd == "ih":
        return reports.ih_report(p, cache)
    if cmd == "hvector":
        return reports.hvector_report(p)
    if cmd == "defect":
        return reports.defect_report(p)
    if cmd == "cutoff":
        return reports.cutoff_report(p)
    if cmd == "deform":
        return reports.deform_report(p, config.face, config.t_samples, cache)
    if cmd == "verify-hlt":
        return reports.hlt_report(p, cache)
    if cmd == "verify-hrr":
        return reports.hrr_report(p, cache, seed=config.seed)
    return reports.verify_pipeline(p, config.t_samples, cache=cache,
                                   out_dir=config.out_dir, fresh=first)


def run(config):
    """Run config on every input; returns (reports, exit status)."""
    polytopes = [p for ref in config.inputs for p in load_polytopes(ref)]
    for p in polytopes:
        guard(p, config)
    cache = EngineCache(max_degree=config.engine_degree)
    results = []
    for i, p in enumerate(polytopes):
        logger.info("%s on %r", config.command, p)
        results.append(run_command(config, p, cache, first=i == 0))
    if config.out_dir:
        reports.write_outputs(config.out_dir, results)
    return results, 0 if all(r["ok"] for r in results) else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="lw", description="Exact IH / HLT / HRR workbench for polytopes.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--in", dest="inputs", action="append", default=[],
                        help="Polytope JSON file or corpus:<name>; repeatable")
    parser.add_argument("--out", dest="out_dir", help="directory for summary.json, summary.txt, stages.jsonl")
    parser.add_argument("--t-samples", default=",".join(reports.DEFAULT_T_SAMPLES),
                        help="deformation parameters, e.g. \"0,1/4,1/2,1\"")
    parser.add_argument("--face", help="comma-separated vertex indices for deform")
    parser.add_argument("--max-degree", type=int, help="truncate IH above this degree")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--config", help="JSON file with RunConfig fields")
    group = parser.add_mutually_exclusive_group()
    group.add_argument("-v", "--verbose", action="store_const", const=1, dest="verbosity", default=0)
    group.add_argument("-q", "--quiet", action="store_const", const=-1, dest="verbosity")
    return parser


def configure_logging(verbosity):
    level = {1: logging.DEBUG, 0: logging.INFO, -1: logging.WARNING}[max(-1, min(1, verbosity))]
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _error(exc, status=EXIT_INPUT):
    print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True))
    return status


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT_INPUT
    configure_logging(args.verbosity)
    try:
        config = RunConfig(
            command=args.command,
            inputs=args.inputs,
            out_dir=args.out_dir,
            verbosity=args.verbosity,
            max_degree=args.max_degree,
            t_samples=[s.strip() for s in args.t_samples.split(",") if s.strip()],
            face=parse_face(args.face),
            seed=args.seed,
        )
        if args.config:
            config = RunConfig.overlay(config, args.config)
            configure_logging(config.verbosity)
        results, status = run(config)
    except (ValueError, json.JSONDecodeError, OSError) as exc:
        logger.debug("input error", exc_info=True)
        return _error(exc)
    except RuntimeError as exc:
        # SheafConstructionError and the cutoff defect check land here
        logger.error("internal invariant failed: %s", exc, exc_info=True)
        return _error(exc, EXIT_INTERNAL)
    for r in results:
        print(r["summary"])
        print()
    return status


if __name__ == "__main__":
    sys.exit(main())
