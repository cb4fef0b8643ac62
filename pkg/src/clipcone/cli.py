"""Command line interface: ``clipcone <command> INSTANCE [options]``.

Exit codes: 0 all checks pass, 1 a domain-level check failed (a report is
still written), 2 the input could not be used.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
import warnings
from fractions import Fraction

from . import linalg as la
from .chamber import (
    crossing_count,
    dirichlet_domain,
    reduce,
    sample_interior,
    translate_disjointness,
    word_ball,
)
from .clipping import check_pairwise, reflection_matrix, validate_clipped
from .descent import descend, descend_walls
from .errors import (
    BlockStructureViolation,
    CapExceeded,
    DegenerateB,
    DimensionMismatch,
    IterationCap,
    NotInPlusCone,
    NotIsometry,
    NotLatticePreserving,
    PreconditionFailure,
    PsdOrbitUnsupported,
    SignatureAnomaly,
    StabilizerNontrivial,
    Unsupported,
)
from . import __version__
from .instance import SCHEMA_VERSION, InstanceError, load

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

# domain-level failures: reported, exit 1
DOMAIN_ERRORS = (
    PreconditionFailure,
    PsdOrbitUnsupported,
    DegenerateB,
    SignatureAnomaly,
    NotIsometry,
    NotInPlusCone,
    IterationCap,
    BlockStructureViolation,
    Unsupported,
)
INPUT_ERRORS = (InstanceError, DimensionMismatch, CapExceeded, NotLatticePreserving)


def _threads() -> int:
    raw = os.environ.get("CLIPCONE_THREADS", "1")
    try:
        k = int(raw)
    except ValueError:
        raise InstanceError(f"CLIPCONE_THREADS must be a positive integer, got {raw!r}") from None
    if k < 1:
        raise InstanceError("CLIPCONE_THREADS must be at least 1")
    return k


def _roots_ok(rejected) -> bool:
    return all(r["reason"] == "merged" for r in rejected)


def cmd_validate(inst, args) -> tuple[dict, bool]:
    cone, rejected = inst.clipped()
    rep = validate_clipped(cone)
    ok = rep["ok"] and _roots_ok(rejected)
    return {"roots": [r.to_json() for r in cone.roots], "rejections": rejected, **rep, "ok": ok}, ok


def cmd_angles(inst, args) -> tuple[dict, bool]:
    cone, rejected = inst.clipped()
    pw = check_pairwise(cone.roots, cone.lattice)
    return {"roots": [r.to_json() for r in cone.roots], "rejections": rejected, **pw.to_json()}, pw.ok


def cmd_descend(inst, args) -> tuple[dict, bool]:
    cone, rejected = inst.clipped()
    action = inst.action(args.cap)
    rep = descend(cone, action, samples=args.samples, seed=args.seed)
    out = rep.to_json()
    out["group_order"] = action.order
    out["rejections"] = rejected
    return out, rep.ok and _roots_ok(rejected)


def _points(inst, args) -> list[tuple]:
    pts = [la.vec(p) for p in inst.points]
    for raw in args.point or []:
        pts.append(la.vec(x.strip() for x in raw.split(",")))
    if not pts:
        base = inst.base if inst.base is not None else inst.witness
        pts = sample_interior(inst.sym, base, args.samples, seed=args.seed)
    return pts


def cmd_reduce(inst, args) -> tuple[dict, bool]:
    cone, rejected = inst.clipped()
    traces, ok = [], True
    for p in _points(inst, args):
        tr = reduce(p, cone, seed=args.seed)
        ok &= len(tr.word) <= tr.crossings_initial
        ok &= all(cone.lattice.pair(r.vector, tr.end) >= 0 for r in cone.roots)
        traces.append(tr.to_json())
    return {"rejections": rejected, "traces": traces, "ok": ok}, ok


def cmd_domain(inst, args) -> tuple[dict, bool]:
    cone, rejected = inst.clipped()
    base = inst.base if inst.base is not None else cone.witness
    # root reflections plus the instance's own generators
    gens = [reflection_matrix(r, cone.lattice) for r in cone.roots] + [la.mat(g) for g in inst.generators]
    if not gens:
        gens = [la.identity(cone.rank)]
    elements = word_ball(gens, args.word_length)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StabilizerNontrivial)  # reported in the payload
        dom = dirichlet_domain(base, elements, cone.ambient, cone.roots)
    translates = word_ball(gens, args.word_length // 2)
    pts = sample_interior(cone.ambient, base, args.samples, seed=args.seed)
    disj = translate_disjointness(dom, translates, pts, elements)
    inside = [p for p in pts if dom.contains(p)]
    in_chamber = sum(all(cone.lattice.pair(r.vector, p) >= 0 for r in cone.roots) for p in inside)
    out = dom.to_json()
    out["truncation"]["word_length"] = args.word_length
    out["truncation"]["translate_word_length"] = args.word_length // 2
    out["disjointness"] = disj
    out["pi_samples"] = len(inside)
    out["pi_samples_in_chamber"] = in_chamber
    ok = disj["max_multiplicity"] <= 1 and in_chamber == len(inside) and not dom.stabilizer
    out["ok"] = ok
    return out, ok


def cmd_walls(inst, args) -> tuple[dict, bool]:
    action = inst.action(args.cap)
    lat = inst.sym.lattice
    bad = [list(w) for w in inst.walls if lat.norm(w) >= 0]
    if bad:
        raise InstanceError(f"walls must have negative square: {bad[0]}")
    kept = descend_walls(inst.walls, action, lat)
    out = {
        "group_order": action.order,
        "walls": [[int(x) for x in w] for w in inst.walls],
        "descended": [list(w) for w in kept],
        "ok": True,
    }
    return out, True


def cmd_selftest(args) -> tuple[dict, bool]:
    from . import corpus
    from .clipping import check_integrality
    from .instance import parse

    results = {}
    r = check_integrality((1, 0), corpus.klt_lattice())
    results["klt_coefficient"] = (not r.ok) and r.coefficient == Fraction(4, 3)
    cone13, _ = parse(corpus.thirteen_gon()).clipped()
    results["thirteen_gon_rejected"] = not check_pairwise(cone13.roots, cone13.lattice).ok
    for inst in corpus.descent_corpus():
        rep = descend(inst.cone, inst.action, samples=min(args.samples, 200), seed=args.seed)
        results[f"descend:{inst.name}"] = rep.ok and validate_clipped(inst.cone)["ok"]
    for inst in corpus.chamber_corpus():
        pts = sample_interior(inst.cone.ambient, inst.cone.witness, 20, seed=args.seed)
        good = True
        for p in pts:
            tr = reduce(p, inst.cone, seed=args.seed)
            good &= len(tr.word) <= tr.crossings_initial and crossing_count(tr.end, inst.cone) == 0
        results[f"reduce:{inst.name}"] = bool(good)
    ok = all(results.values())
    return {"results": results, "ok": ok}, ok


COMMANDS = {
    "validate": cmd_validate,
    "descend": cmd_descend,
    "reduce": cmd_reduce,
    "domain": cmd_domain,
    "angles": cmd_angles,
    "walls": cmd_walls,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clipcone", description="Exact checks for clipped symmetric cones.")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=1000)
    common.add_argument("--word-length", type=int, default=4)
    common.add_argument("--cap", type=int, default=10_000, help="largest group order to enumerate")
    common.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte identity)")
    for name in COMMANDS:
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("instance")
        if name == "reduce":
            sp.add_argument("--point", action="append", help="comma separated rational coordinates")
    sub.add_parser("selftest", parents=[common])
    return p


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    report = {
        "schema": SCHEMA_VERSION,
        "version": __version__,
        "command": args.command,
        "seed": args.seed,
        "samples": args.samples,
    }
    try:
        _threads()
        if args.samples < 1 or args.word_length < 0 or args.cap < 1:
            raise InstanceError("--samples and --cap must be positive, --word-length nonnegative")
        if args.command == "selftest":
            body, ok = cmd_selftest(args)
        else:
            inst = load(args.instance)
            report["instance"] = inst.name
            with open(args.instance, "rb") as fh:
                report["instance_sha256"] = hashlib.sha256(fh.read()).hexdigest()
            body, ok = COMMANDS[args.command](inst, args)
    except INPUT_ERRORS as exc:
        sys.stderr.write(f"clipcone: input error: {exc}\n")
        return EXIT_INPUT
    except DOMAIN_ERRORS as exc:
        report["ok"] = False
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, PreconditionFailure):
            report["error"]["hypothesis"] = exc.hypothesis
        _emit(report, args.out)
        return EXIT_FAIL
    report.update(body)
    report["ok"] = bool(ok)
    if args.timing:
        report["timing_ms"] = round((time.perf_counter() - t0) * 1000, 3)
    _emit(report, args.out)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
