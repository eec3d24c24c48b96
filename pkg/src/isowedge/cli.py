"""Command-line interface: ``isowedge <command> [options]``.

Wedge files are JSON, either ``{"kind": "generators", "ambient_dim": n,
"generators": [[...], ...]}`` or ``{"kind": "monotone", "m": m}``. Points files
hold one whitespace-separated vector per line; blank lines and ``#`` comments
are skipped.

Exit codes: 0 success, 1 mathematical negative (failed certificate,
not isotone, violations found), 2 input error, 3 inapplicable.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .isotone import Verdict, check_isotone_wedge, sample_isotonicity
from .linalg import DimensionError, Tolerance
from .monotone import build_monotone_wedge, coefficients, pava_project
from .projection import ProjectionError, WedgeProjector, verify_projection
from .wedge import (
    GeneratedWedge,
    PolarNotPointedError,
    ScaleLimitError,
    decompose,
    is_generating,
    polar_generators,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_INAPPLICABLE = 0, 1, 2, 3


class InputError(ValueError):
    pass


def load_wedge_file(path) -> tuple[dict, GeneratedWedge]:
    try:
        desc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read wedge file {path}: {exc}") from exc
    if not isinstance(desc, dict):
        raise InputError("wedge file must hold a JSON object")
    kind = desc.get("kind")
    if kind == "monotone":
        m = desc.get("m")
        if not isinstance(m, int) or m < 2:
            raise InputError("monotone wedge needs integer m >= 2")
        return desc, build_monotone_wedge(m)
    if kind == "generators":
        gens = desc.get("generators")
        n = desc.get("ambient_dim")
        if not isinstance(n, int) or n < 1:
            raise InputError("generators wedge needs integer ambient_dim >= 1")
        if not isinstance(gens, list) or not gens:
            raise InputError("generators must be a nonempty list of number lists")
        if any(not isinstance(g, list) or len(g) != n for g in gens):
            raise InputError(f"every generator must have {n} entries")
        try:
            arr = np.array(gens, dtype=float)
        except (TypeError, ValueError) as exc:
            raise InputError(f"generators must be numeric: {exc}") from exc
        if not np.all(np.isfinite(arr)):
            raise InputError("generators must be finite")
        return desc, GeneratedWedge(arr, n)
    raise InputError(f"unknown wedge kind {kind!r}")


def load_points(path, dim: int | None = None) -> np.ndarray:
    rows = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read points file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            row = [float(tok) for tok in line.split()]
        except ValueError as exc:
            raise InputError(f"{path}:{lineno}: {exc}") from exc
        if not all(math.isfinite(v) for v in row):
            raise InputError(f"{path}:{lineno}: non-finite entry")
        rows.append(row)
    if not rows:
        raise InputError(f"{path}: no points")
    sizes = {len(r) for r in rows}
    if len(sizes) != 1:
        raise InputError(f"{path}: points have mixed dimensions {sorted(sizes)}")
    if dim is not None and sizes != {dim}:
        raise InputError(f"{path}: points have dimension {sizes.pop()}, wedge has {dim}")
    return np.array(rows)


def _digest(*paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        if p is not None:
            h.update(Path(p).read_bytes())
    return h.hexdigest()


def _tol(args) -> Tolerance:
    try:
        return Tolerance(args.eps_rank, args.eps_feas, args.eps_eq)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _cert_dict(cert) -> dict:
    return {
        "max_inner_generator": cert.max_inner_generator,
        "complementarity": cert.complementarity,
        "member": cert.member,
        "passed": cert.passed,
    }


def cmd_project(args, tol):
    desc, W = load_wedge_file(args.wedge)
    xs = load_points(args.points, W.ambient_dim)
    results = []
    if desc["kind"] == "monotone":
        for x in xs:
            p = pava_project(x)
            cert = verify_projection(W, x, p, tol)
            results.append({
                "x": x.tolist(), "point": p.tolist(), "residual": (x - p).tolist(),
                "monotone_coefficients": coefficients(p).t.tolist(),
                "certificate": _cert_dict(cert),
            })
    else:
        for x, r in zip(xs, WedgeProjector(W, tol).project_many(xs)):
            results.append({
                "x": x.tolist(), "point": r.point.tolist(), "residual": r.residual.tolist(),
                "active_coefficients": {str(k): v for k, v in sorted(r.active_coefficients.items())},
                "certificate": _cert_dict(r.certificate),
            })
    ok = all(r["certificate"]["passed"] for r in results)
    lines = [f"projected {len(results)} point(s); all certificates passed: {ok}"]
    lines += [f"  {r['x']} -> {(np.round(r['point'], 12) + 0.0).tolist()}" for r in results]
    return {"points": results}, (EXIT_OK if ok else EXIT_NEGATIVE), lines, [args.wedge, args.points]


def cmd_pava(args, tol):
    xs = load_points(args.points)
    if xs.shape[1] < 2:
        raise InputError("pava needs points of dimension >= 2 to certify against the wedge")
    W = build_monotone_wedge(xs.shape[1])
    results = []
    for x in xs:
        p = pava_project(x)
        results.append({"x": x.tolist(), "point": p.tolist(), "residual": (x - p).tolist(),
                        "certificate": _cert_dict(verify_projection(W, x, p, tol))})
    ok = all(r["certificate"]["passed"] for r in results)
    lines = [f"pava on {len(results)} point(s); all certificates passed: {ok}"]
    lines += [f"  {r['x']} -> {(np.round(r['point'], 12) + 0.0).tolist()}" for r in results]
    return {"points": results}, (EXIT_OK if ok else EXIT_NEGATIVE), lines, [args.points]


def cmd_decompose(args, tol):
    _, W = load_wedge_file(args.wedge)
    D = decompose(W, tol)
    lin = D.lineality.vectors
    cone = D.cone_part.generators
    # Orthogonality residual of the split, reported alongside the bases.
    ortho = float(np.max(np.abs(cone @ lin.T))) if lin.size and cone.size else 0.0
    wedge_out = {
        "kind": "generators",
        "ambient_dim": W.ambient_dim,
        "generators": np.vstack([cone, lin, -lin]).tolist() if (cone.size or lin.size) else [[0.0] * W.ambient_dim],
    }
    if args.emit_wedge:
        Path(args.emit_wedge).write_text(json.dumps(wedge_out, indent=2) + "\n")
    results = {
        "lineality": lin.tolist(),
        "cone_part": cone.tolist(),
        "generating": is_generating(W, tol),
        "orthogonality_residual": ortho,
        "wedge": wedge_out,
    }
    lines = [
        f"lineality dimension {len(lin)}, cone part with {len(cone)} generator(s), "
        f"generating: {results['generating']}",
    ]
    lines += [f"  L: {(np.round(v, 12) + 0.0).tolist()}" for v in lin]
    lines += [f"  K: {(np.round(v, 12) + 0.0).tolist()}" for v in cone]
    return results, EXIT_OK, lines, [args.wedge]


def cmd_polar(args, tol):
    _, W = load_wedge_file(args.wedge)
    if not is_generating(W, tol):
        return ({"polar_rays": [], "reason": "not_generating"}, EXIT_INAPPLICABLE,
                ["wedge is not generating; its polar is not a pointed cone"], [args.wedge])
    D = decompose(W, tol)
    try:
        rays = polar_generators(D.cone_part, D.complement(tol), tol)
    except PolarNotPointedError as exc:
        return {"polar_rays": [], "reason": str(exc)}, EXIT_INAPPLICABLE, [str(exc)], [args.wedge]
    max_inner = float(np.max(rays @ W.generators.T)) if rays.size else 0.0
    lines = [f"{len(rays)} polar ray(s); max <ray, generator> = {max_inner:.3e}"]
    lines += [f"  {(np.round(r, 12) + 0.0).tolist()}" for r in rays]
    return {"polar_rays": rays.tolist(), "max_inner_generator": max_inner}, EXIT_OK, lines, [args.wedge]


def cmd_check_isotone(args, tol):
    _, W = load_wedge_file(args.wedge)
    rep = check_isotone_wedge(W, tol, intrinsic=args.intrinsic)
    code = {Verdict.ISOTONE: EXIT_OK, Verdict.NOT_ISOTONE: EXIT_NEGATIVE,
            Verdict.INAPPLICABLE: EXIT_INAPPLICABLE}[rep.verdict]
    worst = None
    if rep.worst_pair is not None:
        worst = {"pair": list(rep.worst_pair[0]), "inner_product": rep.worst_pair[1]}
    results = {"verdict": rep.verdict.value, "reason": rep.reason,
               "polar_rays": rep.polar_rays.tolist(), "worst_pair": worst,
               "intrinsic": bool(args.intrinsic)}
    lines = [f"verdict: {rep.verdict.value} ({rep.reason})"]
    if worst:
        lines.append(f"  largest pairwise polar inner product {worst['inner_product']:.12g} at {worst['pair']}")
    return results, code, lines, [args.wedge]


def cmd_sample(args, tol):
    _, W = load_wedge_file(args.wedge)
    if args.pairs < 1:
        raise InputError("--pairs must be positive")
    rep = sample_isotonicity(W, args.pairs, args.seed, tol)
    viol = [{
        "u": p.u.tolist(), "v": p.v.tolist(),
        "order_residual": p.witness.residual_norm,
        "Pu": p.pu.tolist(), "Pv": p.pv.tolist(),
        "violation_residual": p.violation.residual_norm,
    } for p in rep.violations]
    results = {"pairs_tested": rep.pairs_tested, "violation_count": len(viol), "violations": viol}
    lines = [f"tested {rep.pairs_tested} ordered pair(s), {len(viol)} violation(s)"]
    return results, (EXIT_OK if not viol else EXIT_NEGATIVE), lines, [args.wedge]


COMMANDS = {
    "project": cmd_project,
    "decompose": cmd_decompose,
    "polar": cmd_polar,
    "check-isotone": cmd_check_isotone,
    "sample": cmd_sample,
    "pava": cmd_pava,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="isowedge", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--eps-rank", type=float, default=Tolerance.eps_rank)
    common.add_argument("--eps-feas", type=float, default=Tolerance.eps_feas)
    common.add_argument("--eps-eq", type=float, default=Tolerance.eps_eq)
    common.add_argument("--output", help="write the JSON run report here")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("project", parents=[common], help="project points onto a wedge")
    p.add_argument("--wedge", required=True)
    p.add_argument("--points", required=True)

    p = sub.add_parser("pava", parents=[common], help="project points onto the monotone wedge")
    p.add_argument("--points", required=True)

    p = sub.add_parser("decompose", parents=[common], help="split a wedge into K and L")
    p.add_argument("--wedge", required=True)
    p.add_argument("--emit-wedge", help="write the decomposed generators as a wedge file")

    p = sub.add_parser("polar", parents=[common], help="extreme rays of the polar of a generating wedge")
    p.add_argument("--wedge", required=True)

    p = sub.add_parser("check-isotone", parents=[common], help="decide isotonicity of the projection")
    p.add_argument("--wedge", required=True)
    p.add_argument("--intrinsic", action="store_true",
                   help="analyse non-generating wedges inside their own span (extension)")

    p = sub.add_parser("sample", parents=[common], help="search random ordered pairs for violations")
    p.add_argument("--wedge", required=True)
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        tol = _tol(args)
        results, code, lines, inputs = COMMANDS[args.command](args, tol)
    except (InputError, DimensionError, ScaleLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ProjectionError as exc:
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    report = {
        "command": {k: v for k, v in sorted(vars(args).items()) if k != "output"},
        "input_digest": _digest(*inputs),
        "tolerance": {"eps_rank": tol.eps_rank, "eps_feas": tol.eps_feas, "eps_eq": tol.eps_eq},
        "seed": getattr(args, "seed", None),
        "exit_code": code,
        "results": results,
        "wall_time": time.perf_counter() - start,
    }
    if args.output:
        Path(args.output).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
