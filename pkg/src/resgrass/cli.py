"""Command line front-end: identity checks, the Riccati pipeline and demos."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, fields
from typing import Any, Sequence

import numpy as np

from .core import DEFAULT_TOL, RestrictedElement, SplitSpace, Tolerances, operator_from_json, operator_to_json
from .diagonalize import block_diagonalize
from .errors import GapViolation, NoConvergence, ResGrassError
from .grassmann import GrassmannPoint, act, geodesic, phi_gamma, pullback_check
from .lie_poisson import affine_action
from .pathology import build_unbounded_family, cartan_witness, cone_span_demo, unbounded_closed_form
from .sampling import random_offdiagonal, random_unitary
from .suites import run_identities

DEFAULT_SEED = 42
EXIT_OK, EXIT_FAIL, EXIT_IO = 0, 1, 2


class UsageError(Exception):
    """Bad parameters or unreadable input (exit code 2)."""


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    tolerances: Tolerances = DEFAULT_TOL
    output: str | None = None
    format: str = "table"


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def dumps(obj: Any) -> str:
    """JSON text with every float written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        text = format(x, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cell(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def render_table(rows: list[dict], title: str | None = None) -> str:
    if not rows:
        return (title or "") + "\n(no rows)\n"
    cols = list(rows[0])
    cells = [[_cell(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = [title] if title else []
    lines.append("  ".join(c.rjust(w) for c, w in zip(cols, widths)))
    lines.append("  ".join("-" * w for w in widths))
    lines.extend("  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells)
    return "\n".join(lines) + "\n"


def emit(config: RunConfig, payload: dict, rows: list[dict], title: str, notes: Sequence[str] = ()) -> None:
    if config.format == "json":
        text = dumps(payload) + "\n"
    else:
        text = render_table(rows, title) + "".join(f"{n}\n" for n in notes)
    if config.output:
        try:
            with open(config.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {config.output}: {exc}") from exc
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def parse_sizes(text: str) -> list[SplitSpace]:
    try:
        sizes = [SplitSpace.parse(s.strip()) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --sizes {text!r}: {exc}") from exc
    if not sizes:
        raise UsageError("--sizes must list at least one a+b")
    return sizes


def cmd_check_identities(args: argparse.Namespace, config: RunConfig) -> int:
    sizes = parse_sizes(args.sizes)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    results = run_identities(sizes, args.trials, config.seed)
    ok = all(r.passed for r in results)
    failures = [f"FAIL {r.name} at {r.size}: max error {r.max_error:.3e}" for r in results if not r.passed]
    payload = {"seed": config.seed, "trials": args.trials, "passed": ok, "results": [r.to_json() for r in results]}
    emit(config, payload, [r.to_json() for r in results], "identity checks", failures)
    for line in failures:
        print(line, file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


def _load_operator(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    try:
        return operator_from_json(data)
    except (ResGrassError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def cmd_diagonalize(args: argparse.Namespace, config: RunConfig) -> int:
    op = _load_operator(args.input)
    try:
        rho = RestrictedElement.of(op, config.tolerances)
    except ResGrassError as exc:
        raise UsageError(f"{args.input}: {type(exc).__name__}: {exc}") from exc
    try:
        result = block_diagonalize(rho, config.tolerances, max_iter=args.max_iter, force=args.force)
    except (GapViolation, NoConvergence) as exc:
        name = type(exc).__name__
        print(f"{name}: {exc}", file=sys.stderr)
        if config.format == "json":
            emit(config, {"error": name, "message": str(exc)}, [], "")
        return EXIT_FAIL
    rep = result.report
    payload = {"riccati": rep.to_json(), "u": operator_to_json(result.u), "diag": operator_to_json(result.diag)}
    rows = [{"iterations": rep.iterations, "residual": rep.residual, "gap": rep.gap, "size": str(rho.space)}]
    notes = ["k =", np.array2string(rep.k, precision=10)]
    emit(config, payload, rows, "riccati solve", notes)
    return EXIT_OK


def _parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc


def demo_unbounded(args: argparse.Namespace, config: RunConfig) -> int:
    ns = _parse_range(args.n)
    if not ns:
        raise UsageError("empty --n range")
    size = max(ns) if args.size is None else args.size
    try:
        space = SplitSpace(size, size)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = []
    for n in ns:
        try:
            rep = build_unbounded_family(n, space, config.tolerances).report
        except ResGrassError as exc:
            raise UsageError(f"{type(exc).__name__}: {exc}") from exc
        rows.append({"n": n, "res_norm": rep.res_norm, "closed_form": unbounded_closed_form(n), "sqrt_n": rep.lower_bound})
    emit(config, {"size": str(space), "rows": rows}, rows, f"unbounded family on {space}")
    return EXIT_OK


def demo_cartan(args: argparse.Namespace, config: RunConfig) -> int:
    if args.N < 1:
        raise UsageError("--N must be >= 1")
    ns, k = [], 1
    while k < args.N:
        ns.append(k)
        k *= 2
    ns.append(args.N)
    reports = [cartan_witness(n) for n in ns]
    rows = [
        {"N": r.N, "j_s1": r.j_s1, "j_s2": r.j_s2, "offblock_s2": r.offblock_s2,
         "offblock_lower": r.offblock_lower, "bound_ok": r.bound_ok}
        for r in reports
    ]
    notes = ["offblock_lower = j_s1/(2 j_s2) grows without bound as N increases (coeff 1/k)."]
    emit(config, {"reports": [r.to_json() for r in reports]}, rows, "Cartan witness", notes)
    return EXIT_OK if all(r.bound_ok for r in reports) else EXIT_FAIL


def demo_cone(args: argparse.Namespace, config: RunConfig) -> int:
    try:
        space = SplitSpace.parse(args.size)
    except ValueError as exc:
        raise UsageError(f"bad --size: {exc}") from exc
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    demo = cone_span_demo(args.samples, space, config.seed)
    payload = {"size": str(space), "samples": args.samples, **demo.to_json()}
    rows = [{"samples": args.samples, "max_ratio": demo.max_ratio, "witness_ratio": demo.witness_ratio,
             "upper_constant": 1 + math.sqrt(2.0)}]
    notes = ["constant chain only: s1 <= predual <= (1 + sqrt 2) s1 on the cone; the balanced rank-one witness attains 2."]
    emit(config, payload, rows, f"cone ratios on {space}", notes)
    return EXIT_OK


def demo_grassmann_orbit(args: argparse.Namespace, config: RunConfig) -> int:
    try:
        space = SplitSpace.parse(args.size)
    except ValueError as exc:
        raise UsageError(f"bad --size: {exc}") from exc
    if args.gamma == 0:
        raise UsageError("--gamma must be nonzero")
    rng = np.random.default_rng(config.seed)
    base = GrassmannPoint.h_plus(space)
    rows = []
    for i in range(args.samples):
        a, b = random_offdiagonal(space, rng), random_offdiagonal(space, rng)
        rep = pullback_check(args.gamma, a, b, config.tolerances)
        w = geodesic(base, random_offdiagonal(space, rng, 0.5), 1.0, config.tolerances)
        g = random_unitary(space, rng)
        lhs = phi_gamma(act(g, w), args.gamma).mu.entries
        rhs = affine_action(g, phi_gamma(w, args.gamma)).mu.entries
        rows.append({"sample": i, "lhs": rep.lhs, "rhs": rep.rhs, "pullback_err": abs(rep.lhs - rep.rhs),
                     "equivariance_err": float(np.abs(lhs - rhs).max())})
    ok = all(r["pullback_err"] < 1e-12 and r["equivariance_err"] < 1e-10 for r in rows)
    emit(config, {"size": str(space), "gamma": args.gamma, "passed": ok, "samples": rows}, rows,
         f"orbit of (0, {args.gamma}) on {space}")
    return EXIT_OK if ok else EXIT_FAIL


DEMOS = {
    "unbounded": demo_unbounded,
    "cartan": demo_cartan,
    "cone": demo_cone,
    "grassmann-orbit": demo_grassmann_orbit,
}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $RESGRASS_SEED or 42)")
    common.add_argument("--format", choices=("json", "table"), default="table")
    common.add_argument("--output", default=None, help="write to PATH instead of stdout")
    for f in fields(Tolerances):
        common.add_argument(f"--tol-{f.name}", type=float, default=None, dest=f"tol_{f.name}",
                            help=f"override tolerance {f.name} (default {f.default:g})")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="resgrass", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check-identities", parents=[common], help="run the randomized identity suites")
    chk.add_argument("--sizes", default="1+1,2+3,4+4,8+8")
    chk.add_argument("--trials", type=int, default=100)
    chk.set_defaults(func=cmd_check_identities)

    dia = sub.add_parser("diagonalize", parents=[common], help="block-diagonalize a skew operator from JSON")
    dia.add_argument("input")
    dia.add_argument("--force", action="store_true", help="iterate even when the gap condition fails")
    dia.add_argument("--max-iter", type=int, default=200)
    dia.set_defaults(func=cmd_diagonalize)

    demo = sub.add_parser("demo", help="counterexample and orbit demos")
    demos = demo.add_subparsers(dest="demo", required=True)
    unb = demos.add_parser("unbounded", parents=[common])
    unb.add_argument("--n", default="1..64", help="n or lo..hi")
    unb.add_argument("--size", type=int, default=None, help="n+ = n- (default: largest n)")
    unb.set_defaults(func=demo_unbounded)
    car = demos.add_parser("cartan", parents=[common])
    car.add_argument("--N", type=int, default=64)
    car.set_defaults(func=demo_cartan)
    cone = demos.add_parser("cone", parents=[common])
    cone.add_argument("--samples", type=int, default=1000)
    cone.add_argument("--size", default="4+4")
    cone.set_defaults(func=demo_cone)
    orb = demos.add_parser("grassmann-orbit", parents=[common])
    orb.add_argument("--gamma", type=float, default=2.0)
    orb.add_argument("--size", default="3+3")
    orb.add_argument("--samples", type=int, default=10)
    orb.set_defaults(func=demo_grassmann_orbit)
    return parser


def resolve_seed(flag: int | None, environ=os.environ) -> int:
    """Flag wins over $RESGRASS_SEED, which wins over the default."""
    if flag is not None:
        return flag
    env = environ.get("RESGRASS_SEED", "").strip()
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"RESGRASS_SEED={env!r} is not an integer") from exc
    return DEFAULT_SEED


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = DEFAULT_TOL.override(**{f.name: getattr(args, f"tol_{f.name}") for f in fields(Tolerances)})
        config = RunConfig(resolve_seed(args.seed), tol, args.output, args.format)
        return args.func(args, config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
