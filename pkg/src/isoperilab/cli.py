"""Command-line interface.

Subcommands:
    construct  -- build a body from a family or a recipe file, save JSON
    iq         -- volume, surface area, and isoperimetric quotient of a body
    petty      -- surface-minimizing position of a body
    spectral   -- eigenvalue/volume certificate for a symmetric body
    verify     -- run a verification campaign over a parameter grid

Exit status is 0 when every requested check passes, 1 when a check fails,
and 2 on usage errors.  All randomized commands take --seed and are fully
deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

from . import harness
from .constructions import build_recipe, measured_forms
from .errors import IsoperilabError
from .polytope import (
    analyze,
    ball_iq_lower_bound,
    load_polytope,
    save_polytope,
)
from .positions import petty_minimize, schatten_bound_check
from .spectral import spectral_certificate


def _parse_int_list(text: str) -> list[int]:
    """Parse "2..5" (inclusive range) or "2,3,5" or "4" into ints."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",") if p.strip()]


def _load_body(path: str):
    hp, vp = load_polytope(path)
    return hp if hp is not None else vp


def _forms_dict(forms) -> dict:
    return dataclasses.asdict(forms)


def _emit(obj: dict, path: str | None) -> None:
    payload = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def cmd_construct(args) -> int:
    if args.recipe:
        with open(args.recipe, encoding="utf-8") as fh:
            recipe = json.load(fh)
    else:
        if not args.family or args.n is None:
            raise IsoperilabError("construct needs --recipe or --family with --n")
        params: dict = {"n": args.n}
        if args.scale is not None:
            params["scale"] = args.scale
        if args.facets is not None:
            params["n_facets"] = args.facets
        if args.vertices is not None:
            params["n_vertices"] = args.vertices
        recipe = {"family": args.family, "params": params}
    c = build_recipe(recipe)
    save_polytope(args.out, hp=c.hp, vp=c.vp)
    forms = c.forms if c.forms is not None else measured_forms(c)
    info = {
        "name": c.name,
        "params": c.params,
        "forms": _forms_dict(forms),
        "out": args.out,
    }
    _emit(info, args.forms_out)
    return 0


def cmd_iq(args) -> int:
    g = analyze(_load_body(args.body))
    out = {
        "dim": g.dim,
        "volume": g.volume,
        "surface_area": g.surface_area,
        "iq": g.iq,
        "ball_iq_lower_bound": ball_iq_lower_bound(g.dim),
        "n_vertices": len(g.vertices),
        "n_facets": len(g.facets),
    }
    _emit(out, args.out)
    return 0


def cmd_petty(args) -> int:
    body = _load_body(args.body)
    res = petty_minimize(body, seed=args.seed)
    sch = schatten_bound_check(res, body.dim)
    out = {
        "iq_before": res.iq_before,
        "iq_after": res.iq_after,
        "residual": res.residual,
        "iterations": res.iterations,
        "restarts_used": res.restarts_used,
        "certified": res.certified,
        "map": [list(map(float, row)) for row in res.A],
        "schatten1": sch.schatten1,
        "schatten_bound": sch.bound,
        "schatten_passed": sch.passed,
    }
    _emit(out, args.out)
    return 0 if (res.certified and sch.passed) else 1


def cmd_spectral(args) -> int:
    body = _load_body(args.body)
    cert = spectral_certificate(body, samples=args.samples, seed=args.seed)
    out = cert.to_json_dict()
    out["passed"] = cert.passed
    _emit(out, args.out)
    return 0 if cert.passed else 1


def cmd_verify(args) -> int:
    n_values = tuple(_parse_int_list(args.n_range))
    if args.theorem == "1":
        report = harness.verify_theorem1(
            n_values=n_values,
            phi_specs=tuple(args.phi_specs.split(",")),
            trials=args.trials if args.trials is not None else 10,
            seed=args.seed,
            workers=args.workers,
        )
    elif args.theorem == "2":
        report = harness.verify_theorem2(
            n_values=n_values,
            beta_specs=tuple(args.beta_specs.split(",")),
            seed=args.seed,
            workers=args.workers,
        )
    elif args.theorem == "spectral":
        report = harness.verify_spectral(
            n_values=n_values,
            m_max=args.m_max,
            trials=args.trials if args.trials is not None else 50,
            samples=args.samples,
            seed=args.seed,
            workers=args.workers,
        )
    else:  # pragma: no cover - argparse restricts choices
        raise IsoperilabError(f"unknown theorem {args.theorem!r}")
    for cell in report.cells:
        status = "pass" if cell.passed else "FAIL"
        params = " ".join(f"{k}={v}" for k, v in cell.params.items())
        sys.stdout.write(f"[{status}] cell {cell.index}: {params}\n")
    sys.stdout.write(
        f"{report.campaign}: {sum(c.passed for c in report.cells)}/"
        f"{len(report.cells)} cells passed in {report.wall_time:.1f}s\n"
    )
    if args.out:
        harness.save_report(report, args.out, fmt=args.format)
        sys.stdout.write(f"report written to {args.out}\n")
    return 0 if report.all_passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoperilab",
        description="Isoperimetric quotients of convex polytopes: "
        "constructions, positions, and certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a body and save it as JSON")
    p.add_argument("--recipe", help="recipe JSON file {family, params}")
    p.add_argument(
        "--family",
        choices=[
            "simplex",
            "cross",
            "cube",
            "extremal_facet",
            "extremal_vertex",
        ],
        help="built-in family (recipe files additionally support "
        "product, l1sum, and lindelof)",
    )
    p.add_argument("--n", type=int, help="dimension")
    p.add_argument("--scale", type=float, help="scale factor (cross/cube)")
    p.add_argument("--facets", type=int, help="facet budget (extremal_facet)")
    p.add_argument("--vertices", type=int, help="vertex budget (extremal_vertex)")
    p.add_argument("--out", required=True, help="output polytope JSON path")
    p.add_argument("--forms-out", help="write closed forms JSON here instead of stdout")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("iq", help="measure a body's isoperimetric quotient")
    p.add_argument("--body", required=True, help="polytope JSON path")
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    p.set_defaults(func=cmd_iq)

    p = sub.add_parser("petty", help="surface-minimizing position of a body")
    p.add_argument("--body", required=True, help="polytope JSON path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the JSON result here instead of stdout")
    p.set_defaults(func=cmd_petty)

    p = sub.add_parser(
        "spectral", help="eigenvalue/volume certificate (symmetric body)"
    )
    p.add_argument("--body", required=True, help="polytope JSON path")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the certificate JSON here instead of stdout")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("--theorem", choices=["1", "2", "spectral"], required=True)
    p.add_argument("--n-range", default="2..5", help='dimensions, e.g. "2..5" or "2,3"')
    p.add_argument(
        "--phi-specs",
        default="n+1,2n,3n,4n,2^n",
        help="facet budgets per dimension (theorem 1)",
    )
    p.add_argument(
        "--beta-specs",
        default="2n,4n,2^n",
        help="vertex budgets per dimension (theorem 2)",
    )
    p.add_argument("--m-max", type=int, default=8, help="max normal pairs (spectral)")
    p.add_argument(
        "--trials",
        type=int,
        default=None,
        help="random trials per cell (default 10 for theorem 1, 50 for spectral)",
    )
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the campaign report here")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IsoperilabError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
