"""Command-line front end: ``anfloer {hf-std,hf-loop,strips,verify}``.

Reports are JSON with sorted keys so repeated runs are byte-identical. Errors
are reported as JSON carrying the failing ``stage``; exit codes are 0 on
success, 2 for invalid input and 3 for numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .errors import AnfloerError, ValidationError
from .floer import floer_cohomology, immersion_residual
from .lagrangian import (
    PQ,
    QP,
    Pole,
    branch_index_details,
    special_lagrangian_residual,
)
from .lefschetz import MatchingLoop, winding_count
from .moduli import (
    BOTH,
    MINUS,
    PLUS,
    BranchData,
    fredholm_index,
    maslov_combinatorial,
    maslov_from_closing_paths,
    maslov_winding,
    strip_components,
    strip_eval,
)
from .variety import TOL_VARIETY, SurfaceParams, fiber_product, squared_phase

COMMANDS = ("hf-std", "hf-loop", "strips", "verify")


@dataclass(frozen=True)
class RunConfig:
    command: str
    N: int
    r: int | None = None
    path_file: str | None = None
    grid: int = 64
    tol_variety: float = TOL_VARIETY
    tol_solve: float = 1e-10
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown command {self.command!r}", stage="config")
        if self.N < 1:
            raise ValidationError("N must be at least 1", stage="config")
        if self.r is not None and not 1 <= self.r <= self.N:
            raise ValidationError(f"r must lie in 1..{self.N}", stage="config")
        if self.grid < 4:
            raise ValidationError("grid must be at least 4", stage="config")


def _target(cfg: RunConfig, params: SurfaceParams):
    if cfg.path_file is not None:
        return MatchingLoop.from_json(params, cfg.path_file)
    if cfg.r is None:
        raise ValidationError("give --r or --path", stage="config")
    return cfg.r


def _loop(params, target) -> MatchingLoop:
    return target if isinstance(target, MatchingLoop) else MatchingLoop.standard(params, target)


def _strip_data(direction: str) -> BranchData:
    return BranchData(minus_end=QP if direction in (MINUS, BOTH) else None,
                      plus_end=PQ if direction in (PLUS, BOTH) else None)


def strips_report(params: SurfaceParams, target, grid: int) -> dict:
    loop = _loop(params, target)
    enclosure = winding_count(params, loop)
    comps = strip_components(params, loop, directions=(MINUS, PLUS, BOTH))
    rows = []
    for comp in comps:
        data = _strip_data(comp.direction)
        row = {
            "component": comp.label(),
            "maslov_combinatorial": maslov_combinatorial(data),
            "maslov_closing_paths": maslov_from_closing_paths(data),
            "fredholm_index": fredholm_index(data),
        }
        if loop.sphere is not None:
            strip = strip_eval(comp, 0.0, -1.0, grid=(grid, max(4, grid // 4)))
            row["maslov_winding"] = maslov_winding(strip)
            row["residuals"] = dict(strip.residuals)
        rows.append(row)
    return {"N": params.N, "C": enclosure.C, "enclosed": list(enclosure.enclosed),
            "loop": loop.to_spec(), "components": rows}


def verify_report(params: SurfaceParams, target, grid: int, tol_variety: float, seed: int) -> dict:
    """Residual maxima of the geometric checks with their tolerances."""
    loop = _loop(params, target)
    rng = np.random.default_rng(seed)
    checks = {}

    def put(name, value, tol):
        checks[name] = {"max": float(value), "tol": tol, "ok": bool(value < tol)}

    if loop.sphere is not None:
        sphere = loop.sphere
        res, scale = immersion_residual(loop, grid=grid, with_scale=True)
        put("immersion_variety", res / scale, tol_variety)
        put("special_lagrangian", special_lagrangian_residual(params, sphere, grid=min(grid, 50)), 1e-7)
        a = rng.uniform(-3.0, 3.0, 50)
        b = rng.uniform(0, 2 * np.pi, 50)
        pts = sphere.evaluate(a, b)
        da, db = sphere.tangent_frame(a, b)
        phase_err = max(abs(squared_phase(params, p, u, v) - np.exp(2j * np.pi * sphere.grading(x)))
                        for p, u, v, x in zip(pts, da, db, a))
        put("grading_phase", phase_err, 1e-8)
        # rectangular and cylindrical charts agree near the poles
        aa = np.pi - rng.uniform(0.01, 0.1, 20)
        bb = rng.uniform(0, 2 * np.pi, 20)
        rad = np.cos(aa / 2)
        ext = max(np.abs(sphere.evaluate_rectangular(Pole.P, rad * np.cos(bb), rad * np.sin(bb))
                         - sphere.evaluate(aa, bb)).max(),
                  np.abs(sphere.evaluate_rectangular(Pole.Q, rad * np.cos(bb), rad * np.sin(bb))
                         - sphere.evaluate(-aa, bb)).max())
        put("pole_extension", ext, 1e-6)
        # boundary winding against the closing-path count, one strip per direction
        mas = 0
        for comp in strip_components(params, loop, directions=(MINUS, PLUS, BOTH))[::2 ** len(loop.sphere.enclosed)]:
            strip = strip_eval(comp, 0.0, -1.0)
            mas = max(mas, abs(maslov_winding(strip) - maslov_from_closing_paths(_strip_data(comp.direction))))
        put("maslov", mas, 0.5)
        worst = {"variety": 0.0, "boundary_modulus": 0.0, "blaschke_modulus": 0.0}
        for comp in strip_components(params, loop, directions=(MINUS, PLUS, BOTH)):
            strip = strip_eval(comp, float(rng.uniform(0, 2 * np.pi)),
                               complex(np.exp(1j * rng.uniform(0.1, 2 * np.pi - 0.1))),
                               modulus=float(rng.uniform(-0.5, 0.5)))
            res = strip.check((grid, max(4, grid // 4)))
            scale = max(1.0, float(np.abs(fiber_product(params, strip.evaluate(0.0, 0.5)[2]))))
            worst["variety"] = max(worst["variety"], res["variety"] / scale)
            worst["boundary_modulus"] = max(worst["boundary_modulus"], res["boundary_modulus"])
            worst["blaschke_modulus"] = max(worst["blaschke_modulus"], res["blaschke_modulus"])
        put("strip_variety", worst["variety"], 1e-7)
        put("strip_boundary_modulus", worst["boundary_modulus"], 1e-7)
        put("strip_blaschke_modulus", worst["blaschke_modulus"], 1e-12)
    idx = {str(p): branch_index_details(loop.sphere or loop, p) for p in (PQ, QP)}
    put("index_rounding", max(i.deviation for i in idx.values()), 1e-4)
    return {
        "N": params.N,
        "loop": loop.to_spec(),
        "indices": {k: v.index for k, v in idx.items()},
        "checks": checks,
        "ok": all(c["ok"] for c in checks.values()),
    }


def run(cfg: RunConfig) -> dict:
    params = SurfaceParams(cfg.N)
    if cfg.command == "hf-std":
        if cfg.r is None:
            raise ValidationError("hf-std needs --r", stage="config")
        return floer_cohomology(params, cfg.r, grid=cfg.grid, tol_variety=cfg.tol_variety,
                                tol_solve=cfg.tol_solve)
    if cfg.command == "hf-loop":
        if cfg.path_file is None:
            raise ValidationError("hf-loop needs --path", stage="config")
        loop = MatchingLoop.from_json(params, cfg.path_file)
        return floer_cohomology(params, loop, grid=cfg.grid, tol_variety=cfg.tol_variety,
                                tol_solve=cfg.tol_solve)
    target = _target(cfg, params)
    if cfg.command == "strips":
        return strips_report(params, target, cfg.grid)
    return verify_report(params, target, cfg.grid, cfg.tol_variety, cfg.seed)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="anfloer", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name, helptext in (("hf-std", "cohomology of the standard sphere over |z| = r"),
                           ("hf-loop", "cohomology of the sphere over a loop from a path file"),
                           ("strips", "strip components with Maslov and Fredholm indices"),
                           ("verify", "numerical residual checks")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--N", type=int, required=True)
        p.add_argument("--r", type=int)
        p.add_argument("--path", dest="path_file")
        p.add_argument("--grid", type=int, default=64)
        p.add_argument("--tol-variety", type=float, default=TOL_VARIETY)
        p.add_argument("--tol-solve", type=float, default=1e-10)
        p.add_argument("--out")
        p.add_argument("--seed", type=int, default=0)
    return ap


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.N, args.r, args.path_file, args.grid,
                        args.tol_variety, args.tol_solve, args.out, args.seed)
        report = run(cfg)
        code = 0
    except AnfloerError as exc:
        report = exc.to_dict()
        code = exc.exit_code
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    if code or not args.out:
        (sys.stderr if code else sys.stdout).write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
