"""Pearly Floer complex of an immersed matching sphere and its GF(2) cohomology.

Generators are the two Morse critical points of a height function on S^2 and
the two ordered preimages of the self-intersection. With exactness, the only
rigid configurations are a strip with a (P, Q) jump at +infinity whose other
end hits p_min, and a strip with a (Q, P) jump at -infinity whose other end hits
p_max. Each component of either family contributes exactly one such strip.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError
from .gf2 import GradedGF2Complex, cohomology
from .lagrangian import PQ, QP, BranchPair, ChartPoint, branch_index_details, sphere_primitive_difference
from .lefschetz import MatchingLoop, winding_count
from .moduli.strips import MINUS, PLUS, solve_ev, strip_components, strip_eval
from .variety import SurfaceParams, TOL_VARIETY, poly_eval

DEGREES = (-1, 0, 2, 3)
TOL_STRIP = 1e-7


@dataclass(frozen=True)
class Generator:
    kind: object  # "p_min", "p_max" or a BranchPair
    degree: int

    @property
    def name(self) -> str:
        return str(self.kind)

    @property
    def is_morse(self) -> bool:
        return not isinstance(self.kind, BranchPair)


P_MIN = Generator("p_min", 0)
P_MAX = Generator("p_max", 2)
G_PQ = Generator(PQ, -1)
G_QP = Generator(QP, 3)
GENERATORS = (G_PQ, P_MIN, P_MAX, G_QP)


@dataclass(frozen=True)
class MorseData:
    """Two-critical-point height function on S^2, given by its extrema in the chart."""

    p_min: ChartPoint
    p_max: ChartPoint
    flow: str = "height"

    @classmethod
    def for_loop(cls, loop: MatchingLoop) -> "MorseData":
        if _is_standard(loop):
            return cls(ChartPoint(0.0, np.pi), ChartPoint(0.0, 0.0))
        # distinct heights so that the two extrema lie over different base points
        data = cls(ChartPoint(-0.5, np.pi), ChartPoint(0.5, 0.0))
        if loop.sphere is not None:
            z_min = loop.sphere.z_of(data.p_min.a)
            z_max = loop.sphere.z_of(data.p_max.a)
            if abs(z_min - z_max) < 1e-6:
                raise ValidationError("Morse extrema project to the same base point", stage="morse")
        return data

    def target(self, gen: Generator) -> ChartPoint:
        return self.p_min if gen is P_MIN or gen.kind == "p_min" else self.p_max


def _is_standard(loop: MatchingLoop) -> bool:
    return loop.kind == "circle" and loop.center == 0 and loop.radius == loop.basepoint


def _as_loop(params: SurfaceParams, loop_or_r) -> MatchingLoop:
    if isinstance(loop_or_r, MatchingLoop):
        return loop_or_r
    r = loop_or_r
    if isinstance(r, bool) or int(r) != r or not 1 <= r <= params.N:
        raise ValidationError(f"r must be an integer in 1..{params.N}, got {r!r}", stage="validate")
    return MatchingLoop.standard(params, int(r))


def moduli_dimension(x_minus: Generator, x_plus: Generator) -> int:
    return x_minus.degree - x_plus.degree - 1


def _family(x_minus: Generator, x_plus: Generator) -> str:
    if x_minus.kind == "p_min" and x_plus.kind == PQ:
        return PLUS
    if x_minus.kind == QP and x_plus.kind == "p_max":
        return MINUS
    raise ValidationError(f"no rigid configurations from {x_minus.name} to {x_plus.name}",
                          stage="dimension")


@dataclass
class CountResult:
    count: int
    method: str
    solutions: list = field(default_factory=list)
    note: str = ""


def connecting_count_details(params: SurfaceParams, loop_or_r, x_minus: Generator, x_plus: Generator,
                             method: str = "solve", grid: int = 64, tol_solve: float = 1e-10,
                             tol_strip: float = TOL_STRIP, morse: MorseData | None = None) -> CountResult:
    dim = moduli_dimension(x_minus, x_plus)
    if dim != 0:
        raise ValidationError(f"moduli space from {x_minus.name} to {x_plus.name} has dimension {dim}",
                              stage="dimension")
    direction = _family(x_minus, x_plus)
    loop = _as_loop(params, loop_or_r)
    comps = strip_components(params, loop, directions=(direction,))
    if method == "enumeration":
        return CountResult(len(comps), method)
    if method != "solve":
        raise ValueError(f"unknown counting method {method!r}")
    if loop.sphere is None:
        return CountResult(len(comps), "enumeration", note="no explicit strips for non-circular loops; "
                           "count taken from component enumeration")
    morse = morse or MorseData.for_loop(loop)
    target = morse.p_min if direction == PLUS else morse.p_max
    total = 0
    sols = []
    for comp in comps:
        sol = solve_ev(comp, target, grid=grid, tol=tol_solve)
        strip = strip_eval(comp, sol.theta, sol.z1, grid=(64, 16), tol=tol_strip)
        total += sol.n_solutions
        sols.append({
            "component": comp.label(),
            "theta": sol.theta,
            "z1": [sol.z1.real, sol.z1.imag],
            "ev_residual": sol.residual,
            "solutions": sol.n_solutions,
            "strip_residuals": dict(strip.residuals),
        })
    return CountResult(total, method, sols)


def connecting_count(params: SurfaceParams, loop_or_r, x_minus: Generator, x_plus: Generator,
                     method: str = "solve", **kw) -> int:
    return connecting_count_details(params, loop_or_r, x_minus, x_plus, method, **kw).count


def build_complex(params: SurfaceParams, loop_or_r, counts: dict | None = None,
                  method: str = "enumeration") -> GradedGF2Complex:
    """Four-generator complex; ``counts`` maps 'pq' and 'qp' to integer strip counts."""
    if counts is None:
        counts = {
            "pq": connecting_count(params, loop_or_r, P_MIN, G_PQ, method),
            "qp": connecting_count(params, loop_or_r, G_QP, P_MAX, method),
        }
    gens = {g.degree: [g.name] for g in GENERATORS}
    diffs = {
        -1: np.array([[counts["pq"] % 2]], dtype=np.uint8),
        2: np.array([[counts["qp"] % 2]], dtype=np.uint8),
    }
    return GradedGF2Complex(gens, diffs)


def positivity_report(loop: MatchingLoop) -> dict:
    """Compare primitive differences with branch indices at the self-intersection."""
    if loop.sphere is not None:
        diff = sphere_primitive_difference(loop.sphere)
    else:
        diff = loop.primitive_difference()
    ind = {pair: branch_index_details(loop.sphere or loop, pair).index for pair in (PQ, QP)}
    bound = (2 + 3) / 2
    # pair (p, q) with K(p) - K(q) > 0
    literal = PQ if diff > 0 else QP
    # pair whose incoming jump bounds a disc of positive energy K(q) - K(p)
    energy = QP if diff > 0 else PQ
    return {
        "primitive_difference_PQ": diff,
        "literal": {"pair": str(literal), "index": ind[literal], "holds": ind[literal] >= bound},
        "energy": {"pair": str(energy), "index": ind[energy], "holds": ind[energy] >= bound},
    }


def _num(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {str(k): _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    if isinstance(x, (np.floating,)):
        return float(f"{float(x):.12g}")
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def immersion_residual(loop: MatchingLoop, grid: int = 10, with_scale: bool = False):
    """max |P| over a grid x grid chart sample of the sphere (circles only).

    With ``with_scale`` also returns max(1, max |xy|), the size of the terms
    that cancel in P.
    """
    sphere = loop.sphere
    a = np.linspace(-np.pi, np.pi, grid + 2)[1:-1]
    b = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    A, B = np.meshgrid(a, b, indexing="ij")
    pts = sphere.evaluate(A, B)
    res = float(np.abs(poly_eval(loop.params, (pts[..., 0], pts[..., 1], pts[..., 2]))).max())
    if with_scale:
        return res, max(1.0, float(np.abs(pts[..., 0] * pts[..., 1]).max()))
    return res


def floer_cohomology(params: SurfaceParams, loop_or_r, grid: int = 64, tol_variety: float = TOL_VARIETY,
                     tol_solve: float = 1e-10, method: str = "solve") -> dict:
    loop = _as_loop(params, loop_or_r)
    report_input = {"r": loop.basepoint} if not isinstance(loop_or_r, MatchingLoop) else {"path": loop.to_spec()}
    enclosure = winding_count(params, loop)
    notes = ["the p_max count uses strips with a (Q,P) jump at -infinity; "
             "labelling that family (P,Q) instead gives the same count"]
    kw = dict(method=method, grid=grid, tol_solve=tol_solve)
    pq = connecting_count_details(params, loop, P_MIN, G_PQ, **kw)
    qp = connecting_count_details(params, loop, G_QP, P_MAX, **kw)
    for res in (pq, qp):
        if res.note:
            notes.append(res.note)
    expected = 2 ** enclosure.C
    if pq.count != expected or qp.count != expected:
        raise NumericalError(f"strip counts {pq.count}, {qp.count} differ from 2^C = {expected}",
                             stage="counts")
    cx = build_complex(params, loop, {"pq": pq.count, "qp": qp.count})
    coh = cohomology(cx)

    residuals = {}
    if loop.sphere is not None:
        residuals["immersion_variety"], scale = immersion_residual(loop, with_scale=True)
        if residuals["immersion_variety"] > tol_variety * scale:
            raise NumericalError("immersion leaves the surface", stage="residuals")
    strip_res = [s["strip_residuals"] for s in pq.solutions + qp.solutions]
    if strip_res:
        for key in strip_res[0]:
            residuals["strip_" + key] = max(r[key] for r in strip_res)
        residuals["ev"] = max(s["ev_residual"] for s in pq.solutions + qp.solutions)

    positivity = positivity_report(loop)
    report = {
        "N": params.N,
        "input": report_input,
        "C": enclosure.C,
        "enclosed": list(enclosure.enclosed),
        "counts": {"p_min<-(P,Q)": pq.count, "(Q,P)->p_max": qp.count, "method": pq.method},
        "components": {"p_min<-(P,Q)": pq.solutions, "(Q,P)->p_max": qp.solutions},
        "differential": {str(k): cx.d(k).tolist() for k in (-1, 2)},
        "cohomology": {str(k): coh[k] for k in DEGREES},
        "indices": {str(PQ): branch_index_details(loop.sphere or loop, PQ).index,
                    str(QP): branch_index_details(loop.sphere or loop, QP).index},
        "residuals": residuals,
        "positivity": positivity,
        "positivity_check": bool(positivity["energy"]["holds"]),
        "notes": notes,
    }
    return _num(report)
