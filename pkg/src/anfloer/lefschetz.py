"""The projection (x, y, z) -> z: critical values, matching loops, thimbles."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from . import kernels
from .errors import NumericalError, ValidationError
from .lagrangian import (
    BranchPair,
    ImmersedSphere,
    IndexResult,
    Pole,
    branch_index_details,
    gauss_legendre_integral,
    liouville_density,
)
from .variety import SurfaceParams, SurfacePoint, fiber_product

TOL_PATH = 1e-6
CRIT_CLEARANCE = 1e-3
CORNER_ANGLE = 1e-2
DENSE_SAMPLES = 4096


def critical_values(params: SurfaceParams) -> list[int]:
    return list(range(1, params.N + 1))


@dataclass(frozen=True)
class EnclosureReport:
    windings: dict
    enclosed: tuple[int, ...]

    @property
    def C(self) -> int:
        return len(self.enclosed)

    def to_dict(self) -> dict:
        return {"enclosed": list(self.enclosed), "C": self.C,
                "windings": {str(k): v for k, v in sorted(self.windings.items())}}


def _c(pair) -> complex:
    if isinstance(pair, (int, float, complex)):
        return complex(pair)
    re, im = pair
    return complex(re, im)


@dataclass(frozen=True)
class MatchingLoop:
    """Closed path gamma: [0, 1] -> C with gamma(0) = gamma(1) = basepoint.

    ``kind`` is "circle" (center, radius) or "hermite" (piecewise cubic through
    basepoint, nodes..., basepoint with one knot interval per segment). Hermite
    tangents are in per-segment units; when only interior tangents are given the
    two basepoint tangents come from closed Catmull-Rom differences, and with no
    tangents at all every tangent does.
    """

    params: SurfaceParams
    basepoint: int
    kind: str
    center: complex = 0j
    radius: float = 0.0
    nodes: tuple = ()
    tangents: tuple = ()
    reversed_input: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False, hash=False)

    # construction
    @classmethod
    def circle(cls, params: SurfaceParams, basepoint: int, center, radius: float) -> "MatchingLoop":
        loop = cls(params, int(basepoint), "circle", center=_c(center), radius=float(radius))
        loop.validate()
        return loop

    @classmethod
    def standard(cls, params: SurfaceParams, r: int) -> "MatchingLoop":
        return cls.circle(params, r, 0j, float(r))

    @classmethod
    def hermite(cls, params: SurfaceParams, basepoint: int, nodes, tangents=None) -> "MatchingLoop":
        pts = [complex(basepoint)] + [_c(n) for n in nodes] + [complex(basepoint)]
        m = len(pts) - 2
        if m < 2:
            raise ValidationError("a hermite loop needs at least two interior nodes", stage="validate")
        ring = pts[:-1]
        cr = [(ring[(i + 1) % len(ring)] - ring[(i - 1) % len(ring)]) / 2 for i in range(len(ring))]
        if tangents is None:
            tans = cr + [cr[0]]
        else:
            given = [_c(t) for t in tangents]
            if len(given) == m + 2:
                tans = given
            elif len(given) == m:
                tans = [cr[0]] + given + [cr[0]]
            else:
                raise ValidationError(f"expected {m} or {m + 2} tangents, got {len(given)}",
                                      stage="validate")
        nodes_t, tans_t, flipped = tuple(pts[1:-1]), tuple(tans), False
        area = _shoelace(_hermite_eval(pts, tans, np.linspace(0, 1, 2048, endpoint=False)))
        if area < 0:
            # traverse backwards: reverse node order and negate tangents
            nodes_t = tuple(reversed(nodes_t))
            tans_t = tuple(-t for t in reversed(tans))
            flipped = True
        loop = cls(params, int(basepoint), "hermite", nodes=nodes_t, tangents=tans_t,
                   reversed_input=flipped)
        loop.validate()
        return loop

    @classmethod
    def from_spec(cls, params: SurfaceParams, spec: dict) -> "MatchingLoop":
        try:
            kind = spec["type"]
            base = spec["basepoint"]
            if int(base) != base:
                raise ValidationError("basepoint must be an integer", stage="validate")
            if kind == "circle":
                return cls.circle(params, int(base), spec["center"], spec["radius"])
            if kind == "hermite":
                return cls.hermite(params, int(base), spec["nodes"], spec.get("tangents"))
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed path spec: {exc}", stage="validate") from exc
        raise ValidationError(f"unknown path type {kind!r}", stage="validate")

    @classmethod
    def from_json(cls, params: SurfaceParams, path) -> "MatchingLoop":
        try:
            spec = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read path spec: {exc}", stage="validate") from exc
        return cls.from_spec(params, spec)

    def to_spec(self) -> dict:
        if self.kind == "circle":
            return {"type": "circle", "basepoint": self.basepoint,
                    "center": [self.center.real, self.center.imag], "radius": self.radius}
        return {"type": "hermite", "basepoint": self.basepoint,
                "nodes": [[n.real, n.imag] for n in self.nodes],
                "tangents": [[t.real, t.imag] for t in self.tangents]}

    # geometry
    @property
    def _knots(self) -> list:
        return [complex(self.basepoint)] + list(self.nodes) + [complex(self.basepoint)]

    @property
    def segments(self) -> int:
        return 1 if self.kind == "circle" else len(self.nodes) + 1

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "circle":
            w = (self.basepoint - self.center) / self.radius
            return self.center + self.radius * w * np.exp(2j * np.pi * t)
        return _hermite_eval(self._knots, self.tangents, t)

    def velocity(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "circle":
            w = (self.basepoint - self.center) / self.radius
            return 2j * np.pi * self.radius * w * np.exp(2j * np.pi * t)
        return _hermite_eval(self._knots, self.tangents, t, derivative=True)

    def samples(self, n: int = DENSE_SAMPLES) -> np.ndarray:
        return self(np.linspace(0.0, 1.0, n, endpoint=False))

    @cached_property
    def sphere(self) -> ImmersedSphere | None:
        """Chart on the immersed sphere; only circles carry one."""
        if self.kind != "circle":
            return None
        return ImmersedSphere(self.params, self.center, self.radius, self.basepoint)

    def validate(self) -> None:
        j = self.basepoint
        if not 1 <= j <= self.params.N:
            raise ValidationError(f"basepoint {j} is not a critical value", stage="validate")
        if self.kind == "circle":
            if self.radius <= 0:
                raise ValidationError("radius must be positive", stage="validate")
            if abs(abs(j - self.center) - self.radius) > TOL_PATH:
                raise ValidationError("basepoint does not lie on the circle", stage="validate")
        z = self.samples()
        for k in critical_values(self.params):
            if k == j:
                continue
            if np.min(np.abs(z - k)) <= CRIT_CLEARANCE:
                raise ValidationError(f"loop through critical value {k}", stage="validate")
        # interior samples must stay away from the basepoint too
        inner = self(np.linspace(0.02, 0.98, 2048))
        if np.min(np.abs(inner - j)) <= CRIT_CLEARANCE:
            raise ValidationError(f"loop returns to critical value {j} in its interior", stage="validate")
        if kernels.polyline_self_intersects(z, closed=True):
            raise ValidationError("loop is not embedded", stage="validate")
        v0 = complex(self.velocity(0.0))
        v1 = complex(self.velocity(1.0))
        if abs(v0) < TOL_PATH or abs(v1) < TOL_PATH:
            raise ValidationError("zero velocity at the basepoint", stage="validate")
        if abs(np.angle(v1 / -v0)) <= CORNER_ANGLE:
            raise ValidationError("the loop doubles back on itself at the basepoint", stage="validate")

    # gradings and branch data
    @cached_property
    def turning(self) -> float:
        """Total change of arg(gamma') over [0, 1], in radians."""
        t = np.linspace(0.0, 1.0, 8 * DENSE_SAMPLES + 1)
        ang = np.unwrap(np.angle(self.velocity(t)))
        return float(ang[-1] - ang[0])

    def grading(self, t):
        """Continuous lift of 1/2 + arg(gamma'(t)) / pi, normalized at t = 0."""
        t = np.asarray(t, dtype=float)
        grid = np.linspace(0.0, 1.0, 8 * DENSE_SAMPLES + 1)
        ang = np.unwrap(np.angle(self.velocity(grid)))
        return 0.5 + np.interp(t, grid, ang) / np.pi

    def pole_grading(self, pole: Pole) -> float:
        base = 0.5 + float(np.angle(self.velocity(0.0))) / np.pi
        return base + (self.turning / np.pi if pole is Pole.P else 0.0)

    def pole_frame(self, pole: Pole) -> np.ndarray:
        """Tangent plane of the branch through the self-intersection.

        P is the end of the path (t -> 1), approached from the direction -gamma'(1);
        Q is the start, left in the direction gamma'(0).
        """
        direction = -complex(self.velocity(1.0)) if pole is Pole.P else complex(self.velocity(0.0))
        return thimble_tangent_at_crit(self.params, self.basepoint, direction, convention="outward")

    def branch_index(self, pair: BranchPair, grading_shift: float = 0.0) -> IndexResult:
        return branch_index_details(self, pair, grading_shift)

    def primitive_difference(self, tol: float = 1e-11) -> float:
        """K(P) - K(Q) by integrating lambda along the lift of gamma over [0, 1]."""
        n = self.segments
        total = 0.0
        for s in range(n):
            total += gauss_legendre_integral(
                lambda t: liouville_density(self.params, self(t), self.velocity(t)),
                s / n, (s + 1) / n, tol=tol)
        return total


def _hermite_eval(knots, tangents, t, derivative: bool = False):
    t = np.asarray(t, dtype=float)
    n = len(knots) - 1
    s = np.clip(t * n, 0.0, n)
    idx = np.minimum(np.floor(s).astype(int), n - 1)
    u = s - idx
    p0 = np.asarray(knots, dtype=complex)[idx]
    p1 = np.asarray(knots, dtype=complex)[idx + 1]
    m0 = np.asarray(tangents, dtype=complex)[idx]
    m1 = np.asarray(tangents, dtype=complex)[idx + 1]
    if derivative:
        h00 = 6 * u * u - 6 * u
        h10 = 3 * u * u - 4 * u + 1
        h01 = -6 * u * u + 6 * u
        h11 = 3 * u * u - 2 * u
        return n * (h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1)
    h00 = 2 * u ** 3 - 3 * u * u + 1
    h10 = u ** 3 - 2 * u * u + u
    h01 = -2 * u ** 3 + 3 * u * u
    h11 = u ** 3 - u * u
    return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1


def _shoelace(z: np.ndarray) -> float:
    return 0.5 * float(np.sum(z.real * np.roll(z.imag, -1) - np.roll(z.real, -1) * z.imag))


def winding_number(loop, point: complex, start: int = 512, max_samples: int = 1 << 20) -> float:
    """Unrounded winding number of a closed curve about ``point``.

    The sample count doubles until every turning step is below pi/2.
    """
    n = start
    while n <= max_samples:
        z = loop(np.linspace(0.0, 1.0, n, endpoint=False)) if callable(loop) else np.asarray(loop)
        total, step = kernels.winding_angle_sum(z, point)
        if step < np.pi / 2 or not callable(loop):
            return total / (2 * np.pi)
        n *= 2
    raise NumericalError("winding refinement did not converge", stage="winding")


def winding_count(params: SurfaceParams, loop: MatchingLoop) -> EnclosureReport:
    z = loop.samples()
    windings = {}
    for k in critical_values(params):
        if k == loop.basepoint:
            continue
        if np.min(np.abs(z - k)) <= CRIT_CLEARANCE:
            raise ValidationError(f"loop through critical value {k}", stage="winding")
        w = winding_number(loop, complex(k))
        if abs(w - round(w)) > 1e-6:
            raise NumericalError(f"non-integral winding {w} about {k}", stage="winding")
        windings[k] = int(round(w))
    enclosed = tuple(sorted(k for k, w in windings.items() if w % 2))
    return EnclosureReport(windings, enclosed)


def thimble_tangent_at_crit(params: SurfaceParams, j: int, velocity: complex,
                            convention: str = "formula") -> np.ndarray:
    """Tangent plane at the critical point over ``j`` of a thimble, as a (3, 2) real frame.

    With ``convention="formula"`` the spanning vector is
    xi = sqrt(velocity) * prod_{k != j} sqrt(j - k) for the final velocity of a
    vanishing path ending at j. A path arriving with velocity v sits over
    j - v (1 - t), so the thimble's actual tangent plane uses sqrt(-v); the
    formula plane is that one multiplied by i. ``convention="outward"`` takes
    ``velocity`` to be the direction in which the thimble leaves j and returns
    the actual tangent plane. The rotation by i is the same for every branch, so
    angles between branch planes agree in both conventions.
    """
    velocity = complex(velocity)
    if abs(velocity) == 0:
        raise ValidationError("zero final velocity", stage="thimble")
    if convention not in ("formula", "outward"):
        raise ValueError(f"unknown convention {convention!r}")
    xi = np.sqrt(velocity)
    for k in critical_values(params):
        if k != j:
            xi *= np.sqrt(complex(j - k))
    return np.array([[xi, 1j * xi], [xi, -1j * xi], [0, 0]], dtype=complex)


def matching_cycle_sample(params: SurfaceParams, loop: MatchingLoop, t: float, theta: float) -> SurfacePoint:
    if not 0.0 <= t <= 1.0:
        raise ValidationError("t must lie in [0, 1]", stage="validate")
    z = complex(loop(t))
    w = np.sqrt(complex(fiber_product(params, z)))
    e = np.exp(1j * theta)
    return SurfacePoint(e * w, w / e, z)
