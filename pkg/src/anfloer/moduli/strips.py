"""Holomorphic strips with one or two branch jumps, built from the disc model.

For a circle loop with center c, radius R, base point j and unit w0 = (j - c)/R,
the base map is z = c + R w0 h with h a Blaschke product. Writing a_k for the
preimage of an enclosed critical value k, the strip is (f, g, z) with

    f = e^{i theta}  prod_{k in split} B_k(h) * F0(h),
    g = e^{-i theta} prod_{k in E - split} B_k(h) * F0(h),
    B_k(h) = (h - a_k) / (conj(a_k) h - 1),
    F0(h)^2 = prod_{k not in E} (z - k) * prod_{k in E} R w0 (conj(a_k) h - 1),

so f g = prod (z - k). Each square root takes a cut that avoids the image of the
disc. For the standard circle |z| = r this is z = r h, B_k = (rh - k)/(kh - r).

Strip coordinates (s, t) in R x [0, 1] reach the disc through zeta = e^{pi (s + it)}
(or its inverse reflection for a jump at -infinity) and a Moebius map from the
upper half plane that sends the jump end to w = 1 and the free end to z1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import NumericalError, ValidationError
from ..lagrangian import PQ, QP, ChartPoint, sqrt_cut
from ..lefschetz import MatchingLoop, winding_count
from ..variety import SurfaceParams, fiber_product

PLUS = "plus"    # jump (P, Q) at +infinity, free end at -infinity
MINUS = "minus"  # jump (Q, P) at -infinity, free end at +infinity
BOTH = "both"    # jumps at both ends
DIRECTIONS = (MINUS, PLUS, BOTH)

TOL_SOLVE = 1e-10
MAX_NEWTON = 50


def _as_loop(params: SurfaceParams, loop_or_r) -> MatchingLoop:
    if isinstance(loop_or_r, MatchingLoop):
        return loop_or_r
    r = loop_or_r
    if isinstance(r, bool) or int(r) != r or not 1 <= r <= params.N:
        raise ValidationError(f"r must be an integer in 1..{params.N}, got {r!r}", stage="validate")
    return MatchingLoop.standard(params, int(r))


class DiscModel:
    """Closed-form disc maps for one circle loop."""

    def __init__(self, loop: MatchingLoop, enclosed: tuple[int, ...]):
        if loop.kind != "circle":
            raise ValidationError("explicit strips need a circle loop (no Riemann map otherwise)",
                                  stage="strips")
        self.loop = loop
        self.params = loop.params
        self.center = loop.center
        self.radius = loop.radius
        self.unit = complex(loop.basepoint - loop.center) / loop.radius
        self.enclosed = tuple(enclosed)
        self.zeros = {k: (k - self.center) / (self.radius * self.unit) for k in self.enclosed}

    def z(self, h):
        return self.center + self.radius * self.unit * np.asarray(h, dtype=complex)

    def common(self, h):
        h = np.asarray(h, dtype=complex)
        z = self.z(h)
        out = np.ones_like(h)
        for k in range(1, self.params.N + 1):
            if k in self.zeros:
                ak = self.zeros[k]
                out = out * sqrt_cut(self.radius * self.unit * (np.conj(ak) * h - 1), self.unit)
            else:
                out = out * sqrt_cut(z - k, k - self.center)
        return out

    def factor(self, k: int, h):
        ak = self.zeros[k]
        h = np.asarray(h, dtype=complex)
        return (h - ak) / (np.conj(ak) * h - 1)

    def fgz(self, h, theta: float, split):
        h = np.asarray(h, dtype=complex)
        F0 = self.common(h)
        bf = np.ones_like(h)
        bg = np.ones_like(h)
        for k in self.enclosed:
            if k in split:
                bf = bf * self.factor(k, h)
            else:
                bg = bg * self.factor(k, h)
        e = np.exp(1j * theta)
        return e * bf * F0, bg * F0 / e, self.z(h)


@dataclass(frozen=True)
class StripComponent:
    loop: MatchingLoop
    split: frozenset
    direction: str
    enclosed: tuple = ()

    def __post_init__(self):
        if self.direction not in DIRECTIONS:
            raise ValidationError(f"unknown strip direction {self.direction!r}", stage="strips")
        if not set(self.split) <= set(self.enclosed):
            raise ValidationError("split must be a subset of the enclosed critical values",
                                  stage="strips")

    @cached_property
    def model(self) -> DiscModel:
        return DiscModel(self.loop, self.enclosed)

    def label(self) -> str:
        inner = ",".join(str(k) for k in sorted(self.split))
        return f"{self.direction}:{{{inner}}}"


def strip_components(params: SurfaceParams, loop_or_r, directions=(MINUS, PLUS)) -> list[StripComponent]:
    """Every two-way split of the enclosed critical values, per jump direction."""
    loop = _as_loop(params, loop_or_r)
    enclosed = winding_count(params, loop).enclosed
    out = []
    for direction in directions:
        for size in range(len(enclosed) + 1):
            for split in itertools.combinations(enclosed, size):
                out.append(StripComponent(loop, frozenset(split), direction, enclosed))
    return out


def _upper_to_disc(zeta, z1: complex):
    """Moebius map from the upper half plane to the disc: infinity -> 1, 0 -> z1."""
    beta = np.exp(0.5j * np.mod(np.angle(z1), 2 * np.pi))
    return (zeta - beta) / (zeta - np.conj(beta))


@dataclass(frozen=True)
class StripMap:
    """A strip in a component, fixed by its phase theta and free-end position z1.

    ``modulus`` is the extra real parameter of the two-jump family,
    h = M_c(psi^2) with M_c(v) = (v + c) / (1 + c v).
    """

    component: StripComponent
    theta: float
    z1: complex = -1.0 + 0j
    modulus: float = 0.0
    residuals: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        z1 = complex(self.z1)
        if abs(abs(z1) - 1) > 1e-9:
            raise ValidationError("z1 must lie on the unit circle", stage="strips")
        if abs(z1 - 1) < 1e-12:
            raise ValidationError("z1 must differ from 1", stage="strips")
        if not -1 < self.modulus < 1:
            raise ValidationError("modulus must lie in (-1, 1)", stage="strips")

    @property
    def direction(self) -> str:
        return self.component.direction

    @property
    def model(self) -> DiscModel:
        return self.component.model

    # disc picture
    def disc_h(self, w):
        w = np.asarray(w, dtype=complex)
        if self.direction == BOTH:
            v = w * w
            return (v + self.modulus) / (1 + self.modulus * v)
        return w

    def punctures(self) -> list[tuple[complex, str, object]]:
        """(disc position, 'in' | 'out', jump type) for each branch jump."""
        if self.direction == PLUS:
            return [(1 + 0j, "out", PQ)]
        if self.direction == MINUS:
            return [(1 + 0j, "in", QP)]
        return [(1 + 0j, "out", PQ), (-1 + 0j, "in", QP)]

    def evaluate_disc(self, w):
        f, g, z = self.model.fgz(self.disc_h(w), self.theta, self.component.split)
        return np.stack([f, g, z], axis=-1)

    # strip picture
    def strip_to_disc(self, s, t):
        s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        if self.direction == PLUS:
            return _upper_to_disc(np.exp(np.pi * (s + 1j * t)), self.z1)
        if self.direction == MINUS:
            return _upper_to_disc(-np.exp(-np.pi * (s + 1j * t)), self.z1)
        zeta = np.exp(np.pi * (s + 1j * t))
        return (zeta - 1j) / (zeta + 1j)

    def evaluate(self, s, t):
        return self.evaluate_disc(self.strip_to_disc(s, t))

    # checks
    def check(self, grid=(64, 16), s_range: float = 3.0) -> dict:
        ns, nt = grid
        s = np.linspace(-s_range, s_range, ns)
        t = np.linspace(0.0, 1.0, nt)
        S, T = np.meshgrid(s, t, indexing="ij")
        pts = self.evaluate(S, T)
        var = np.abs(pts[..., 0] * pts[..., 1] - fiber_product(self.model.params, pts[..., 2]))
        edge = pts[:, [0, -1], :]
        w_edge = self.strip_to_disc(S[:, [0, -1]], T[:, [0, -1]])
        h_edge = self.disc_h(w_edge)
        loop = self.model
        on_loop = np.abs(np.abs(edge[..., 2] - loop.center) - loop.radius)
        return {
            "variety": float(var.max()),
            "boundary_modulus": float(np.abs(np.abs(edge[..., 0]) - np.abs(edge[..., 1])).max()),
            "blaschke_modulus": float(np.abs(np.abs(h_edge) - 1).max()),
            "boundary_on_loop": float(on_loop.max()),
        }

    def jump_sides(self, depth: float = 4.0) -> tuple[ChartPoint, ChartPoint]:
        """Chart lifts of the bottom and top boundary near the jump end."""
        end = depth if self.direction in (PLUS, BOTH) else -depth
        sphere = self.component.loop.sphere
        bottom = self.evaluate(end, 0.0)
        top = self.evaluate(end, 1.0)
        return sphere.lift(tuple(bottom), tol=1e-6), sphere.lift(tuple(top), tol=1e-6)

    def free_end_point(self) -> np.ndarray:
        if self.direction == BOTH:
            raise ValidationError("a two-jump strip has no free end", stage="ev")
        return self.evaluate_disc(complex(self.z1))


def strip_eval(component: StripComponent, theta: float, z1: complex = -1.0 + 0j, grid=None,
               modulus: float = 0.0, tol: float = 1e-9) -> StripMap:
    strip = StripMap(component, float(theta), complex(z1), float(modulus))
    if grid is not None:
        res = strip.check(grid)
        strip.residuals.update(res)
        if res["variety"] > tol or res["boundary_modulus"] > tol or res["blaschke_modulus"] > 1e-12:
            raise NumericalError(f"strip residuals out of tolerance: {res}", stage="strips")
    return strip


# -- evaluation at the free end --------------------------------------------

def _ev_arrays(component: StripComponent, theta, phi):
    """Chart coordinates (a, b) of the free end for z1 = e^{i phi}, vectorized."""
    theta, phi = np.broadcast_arrays(np.asarray(theta, dtype=float), np.asarray(phi, dtype=float))
    sphere = component.loop.sphere
    model = component.model
    z1 = np.exp(1j * phi)
    f, _, _ = model.fgz(z1, 0.0, component.split)
    a = sphere.profile.inverse(np.mod(phi, 2 * np.pi) - np.pi)
    b = np.mod(theta + np.angle(f / sphere.xi(a)), 2 * np.pi)
    return a, b


def ev_free_end(strip: StripMap) -> ChartPoint:
    sphere = strip.component.loop.sphere
    point = strip.free_end_point()
    return sphere.lift(tuple(point), tol=1e-7)


def ev_minus_infinity(strip: StripMap) -> ChartPoint:
    if strip.direction != PLUS:
        raise ValidationError("the -infinity end of this strip is a branch jump", stage="ev")
    return ev_free_end(strip)


def ev_plus_infinity(strip: StripMap) -> ChartPoint:
    if strip.direction != MINUS:
        raise ValidationError("the +infinity end of this strip is a branch jump", stage="ev")
    return ev_free_end(strip)


def _wrap(x):
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi


@dataclass(frozen=True)
class EvSolution:
    theta: float
    z1: complex
    residual: float
    iterations: int
    n_solutions: int


def solve_ev(component: StripComponent, target: ChartPoint, grid: int = 64,
             tol: float = TOL_SOLVE, max_iter: int = MAX_NEWTON) -> EvSolution:
    """Find the unique (theta, z1) whose free end evaluates to ``target``.

    A coarse (theta, phi) scan seeds Newton iterations (finite-difference
    Jacobian); distinct converged roots are counted to confirm uniqueness.
    """
    if component.direction == BOTH:
        raise ValidationError("two-jump strips have no free end", stage="ev")
    if not isinstance(target, ChartPoint):
        raise ValidationError("target must be a chart point", stage="ev")

    def F(x):
        a, b = _ev_arrays(component, x[0], x[1])
        return np.array([float(a) - target.a, float(_wrap(b - target.b))])

    th = np.linspace(0, 2 * np.pi, grid, endpoint=False)
    ph = np.linspace(0, 2 * np.pi, grid + 2)[1:-1]
    TH, PH = np.meshgrid(th, ph, indexing="ij")
    A, B = _ev_arrays(component, TH, PH)
    cost = np.abs(A - target.a) + np.abs(_wrap(B - target.b))
    # local minima of the scan, periodic in theta
    nb = [np.roll(cost, sh, axis=ax) for ax in (0, 1) for sh in (1, -1)]
    is_min = np.all([cost <= c for c in nb], axis=0)
    is_min[:, 0] &= cost[:, 0] <= cost[:, 1]
    is_min[:, -1] &= cost[:, -1] <= cost[:, -2]
    seeds = np.argwhere(is_min)
    seeds = sorted(seeds.tolist(), key=lambda ij: cost[ij[0], ij[1]])[:8]

    roots = []
    worst_iter = 0
    for i, j in seeds:
        x = np.array([TH[i, j], PH[i, j]])
        for it in range(max_iter):
            fx = F(x)
            if np.max(np.abs(fx)) < tol:
                break
            J = np.empty((2, 2))
            for col in range(2):
                dx = np.zeros(2)
                dx[col] = 1e-7
                J[:, col] = (F(x + dx) - F(x - dx)) / 2e-7
            try:
                step = np.linalg.solve(J, fx)
            except np.linalg.LinAlgError:
                break
            x = x - step
            x[0] = np.mod(x[0], 2 * np.pi)
            x[1] = np.clip(x[1], 1e-12, 2 * np.pi - 1e-12)
        else:
            continue
        fx = F(x)
        if np.max(np.abs(fx)) < tol:
            worst_iter = max(worst_iter, it)
            if not any(abs(_wrap(x[0] - r[0])) < 1e-6 and abs(x[1] - r[1]) < 1e-6 for r in roots):
                roots.append((x[0], x[1], float(np.max(np.abs(fx)))))
    if not roots:
        raise NumericalError("evaluation solve did not converge", stage="solve")
    theta, phi, res = roots[0]
    return EvSolution(float(theta), complex(np.exp(1j * phi)), res, worst_iter, len(roots))
