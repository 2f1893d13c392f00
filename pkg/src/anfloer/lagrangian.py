"""Immersed matching spheres over circles in the base of the fibration.

The standard sphere Sigma_{N,r} is the matching cycle over |z| = r with base
point r. A general circle loop (center c, radius R, base point j on the circle)
is handled by the same chart: in cylindrical coordinates (a, b) on S^2,

    z(a)    = c + R w exp(i (f(a) + pi)),   w = (j - c) / R
    iota    = (e^{ib} xi(a), e^{-ib} xi(a), z(a)),
    xi(a)^2 = (z - 1)(z - 2)...(z - N),

with every square-root factor taken on a branch whose cut meets the image
circle only at the base point. For the standard sphere all cuts lie on the
positive real axis with sqrt(-1) = i.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NumericalError, ValidationError
from .variety import (
    SurfaceParams,
    SurfacePoint,
    TOL_VARIETY,
    fiber_product,
    volume_form,
)

TWO_PI = 2.0 * np.pi
TRANSVERSE_TOL = 1e-6


class Pole(enum.Enum):
    """Preimages of the self-intersection point: P at a = pi, Q at a = -pi."""

    P = "P"
    Q = "Q"

    def __str__(self):
        return self.value


P_POLE = Pole.P
Q_POLE = Pole.Q


@dataclass(frozen=True)
class ChartPoint:
    a: float
    b: float

    def __post_init__(self):
        if not -np.pi < self.a < np.pi:
            raise ValidationError(f"chart height a={self.a} must lie strictly inside (-pi, pi)",
                                  stage="chart")


@dataclass(frozen=True)
class BranchPair:
    first: Pole
    second: Pole

    def __post_init__(self):
        if self.first == self.second:
            raise ValidationError("a branch pair needs two distinct poles", stage="validate")

    def reversed(self) -> "BranchPair":
        return BranchPair(self.second, self.first)

    def __str__(self):
        return f"({self.first},{self.second})"


PQ = BranchPair(Pole.P, Pole.Q)
QP = BranchPair(Pole.Q, Pole.P)


# -- square roots ---------------------------------------------------------

def sqrt_pos(w):
    """Square root with the cut on the positive real axis, arg in [0, 2 pi), sqrt(-1) = i."""
    w = np.asarray(w, dtype=complex)
    arg = np.mod(np.angle(w), TWO_PI)
    return np.sqrt(np.abs(w)) * np.exp(0.5j * arg)


def sqrt_cut(w, direction: complex):
    """Square root whose cut is the ray from 0 through ``direction``.

    Equals ``sqrt_pos`` when ``direction`` is a positive real.
    """
    d = complex(direction) / abs(direction)
    return sqrt_pos(np.asarray(w, dtype=complex) / d) * sqrt_pos(d)


# -- profile --------------------------------------------------------------

class ProfileFunction:
    """Odd increasing f on (-pi, pi): identity near 0, pi - cos^2(a/2) near pi.

    The middle stretch is the quintic matching value, slope and curvature at
    both joints, so f is C^2. Monotonicity is checked when constructed.
    """

    def __init__(self, inner: float = 0.3, outer: float = 2.5):
        if not 0 < inner < outer < np.pi:
            raise ValueError("need 0 < inner < outer < pi")
        self.inner = inner
        self.outer = outer
        L = outer - inner
        f1, d1, c1 = self._pole_jet(outer)
        # value, slope, curvature at u = 0 (a = inner) and u = 1 (a = outer), in u-units
        rhs = np.array([inner, 1.0 * L, 0.0, f1, d1 * L, c1 * L * L])
        rows = []
        for u, order in ((0.0, 0), (0.0, 1), (0.0, 2), (1.0, 0), (1.0, 1), (1.0, 2)):
            row = np.zeros(6)
            for n in range(6):
                if n >= order:
                    coef = np.prod(np.arange(n - order + 1, n + 1)) if order else 1.0
                    row[n] = coef * (u ** (n - order) if n - order > 0 else 1.0)
            rows.append(row)
        self._poly = np.polynomial.Polynomial(np.linalg.solve(np.array(rows), rhs))
        self._dpoly = self._poly.deriv()
        grid = np.linspace(0.0, 1.0, 4001)
        if np.any(self._dpoly(grid) <= 0):
            raise ValueError("profile interpolant is not monotone")
        self._table_a = np.linspace(-np.pi, np.pi, 8193)
        self._table_f = self(self._table_a)

    @staticmethod
    def _pole_jet(a):
        rho = np.cos(a / 2) ** 2
        return np.pi - rho, 0.5 * np.sin(a), 0.5 * np.cos(a)

    def __call__(self, a):
        a = np.asarray(a, dtype=float)
        s = np.sign(a)
        t = np.abs(a)
        out = np.where(t <= self.inner, t, 0.0)
        mid = (t > self.inner) & (t < self.outer)
        out = np.where(mid, self._poly((t - self.inner) / (self.outer - self.inner)), out)
        out = np.where(t >= self.outer, np.pi - np.cos(t / 2) ** 2, out)
        return s * out

    def derivative(self, a):
        a = np.asarray(a, dtype=float)
        t = np.abs(a)
        L = self.outer - self.inner
        out = np.where(t <= self.inner, 1.0, 0.0)
        mid = (t > self.inner) & (t < self.outer)
        out = np.where(mid, self._dpoly((t - self.inner) / L) / L, out)
        return np.where(t >= self.outer, 0.5 * np.sin(t), out)

    def inverse(self, value):
        """a with f(a) = value, for value in [-pi, pi]."""
        value = np.clip(np.asarray(value, dtype=float), -np.pi, np.pi)
        a = np.interp(value, self._table_f, self._table_a)
        for _ in range(4):
            d = self.derivative(a)
            step = np.where(d > 1e-12, (self(a) - value) / np.where(d > 1e-12, d, 1.0), 0.0)
            a = np.clip(a - step, -np.pi, np.pi)
        return a


DEFAULT_PROFILE = ProfileFunction()


# -- the sphere -----------------------------------------------------------

@dataclass(frozen=True)
class ImmersedSphere:
    """Matching sphere over a counterclockwise circle through a critical value.

    ``enclosed`` lists the critical values strictly inside the circle.
    """

    params: SurfaceParams
    center: complex
    radius: float
    basepoint: int
    profile: ProfileFunction = field(default=DEFAULT_PROFILE, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.basepoint <= self.params.N:
            raise ValidationError(f"base point {self.basepoint} is not a critical value",
                                  stage="validate")
        if abs(abs(self.basepoint - self.center) - self.radius) > 1e-9 * max(1.0, self.radius):
            raise ValidationError("base point does not lie on the circle", stage="validate")
        for k in range(1, self.params.N + 1):
            if k != self.basepoint and abs(abs(k - self.center) - self.radius) < 1e-3:
                raise ValidationError(f"loop through critical value {k}", stage="validate")

    @property
    def N(self) -> int:
        return self.params.N

    @cached_property
    def unit(self) -> complex:
        return complex(self.basepoint - self.center) / self.radius

    @cached_property
    def enclosed(self) -> tuple[int, ...]:
        return tuple(k for k in range(1, self.N + 1)
                     if k != self.basepoint and abs(k - self.center) < self.radius)

    @cached_property
    def cut_directions(self) -> dict[int, complex]:
        dirs = {}
        for k in range(1, self.N + 1):
            dirs[k] = complex(self.basepoint - k) if k in self.enclosed else complex(k - self.center)
        return dirs

    # chart
    def z_of(self, a):
        f = self.profile(a)
        return self.center + self.radius * self.unit * np.exp(1j * (f + np.pi))

    def dz_da(self, a):
        f = self.profile(a)
        return self.radius * self.unit * 1j * self.profile.derivative(a) * np.exp(1j * (f + np.pi))

    def xi(self, a):
        z = self.z_of(a)
        out = np.ones_like(z)
        for k, d in self.cut_directions.items():
            out = out * sqrt_cut(z - k, d)
        return out

    def dxi_da(self, a):
        z = self.z_of(a)
        dz = self.dz_da(a)
        return self.xi(a) * 0.5 * sum(dz / (z - k) for k in range(1, self.N + 1))

    def evaluate(self, a, b):
        """iota(a, b) as an array (..., 3); vectorized over a and b."""
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        xi = self.xi(a)
        e = np.exp(1j * b)
        return np.stack([e * xi, xi / e, self.z_of(a)], axis=-1)

    def tangent_frame(self, a, b):
        """(d iota / da, d iota / db) at chart points; each (..., 3)."""
        a, b = np.broadcast_arrays(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
        e = np.exp(1j * b)
        dxi = self.dxi_da(a)
        xi = self.xi(a)
        da = np.stack([e * dxi, dxi / e, self.dz_da(a)], axis=-1)
        db = np.stack([1j * e * xi, -1j * xi / e, np.zeros_like(xi)], axis=-1)
        return da, db

    def grading(self, a):
        """Continuous grading theta(a) with exp(2 pi i theta) = Det^2_Omega."""
        return (self.profile(a) + np.angle(self.unit)) / np.pi

    # poles
    def self_intersection(self) -> SurfacePoint:
        return SurfacePoint(0j, 0j, complex(self.basepoint))

    def _pole_sign(self, pole: Pole) -> float:
        return -1.0 if pole is Pole.P else 1.0

    def pole_factor(self, pole: Pole, rho):
        """xi / sqrt(rho) near a pole as a function of rho = cos^2(a/2); smooth at rho = 0."""
        rho = np.asarray(rho, dtype=float)
        s = self._pole_sign(pole)
        j = self.basepoint
        # (exp(-/+ i rho) - 1) / rho, finite at rho = 0
        safe = np.where(rho > 0, rho, 1.0)
        g = np.where(rho > 0, np.expm1(1j * s * rho) / safe, 1j * s)
        out = sqrt_cut(self.radius * self.unit * g, self.cut_directions[j])
        z = j + self.radius * self.unit * (g * rho)
        for k in range(1, self.N + 1):
            if k == j:
                continue
            val = sqrt_cut(z - k, self.cut_directions[k])
            if k in self.enclosed:
                # the limit sits on the cut; take the one-sided value
                lim = s * np.sqrt(abs(j - k)) * sqrt_pos(self.cut_directions[k] / abs(self.cut_directions[k]))
                val = np.where(rho > 0, val, lim)
            out = out * val
        return out

    def evaluate_rectangular(self, pole: Pole, X, Y):
        """Smooth extension over a pole in rectangular coordinates (X, Y) on S^2."""
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        rho = X * X + Y * Y
        s = self._pole_sign(pole)
        Rf = self.pole_factor(pole, rho)
        z = self.basepoint + self.radius * self.unit * np.expm1(1j * s * rho)
        return np.stack([(X + 1j * Y) * Rf, (X - 1j * Y) * Rf, z], axis=-1)

    def pole_frame(self, pole: Pole) -> np.ndarray:
        """Real spanning frame (3, 2) of the branch tangent plane at the self-intersection."""
        k = complex(self.pole_factor(pole, 0.0))
        return np.array([[k, 1j * k], [k, -1j * k], [0, 0]], dtype=complex)

    def pole_grading(self, pole: Pole) -> float:
        return (self._pole_sign(pole) * -np.pi + np.angle(self.unit)) / np.pi

    # inverse chart
    def lift(self, point, tol: float = 1e-7) -> ChartPoint:
        x, y, z = (point.x, point.y, point.z) if isinstance(point, SurfacePoint) else point
        u = (z - self.center) / (self.radius * self.unit)
        if abs(abs(u) - 1) > tol:
            raise NumericalError("point is not over the loop", stage="lift")
        phase = float(np.mod(np.angle(u), TWO_PI))
        a = float(self.profile.inverse(phase - np.pi))
        if not -np.pi < a < np.pi:
            raise NumericalError("point lies over the self-intersection", stage="lift")
        xi = complex(self.xi(a))
        if abs(xi) == 0:
            raise NumericalError("degenerate fiber circle", stage="lift")
        b = float(np.mod(np.angle(x / xi), TWO_PI))
        back = self.evaluate(a, b)
        err = np.max(np.abs(back - np.array([x, y, z])))
        if err > tol * max(1.0, abs(xi)):
            raise NumericalError(f"chart inversion failed (error {err:.2e})", stage="lift")
        return ChartPoint(a, b)


def standard_sphere(params: SurfaceParams, r: int, profile: ProfileFunction = DEFAULT_PROFILE) -> ImmersedSphere:
    if int(r) != r or not 1 <= r <= params.N:
        raise ValidationError(f"r must be an integer in 1..{params.N}, got {r!r}", stage="validate")
    return ImmersedSphere(params, 0j, float(r), int(r), profile)


# -- public operations -----------------------------------------------------

def immersion_eval(params: SurfaceParams, r: int, pt) -> SurfacePoint:
    sphere = standard_sphere(params, r)
    if isinstance(pt, Pole):
        return sphere.self_intersection()
    x, y, z = sphere.evaluate(pt.a, pt.b)
    return SurfacePoint.on_variety(params, x, y, z, tol=TOL_VARIETY * max(1.0, abs(x * y)))


def grading_eval(pt, profile: ProfileFunction = DEFAULT_PROFILE) -> float:
    if pt is Pole.P:
        return 1.0
    if pt is Pole.Q:
        return -1.0
    return float(profile(pt.a) / np.pi)


def _unitary_frame(frame: np.ndarray) -> np.ndarray:
    """Orthonormalize a real frame of a Lagrangian plane (real inner product Re<u, v>)."""
    cols = []
    for k in range(frame.shape[1]):
        v = frame[:, k].astype(complex)
        for c in cols:
            v = v - np.real(np.vdot(c, v)) * c
        n = np.linalg.norm(v)
        if n < 1e-14:
            raise NumericalError("degenerate tangent frame", stage="index")
        cols.append(v / n)
    return np.array(cols).T


def kahler_angles(frame0: np.ndarray, frame1: np.ndarray) -> np.ndarray:
    """Angles alpha_k in (0, 1/2) with plane1 = diag(exp(2 pi i alpha_k)) plane0.

    Multiplying a Lagrangian plane by -1 fixes it, so the angles live mod 1/2.
    The eigenvalues of W W^T with W = A0^* A1 are exp(4 pi i alpha_k).
    """
    A0 = _unitary_frame(frame0)
    A1 = _unitary_frame(frame1)
    W = A0.conj().T @ A1
    eig = np.linalg.eigvals(W @ W.T)
    return np.sort(np.mod(np.angle(eig), TWO_PI) / (4 * np.pi))


@dataclass(frozen=True)
class IndexResult:
    pair: BranchPair
    index: int
    raw: float
    angles: tuple[float, ...]

    @property
    def deviation(self) -> float:
        return abs(self.raw - self.index)


def index_from_planes(frame_first, frame_second, theta_first: float, theta_second: float,
                      pair: BranchPair, dim: int = 2) -> IndexResult:
    """ind(p, q) = n + theta(q) - theta(p) - 2 (sum of angles from T_p to T_q)."""
    alphas = kahler_angles(frame_first, frame_second)
    if np.any(alphas < TRANSVERSE_TOL) or np.any(alphas > 0.5 - TRANSVERSE_TOL):
        raise NumericalError("branches are not transverse", stage="index")
    raw = dim + theta_second - theta_first - 2.0 * float(alphas.sum())
    return IndexResult(pair, int(round(raw)), raw, tuple(float(a) for a in alphas))


def branch_index_details(obj, pair: BranchPair, grading_shift: float = 0.0) -> IndexResult:
    """Index of a branch pair for anything exposing ``pole_frame`` and ``pole_grading``."""
    return index_from_planes(obj.pole_frame(pair.first), obj.pole_frame(pair.second),
                             obj.pole_grading(pair.first) + grading_shift,
                             obj.pole_grading(pair.second) + grading_shift, pair)


def branch_index(params: SurfaceParams, r, pair) -> int:
    obj = standard_sphere(params, r) if not hasattr(r, "pole_frame") else r
    if not isinstance(pair, BranchPair):
        pair = BranchPair(*pair)
    return branch_index_details(obj, pair).index


# -- exactness ------------------------------------------------------------

def liouville_density(params: SurfaceParams, z, dz) -> np.ndarray:
    """lambda(d iota) along b = const for a matching cycle with base path z(s).

    With x = e^{ib} Xi, y = e^{-ib} Xi and Xi^2 = prod (z - k), the x and y terms
    give Im(conj(Xi) Xi') = |prod (z - k)| * Im(sum dz / (z - k)) / 2, which needs
    no square-root branch.
    """
    z = np.asarray(z, dtype=complex)
    dz = np.asarray(dz, dtype=complex)
    mod = np.abs(fiber_product(params, z))
    total = np.zeros(z.shape)
    for k in range(1, params.N + 1):
        total = total + np.imag(dz / (z - k))
    return 0.5 * mod * total + 0.5 * np.imag(np.conj(z) * dz)


def gauss_legendre_integral(func, lo: float, hi: float, tol: float = 1e-11,
                            start_panels: int = 8, max_panels: int = 1 << 14, order: int = 16) -> float:
    """Composite Gauss-Legendre, doubling panels until successive values agree."""
    nodes, weights = np.polynomial.legendre.leggauss(order)

    def composite(panels):
        edges = np.linspace(lo, hi, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        pts = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
        vals = np.asarray(func(pts), dtype=float).reshape(panels, order)
        return float(np.sum(half[:, None] * weights[None, :] * vals))

    panels = start_panels
    prev = composite(panels)
    while panels < max_panels:
        panels *= 2
        cur = composite(panels)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise NumericalError("quadrature did not converge under panel doubling", stage="quadrature")


def sphere_primitive_difference(sphere: ImmersedSphere) -> float:
    """K(P) - K(Q) for dK = iota^* lambda, integrated along the meridian b = 0."""
    return gauss_legendre_integral(
        lambda a: liouville_density(sphere.params, sphere.z_of(a), sphere.dz_da(a)), -np.pi, np.pi)


def exactness_primitive_diff(params: SurfaceParams, r) -> float:
    sphere = standard_sphere(params, r) if not isinstance(r, ImmersedSphere) else r
    return sphere_primitive_difference(sphere)


def latitude_integral(sphere: ImmersedSphere, a: float, n: int = 256) -> float:
    """Integral of iota^* lambda around the latitude circle at height a."""
    b = np.linspace(0, TWO_PI, n, endpoint=False)
    pts = sphere.evaluate(a, b)
    _, db = sphere.tangent_frame(a, b)
    dens = 0.5 * np.imag(np.sum(np.conj(pts) * db, axis=-1))
    return float(dens.sum() * TWO_PI / n)


def special_lagrangian_residual(params: SurfaceParams, r, grid: int | tuple[int, int] = 50) -> float:
    """max |Im(Omega / z)(t1, t2)| over unit tangent frames on a chart grid."""
    sphere = standard_sphere(params, r) if not isinstance(r, ImmersedSphere) else r
    na, nb = (grid, grid) if isinstance(grid, int) else grid
    a = np.linspace(-np.pi, np.pi, na + 2)[1:-1]
    b = np.linspace(0, TWO_PI, nb, endpoint=False)
    A, B = np.meshgrid(a, b, indexing="ij")
    pts = sphere.evaluate(A, B).reshape(-1, 3)
    da, db = sphere.tangent_frame(A, B)
    da = da.reshape(-1, 3)
    db = db.reshape(-1, 3)
    worst = 0.0
    for p, v1, v2 in zip(pts, da, db):
        v1 = v1 / np.linalg.norm(v1)
        v2 = v2 / np.linalg.norm(v2)
        w = volume_form(params, p, v1, v2) / p[2]
        worst = max(worst, abs(w.imag))
    return worst
