"""The affine surface M = {xy = (z-1)(z-2)...(z-N)} in C^3.

Points are plain complex triples. The symplectic form is the flat one,
omega(u, v) = Im <u, v> with the Hermitian product conjugate-linear in the
first slot, and the primitive is lambda(v) = Im <p, v> / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError

TOL_VARIETY = 1e-9
TOL_TANGENT = 1e-8
TOL_FORM = 1e-10
RK4_STEP = 1e-3


@dataclass(frozen=True)
class SurfaceParams:
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValidationError(f"N must be a positive integer, got {self.N!r}", stage="validate")

    @property
    def roots(self) -> np.ndarray:
        return np.arange(1, self.N + 1, dtype=float)


@dataclass(frozen=True)
class SurfacePoint:
    x: complex
    y: complex
    z: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=complex)

    @classmethod
    def on_variety(cls, params: SurfaceParams, x, y, z, tol: float = TOL_VARIETY) -> "SurfacePoint":
        res = abs(poly_eval(params, (x, y, z)))
        if res > tol:
            raise NumericalError(f"point is off the surface: |P| = {res:.3e}", stage="variety")
        return cls(complex(x), complex(y), complex(z))


@dataclass(frozen=True)
class TangentVector:
    vx: complex
    vy: complex
    vz: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.vz], dtype=complex)


def _triple(p) -> tuple:
    if isinstance(p, SurfacePoint):
        return p.x, p.y, p.z
    if isinstance(p, TangentVector):
        return p.vx, p.vy, p.vz
    x, y, z = p
    return x, y, z


def fiber_product(params: SurfaceParams, z):
    """(z-1)(z-2)...(z-N), vectorized over ``z``."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for k in range(1, params.N + 1):
        out = out * (z - k)
    return out


def fiber_product_derivative(params: SurfaceParams, z):
    """c(z) = sum_j prod_{k != j} (z - k), the derivative of ``fiber_product``."""
    z = np.asarray(z, dtype=complex)
    total = np.zeros_like(z)
    for j in range(1, params.N + 1):
        term = np.ones_like(z)
        for k in range(1, params.N + 1):
            if k != j:
                term = term * (z - k)
        total = total + term
    return total


def poly_eval(params: SurfaceParams, p):
    x, y, z = _triple(p)
    return np.asarray(x, dtype=complex) * y - fiber_product(params, z)


def poly_gradient(params: SurfaceParams, p) -> np.ndarray:
    """(dP/dx, dP/dy, dP/dz) at a single point."""
    x, y, z = _triple(p)
    return np.array([y, x, -fiber_product_derivative(params, z)], dtype=complex)


def dP(params: SurfaceParams, p, v) -> complex:
    return complex(poly_gradient(params, p) @ np.asarray(_triple(v), dtype=complex))


def omega(u, v) -> float:
    """Flat symplectic form on C^3."""
    u = np.asarray(_triple(u), dtype=complex)
    v = np.asarray(_triple(v), dtype=complex)
    return float(np.imag(np.vdot(u, v)))


def liouville(p, v) -> float:
    """Radial primitive of omega: lambda_p(v) = Im <p, v> / 2."""
    return 0.5 * omega(p, v)


def hamiltonians(p) -> tuple[float, float]:
    x, y, z = _triple(p)
    return 0.5 * abs(x) ** 2 - 0.5 * abs(y) ** 2, abs(z) ** 2


def hamiltonian_vector_h1(p) -> np.ndarray:
    """X_{H1} with the convention omega(X_H, .) = dH."""
    x, y, _ = _triple(p)
    return np.array([-1j * x, 1j * y, 0.0], dtype=complex)


def residue_vector(params: SurfaceParams, p, tol: float = 1e-12, slot: int | None = None) -> np.ndarray:
    """A vector V with dP(V) = 1, preferring the z-slot.

    ``slot`` forces a coordinate (used to check independence of the choice).
    """
    grad = poly_gradient(params, p)
    if slot is None:
        if abs(grad[2]) > tol:
            slot = 2
        else:
            slot = int(np.argmax(np.abs(grad)))
    if abs(grad[slot]) <= tol:
        if np.all(np.abs(grad) <= tol):
            raise NumericalError("critical point of P", stage="variety")
        raise NumericalError(f"dP vanishes in slot {slot}", stage="variety")
    V = np.zeros(3, dtype=complex)
    V[slot] = 1.0 / grad[slot]
    return V


def volume_form(params: SurfaceParams, p, v1, v2, slot: int | None = None) -> complex:
    """Holomorphic area form Omega(v1, v2) = (dx ^ dy ^ dz)(V, v1, v2) with dP(V) = 1."""
    V = residue_vector(params, p, slot=slot)
    m = np.array([V, np.asarray(_triple(v1), dtype=complex), np.asarray(_triple(v2), dtype=complex)])
    return complex(np.linalg.det(m))


def squared_phase(params: SurfaceParams, p, v1, v2) -> complex:
    """Det^2_Omega of the real plane spanned by v1, v2 (assumed Lagrangian)."""
    w = volume_form(params, p, v1, v2)
    if abs(w) == 0:
        raise NumericalError("degenerate plane for squared phase", stage="variety")
    return w * w / abs(w) ** 2


def horizontal_lift(params: SurfaceParams, p, lam: complex) -> TangentVector:
    x, y, z = _triple(p)
    s = abs(x) ** 2 + abs(y) ** 2
    if s == 0:
        raise NumericalError("horizontal lift undefined at a critical point of the fibration",
                             stage="variety")
    c = complex(fiber_product_derivative(params, z))
    return TangentVector(c * lam * np.conj(y) / s, c * lam * np.conj(x) / s, complex(lam))


def horizontal_transport(params: SurfaceParams, p, dpath, t0: float = 0.0, t1: float = 1.0,
                         h: float = RK4_STEP) -> np.ndarray:
    """Integrate the horizontal lift of a base path with fixed-step RK4.

    ``dpath(t)`` is the base velocity; the base point itself is carried in the
    z-slot of the state. Returns the (n_steps + 1, 3) array of transported points.
    """
    state = np.asarray(_triple(p), dtype=complex)
    n = max(1, int(round((t1 - t0) / h)))
    dt = (t1 - t0) / n

    def rhs(t, q):
        return horizontal_lift(params, q, dpath(t)).as_array()

    out = [state.copy()]
    t = t0
    for _ in range(n):
        k1 = rhs(t, state)
        k2 = rhs(t + dt / 2, state + dt / 2 * k1)
        k3 = rhs(t + dt / 2, state + dt / 2 * k2)
        k4 = rhs(t + dt, state + dt * k3)
        state = state + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
        out.append(state.copy())
    return np.array(out)
