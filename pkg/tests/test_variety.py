from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anfloer.errors import NumericalError, ValidationError
from anfloer.variety import (
    TOL_FORM,
    TOL_TANGENT,
    SurfaceParams,
    SurfacePoint,
    dP,
    fiber_product,
    hamiltonian_vector_h1,
    hamiltonians,
    horizontal_lift,
    horizontal_transport,
    omega,
    poly_eval,
    poly_gradient,
    residue_vector,
    squared_phase,
    volume_form,
)

from conftest import random_surface_point, random_tangent


@pytest.mark.parametrize("N,p,val", [(1, (0, 0, 1), 0), (2, (1, 2, 0), 0), (2, (0, 0, 0), -2)])
def test_poly_eval_examples(N, p, val):
    assert poly_eval(SurfaceParams(N), p) == val


def test_params_validation():
    with pytest.raises(ValidationError):
        SurfaceParams(0)
    with pytest.raises(ValidationError):
        SurfaceParams(2.5)


def test_on_variety_rejects_off_surface_points():
    with pytest.raises(NumericalError):
        SurfacePoint.on_variety(SurfaceParams(2), 0, 0, 0)
    assert SurfacePoint.on_variety(SurfaceParams(2), 1, 2, 0).y == 2


def test_hamiltonian_examples():
    assert hamiltonians((1, 1, 0)) == (0, 0)
    assert hamiltonians((0, 0, 2)) == (0, 4)


def test_hamiltonian_vector_convention(rng):
    # omega(X_H1, v) = dH1(v) for H1 = (|x|^2 - |y|^2) / 2
    p = np.array([0.3 + 0.7j, -1.1 + 0.2j, 0.5 - 0.4j])
    for _ in range(10):
        v = rng.normal(size=3) + 1j * rng.normal(size=3)
        dh = np.real(np.conj(p[0]) * v[0]) - np.real(np.conj(p[1]) * v[1])
        assert omega(hamiltonian_vector_h1(p), v) == pytest.approx(dh, abs=1e-12)


@given(st.integers(1, 6), st.integers(0, 10_000))
def test_gradient_matches_finite_differences(N, seed):
    params = SurfaceParams(N)
    rng = np.random.default_rng(seed)
    p = np.array(random_surface_point(params, rng))
    g = poly_gradient(params, p)
    h = 1e-6
    for i in range(3):
        e = np.zeros(3, dtype=complex)
        e[i] = h
        fd = (poly_eval(params, p + e) - poly_eval(params, p - e)) / (2 * h)
        assert abs(fd - g[i]) <= 1e-6 * max(1.0, abs(g[i]))


@given(st.integers(1, 5), st.integers(0, 10_000))
def test_volume_form_independent_of_residue_choice(N, seed):
    params = SurfaceParams(N)
    rng = np.random.default_rng(seed)
    p = random_surface_point(params, rng)
    u = random_tangent(params, p, rng)
    v = random_tangent(params, p, rng)
    ref = volume_form(params, p, u, v)
    for slot in (0, 1):
        other = volume_form(params, p, u, v, slot=slot)
        assert abs(other - ref) < TOL_FORM * max(1.0, abs(ref)) * 100


@given(st.integers(1, 5), st.integers(0, 10_000))
def test_volume_form_bilinear_antisymmetric(N, seed):
    params = SurfaceParams(N)
    rng = np.random.default_rng(seed)
    p = random_surface_point(params, rng)
    u, v, w = (random_tangent(params, p, rng) for _ in range(3))
    a = complex(rng.normal(), rng.normal())
    scale = max(1.0, abs(volume_form(params, p, u, v)), abs(volume_form(params, p, w, v)))
    assert abs(volume_form(params, p, u, v) + volume_form(params, p, v, u)) < 1e-10 * scale
    lhs = volume_form(params, p, u + a * w, v)
    rhs = volume_form(params, p, u, v) + a * volume_form(params, p, w, v)
    assert abs(lhs - rhs) < 1e-10 * scale * max(1.0, abs(a))


def test_volume_form_against_hamiltonian_vector(rng):
    # Omega(X_H1, v) = i dz(v)
    params = SurfaceParams(3)
    for _ in range(20):
        p = random_surface_point(params, rng)
        v = random_tangent(params, p, rng)
        assert abs(volume_form(params, p, hamiltonian_vector_h1(p), v) - 1j * v[2]) < 1e-10


def test_residue_vector_normalised(rng):
    params = SurfaceParams(4)
    p = random_surface_point(params, rng)
    assert dP(params, p, residue_vector(params, p)) == pytest.approx(1)
    with pytest.raises(NumericalError):
        residue_vector(SurfaceParams(2), (0, 0, 1.5))


def test_squared_phase_unit_modulus(rng):
    params = SurfaceParams(2)
    p = random_surface_point(params, rng)
    u, v = random_tangent(params, p, rng), random_tangent(params, p, rng)
    assert abs(squared_phase(params, p, u, v)) == pytest.approx(1)


def test_horizontal_lift(rng):
    params = SurfaceParams(3)
    for _ in range(20):
        p = random_surface_point(params, rng)
        lam = complex(rng.normal(), rng.normal())
        lift = horizontal_lift(params, p, lam).as_array()
        assert abs(dP(params, p, lift)) < TOL_TANGENT
        x, y, _ = p
        assert abs(omega(lift, np.array([1j * x, -1j * y, 0]))) < 1e-10 * max(1, np.abs(lift).max())
        assert abs(omega(lift, 1j * np.array([1j * x, -1j * y, 0]))) < 1e-10 * max(1, np.abs(lift).max())
    assert np.all(horizontal_lift(params, p, 0).as_array() == 0)
    with pytest.raises(NumericalError):
        horizontal_lift(params, (0, 0, 1), 1.0)


def test_transport_preserves_h1():
    params = SurfaceParams(3)
    z0 = 1.5 + 1.0j
    x = 0.8 + 0.3j
    p = (x, complex(fiber_product(params, z0)) / x, z0)
    path = horizontal_transport(params, p, lambda t: 1.0 + 0.0j)
    h1 = [hamiltonians(q)[0] for q in path]
    assert max(h1) - min(h1) < 1e-6
    assert abs(path[-1][2] - (z0 + 1)) < 1e-12
    assert np.abs(poly_eval(params, path.T)).max() < 1e-6
