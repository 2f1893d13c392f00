from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anfloer import _pykernels, kernels

try:
    from anfloer import _ckernels
except ImportError:  # fallback-only install
    _ckernels = None

compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _split(z):
    return np.ascontiguousarray(z.real), np.ascontiguousarray(z.imag)


@compiled
@given(st.integers(0, 10_000), st.integers(3, 300))
def test_winding_parity(seed, n):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    p = complex(rng.normal(), rng.normal())
    a = _pykernels.winding_angle_sum(*_split(z), p.real, p.imag)
    b = _ckernels.winding_angle_sum(*_split(z), p.real, p.imag)
    assert np.allclose(a, b, atol=1e-10)


@compiled
@given(st.integers(0, 10_000), st.integers(3, 60), st.booleans())
def test_self_intersection_parity(seed, n, closed):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.uniform(0, 2 * np.pi, n))
    r = 1 + rng.uniform(-0.6, 0.6, n) * rng.integers(0, 2)
    z = r * np.exp(1j * t)
    assert bool(_pykernels.polyline_self_intersects(*_split(z), closed)) == bool(
        _ckernels.polyline_self_intersects(*_split(z), closed))


@compiled
@given(st.integers(0, 10_000), st.integers(1, 40), st.integers(1, 40))
def test_rank_parity(seed, r, c):
    m = np.random.default_rng(seed).integers(0, 2, (r, c), dtype=np.uint8)
    assert int(_pykernels.gf2_rank(m.copy())) == int(_ckernels.gf2_rank(m.copy()))


def test_dispatch_basics():
    assert kernels.BACKEND in ("cython", "python")
    t = np.linspace(0, 1, 400, endpoint=False)
    circle = np.exp(2j * np.pi * t)
    total, step = kernels.winding_angle_sum(circle, 0.1j)
    assert total == pytest.approx(2 * np.pi)
    assert step < 0.1
    assert not kernels.polyline_self_intersects(circle)
    figure_eight = np.sin(2 * np.pi * t) + 1j * np.sin(4 * np.pi * t)
    assert kernels.polyline_self_intersects(figure_eight)
    assert kernels.gf2_rank(np.zeros((0, 3))) == 0
    assert kernels.gf2_rank(np.eye(5, dtype=np.uint8)) == 5


def test_fallback_selected_by_environment():
    import subprocess
    import sys
    code = "import anfloer.kernels as k; print(k.BACKEND)"
    env = {"ANFLOER_PURE_PYTHON": "1", "PATH": "/usr/bin:/bin"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.strip()
    assert out == "python"
