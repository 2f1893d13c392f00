from __future__ import annotations

import numpy as np
import pytest
from hypothesis import settings

from anfloer.variety import SurfaceParams, fiber_product, poly_gradient

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


def random_surface_point(params: SurfaceParams, rng: np.random.Generator) -> tuple:
    """Point of {xy = c(z)} with x drawn at random and y solved for."""
    z = complex(rng.uniform(-1, params.N + 2), rng.uniform(-2, 2))
    x = complex(rng.normal(), rng.normal())
    if abs(x) < 0.2:
        x += 0.5
    y = complex(fiber_product(params, z)) / x
    return x, y, z


def random_tangent(params: SurfaceParams, p, rng: np.random.Generator) -> np.ndarray:
    """Random complex vector in ker dP at p."""
    g = poly_gradient(params, p)
    v = rng.normal(size=3) + 1j * rng.normal(size=3)
    return v - np.conj(g) * (g @ v) / np.vdot(g, g)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_gf2_complex(rng: np.random.Generator, n_gens: int):
    """Random complex with d^2 = 0: a sum of cancelling pairs and free
    generators in random degrees, conjugated by random invertible matrices.

    Returns (generators, differentials, expected dimensions).
    """
    from anfloer.gf2 import gf2_matmul

    degrees = list(range(-1, 4))
    gens = {k: [] for k in degrees}
    pairs = []
    expected = {k: 0 for k in degrees}
    left = n_gens
    while left:
        if left >= 2 and rng.random() < 0.6:
            k = int(rng.choice(degrees[:-1]))
            pairs.append((k, len(gens[k]), len(gens[k + 1])))
            gens[k].append(f"a{k}.{len(gens[k])}")
            gens[k + 1].append(f"b{k + 1}.{len(gens[k + 1])}")
            left -= 2
        else:
            k = int(rng.choice(degrees))
            gens[k].append(f"h{k}.{len(gens[k])}")
            expected[k] += 1
            left -= 1
    diffs = {}
    for k in degrees[:-1]:
        d = np.zeros((len(gens[k + 1]), len(gens[k])), dtype=np.int64)
        for deg, i, j in pairs:
            if deg == k:
                d[j, i] = 1
        diffs[k] = d

    def invertible(n):
        while True:
            m = rng.integers(0, 2, (n, n))
            if n == 0 or gf2_rank_brute(m) == n:
                return m

    conj = {k: invertible(len(gens[k])) for k in degrees}
    inv = {k: gf2_inverse(conj[k]) for k in degrees}
    for k in degrees[:-1]:
        if diffs[k].size:
            diffs[k] = gf2_matmul(gf2_matmul(conj[k + 1], diffs[k]), inv[k]).astype(np.uint8)
        else:
            diffs[k] = diffs[k].astype(np.uint8)
    return gens, diffs, expected


def gf2_rank_brute(m) -> int:
    """Rank as log2 of the number of distinct images of all input vectors."""
    m = np.asarray(m, dtype=np.int64) % 2
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return 0
    images = set()
    for code in range(1 << cols):
        v = np.array([(code >> i) & 1 for i in range(cols)], dtype=np.int64)
        images.add(tuple((m @ v) % 2))
    return int(np.log2(len(images)))


def gf2_inverse(m) -> np.ndarray:
    n = len(m)
    a = np.concatenate([np.asarray(m, dtype=np.int64) % 2, np.eye(n, dtype=np.int64)], axis=1)
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r, col])
        a[[col, piv]] = a[[piv, col]]
        for r in range(n):
            if r != col and a[r, col]:
                a[r] ^= a[col]
    return a[:, n:]


def brute_force_cohomology(gens: dict, diffs: dict) -> dict:
    """dim H^k by enumerating every cochain: |ker d_k| / |im d_{k-1}| = 2^dim."""
    out = {}
    for k in sorted(gens):
        n = len(gens[k])
        vecs = [np.array([(c >> i) & 1 for i in range(n)], dtype=np.int64) for c in range(1 << n)]
        d_out = diffs.get(k)
        if d_out is not None and d_out.shape[0]:
            kernel = sum(1 for v in vecs if not np.any((d_out.astype(np.int64) @ v) % 2))
        else:
            kernel = len(vecs)
        d_in = diffs.get(k - 1)
        if d_in is not None and d_in.shape[1] and n:
            m = len(gens[k - 1])
            image = {tuple((d_in.astype(np.int64) @ np.array([(c >> i) & 1 for i in range(m)])) % 2)
                     for c in range(1 << m)}
        else:
            image = {()}
        out[k] = int(round(np.log2(kernel / len(image))))
    return out


# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
