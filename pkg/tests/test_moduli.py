from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from anfloer.errors import ValidationError
from anfloer.lagrangian import PQ, QP, ChartPoint
from anfloer.lefschetz import MatchingLoop
from anfloer.moduli import (
    BOTH,
    MINUS,
    PLUS,
    BlaschkeProduct,
    BranchData,
    DiscData,
    blaschke_make,
    disc_automorphism,
    ev_free_end,
    ev_minus_infinity,
    ev_plus_infinity,
    fredholm_index,
    glue,
    maslov_combinatorial,
    maslov_from_closing_paths,
    maslov_winding,
    solve_ev,
    strip_components,
    strip_eval,
)
from anfloer.variety import SurfaceParams

BOUNDARY = np.exp(2j * np.pi * np.arange(256) / 256)
discs = st.complex_numbers(max_magnitude=0.95, allow_nan=False, allow_infinity=False)


def component(N, r, direction, split=()):
    for comp in strip_components(SurfaceParams(N), r, directions=(direction,)):
        if comp.split == frozenset(split):
            return comp
    raise KeyError(split)


# -- Blaschke products ----------------------------------------------------

def test_blaschke_examples():
    w = np.array([0.3 + 0.1j, -0.5j, 0.9])
    assert np.allclose(blaschke_make([0])(w), w)
    sq = blaschke_make([0, 0])
    assert np.allclose(sq(w), w * w)
    assert np.allclose(sorted(sq.preimages(1.0), key=lambda z: z.real), [-1, 1])


@given(st.lists(discs, min_size=1, max_size=5), st.floats(0, 2 * np.pi))
def test_blaschke_inner_and_anchored(alphas, phi):
    anchor = np.exp(1j * phi)
    h = blaschke_make(alphas, anchor)
    assert abs(h(anchor) - 1) < 1e-10
    assert np.abs(np.abs(h(BOUNDARY)) - 1).max() < 1e-12
    pre = h.preimages(1.0)
    assert len(pre) == h.degree
    assert np.allclose(h(pre), 1, atol=1e-8)


@given(st.lists(discs, min_size=1, max_size=3), st.lists(discs, min_size=1, max_size=3), discs,
       st.floats(0, 6))
def test_blaschke_closure(a1, a2, c, phase):
    h = blaschke_make(a1) * blaschke_make(a2)
    assert h.degree == len(a1) + len(a2)
    aut = disc_automorphism(c, phase)
    assert np.abs(np.abs(h(BOUNDARY)) - 1).max() < 1e-10
    assert np.abs(np.abs(h(aut(BOUNDARY))) - 1).max() < 1e-10
    assert np.abs(np.abs(aut(h(BOUNDARY))) - 1).max() < 1e-10


def test_blaschke_validation():
    with pytest.raises(ValidationError):
        blaschke_make([1.5])
    with pytest.raises(ValidationError):
        BlaschkeProduct(2.0, ())
    with pytest.raises(ValidationError):
        disc_automorphism(1.0)


# -- components and strips ------------------------------------------------

def test_component_counts():
    assert len(strip_components(SurfaceParams(4), 2, directions=(PLUS,))) == 2
    assert len(strip_components(SurfaceParams(1), 1, directions=(MINUS,))) == 1
    params = SurfaceParams(4)
    loop = MatchingLoop.circle(params, 1, 4.5, 3.5)
    comps = strip_components(params, loop, directions=(MINUS, PLUS))
    assert len(comps) == 16
    assert {c.label() for c in comps if c.direction == PLUS} == {
        "plus:{}", "plus:{2}", "plus:{3}", "plus:{4}", "plus:{2,3}", "plus:{2,4}", "plus:{3,4}",
        "plus:{2,3,4}"}


@pytest.mark.parametrize("N,r", [(2, 2), (4, 3)])
def test_split_factors_unimodular(N, r):
    comp = strip_components(SurfaceParams(N), r)[0]
    for k in comp.enclosed:
        assert np.abs(np.abs(comp.model.factor(k, BOUNDARY)) - 1).max() < 1e-10


@pytest.mark.parametrize("N,r", [(1, 1), (2, 2), (4, 2), (4, 4)])
def test_strip_residuals(N, r):
    for comp in strip_components(SurfaceParams(N), r, directions=(MINUS, PLUS, BOTH)):
        strip = strip_eval(comp, 0.4, np.exp(2.1j), grid=(64, 16), modulus=0.3)
        res = strip.residuals
        assert res["variety"] < 1e-9
        assert res["boundary_modulus"] < 1e-9
        assert res["blaschke_modulus"] < 1e-12
        assert res["boundary_on_loop"] < 1e-9


def test_strip_parameter_validation():
    comp = component(2, 1, PLUS)
    with pytest.raises(ValidationError):
        strip_eval(comp, 0.0, 2.0)
    with pytest.raises(ValidationError):
        strip_eval(comp, 0.0, 1.0)
    with pytest.raises(ValidationError):
        strip_eval(comp, 0.0, -1.0, modulus=1.0)
    with pytest.raises(ValidationError):
        ev_plus_infinity(strip_eval(comp, 0.0))
    with pytest.raises(ValidationError):
        ev_minus_infinity(strip_eval(component(2, 1, MINUS), 0.0))


@pytest.mark.parametrize("N,r,split", [(2, 1, ()), (4, 3, (1,)), (4, 3, (1, 2))])
def test_plus_end_is_a_pq_jump(N, r, split):
    strip = strip_eval(component(N, r, PLUS, split), 0.7, np.exp(2.5j))
    end = strip.evaluate(12.0, 0.5)
    assert np.allclose(end, [0, 0, r], atol=1e-6)
    bottom, top = strip.jump_sides()
    # one side runs into the P branch (a -> pi), the other into Q (a -> -pi)
    assert bottom.a > 3.0 and top.a < -3.0


# -- evaluation maps ------------------------------------------------------

def test_ev_antipodal_phase_zero():
    pt = ev_minus_infinity(strip_eval(component(2, 1, PLUS), 0.0, -1.0))
    assert abs(pt.a) < 1e-9 and abs(np.angle(np.exp(1j * pt.b))) < 1e-9


@given(st.floats(-3, 3))
def test_ev_theta_equivariance(phi):
    comp = component(4, 3, PLUS, (2,))
    base = ev_free_end(strip_eval(comp, 0.2, np.exp(1.9j)))
    moved = ev_free_end(strip_eval(comp, 0.2 + phi, np.exp(1.9j)))
    assert moved.a == pytest.approx(base.a, abs=1e-9)
    assert abs(np.angle(np.exp(1j * (moved.b - base.b - phi)))) < 1e-8


@pytest.mark.parametrize("direction", [PLUS, MINUS])
def test_ev_monotone_in_z1(direction):
    comp = component(4, 2, direction, (1,))
    phis = np.linspace(0.05, 2 * np.pi - 0.05, 60)
    a = [ev_free_end(strip_eval(comp, 0.0, np.exp(1j * p))).a for p in phis]
    assert np.all(np.diff(a) > 0)
    assert a[0] < -2.5 and a[-1] > 2.5


@pytest.mark.parametrize("N,r", [(2, 1), (4, 2), (4, 4)])
def test_solve_ev_unique_per_component(N, r):
    targets = {PLUS: ChartPoint(0.0, np.pi), MINUS: ChartPoint(0.0, 0.0)}
    for comp in strip_components(SurfaceParams(N), r):
        sol = solve_ev(comp, targets[comp.direction])
        assert sol.n_solutions == 1
        pt = ev_free_end(strip_eval(comp, sol.theta, sol.z1))
        target = targets[comp.direction]
        assert abs(pt.a - target.a) < 1e-8
        assert abs(np.angle(np.exp(1j * (pt.b - target.b)))) < 1e-8


def test_solve_ev_rejects_two_jump_strips():
    with pytest.raises(ValidationError):
        solve_ev(component(2, 1, BOTH), ChartPoint(0.0, 0.0))


# -- Maslov and Fredholm indices -------------------------------------------

STRIP_DATA = {
    PLUS: BranchData(plus_end=PQ),
    MINUS: BranchData(minus_end=QP),
    BOTH: BranchData(minus_end=QP, plus_end=PQ),
}


def test_combinatorial_examples():
    assert maslov_combinatorial(DiscData(outgoing=(PQ,))) == 3
    assert maslov_combinatorial(DiscData()) == 2
    assert maslov_combinatorial(STRIP_DATA[BOTH]) == 4
    assert maslov_combinatorial(STRIP_DATA[PLUS]) == 3
    assert fredholm_index(STRIP_DATA[PLUS]) == 3
    # translation leaves the two-parameter family (theta, z1)
    assert fredholm_index(STRIP_DATA[PLUS]) - 1 == 2


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_disc_dimension_count(k):
    data = DiscData(outgoing=(PQ,) * (k + 1), k=k)
    assert fredholm_index(data) == 2 * k + 3
    assert fredholm_index(DiscData(outgoing=(PQ,), k=k + 1)) == fredholm_index(DiscData(outgoing=(PQ,), k=k)) + 1


@pytest.mark.parametrize("N,r,split", [(2, 1, ()), (3, 2, (1,)), (4, 3, (1, 2))])
def test_maslov_winding(N, r, split):
    for direction, want in ((PLUS, 3), (BOTH, 4), (MINUS, 1)):
        strip = strip_eval(component(N, r, direction, split), 0.3, np.exp(2.0j), modulus=0.2)
        value, raw = maslov_winding(strip, raw=True)
        assert value == want and abs(raw - want) < 1e-3
        assert value == maslov_from_closing_paths(STRIP_DATA[direction])
        assert maslov_winding(strip, samples=4000) == value
        if direction != MINUS:
            assert value == maslov_combinatorial(STRIP_DATA[direction])


pairs = st.sampled_from([PQ, QP])


@st.composite
def disc_data(draw):
    inc = tuple(draw(st.lists(pairs, max_size=3)))
    out = tuple(draw(st.lists(pairs, max_size=3)))
    k = draw(st.integers(max(0, len(inc) + len(out) - 1), 6))
    return DiscData(inc, out, k)


@st.composite
def strip_data(draw):
    bottom = tuple(draw(st.lists(st.tuples(st.sampled_from(["in", "out"]), pairs), max_size=2)))
    top = tuple(draw(st.lists(st.tuples(st.sampled_from(["in", "out"]), pairs), max_size=2)))
    return BranchData(draw(st.one_of(st.none(), pairs)), draw(st.one_of(st.none(), pairs)),
                      bottom, top, len(bottom) + draw(st.integers(0, 2)),
                      len(top) + draw(st.integers(0, 2)))


@given(disc_data())
def test_closing_paths_vs_combinatorial_discs(data):
    assert (maslov_from_closing_paths(data) - maslov_combinatorial(data)
            == 2 * (len(data.outgoing) - 1))


@given(strip_data())
def test_closing_paths_vs_combinatorial_strips(data):
    n_out = len(data.boundary("out")) + (data.plus_end is not None)
    assert maslov_from_closing_paths(data) - maslov_combinatorial(data) == 2 * (n_out - 1)


@given(disc_data(), disc_data(), pairs)
def test_gluing_is_additive(a, b, pair):
    a = DiscData(a.incoming, a.outgoing + (pair,), a.k + 1)
    b = DiscData(b.incoming + (pair,), b.outgoing, b.k + 1)
    glued = glue(a, b, pair)
    assert maslov_combinatorial(glued) == maslov_combinatorial(a) + maslov_combinatorial(b)


def test_glue_needs_matching_jumps():
    with pytest.raises(ValidationError):
        glue(DiscData(outgoing=(PQ,)), DiscData(incoming=(QP,)), PQ)
    with pytest.raises(ValidationError):
        DiscData(outgoing=(PQ, PQ, PQ), k=1)
    with pytest.raises(ValidationError):
        BranchData(bottom=(("sideways", PQ),), k0=1)
