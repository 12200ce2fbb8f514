import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from l1prominence import errors
from l1prominence.fixtures import random_strong_graph
from l1prominence.geodesics import all_pairs_shortest, symmetry_constant
from l1prominence.graph import build_graph
from l1prominence.prominence import (
    centrality_median,
    l1_centrality,
    l1_prestige,
    l1_prestige_matrix_form,
    oracle_prestige,
    prestige_median,
    weighted_distance_sums,
)
from oracles import undirected_l1_centrality


def _instance(seed, n=None, symmetric=False):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(3, 9))
    g = random_strong_graph(n, rng, density=float(rng.uniform(0.1, 0.6)), symmetric=symmetric)
    D = all_pairs_shortest(g)
    return g, D, symmetry_constant(D)


# -- weighted sums and medians --------------------------------------------------

def test_sums_cycle(cycle3):
    g, D, _ = cycle3
    # columns of D are (0, 11, 10), (1, 0, 11), (2, 1, 0)
    np.testing.assert_allclose(weighted_distance_sums(D, g.multiplicities), [21 / 3, 12 / 3, 3 / 3], atol=1e-14)
    np.testing.assert_allclose(
        weighted_distance_sums(D, g.multiplicities, "centrality"), [3 / 3, 12 / 3, 21 / 3], atol=1e-14
    )


def test_sums_single_atom(cycle3):
    _, D, _ = cycle3
    np.testing.assert_array_equal(weighted_distance_sums(D, [1, 0, 0]), D[0])


def test_sums_symmetric_equal():
    g, D, _ = _instance(4, n=6, symmetric=True)
    np.testing.assert_allclose(
        weighted_distance_sums(D, g.multiplicities, "prestige"),
        weighted_distance_sums(D, g.multiplicities, "centrality"),
        rtol=1e-14,
    )


def test_dimension_mismatch(cycle3):
    _, D, S = cycle3
    with pytest.raises(errors.DimensionMismatch):
        l1_prestige(D, [1, 1], S)
    with pytest.raises(errors.DimensionMismatch):
        weighted_distance_sums(D[:2], [1, 1])


def test_median_cycle(cycle3):
    g, D, _ = cycle3
    assert prestige_median(D, g.multiplicities).members == (2,)
    assert centrality_median(D, g.multiplicities).members == (0,)


def test_median_complete_graph_full_tie():
    names = "abcd"
    edges = [(a, b, 1) for a in names for b in names if a != b]
    g = build_graph(names, [1] * 4, edges)
    D = all_pairs_shortest(g)
    assert prestige_median(D, g.multiplicities).members == (0, 1, 2, 3)


@pytest.mark.parametrize("seed", range(10))
def test_heavy_vertex_is_unique_median(seed):
    g, D, S = _instance(seed)
    eta = np.array(g.multiplicities)
    k = seed % len(eta)
    rest = eta.sum() - eta[k]
    # eta_k / eta_tot > 1 / (1 + S)  <=>  eta_k > rest / S
    eta[k] = rest / S * 1.01 + 1e-6
    assert prestige_median(D, eta).members == (k,)


# -- closed form fixtures -------------------------------------------------------

def test_unit_cycle_all_ones():
    g = build_graph("abc", [1] * 3, [("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])
    D = all_pairs_shortest(g)
    np.testing.assert_allclose(l1_prestige(D, g.multiplicities).values, [1, 1, 1], atol=1e-12)


def test_cycle_prestige(cycle3):
    g, D, S = cycle3
    res = l1_prestige(D, g.multiplicities, S)
    assert res.kind == "prestige" and res.alpha == 1.0
    np.testing.assert_allclose(res.values, [8 / 11, 8 / 11, 1], atol=1e-12)


def test_cycle_centrality(cycle3):
    g, D, S = cycle3
    cent = l1_centrality(D, g.multiplicities, S).values
    assert cent[0] == 1.0
    # transpose of the prestige computation: v2 and v3 mirror v2 and v1
    np.testing.assert_allclose(cent, [1, 8 / 11, 8 / 11], atol=1e-12)


def test_pair(pair):
    g, D, S = pair
    assert S == 0.5
    np.testing.assert_allclose(l1_prestige(D, g.multiplicities, S).values, [0.75, 1], atol=1e-12)
    np.testing.assert_allclose(l1_centrality(D, g.multiplicities, S).values, [1, 0.75], atol=1e-12)


def test_symmetry_constant_computed_when_omitted(cycle3):
    g, D, S = cycle3
    np.testing.assert_array_equal(l1_prestige(D, g.multiplicities).values, l1_prestige(D, g.multiplicities, S).values)


def test_single_vertex():
    assert l1_prestige(np.zeros((1, 1)), [2.0]).values.tolist() == [1.0]
    assert l1_prestige_matrix_form(np.zeros((1, 1)), [2.0]).values.tolist() == [1.0]


# -- matrix form ----------------------------------------------------------------

def test_matrix_form_fixtures(cycle3, pair):
    for g, D, S in (cycle3, pair):
        np.testing.assert_allclose(
            l1_prestige_matrix_form(D, g.multiplicities, S).values,
            l1_prestige(D, g.multiplicities, S).values,
            atol=1e-12, rtol=0,
        )


@pytest.mark.parametrize("seed", range(15))
@pytest.mark.parametrize("kind", ["prestige", "centrality"])
def test_matrix_form_random(seed, kind):
    g, D, S = _instance(seed, n=5 + 3 * seed)
    a = l1_prestige(D, g.multiplicities, S, kind).values
    b = l1_prestige_matrix_form(D, g.multiplicities, S, kind).values
    np.testing.assert_allclose(a, b, atol=1e-12, rtol=0)


# -- oracle -----------------------------------------------------------------------

def test_oracle_median_vertex(cycle3):
    g, D, S = cycle3
    assert oracle_prestige(D, g.multiplicities, S, 2) == 1.0


def test_oracle_fixtures(cycle3, pair):
    g, D, S = cycle3
    assert oracle_prestige(D, g.multiplicities, S, 0) == pytest.approx(8 / 11, abs=1e-6)
    g, D, S = pair
    assert oracle_prestige(D, g.multiplicities, S, 0) == pytest.approx(3 / 4, abs=1e-6)
    assert oracle_prestige(D, g.multiplicities, S, 0, kind="centrality") == 1.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), kind=st.sampled_from(["prestige", "centrality"]))
def test_oracle_matches_closed_form(seed, kind):
    g, D, S = _instance(seed)
    closed = l1_prestige(D, g.multiplicities, S, kind).values
    for k in range(g.n):
        assert oracle_prestige(D, g.multiplicities, S, k, kind) == pytest.approx(closed[k], abs=1e-6)


# -- structural properties ------------------------------------------------------

@pytest.mark.parametrize("seed", range(8))
def test_scale_invariance(seed):
    g, D, S = _instance(seed)
    base = l1_prestige(D, g.multiplicities, S).values
    for c in (0.5, 3.0, 1e6):
        h = build_graph(g.names, g.multiplicities, [(a, b, c * w) for a, b, w in g.edge_list()])
        Dc = all_pairs_shortest(h)
        for cp in (0.1, 7.0):
            got = l1_prestige(Dc, cp * g.multiplicities, symmetry_constant(Dc)).values
            np.testing.assert_allclose(got, base, atol=1e-12, rtol=0)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_maximality_and_lower_bound(seed):
    g, D, S = _instance(seed)
    eta = g.multiplicities
    share = eta / eta.sum()
    for kind in ("prestige", "centrality"):
        vals = l1_prestige(D, eta, S, kind).values
        assert np.all((vals >= 0) & (vals <= 1))
        med = set(prestige_median(D, eta).members if kind == "prestige" else centrality_median(D, eta).members)
        top = {k for k in range(g.n) if vals[k] >= 1 - 1e-12}
        assert top == med
        for k in range(g.n):
            if share[k] >= 1 / (1 + S):
                assert vals[k] == 1.0
            assert vals[k] >= min((1 + S) * share[k], 1.0) - 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_undirected_reduction(seed):
    g, D, S = _instance(seed, symmetric=True)
    assert S == 1.0
    pres = l1_prestige(D, g.multiplicities, S).values
    cent = l1_centrality(D, g.multiplicities, S).values
    np.testing.assert_array_equal(pres, cent)
    np.testing.assert_allclose(pres, undirected_l1_centrality(D.tolist(), g.multiplicities.tolist()), atol=1e-12)
