import numpy as np
import pytest

from l1prominence import errors
from l1prominence.geodesics import all_pairs_shortest, symmetry_constant
from l1prominence.graph import read_graph, write_graph
from l1prominence.ingest import (
    FlowFilter,
    aggregate,
    build_flow_graph,
    parse_count,
    parse_flow_csv,
)
from l1prominence.locality import local_l1_prestige, prestige_neighborhood
from l1prominence.prominence import l1_centrality, l1_prestige, prestige_median


def write(tmp_path, text, name="flows.csv"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_suppressed_count_imputed(tmp_path):
    t = parse_flow_csv(write(tmp_path, "origin,destination,count\nA,B,*\n"))
    assert [(r.origin, r.destination, r.count) for r in t.records] == [("A", "B", 2.0)]


def test_aggregation(tmp_path):
    t = parse_flow_csv(write(tmp_path, "origin,destination,count\nA,B,3\nA,B,4\nB,A,1\n"))
    assert {(r.origin, r.destination): r.count for r in t} == {("A", "B"): 7.0, ("B", "A"): 1.0}
    assert t.regions == ("A", "B")


def test_negative_count(tmp_path):
    with pytest.raises(errors.NegativeCount):
        parse_flow_csv(write(tmp_path, "origin,destination,count\nA,B,-1\n"))


def test_malformed(tmp_path):
    with pytest.raises(errors.MalformedRow) as info:
        parse_flow_csv(write(tmp_path, "origin,destination,count\nA,B,1\nA,B,lots\n"))
    assert info.value.line == 3
    with pytest.raises(errors.MalformedRow):
        parse_flow_csv(write(tmp_path, "origin,count\nA,1\n"))
    with pytest.raises(errors.MalformedRow):
        parse_flow_csv(write(tmp_path, "origin,destination,count\n,B,1\n"))


def test_parse_count():
    assert parse_count(" * ") == 2.0
    assert parse_count("899.94") == 899.94


FILTERED = """origin,destination,count,age,hour,day
A,B,10,25-29,8,mon
A,B,5,20-24,8,mon
A,B,7,60-64,9,tue
A,B,100,65-69,9,tue
A,B,3,30-34,10,mon
A,B,11,30-34,8,sat
"""


def test_filters(tmp_path):
    path = write(tmp_path, FILTERED)
    f = FlowFilter(age_min=25, age_max=64, hour_range=(8, 10), days=frozenset({"mon", "tue"}))
    t = parse_flow_csv(path, f)
    assert [r.count for r in t.records] == [17.0]
    assert parse_flow_csv(path).records[0].count == 136.0


def test_filter_needs_column(tmp_path):
    path = write(tmp_path, "origin,destination,count\nA,B,1\n")
    with pytest.raises(errors.MalformedRow):
        parse_flow_csv(path, FlowFilter(hour_range=(8, 10)))


def test_empty_after_filter(tmp_path):
    path = write(tmp_path, FILTERED)
    with pytest.raises(errors.EmptyAfterFilter):
        parse_flow_csv(path, FlowFilter(days=frozenset({"sun"})))


# -- graph construction ----------------------------------------------------------

def test_reciprocal_weight_and_self_flow():
    t = aggregate([("A", "B", 4), ("B", "A", 1), ("A", "A", 9)])
    g = build_flow_graph(t)
    assert g.edge_list() == [("A", "B", 0.25), ("B", "A", 1.0)]
    assert g.multiplicities.tolist() == [9.0, 0.0]


def test_no_self_flows():
    with pytest.raises(errors.ZeroTotalMultiplicity):
        build_flow_graph(aggregate([("A", "B", 4), ("B", "A", 1)]))


def test_more_moves_shorter_distance():
    g = build_flow_graph(aggregate([("A", "B", 40), ("B", "A", 4), ("A", "A", 1)]))
    D = all_pairs_shortest(g)
    assert D[0, 1] < D[1, 0]


def _flows(seed, n=8):
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        rows.append((f"r{i}", f"r{i}", float(rng.integers(1, 50))))
        rows.append((f"r{i}", f"r{(i + 1) % n}", float(rng.integers(1, 30))))
        for j in range(n):
            if i != j and rng.random() < 0.3:
                rows.append((f"r{i}", f"r{j}", float(rng.integers(1, 30))))
    return rows


@pytest.mark.parametrize("seed", range(5))
def test_count_scaling_leaves_measures_unchanged(seed):
    rows = _flows(seed)
    g1 = build_flow_graph(aggregate(rows))
    g2 = build_flow_graph(aggregate([(o, d, 13.0 * c) for o, d, c in rows]))
    D1, D2 = all_pairs_shortest(g1), all_pairs_shortest(g2)
    S1, S2 = symmetry_constant(D1), symmetry_constant(D2)
    for f in (l1_prestige, l1_centrality):
        np.testing.assert_allclose(f(D1, g1.multiplicities, S1).values, f(D2, g2.multiplicities, S2).values, atol=1e-12)
    assert prestige_median(D1, g1.multiplicities).members == prestige_median(D2, g2.multiplicities).members
    np.testing.assert_allclose(
        local_l1_prestige(D1, g1.multiplicities, S1, 0.5).values,
        local_l1_prestige(D2, g2.multiplicities, S2, 0.5).values,
        atol=1e-12,
    )
    for k in range(g1.n):
        assert (prestige_neighborhood(D1, g1.multiplicities, S1, k, 0.5).members
                == prestige_neighborhood(D2, g2.multiplicities, S2, k, 0.5).members)


def test_serialized_graph_reproduces_distances(tmp_path):
    g = build_flow_graph(aggregate(_flows(3)))
    write_graph(g, tmp_path / "e.csv", tmp_path / "v.csv")
    back = read_graph(tmp_path / "e.csv", tmp_path / "v.csv")
    assert np.array_equal(all_pairs_shortest(back), all_pairs_shortest(g))
