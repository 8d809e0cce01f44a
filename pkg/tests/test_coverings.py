import random
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmkit import (
    Edge,
    GluingMatrix,
    GraphManifold,
    HypothesisError,
    SeifertPiece,
    abs_euler,
    abs_sv,
    check_covering,
    classify,
    dual_graph,
    genus_cover,
    identity_covering,
    property_i_normalize,
    recoordinate_piece,
    separate_self_edges_cover,
    validate,
)
from gmkit.coverings import covering_genus
from strategies import multiple_edge_manifold, random_manifold

A = GluingMatrix(1, 1, 1, 0)


def loop_manifold():
    return GraphManifold.assemble("L", [SeifertPiece("P", 2)], [Edge("e", ("P", 0), ("P", 1), A)])


def test_identity_covering_passes(worked):
    report = check_covering(identity_covering(worked))
    assert report.ok and report.total_degree == 1


def test_corrupted_edge_map_fails_incidence():
    m = multiple_edge_manifold((2, 2), [A, A])
    m3 = GraphManifold.assemble("T", [SeifertPiece("P1", 2), SeifertPiece("P2", 2), SeifertPiece("P3", 2)], [
        Edge("e1", ("P1", 0), ("P2", 0), A),
        Edge("e2", ("P2", 1), ("P3", 0), A),
    ])
    desc = identity_covering(m3)
    bad = replace(desc, edge_map={"e1": "e2", "e2": "e2"})
    report = check_covering(bad)
    assert not report.ok
    assert "incidence" in {v.rule for v in report.violations}
    assert check_covering(identity_covering(m)).ok


def test_wrong_degrees_and_matrices_are_caught(worked):
    desc = identity_covering(worked)
    assert "euler-characteristic" in {v.rule for v in check_covering(replace(desc, horizontal_degree={"P1": 2, "P2": 1})).violations}
    flipped = recoordinate_piece(worked, "P1")
    bad = replace(desc, total_space=flipped)
    assert {v.rule for v in check_covering(bad).violations} == {"characteristic"}
    skew = replace(desc, vertical_degree={"P1": 2, "P2": 1})
    assert "fiber" in {v.rule for v in check_covering(replace(skew, char_m=None)).violations}


def test_separate_single_loop():
    cover, desc = separate_self_edges_cover(loop_manifold())
    g = dual_graph(cover)
    assert len(g.vertices) == 2 and len(g.edges) == 2 and not g.loops()
    assert {(e.source, e.target) for e in g.edges} == {("P.0", "P.1"), ("P.1", "P.0")}
    report = check_covering(desc)
    assert report.ok and report.total_degree == 2


def test_separate_without_loops_is_identity(worked):
    cover, desc = separate_self_edges_cover(worked)
    assert cover == worked and desc.total_degree == 1 and desc.note


def test_separate_two_pieces_one_loop():
    m = GraphManifold.assemble("M", [SeifertPiece("P1", 2), SeifertPiece("P2", 3)], [
        Edge("e1", ("P1", 0), ("P2", 0), A),
        Edge("e2", ("P1", 1), ("P1", 2), -A),
    ])
    cover, desc = separate_self_edges_cover(m)
    # enumerated by hand: e1 lifts to P1.i -> P2.i, the loop e2 to P1.i -> P1.(1-i)
    expected = {
        "e1.0": ("P1.0", "P2.0"), "e1.1": ("P1.1", "P2.1"),
        "e2.0": ("P1.0", "P1.1"), "e2.1": ("P1.1", "P1.0"),
    }
    assert {e.id: (e.source.piece, e.target.piece) for e in cover.edges} == expected
    assert len(cover.pieces) == 4 and not cover.self_edges()
    assert check_covering(desc).ok and desc.total_degree == 2


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_separate_property(seed):
    m = random_manifold(random.Random(seed), min_self_edges=1)
    cover, desc = separate_self_edges_cover(m)
    assert not cover.self_edges()
    report = check_covering(desc)
    assert report.ok, report.violations
    assert report.total_degree == 2
    for x in m.piece_ids:
        assert sum(1 for v in desc.piece_map.values() if v == x) == 2
    for e in m.edges:
        assert sum(1 for v in desc.edge_map.values() if v == e.id) == 2


def test_classify_examples():
    c = classify(multiple_edge_manifold((2, 2), [A, -A, A]))
    assert c.multiple_edge == 3 and c.is_pm_A and not c.is_property_I
    assert classify(multiple_edge_manifold((2, 2), [A, A])).is_property_I
    S = GluingMatrix(0, 1, 1, 0)
    assert classify(multiple_edge_manifold((2, 2), [S, -S])).is_swap_normal_form
    assert not classify(loop_manifold()).is_multiple_edge


def test_classify_uses_common_direction():
    # the second edge is stored P2 -> P1; read from P1 it is A again
    m = multiple_edge_manifold((2, 3), [A, A], directions=[True, False])
    assert m.edges[1].source.piece == "P2"
    assert classify(m).is_property_I


def test_property_i_mixed_signs():
    m = multiple_edge_manifold((2, 2), [A, -A])
    res = property_i_normalize(m)
    assert [e.matrix for e in res.n2.edges] == [A, A]
    assert classify(res.n2).is_property_I
    assert len(res.n1.pieces) == 4 and len(res.n1.edges) == 4
    # double-cover wiring: the +A edge lifts sheet-preserving, the -A edge crosses sheets
    wiring = {e.id: (e.source.piece, e.target.piece) for e in res.n1.edges}
    assert wiring == {
        "e1.0": ("P1.0", "P2.0"), "e1.1": ("P1.1", "P2.1"),
        "e2.0": ("P1.0", "P2.1"), "e2.1": ("P1.1", "P2.0"),
    }
    assert all(e.matrix == A for e in res.n1_prime.edges)
    for desc in res.descriptors:
        report = check_covering(desc)
        assert report.ok, report.violations
        assert report.total_degree == 2


def test_property_i_already_normal():
    m = multiple_edge_manifold((2, 3), [A, A, A])
    res = property_i_normalize(m)
    assert res.n2 == m
    assert all(check_covering(d).ok and d.total_degree == 1 for d in res.descriptors)


def test_property_i_all_negative_matches_recoordination():
    m = multiple_edge_manifold((2, 2), [-A, -A])
    res = property_i_normalize(m, reference=A)
    oracle = recoordinate_piece(m, "P2")
    assert res.n2 == oracle
    assert all(e.matrix == A for e in res.n2.edges)
    assert all(check_covering(d).ok for d in res.descriptors)


def test_property_i_hypotheses():
    with pytest.raises(HypothesisError):
        property_i_normalize(multiple_edge_manifold((2, 2), [A, GluingMatrix(0, 1, 1, 0)]))
    with pytest.raises(HypothesisError):
        property_i_normalize(multiple_edge_manifold((1, 2), [A, -A]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_property_i_random(seed):
    rng = random.Random(seed)
    from strategies import det_minus_one_matrices

    B = rng.choice(det_minus_one_matrices())
    n = rng.randint(1, 5)
    mats = [rng.choice([B, -B]) for _ in range(n)]
    dirs = [rng.random() < 0.5 for _ in range(n)]
    m = multiple_edge_manifold((rng.randint(2, 5), rng.randint(2, 5)), mats, dirs)
    res = property_i_normalize(m)
    assert classify(res.n2).is_property_I
    assert validate(res.n1) == [] and validate(res.n1_prime) == []
    for d in res.descriptors:
        report = check_covering(d)
        assert report.ok, report.violations
        assert d.char_m == 1
    if not res.flipped_edges:
        assert abs_euler(res.n2) == abs_euler(m) and abs_sv(res.n2) == abs_sv(m)


@pytest.mark.parametrize("d, g, expected", [(2, 2, 4), (3, 2, 7), (1, 2, 2)])
def test_genus_cover_values(d, g, expected):
    m = multiple_edge_manifold((g, g), [A] * d)
    cover, desc = genus_cover(m)
    assert [p.genus for p in cover.pieces] == [expected, expected]
    assert all(p.boundary_count == d for p in cover.pieces)
    report = check_covering(desc)
    assert report.ok, report.violations
    assert report.total_degree == d * d
    if d == 1:
        assert cover == m


def test_genus_cover_requires_property_i():
    with pytest.raises(HypothesisError):
        genus_cover(multiple_edge_manifold((2, 2), [A, -A]))


@pytest.mark.parametrize("d", range(1, 8))
@pytest.mark.parametrize("g", range(2, 8))
def test_genus_formula_identity(d, g):
    gp = covering_genus(g, d)
    assert 2 - 2 * gp - d == d * (2 - 2 * g - d)
