import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmrank.gmatrix import (ContractError, ConvergenceError, DenseGoogleOperator, GoogleOperator,
                            cheirank, pagerank, power_iterate, read_probabilities,
                            write_rank_vector)
from gmrank.graph import DirectedGraph, parse_edge_list, reverse
from gmrank.synthetic import random_graph

from oracles import dense_google, stationary

CYCLE = parse_edge_list(b"0 1\n1 2\n2 0\n")
CHAIN = parse_edge_list(b"0 1\n")


def test_apply_cycle_uniform():
    op = GoogleOperator(CYCLE)
    np.testing.assert_allclose(op.apply(np.full(3, 1 / 3)), np.full(3, 1 / 3), rtol=0, atol=1e-15)


def test_apply_dangling_column():
    out = GoogleOperator(CHAIN, 0.85).apply(np.array([1.0, 0.0]))
    np.testing.assert_allclose(out, [0.075, 0.925], rtol=0, atol=1e-15)


def test_apply_dimension_mismatch():
    with pytest.raises(ContractError):
        GoogleOperator(CYCLE).apply(np.ones(4) / 4)


def test_alpha_range():
    with pytest.raises(ContractError):
        GoogleOperator(CYCLE, alpha=1.0)


def test_power_iterate_chain_closed_form():
    # P0 = 0.075 P0 + 0.5 P1 with P0 + P1 = 1  =>  P0 = 0.5 / 1.425
    p = pagerank(CHAIN).probabilities
    np.testing.assert_allclose(p, [0.5 / 1.425, 0.925 / 1.425], rtol=0, atol=1e-10)
    np.testing.assert_allclose(p, [0.35088, 0.64912], atol=1e-5)


def test_cycle_uniform_both_ranks():
    np.testing.assert_allclose(pagerank(CYCLE).probabilities, 1 / 3, atol=1e-12)
    np.testing.assert_allclose(cheirank(CYCLE).probabilities, 1 / 3, atol=1e-12)


def test_star_extremes():
    into = parse_edge_list(b"1 0\n2 0\n3 0\n")
    p = pagerank(into).probabilities
    assert p[0] > p[1:].max()
    out = parse_edge_list(b"0 1\n0 2\n0 3\n")
    ps = cheirank(out)
    assert ps.kind == "CheiRank"
    assert ps.probabilities[0] > ps.probabilities[1:].max()


def test_non_convergence_is_explicit():
    g = random_graph(40, 120, np.random.default_rng(1))
    with pytest.raises(ConvergenceError) as err:
        pagerank(g, tol=1e-15, max_iter=3)
    last = err.value.result
    assert not last.converged
    assert last.iterations_used == 3
    assert abs(last.probabilities.sum() - 1) < 1e-12


def test_bad_iteration_parameters():
    op = GoogleOperator(CYCLE)
    with pytest.raises(ContractError):
        power_iterate(op, tol=0)
    with pytest.raises(ContractError):
        power_iterate(op, max_iter=0)


def test_operator_dense_matches_oracle():
    g = parse_edge_list(b"0 1\n0 2\n2 2\n1 3\n")
    edges = list(g.edge_set())
    np.testing.assert_allclose(GoogleOperator(g).dense(), dense_google(4, edges), atol=1e-15)


def test_isolated_dangling_node_keeps_mass():
    base = random_graph(20, 60, np.random.default_rng(3))
    s, t = base.edges()
    g = DirectedGraph.from_edges(s, t, 21)
    rv = pagerank(g)
    assert abs(rv.probabilities.sum() - 1) < 1e-12
    assert rv.probabilities[20] > 0


def test_parallel_matches_sequential():
    g = random_graph(5000, 40000, np.random.default_rng(11))
    seq = pagerank(g, deterministic=True).probabilities
    par = pagerank(g, workers=4).probabilities
    assert np.abs(seq - par).sum() < 1e-9


def test_deterministic_runs_bit_identical():
    g = random_graph(2000, 9000, np.random.default_rng(5))
    a = pagerank(g, deterministic=True).probabilities
    b = pagerank(g, deterministic=True).probabilities
    assert a.tobytes() == b.tobytes()


def test_dense_operator():
    s = np.array([[0.0, 1.0], [1.0, 0.0]])
    op = DenseGoogleOperator(s)
    np.testing.assert_allclose(power_iterate(op).probabilities, [0.5, 0.5], atol=1e-12)


def test_export_roundtrip(tmp_path):
    g = parse_edge_list(b"a b\nc b\nb a\n", id_mode="string")
    rv = pagerank(g)
    path = tmp_path / "pr.tsv"
    with open(path, "w") as fh:
        write_rank_vector(rv, fh, g, header="test")
    lines = path.read_text().splitlines()
    assert lines[0] == "# test"
    assert lines[1].split("\t")[:2] == ["1", "b"]
    with open(path, "rb") as fh:
        probs = read_probabilities(fh)
    np.testing.assert_allclose(probs, np.sort(rv.probabilities)[::-1], rtol=1e-14)


graphs = st.integers(1, 12).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=40)
    .map(lambda e: (n, e)))


@given(graphs, st.floats(0.05, 0.95))
@settings(max_examples=300, deadline=None)
def test_oracle_equivalence_small(data, alpha):
    n, edges = data
    g = DirectedGraph.from_edges([s for s, _ in edges], [t for _, t in edges], n)
    rv = pagerank(g, alpha=alpha, tol=1e-13, max_iter=5000)
    expected = stationary(dense_google(n, edges, alpha))
    assert np.abs(rv.probabilities - expected).sum() < 1e-9
    assert abs(rv.probabilities.sum() - 1) < 1e-12
    assert (rv.probabilities > 0).all()


@given(graphs, st.floats(0.05, 0.95))
@settings(max_examples=200, deadline=None)
def test_apply_preserves_probability(data, alpha):
    n, edges = data
    g = DirectedGraph.from_edges([s for s, _ in edges], [t for _, t in edges], n)
    v = np.random.default_rng(len(edges)).random(n)
    v /= v.sum()
    assert abs(GoogleOperator(g, alpha).apply(v).sum() - 1) < 1e-12


@given(graphs)
@settings(max_examples=100, deadline=None)
def test_residual_contracts(data):
    n, edges = data
    g = DirectedGraph.from_edges([s for s, _ in edges], [t for _, t in edges], n)
    res = pagerank(g).residuals
    assert all(b <= a + 1e-15 for a, b in zip(res, res[1:]))


@given(graphs)
@settings(max_examples=100, deadline=None)
def test_cheirank_is_reversed_pagerank(data):
    n, edges = data
    g = DirectedGraph.from_edges([s for s, _ in edges], [t for _, t in edges], n)
    a = cheirank(g, deterministic=True).probabilities
    b = pagerank(reverse(g), deterministic=True).probabilities
    assert a.tobytes() == b.tobytes()
