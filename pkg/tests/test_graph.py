import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gmrank.graph import DirectedGraph, ParseError, degrees, parse_edge_list, parse_labels, reverse
from gmrank.synthetic import random_graph


def test_three_cycle():
    g = parse_edge_list(b"0 1\n1 2\n2 0\n")
    assert g.node_count == 3
    assert g.edge_count == 3
    k_in, k_out = degrees(g)
    assert k_in.tolist() == [1, 1, 1]
    assert k_out.tolist() == [1, 1, 1]


def test_duplicates_collapse():
    g = parse_edge_list(b"0 1\n0 1\n")
    assert g.node_count == 2
    assert g.edge_set() == {(0, 1)}


def test_string_mode_first_appearance():
    g = parse_edge_list(b"a b\nb c\n", id_mode="string")
    assert g.identifiers == ("a", "b", "c")
    assert g.edge_set() == {(0, 1), (1, 2)}
    assert g.find("c") == 2


def test_comments_blank_lines_and_tabs():
    g = parse_edge_list(b"# header\n\n0\t1\n  # indented comment\n1 0\n")
    assert g.edge_set() == {(0, 1), (1, 0)}


def test_self_loop_kept():
    g = parse_edge_list(b"0 0\n0 1\n")
    assert (0, 0) in g.edge_set()
    assert g.out_degree().tolist() == [2, 0]


def test_dense_ids_define_node_count():
    g = parse_edge_list(b"0 4\n")
    assert g.node_count == 5
    assert g.dangling().tolist() == [1, 2, 3, 4]


@pytest.mark.parametrize("text, line", [
    (b"0 1\n1 2 3\n", 2),
    (b"0\n", 1),
    (b"0 1\n# c\nx 2\n", 3),
    (b"0 -1\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_edge_list(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_reads_path_and_text_stream(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("0 1\n1 2\n")
    assert parse_edge_list(path).edge_set() == {(0, 1), (1, 2)}
    assert parse_edge_list(io.StringIO("0 1\n")).edge_set() == {(0, 1)}


def test_reverse_examples():
    g = parse_edge_list(b"0 1\n1 2\n2 0\n")
    assert reverse(g).edge_set() == {(1, 0), (2, 1), (0, 2)}
    assert reverse(parse_edge_list(b"0 1\n")).edge_set() == {(1, 0)}


def test_reverse_involution_random():
    g = random_graph(50, 200, np.random.default_rng(7))
    rg = reverse(g)
    assert rg.edge_set() == {(t, s) for s, t in g.edge_set()}
    assert reverse(rg).edge_set() == g.edge_set()
    assert rg.node_count == g.node_count


def test_star_degrees():
    g = parse_edge_list(b"0 1\n0 2\n0 3\n")
    k_in, k_out = degrees(g)
    assert k_out.tolist() == [3, 0, 0, 0]
    assert k_in.tolist() == [0, 1, 1, 1]


def test_adjacency_traversal():
    g = parse_edge_list(b"0 2\n0 1\n3 1\n")
    assert g.successors(0).tolist() == [1, 2]
    assert g.predecessors(1).tolist() == [0, 3]


def test_labels(tmp_path):
    g = parse_edge_list(b"0 1\n")
    path = tmp_path / "labels.tsv"
    path.write_text("0\tNapoléon\n1\tJesus\n", encoding="utf-8")
    g = g.with_labels(parse_labels(path, g))
    assert g.labels == {0: "Napoléon", 1: "Jesus"}
    assert g.find("Jesus") == 1
    with pytest.raises(ParseError):
        parse_labels(b"7\tnobody\n", g)


edge_lists = st.integers(1, 30).flatmap(
    lambda n: st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=120)
    .map(lambda e: (n, e)))


@given(edge_lists)
@settings(max_examples=200, deadline=None)
def test_degree_invariants(data):
    n, edges = data
    g = DirectedGraph.from_edges([s for s, _ in edges], [t for _, t in edges], n)
    distinct = set(edges)
    assert g.edge_set() == distinct
    k_in, k_out = degrees(g)
    assert k_in.sum() == k_out.sum() == len(distinct)
    # counting oracle
    for node in range(n):
        assert k_out[node] == sum(1 for s, _ in distinct if s == node)
        assert k_in[node] == sum(1 for _, t in distinct if t == node)
    rk_in, rk_out = degrees(reverse(g))
    assert np.array_equal(rk_in, k_out)
    assert np.array_equal(rk_out, k_in)


@given(edge_lists)
@settings(max_examples=50, deadline=None)
def test_ingestion_idempotent(data):
    n, edges = data
    text = "".join(f"{s} {t}\n" for s, t in edges).encode()
    a, b = parse_edge_list(text), parse_edge_list(text)
    assert a.node_count == b.node_count
    assert np.array_equal(a.out_indices, b.out_indices)
    assert np.array_equal(a.in_indptr, b.in_indptr)
